#pragma once

/* Metropolis/Hastings machinery over point configurations: reflecting local
 * moves on the unit ball, hybrid local/redraw proposal mixtures, the theta
 * random walk, and the prior/posterior chains over induced structures. */

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>

#include "nerve/models.hpp"
#include "nerve/priors.hpp"

namespace nerve {

struct ProposalConfig {
    double eta = 0.02;              // local diffusion scale
    double w_local = 0.85;          // probability of moving every vertex locally
    std::vector<double> w_subset;   // w_subset[k-1]: redraw a uniform size-k subset;
                                    // the last entry (k = n) is the full redraw
    double beta = 0.5;              // theta-walk half-width
};

inline void validate_proposal(const ProposalConfig& cfg, int n, bool require_global) {
    if (!(cfg.eta > 0.0)) throw ConfigError("proposal: eta must be positive");
    if (!(cfg.beta > 0.0)) throw ConfigError("proposal: beta must be positive");
    if (static_cast<int>(cfg.w_subset.size()) != n)
        throw ConfigError("proposal: subset-redraw weights must have one entry per vertex count");
    double sum = cfg.w_local;
    if (cfg.w_local < 0.0) throw ConfigError("proposal: negative mixture weight");
    for (double w : cfg.w_subset) {
        if (w < 0.0) throw ConfigError("proposal: negative mixture weight");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-9) throw ConfigError("proposal: mixture weights must sum to 1");
    if (require_global && !(cfg.w_subset.back() > 0.0))
        throw ConfigError("proposal: inference chains need positive full-redraw weight");
}

/* x reflected (as many times as necessary) into [0,1] */
inline double reflect_unit(double x) { return std::fabs(x - 2.0 * std::floor((x + 1.0) / 2.0)); }

namespace detail {

inline Point uniform_direction(int d, Rng& rng) {
    if (d == 2) {
        const double phi = rng.uniform(0.0, 2.0 * M_PI);
        return Point(std::cos(phi), std::sin(phi));
    }
    for (;;) {
        const double gx = rng.normal(), gy = rng.normal(), gz = rng.normal();
        const double g = std::sqrt(gx * gx + gy * gy + gz * gz);
        if (g > 1e-12) return Point(gx / g, gy / g, gz / g);
    }
}

}  // namespace detail

/* Reflecting spherical random walk on the unit ball: the radius moves in the
 * volume coordinate rho^d (reflected into [0,1]), the angles take
 * normal increments scaled by eta/rho. Degenerate starts (the exact origin,
 * or a d=3 point at a pole) fall back to a fresh uniform direction. */
inline Point local_step(const Point& v, double eta, Rng& rng) {
    const int d = v.dim;
    const double rho = norm(v);
    const double zr = rng.normal();
    const double rho_star = std::pow(reflect_unit(std::pow(rho, d) + zr * eta), 1.0 / d);
    if (rho < 1e-300) {
        const Point dir = detail::uniform_direction(d, rng);
        return d == 2 ? Point(rho_star * dir[0], rho_star * dir[1])
                      : Point(rho_star * dir[0], rho_star * dir[1], rho_star * dir[2]);
    }
    if (d == 2) {
        const double phi = std::atan2(v[1], v[0]) + rng.normal() * eta / rho;
        return Point(rho_star * std::cos(phi), rho_star * std::sin(phi));
    }
    const double cos_pol = std::min(1.0, std::max(-1.0, v[2] / rho));
    const double polar = std::acos(cos_pol);
    if (std::sin(polar) < 1e-6) {
        const Point dir = detail::uniform_direction(3, rng);
        return Point(rho_star * dir[0], rho_star * dir[1], rho_star * dir[2]);
    }
    const double polar_star = polar + rng.normal() * eta / rho;
    const double az_star = std::atan2(v[1], v[0]) + rng.normal() * eta / (rho * std::sin(polar));
    return Point(rho_star * std::sin(polar_star) * std::cos(az_star),
                 rho_star * std::sin(polar_star) * std::sin(az_star),
                 rho_star * std::cos(polar_star));
}

struct Proposal {
    VertexConfiguration V;
    double log_kernel_ratio = 0.0;  // every mixture component is symmetric or state-free
    char move = 'l';                // 'l' local, 's' subset redraw, 'g' full redraw
};

inline Proposal hybrid_propose(const VertexConfiguration& V, const ProposalConfig& cfg, Rng& rng) {
    if (V.window == Window::UnitSquare)
        throw ConfigError("hybrid proposals are defined on the unit ball");
    const int n = V.n();
    validate_proposal(cfg, n, false);
    Proposal out;
    out.V = V;
    const double u = rng.uniform01();
    if (u < cfg.w_local) {
        for (auto& p : out.V.points) p = local_step(p, cfg.eta, rng);
        out.move = 'l';
        return out;
    }
    double acc = cfg.w_local;
    int k = n;  // rounding fallthrough lands on the full redraw
    for (int size = 1; size <= n; ++size) {
        acc += cfg.w_subset[static_cast<size_t>(size - 1)];
        if (u < acc) { k = size; break; }
    }
    std::vector<int> idx(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
    for (int i = 0; i < k; ++i) {
        const int j = i + rng.uniform_int(n - i);
        std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
        out.V.points[static_cast<size_t>(idx[static_cast<size_t>(i)])] =
            detail::uniform_point(V.window, rng);
    }
    out.move = (k == n) ? 'g' : 's';
    return out;
}

/* reflecting random walk on (0, inf) */
inline double theta_step(double theta, double beta, Rng& rng) {
    return std::fabs(theta + rng.uniform(-beta, beta));
}

/* ---- induced structures ---- */

enum class StructureMode { GraphRaw, GraphDecomposable, Hypergraph };

struct Structure {
    std::vector<std::vector<int>> blocks;  // cliques (graph modes) or maximal simplices
    LabeledGraph G;                        // graph modes only
    JunctionTree jt;                       // GraphDecomposable only
    std::string key;                       // canonical factorization string
};

inline SimplicialComplex nerve_complex(const VertexConfiguration& V, const NerveClass& nerve,
                                       double r, int max_card) {
    switch (nerve.kind) {
        case NerveKind::Cech: return cech_complex(V.points, r, std::max(2, max_card));
        case NerveKind::Alpha: return alpha_complex(V.points, r);
        case NerveKind::Delaunay: return delaunay_complex(V.points);
    }
    throw ConfigError("unknown nerve kind");
}

inline Structure compute_structure(const VertexConfiguration& V, const NerveClass& nerve, double r,
                                   StructureMode mode) {
    Structure s;
    if (mode == StructureMode::GraphDecomposable) {
        const Filtration F = build_filtration(V.points, nerve, 2, r);
        s.G = decomposable_from_filtration(F);
        s.jt = junction_tree(s.G);
        s.blocks = s.jt.cliques;
    } else if (mode == StructureMode::GraphRaw) {
        const SimplicialComplex K = nerve_complex(V, nerve, r, 2);
        s.G = from_skeleton(p_skeleton(K, 1));
        s.blocks = cliques(s.G);
    } else {
        const SimplicialComplex K = nerve_complex(V, nerve, r, V.n());
        for (const auto& m : maximal_simplices(K)) s.blocks.push_back(m);
    }
    s.key = factorization_string(s.blocks);
    return s;
}

/* ---- chains ---- */

struct TraceRecord {
    long iteration = 0;
    std::string structure;
    std::vector<std::vector<int>> blocks;
    double theta = 0.0;
    double log_like = 0.0;
    char move = 'l';
    bool v_accepted = false;
    bool theta_accepted = false;
};

struct ChainTrace {
    std::vector<TraceRecord> samples;
    long v_proposals = 0, v_accepts = 0;
    long theta_proposals = 0, theta_accepts = 0;
    long structure_switches = 0;  // accepted V-moves that changed the structure

    double v_acceptance_rate() const {
        return v_proposals ? static_cast<double>(v_accepts) / v_proposals : 0.0;
    }
    double theta_acceptance_rate() const {
        return theta_proposals ? static_cast<double>(theta_accepts) / theta_proposals : 0.0;
    }
};

struct ChainState {
    VertexConfiguration V;
    double theta = 1.0;
    double log_like = 0.0;
    Structure structure;
};

enum class BackendKind { ClaytonJT, ClaytonHypergraph, GaussianHIW, Flat };

struct ModelBackend {
    BackendKind kind = BackendKind::ClaytonJT;
    HIWHyper hiw;                  // GaussianHIW
    NormalizerConfig normalizer;   // ClaytonHypergraph
};

inline bool backend_has_theta(BackendKind k) {
    return k == BackendKind::ClaytonJT || k == BackendKind::ClaytonHypergraph;
}

namespace detail {

inline double backend_log_likelihood(const DataMatrix& data, const ModelBackend& backend,
                                     const Structure& s, double theta, NormalizerCache& cache) {
    switch (backend.kind) {
        case BackendKind::ClaytonJT: return jt_log_likelihood(data, s.jt, theta);
        case BackendKind::ClaytonHypergraph:
            return hypergraph_log_likelihood(data, s.blocks, theta, cache, backend.normalizer);
        case BackendKind::GaussianHIW: return hiw_log_marginal(data, s.G, backend.hiw);
        case BackendKind::Flat: return 0.0;
    }
    throw ConfigError("unknown backend kind");
}

/* accept iff log H >= 0 (no randomness consumed) or log U < log H */
inline bool mh_accept(double log_h, Rng& rng) {
    if (log_h >= 0.0) return true;
    return std::log(unit_open_uniform(rng)) < log_h;
}

inline double prior_log_density_or_throw(const PointProcessPrior& prior,
                                         const VertexConfiguration& V) {
    const auto d = log_density(prior, V);
    if (!d) throw ConfigError("chains need a prior with an evaluable density (uniform or Strauss)");
    return *d;
}

}  // namespace detail

inline ChainTrace run_prior_chain(const PointProcessPrior& prior, int n, const ProposalConfig& cfg,
                                  long steps, long burn_in, long thin, const NerveClass& nerve,
                                  double r, Rng& rng,
                                  StructureMode mode = StructureMode::GraphRaw) {
    validate_prior(prior);
    validate_proposal(cfg, n, true);
    if (thin < 1 || burn_in < 0 || steps < 0) throw ConfigError("invalid chain lengths");
    VertexConfiguration V = sample_prior(prior, n, rng);
    double log_p = detail::prior_log_density_or_throw(prior, V);
    ChainTrace trace;
    std::string last_key;
    for (long t = 1; t <= steps; ++t) {
        Proposal prop = hybrid_propose(V, cfg, rng);
        const double log_p_star = detail::prior_log_density_or_throw(prior, prop.V);
        const double log_h = (log_p_star - log_p) + prop.log_kernel_ratio;
        ++trace.v_proposals;
        bool acc = false;
        if (detail::mh_accept(log_h, rng)) {
            acc = true;
            ++trace.v_accepts;
            V = std::move(prop.V);
            log_p = log_p_star;
        }
        if (t > burn_in && (t - burn_in) % thin == 0) {
            const Structure s = compute_structure(V, nerve, r, mode);
            TraceRecord rec;
            rec.iteration = t;
            rec.structure = s.key;
            rec.blocks = s.blocks;
            rec.move = prop.move;
            rec.v_accepted = acc;
            trace.samples.push_back(std::move(rec));
            if (!last_key.empty() && last_key != s.key) ++trace.structure_switches;
            last_key = s.key;
        }
    }
    return trace;
}

inline ChainTrace run_posterior_chain(const DataMatrix& data, const ModelBackend& backend,
                                      const PointProcessPrior& prior, const ProposalConfig& cfg,
                                      long steps, long burn_in, long thin, const NerveClass& nerve,
                                      double r, bool decomposable, Rng& rng,
                                      double theta_init = 1.0) {
    validate_prior(prior);
    const int n = data.cols();
    validate_proposal(cfg, n, true);
    if (thin < 1 || burn_in < 0 || steps < 0) throw ConfigError("invalid chain lengths");
    if (backend.kind == BackendKind::GaussianHIW && !decomposable)
        throw ConfigError("the Gaussian backend requires the decomposable reduction");
    if (backend.kind == BackendKind::ClaytonJT && !decomposable)
        throw ConfigError("the junction-tree backend requires the decomposable reduction");
    if (backend.kind == BackendKind::ClaytonHypergraph && decomposable)
        throw ConfigError("the hypergraph backend works on raw nerves");
    if (backend_has_theta(backend.kind)) {
        for (const auto& row : data.rows)
            for (double v : row)
                if (!(v > 0.0 && v < 1.0))
                    throw NumericError("copula data must lie strictly inside (0,1)");
    }
    const StructureMode mode =
        decomposable ? StructureMode::GraphDecomposable
                     : (backend.kind == BackendKind::ClaytonHypergraph ? StructureMode::Hypergraph
                                                                       : StructureMode::GraphRaw);
    const bool has_theta = backend_has_theta(backend.kind);

    NormalizerCache normalizers;                          // persistent across theta moves
    std::unordered_map<std::string, double> like_cache;   // per-theta, keyed by structure

    ChainState state;
    state.V = sample_prior(prior, n, rng);
    state.theta = has_theta ? theta_init : 0.0;
    state.structure = compute_structure(state.V, nerve, r, mode);
    state.log_like = detail::backend_log_likelihood(data, backend, state.structure, state.theta,
                                                    normalizers);
    like_cache[state.structure.key] = state.log_like;
    double log_p = detail::prior_log_density_or_throw(prior, state.V);

    ChainTrace trace;
    for (long t = 1; t <= steps; ++t) {
        /* (a) configuration move */
        Proposal prop = hybrid_propose(state.V, cfg, rng);
        Structure s_star = compute_structure(prop.V, nerve, r, mode);
        double ll_star;
        const auto hit = like_cache.find(s_star.key);
        if (hit != like_cache.end())
            ll_star = hit->second;
        else {
            ll_star = detail::backend_log_likelihood(data, backend, s_star, state.theta, normalizers);
            like_cache.emplace(s_star.key, ll_star);
        }
        const double log_p_star = detail::prior_log_density_or_throw(prior, prop.V);
        const double log_h = (ll_star - state.log_like) + (log_p_star - log_p) +
                             prop.log_kernel_ratio;
        ++trace.v_proposals;
        bool v_acc = false;
        if (detail::mh_accept(log_h, rng)) {
            v_acc = true;
            ++trace.v_accepts;
            if (s_star.key != state.structure.key) ++trace.structure_switches;
            state.V = std::move(prop.V);
            state.structure = std::move(s_star);
            state.log_like = ll_star;
            log_p = log_p_star;
        }

        /* (b) association-parameter move under the unit-exponential prior */
        bool t_acc = false;
        if (has_theta) {
            const double theta_star = theta_step(state.theta, cfg.beta, rng);
            const double ll_theta = detail::backend_log_likelihood(data, backend, state.structure,
                                                                   theta_star, normalizers);
            const double log_h_theta = (ll_theta - state.log_like) + (state.theta - theta_star);
            ++trace.theta_proposals;
            if (detail::mh_accept(log_h_theta, rng)) {
                t_acc = true;
                ++trace.theta_accepts;
                state.theta = theta_star;
                state.log_like = ll_theta;
                like_cache.clear();  // cached likelihoods belong to the old theta
                like_cache[state.structure.key] = state.log_like;
            }
        }

        if (t > burn_in && (t - burn_in) % thin == 0) {
            TraceRecord rec;
            rec.iteration = t;
            rec.structure = state.structure.key;
            rec.blocks = state.structure.blocks;
            rec.theta = state.theta;
            rec.log_like = state.log_like;
            rec.move = prop.move;
            rec.v_accepted = v_acc;
            rec.theta_accepted = t_acc;
            trace.samples.push_back(std::move(rec));
        }
    }
    return trace;
}

/* exact-match tally of canonical structures, sorted by descending frequency */
inline std::vector<std::pair<std::string, double>> topology_tally(const ChainTrace& trace) {
    if (trace.samples.empty()) throw ConfigError("topology_tally: empty trace");
    std::map<std::string, long> counts;
    for (const auto& rec : trace.samples) ++counts[rec.structure];
    std::vector<std::pair<std::string, double>> out;
    for (const auto& [key, c] : counts)
        out.emplace_back(key, static_cast<double>(c) / static_cast<double>(trace.samples.size()));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

inline void write_trace_jsonl(const std::string& path, const ChainTrace& trace, const Json& header) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write trace file: " + path);
    out << Json{{"resolved_spec", header}}.dump() << '\n';
    for (const auto& rec : trace.samples) {
        Json j{{"iteration", rec.iteration}, {"structure", rec.structure},
               {"theta", rec.theta},         {"log_like", rec.log_like},
               {"move", std::string(1, rec.move)},
               {"v_accepted", rec.v_accepted}, {"theta_accepted", rec.theta_accepted}};
        out << j.dump() << '\n';
    }
}

}  // namespace nerve
