#pragma once

/* Reproduction harness: random-geometric-graph feature studies, the worked
 * decomposable-reduction trace, and the registered posterior-recovery
 * experiments, together with their data generators and CSV/JSONL writers. */

#include <chrono>
#include <numeric>

#include "nerve/io.hpp"
#include "nerve/mcmc.hpp"

namespace nerve {

/* quantile of a sample by linear interpolation between order statistics */
inline double quantile_linear(std::vector<double> v, double q) {
    if (v.empty()) throw ConfigError("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("quantile level outside [0,1]");
    std::sort(v.begin(), v.end());
    const double h = q * (static_cast<double>(v.size()) - 1.0);
    const size_t lo = static_cast<size_t>(std::floor(h));
    if (lo + 1 >= v.size()) return v.back();
    const double frac = h - static_cast<double>(lo);
    return v[lo] + (v[lo + 1] - v[lo]) * frac;
}

/* ---- random geometric graph feature counts ---- */

/* adjacency of the proximity graph: edge iff center distance <= 2r */
inline std::vector<VertexSet> rgg_adjacency(const std::vector<Point>& pts, double r) {
    const int n = static_cast<int>(pts.size());
    if (n > kMaxGraphVertices) throw NumericError("vertex capacity exceeded");
    std::vector<VertexSet> adj(static_cast<size_t>(n));
    const double t2 = 4.0 * r * r;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (squared_distance(pts[static_cast<size_t>(i)], pts[static_cast<size_t>(j)]) <= t2) {
                adj[static_cast<size_t>(i)].set(static_cast<size_t>(j));
                adj[static_cast<size_t>(j)].set(static_cast<size_t>(i));
            }
    return adj;
}

inline long count_edges(const std::vector<VertexSet>& adj) {
    long total = 0;
    for (const auto& row : adj) total += static_cast<long>(row.count());
    return total / 2;
}

inline long count_triangles(const std::vector<VertexSet>& adj) {
    const int n = static_cast<int>(adj.size());
    long total = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (!adj[static_cast<size_t>(i)].test(static_cast<size_t>(j))) continue;
            const VertexSet common = adj[static_cast<size_t>(i)] & adj[static_cast<size_t>(j)];
            for (int k = j + 1; k < n; ++k)
                if (common.test(static_cast<size_t>(k))) ++total;
        }
    return total;
}

/* ---- quartile study over point-process and edge-independent baselines ---- */

enum class RggKind { Uniform, Matern, ErdosRenyi };

struct RggRowSpec {
    std::string label;
    RggKind kind = RggKind::Uniform;
    int n = 0;
    double param = 0.0;  // Matern: blocking parameter rho; ErdosRenyi: edge probability
};

struct RggSpec {
    Window window = Window::UnitSquare;
    double r = 0.075;
    int reps = 2500;
    unsigned long long seed = 101;
    std::vector<RggRowSpec> rows;
};

struct QuartileRow {
    std::string label;
    int n = 0;
    double e25 = 0, e50 = 0, e75 = 0;  // edge-count quartiles
    double t25 = 0, t50 = 0, t75 = 0;  // 3-clique-count quartiles
};

struct QuartileTable {
    RggSpec spec;
    std::vector<QuartileRow> rows;
};

/* the 14-row study registered for the feature-count reproduction */
inline RggSpec default_rgg_spec() {
    RggSpec spec;
    spec.window = Window::UnitSquare;
    spec.r = 0.075;
    spec.reps = 2500;
    spec.seed = 101;
    for (int n : {20, 50, 75}) {
        spec.rows.push_back({"Uniform", RggKind::Uniform, n, 0.0});
        spec.rows.push_back({"Matern (0.035)", RggKind::Matern, n, 0.0175});
        if (n != 75) spec.rows.push_back({"Matern (0.050)", RggKind::Matern, n, 0.025});
        spec.rows.push_back({"ER (0.050)", RggKind::ErdosRenyi, n, 0.050});
        spec.rows.push_back({"ER (0.065)", RggKind::ErdosRenyi, n, 0.065});
    }
    return spec;
}

inline QuartileTable rgg_feature_stats(const RggSpec& spec) {
    if (spec.reps < 1) throw ConfigError("feature study needs at least one replicate");
    if (!(spec.r > 0.0)) throw ConfigError("feature study needs a positive radius");
    QuartileTable table;
    table.spec = spec;
    for (size_t row_i = 0; row_i < spec.rows.size(); ++row_i) {
        const RggRowSpec& row = spec.rows[row_i];
        if (row.n < 1) throw ConfigError("feature study rows need n >= 1");
        Rng rng(spec.seed + 7919 * (row_i + 1));
        std::vector<double> edges, triangles;
        edges.reserve(static_cast<size_t>(spec.reps));
        triangles.reserve(static_cast<size_t>(spec.reps));
        for (int rep = 0; rep < spec.reps; ++rep) {
            std::vector<VertexSet> adj;
            if (row.kind == RggKind::ErdosRenyi) {
                const LabeledGraph g = sample_erdos_renyi(row.n, row.param, rng);
                adj = g.adj;
            } else if (row.kind == RggKind::Matern) {
                const VertexConfiguration V =
                    sample_matern3(row.n, row.param, spec.window, rng);
                adj = rgg_adjacency(V.points, spec.r);
            } else {
                const VertexConfiguration V = sample_uniform(row.n, spec.window, rng);
                adj = rgg_adjacency(V.points, spec.r);
            }
            edges.push_back(static_cast<double>(count_edges(adj)));
            triangles.push_back(static_cast<double>(count_triangles(adj)));
        }
        QuartileRow out;
        out.label = row.label;
        out.n = row.n;
        out.e25 = quantile_linear(edges, 0.25);
        out.e50 = quantile_linear(edges, 0.50);
        out.e75 = quantile_linear(edges, 0.75);
        out.t25 = quantile_linear(triangles, 0.25);
        out.t50 = quantile_linear(triangles, 0.50);
        out.t75 = quantile_linear(triangles, 0.75);
        table.rows.push_back(std::move(out));
    }
    return table;
}

/* ---- raw skeleton vs decomposable reduction, edge retention ---- */

struct EdgeComparisonSpec {
    int n = 100;
    double r = 0.05;
    Window window = Window::UnitSquare;
    int reps = 100;
    unsigned long long seed = 202;
};

struct EdgeComparison {
    EdgeComparisonSpec spec;
    std::vector<long> raw_edges, reduced_edges;  // paired per replicate
    double mean_removed_fraction = 0.0;          // among replicates with >= 1 raw edge
};

inline EdgeComparison decomposable_edge_comparison(const EdgeComparisonSpec& spec) {
    if (spec.reps < 1 || spec.n < 1 || !(spec.r > 0.0))
        throw ConfigError("invalid edge-comparison spec");
    EdgeComparison out;
    out.spec = spec;
    Rng rng(spec.seed);
    double frac_sum = 0.0;
    long frac_count = 0;
    for (int rep = 0; rep < spec.reps; ++rep) {
        const VertexConfiguration V = sample_uniform(spec.n, spec.window, rng);
        const long raw = count_edges(rgg_adjacency(V.points, spec.r));
        const Filtration F = build_filtration(V.points, NerveClass{NerveKind::Cech, 2}, 2, spec.r);
        const LabeledGraph G = decomposable_from_filtration(F);
        const long kept = static_cast<long>(G.edges.size());
        out.raw_edges.push_back(raw);
        out.reduced_edges.push_back(kept);
        if (raw > 0) {
            frac_sum += static_cast<double>(raw - kept) / static_cast<double>(raw);
            ++frac_count;
        }
    }
    out.mean_removed_fraction = frac_count ? frac_sum / static_cast<double>(frac_count) : 0.0;
    return out;
}

/* ---- embedded demonstration fixtures ---- */

/* five-vertex set for the nerve factorization demonstrations */
inline std::vector<Point> nerve_demo_vertices() {
    return {Point(0.2065, 0.3149), Point(0.6383, -0.1193), Point(0.9225, -0.2544),
            Point(-0.8863, 0.0816), Point(0.3043, -0.9310)};
}

/* five-vertex set for the worked decomposable-reduction trace */
inline std::vector<Point> trace_demo_vertices() {
    return {Point(0.686, 0.151), Point(0.214, 0.194), Point(0.846, 0.420),
            Point(0.411, 0.567), Point(0.089, 0.553)};
}

/* six-vertex set for the hypergraph factorization demonstration */
inline std::vector<Point> hypergraph_demo_vertices() {
    return {Point(-0.0936, 0.6340), Point(-0.4817, 0.7876), Point(0.0019, 0.0055),
            Point(0.0930, 0.0351),  Point(0.2605, -0.0702), Point(-0.5028, 0.2839)};
}

/* Worked trace on the embedded fixture, truncated at internal radius 0.25.
 * Reported radii use the distance scale (twice the internal ball radius). */
inline std::vector<TraceRow> run_table3_trace() {
    const Filtration F =
        build_filtration(trace_demo_vertices(), NerveClass{NerveKind::Cech, 2}, 2, 0.25);
    std::vector<TraceRow> rows = clique_separator_trace(F);
    for (auto& row : rows) row.radius *= 2.0;
    return rows;
}

/* ---- registered posterior-recovery experiments ---- */

struct ExperimentSpec {
    std::string id;
    BackendKind backend = BackendKind::ClaytonJT;
    NerveClass nerve{NerveKind::Alpha, 2};
    double r = 0.3;
    bool decomposable = true;
    PointProcessPrior prior;
    int n_vars = 0;
    std::vector<std::vector<int>> true_blocks;  // 0-based generating structure
    Mat precision;                              // Gaussian generator only
    double theta_true = 4.0;
    int n_obs = 0;
    ProposalConfig proposal;
    long burn_in = 0;  // desk-scale value; full-length runs use 10x
    long n_samples = 0;
    long thin = 1;
    double theta_init = 1.0;
    int normalizer_samples = 200000;  // hypergraph backend only
    unsigned long long data_seed = 0, chain_seed = 0;
};

namespace detail {

inline ProposalConfig standard_mixture(int n) {
    ProposalConfig cfg;
    cfg.eta = 0.02;
    cfg.beta = 0.5;
    cfg.w_local = 0.85;
    cfg.w_subset.assign(static_cast<size_t>(n), 0.0);
    cfg.w_subset.front() = 0.05;
    cfg.w_subset.back() = 0.10;
    return cfg;
}

inline PointProcessPrior uniform_ball_prior(int dim) {
    PointProcessPrior prior;
    prior.kind = PriorKind::UniformBall;
    prior.window = dim == 3 ? Window::UnitBall3 : Window::UnitBall2;
    return prior;
}

inline LabeledGraph graph_from_blocks(int n, const std::vector<std::vector<int>>& blocks) {
    LabeledGraph G(n);
    for (const auto& b : blocks)
        for (size_t i = 0; i < b.size(); ++i)
            for (size_t j = i + 1; j < b.size(); ++j) G.add_edge(b[i], b[j]);
    return G;
}

inline Mat gaussian_demo_precision() {
    const double rows[6][6] = {
        {18.18, -6.55, 0.0, 2.26, -6.27, 0.0},  {-6.55, 14.21, 0.0, -4.90, 0.0, 0.0},
        {0.0, 0.0, 10.47, 0.0, 0.0, -3.65},     {2.26, -4.90, 0.0, 10.69, 0.0, 0.0},
        {-6.27, 0.0, 0.0, 0.0, 27.26, 0.0},     {0.0, 0.0, -3.65, 0.0, 0.0, 7.41}};
    Mat K(6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) K.at(i, j) = rows[i][j];
    return K;
}

}  // namespace detail

inline const std::vector<ExperimentSpec>& experiment_registry() {
    static const std::vector<ExperimentSpec> registry = [] {
        std::vector<ExperimentSpec> reg;

        {  // ten-variable junction-tree recovery
            ExperimentSpec e;
            e.id = "ex1";
            e.backend = BackendKind::ClaytonJT;
            e.nerve = NerveClass{NerveKind::Alpha, 2};
            e.r = 0.30;
            e.decomposable = true;
            e.prior = detail::uniform_ball_prior(2);
            e.n_vars = 10;
            e.true_blocks = {{0, 3, 9}, {0, 7, 9}, {3, 4}, {7, 8}, {1, 2, 8}, {5}, {6}};
            e.theta_true = 4.0;
            e.n_obs = 250;
            e.proposal = detail::standard_mixture(10);
            e.burn_in = 2500;
            e.n_samples = 1000;
            e.data_seed = 1101;
            e.chain_seed = 2101;
            reg.push_back(std::move(e));
        }

        {  // six-variable Gaussian marginal-likelihood recovery
            ExperimentSpec e;
            e.id = "ex2-gauss";
            e.backend = BackendKind::GaussianHIW;
            e.nerve = NerveClass{NerveKind::Cech, 2};
            e.r = 0.25;
            e.decomposable = true;
            e.prior = detail::uniform_ball_prior(2);
            e.n_vars = 6;
            e.true_blocks = {{0, 1, 3}, {0, 4}, {2, 5}};
            e.precision = detail::gaussian_demo_precision();
            e.n_obs = 300;
            e.proposal = detail::standard_mixture(6);
            e.burn_in = 75000;
            e.n_samples = 1000;
            e.data_seed = 1102;
            e.chain_seed = 2102;
            reg.push_back(std::move(e));
        }

        for (int strauss = 0; strauss < 2; ++strauss) {  // hypergraph recovery, two priors
            ExperimentSpec e;
            e.id = strauss ? "ex3-strauss" : "ex3-unif";
            e.backend = BackendKind::ClaytonHypergraph;
            e.nerve = NerveClass{NerveKind::Alpha, 2};
            e.r = 0.40;
            e.decomposable = false;
            if (strauss) {
                e.prior.kind = PriorKind::StraussFixedN;
                e.prior.window = Window::UnitBall2;
                e.prior.gamma = 0.75;
                e.prior.R = 0.28;
            } else {
                e.prior = detail::uniform_ball_prior(2);
            }
            e.n_vars = 6;
            e.true_blocks = {{0, 1}, {0, 5}, {1, 5}, {2, 3, 4}};
            e.theta_true = 4.0;
            e.n_obs = 650;
            e.proposal.eta = 0.020;
            e.proposal.beta = 0.5;
            e.proposal.w_local = 0.94;
            e.proposal.w_subset.assign(6, 0.01);
            e.burn_in = 9500;
            e.n_samples = 5000;
            e.normalizer_samples = 20000;  // desk-scale importance-sample count
            e.data_seed = 1103;
            e.chain_seed = strauss ? 2104 : 2103;
            reg.push_back(std::move(e));
        }

        struct Variant { const char* tag; NerveKind kind; int dim; };
        const Variant variants[] = {{"alpha2", NerveKind::Alpha, 2},
                                    {"alpha3", NerveKind::Alpha, 3},
                                    {"cech2", NerveKind::Cech, 2}};
        for (int model = 1; model <= 2; ++model) {  // five-variable class comparison
            for (size_t vi = 0; vi < 3; ++vi) {
                ExperimentSpec e;
                e.id = "ex4-m" + std::to_string(model) + "-" + variants[vi].tag;
                e.backend = BackendKind::ClaytonJT;
                e.nerve = NerveClass{variants[vi].kind, variants[vi].dim};
                e.r = 0.40;
                e.decomposable = true;
                e.prior = detail::uniform_ball_prior(variants[vi].dim);
                e.n_vars = 5;
                e.true_blocks = model == 1
                                    ? std::vector<std::vector<int>>{{0, 2}, {1, 2, 3}, {4}}
                                    : std::vector<std::vector<int>>{{0, 1, 3}, {0, 2, 3}, {0, 3, 4}};
                e.theta_true = 4.0;
                e.n_obs = 300;
                e.proposal = detail::standard_mixture(5);
                e.burn_in = model == 1 ? 5000 : 7500;
                e.n_samples = 1000;
                e.data_seed = model == 1 ? 1105 : 1106;
                e.chain_seed = 2105 + (static_cast<unsigned long long>(model) - 1) * 3 + vi;
                reg.push_back(std::move(e));
            }
        }
        return reg;
    }();
    return registry;
}

inline const ExperimentSpec& find_experiment(const std::string& id) {
    for (const auto& e : experiment_registry())
        if (e.id == id) return e;
    throw ConfigError("unknown experiment id: " + id);
}

/* ---- synthetic data generators ---- */

/* Generator for the cyclic hypergraph structure {1,2}{1,6}{2,6}{3,4,5}:
 * draw (x1,x2) from the pair copula (coordinates kept above a small floor),
 * draw x6 from the conditional proportional to the (1,6) and (2,6) factors by
 * numeric CDF inversion, draw (x3,x4,x5) from the triple copula, and weight
 * each draw by the conditional's normalizer; resample with replacement. */
inline DataMatrix generate_cyclic_hypergraph_data(double theta, int N, Rng& rng,
                                                  int pool_factor = 20,
                                                  double floor_trunc = 0.01) {
    DataMatrix data;
    data.names = {"x1", "x2", "x3", "x4", "x5", "x6"};
    if (N == 0) return data;
    if (N < 0) throw ConfigError("negative sample count");

    const int grid_m = 512;
    const double h = 1.0 / grid_m;
    std::vector<double> mid(grid_m);
    for (int i = 0; i < grid_m; ++i) mid[static_cast<size_t>(i)] = (i + 0.5) * h;
    const auto [gl_x, gl_w] = gauss_legendre(200);

    const long pool_n = static_cast<long>(pool_factor) * N;
    std::vector<std::array<double, 6>> pool;
    std::vector<double> weight;
    pool.reserve(static_cast<size_t>(pool_n));
    weight.reserve(static_cast<size_t>(pool_n));
    std::vector<double> cell(static_cast<size_t>(grid_m));
    for (long s = 0; s < pool_n; ++s) {
        std::vector<double> x12;
        do {
            x12 = sample_clayton(2, theta, rng);
        } while (x12[0] < floor_trunc || x12[1] < floor_trunc);

        double z = 0.0;  // normalizer of the x6 conditional
        for (size_t j = 0; j < gl_x.size(); ++j)
            z += gl_w[j] * std::exp(clayton_log_density({x12[0], gl_x[j]}, theta) +
                                    clayton_log_density({x12[1], gl_x[j]}, theta));

        double total = 0.0;
        for (int i = 0; i < grid_m; ++i) {
            cell[static_cast<size_t>(i)] =
                std::exp(clayton_log_density({x12[0], mid[static_cast<size_t>(i)]}, theta) +
                         clayton_log_density({x12[1], mid[static_cast<size_t>(i)]}, theta)) *
                h;
            total += cell[static_cast<size_t>(i)];
        }
        double u = rng.uniform01() * total;
        int pick = grid_m - 1;
        for (int i = 0; i < grid_m; ++i) {
            if (u <= cell[static_cast<size_t>(i)]) { pick = i; break; }
            u -= cell[static_cast<size_t>(i)];
        }
        const double frac = cell[static_cast<size_t>(pick)] > 0.0
                                ? std::min(1.0, std::max(0.0, u / cell[static_cast<size_t>(pick)]))
                                : 0.5;
        double x6 = (pick + frac) * h;
        x6 = std::min(std::nextafter(1.0, 0.0), std::max(std::nextafter(0.0, 1.0), x6));

        const std::vector<double> x345 = sample_clayton(3, theta, rng);
        pool.push_back({x12[0], x12[1], x345[0], x345[1], x345[2], x6});
        weight.push_back(z);
    }

    std::vector<double> cum(weight.size());
    std::partial_sum(weight.begin(), weight.end(), cum.begin());
    const double total_w = cum.back();
    if (!(total_w > 0.0)) throw NumericError("importance resampling weights degenerate");
    for (int i = 0; i < N; ++i) {
        const double u = rng.uniform01() * total_w;
        const size_t idx = static_cast<size_t>(
            std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
        const auto& row = pool[std::min(idx, pool.size() - 1)];
        data.rows.emplace_back(row.begin(), row.end());
    }
    return data;
}

inline DataMatrix generate_example_data(const ExperimentSpec& spec, Rng& rng) {
    switch (spec.backend) {
        case BackendKind::ClaytonJT: {
            const LabeledGraph G = detail::graph_from_blocks(spec.n_vars, spec.true_blocks);
            const JunctionTree jt = junction_tree(G);
            return sample_junction_tree_model(jt, spec.theta_true, spec.n_obs, rng);
        }
        case BackendKind::GaussianHIW:
            return sample_gaussian_model(spec.precision, spec.n_obs, rng);
        case BackendKind::ClaytonHypergraph:
            return generate_cyclic_hypergraph_data(spec.theta_true, spec.n_obs, rng);
        case BackendKind::Flat: break;
    }
    throw ConfigError("experiment has no data generator");
}

/* ---- experiment execution ---- */

inline Json experiment_to_json(const ExperimentSpec& spec, bool full_length) {
    Json prior;
    switch (spec.prior.kind) {
        case PriorKind::UniformBall: prior = {{"kind", "uniform-ball"}}; break;
        case PriorKind::UniformSquare: prior = {{"kind", "uniform-square"}}; break;
        case PriorKind::Matern3:
            prior = {{"kind", "matern3"}, {"rho", spec.prior.rho}};
            break;
        case PriorKind::StraussFixedN:
            prior = {{"kind", "strauss"}, {"gamma", spec.prior.gamma}, {"R", spec.prior.R}};
            break;
    }
    const char* backend = spec.backend == BackendKind::ClaytonJT ? "clayton-jt"
                          : spec.backend == BackendKind::ClaytonHypergraph ? "clayton-hypergraph"
                          : spec.backend == BackendKind::GaussianHIW ? "gaussian-hiw"
                                                                     : "flat";
    const char* nerve = spec.nerve.kind == NerveKind::Cech ? "cech"
                        : spec.nerve.kind == NerveKind::Alpha ? "alpha"
                                                              : "delaunay";
    Json j{{"id", spec.id},
           {"backend", backend},
           {"nerve", nerve},
           {"dim", spec.nerve.dim},
           {"r", spec.r},
           {"decomposable", spec.decomposable},
           {"prior", prior},
           {"n_vars", spec.n_vars},
           {"true_blocks", detail::simplex_list_json(spec.true_blocks)},
           {"theta_true", spec.theta_true},
           {"n_obs", spec.n_obs},
           {"proposal",
            {{"eta", spec.proposal.eta},
             {"w_local", spec.proposal.w_local},
             {"w_subset", spec.proposal.w_subset},
             {"beta", spec.proposal.beta}}},
           {"burn_in", full_length ? spec.burn_in * 10 : spec.burn_in},
           {"desk_scale", !full_length},
           {"n_samples", spec.n_samples},
           {"thin", spec.thin},
           {"theta_init", spec.theta_init},
           {"data_seed", spec.data_seed},
           {"chain_seed", spec.chain_seed}};
    if (spec.backend == BackendKind::ClaytonHypergraph)
        j["normalizer_samples"] = spec.normalizer_samples;
    if (spec.backend == BackendKind::GaussianHIW) {
        std::vector<std::vector<double>> rows;
        for (int i = 0; i < spec.precision.n; ++i) {
            std::vector<double> row;
            for (int k = 0; k < spec.precision.n; ++k) row.push_back(spec.precision.at(i, k));
            rows.push_back(std::move(row));
        }
        j["precision"] = rows;
    }
    return j;
}

struct ExampleResult {
    ExperimentSpec spec;
    bool full_length = false;
    ChainTrace trace;
    std::vector<std::pair<std::string, double>> tally;
    std::string true_structure;
    int true_rank = 0;  // 1-based rank of the generating structure; 0 if never sampled
    double seconds = 0.0;
};

inline ExampleResult run_example(const ExperimentSpec& spec, bool full_length = false) {
    const auto start = std::chrono::steady_clock::now();
    Rng data_rng(spec.data_seed);
    const DataMatrix data = generate_example_data(spec, data_rng);

    ModelBackend backend;
    backend.kind = spec.backend;
    if (spec.backend == BackendKind::GaussianHIW) {
        backend.hiw.delta = 3.0;
        backend.hiw.D = Mat::identity(spec.n_vars);
        for (int i = 0; i < spec.n_vars; ++i)
            for (int j = 0; j < spec.n_vars; ++j) backend.hiw.D.at(i, j) = i == j ? 1.0 : 0.6;
    }
    if (spec.backend == BackendKind::ClaytonHypergraph)
        backend.normalizer.samples = spec.normalizer_samples;

    const long burn = full_length ? spec.burn_in * 10 : spec.burn_in;
    const long steps = burn + spec.n_samples * spec.thin;
    Rng chain_rng(spec.chain_seed);
    ExampleResult result;
    result.spec = spec;
    result.full_length = full_length;
    result.trace = run_posterior_chain(data, backend, spec.prior, spec.proposal, steps, burn,
                                       spec.thin, spec.nerve, spec.r, spec.decomposable,
                                       chain_rng, spec.theta_init);
    result.tally = topology_tally(result.trace);
    result.true_structure = factorization_string(spec.true_blocks);
    for (size_t i = 0; i < result.tally.size(); ++i)
        if (result.tally[i].first == result.true_structure) {
            result.true_rank = static_cast<int>(i) + 1;
            break;
        }
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

inline ExampleResult run_example(const std::string& id, bool full_length = false) {
    return run_example(find_experiment(id), full_length);
}

/* ---- writers: every file embeds the resolved spec and seed ---- */

namespace detail {

inline void open_or_throw(std::ofstream& out, const std::string& path) {
    out.open(path);
    if (!out) throw ConfigError("cannot write output file: " + path);
}

}  // namespace detail

inline Json rgg_spec_to_json(const RggSpec& spec) {
    Json rows = Json::array();
    for (const auto& row : spec.rows) {
        const char* kind = row.kind == RggKind::Uniform ? "uniform"
                           : row.kind == RggKind::Matern ? "matern3"
                                                         : "erdos-renyi";
        rows.push_back({{"label", row.label}, {"kind", kind}, {"n", row.n}, {"param", row.param}});
    }
    return Json{{"window", spec.window == Window::UnitSquare ? "unit-square"
                           : spec.window == Window::UnitBall2 ? "unit-ball-2"
                                                              : "unit-ball-3"},
                {"r", spec.r},
                {"reps", spec.reps},
                {"seed", spec.seed},
                {"rows", rows}};
}

inline void write_quartile_csv(const std::string& path, const QuartileTable& table) {
    std::ofstream out;
    detail::open_or_throw(out, path);
    out << "# spec " << rgg_spec_to_json(table.spec).dump() << '\n';
    out << "label,n,edges_q25,edges_q50,edges_q75,cliques3_q25,cliques3_q50,cliques3_q75\n";
    for (const auto& row : table.rows) {
        out << '"' << row.label << "\"," << row.n << ',' << format_double(row.e25) << ','
            << format_double(row.e50) << ',' << format_double(row.e75) << ','
            << format_double(row.t25) << ',' << format_double(row.t50) << ','
            << format_double(row.t75) << '\n';
    }
}

inline void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows,
                            const Json& header) {
    std::ofstream out;
    detail::open_or_throw(out, path);
    out << "# spec " << header.dump() << '\n';
    out << "row,radius,edge,accepted,cliques,separators\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        const TraceRow& row = rows[i];
        out << (i + 1) << ',' << format_double(row.radius) << ',';
        if (!row.initial) {
            out << (row.accepted ? "" : "~") << '(' << (row.edge.first + 1) << '-'
                << (row.edge.second + 1) << ')';
        }
        out << ',' << (row.initial ? "" : (row.accepted ? "1" : "0")) << ",\""
            << factorization_string(row.cliques) << "\",\"" << factorization_string(row.separators)
            << '"'
            << '\n';
    }
}

inline void write_tally_csv(const std::string& path,
                            const std::vector<std::pair<std::string, double>>& tally,
                            const Json& header) {
    std::ofstream out;
    detail::open_or_throw(out, path);
    out << "# spec " << header.dump() << '\n';
    out << "structure,frequency\n";
    for (const auto& [key, freq] : tally) out << '"' << key << "\"," << format_double(freq) << '\n';
}

inline void write_edge_comparison_csv(const std::string& path, const EdgeComparison& cmp) {
    std::ofstream out;
    detail::open_or_throw(out, path);
    out << "# spec "
        << Json{{"n", cmp.spec.n}, {"r", cmp.spec.r}, {"reps", cmp.spec.reps},
                {"seed", cmp.spec.seed},
                {"mean_removed_fraction", cmp.mean_removed_fraction}}
               .dump()
        << '\n';
    out << "replicate,raw_edges,decomposable_edges\n";
    for (size_t i = 0; i < cmp.raw_edges.size(); ++i)
        out << (i + 1) << ',' << cmp.raw_edges[i] << ',' << cmp.reduced_edges[i] << '\n';
}

inline Json example_summary_json(const ExampleResult& result) {
    Json tally = Json::array();
    for (size_t i = 0; i < result.tally.size() && i < 12; ++i)
        tally.push_back({{"structure", result.tally[i].first},
                         {"frequency", result.tally[i].second},
                         {"rank", i + 1}});
    return Json{{"id", result.spec.id},
                {"resolved_spec", experiment_to_json(result.spec, result.full_length)},
                {"true_structure", result.true_structure},
                {"true_rank", result.true_rank},
                {"mode", result.tally.empty() ? "" : result.tally.front().first},
                {"mode_frequency", result.tally.empty() ? 0.0 : result.tally.front().second},
                {"v_acceptance", result.trace.v_acceptance_rate()},
                {"theta_acceptance", result.trace.theta_acceptance_rate()},
                {"structure_switches", result.trace.structure_switches},
                {"n_samples", result.trace.samples.size()},
                {"seconds", result.seconds},
                {"top_structures", tally}};
}

inline void write_example_outputs(const std::string& out_dir, const ExampleResult& result) {
    const Json spec_json = experiment_to_json(result.spec, result.full_length);
    write_trace_jsonl(out_dir + "/" + result.spec.id + "_trace.jsonl", result.trace, spec_json);
    write_tally_csv(out_dir + "/" + result.spec.id + "_tally.csv", result.tally, spec_json);
    std::ofstream out;
    detail::open_or_throw(out, out_dir + "/" + result.spec.id + "_summary.json");
    out << example_summary_json(result).dump(2) << '\n';
}

}  // namespace nerve
