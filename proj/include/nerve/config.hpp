#pragma once

/* Declarative run configuration: a single JSON document with nested blocks
 * (nerve, prior, model, chain, io). The schema is validated up front and
 * unknown keys are rejected recursively so typos fail fast. */

#include <set>

#include "nerve/experiments.hpp"

namespace nerve {

struct RunConfig {
    unsigned long long seed = 0;

    NerveClass nerve{NerveKind::Cech, 2};
    double r = 0.0;
    int max_card = 0;  // 0 = all cardinalities

    bool has_prior = false;
    PointProcessPrior prior;
    int n_vertices = 0;

    bool has_model = false;
    BackendKind backend = BackendKind::Flat;
    double theta_init = 1.0;
    double theta_true = 4.0;
    int n_obs = 0;
    std::vector<std::vector<int>> true_blocks;  // 0-based after parsing
    Mat precision;
    double hiw_delta = 3.0;
    double hiw_d_diag = 1.0, hiw_d_offdiag = 0.0;
    int normalizer_samples = 200000;

    bool has_chain = false;
    ProposalConfig proposal;
    long steps = 0, burn_in = 0, thin = 1;
    bool decomposable = false;

    std::string data_path;
    std::string out_dir = ".";
};

namespace detail {

inline void reject_unknown_keys(const Json& obj, const std::string& block,
                                const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError("config block '" + block + "' must be an object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw ConfigError("unknown key '" + item.key() + "' in config block '" + block + "'");
}

inline double config_num(const Json& obj, const std::string& block, const std::string& key) {
    if (!obj.contains(key))
        throw ConfigError("config block '" + block + "' is missing required key '" + key + "'");
    const Json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError("config key '" + block + "." + key + "' must be a number");
    return v.get<double>();
}

inline double config_num_or(const Json& obj, const std::string& block, const std::string& key,
                            double fallback) {
    return obj.contains(key) ? config_num(obj, block, key) : fallback;
}

inline std::string config_str(const Json& obj, const std::string& block, const std::string& key) {
    if (!obj.contains(key))
        throw ConfigError("config block '" + block + "' is missing required key '" + key + "'");
    const Json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError("config key '" + block + "." + key + "' must be a string");
    return v.get<std::string>();
}

inline long config_int(const Json& obj, const std::string& block, const std::string& key,
                       long fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_number_integer())
        throw ConfigError("config key '" + block + "." + key + "' must be an integer");
    return v.get<long>();
}

inline NerveKind parse_nerve_kind(const std::string& s) {
    if (s == "cech") return NerveKind::Cech;
    if (s == "alpha") return NerveKind::Alpha;
    if (s == "delaunay") return NerveKind::Delaunay;
    throw ConfigError("unknown nerve class '" + s + "' (expected cech|alpha|delaunay)");
}

inline BackendKind parse_backend_kind(const std::string& s) {
    if (s == "clayton-jt") return BackendKind::ClaytonJT;
    if (s == "clayton-hypergraph") return BackendKind::ClaytonHypergraph;
    if (s == "gaussian-hiw") return BackendKind::GaussianHIW;
    if (s == "flat") return BackendKind::Flat;
    throw ConfigError("unknown model backend '" + s + "'");
}

}  // namespace detail

inline RunConfig parse_run_config(const Json& j) {
    detail::reject_unknown_keys(j, "(top level)", {"seed", "nerve", "prior", "model", "chain", "io"});
    RunConfig cfg;
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0)
            throw ConfigError("config key 'seed' must be a nonnegative integer");
        cfg.seed = j.at("seed").get<unsigned long long>();
    }

    if (j.contains("nerve")) {
        const Json& b = j.at("nerve");
        detail::reject_unknown_keys(b, "nerve", {"class", "dim", "r", "max_card"});
        cfg.nerve.kind = detail::parse_nerve_kind(detail::config_str(b, "nerve", "class"));
        const long dim = detail::config_int(b, "nerve", "dim", 2);
        if (dim != 2 && dim != 3) throw ConfigError("nerve.dim must be 2 or 3");
        cfg.nerve.dim = static_cast<int>(dim);
        cfg.r = detail::config_num_or(b, "nerve", "r", 0.0);
        cfg.max_card = static_cast<int>(detail::config_int(b, "nerve", "max_card", 0));
        if (cfg.max_card < 0) throw ConfigError("nerve.max_card must be >= 0");
    }

    if (j.contains("prior")) {
        const Json& b = j.at("prior");
        cfg.has_prior = true;
        const std::string kind = detail::config_str(b, "prior", "kind");
        if (kind == "uniform-ball" || kind == "uniform-square") {
            detail::reject_unknown_keys(b, "prior", {"kind", "n"});
            cfg.prior.kind =
                kind == "uniform-ball" ? PriorKind::UniformBall : PriorKind::UniformSquare;
        } else if (kind == "strauss") {
            detail::reject_unknown_keys(b, "prior", {"kind", "n", "gamma", "R"});
            cfg.prior.kind = PriorKind::StraussFixedN;
            cfg.prior.gamma = detail::config_num(b, "prior", "gamma");
            cfg.prior.R = detail::config_num(b, "prior", "R");
        } else if (kind == "matern3") {
            detail::reject_unknown_keys(b, "prior", {"kind", "n", "rho"});
            cfg.prior.kind = PriorKind::Matern3;
            cfg.prior.rho = detail::config_num(b, "prior", "rho");
        } else {
            throw ConfigError("unknown prior kind '" + kind + "'");
        }
        cfg.n_vertices = static_cast<int>(detail::config_int(b, "prior", "n", 0));
        cfg.prior.window = cfg.prior.kind == PriorKind::UniformSquare
                               ? Window::UnitSquare
                               : (cfg.nerve.dim == 3 ? Window::UnitBall3 : Window::UnitBall2);
        validate_prior(cfg.prior);
    }

    if (j.contains("model")) {
        const Json& b = j.at("model");
        cfg.has_model = true;
        detail::reject_unknown_keys(b, "model",
                                    {"backend", "theta_init", "theta_true", "n_obs", "true_blocks",
                                     "precision", "delta", "D_diag", "D_offdiag",
                                     "normalizer_samples"});
        cfg.backend = detail::parse_backend_kind(detail::config_str(b, "model", "backend"));
        cfg.theta_init = detail::config_num_or(b, "model", "theta_init", 1.0);
        cfg.theta_true = detail::config_num_or(b, "model", "theta_true", 4.0);
        cfg.n_obs = static_cast<int>(detail::config_int(b, "model", "n_obs", 0));
        if (cfg.n_obs < 0) throw ConfigError("model.n_obs must be >= 0");
        if (b.contains("true_blocks")) {
            cfg.true_blocks = detail::simplex_list_from_json(b.at("true_blocks"), "true_blocks");
        }
        if (b.contains("precision")) {
            const Json& p = b.at("precision");
            if (!p.is_array() || p.empty()) throw ConfigError("model.precision must be a matrix");
            const int n = static_cast<int>(p.size());
            cfg.precision = Mat(n);
            for (int i = 0; i < n; ++i) {
                const Json& row = p.at(static_cast<size_t>(i));
                if (!row.is_array() || static_cast<int>(row.size()) != n)
                    throw ConfigError("model.precision must be square");
                for (int k = 0; k < n; ++k) {
                    if (!row.at(static_cast<size_t>(k)).is_number())
                        throw ConfigError("model.precision entries must be numbers");
                    cfg.precision.at(i, k) = row.at(static_cast<size_t>(k)).get<double>();
                }
            }
        }
        cfg.hiw_delta = detail::config_num_or(b, "model", "delta", 3.0);
        cfg.hiw_d_diag = detail::config_num_or(b, "model", "D_diag", 1.0);
        cfg.hiw_d_offdiag = detail::config_num_or(b, "model", "D_offdiag", 0.0);
        cfg.normalizer_samples =
            static_cast<int>(detail::config_int(b, "model", "normalizer_samples", 200000));
    }

    if (j.contains("chain")) {
        const Json& b = j.at("chain");
        cfg.has_chain = true;
        detail::reject_unknown_keys(b, "chain",
                                    {"steps", "burn_in", "thin", "eta", "w_local", "w_subset",
                                     "beta", "decomposable"});
        cfg.steps = detail::config_int(b, "chain", "steps", 0);
        cfg.burn_in = detail::config_int(b, "chain", "burn_in", 0);
        cfg.thin = detail::config_int(b, "chain", "thin", 1);
        if (cfg.steps < 0 || cfg.burn_in < 0 || cfg.thin < 1)
            throw ConfigError("chain lengths must satisfy steps,burn_in >= 0 and thin >= 1");
        cfg.proposal.eta = detail::config_num_or(b, "chain", "eta", 0.02);
        cfg.proposal.w_local = detail::config_num_or(b, "chain", "w_local", 0.85);
        cfg.proposal.beta = detail::config_num_or(b, "chain", "beta", 0.5);
        if (b.contains("w_subset")) {
            const Json& w = b.at("w_subset");
            if (!w.is_array()) throw ConfigError("chain.w_subset must be an array");
            cfg.proposal.w_subset.clear();
            for (const Json& v : w) {
                if (!v.is_number()) throw ConfigError("chain.w_subset entries must be numbers");
                cfg.proposal.w_subset.push_back(v.get<double>());
            }
        }
        if (b.contains("decomposable")) {
            if (!b.at("decomposable").is_boolean())
                throw ConfigError("chain.decomposable must be a boolean");
            cfg.decomposable = b.at("decomposable").get<bool>();
        }
    }

    if (j.contains("io")) {
        const Json& b = j.at("io");
        detail::reject_unknown_keys(b, "io", {"data", "out_dir"});
        if (b.contains("data")) cfg.data_path = detail::config_str(b, "io", "data");
        if (b.contains("out_dir")) cfg.out_dir = detail::config_str(b, "io", "out_dir");
    }

    return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    return parse_run_config(j);
}

/* default w_subset when the config omits it: the leftover mixture mass goes
 * one third to single-vertex redraws and two thirds to the full redraw */
inline void finalize_proposal(RunConfig& cfg, int n) {
    if (!cfg.proposal.w_subset.empty()) {
        if (static_cast<int>(cfg.proposal.w_subset.size()) != n)
            throw ConfigError("chain.w_subset must list one weight per vertex");
        return;
    }
    if (n <= 0) return;
    const double rest = 1.0 - cfg.proposal.w_local;
    cfg.proposal.w_subset.assign(static_cast<size_t>(n), 0.0);
    if (n == 1) {
        cfg.proposal.w_subset.back() = rest;
    } else {
        cfg.proposal.w_subset.front() = rest / 3.0;
        cfg.proposal.w_subset.back() = 2.0 * rest / 3.0;
    }
}

}  // namespace nerve
