/* Command-line front end: nerve construction, decomposable reduction,
 * prior/posterior chains, the experiment registry, and data generation.
 * Exit codes: 0 success, 2 usage/config error, 3 numeric/geometric failure. */

#include <cstdint>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "nerve/config.hpp"

namespace {

using namespace nerve;

NerveClass nerve_class_from(const std::string& cls, int dim) {
    return NerveClass{detail::parse_nerve_kind(cls), dim};
}

void ensure_out_dir(const std::string& dir) {
    if (dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory: " + dir);
}

Json points_spec_json(const std::string& points_path, const std::string& cls, double r,
                      int max_card) {
    return Json{{"points", points_path}, {"class", cls}, {"r", r}, {"max_card", max_card}};
}

void check_points_dim(const std::vector<Point>& V, int dim_flag) {
    if (V.empty()) throw ConfigError("points file contains no vertices");
    if (dim_flag != 0 && V.front().dim != dim_flag)
        throw ConfigError("--dim disagrees with the points file header");
}

int cmd_nerve(const std::string& points_path, const std::string& cls, double r, int max_card,
              int dim_flag, const std::string& out_dir) {
    const std::vector<Point> V = read_points_csv(points_path);
    check_points_dim(V, dim_flag);
    const NerveClass nc = nerve_class_from(cls, V.front().dim);
    if (nc.kind != NerveKind::Delaunay && !(r > 0.0))
        throw ConfigError("--r is required (positive) for cech and alpha classes");
    const int cap = max_card > 0 ? max_card : static_cast<int>(V.size());

    SimplicialComplex K;
    switch (nc.kind) {
        case NerveKind::Cech: K = cech_complex(V, r, cap); break;
        case NerveKind::Alpha: K = alpha_complex(V, r); break;
        case NerveKind::Delaunay: K = delaunay_complex(V); break;
    }
    const LabeledGraph G = from_skeleton(p_skeleton(K, 1));
    const std::string fact = is_decomposable(G) ? factorization_string(cliques(G))
                                                : factorization_string(maximal_simplices(K));

    const Json out{{"resolved_spec", points_spec_json(points_path, cls, r, cap)},
                   {"complex", complex_to_json(K)},
                   {"factorization", fact}};
    ensure_out_dir(out_dir);
    const std::string out_path = out_dir + "/complex.json";
    std::ofstream f(out_path);
    if (!f) throw ConfigError("cannot write output file: " + out_path);
    f << out.dump(2) << '\n';
    std::cerr << "wrote " << out_path << '\n';
    std::cout << fact << '\n';
    return 0;
}

int cmd_decompose(const std::string& points_path, const std::string& cls, double r, int dim_flag,
                  const std::string& out_dir) {
    const std::vector<Point> V = read_points_csv(points_path);
    check_points_dim(V, dim_flag);
    const NerveClass nc = nerve_class_from(cls, V.front().dim);
    if (!(r > 0.0)) throw ConfigError("--r is required (positive) for decompose");

    const Filtration F = build_filtration(V, nc, 2, r);
    const LabeledGraph G = decomposable_from_filtration(F);
    std::vector<TraceRow> rows = clique_separator_trace(F);
    for (auto& row : rows) row.radius *= 2.0;  // report on the distance scale

    const Json spec = points_spec_json(points_path, cls, r, 2);
    ensure_out_dir(out_dir);
    const std::string graph_path = out_dir + "/graph.json";
    std::ofstream f(graph_path);
    if (!f) throw ConfigError("cannot write output file: " + graph_path);
    f << Json{{"resolved_spec", spec},
              {"graph", graph_to_json(G)},
              {"junction_tree", junction_tree_to_json(junction_tree(G))}}
             .dump(2)
      << '\n';
    write_trace_csv(out_dir + "/trace.csv", rows, spec);
    std::cerr << "wrote " << graph_path << " and " << out_dir << "/trace.csv" << '\n';
    std::cout << factorization_string(cliques(G)) << '\n';
    return 0;
}

Json run_config_to_json(const RunConfig& cfg, const std::string& mode) {
    Json j{{"mode", mode}, {"seed", cfg.seed}, {"out_dir", cfg.out_dir}};
    j["nerve"] = {{"class", cfg.nerve.kind == NerveKind::Cech    ? "cech"
                            : cfg.nerve.kind == NerveKind::Alpha ? "alpha"
                                                                 : "delaunay"},
                  {"dim", cfg.nerve.dim},
                  {"r", cfg.r},
                  {"max_card", cfg.max_card}};
    if (cfg.has_prior) {
        Json p;
        switch (cfg.prior.kind) {
            case PriorKind::UniformBall: p = {{"kind", "uniform-ball"}}; break;
            case PriorKind::UniformSquare: p = {{"kind", "uniform-square"}}; break;
            case PriorKind::Matern3: p = {{"kind", "matern3"}, {"rho", cfg.prior.rho}}; break;
            case PriorKind::StraussFixedN:
                p = {{"kind", "strauss"}, {"gamma", cfg.prior.gamma}, {"R", cfg.prior.R}};
                break;
        }
        p["n"] = cfg.n_vertices;
        j["prior"] = p;
    }
    if (cfg.has_model) {
        Json m{{"backend", cfg.backend == BackendKind::ClaytonJT ? "clayton-jt"
                           : cfg.backend == BackendKind::ClaytonHypergraph ? "clayton-hypergraph"
                           : cfg.backend == BackendKind::GaussianHIW ? "gaussian-hiw"
                                                                     : "flat"},
               {"theta_init", cfg.theta_init},
               {"theta_true", cfg.theta_true},
               {"n_obs", cfg.n_obs}};
        if (cfg.backend == BackendKind::GaussianHIW)
            m.update(Json{{"delta", cfg.hiw_delta},
                          {"D_diag", cfg.hiw_d_diag},
                          {"D_offdiag", cfg.hiw_d_offdiag}});
        if (cfg.backend == BackendKind::ClaytonHypergraph)
            m["normalizer_samples"] = cfg.normalizer_samples;
        if (!cfg.true_blocks.empty())
            m["true_blocks"] = detail::simplex_list_json(cfg.true_blocks);
        j["model"] = m;
    }
    if (cfg.has_chain)
        j["chain"] = {{"steps", cfg.steps},
                      {"burn_in", cfg.burn_in},
                      {"thin", cfg.thin},
                      {"eta", cfg.proposal.eta},
                      {"w_local", cfg.proposal.w_local},
                      {"w_subset", cfg.proposal.w_subset},
                      {"beta", cfg.proposal.beta},
                      {"decomposable", cfg.decomposable}};
    if (!cfg.data_path.empty()) j["data"] = cfg.data_path;
    return j;
}

int cmd_sample(const std::string& config_path, const std::string& mode, std::int64_t seed_flag,
               const std::string& out_dir_flag) {
    RunConfig cfg = load_run_config(config_path);
    if (seed_flag >= 0) cfg.seed = static_cast<unsigned long long>(seed_flag);
    if (!out_dir_flag.empty()) cfg.out_dir = out_dir_flag;
    if (!cfg.has_chain || cfg.steps < 1)
        throw ConfigError("sample mode needs a chain block with steps >= 1");
    if (!cfg.has_prior) throw ConfigError("sample mode needs a prior block");

    ChainTrace trace;
    Rng rng(cfg.seed);
    if (mode == "prior") {
        if (cfg.n_vertices < 1) throw ConfigError("prior sampling needs prior.n >= 1");
        finalize_proposal(cfg, cfg.n_vertices);
        trace = run_prior_chain(cfg.prior, cfg.n_vertices, cfg.proposal, cfg.steps, cfg.burn_in,
                                cfg.thin, cfg.nerve, cfg.r, rng,
                                cfg.decomposable ? StructureMode::GraphDecomposable
                                                 : StructureMode::GraphRaw);
    } else {
        if (!cfg.has_model) throw ConfigError("posterior mode needs a model block");
        if (cfg.data_path.empty()) throw ConfigError("posterior mode requires io.data");
        const DataMatrix data = read_data_csv(cfg.data_path);
        if (cfg.n_vertices > 0 && cfg.n_vertices != data.cols())
            throw ConfigError("prior.n disagrees with the data column count");
        finalize_proposal(cfg, data.cols());
        ModelBackend backend;
        backend.kind = cfg.backend;
        if (cfg.backend == BackendKind::GaussianHIW) {
            backend.hiw.delta = cfg.hiw_delta;
            backend.hiw.D = Mat(data.cols());
            for (int i = 0; i < data.cols(); ++i)
                for (int k = 0; k < data.cols(); ++k)
                    backend.hiw.D.at(i, k) = i == k ? cfg.hiw_d_diag : cfg.hiw_d_offdiag;
        }
        if (cfg.backend == BackendKind::ClaytonHypergraph)
            backend.normalizer.samples = cfg.normalizer_samples;
        trace = run_posterior_chain(data, backend, cfg.prior, cfg.proposal, cfg.steps, cfg.burn_in,
                                    cfg.thin, cfg.nerve, cfg.r, cfg.decomposable, rng,
                                    cfg.theta_init);
    }

    const Json resolved = run_config_to_json(cfg, mode);
    ensure_out_dir(cfg.out_dir);
    write_trace_jsonl(cfg.out_dir + "/chain_trace.jsonl", trace, resolved);
    const auto tally = topology_tally(trace);
    write_tally_csv(cfg.out_dir + "/chain_tally.csv", tally, resolved);
    std::cerr << "wrote " << cfg.out_dir << "/chain_trace.jsonl and " << cfg.out_dir
              << "/chain_tally.csv" << '\n';
    std::cout << "v_acceptance " << format_double(trace.v_acceptance_rate()) << '\n';
    if (trace.theta_proposals > 0)
        std::cout << "theta_acceptance " << format_double(trace.theta_acceptance_rate()) << '\n';
    const size_t top = std::min<size_t>(5, tally.size());
    for (size_t i = 0; i < top; ++i)
        std::cout << "top" << (i + 1) << ' ' << tally[i].first << ' '
                  << format_double(tally[i].second) << '\n';
    return 0;
}

int cmd_experiment(const std::string& id, const std::string& out_dir, bool full_length) {
    ensure_out_dir(out_dir);
    if (id == "table1") {
        const QuartileTable table = rgg_feature_stats(default_rgg_spec());
        write_quartile_csv(out_dir + "/table1.csv", table);
        for (const auto& row : table.rows)
            std::cout << row.label << " n=" << row.n << " edges " << format_double(row.e25) << '/'
                      << format_double(row.e50) << '/' << format_double(row.e75) << " cliques3 "
                      << format_double(row.t25) << '/' << format_double(row.t50) << '/'
                      << format_double(row.t75) << '\n';
        std::cerr << "wrote " << out_dir << "/table1.csv" << '\n';
        return 0;
    }
    if (id == "table3") {
        const auto rows = run_table3_trace();
        write_trace_csv(out_dir + "/table3.csv", rows,
                        Json{{"fixture", "embedded 5-vertex trace demo"}, {"r_internal", 0.25}});
        for (const auto& row : rows) {
            std::cout << format_double(row.radius, 3) << ' ';
            if (row.initial)
                std::cout << "- ";
            else
                std::cout << (row.accepted ? "" : "~") << '(' << row.edge.first + 1 << ','
                          << row.edge.second + 1 << ") ";
            std::cout << factorization_string(row.cliques) << " | "
                      << factorization_string(row.separators) << '\n';
        }
        std::cerr << "wrote " << out_dir << "/table3.csv" << '\n';
        return 0;
    }
    if (id == "edge-comparison") {
        const EdgeComparison cmp = decomposable_edge_comparison(EdgeComparisonSpec{});
        write_edge_comparison_csv(out_dir + "/edge_comparison.csv", cmp);
        std::cout << "mean_removed_fraction " << format_double(cmp.mean_removed_fraction) << '\n';
        std::cerr << "wrote " << out_dir << "/edge_comparison.csv" << '\n';
        return 0;
    }
    const ExampleResult result = run_example(find_experiment(id), full_length);
    write_example_outputs(out_dir, result);
    std::cout << "true_structure " << result.true_structure << '\n';
    std::cout << "true_rank " << result.true_rank << '\n';
    const size_t top = std::min<size_t>(5, result.tally.size());
    for (size_t i = 0; i < top; ++i)
        std::cout << "top" << (i + 1) << ' ' << result.tally[i].first << ' '
                  << format_double(result.tally[i].second) << '\n';
    std::cerr << "wrote " << id << " outputs to " << out_dir << '\n';
    return 0;
}

int cmd_gen_data(const std::string& config_path, std::int64_t seed_flag,
                 const std::string& out_flag) {
    RunConfig cfg = load_run_config(config_path);
    if (seed_flag >= 0) cfg.seed = static_cast<unsigned long long>(seed_flag);
    if (!cfg.has_model) throw ConfigError("gen-data needs a model block");
    Rng rng(cfg.seed);
    DataMatrix data;
    switch (cfg.backend) {
        case BackendKind::ClaytonJT: {
            if (cfg.true_blocks.empty())
                throw ConfigError("clayton-jt generation needs model.true_blocks");
            int n_vars = 0;
            for (const auto& b : cfg.true_blocks)
                for (int v : b) n_vars = std::max(n_vars, v + 1);
            const LabeledGraph G = detail::graph_from_blocks(n_vars, cfg.true_blocks);
            data = sample_junction_tree_model(junction_tree(G), cfg.theta_true, cfg.n_obs, rng);
            break;
        }
        case BackendKind::GaussianHIW:
            if (cfg.precision.n == 0)
                throw ConfigError("gaussian-hiw generation needs model.precision");
            data = sample_gaussian_model(cfg.precision, cfg.n_obs, rng);
            break;
        case BackendKind::ClaytonHypergraph:
            data = generate_cyclic_hypergraph_data(cfg.theta_true, cfg.n_obs, rng);
            break;
        case BackendKind::Flat:
            throw ConfigError("the flat backend has no data generator");
    }
    const std::string out_path = !out_flag.empty()
                                     ? out_flag
                                     : (!cfg.data_path.empty() ? cfg.data_path
                                                               : cfg.out_dir + "/data.csv");
    const auto parent = std::filesystem::path(out_path).parent_path();
    if (!parent.empty()) ensure_out_dir(parent.string());
    write_data_csv(out_path, data, run_config_to_json(cfg, "gen-data").dump());
    std::cout << "wrote " << data.n_rows() << " rows to " << out_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geometric nerve constructions and structural inference chains"};
    app.require_subcommand(1);

    std::string points_path, cls = "cech", config_path, mode = "prior", id, out_dir = ".",
                out_dir_override, out_flag;
    double r = 0.0;
    int max_card = 0, dim_flag = 0;
    std::int64_t seed_flag = -1;
    bool full_length = false;

    CLI::App* nerve_cmd = app.add_subcommand("nerve", "build a nerve complex from a points CSV");
    nerve_cmd->add_option("--points", points_path, "points CSV (header x,y or x,y,z)")->required();
    nerve_cmd->add_option("--class", cls, "cech|alpha|delaunay");
    nerve_cmd->add_option("--r", r, "ball radius (proximity at distance 2r)");
    nerve_cmd->add_option("--max-card", max_card, "largest simplex cardinality (0 = all)");
    nerve_cmd->add_option("--dim", dim_flag, "expected point dimension (2 or 3)");
    nerve_cmd->add_option("--out-dir", out_dir, "output directory");

    CLI::App* dec_cmd =
        app.add_subcommand("decompose", "filtration + decomposable reduction from a points CSV");
    dec_cmd->add_option("--points", points_path, "points CSV (header x,y or x,y,z)")->required();
    dec_cmd->add_option("--class", cls, "cech|alpha|delaunay");
    dec_cmd->add_option("--r", r, "truncation radius")->required();
    dec_cmd->add_option("--dim", dim_flag, "expected point dimension (2 or 3)");
    dec_cmd->add_option("--out-dir", out_dir, "output directory");

    CLI::App* sample_cmd = app.add_subcommand("sample", "run a prior or posterior chain");
    sample_cmd->add_option("--config", config_path, "run configuration JSON")->required();
    sample_cmd->add_option("--mode", mode, "prior|posterior")
        ->check(CLI::IsMember({"prior", "posterior"}));
    sample_cmd->add_option("--seed", seed_flag, "seed override");
    sample_cmd->add_option("--out-dir", out_dir_override, "output directory override");

    CLI::App* exp_cmd = app.add_subcommand("experiment", "run a registered experiment");
    exp_cmd->add_option("--id", id, "experiment id")->required();
    exp_cmd->add_option("--out-dir", out_dir, "output directory");
    exp_cmd->add_flag("--full-length", full_length, "use the full-length burn-in (10x desk scale)");

    CLI::App* gen_cmd = app.add_subcommand("gen-data", "generate synthetic data from a config");
    gen_cmd->add_option("--config", config_path, "run configuration JSON")->required();
    gen_cmd->add_option("--seed", seed_flag, "seed override");
    gen_cmd->add_option("--out", out_flag, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(nerve_cmd))
            return cmd_nerve(points_path, cls, r, max_card, dim_flag, out_dir);
        if (app.got_subcommand(dec_cmd))
            return cmd_decompose(points_path, cls, r, dim_flag, out_dir);
        if (app.got_subcommand(sample_cmd))
            return cmd_sample(config_path, mode, seed_flag, out_dir_override);
        if (app.got_subcommand(exp_cmd)) return cmd_experiment(id, out_dir, full_length);
        if (app.got_subcommand(gen_cmd)) return cmd_gen_data(config_path, seed_flag, out_flag);
        throw nerve::ConfigError("no subcommand selected");
    } catch (const nerve::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const nerve::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
