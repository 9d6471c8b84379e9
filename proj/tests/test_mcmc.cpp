#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <vector>

#include "nerve/mcmc.hpp"
#include "test_helpers.hpp"

using namespace nerve;

namespace {

ProposalConfig mixture_for(int n, double w_local = 0.85) {
    ProposalConfig cfg;
    cfg.w_local = w_local;
    cfg.w_subset.assign(static_cast<size_t>(n), 0.0);
    const double rest = 1.0 - w_local;
    cfg.w_subset.front() = rest / 3.0;
    cfg.w_subset.back() += 2.0 * rest / 3.0;
    return cfg;
}

PointProcessPrior uniform_ball(Window w = Window::UnitBall2) {
    PointProcessPrior p;
    p.kind = PriorKind::UniformBall;
    p.window = w;
    return p;
}

std::map<std::string, long> tally_counts(const std::vector<std::string>& keys) {
    std::map<std::string, long> counts;
    for (const auto& k : keys) ++counts[k];
    return counts;
}

/* chi-square two-sample homogeneity test over structure categories; sparse
 * categories are pooled so expected counts stay above five */
double structure_chi2_p(const std::map<std::string, long>& a, const std::map<std::string, long>& b) {
    std::map<std::string, std::pair<long, long>> merged;
    for (const auto& [k, c] : a) merged[k].first = c;
    for (const auto& [k, c] : b) merged[k].second = c;
    double na = 0.0, nb = 0.0;
    for (const auto& [k, c] : merged) {
        na += static_cast<double>(c.first);
        nb += static_cast<double>(c.second);
    }
    std::vector<std::pair<double, double>> cells;
    std::pair<double, double> pooled{0.0, 0.0};
    for (const auto& [k, c] : merged) {
        if (c.first + c.second >= 20) {
            cells.emplace_back(static_cast<double>(c.first), static_cast<double>(c.second));
        } else {
            pooled.first += static_cast<double>(c.first);
            pooled.second += static_cast<double>(c.second);
        }
    }
    if (pooled.first + pooled.second >= 20.0) cells.push_back(pooled);
    if (cells.size() < 2) return 1.0;
    double chi2 = 0.0;
    for (const auto& [ca, cb] : cells) {
        const double tot = ca + cb;
        const double ea = tot * na / (na + nb), eb = tot * nb / (na + nb);
        chi2 += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
    }
    return testutil::chi_square_p(chi2, static_cast<int>(cells.size()) - 1);
}

}  // namespace

TEST_CASE("reflection into the unit interval", "[mcmc]") {
    CHECK(reflect_unit(0.3) == Catch::Approx(0.3));
    CHECK(reflect_unit(0.0) == 0.0);
    CHECK(reflect_unit(1.0) == Catch::Approx(1.0));
    CHECK(reflect_unit(1.2) == Catch::Approx(0.8));
    CHECK(reflect_unit(-0.3) == Catch::Approx(0.3));
    CHECK(reflect_unit(2.5) == Catch::Approx(0.5));
    CHECK(reflect_unit(-1.7) == Catch::Approx(0.3));
    Rng rng(181);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform(-8.0, 8.0);
        const double y = reflect_unit(x);
        CHECK(y >= 0.0);
        CHECK(y <= 1.0);
        CHECK(reflect_unit(y) == Catch::Approx(y));  // idempotent on [0,1]
    }
}

TEST_CASE("random directions have unit norm and cover all octants", "[mcmc]") {
    Rng rng(191);
    int quad[4] = {0, 0, 0, 0}, oct[8] = {0};
    for (int i = 0; i < 4000; ++i) {
        const Point d2 = detail::uniform_direction(2, rng);
        CHECK(norm(d2) == Catch::Approx(1.0).epsilon(1e-12));
        quad[(d2[0] > 0 ? 1 : 0) + (d2[1] > 0 ? 2 : 0)] += 1;
        const Point d3 = detail::uniform_direction(3, rng);
        CHECK(norm(d3) == Catch::Approx(1.0).epsilon(1e-12));
        oct[(d3[0] > 0 ? 1 : 0) + (d3[1] > 0 ? 2 : 0) + (d3[2] > 0 ? 4 : 0)] += 1;
    }
    double chi2q = 0.0, chi2o = 0.0;
    for (int k = 0; k < 4; ++k) chi2q += (quad[k] - 1000.0) * (quad[k] - 1000.0) / 1000.0;
    for (int k = 0; k < 8; ++k) chi2o += (oct[k] - 500.0) * (oct[k] - 500.0) / 500.0;
    CHECK(testutil::chi_square_p(chi2q, 3) > 0.01);
    CHECK(testutil::chi_square_p(chi2o, 7) > 0.01);
}

TEST_CASE("local moves stay inside the unit ball", "[mcmc]") {
    Rng rng(193);
    Point v2(0.3, -0.4);
    for (int i = 0; i < 20000; ++i) {
        v2 = local_step(v2, 0.05, rng);
        REQUIRE(norm(v2) <= 1.0 + 1e-12);
    }
    Point v3(0.1, 0.2, -0.3);
    for (int i = 0; i < 20000; ++i) {
        v3 = local_step(v3, 0.05, rng);
        REQUIRE(norm(v3) <= 1.0 + 1e-12);
    }
}

TEST_CASE("local moves survive the origin and the poles", "[mcmc]") {
    Rng rng(197);
    for (int i = 0; i < 100; ++i) {
        const Point from_origin2 = local_step(Point(0.0, 0.0), 0.02, rng);
        CHECK(std::isfinite(from_origin2[0]));
        CHECK(norm(from_origin2) <= 1.0);
        const Point from_origin3 = local_step(Point(0.0, 0.0, 0.0), 0.02, rng);
        CHECK(std::isfinite(from_origin3[2]));
        CHECK(norm(from_origin3) <= 1.0);
        const Point from_pole = local_step(Point(0.0, 0.0, 0.5), 0.02, rng);
        CHECK(std::isfinite(from_pole[0]));
        CHECK(std::isfinite(from_pole[1]));
        CHECK(norm(from_pole) <= 1.0);
    }
}

TEST_CASE("association-parameter steps reflect at zero", "[mcmc]") {
    Rng rng(199);
    double theta = 0.01;
    for (int i = 0; i < 5000; ++i) {
        theta = theta_step(theta, 0.5, rng);
        REQUIRE(theta > 0.0);
    }
}

TEST_CASE("proposal mixture validation", "[mcmc]") {
    auto cfg = mixture_for(5);
    CHECK_NOTHROW(validate_proposal(cfg, 5, true));

    auto bad_sum = cfg;
    bad_sum.w_local += 0.1;
    CHECK_THROWS_AS(validate_proposal(bad_sum, 5, true), ConfigError);

    auto bad_size = cfg;
    bad_size.w_subset.pop_back();
    CHECK_THROWS_AS(validate_proposal(bad_size, 5, true), ConfigError);

    auto negative = cfg;
    negative.w_subset[0] = -0.05;
    negative.w_subset.back() += 0.10;
    CHECK_THROWS_AS(validate_proposal(negative, 5, true), ConfigError);

    auto no_global = cfg;
    no_global.w_local += no_global.w_subset.back();
    no_global.w_subset.back() = 0.0;
    CHECK_THROWS_AS(validate_proposal(no_global, 5, true), ConfigError);
    CHECK_NOTHROW(validate_proposal(no_global, 5, false));

    auto bad_eta = cfg;
    bad_eta.eta = 0.0;
    CHECK_THROWS_AS(validate_proposal(bad_eta, 5, true), ConfigError);
}

TEST_CASE("hybrid proposals preserve detailed-balance bookkeeping", "[mcmc]") {
    Rng rng(211);
    VertexConfiguration V = sample_uniform(6, Window::UnitBall2, rng);
    const auto cfg = mixture_for(6);
    int moves_seen[3] = {0, 0, 0};
    for (int i = 0; i < 2000; ++i) {
        const Proposal p = hybrid_propose(V, cfg, rng);
        CHECK(p.log_kernel_ratio == 0.0);  // symmetric kernel by construction
        REQUIRE(p.V.n() == 6);
        for (const auto& q : p.V.points) CHECK(in_window(q, Window::UnitBall2));
        if (p.move == 'l') ++moves_seen[0];
        if (p.move == 's') ++moves_seen[1];
        if (p.move == 'g') ++moves_seen[2];
    }
    CHECK(moves_seen[0] + moves_seen[1] + moves_seen[2] == 2000);
    CHECK(moves_seen[0] > 1500);  // w_local = 0.85
    CHECK(moves_seen[1] > 0);
    CHECK(moves_seen[2] > 0);
}

TEST_CASE("subset redraws change exactly the selected number of points", "[mcmc]") {
    Rng rng(223);
    VertexConfiguration V = sample_uniform(5, Window::UnitBall2, rng);

    ProposalConfig two_only;
    two_only.w_local = 0.0;
    two_only.w_subset = {0.0, 1.0, 0.0, 0.0, 0.0};  // always redraw a pair
    for (int i = 0; i < 200; ++i) {
        const Proposal p = hybrid_propose(V, two_only, rng);
        CHECK(p.move == 's');
        int changed = 0;
        for (int k = 0; k < 5; ++k)
            if (squared_distance(p.V.points[static_cast<size_t>(k)],
                                 V.points[static_cast<size_t>(k)]) > 0.0)
                ++changed;
        CHECK(changed == 2);
    }

    ProposalConfig full;
    full.w_local = 0.0;
    full.w_subset = {0.0, 0.0, 0.0, 0.0, 1.0};  // always redraw everything
    const Proposal p = hybrid_propose(V, full, rng);
    CHECK(p.move == 'g');
    int changed = 0;
    for (int k = 0; k < 5; ++k)
        if (squared_distance(p.V.points[static_cast<size_t>(k)],
                             V.points[static_cast<size_t>(k)]) > 0.0)
            ++changed;
    CHECK(changed == 5);
}

TEST_CASE("hybrid proposals require a ball window", "[mcmc]") {
    Rng rng(227);
    VertexConfiguration V = sample_uniform(4, Window::UnitSquare, rng);
    CHECK_THROWS_AS(hybrid_propose(V, mixture_for(4), rng), ConfigError);
}

TEST_CASE("certain acceptance consumes no randomness", "[mcmc]") {
    Rng a(229), b(229);
    CHECK(detail::mh_accept(0.0, a));
    CHECK(detail::mh_accept(2.5, a));
    CHECK(a.raw() == b.raw());  // stream untouched by the two certain accepts
    Rng c(233);
    CHECK_FALSE(detail::mh_accept(-1e9, c));
}

TEST_CASE("structure extraction modes on the square fixture", "[mcmc]") {
    VertexConfiguration V;
    V.window = Window::UnitBall2;
    V.points = {Point(-0.5, -0.5), Point(0.5, -0.5), Point(0.5, 0.5), Point(-0.5, 0.5)};
    const NerveClass nerve{NerveKind::Cech, 2};

    /* sides only: the raw cycle is kept as four edge cliques */
    const auto raw = compute_structure(V, nerve, 0.55, StructureMode::GraphRaw);
    CHECK(raw.key == "[1,2][1,4][2,3][3,4]");

    /* the reduction must reject one side to stay decomposable */
    const auto dec = compute_structure(V, nerve, 0.55, StructureMode::GraphDecomposable);
    CHECK(dec.key == "[1,2][1,4][2,3]");
    CHECK(is_decomposable(dec.G));
    CHECK(dec.jt.cliques.size() == 3);

    /* hypergraph mode keeps higher-order simplices once they appear */
    const auto hyper_low = compute_structure(V, nerve, 0.55, StructureMode::Hypergraph);
    CHECK(hyper_low.key == "[1,2][1,4][2,3][3,4]");
    const auto hyper_high = compute_structure(V, nerve, 0.75, StructureMode::Hypergraph);
    CHECK(hyper_high.key == "[1,2,3,4]");
}

TEST_CASE("uniform-prior chains accept every move", "[mcmc]") {
    Rng rng(239);
    const auto trace = run_prior_chain(uniform_ball(), 6, mixture_for(6), 2000, 500, 3,
                                       {NerveKind::Cech, 2}, 0.3, rng);
    CHECK(trace.v_proposals == 2000);
    CHECK(trace.v_accepts == 2000);
    CHECK(trace.v_acceptance_rate() == 1.0);
    CHECK(trace.samples.size() == 500);  // (2000 - 500) / 3
    for (const auto& rec : trace.samples) {
        CHECK(rec.v_accepted);
        CHECK(!rec.structure.empty());
    }
    /* switch counter agrees with the recorded keys */
    long switches = 0;
    for (size_t i = 1; i < trace.samples.size(); ++i)
        if (trace.samples[i].structure != trace.samples[i - 1].structure) ++switches;
    CHECK(trace.structure_switches == switches);
}

TEST_CASE("prior chains reject what the prior forbids", "[mcmc]") {
    Rng rng(241);
    PointProcessPrior strauss;
    strauss.kind = PriorKind::StraussFixedN;
    strauss.gamma = 0.2;
    strauss.R = 0.3;
    strauss.window = Window::UnitBall2;
    const auto trace = run_prior_chain(strauss, 6, mixture_for(6), 3000, 500, 5,
                                       {NerveKind::Cech, 2}, 0.3, rng);
    CHECK(trace.v_acceptance_rate() < 1.0);
    CHECK(trace.v_acceptance_rate() > 0.2);

    PointProcessPrior matern;
    matern.kind = PriorKind::Matern3;
    matern.rho = 0.05;
    CHECK_THROWS_AS(run_prior_chain(matern, 6, mixture_for(6), 100, 0, 1,
                                    {NerveKind::Cech, 2}, 0.3, rng),
                    ConfigError);
}

TEST_CASE("prior-chain topology frequencies match direct simulation", "[mcmc]") {
    Rng chain_rng(251), direct_rng(257);
    const NerveClass nerve{NerveKind::Cech, 2};
    const double r = 0.45;
    const int n = 4;

    const auto trace = run_prior_chain(uniform_ball(), n, mixture_for(n, 0.5), 9000, 1000, 4,
                                       nerve, r, chain_rng);
    std::vector<std::string> chain_keys;
    for (const auto& rec : trace.samples) chain_keys.push_back(rec.structure);

    std::vector<std::string> direct_keys;
    for (int i = 0; i < 2000; ++i) {
        const auto V = sample_uniform(n, Window::UnitBall2, direct_rng);
        direct_keys.push_back(compute_structure(V, nerve, r, StructureMode::GraphRaw).key);
    }
    const double p = structure_chi2_p(tally_counts(chain_keys), tally_counts(direct_keys));
    CHECK(p > 0.001);
}

TEST_CASE("flat-likelihood posterior reproduces the prior chain", "[mcmc]") {
    PointProcessPrior strauss;
    strauss.kind = PriorKind::StraussFixedN;
    strauss.gamma = 0.4;
    strauss.R = 0.25;
    strauss.window = Window::UnitBall2;

    DataMatrix dummy;
    dummy.names = {"x1", "x2", "x3", "x4", "x5"};
    dummy.rows = {{0.2, 0.4, 0.6, 0.8, 0.5}};

    ModelBackend flat;
    flat.kind = BackendKind::Flat;

    Rng r1(263), r2(263);
    const auto prior_trace = run_prior_chain(strauss, 5, mixture_for(5), 1500, 300, 2,
                                             {NerveKind::Cech, 2}, 0.35, r1);
    const auto post_trace = run_posterior_chain(dummy, flat, strauss, mixture_for(5), 1500, 300, 2,
                                                {NerveKind::Cech, 2}, 0.35, false, r2);
    REQUIRE(prior_trace.samples.size() == post_trace.samples.size());
    CHECK(prior_trace.v_accepts == post_trace.v_accepts);
    for (size_t i = 0; i < prior_trace.samples.size(); ++i)
        CHECK(prior_trace.samples[i].structure == post_trace.samples[i].structure);
    CHECK(post_trace.theta_proposals == 0);
}

TEST_CASE("posterior chain recovers a pair-block structure", "[mcmc]") {
    Rng data_rng(269);
    const auto jt = junction_tree([] {
        LabeledGraph G(3);
        G.add_edge(0, 1);
        G.add_edge(1, 2);
        return G;
    }());
    const DataMatrix data = sample_junction_tree_model(jt, 4.0, 80, data_rng);

    ModelBackend backend;
    backend.kind = BackendKind::ClaytonJT;
    Rng chain_rng(271);
    const auto trace = run_posterior_chain(data, backend, uniform_ball(), mixture_for(3), 900, 300,
                                           1, {NerveKind::Cech, 2}, 0.3, true, chain_rng);
    REQUIRE(trace.samples.size() == 600);
    const auto tally = topology_tally(trace);
    /* the generating structure should dominate the posterior sample */
    CHECK(tally.front().first == "[1,2][2,3]");
    CHECK(tally.front().second > 0.4);

    CHECK(trace.theta_proposals == 900);
    CHECK(trace.theta_accepts > 0);
    CHECK(trace.theta_accepts < trace.theta_proposals);
    double theta_sum = 0.0;
    for (const auto& rec : trace.samples) {
        REQUIRE(rec.theta > 0.0);
        theta_sum += rec.theta;
    }
    const double theta_mean = theta_sum / static_cast<double>(trace.samples.size());
    CHECK(theta_mean > 1.5);
    CHECK(theta_mean < 9.0);
}

TEST_CASE("backend and reduction flags must agree", "[mcmc]") {
    DataMatrix data;
    data.names = {"x1", "x2", "x3"};
    data.rows = {{0.2, 0.5, 0.8}};
    Rng rng(277);
    const auto cfg = mixture_for(3);

    ModelBackend gauss;
    gauss.kind = BackendKind::GaussianHIW;
    gauss.hiw.delta = 3.0;
    gauss.hiw.D = Mat::identity(3);
    CHECK_THROWS_AS(run_posterior_chain(data, gauss, uniform_ball(), cfg, 10, 0, 1,
                                        {NerveKind::Cech, 2}, 0.3, false, rng),
                    ConfigError);

    ModelBackend jt;
    jt.kind = BackendKind::ClaytonJT;
    CHECK_THROWS_AS(run_posterior_chain(data, jt, uniform_ball(), cfg, 10, 0, 1,
                                        {NerveKind::Cech, 2}, 0.3, false, rng),
                    ConfigError);

    ModelBackend hyper;
    hyper.kind = BackendKind::ClaytonHypergraph;
    CHECK_THROWS_AS(run_posterior_chain(data, hyper, uniform_ball(), cfg, 10, 0, 1,
                                        {NerveKind::Cech, 2}, 0.3, true, rng),
                    ConfigError);

    /* copula backends demand data strictly inside the unit interval */
    DataMatrix bad = data;
    bad.rows[0][1] = 1.0;
    CHECK_THROWS_AS(run_posterior_chain(bad, jt, uniform_ball(), cfg, 10, 0, 1,
                                        {NerveKind::Cech, 2}, 0.3, true, rng),
                    NumericError);

    /* chains without a global redraw component are not ergodic */
    auto no_global = cfg;
    no_global.w_local += no_global.w_subset.back();
    no_global.w_subset.back() = 0.0;
    ModelBackend flat;
    flat.kind = BackendKind::Flat;
    CHECK_THROWS_AS(run_posterior_chain(data, flat, uniform_ball(), no_global, 10, 0, 1,
                                        {NerveKind::Cech, 2}, 0.3, false, rng),
                    ConfigError);
    Rng rng2(281);
    CHECK_THROWS_AS(run_prior_chain(uniform_ball(), 3, no_global, 10, 0, 1,
                                    {NerveKind::Cech, 2}, 0.3, rng2),
                    ConfigError);
}

TEST_CASE("topology tallies are normalized and canonically ordered", "[mcmc]") {
    ChainTrace trace;
    for (const char* key : {"[1,2][3]", "[1][2][3]", "[1,2][3]", "[1,2,3]", "[1][2][3]",
                            "[1,2][3]", "[1,2,3]", "[1][2,3]"}) {
        TraceRecord rec;
        rec.structure = key;
        trace.samples.push_back(rec);
    }
    const auto tally = topology_tally(trace);
    REQUIRE(tally.size() == 4);
    CHECK(tally[0].first == "[1,2][3]");
    CHECK(tally[0].second == Catch::Approx(3.0 / 8.0));
    /* two-way tie resolved lexicographically */
    CHECK(tally[1].first == "[1,2,3]");
    CHECK(tally[2].first == "[1][2][3]");
    CHECK(tally[3].first == "[1][2,3]");
    double total = 0.0;
    for (const auto& [k, f] : tally) total += f;
    CHECK(total == Catch::Approx(1.0));

    ChainTrace empty;
    CHECK_THROWS_AS(topology_tally(empty), ConfigError);
}

TEST_CASE("trace files carry a header line and one record per sample", "[mcmc]") {
    Rng rng(283);
    const auto trace = run_prior_chain(uniform_ball(), 4, mixture_for(4), 300, 100, 2,
                                       {NerveKind::Cech, 2}, 0.3, rng);
    const std::string path = "mcmc_trace_test.jsonl";
    write_trace_jsonl(path, trace, Json{{"purpose", "test"}});
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line));
    const Json header = Json::parse(line);
    CHECK(header.at("resolved_spec").at("purpose") == "test");
    size_t rows = 0;
    while (std::getline(in, line)) {
        const Json rec = Json::parse(line);
        CHECK(rec.contains("iteration"));
        CHECK(rec.contains("structure"));
        CHECK(rec.contains("theta"));
        CHECK(rec.contains("move"));
        ++rows;
    }
    CHECK(rows == trace.samples.size());
    in.close();
    std::remove(path.c_str());
}
