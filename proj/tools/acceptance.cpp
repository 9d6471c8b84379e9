/* Acceptance harness: ten numbered end-to-end checks over the library, each
 * printing exactly one [PASS]/[FAIL] verdict line (long checks also print
 * indented progress lines above their verdict).
 *
 * Usage:  acceptance [--criterion N]     (no flag runs all ten)
 * Exit code: the number of failed criteria. */

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nerve/config.hpp"

namespace {

using namespace nerve;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int precision = 6) { return format_double(v, precision); }

/* -------------------------------------------------------------------- 1 */
/* Deterministic nerve factorizations of the embedded five-vertex set. */

std::string skeleton_factorization(const SimplicialComplex& K) {
    const LabeledGraph G = from_skeleton(p_skeleton(K, 1));
    return is_decomposable(G) ? factorization_string(cliques(G))
                              : factorization_string(maximal_simplices(K));
}

Outcome criterion1() {
    const std::vector<Point> V = nerve_demo_vertices();
    const std::string alpha = skeleton_factorization(alpha_complex(V, 0.5));
    const std::string cech =
        skeleton_factorization(cech_complex(V, 0.7, static_cast<int>(V.size())));
    const bool ok = alpha == "[1,2][2,3,5][4]" && cech == "[1,2,3,5][1,4]";
    return {ok, "alpha(0.5) -> " + alpha + "  cech(0.7) -> " + cech};
}

/* -------------------------------------------------------------------- 2 */
/* The worked eight-row reduction trace, radii on the distance scale. */

Outcome criterion2() {
    const std::vector<TraceRow> rows = run_table3_trace();
    if (rows.size() != 8)
        return {false, "expected 8 trace rows, got " + std::to_string(rows.size())};

    struct Expect {
        double radius;
        int a, b;  // 0-based edge
        bool accepted;
        const char* cliques;
        const char* separators;
    };
    const std::vector<Expect> want = {
        {0.313, 0, 2, true, "[1,3][2][4][5]", ""},
        {0.322, 3, 4, true, "[1,3][2][4,5]", ""},
        {0.380, 1, 4, true, "[1,3][2,5][4,5]", "[5]"},
        {0.422, 1, 3, true, "[1,3][2,4,5]", ""},
        {0.459, 2, 3, true, "[1,3][2,4,5][3,4]", "[3][4]"},
        {0.474, 0, 1, false, "[1,3][2,4,5][3,4]", "[3][4]"},
        {0.499, 0, 3, true, "[1,3,4][2,4,5]", "[4]"},
    };

    if (!rows[0].initial || factorization_string(rows[0].cliques) != "[1][2][3][4][5]" ||
        !factorization_string(rows[0].separators).empty())
        return {false, "initial row mismatch: " + factorization_string(rows[0].cliques)};

    for (size_t i = 0; i < want.size(); ++i) {
        const TraceRow& row = rows[i + 1];
        const Expect& w = want[i];
        const std::string where = "row " + std::to_string(i + 2);
        if (std::fabs(row.radius - w.radius) > 1.0e-3)
            return {false, where + ": radius " + fmt(row.radius) + " != " + fmt(w.radius)};
        if (row.edge != std::make_pair(w.a, w.b))
            return {false, where + ": edge (" + std::to_string(row.edge.first + 1) + "," +
                               std::to_string(row.edge.second + 1) + ") != (" +
                               std::to_string(w.a + 1) + "," + std::to_string(w.b + 1) + ")"};
        if (row.accepted != w.accepted)
            return {false, where + ": accepted flag mismatch"};
        if (factorization_string(row.cliques) != w.cliques)
            return {false, where + ": cliques " + factorization_string(row.cliques) +
                               " != " + w.cliques};
        if (factorization_string(row.separators) != w.separators)
            return {false, where + ": separators " + factorization_string(row.separators) +
                               " != " + w.separators};
    }
    return {true,
            "all 8 rows match: distance-scale radii, acceptance order "
            "(1,3)(4,5)(2,5)(2,4)(3,4)(1,4), rejection of (1,2), cliques and separators"};
}

/* -------------------------------------------------------------------- 3 */
/* Maximal simplices of the six-vertex alpha complex; two candidate radii. */

Outcome criterion3() {
    const std::vector<Point> V = hypergraph_demo_vertices();
    const std::string want = "[1,2][1,6][2,6][3,4,5]";
    const double r_a = 0.40, r_b = std::sqrt(0.075);
    const std::string at_a = factorization_string(maximal_simplices(alpha_complex(V, r_a)));
    const std::string at_b = factorization_string(maximal_simplices(alpha_complex(V, r_b)));
    const bool ok_a = at_a == want, ok_b = at_b == want;
    std::string detail;
    if (ok_a && ok_b)
        detail = "both r=0.40 and r=sqrt(0.075) give " + want;
    else if (ok_b)
        detail = "passing radius r=sqrt(0.075)=" + fmt(r_b) + " gives " + want +
                 "; r=0.40 gives " + at_a;
    else if (ok_a)
        detail = "passing radius r=0.40 gives " + want + "; r=sqrt(0.075) gives " + at_b;
    else
        detail = "neither radius matches: r=0.40 -> " + at_a + ", r=sqrt(0.075) -> " + at_b;
    return {ok_a || ok_b, detail};
}

/* -------------------------------------------------------------------- 4 */
/* Random-geometric-graph feature quartiles at 2500 replicates. */

Outcome criterion4() {
    const QuartileTable table = rgg_feature_stats(default_rgg_spec());
    auto find_row = [&](const std::string& label, int n) -> const QuartileRow& {
        for (const auto& row : table.rows)
            if (row.label == label && row.n == n) return row;
        throw ConfigError("missing feature row: " + label);
    };
    const QuartileRow& uni = find_row("Uniform", 75);
    const QuartileRow& mat = find_row("Matern (0.035)", 75);
    const QuartileRow& er = find_row("ER (0.065)", 75);

    std::vector<std::string> bad;
    auto check = [&](const std::string& name, double got, double want, double tol) {
        if (std::fabs(got - want) > tol)
            bad.push_back(name + "=" + fmt(got) + " (want " + fmt(want) + " +/- " + fmt(tol) + ")");
    };
    check("uniform.e25", uni.e25, 161, 3);
    check("uniform.e50", uni.e50, 171, 3);
    check("uniform.e75", uni.e75, 182, 3);
    check("uniform.t25", uni.t25, 134, 8);
    check("uniform.t50", uni.t50, 160, 8);
    check("uniform.t75", uni.t75, 190, 8);
    check("matern.e50", mat.e50, 161, 4);
    check("er.e25", er.e25, 172, 1);
    check("er.e50", er.e50, 181, 1);
    check("er.e75", er.e75, 189, 1);

    if (!bad.empty()) {
        std::string detail = "out of tolerance:";
        for (const auto& b : bad) detail += " " + b;
        return {false, detail};
    }
    return {true, "n=75 quartiles within tolerance: uniform edges " + fmt(uni.e25) + "/" +
                      fmt(uni.e50) + "/" + fmt(uni.e75) + ", 3-cliques " + fmt(uni.t25) + "/" +
                      fmt(uni.t50) + "/" + fmt(uni.t75) + ", matern(0.035) edge median " +
                      fmt(mat.e50) + ", er(0.065) edges " + fmt(er.e25) + "/" + fmt(er.e50) + "/" +
                      fmt(er.e75) + " (2500 replicates)"};
}

/* -------------------------------------------------------------------- 5 */
/* Uniform prior: every hybrid proposal is accepted, exactly. */

Outcome criterion5() {
    PointProcessPrior prior;
    prior.kind = PriorKind::UniformBall;
    prior.window = Window::UnitBall2;
    const ProposalConfig cfg = detail::standard_mixture(6);
    Rng rng(501);
    const ChainTrace trace = run_prior_chain(prior, 6, cfg, 10000, 0, 1,
                                             NerveClass{NerveKind::Cech, 2}, 0.3, rng);
    const bool ok = trace.v_proposals == 10000 && trace.v_accepts == 10000 &&
                    trace.v_acceptance_rate() == 1.0;
    return {ok, "acceptance rate " + fmt(trace.v_acceptance_rate(), 17) + " over " +
                    std::to_string(trace.v_proposals) + " proposals (" +
                    std::to_string(trace.v_accepts) + " accepted)"};
}

/* -------------------------------------------------------------------- 6 */
/* The filtration-driven reduction always produces a decomposable graph. */

Outcome criterion6() {
    Rng rng(601);
    int failures = 0;
    long total_edges = 0;
    for (int t = 0; t < 1000; ++t) {
        const int n = 2 + static_cast<int>(rng.uniform_int(29));  // 2..30
        const double r = rng.uniform(0.05, 0.6);
        const VertexConfiguration V = sample_uniform(n, Window::UnitBall2, rng);
        const Filtration F = build_filtration(V.points, NerveClass{NerveKind::Cech, 2}, 2, r);
        const LabeledGraph G = decomposable_from_filtration(F);
        if (!is_decomposable(G)) ++failures;
        total_edges += static_cast<long>(G.edges.size());
    }
    return {failures == 0, std::to_string(failures) +
                               " non-decomposable results over 1000 uniform configurations "
                               "(n in [2,30], d=2, truncation radius in [0.05,0.6]; " +
                               std::to_string(total_edges) + " accepted edges in total)"};
}

/* -------------------------------------------------------------------- 7 */
/* Pigeonhole feasibility: r = (sqrt(n)-1)^{-1} never gives an empty graph. */

Outcome criterion7() {
    Rng rng(701);
    std::string detail;
    int empty_total = 0;
    for (const int n : {5, 10, 20}) {
        const double r = 1.0 / (std::sqrt(static_cast<double>(n)) - 1.0);
        int empty = 0;
        for (int t = 0; t < 10000; ++t) {
            const VertexConfiguration V = sample_uniform(n, Window::UnitBall2, rng);
            const SimplicialComplex K = cech_complex(V.points, r, 2);
            bool has_edge = false;
            for (const auto& s : K.simplices)
                if (s.size() == 2) {
                    has_edge = true;
                    break;
                }
            if (!has_edge) ++empty;
        }
        empty_total += empty;
        if (!detail.empty()) detail += ", ";
        detail += "n=" + std::to_string(n) + ": " + std::to_string(empty) + " empty";
    }
    return {empty_total == 0, detail + " (10000 configurations each)"};
}

/* -------------------------------------------------------------------- 8 */
/* Likelihood correctness against independent oracles. */

DataMatrix make_data(const std::vector<std::vector<double>>& rows) {
    DataMatrix d;
    const size_t n = rows.empty() ? 0 : rows.front().size();
    for (size_t j = 0; j < n; ++j) d.names.push_back("x" + std::to_string(j + 1));
    d.rows = rows;
    return d;
}

/* one-variable marginal likelihood by quadrature: the variance integrated
 * against its inverse-gamma prior (shape delta/2, rate D/2), substituting
 * s = u/(1-u) to map (0,inf) onto the unit interval */
double quad_marginal_1var(const std::vector<double>& x, double delta, double d_scale,
                          int m = 400) {
    const auto [nodes, weights] = gauss_legendre(m);
    const double a = delta / 2.0, b = d_scale / 2.0;
    const double log_norm = a * std::log(b) - std::lgamma(a);
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        const double u = nodes[static_cast<size_t>(i)];
        const double s = u / (1.0 - u);
        const double jac = 1.0 / ((1.0 - u) * (1.0 - u));
        double lp = log_norm - (a + 1.0) * std::log(s) - b / s;
        for (const double xi : x) lp += -0.5 * std::log(2.0 * M_PI * s) - xi * xi / (2.0 * s);
        total += weights[static_cast<size_t>(i)] * std::exp(lp) * jac;
    }
    return total;
}

/* two-variable complete-graph marginal likelihood by Monte Carlo: the
 * covariance follows an inverse Wishart (density proportional to
 * |S|^{-(delta+4)/2} exp(-tr(S^{-1}D)/2)), sampled through its precision
 * W ~ Wishart(delta+1, D^{-1}) with the Bartlett factorization; the
 * likelihood is averaged over draws. Returns (estimate, standard error). */
std::pair<double, double> mc_marginal_2var(const std::vector<std::array<double, 2>>& X,
                                           double delta, double d11, double d12, double d22,
                                           long draws, Rng& rng) {
    const double det_d = d11 * d22 - d12 * d12;
    const double i11 = d22 / det_d, i12 = -d12 / det_d, i22 = d11 / det_d;
    const double l11 = std::sqrt(i11);
    const double l21 = i12 / l11;
    const double l22 = std::sqrt(i22 - l21 * l21);
    const double df = delta + 1.0;  // delta + p - 1 with p = 2
    double sum = 0.0, sumsq = 0.0;
    for (long t = 0; t < draws; ++t) {
        const double a11 = std::sqrt(2.0 * rng.gamma(df / 2.0));
        const double a22 = std::sqrt(2.0 * rng.gamma((df - 1.0) / 2.0));
        const double a21 = rng.normal();
        const double b11 = l11 * a11;               // B = L * A, lower triangular
        const double b21 = l21 * a11 + l22 * a21;
        const double b22 = l22 * a22;
        const double w11 = b11 * b11;               // W = B * B^T
        const double w12 = b11 * b21;
        const double w22 = b21 * b21 + b22 * b22;
        const double logdet_w = std::log(w11 * w22 - w12 * w12);
        double ll = 0.0;
        for (const auto& x : X)
            ll += -std::log(2.0 * M_PI) + 0.5 * logdet_w -
                  0.5 * (w11 * x[0] * x[0] + 2.0 * w12 * x[0] * x[1] + w22 * x[1] * x[1]);
        const double v = std::exp(ll);
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / static_cast<double>(draws);
    const double var =
        std::max(0.0, sumsq / static_cast<double>(draws) - mean * mean) /
        static_cast<double>(draws);
    return {mean, std::sqrt(var)};
}

double clayton_integral_2d(double theta, int m) {
    const auto [x, w] = gauss_legendre(m);
    double s = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            s += w[static_cast<size_t>(i)] * w[static_cast<size_t>(j)] *
                 std::exp(clayton_log_density(
                     {x[static_cast<size_t>(i)], x[static_cast<size_t>(j)]}, theta));
    return s;
}

double clayton_integral_3d(double theta, int m) {
    const auto [x, w] = gauss_legendre(m);
    double s = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                s += w[static_cast<size_t>(i)] * w[static_cast<size_t>(j)] *
                     w[static_cast<size_t>(k)] *
                     std::exp(clayton_log_density({x[static_cast<size_t>(i)],
                                                   x[static_cast<size_t>(j)],
                                                   x[static_cast<size_t>(k)]},
                                                  theta));
    return s;
}

Outcome criterion8() {
    std::vector<std::string> failures;
    auto note = [](const std::string& line) { std::cout << "    " << line << "\n" << std::flush; };

    /* corner limits of the Clayton density at theta = 4 */
    const double eps = 1e-9;
    const double corner2 = clayton_log_density({1.0 - eps, 1.0 - eps}, 4.0);
    const double rel2 = std::fabs(corner2 - std::log(5.0)) / std::log(5.0);
    note("bivariate corner: log-density " + fmt(corner2, 12) + " vs log 5 = " +
         fmt(std::log(5.0), 12) + " (rel err " + fmt(rel2, 3) + ")");
    if (!(rel2 < 1e-6)) failures.push_back("bivariate corner limit (rel err " + fmt(rel2, 3) + ")");

    const double corner3 = clayton_log_density({1.0 - eps, 1.0 - eps, 1.0 - eps}, 4.0);
    const double rel3 = std::fabs(corner3 - std::log(30.0)) / std::log(30.0);
    note("trivariate corner: log-density " + fmt(corner3, 12) + "; required log 30 = " +
         fmt(std::log(30.0), 12) + " (rel err " + fmt(rel3, 3) + "); log 45 = " +
         fmt(std::log(45.0), 12));
    const double i3 = clayton_integral_3d(4.0, 96);
    note("trivariate density integral (96^3-node quadrature) = " + fmt(i3, 8) +
         "; a correctly normalized trivariate density has corner constant 45, and rescaling"
         " the implemented density to reach 30 would drop this integral to 2/3");
    if (!(rel3 < 1e-6))
        failures.push_back("trivariate corner limit: measured " + fmt(corner3, 10) + " = log 45, "
                           "required log 30 = " + fmt(std::log(30.0), 10));

    const double i2 = clayton_integral_2d(4.0, 256);
    note("bivariate density integral (256^2-node quadrature) = " + fmt(i2, 8));
    if (!(std::fabs(i2 - 1.0) <= 1e-3))
        failures.push_back("bivariate unit integral (got " + fmt(i2, 8) + ")");

    /* marginal-likelihood oracles, delta = 3 throughout */
    const double delta = 3.0;
    HIWHyper hyper1;
    hyper1.delta = delta;
    hyper1.D = Mat(1);
    hyper1.D.at(0, 0) = 0.5;
    const DataMatrix data1 = make_data({{0.3}, {-0.2}, {1.1}});
    const double closed1 = std::exp(hiw_log_marginal(data1, LabeledGraph(1), hyper1));
    const double oracle1 = quad_marginal_1var({0.3, -0.2, 1.1}, delta, 0.5);
    const double rel_m1 = std::fabs(closed1 - oracle1) / oracle1;
    note("marginal likelihood, 1 variable: closed form " + fmt(closed1, 10) + " vs quadrature " +
         fmt(oracle1, 10) + " (rel err " + fmt(rel_m1, 3) + ")");
    if (!(rel_m1 < 0.02)) failures.push_back("1-variable marginal (rel err " + fmt(rel_m1, 3) + ")");

    const std::vector<std::array<double, 2>> x2 = {{0.3, -0.1}, {0.5, 0.4}, {-0.7, 0.2}};
    HIWHyper hyper2;
    hyper2.delta = delta;
    hyper2.D = Mat(2);
    hyper2.D.at(0, 0) = hyper2.D.at(1, 1) = 1.0;
    hyper2.D.at(0, 1) = hyper2.D.at(1, 0) = 0.3;
    LabeledGraph g2(2);
    g2.add_edge(0, 1);
    const DataMatrix data2 = make_data({{0.3, -0.1}, {0.5, 0.4}, {-0.7, 0.2}});
    const double closed2 = std::exp(hiw_log_marginal(data2, g2, hyper2));
    Rng rng2(801);
    const auto [oracle2, se2] = mc_marginal_2var(x2, delta, 1.0, 0.3, 1.0, 500000, rng2);
    const double rel_m2 = std::fabs(closed2 - oracle2) / oracle2;
    note("marginal likelihood, 2 variables: closed form " + fmt(closed2, 10) +
         " vs Monte Carlo " + fmt(oracle2, 10) + " +/- " + fmt(se2, 3) + " (rel err " +
         fmt(rel_m2, 3) + ", 500000 draws)");
    if (!(rel_m2 < 0.02)) failures.push_back("2-variable marginal (rel err " + fmt(rel_m2, 3) + ")");

    /* three-variable path 1-2-3: oracle combines the block oracles through the
     * clique/separator factorization M = M12 * M23 / M2 */
    const std::vector<std::vector<double>> rows3 = {{0.3, -0.1, 0.8},
                                                    {0.5, 0.4, -0.2},
                                                    {-0.7, 0.2, 0.1}};
    HIWHyper hyper3;
    hyper3.delta = delta;
    hyper3.D = Mat(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            hyper3.D.at(i, j) = i == j ? 1.0 : (std::abs(i - j) == 1 ? 0.3 : 0.0);
    LabeledGraph g3(3);
    g3.add_edge(0, 1);
    g3.add_edge(1, 2);
    const DataMatrix data3 = make_data(rows3);
    const double closed3 = std::exp(hiw_log_marginal(data3, g3, hyper3));
    std::vector<std::array<double, 2>> block01, block12;
    std::vector<double> col1;
    for (const auto& row : rows3) {
        block01.push_back({row[0], row[1]});
        block12.push_back({row[1], row[2]});
        col1.push_back(row[1]);
    }
    Rng rng3a(802), rng3b(803);
    const auto [m01, se01] = mc_marginal_2var(block01, delta, 1.0, 0.3, 1.0, 500000, rng3a);
    const auto [m12, se12] = mc_marginal_2var(block12, delta, 1.0, 0.3, 1.0, 500000, rng3b);
    const double m1 = quad_marginal_1var(col1, delta, 1.0);
    const double oracle3 = m01 * m12 / m1;
    const double rel_m3 = std::fabs(closed3 - oracle3) / oracle3;
    note("marginal likelihood, 3-variable path: closed form " + fmt(closed3, 10) +
         " vs block-oracle combination " + fmt(oracle3, 10) + " (rel err " + fmt(rel_m3, 3) +
         ")");
    if (!(rel_m3 < 0.02)) failures.push_back("3-variable marginal (rel err " + fmt(rel_m3, 3) + ")");

    if (failures.empty())
        return {true, "corner limits, unit integrals, and marginal-likelihood oracles all within "
                      "tolerance"};
    std::string detail = failures.front();
    for (size_t i = 1; i < failures.size(); ++i) detail += "; " + failures[i];
    if (failures.size() == 1 && failures.front().rfind("trivariate", 0) == 0)
        detail += "; every other sub-check passed";
    return {false, detail};
}

/* -------------------------------------------------------------------- 9 */
/* Cech complexes vs brute-force subset enumeration; alpha inside cech. */

std::set<Simplex> brute_cech_simplices(const std::vector<Point>& V, double r) {
    std::set<Simplex> out;
    const int n = static_cast<int>(V.size());
    for (int mask = 1; mask < (1 << n); ++mask) {
        Simplex s;
        std::vector<Point> pts;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) {
                s.push_back(i);
                pts.push_back(V[static_cast<size_t>(i)]);
            }
        if (min_enclosing_ball(pts).radius <= r) out.insert(s);
    }
    return out;
}

std::set<std::pair<int, int>> one_skeleton_edges(const SimplicialComplex& K) {
    std::set<std::pair<int, int>> out;
    for (const auto& s : K.simplices)
        if (s.size() == 2) out.insert({s[0], s[1]});
    return out;
}

Outcome criterion9() {
    Rng rng(901);
    int alpha_checked = 0;
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + static_cast<int>(rng.uniform_int(7));  // 2..8
        const double r = rng.uniform(0.08, 0.6);
        const VertexConfiguration V = sample_uniform(n, Window::UnitBall2, rng);
        const SimplicialComplex K = cech_complex(V.points, r, n);
        if (K.simplices != brute_cech_simplices(V.points, r))
            return {false, "cech complex differs from subset enumeration at trial " +
                               std::to_string(t) + " (n=" + std::to_string(n) +
                               ", r=" + fmt(r) + ")"};
        if (n >= 4) {
            ++alpha_checked;
            const auto alpha_edges = one_skeleton_edges(alpha_complex(V.points, r));
            const auto cech_edges = one_skeleton_edges(K);
            for (const auto& e : alpha_edges)
                if (!cech_edges.count(e))
                    return {false, "alpha edge outside the cech 1-skeleton at trial " +
                                       std::to_string(t)};
        }
    }
    return {true, "100 random (V, r) pairs: cech == subset enumeration; alpha 1-skeleton inside "
                  "cech 1-skeleton on " +
                      std::to_string(alpha_checked) + " configurations with n >= 4"};
}

/* ------------------------------------------------------------------- 10 */
/* Posterior recovery for every registered experiment at desk scale. */

Outcome criterion10() {
    struct Run {
        std::string id;
        ExampleResult result;
    };
    std::vector<Run> runs;
    for (const auto& spec : experiment_registry()) {
        ExampleResult res = run_example(spec, false);
        std::ostringstream line;
        line << spec.id << ": true structure " << res.true_structure << " rank "
             << res.true_rank << ", mode " << (res.tally.empty() ? "-" : res.tally.front().first)
             << " (freq " << fmt(res.tally.empty() ? 0.0 : res.tally.front().second, 4)
             << "), v-acc " << fmt(res.trace.v_acceptance_rate(), 3) << ", " << fmt(res.seconds, 3)
             << "s";
        std::cout << "    " << line.str() << "\n" << std::flush;
        runs.push_back({spec.id, std::move(res)});
    }
    auto result_of = [&](const std::string& id) -> const ExampleResult& {
        for (const auto& r : runs)
            if (r.id == id) return r.result;
        throw ConfigError("experiment did not run: " + id);
    };

    std::vector<std::string> bad;
    auto expect_rank1 = [&](const std::string& id) {
        if (result_of(id).true_rank != 1)
            bad.push_back(id + " rank " + std::to_string(result_of(id).true_rank) + " != 1");
    };
    expect_rank1("ex1");
    expect_rank1("ex4-m1-alpha2");
    expect_rank1("ex4-m1-alpha3");
    expect_rank1("ex4-m1-cech2");
    expect_rank1("ex4-m2-cech2");
    expect_rank1("ex4-m2-alpha3");

    const int rank2 = result_of("ex2-gauss").true_rank;
    if (rank2 < 1 || rank2 > 3)
        bad.push_back("ex2-gauss rank " + std::to_string(rank2) + " not in top 3");

    const auto& strauss = result_of("ex3-strauss");
    const auto& unif = result_of("ex3-unif");
    const double f_strauss = strauss.tally.empty() ? 0.0 : strauss.tally.front().second;
    const double f_unif = unif.tally.empty() ? 0.0 : unif.tally.front().second;
    if (!(f_strauss > f_unif))
        bad.push_back("ex3 mode frequencies: strauss " + fmt(f_strauss, 4) + " <= uniform " +
                      fmt(f_unif, 4));

    if (result_of("ex4-m2-alpha2").true_rank != 0)
        bad.push_back("ex4-m2-alpha2 sampled the infeasible structure (rank " +
                      std::to_string(result_of("ex4-m2-alpha2").true_rank) + ")");

    if (!bad.empty()) {
        std::string detail = "recovery failures:";
        for (const auto& b : bad) detail += " " + b;
        return {false, detail};
    }
    return {true, "ex1 and all feasible ex4 variants rank the true structure first; ex2-gauss "
                  "rank " +
                      std::to_string(rank2) + "; strauss mode freq " + fmt(f_strauss, 4) +
                      " > uniform " + fmt(f_unif, 4) + "; the infeasible ex4-m2-alpha2 never "
                      "samples the generating structure"};
}

/* ----------------------------------------------------------------- main */

struct Criterion {
    int num;
    std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char** argv) {
    int which = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            which = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--criterion N]\n";
            return 64;
        }
    }
    if (which < 0 || which > 10) {
        std::cerr << "criterion number must be in 1..10\n";
        return 64;
    }

    const std::vector<Criterion> criteria = {
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
        {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (which != 0 && c.num != which) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.fn();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (out.pass ? "[PASS]" : "[FAIL]") << " criterion " << c.num << " ("
                  << fmt(secs, 3) << "s): " << out.detail << "\n"
                  << std::flush;
        if (!out.pass) ++failures;
    }
    return failures;
}
