#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "nerve/graphs.hpp"
#include "test_helpers.hpp"

using namespace nerve;

namespace {

LabeledGraph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    LabeledGraph G(n);
    for (const auto& [a, b] : edges) G.add_edge(a, b);
    return G;
}

LabeledGraph random_graph(int n, double p, Rng& rng) {
    LabeledGraph G(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform01() < p) G.add_edge(i, j);
    return G;
}

/* grow a random decomposable graph by single-edge additions */
LabeledGraph random_decomposable(int n, int attempts, Rng& rng) {
    LabeledGraph G(n);
    JunctionTree jt = junction_tree(G);
    for (int t = 0; t < attempts; ++t) {
        const int a = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(n)));
        const int b = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(n)));
        if (a == b || G.has_edge(std::min(a, b), std::max(a, b))) continue;
        if (admissible_edge(G, jt, {std::min(a, b), std::max(a, b)})) {
            G.add_edge(std::min(a, b), std::max(a, b));
            jt = junction_tree(G);
        }
    }
    return G;
}

/* running-intersection check: for every vertex, the cliques containing it
 * must induce a connected subgraph of the junction forest */
bool running_intersection(const JunctionTree& jt, int n) {
    for (int v = 0; v < n; ++v) {
        std::vector<int> holds;
        for (int i = 0; i < static_cast<int>(jt.cliques.size()); ++i)
            if (std::binary_search(jt.cliques[static_cast<size_t>(i)].begin(),
                                   jt.cliques[static_cast<size_t>(i)].end(), v))
                holds.push_back(i);
        if (holds.size() <= 1) continue;
        /* BFS over forest edges restricted to cliques containing v */
        std::set<int> hold_set(holds.begin(), holds.end());
        std::set<int> seen{holds[0]};
        std::vector<int> queue{holds[0]};
        while (!queue.empty()) {
            const int c = queue.back();
            queue.pop_back();
            for (const auto& e : jt.edges) {
                int other = -1;
                if (e.a == c) other = e.b;
                if (e.b == c) other = e.a;
                if (other < 0 || !hold_set.count(other) || seen.count(other)) continue;
                seen.insert(other);
                queue.push_back(other);
            }
        }
        if (seen.size() != holds.size()) return false;
    }
    return true;
}

std::vector<Point> trace_fixture() {
    return {Point(0.686, 0.151), Point(0.214, 0.194), Point(0.846, 0.420),
            Point(0.411, 0.567), Point(0.089, 0.553)};
}

}  // namespace

TEST_CASE("maximal cliques match brute-force enumeration", "[graphs]") {
    Rng rng(61);
    for (int trial = 0; trial < 80; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_int(8));
        const auto G = random_graph(n, rng.uniform(0.2, 0.8), rng);
        CHECK(cliques(G) == testutil::brute_cliques(G));
    }
}

TEST_CASE("maximal cliques of simple fixtures", "[graphs]") {
    SECTION("empty graph lists singletons") {
        const LabeledGraph G(3);
        const std::vector<std::vector<int>> expected = {{0}, {1}, {2}};
        CHECK(cliques(G) == expected);
    }
    SECTION("triangle plus pendant") {
        const auto G = graph_from_edges(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
        const std::vector<std::vector<int>> expected = {{0, 1, 2}, {2, 3}};
        CHECK(cliques(G) == expected);
    }
    SECTION("complete graph is a single clique") {
        auto G = LabeledGraph(5);
        for (int i = 0; i < 5; ++i)
            for (int j = i + 1; j < 5; ++j) G.add_edge(i, j);
        const std::vector<std::vector<int>> expected = {{0, 1, 2, 3, 4}};
        CHECK(cliques(G) == expected);
    }
}

TEST_CASE("graph capacity and edge validation", "[graphs]") {
    CHECK_THROWS_AS(LabeledGraph(200), NumericError);  // over the vertex capacity
    LabeledGraph G(3);
    CHECK_THROWS_AS(G.add_edge(1, 1), NumericError);
    CHECK_THROWS_AS(G.add_edge(-1, 2), NumericError);
    CHECK_THROWS_AS(G.add_edge(0, 3), NumericError);
}

TEST_CASE("decomposability matches simplicial-elimination oracle", "[graphs]") {
    Rng rng(67);
    int positives = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_int(7));
        const auto G = random_graph(n, rng.uniform(0.2, 0.9), rng);
        const bool expect = testutil::brute_chordal(G);
        positives += expect;
        INFO("trial " << trial);
        CHECK(is_decomposable(G) == expect);
    }
    CHECK(positives > 20);  // both verdicts exercised
    CHECK(positives < 180);
}

TEST_CASE("decomposability of named graphs", "[graphs]") {
    CHECK(is_decomposable(graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}})));        // path
    CHECK_FALSE(is_decomposable(graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}})));  // 4-cycle
    CHECK(is_decomposable(
        graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}})));  // chorded cycle
    CHECK_FALSE(is_decomposable(
        graph_from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}})));  // 5-cycle
    CHECK(is_decomposable(LabeledGraph(6)));                               // empty
}

TEST_CASE("junction forest of a path graph", "[graphs]") {
    const auto G = graph_from_edges(3, {{0, 1}, {1, 2}});
    const JunctionTree jt = junction_tree(G);
    const std::vector<std::vector<int>> expected_cliques = {{0, 1}, {1, 2}};
    CHECK(jt.cliques == expected_cliques);
    REQUIRE(jt.edges.size() == 1);
    const std::vector<std::vector<int>> expected_seps = {{1}};
    CHECK(jt.separators() == expected_seps);
}

TEST_CASE("junction forest spans components without joining them", "[graphs]") {
    /* two disjoint triangles */
    const auto G = graph_from_edges(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}});
    const JunctionTree jt = junction_tree(G);
    CHECK(jt.cliques.size() == 2);
    CHECK(jt.edges.empty());  // no separator links distinct components
}

TEST_CASE("junction forest satisfies running intersection on random graphs", "[graphs]") {
    Rng rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform_int(8));
        const auto G = random_decomposable(n, 3 * n, rng);
        const JunctionTree jt = junction_tree(G);
        CHECK(running_intersection(jt, n));
        /* separator count equals cliques minus components */
        CHECK(jt.separators().size() == jt.edges.size());
        /* every separator is nonempty and is the intersection of its cliques */
        for (const auto& e : jt.edges) {
            std::vector<int> inter;
            std::set_intersection(jt.cliques[static_cast<size_t>(e.a)].begin(),
                                  jt.cliques[static_cast<size_t>(e.a)].end(),
                                  jt.cliques[static_cast<size_t>(e.b)].begin(),
                                  jt.cliques[static_cast<size_t>(e.b)].end(),
                                  std::back_inserter(inter));
            CHECK(!inter.empty());
            CHECK(e.separator == inter);
        }
    }
}

TEST_CASE("junction forest rejects non-decomposable graphs", "[graphs]") {
    CHECK_THROWS_AS(junction_tree(graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}})),
                    NumericError);
}

TEST_CASE("single-edge admissibility matches the direct decomposability oracle", "[graphs]") {
    Rng rng(73);
    int admissible_count = 0, blocked_count = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform_int(6));
        const auto G = random_decomposable(n, 2 * n, rng);
        const JunctionTree jt = junction_tree(G);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) {
                if (G.has_edge(u, v)) continue;
                LabeledGraph H = G;
                H.add_edge(u, v);
                const bool expect = is_decomposable(H);
                INFO("trial " << trial << " edge (" << u << "," << v << ")");
                CHECK(admissible_edge(G, jt, {u, v}) == expect);
                (expect ? admissible_count : blocked_count) += 1;
            }
    }
    CHECK(admissible_count > 50);
    CHECK(blocked_count > 50);
}

TEST_CASE("admissibility fixtures", "[graphs]") {
    /* path 0-1-2-3: closing the cycle is blocked, a chord is fine */
    const auto P = graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    const auto jt = junction_tree(P);
    CHECK_FALSE(admissible_edge(P, jt, {0, 3}));
    CHECK(admissible_edge(P, jt, {0, 2}));
    CHECK_THROWS_AS(admissible_edge(P, jt, {0, 1}), NumericError);  // already present

    /* joining two components is always admissible */
    const auto D = graph_from_edges(4, {{0, 1}, {2, 3}});
    CHECK(admissible_edge(D, junction_tree(D), {1, 2}));
}

TEST_CASE("edge reduction of a square: sides then diagonals", "[graphs]") {
    const std::vector<Point> sq = {Point(0.0, 0.0), Point(1.0, 0.0), Point(1.0, 1.0),
                                   Point(0.0, 1.0)};
    const Filtration F = build_filtration(sq, {NerveKind::Cech, 2}, 2);
    const auto rows = clique_separator_trace(F);
    REQUIRE(rows.size() == 7);  // initial + 4 sides + 2 diagonals
    CHECK(rows[0].initial);
    CHECK(factorization_string(rows[0].cliques) == "[1][2][3][4]");

    /* sides arrive lexicographically at radius 0.5 */
    CHECK(rows[1].edge == std::make_pair(0, 1));
    CHECK(rows[1].accepted);
    CHECK(rows[2].edge == std::make_pair(0, 3));
    CHECK(rows[2].accepted);
    CHECK(rows[3].edge == std::make_pair(1, 2));
    CHECK(rows[3].accepted);
    CHECK(rows[4].edge == std::make_pair(2, 3));
    CHECK_FALSE(rows[4].accepted);  // would close a chordless 4-cycle
    for (int i = 1; i <= 4; ++i) CHECK(rows[static_cast<size_t>(i)].radius == Catch::Approx(0.5));

    /* both diagonals are admissible at sqrt(2)/2 */
    CHECK(rows[5].edge == std::make_pair(0, 2));
    CHECK(rows[5].accepted);
    CHECK(rows[6].edge == std::make_pair(1, 3));
    CHECK(rows[6].accepted);
    CHECK(rows[5].radius == Catch::Approx(std::sqrt(2.0) / 2.0));

    const auto G = decomposable_from_filtration(F);
    CHECK(G.edges.size() == 5);  // complete graph minus the rejected side
    CHECK_FALSE(G.has_edge(2, 3));
    CHECK(is_decomposable(G));
}

TEST_CASE("edge reduction trace on the five-vertex fixture", "[graphs]") {
    const Filtration F = build_filtration(trace_fixture(), {NerveKind::Cech, 2}, 2, 0.25);
    const auto rows = clique_separator_trace(F);
    REQUIRE(rows.size() == 8);

    CHECK(rows[0].initial);
    CHECK(factorization_string(rows[0].cliques) == "[1][2][3][4][5]");
    CHECK(rows[0].separators.empty());

    struct Expected {
        double radius;  // half the published inter-point distance
        std::pair<int, int> edge;
        bool accepted;
        std::string cliques;
        std::string separators;
    };
    const std::vector<Expected> expected = {
        {0.1565, {0, 2}, true, "[1,3][2][4][5]", ""},
        {0.1610, {3, 4}, true, "[1,3][2][4,5]", ""},
        {0.1900, {1, 4}, true, "[1,3][2,5][4,5]", "[5]"},
        {0.2110, {1, 3}, true, "[1,3][2,4,5]", ""},
        {0.2295, {2, 3}, true, "[1,3][2,4,5][3,4]", "[3][4]"},
        {0.2370, {0, 1}, false, "[1,3][2,4,5][3,4]", "[3][4]"},
        {0.2495, {0, 3}, true, "[1,3,4][2,4,5]", "[4]"},
    };
    for (size_t i = 0; i < expected.size(); ++i) {
        const auto& row = rows[i + 1];
        const auto& exp = expected[i];
        INFO("row " << i + 1);
        CHECK(row.radius == Catch::Approx(exp.radius).margin(5e-4));
        CHECK(row.edge == exp.edge);
        CHECK(row.accepted == exp.accepted);
        CHECK(factorization_string(row.cliques) == exp.cliques);
        CHECK(factorization_string(row.separators) == exp.separators);
    }

    const auto G = decomposable_from_filtration(F);
    CHECK(factorization_string(cliques(G)) == "[1,3,4][2,4,5]");
}

TEST_CASE("edge reduction output is always decomposable", "[graphs]") {
    Rng rng(79);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform_int(10));
        const auto pts = testutil::random_points(n, 2, rng);
        const Filtration F = build_filtration(pts, {NerveKind::Cech, 2}, 2);
        const auto G = decomposable_from_filtration(F);
        CHECK(is_decomposable(G));
        /* the reduction only removes edges relative to the raw proximity graph */
        const auto raw = from_skeleton(F.complexes.back());
        for (const auto& e : G.edges) CHECK(raw.edges.count(e) == 1);
    }
}

TEST_CASE("rejected edges are never reconsidered", "[graphs]") {
    /* the square again: after both diagonals are in, side (2,3) would now be
     * admissible, but the trace must not revisit it */
    const std::vector<Point> sq = {Point(0.0, 0.0), Point(1.0, 0.0), Point(1.0, 1.0),
                                   Point(0.0, 1.0)};
    const auto G = decomposable_from_filtration(build_filtration(sq, {NerveKind::Cech, 2}, 2));
    CHECK_FALSE(G.has_edge(2, 3));
    LabeledGraph H = G;
    H.add_edge(2, 3);
    CHECK(is_decomposable(H));  // it would have been admissible afterwards
}

TEST_CASE("factorization strings", "[graphs]") {
    CHECK(factorization_string({{0, 1}, {1, 2, 4}, {3}}) == "[1,2][2,3,5][4]");
    CHECK(factorization_string({}) == "");
    CHECK(factorization_string({{2}}) == "[3]");
    /* blocks are sorted, as are members within a block */
    CHECK(factorization_string({{4, 1, 2}, {0}}) == "[1][2,3,5]");
}

TEST_CASE("skeleton graph round-trip", "[graphs]") {
    SimplicialComplex K;
    K.n_vertices = 4;
    detail::add_with_faces(K, {0, 1, 2});
    detail::add_with_faces(K, {3});
    const auto G = from_skeleton(K);
    CHECK(G.n_vertices == 4);
    CHECK(G.edges == std::set<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}});
}
