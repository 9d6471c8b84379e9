#pragma once

/* Undirected labeled graphs, maximal-clique enumeration, chordality testing,
 * junction forests with separator multiplicity, the single-edge
 * decomposability test, and the filtration-driven decomposable-graph
 * construction with its clique/separator trace. */

#include <algorithm>
#include <bitset>
#include <deque>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nerve/complexes.hpp"

namespace nerve {

constexpr int kMaxGraphVertices = 128;
using VertexSet = std::bitset<kMaxGraphVertices>;

struct LabeledGraph {
    int n_vertices = 0;
    std::set<std::pair<int, int>> edges;          // (i, j) with i < j
    std::vector<VertexSet> adj;

    LabeledGraph() = default;
    explicit LabeledGraph(int n) : n_vertices(n), adj(static_cast<size_t>(n)) {
        if (n > kMaxGraphVertices) throw NumericError("graph exceeds vertex capacity");
    }

    bool has_edge(int a, int b) const { return adj[static_cast<size_t>(a)][static_cast<size_t>(b)]; }

    void add_edge(int a, int b) {
        if (a == b) throw NumericError("self-loop");
        if (a < 0 || b < 0 || a >= n_vertices || b >= n_vertices)
            throw NumericError("edge endpoint out of range");
        if (a > b) std::swap(a, b);
        edges.emplace(a, b);
        adj[static_cast<size_t>(a)].set(static_cast<size_t>(b));
        adj[static_cast<size_t>(b)].set(static_cast<size_t>(a));
    }
};

/* graph of the 1-simplices of a complex */
inline LabeledGraph from_skeleton(const SimplicialComplex& K) {
    LabeledGraph G(K.n_vertices);
    for (const auto& s : K.simplices)
        if (s.size() == 2) G.add_edge(s[0], s[1]);
    return G;
}

namespace detail {

inline std::vector<int> set_to_vector(const VertexSet& s, int n) {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (s[static_cast<size_t>(i)]) out.push_back(i);
    return out;
}

/* Bron-Kerbosch with pivoting */
inline void bron_kerbosch(const LabeledGraph& G, VertexSet R, VertexSet P, VertexSet X,
                          std::vector<std::vector<int>>& out) {
    if (P.none() && X.none()) {
        out.push_back(set_to_vector(R, G.n_vertices));
        return;
    }
    /* pivot: vertex of P ∪ X with the most neighbors in P */
    int pivot = -1;
    size_t best = 0;
    const VertexSet PX = P | X;
    for (int u = 0; u < G.n_vertices; ++u) {
        if (!PX[static_cast<size_t>(u)]) continue;
        const size_t cnt = (P & G.adj[static_cast<size_t>(u)]).count();
        if (pivot < 0 || cnt > best) { pivot = u; best = cnt; }
    }
    const VertexSet candidates = P & ~G.adj[static_cast<size_t>(pivot)];
    for (int v = 0; v < G.n_vertices; ++v) {
        if (!candidates[static_cast<size_t>(v)]) continue;
        VertexSet Rv = R; Rv.set(static_cast<size_t>(v));
        bron_kerbosch(G, Rv, P & G.adj[static_cast<size_t>(v)], X & G.adj[static_cast<size_t>(v)], out);
        P.reset(static_cast<size_t>(v));
        X.set(static_cast<size_t>(v));
    }
}

}  // namespace detail

/* all maximal cliques, sorted lexicographically */
inline std::vector<std::vector<int>> cliques(const LabeledGraph& G) {
    std::vector<std::vector<int>> out;
    VertexSet P;
    for (int i = 0; i < G.n_vertices; ++i) P.set(static_cast<size_t>(i));
    detail::bron_kerbosch(G, VertexSet{}, P, VertexSet{}, out);
    std::sort(out.begin(), out.end());
    return out;
}

/* chordality via maximum-cardinality search + perfect-elimination check */
inline bool is_decomposable(const LabeledGraph& G) {
    const int n = G.n_vertices;
    if (n == 0) return true;
    std::vector<int> weight(static_cast<size_t>(n), 0), order;  // MCS visit order
    std::vector<int> pos(static_cast<size_t>(n), -1);
    std::vector<bool> visited(static_cast<size_t>(n), false);
    order.reserve(static_cast<size_t>(n));
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int v = 0; v < n; ++v)
            if (!visited[static_cast<size_t>(v)] &&
                (best < 0 || weight[static_cast<size_t>(v)] > weight[static_cast<size_t>(best)]))
                best = v;
        visited[static_cast<size_t>(best)] = true;
        pos[static_cast<size_t>(best)] = step;
        order.push_back(best);
        for (int w = 0; w < n; ++w)
            if (G.has_edge(best, w) && !visited[static_cast<size_t>(w)])
                ++weight[static_cast<size_t>(w)];
    }
    /* reverse MCS order is an elimination order iff chordal: for each vertex,
     * its earlier-MCS neighbors must be adjacent to the latest of them */
    for (int i = n - 1; i >= 0; --i) {
        const int v = order[static_cast<size_t>(i)];
        int latest = -1;
        for (int w = 0; w < n; ++w)
            if (G.has_edge(v, w) && pos[static_cast<size_t>(w)] < i &&
                (latest < 0 || pos[static_cast<size_t>(w)] > pos[static_cast<size_t>(latest)]))
                latest = w;
        if (latest < 0) continue;
        for (int w = 0; w < n; ++w) {
            if (w == latest) continue;
            if (G.has_edge(v, w) && pos[static_cast<size_t>(w)] < pos[static_cast<size_t>(latest)]) {
                if (!G.has_edge(latest, w)) return false;
            }
        }
    }
    return true;
}

struct JunctionTree {
    struct Edge {
        int a = 0, b = 0;            // clique indices
        std::vector<int> separator;  // nonempty intersection
    };
    std::vector<std::vector<int>> cliques;  // sorted lexicographically
    std::vector<Edge> edges;                // spanning forest

    /* separator multiset (with multiplicity), sorted for canonical output */
    std::vector<std::vector<int>> separators() const {
        std::vector<std::vector<int>> out;
        for (const auto& e : edges) out.push_back(e.separator);
        std::sort(out.begin(), out.end());
        return out;
    }
};

/* junction forest: maximum-weight spanning forest over positive clique
 * intersections; components are never joined. Ties break by lexicographic
 * clique order for determinism. */
inline JunctionTree junction_tree(const LabeledGraph& G) {
    if (!is_decomposable(G)) throw NumericError("junction_tree: graph is not decomposable");
    JunctionTree jt;
    jt.cliques = cliques(G);
    const int m = static_cast<int>(jt.cliques.size());
    struct Cand { int w, a, b; };
    std::vector<Cand> cands;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            std::vector<int> inter;
            std::set_intersection(jt.cliques[static_cast<size_t>(i)].begin(), jt.cliques[static_cast<size_t>(i)].end(),
                                  jt.cliques[static_cast<size_t>(j)].begin(), jt.cliques[static_cast<size_t>(j)].end(),
                                  std::back_inserter(inter));
            if (!inter.empty()) cands.push_back({static_cast<int>(inter.size()), i, j});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (x.w != y.w) return x.w > y.w;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    std::vector<int> parent(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) parent[static_cast<size_t>(i)] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    for (const auto& c : cands) {
        const int ra = find(c.a), rb = find(c.b);
        if (ra == rb) continue;
        parent[static_cast<size_t>(ra)] = rb;
        JunctionTree::Edge e;
        e.a = c.a;
        e.b = c.b;
        std::set_intersection(jt.cliques[static_cast<size_t>(c.a)].begin(), jt.cliques[static_cast<size_t>(c.a)].end(),
                              jt.cliques[static_cast<size_t>(c.b)].begin(), jt.cliques[static_cast<size_t>(c.b)].end(),
                              std::back_inserter(e.separator));
        jt.edges.push_back(e);
    }
    return jt;
}

namespace detail {

/* separators on the forest path between cliques `from` and `to`; empty result
 * plus `found=false` when they lie in different forest components */
inline std::vector<std::vector<int>> jt_path_separators(const JunctionTree& jt, int from, int to,
                                                        bool& found) {
    const int m = static_cast<int>(jt.cliques.size());
    std::vector<std::vector<std::pair<int, int>>> nbr(static_cast<size_t>(m));  // (clique, edge idx)
    for (int e = 0; e < static_cast<int>(jt.edges.size()); ++e) {
        nbr[static_cast<size_t>(jt.edges[static_cast<size_t>(e)].a)].push_back({jt.edges[static_cast<size_t>(e)].b, e});
        nbr[static_cast<size_t>(jt.edges[static_cast<size_t>(e)].b)].push_back({jt.edges[static_cast<size_t>(e)].a, e});
    }
    std::vector<int> prev_edge(static_cast<size_t>(m), -2);
    std::deque<int> queue{from};
    prev_edge[static_cast<size_t>(from)] = -1;
    while (!queue.empty()) {
        const int c = queue.front();
        queue.pop_front();
        if (c == to) break;
        for (const auto& [nc, e] : nbr[static_cast<size_t>(c)])
            if (prev_edge[static_cast<size_t>(nc)] == -2) {
                prev_edge[static_cast<size_t>(nc)] = e;
                queue.push_back(nc);
            }
    }
    std::vector<std::vector<int>> seps;
    if (prev_edge[static_cast<size_t>(to)] == -2) {
        found = false;
        return seps;
    }
    found = true;
    int cur = to;
    while (cur != from) {
        const int e = prev_edge[static_cast<size_t>(cur)];
        seps.push_back(jt.edges[static_cast<size_t>(e)].separator);
        cur = (jt.edges[static_cast<size_t>(e)].a == cur) ? jt.edges[static_cast<size_t>(e)].b
                                                          : jt.edges[static_cast<size_t>(e)].a;
    }
    return seps;
}

inline bool same_component(const LabeledGraph& G, int u, int v) {
    std::vector<bool> seen(static_cast<size_t>(G.n_vertices), false);
    std::deque<int> queue{u};
    seen[static_cast<size_t>(u)] = true;
    while (!queue.empty()) {
        const int x = queue.front();
        queue.pop_front();
        if (x == v) return true;
        for (int w = 0; w < G.n_vertices; ++w)
            if (G.has_edge(x, w) && !seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = true;
                queue.push_back(w);
            }
    }
    return false;
}

}  // namespace detail

/* Single-edge decomposability test: adding e keeps the graph decomposable iff
 * its endpoints lie in different components, or some cliques R ∋ u and T ∋ v
 * have R ∩ T equal to a separator on the forest path between R and T. */
inline bool admissible_edge(const LabeledGraph& G, const JunctionTree& jt,
                            std::pair<int, int> e) {
    const auto [u, v] = e;
    if (G.has_edge(u, v)) throw NumericError("admissible_edge: edge already present");
    if (!detail::same_component(G, u, v)) return true;
    std::vector<int> r_idx, t_idx;
    for (int i = 0; i < static_cast<int>(jt.cliques.size()); ++i) {
        const auto& c = jt.cliques[static_cast<size_t>(i)];
        if (std::binary_search(c.begin(), c.end(), u)) r_idx.push_back(i);
        if (std::binary_search(c.begin(), c.end(), v)) t_idx.push_back(i);
    }
    for (int ri : r_idx)
        for (int ti : t_idx) {
            std::vector<int> inter;
            std::set_intersection(jt.cliques[static_cast<size_t>(ri)].begin(), jt.cliques[static_cast<size_t>(ri)].end(),
                                  jt.cliques[static_cast<size_t>(ti)].begin(), jt.cliques[static_cast<size_t>(ti)].end(),
                                  std::back_inserter(inter));
            bool connected = false;
            const auto seps = detail::jt_path_separators(jt, ri, ti, connected);
            if (!connected) continue;
            for (const auto& s : seps)
                if (s == inter) return true;
        }
    return false;
}

struct TraceRow {
    std::vector<std::vector<int>> cliques;
    std::vector<std::vector<int>> separators;
    double radius = 0.0;
    std::pair<int, int> edge{-1, -1};  // (-1,-1) on the initial row
    bool accepted = false;
    bool initial = false;
};

namespace detail {

/* edges of the filtration in proposal order: ascending critical radius, then
 * lexicographic within a step */
inline std::vector<std::pair<double, std::pair<int, int>>> edge_events(const Filtration& F) {
    std::vector<std::pair<double, std::pair<int, int>>> events;
    for (size_t step = 1; step < F.complexes.size(); ++step) {
        std::vector<std::pair<int, int>> fresh;
        for (const auto& s : F.complexes[step].simplices) {
            if (s.size() != 2) continue;
            if (!F.complexes[step - 1].contains(s)) fresh.push_back({s[0], s[1]});
        }
        std::sort(fresh.begin(), fresh.end());
        for (const auto& e : fresh) events.push_back({F.critical_radii[step - 1], e});
    }
    return events;
}

}  // namespace detail

/* Filtration-driven construction of a decomposable graph: new edges are
 * proposed in order and accepted iff admissible; rejected edges are never
 * reconsidered. Returns the trace (initial row + one row per proposal). */
inline std::vector<TraceRow> clique_separator_trace(const Filtration& F) {
    const int n = F.complexes.empty() ? 0 : F.complexes[0].n_vertices;
    LabeledGraph G(n);
    JunctionTree jt = junction_tree(G);
    std::vector<TraceRow> rows;
    TraceRow first;
    first.initial = true;
    first.cliques = jt.cliques;
    first.separators = jt.separators();
    rows.push_back(first);
    for (const auto& [radius, e] : detail::edge_events(F)) {
        TraceRow row;
        row.radius = radius;
        row.edge = e;
        row.accepted = admissible_edge(G, jt, e);
        if (row.accepted) {
            G.add_edge(e.first, e.second);
            jt = junction_tree(G);
        }
        row.cliques = jt.cliques;
        row.separators = jt.separators();
        rows.push_back(row);
    }
    return rows;
}

inline LabeledGraph decomposable_from_filtration(const Filtration& F) {
    const int n = F.complexes.empty() ? 0 : F.complexes[0].n_vertices;
    LabeledGraph G(n);
    JunctionTree jt = junction_tree(G);
    for (const auto& [radius, e] : detail::edge_events(F)) {
        (void)radius;
        if (admissible_edge(G, jt, e)) {
            G.add_edge(e.first, e.second);
            jt = junction_tree(G);
        }
    }
    return G;
}

/* canonical bracketed block string, 1-based: "[1,2][2,3,5][4]" */
inline std::string factorization_string(std::vector<std::vector<int>> blocks) {
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end());
    std::string out;
    for (const auto& b : blocks) {
        out += '[';
        for (size_t i = 0; i < b.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(b[i] + 1);
        }
        out += ']';
    }
    return out;
}

}  // namespace nerve
