#pragma once

/* Abstract simplicial complexes, the three nerve constructions (Čech, Alpha,
 * Delaunay), skeletons, maximal simplices, and radius filtrations. */

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "nerve/geometry.hpp"

namespace nerve {

using Simplex = std::vector<int>;  // sorted vertex indices, 0-based

struct SimplicialComplex {
    int n_vertices = 0;
    std::set<Simplex> simplices;  // downward closed, every member nonempty

    bool contains(const Simplex& s) const { return simplices.count(s) > 0; }
};

enum class NerveKind { Cech, Alpha, Delaunay };

struct NerveClass {
    NerveKind kind = NerveKind::Cech;
    int dim = 2;
};

struct Filtration {
    std::vector<SimplicialComplex> complexes;  // K^0 (vertices only) first
    std::vector<double> critical_radii;        // radii of K^1..K^k, increasing
};

namespace detail {

inline void add_with_faces(SimplicialComplex& K, const Simplex& s) {
    const size_t k = s.size();
    for (uint32_t mask = 1; mask < (1u << k); ++mask) {
        Simplex f;
        for (size_t b = 0; b < k; ++b)
            if (mask & (1u << b)) f.push_back(s[b]);
        K.simplices.insert(std::move(f));
    }
}

inline SimplicialComplex vertex_complex(int n) {
    SimplicialComplex K;
    K.n_vertices = n;
    for (int i = 0; i < n; ++i) K.simplices.insert(Simplex{i});
    return K;
}

/* enumerate cliques of the proximity graph together with their miniball
 * radius, emitting (simplex, radius) pairs for |σ| >= 2; candidates grow from
 * edges by common neighbors, so cost stays near the output size */
template <typename Emit>
inline void enumerate_cech(const std::vector<Point>& pts, double r, int max_card, Emit emit) {
    const int n = static_cast<int>(pts.size());
    std::vector<std::vector<int>> nbr(static_cast<size_t>(n));
    const double t2 = 4.0 * r * r;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (squared_distance(pts[static_cast<size_t>(i)], pts[static_cast<size_t>(j)]) <= t2) {
                nbr[static_cast<size_t>(i)].push_back(j);
            }

    std::vector<int> stack;
    std::vector<Point> sub;
    auto grow = [&](auto&& self, const std::vector<int>& common) -> void {
        if (static_cast<int>(stack.size()) >= max_card) return;
        for (int v : common) {
            stack.push_back(v);
            sub.push_back(pts[static_cast<size_t>(v)]);
            const Ball mb = min_enclosing_ball(sub);
            if (mb.radius <= r) {
                emit(stack, mb.radius);
                /* candidates after v: common neighbors ahead of v */
                std::vector<int> next;
                for (int w : common)
                    if (w > v && std::binary_search(nbr[static_cast<size_t>(v)].begin(),
                                                    nbr[static_cast<size_t>(v)].end(), w))
                        next.push_back(w);
                if (!next.empty()) self(self, next);
            }
            stack.pop_back();
            sub.pop_back();
        }
    };
    for (int i = 0; i < n; ++i) {
        stack.assign(1, i);
        sub.assign(1, pts[static_cast<size_t>(i)]);
        grow(grow, nbr[static_cast<size_t>(i)]);
        stack.clear();
        sub.clear();
    }
}

}  // namespace detail

/* Čech nerve at radius r, enumerated to subsets of size <= max_card */
inline SimplicialComplex cech_complex(const std::vector<Point>& V, double r, int max_card) {
    if (r <= 0.0) throw NumericError("cech_complex: radius must be positive");
    if (max_card < 2) throw NumericError("cech_complex: max_card must be at least 2");
    SimplicialComplex K = detail::vertex_complex(static_cast<int>(V.size()));
    detail::enumerate_cech(V, r, max_card,
                           [&](const std::vector<int>& s, double) { K.simplices.insert(s); });
    return K;
}

/* downward closure of the Delaunay triangulation */
inline SimplicialComplex delaunay_complex(const std::vector<Point>& V) {
    const int d = V.empty() ? 2 : V[0].dim;
    const Triangulation tri = delaunay(V, d);
    SimplicialComplex K = detail::vertex_complex(static_cast<int>(V.size()));
    for (const auto& s : tri.simplices) detail::add_with_faces(K, s);
    return K;
}

/* Alpha nerve at radius r: Delaunay simplices whose alpha value is <= r */
inline SimplicialComplex alpha_complex(const std::vector<Point>& V, double r) {
    if (r <= 0.0) throw NumericError("alpha_complex: radius must be positive");
    const int d = V.empty() ? 2 : V[0].dim;
    const Triangulation tri = delaunay(V, d);
    const auto alpha = alpha_values(tri);
    SimplicialComplex K = detail::vertex_complex(static_cast<int>(V.size()));
    for (const auto& [s, a] : alpha)
        if (a <= r) K.simplices.insert(s);
    return K;
}

/* restriction to simplices of cardinality <= p+1 */
inline SimplicialComplex p_skeleton(const SimplicialComplex& K, int p) {
    if (p < 0) throw NumericError("p_skeleton: p must be nonnegative");
    SimplicialComplex out;
    out.n_vertices = K.n_vertices;
    for (const auto& s : K.simplices)
        if (static_cast<int>(s.size()) <= p + 1) out.simplices.insert(s);
    return out;
}

/* simplices not strictly contained in any other simplex of K */
inline std::vector<Simplex> maximal_simplices(const SimplicialComplex& K) {
    std::vector<Simplex> out;
    for (const auto& s : K.simplices) {
        bool maximal = true;
        for (const auto& t : K.simplices) {
            if (t.size() <= s.size()) continue;
            if (std::includes(t.begin(), t.end(), s.begin(), s.end())) {
                maximal = false;
                break;
            }
        }
        if (maximal) out.push_back(s);
    }
    return out;
}

/* connected components of the 1-skeleton (isolated vertices count) */
inline int component_count(const SimplicialComplex& K) {
    const int n = K.n_vertices;
    std::vector<int> parent(static_cast<size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    for (const auto& s : K.simplices)
        if (s.size() == 2) {
            const int a = find(s[0]), b = find(s[1]);
            if (a != b) parent[static_cast<size_t>(a)] = b;
        }
    std::set<int> roots;
    for (int i = 0; i < n; ++i) roots.insert(find(i));
    return static_cast<int>(roots.size());
}

/* Filtration over increasing radius: one complex per distinct critical
 * radius (radii equal within 1e-12 merge); K^0 holds the vertices only.
 * r_max truncates (simplices with critical radius > r_max are dropped). */
inline Filtration build_filtration(const std::vector<Point>& V, const NerveClass& cls,
                                   int max_card,
                                   double r_max = std::numeric_limits<double>::infinity()) {
    std::vector<std::pair<double, Simplex>> events;  // (critical radius, simplex)

    if (cls.kind == NerveKind::Cech) {
        /* enumerate at the truncation radius; each clique's miniball radius is
         * its critical radius */
        double upper = r_max;
        if (!std::isfinite(upper)) {
            /* diameter bound: every subset's miniball radius is at most the
             * full point-set miniball radius */
            upper = V.size() >= 1 ? min_enclosing_ball(V).radius + 1e-12 : 0.0;
        }
        detail::enumerate_cech(V, upper, max_card, [&](const std::vector<int>& s, double rad) {
            events.emplace_back(rad, s);
        });
    } else if (cls.kind == NerveKind::Alpha) {
        const Triangulation tri = delaunay(V, cls.dim);
        for (const auto& [s, a] : alpha_values(tri)) {
            if (s.size() < 2 || static_cast<int>(s.size()) > max_card) continue;
            if (a <= r_max) events.emplace_back(a, s);
        }
    } else {
        throw NumericError("build_filtration: Delaunay complexes have no radius filtration");
    }

    std::sort(events.begin(), events.end());
    Filtration F;
    F.complexes.push_back(detail::vertex_complex(static_cast<int>(V.size())));
    size_t i = 0;
    while (i < events.size()) {
        const double r = events[i].first;
        SimplicialComplex K = F.complexes.back();
        while (i < events.size() && events[i].first <= r + 1e-12) {
            K.simplices.insert(events[i].second);
            ++i;
        }
        F.complexes.push_back(std::move(K));
        F.critical_radii.push_back(r);
    }
    return F;
}

}  // namespace nerve
