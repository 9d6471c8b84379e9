#pragma once

/* Euclidean primitives in R^2/R^3: smallest enclosing balls, ball-intersection
 * predicates, circumballs, and brute-force Delaunay triangulation with a
 * deterministic perturbation scheme for degenerate inputs. */

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "nerve/common.hpp"

namespace nerve {

struct Ball {
    Point center;
    double radius = -1.0;  // negative marks "no ball yet"
};

struct Triangulation {
    std::vector<Point> vertices;
    std::vector<std::vector<int>> simplices;  // sorted (d+1)-tuples of indices
};

namespace detail {

/* tolerance for in-circumball predicates */
constexpr double kEpsGeom = 1e-9;
/* deterministic jitter magnitude used to break cocircular/cospherical ties;
 * large against kEpsGeom, negligible against fixture tolerances */
constexpr double kPerturb = 1e-7;

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/* deterministic per-(index, coordinate) unit jitter in [-1, 1) */
inline double jitter(int index, int coord) {
    const uint64_t h = splitmix64(static_cast<uint64_t>(index) * 7919ULL +
                                  static_cast<uint64_t>(coord) + 1ULL);
    return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
}

/* ball with all points of `support` on its boundary (|support| <= d+1);
 * falls back to the diametral ball of the farthest pair when the support is
 * affinely degenerate */
inline Ball ball_from_support(const std::vector<Point>& support) {
    Ball b;
    const size_t k = support.size();
    if (k == 0) return b;
    const int dim = support[0].dim;
    if (k == 1) {
        b.center = support[0];
        b.radius = 0.0;
        return b;
    }
    if (k == 2) {
        b.center = support[0];
        for (int i = 0; i < dim; ++i) b.center[i] = 0.5 * (support[0][i] + support[1][i]);
        b.radius = 0.5 * distance(support[0], support[1]);
        return b;
    }
    auto farthest_pair_ball = [&]() {
        double best = -1.0;
        size_t bi = 0, bj = 1;
        for (size_t i = 0; i < k; ++i)
            for (size_t j = i + 1; j < k; ++j) {
                const double d2 = squared_distance(support[i], support[j]);
                if (d2 > best) { best = d2; bi = i; bj = j; }
            }
        return ball_from_support({support[bi], support[bj]});
    };
    if (k == 3) {
        /* circumcircle within the affine hull of three points (works in 2D and 3D) */
        const Point& a = support[0];
        double u[3], v[3];
        for (int i = 0; i < dim; ++i) { u[i] = support[1][i] - a[i]; v[i] = support[2][i] - a[i]; }
        double uu = 0, vv = 0, uv = 0;
        for (int i = 0; i < dim; ++i) { uu += u[i] * u[i]; vv += v[i] * v[i]; uv += u[i] * v[i]; }
        const double det = uu * vv - uv * uv;
        const double scale = std::max(uu, vv);
        if (det <= 1e-14 * scale * scale) return farthest_pair_ball();
        const double alpha = 0.5 * (uu * vv - vv * uv) / det;
        const double beta = 0.5 * (vv * uu - uu * uv) / det;
        b.center = a;
        for (int i = 0; i < dim; ++i) b.center[i] = a[i] + alpha * u[i] + beta * v[i];
        b.center.dim = dim;
        b.radius = distance(b.center, a);
        return b;
    }
    /* k == 4, dim == 3: circumsphere via 2(p_i - p_0) . x = |p_i|^2 - |p_0|^2 */
    const Point& a = support[0];
    double m[3][3], rhs[3];
    for (int r = 0; r < 3; ++r) {
        double n2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            m[r][i] = 2.0 * (support[static_cast<size_t>(r) + 1][i] - a[i]);
            n2 += support[static_cast<size_t>(r) + 1][i] * support[static_cast<size_t>(r) + 1][i] -
                  a[i] * a[i];
        }
        rhs[r] = n2;
    }
    /* Gaussian elimination with partial pivoting on the 3x3 system */
    int perm[3] = {0, 1, 2};
    double scale_m = 0.0;
    for (auto& row : m)
        for (double x : row) scale_m = std::max(scale_m, std::abs(x));
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        std::swap(m[col], m[piv]);
        std::swap(rhs[col], rhs[piv]);
        std::swap(perm[col], perm[piv]);
        if (std::abs(m[col][col]) <= 1e-13 * std::max(1.0, scale_m)) return farthest_pair_ball();
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[r][col] / m[col][col];
            for (int cc = col; cc < 3; ++cc) m[r][cc] -= f * m[col][cc];
            rhs[r] -= f * rhs[col];
        }
    }
    double x[3];
    for (int r = 2; r >= 0; --r) {
        double s = rhs[r];
        for (int cc = r + 1; cc < 3; ++cc) s -= m[r][cc] * x[cc];
        x[r] = s / m[r][r];
    }
    b.center = Point(x[0], x[1], x[2]);
    b.radius = distance(b.center, a);
    return b;
}

inline bool in_ball(const Ball& b, const Point& p) {
    if (b.radius < 0.0) return false;
    const double r2 = b.radius * b.radius;
    return squared_distance(b.center, p) <= r2 + 1e-10 * std::max(1.0, r2);
}

/* Welzl recursion over a move-to-front working order */
inline Ball welzl(std::vector<const Point*>& pts, size_t n, std::vector<Point>& support,
                  size_t max_support) {
    if (n == 0 || support.size() == max_support) return ball_from_support(support);
    Ball b = welzl(pts, n - 1, support, max_support);
    const Point* p = pts[n - 1];
    if (in_ball(b, *p)) return b;
    support.push_back(*p);
    b = welzl(pts, n - 1, support, max_support);
    support.pop_back();
    /* move-to-front: keep boundary-defining points early */
    for (size_t i = n - 1; i > 0; --i) pts[i] = pts[i - 1];
    pts[0] = p;
    return b;
}

}  // namespace detail

/* smallest ball containing all points (unique; radius 0 for one point) */
inline Ball min_enclosing_ball(const std::vector<Point>& points) {
    if (points.empty()) throw NumericError("min_enclosing_ball: empty input");
    const int dim = points[0].dim;
    for (const Point& p : points)
        if (p.dim != dim) throw NumericError("min_enclosing_ball: dimension mismatch");
    std::vector<const Point*> work;
    work.reserve(points.size());
    for (const Point& p : points) work.push_back(&p);
    std::vector<Point> support;
    Ball b = detail::welzl(work, work.size(), support, static_cast<size_t>(dim) + 1);
    if (b.radius < 0.0) b.radius = 0.0;
    return b;
}

/* true iff the closed balls B(c_i, r) share a point (equality counts) */
inline bool balls_intersect(const std::vector<Point>& centers, double r) {
    if (r <= 0.0) throw NumericError("balls_intersect: radius must be positive");
    return min_enclosing_ball(centers).radius <= r;
}

namespace detail {

/* circumball of exactly k = dim+1 affinely independent points (top simplex) */
inline Ball circumball(const std::vector<Point>& pts) { return ball_from_support(pts); }

inline bool all_affinely_dependent(const std::vector<Point>& pts, int dim) {
    const size_t n = pts.size();
    if (n < static_cast<size_t>(dim) + 1) return true;
    if (dim == 2) {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                for (size_t k = j + 1; k < n; ++k) {
                    const double area2 = (pts[j][0] - pts[i][0]) * (pts[k][1] - pts[i][1]) -
                                         (pts[k][0] - pts[i][0]) * (pts[j][1] - pts[i][1]);
                    if (std::abs(area2) > 1e-12) return false;
                }
        return true;
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            for (size_t k = j + 1; k < n; ++k)
                for (size_t l = k + 1; l < n; ++l) {
                    double u[3], v[3], w[3];
                    for (int t = 0; t < 3; ++t) {
                        u[t] = pts[j][t] - pts[i][t];
                        v[t] = pts[k][t] - pts[i][t];
                        w[t] = pts[l][t] - pts[i][t];
                    }
                    const double vol = u[0] * (v[1] * w[2] - v[2] * w[1]) -
                                       u[1] * (v[0] * w[2] - v[2] * w[0]) +
                                       u[2] * (v[0] * w[1] - v[1] * w[0]);
                    if (std::abs(vol) > 1e-12) return false;
                }
    return true;
}

}  // namespace detail

/* Brute-force Delaunay triangulation for d in {2,3}: a (d+1)-subset is a
 * simplex iff its circumball contains no other point. Ties (cocircular /
 * cospherical subsets) are broken by a deterministic index-keyed jitter that
 * is applied to predicate copies only. */
inline Triangulation delaunay(const std::vector<Point>& points, int d) {
    if (d != 2 && d != 3) throw NumericError("delaunay: dimension must be 2 or 3");
    const size_t n = points.size();
    if (n < static_cast<size_t>(d) + 1)
        throw NumericError("delaunay: need at least d+1 points");
    for (const Point& p : points)
        if (p.dim != d) throw NumericError("delaunay: point dimension mismatch");
    if (detail::all_affinely_dependent(points, d))
        throw NumericError("delaunay: degenerate input (all points affinely dependent)");

    std::vector<Point> pert = points;
    for (size_t i = 0; i < n; ++i)
        for (int k = 0; k < d; ++k)
            pert[i][k] += detail::kPerturb * detail::jitter(static_cast<int>(i), k);

    Triangulation tri;
    tri.vertices = points;
    std::vector<size_t> idx(static_cast<size_t>(d) + 1);
    const double tol = detail::kEpsGeom;

    auto consider = [&](const std::vector<size_t>& ix) {
        std::vector<Point> sub;
        for (size_t i : ix) sub.push_back(pert[i]);
        const Ball cb = detail::circumball(sub);
        if (cb.radius < 0.0) return;
        /* affine degeneracy of the subset itself: the fallback ball does not
         * touch all support points; detect and skip */
        for (const Point& p : sub)
            if (std::abs(squared_distance(cb.center, p) - cb.radius * cb.radius) >
                1e-7 * std::max(1.0, cb.radius * cb.radius))
                return;
        const double r2 = cb.radius * cb.radius;
        for (size_t m = 0; m < n; ++m) {
            if (std::find(ix.begin(), ix.end(), m) != ix.end()) continue;
            if (squared_distance(cb.center, pert[m]) < r2 - tol * std::max(1.0, r2)) return;
        }
        std::vector<int> simplex;
        for (size_t i : ix) simplex.push_back(static_cast<int>(i));
        std::sort(simplex.begin(), simplex.end());
        tri.simplices.push_back(simplex);
    };

    if (d == 2) {
        for (idx[0] = 0; idx[0] < n; ++idx[0])
            for (idx[1] = idx[0] + 1; idx[1] < n; ++idx[1])
                for (idx[2] = idx[1] + 1; idx[2] < n; ++idx[2]) consider(idx);
    } else {
        for (idx[0] = 0; idx[0] < n; ++idx[0])
            for (idx[1] = idx[0] + 1; idx[1] < n; ++idx[1])
                for (idx[2] = idx[1] + 1; idx[2] < n; ++idx[2])
                    for (idx[3] = idx[2] + 1; idx[3] < n; ++idx[3]) consider(idx);
    }
    std::sort(tri.simplices.begin(), tri.simplices.end());
    return tri;
}

/* Alpha values over the closure of a Delaunay triangulation.
 *
 * Top simplices carry their circumradius. A lower simplex carries the radius
 * of its smallest circumscribing ball when that ball is empty of other
 * points, and otherwise inherits the minimum alpha value among its direct
 * cofaces. Vertices carry 0. Computed from the unperturbed coordinates. */
inline std::map<std::vector<int>, double> alpha_values(const Triangulation& tri) {
    const std::vector<Point>& pts = tri.vertices;
    const int d = pts.empty() ? 2 : pts[0].dim;
    std::map<std::vector<int>, double> alpha;

    /* closure, grouped by cardinality */
    std::vector<std::vector<std::vector<int>>> by_card(static_cast<size_t>(d) + 2);
    std::map<std::vector<int>, bool> seen;
    for (const auto& top : tri.simplices) {
        const size_t k = top.size();
        for (uint32_t mask = 1; mask < (1u << k); ++mask) {
            std::vector<int> f;
            for (size_t b = 0; b < k; ++b)
                if (mask & (1u << b)) f.push_back(top[b]);
            if (!seen[f]) {
                seen[f] = true;
                by_card[f.size()].push_back(f);
            }
        }
    }

    for (const auto& top : tri.simplices) {
        std::vector<Point> sub;
        for (int i : top) sub.push_back(pts[static_cast<size_t>(i)]);
        alpha[top] = detail::circumball(sub).radius;
    }

    for (size_t card = static_cast<size_t>(d); card >= 2; --card) {
        for (const auto& f : by_card[card]) {
            if (alpha.count(f)) continue;  // also a top simplex (none in practice)
            std::vector<Point> sub;
            for (int i : f) sub.push_back(pts[static_cast<size_t>(i)]);
            const Ball sb = detail::ball_from_support(sub);
            const double r2 = sb.radius * sb.radius;
            bool empty = true;
            for (size_t m = 0; m < pts.size(); ++m) {
                if (std::find(f.begin(), f.end(), static_cast<int>(m)) != f.end()) continue;
                if (squared_distance(sb.center, pts[m]) <
                    r2 - detail::kEpsGeom * std::max(1.0, r2)) {
                    empty = false;
                    break;
                }
            }
            if (empty) {
                alpha[f] = sb.radius;
                continue;
            }
            /* attached: inherit the smallest coface alpha */
            double best = std::numeric_limits<double>::infinity();
            for (const auto& coface : by_card[card + 1]) {
                if (!alpha.count(coface)) continue;
                if (std::includes(coface.begin(), coface.end(), f.begin(), f.end()))
                    best = std::min(best, alpha.at(coface));
            }
            alpha[f] = best;
        }
        if (card == 2) break;
    }

    for (const auto& v : by_card[1]) alpha[v] = 0.0;
    /* isolated vertices (not part of any top simplex) cannot occur: a Delaunay
     * triangulation of affinely independent input covers every vertex, but be
     * safe for downstream lookups */
    for (size_t i = 0; i < pts.size(); ++i) {
        std::vector<int> v{static_cast<int>(i)};
        if (!alpha.count(v)) alpha[v] = 0.0;
    }
    return alpha;
}

}  // namespace nerve
