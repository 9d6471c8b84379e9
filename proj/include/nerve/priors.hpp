#pragma once

/* Point-process priors over vertex configurations: uniform on the unit ball
 * (d=2,3) or the unit square, a fixed-n Strauss repulsive process, a
 * sequential hard-core (Matérn type III) sampler, and the Erdős–Rényi
 * baseline graph distribution. */

#include <optional>

#include "nerve/graphs.hpp"

namespace nerve {

enum class Window { UnitBall2, UnitBall3, UnitSquare };

inline int window_dim(Window w) { return w == Window::UnitBall3 ? 3 : 2; }

inline bool in_window(const Point& p, Window w) {
    if (p.dim != window_dim(w)) return false;
    if (w == Window::UnitSquare)
        return p[0] >= -1e-9 && p[0] <= 1.0 + 1e-9 && p[1] >= -1e-9 && p[1] <= 1.0 + 1e-9;
    return norm(p) <= 1.0 + 1e-9;
}

struct VertexConfiguration {
    std::vector<Point> points;
    Window window = Window::UnitBall2;

    int n() const { return static_cast<int>(points.size()); }
    int dim() const { return window_dim(window); }
};

enum class PriorKind { UniformBall, UniformSquare, Matern3, StraussFixedN };

struct PointProcessPrior {
    PriorKind kind = PriorKind::UniformBall;
    Window window = Window::UnitBall2;
    double rho = 0.0;    // Matérn III hard core (blocking distance 2*rho)
    double gamma = 1.0;  // Strauss interaction strength, 0 < gamma <= 1
    double R = 0.0;      // Strauss interaction range (pairs closer than 2R penalized)
};

inline void validate_prior(const PointProcessPrior& p) {
    switch (p.kind) {
        case PriorKind::UniformBall:
            if (p.window == Window::UnitSquare) throw ConfigError("uniform-ball prior needs a ball window");
            break;
        case PriorKind::UniformSquare:
            if (p.window != Window::UnitSquare) throw ConfigError("uniform-square prior needs the square window");
            break;
        case PriorKind::Matern3:
            if (!(p.rho > 0.0)) throw ConfigError("Matérn III prior needs rho > 0");
            break;
        case PriorKind::StraussFixedN:
            if (!(p.gamma > 0.0 && p.gamma <= 1.0)) throw ConfigError("Strauss prior needs 0 < gamma <= 1");
            if (!(p.R > 0.0)) throw ConfigError("Strauss prior needs R > 0");
            break;
    }
}

namespace detail {

inline Point uniform_point(Window w, Rng& rng) {
    if (w == Window::UnitSquare) return Point(rng.uniform01(), rng.uniform01());
    const int d = window_dim(w);
    const double radius = std::pow(rng.uniform01(), 1.0 / d);
    if (d == 2) {
        const double phi = rng.uniform(0.0, 2.0 * M_PI);
        return Point(radius * std::cos(phi), radius * std::sin(phi));
    }
    for (;;) {
        const double gx = rng.normal(), gy = rng.normal(), gz = rng.normal();
        const double g = std::sqrt(gx * gx + gy * gy + gz * gz);
        if (g > 1e-12)
            return Point(radius * gx / g, radius * gy / g, radius * gz / g);
    }
}

inline int close_pairs(const std::vector<Point>& pts, double threshold) {
    int count = 0;
    const double t2 = threshold * threshold;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            if (squared_distance(pts[i], pts[j]) < t2) ++count;
    return count;
}

/* close pairs involving one site only */
inline int close_pairs_at(const std::vector<Point>& pts, size_t site, const Point& loc,
                          double threshold) {
    int count = 0;
    const double t2 = threshold * threshold;
    for (size_t j = 0; j < pts.size(); ++j)
        if (j != site && squared_distance(loc, pts[j]) < t2) ++count;
    return count;
}

}  // namespace detail

inline VertexConfiguration sample_uniform(int n, Window window, Rng& rng) {
    if (n < 1) throw ConfigError("sample_uniform: n must be >= 1");
    VertexConfiguration V;
    V.window = window;
    V.points.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) V.points.push_back(detail::uniform_point(window, rng));
    return V;
}

/* Unnormalized log prior density. Matérn III has no tractable pointwise
 * density, signalled by an empty optional. */
inline std::optional<double> log_density(const PointProcessPrior& prior,
                                         const VertexConfiguration& V) {
    validate_prior(prior);
    for (const auto& p : V.points)
        if (!in_window(p, V.window)) throw NumericError("configuration point outside its window");
    switch (prior.kind) {
        case PriorKind::UniformBall:
        case PriorKind::UniformSquare:
            return 0.0;
        case PriorKind::StraussFixedN:
            return detail::close_pairs(V.points, 2.0 * prior.R) * std::log(prior.gamma);
        case PriorKind::Matern3:
            return std::nullopt;
    }
    return std::nullopt;
}

/* Fixed-n Strauss process via single-site Metropolis: uniform relocation of a
 * random site, accepted with ratio gamma^(change in close-pair count). */
inline VertexConfiguration sample_strauss_fixed_n(int n, double gamma, double R, Window window,
                                                  Rng& rng, int burn_in = 200) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("Strauss: 0 < gamma <= 1 required");
    if (!(R > 0.0)) throw ConfigError("Strauss: R > 0 required");
    VertexConfiguration V = sample_uniform(n, window, rng);
    const double log_gamma = std::log(gamma);
    for (int sweep = 0; sweep < burn_in; ++sweep)
        for (int prop = 0; prop < n; ++prop) {
            const size_t site = static_cast<size_t>(rng.uniform_int(n));
            const Point candidate = detail::uniform_point(window, rng);
            const int delta = detail::close_pairs_at(V.points, site, candidate, 2.0 * R) -
                              detail::close_pairs_at(V.points, site, V.points[site], 2.0 * R);
            const double log_ratio = delta * log_gamma;
            if (log_ratio >= 0.0 || std::log(rng.uniform01()) < log_ratio)
                V.points[site] = candidate;
        }
    return V;
}

/* Matérn type III hard core, conditioned to yield exactly n points: primaries
 * arrive sequentially at uniform locations; an arrival is discarded iff it
 * lies within 2*rho of an already-retained point; arrivals continue until n
 * points are retained. max_attempts caps the total number of primaries. */
inline VertexConfiguration sample_matern3(int n, double rho, Window window, Rng& rng,
                                          long max_attempts = 200000) {
    if (n < 1) throw ConfigError("sample_matern3: n must be >= 1");
    if (!(rho > 0.0)) throw ConfigError("sample_matern3: rho > 0 required");
    VertexConfiguration V;
    V.window = window;
    const double block2 = 4.0 * rho * rho;
    long attempts = 0;
    while (static_cast<int>(V.points.size()) < n) {
        if (++attempts > max_attempts)
            throw NumericError("sample_matern3: packing infeasible within max_attempts");
        const Point candidate = detail::uniform_point(window, rng);
        bool blocked = false;
        for (const auto& q : V.points)
            if (squared_distance(candidate, q) < block2) { blocked = true; break; }
        if (!blocked) V.points.push_back(candidate);
    }
    return V;
}

inline VertexConfiguration sample_prior(const PointProcessPrior& prior, int n, Rng& rng) {
    validate_prior(prior);
    switch (prior.kind) {
        case PriorKind::UniformBall:
        case PriorKind::UniformSquare:
            return sample_uniform(n, prior.window, rng);
        case PriorKind::StraussFixedN:
            return sample_strauss_fixed_n(n, prior.gamma, prior.R, prior.window, rng);
        case PriorKind::Matern3:
            return sample_matern3(n, prior.rho, prior.window, rng);
    }
    throw ConfigError("unknown prior kind");
}

inline LabeledGraph sample_erdos_renyi(int n, double p, Rng& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("sample_erdos_renyi: p in [0,1] required");
    LabeledGraph G(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform01() < p) G.add_edge(i, j);
    return G;
}

}  // namespace nerve
