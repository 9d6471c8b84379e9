#pragma once

/* Shared basics: points in R^2/R^3, error taxonomy, and a self-contained
 * random-number layer so that sampled streams are identical across standard
 * library implementations. */

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace nerve {

/* ---------------------------------------------------------------- errors */

/* Configuration / usage problems: bad schema, unknown keys, missing files.
 * The CLI maps these to exit code 2. */
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

/* Numeric / geometric failures: degenerate inputs, non-PD matrices,
 * domain violations. The CLI maps these to exit code 3. */
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& m) : std::runtime_error(m) {}
};

/* ----------------------------------------------------------------- point */

struct Point {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    int dim = 2;

    Point() = default;
    Point(double x, double y) : c{x, y, 0.0}, dim(2) {}
    Point(double x, double y, double z) : c{x, y, z}, dim(3) {}

    double operator[](int i) const { return c[static_cast<size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<size_t>(i)]; }
};

inline double squared_distance(const Point& a, const Point& b) {
    if (a.dim != b.dim) throw NumericError("point dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < a.dim; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double distance(const Point& a, const Point& b) {
    return std::sqrt(squared_distance(a, b));
}

inline double norm(const Point& a) {
    double s = 0.0;
    for (int i = 0; i < a.dim; ++i) s += a[i] * a[i];
    return std::sqrt(s);
}

/* ------------------------------------------------------------------- rng */

/* All distributions are built by hand on top of mt19937_64 so that a seed
 * pins the exact sample stream (std::normal_distribution etc. vary between
 * standard libraries). */
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t raw() { return eng_(); }

    /* uniform on [0,1) with 53 random bits */
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /* uniform integer in {0, ..., n-1} by rejection (unbiased) */
    uint64_t uniform_int(uint64_t n) {
        if (n == 0) throw NumericError("uniform_int(0)");
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do { v = eng_(); } while (v >= limit);
        return v % n;
    }

    /* standard normal via Box-Muller with a cached spare */
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do { u1 = uniform01(); } while (u1 <= 0.0);
        u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double exponential() {
        double u;
        do { u = uniform01(); } while (u <= 0.0);
        return -std::log(u);
    }

    /* Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1 */
    double gamma(double shape) {
        if (shape <= 0.0) throw NumericError("gamma shape must be positive");
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            double u;
            do { u = uniform01(); } while (u <= 0.0);
            return g * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/* ------------------------------------------------------------- utilities */

inline std::string format_double(double v, int precision = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return std::string(buf);
}

}  // namespace nerve
