#pragma once

/* Likelihood backends and synthetic-data generators: Clayton-copula
 * junction-tree models, hypergraph complete-set factor models with
 * Monte-Carlo normalization, the Gaussian hyper-inverse-Wishart marginal
 * likelihood for decomposable graphs, and small numeric utilities (dense
 * Cholesky, Gauss–Legendre rules) they rely on. */

#include <map>
#include <utility>

#include "nerve/io.hpp"

namespace nerve {

/* ---- small dense symmetric-matrix utilities ---- */

struct Mat {
    int n = 0;
    std::vector<double> a;

    Mat() = default;
    explicit Mat(int n_) : n(n_), a(static_cast<size_t>(n_) * static_cast<size_t>(n_), 0.0) {}

    double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    static Mat identity(int n_) {
        Mat m(n_);
        for (int i = 0; i < n_; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

/* lower-triangular Cholesky factor; throws on non-positive-definite input */
inline Mat cholesky(const Mat& A) {
    Mat L(A.n);
    for (int i = 0; i < A.n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = A.at(i, j);
            for (int k = 0; k < j; ++k) s -= L.at(i, k) * L.at(j, k);
            if (i == j) {
                if (s <= 0.0) throw NumericError("matrix not positive definite");
                L.at(i, i) = std::sqrt(s);
            } else {
                L.at(i, j) = s / L.at(j, j);
            }
        }
    }
    return L;
}

inline double log_det_spd(const Mat& A) {
    const Mat L = cholesky(A);
    double s = 0.0;
    for (int i = 0; i < A.n; ++i) s += std::log(L.at(i, i));
    return 2.0 * s;
}

inline Mat submatrix(const Mat& A, const std::vector<int>& idx) {
    Mat S(static_cast<int>(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = 0; j < idx.size(); ++j)
            S.at(static_cast<int>(i), static_cast<int>(j)) = A.at(idx[i], idx[j]);
    return S;
}

inline Mat cross_product_matrix(const DataMatrix& X) {  // X^T X
    Mat S(X.cols());
    for (const auto& row : X.rows)
        for (int i = 0; i < X.cols(); ++i)
            for (int j = 0; j <= i; ++j) S.at(i, j) += row[static_cast<size_t>(i)] * row[static_cast<size_t>(j)];
    for (int i = 0; i < X.cols(); ++i)
        for (int j = i + 1; j < X.cols(); ++j) S.at(i, j) = S.at(j, i);
    return S;
}

/* Gauss–Legendre nodes and weights on [0,1] */
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int m) {
    if (m < 1) throw ConfigError("gauss_legendre: order must be >= 1");
    std::vector<double> x(static_cast<size_t>(m)), w(static_cast<size_t>(m));
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (t * p1 - p0) / (t * t - 1.0);
            const double step = p1 / dp;
            t -= step;
            if (std::fabs(step) < 1e-15) break;
        }
        const double weight = 2.0 / ((1.0 - t * t) * dp * dp);
        x[static_cast<size_t>(i)] = (1.0 - t) / 2.0;  // map [-1,1] -> [0,1], ascending
        x[static_cast<size_t>(m - 1 - i)] = (1.0 + t) / 2.0;
        w[static_cast<size_t>(i)] = weight / 2.0;
        w[static_cast<size_t>(m - 1 - i)] = weight / 2.0;
    }
    return {x, w};
}

/* ---- Clayton copula family ---- */

namespace detail {

inline void check_unit_open(const std::vector<double>& x) {
    for (double v : x)
        if (!(v > 0.0 && v <= 1.0)) throw NumericError("copula coordinate outside (0,1]");
}

inline void check_theta(double theta) {
    if (!(theta > 0.0)) throw NumericError("association parameter must be positive");
}

}  // namespace detail

/* log density of the exchangeable Clayton copula on (0,1)^k; k=1 gives 0 */
inline double clayton_log_density(const std::vector<double>& x, double theta) {
    detail::check_theta(theta);
    detail::check_unit_open(x);
    const int k = static_cast<int>(x.size());
    if (k == 1) return 0.0;
    double sum_pow = 0.0, sum_log = 0.0;
    for (double v : x) {
        sum_pow += std::pow(v, -theta);
        sum_log += std::log(v);
    }
    const double W = sum_pow - (k - 1);
    double log_const = 0.0;
    for (int j = 1; j < k; ++j) log_const += std::log1p(j * theta);
    return log_const - (1.0 + theta) * sum_log - (k + 1.0 / theta) * std::log(W);
}

/* Clayton distribution function on (0,1]^k */
inline double clayton_cdf(const std::vector<double>& x, double theta) {
    detail::check_theta(theta);
    for (double v : x)
        if (!(v > 0.0 && v <= 1.0)) throw NumericError("copula coordinate outside (0,1]");
    double sum_pow = 0.0;
    for (double v : x) sum_pow += std::pow(v, -theta);
    const double W = sum_pow - (static_cast<double>(x.size()) - 1.0);
    return std::pow(W, -1.0 / theta);
}

namespace detail {

/* conditional CDF of one Clayton coordinate given m others */
inline double clayton_conditional_cdf(double x, const std::vector<double>& given, double theta) {
    const double m = static_cast<double>(given.size());
    double W = 1.0 - m;
    for (double v : given) W += std::pow(v, -theta);
    return std::pow((W + std::pow(x, -theta) - 1.0) / W, -(1.0 / theta + m));
}

/* inverse of the conditional CDF above */
inline double clayton_conditional_inverse(double u, const std::vector<double>& given, double theta) {
    const double m = static_cast<double>(given.size());
    double W = 1.0 - m;
    for (double v : given) W += std::pow(v, -theta);
    const double t = std::pow(u, -theta / (1.0 + m * theta)) - 1.0;
    return std::pow(1.0 + W * t, -1.0 / theta);
}

inline double unit_open_uniform(Rng& rng) {
    for (;;) {
        const double u = rng.uniform01();
        if (u > 0.0 && u < 1.0) return u;
    }
}

}  // namespace detail

/* joint Clayton draw via the gamma-frailty mixture */
inline std::vector<double> sample_clayton(int k, double theta, Rng& rng) {
    detail::check_theta(theta);
    if (k < 1) throw ConfigError("sample_clayton: dimension must be >= 1");
    double frailty = 0.0;
    while (frailty < 1e-300) frailty = rng.gamma(1.0 / theta);
    std::vector<double> x(static_cast<size_t>(k));
    for (auto& v : x) {
        double out = std::pow(1.0 + rng.exponential() / frailty, -1.0 / theta);
        if (out >= 1.0) out = std::nextafter(1.0, 0.0);
        if (out <= 0.0) out = std::nextafter(0.0, 1.0);
        v = out;
    }
    return x;
}

/* N rows from the junction-tree density with Clayton clique marginals: each
 * tree root is sampled jointly (sequential conditional-inverse chain), each
 * child clique extends its separator values coordinate-by-coordinate. */
inline DataMatrix sample_junction_tree_model(const JunctionTree& jt, double theta, int N, Rng& rng) {
    detail::check_theta(theta);
    int n_vars = 0;
    for (const auto& c : jt.cliques)
        for (int v : c) n_vars = std::max(n_vars, v + 1);
    const int m = static_cast<int>(jt.cliques.size());
    std::vector<std::vector<int>> nbr(static_cast<size_t>(m));
    for (const auto& e : jt.edges) {
        nbr[static_cast<size_t>(e.a)].push_back(e.b);
        nbr[static_cast<size_t>(e.b)].push_back(e.a);
    }
    /* clique visit order: BFS from the lowest-index clique of each component */
    std::vector<int> order;
    std::vector<bool> seen(static_cast<size_t>(m), false);
    for (int root = 0; root < m; ++root) {
        if (seen[static_cast<size_t>(root)]) continue;
        std::vector<int> queue{root};
        seen[static_cast<size_t>(root)] = true;
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            const int c = queue[qi];
            order.push_back(c);
            for (int nc : nbr[static_cast<size_t>(c)])
                if (!seen[static_cast<size_t>(nc)]) {
                    seen[static_cast<size_t>(nc)] = true;
                    queue.push_back(nc);
                }
        }
    }

    DataMatrix out;
    for (int j = 1; j <= n_vars; ++j) out.names.push_back("x" + std::to_string(j));
    out.rows.reserve(static_cast<size_t>(N));
    for (int row_i = 0; row_i < N; ++row_i) {
        std::vector<double> row(static_cast<size_t>(n_vars), -1.0);
        for (int ci : order) {
            std::vector<double> fixed;  // clique members already assigned
            std::vector<int> todo;
            for (int v : jt.cliques[static_cast<size_t>(ci)]) {
                if (row[static_cast<size_t>(v)] >= 0.0)
                    fixed.push_back(row[static_cast<size_t>(v)]);
                else
                    todo.push_back(v);
            }
            for (int v : todo) {
                const double u = detail::unit_open_uniform(rng);
                double value;
                if (fixed.empty())
                    value = u;  // Clayton marginals are uniform
                else
                    value = detail::clayton_conditional_inverse(u, fixed, theta);
                if (value >= 1.0) value = std::nextafter(1.0, 0.0);
                if (value <= 0.0) value = std::nextafter(0.0, 1.0);
                row[static_cast<size_t>(v)] = value;
                fixed.push_back(value);
            }
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

/* clique terms minus separator terms (separators with multiplicity) */
inline double jt_log_likelihood(const DataMatrix& data, const JunctionTree& jt, double theta) {
    detail::check_theta(theta);
    const auto seps = jt.separators();
    double total = 0.0;
    std::vector<double> sub;
    for (const auto& row : data.rows) {
        for (const auto& c : jt.cliques) {
            sub.clear();
            for (int v : c) sub.push_back(row[static_cast<size_t>(v)]);
            total += clayton_log_density(sub, theta);
        }
        for (const auto& s : seps) {
            sub.clear();
            for (int v : s) sub.push_back(row[static_cast<size_t>(v)]);
            total -= clayton_log_density(sub, theta);
        }
    }
    return total;
}

/* ---- hypergraph factor models with Monte-Carlo normalization ---- */

struct NormalizerCache {
    std::map<std::string, std::pair<double, double>> entries;  // key -> (log c, std error)
    long estimate_calls = 0;                                   // fresh estimations performed
};

struct NormalizerConfig {
    long samples = 200000;
    std::uint64_t base_seed = 0x6e65727665ULL;
};

/* log normalizing constant of f = c * prod(phi over factors) on (0,1)^n,
 * estimated with uniform importance draws: log c = -log(mean of prod(phi)) */
inline std::pair<double, double> estimate_log_normalizer(
    const std::vector<std::vector<int>>& maximal, double theta, long M, Rng& rng) {
    detail::check_theta(theta);
    if (M < 1000) throw ConfigError("normalizer estimation needs at least 1000 samples");
    std::vector<std::vector<int>> factors;
    std::vector<int> support;
    for (const auto& s : maximal)
        if (s.size() >= 2) {
            factors.push_back(s);
            support.insert(support.end(), s.begin(), s.end());
        }
    if (factors.empty()) return {0.0, 0.0};
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    std::vector<int> slot(static_cast<size_t>(support.back() + 1), -1);
    for (size_t i = 0; i < support.size(); ++i) slot[static_cast<size_t>(support[i])] = static_cast<int>(i);

    std::vector<double> log_terms(static_cast<size_t>(M));
    std::vector<double> x(support.size()), sub;
    for (long j = 0; j < M; ++j) {
        for (auto& v : x) v = detail::unit_open_uniform(rng);
        double t = 0.0;
        for (const auto& f : factors) {
            sub.clear();
            for (int v : f) sub.push_back(x[static_cast<size_t>(slot[static_cast<size_t>(v)])]);
            t += clayton_log_density(sub, theta);
        }
        log_terms[static_cast<size_t>(j)] = t;
    }
    const double peak = *std::max_element(log_terms.begin(), log_terms.end());
    double sum_w = 0.0, sum_w2 = 0.0;
    for (double t : log_terms) {
        const double w = std::exp(t - peak);
        sum_w += w;
        sum_w2 += w * w;
    }
    const double mean_w = sum_w / M;
    const double var_w = std::max(0.0, (sum_w2 - M * mean_w * mean_w) / (M - 1));
    const double se_log = std::sqrt(var_w / M) / mean_w;
    const double log_mean = peak + std::log(mean_w);
    return {-log_mean, se_log};
}

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string normalizer_key(const std::vector<std::vector<int>>& maximal, double theta) {
    char t[40];
    std::snprintf(t, sizeof t, "%.12g", theta);
    return factorization_string(maximal) + "|" + t;
}

}  // namespace detail

/* cache lookup with a deterministic per-key RNG, so estimates do not depend
 * on when a structure is first encountered and never touch the chain RNG */
inline std::pair<double, double> cached_log_normalizer(NormalizerCache& cache,
                                                       const std::vector<std::vector<int>>& maximal,
                                                       double theta, const NormalizerConfig& cfg) {
    const std::string key = detail::normalizer_key(maximal, theta);
    const auto it = cache.entries.find(key);
    if (it != cache.entries.end()) return it->second;
    Rng rng(detail::fnv1a(key) ^ cfg.base_seed);
    ++cache.estimate_calls;
    const auto est = estimate_log_normalizer(maximal, theta, cfg.samples, rng);
    cache.entries[key] = est;
    return est;
}

/* N*log c_G plus the factor log densities over all rows */
inline double hypergraph_log_likelihood(const DataMatrix& data,
                                        const std::vector<std::vector<int>>& maximal, double theta,
                                        NormalizerCache& cache,
                                        const NormalizerConfig& cfg = NormalizerConfig{}) {
    detail::check_theta(theta);
    const double log_c = cached_log_normalizer(cache, maximal, theta, cfg).first;
    double total = static_cast<double>(data.n_rows()) * log_c;
    std::vector<double> sub;
    for (const auto& row : data.rows)
        for (const auto& s : maximal) {
            sub.clear();
            for (int v : s) sub.push_back(row[static_cast<size_t>(v)]);
            if (s.size() >= 2)
                total += clayton_log_density(sub, theta);
            else
                detail::check_unit_open(sub);
        }
    return total;
}

/* ---- Gaussian hyper-inverse-Wishart marginal likelihood ---- */

struct HIWHyper {
    double delta = 3.0;
    Mat D;
};

namespace detail {

inline double log_multigamma(int p, double a) {
    if (!(a > (p - 1) / 2.0)) throw NumericError("multivariate gamma argument out of range");
    double s = p * (p - 1) / 4.0 * std::log(M_PI);
    for (int j = 0; j < p; ++j) s += std::lgamma(a - j / 2.0);
    return s;
}

/* log inverse-Wishart normalizing term for a clique/separator block */
inline double log_h(double delta, const Mat& block) {
    const int p = block.n;
    const double expo = (delta + p - 1.0) / 2.0;
    const double logdet_half = log_det_spd(block) - p * std::log(2.0);
    return -expo * logdet_half + log_multigamma(p, expo);
}

inline double log_hiw_constant(double delta, const Mat& D, const JunctionTree& jt) {
    double s = 0.0;
    for (const auto& c : jt.cliques) s += log_h(delta, submatrix(D, c));
    for (const auto& sep : jt.separators()) s -= log_h(delta, submatrix(D, sep));
    return s;
}

}  // namespace detail

inline double hiw_log_marginal(const DataMatrix& data, const LabeledGraph& G, const HIWHyper& hyper) {
    if (!(hyper.delta > 2.0)) throw ConfigError("HIW degrees of freedom must exceed 2");
    if (hyper.D.n != G.n_vertices || data.cols() != G.n_vertices)
        throw ConfigError("HIW dimensions disagree");
    if (!is_decomposable(G)) throw NumericError("HIW marginal requires a decomposable graph");
    const JunctionTree jt = junction_tree(G);
    const int n = G.n_vertices;
    const int N = data.n_rows();
    Mat Dpost = hyper.D;
    const Mat S = cross_product_matrix(data);
    for (size_t i = 0; i < Dpost.a.size(); ++i) Dpost.a[i] += S.a[i];
    return -0.5 * n * N * std::log(2.0 * M_PI) +
           detail::log_hiw_constant(hyper.delta + N, Dpost, jt) -
           detail::log_hiw_constant(hyper.delta, hyper.D, jt);
}

inline DataMatrix sample_gaussian_model(const Mat& precision, int N, Rng& rng) {
    const Mat L = cholesky(precision);
    const int n = precision.n;
    DataMatrix out;
    for (int j = 1; j <= n; ++j) out.names.push_back("x" + std::to_string(j));
    out.rows.reserve(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
        std::vector<double> z(static_cast<size_t>(n));
        for (auto& v : z) v = rng.normal();
        /* solve L^T x = z: covariance (L L^T)^{-1} = precision^{-1} */
        std::vector<double> x(static_cast<size_t>(n));
        for (int k = n - 1; k >= 0; --k) {
            double s = z[static_cast<size_t>(k)];
            for (int j = k + 1; j < n; ++j) s -= L.at(j, k) * x[static_cast<size_t>(j)];
            x[static_cast<size_t>(k)] = s / L.at(k, k);
        }
        out.rows.push_back(std::move(x));
    }
    return out;
}

}  // namespace nerve
