#pragma once

// Quadrature building blocks:
//
//  * Gauss-Legendre rules on [-1, 1] (Newton iteration on Legendre roots),
//  * composite panel grids for oscillatory time integrals,
//  * a per-panel "cumulative" operator that evaluates the running
//    antiderivative A(x_i) = int_{panel start}^{x_i} f at every node of the
//    panel. It works by projecting the samples onto the Legendre basis and
//    integrating that expansion term by term, which is exact for any
//    polynomial the rule itself can represent -- so nested (time-ordered)
//    integrals inherit the spectral accuracy of the underlying rule.

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "padkit/constants.hpp"
#include "padkit/errors.hpp"
#include "padkit/util.hpp"

namespace padkit {

/// Legendre polynomial P_l(x) by upward recurrence.
inline double legendre_p(int l, double x) {
    if (l < 0) throw ArgumentError("legendre_p: negative degree");
    if (l == 0) return 1.0;
    double pm1 = 1.0, p = x;
    for (int k = 2; k <= l; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p - (k - 1.0) * pm1) / k;
        pm1 = p;
        p = pk;
    }
    return p;
}

/// All of P_0(x) ... P_lmax(x).
inline std::vector<double> legendre_p_all(int lmax, double x) {
    std::vector<double> p(static_cast<std::size_t>(lmax) + 1);
    p[0] = 1.0;
    if (lmax >= 1) p[1] = x;
    for (int k = 2; k <= lmax; ++k)
        p[k] = ((2.0 * k - 1.0) * x * p[k - 1] - (k - 1.0) * p[k - 2]) / k;
    return p;
}

struct GaussLegendreRule {
    std::vector<double> x; ///< nodes on [-1, 1], ascending
    std::vector<double> w; ///< weights, sum = 2
};

/// n-point Gauss-Legendre rule, cached per n. Thread-safe.
inline const GaussLegendreRule& gauss_legendre(int n) {
    if (n < 1) throw ArgumentError("gauss_legendre: need n >= 1");
    static std::map<int, GaussLegendreRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussLegendreRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based initial guess for the i-th root (descending in x).
        double z = std::cos(constants::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Evaluate P_n(z) and its derivative.
            double pm1 = 1.0, p = z;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * z * p - (k - 1.0) * pm1) / k;
                pm1 = p;
                p = pk;
            }
            pp = n * (z * p - pm1) / (z * z - 1.0);
            const double dz = p / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        // Polish once more to refresh pp at the converged node.
        {
            double pm1 = 1.0, p = z;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * z * p - (k - 1.0) * pm1) / k;
                pm1 = p;
                p = pk;
            }
            pp = n * (z * p - pm1) / (z * z - 1.0);
        }
        rule.x[i] = -z;
        rule.x[n - 1 - i] = z;
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.w[i] = w;
        rule.w[n - 1 - i] = w;
    }
    if (n == 1) {
        rule.x[0] = 0.0;
        rule.w[0] = 2.0;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

/// Dense q x q matrix PI with A(x_i) = (h/2) * sum_j PI[i][j] f(x_j), where
/// A is the antiderivative of f from the panel start (reference x = -1).
/// Built from PI = B * C with C the sample -> Legendre-coefficient map and
/// B[i][k] = int_{-1}^{x_i} P_k. Cached per q. Thread-safe.
inline const std::vector<double>& cumulative_matrix(int q) {
    static std::map<int, std::vector<double>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;

    const GaussLegendreRule& rule = gauss_legendre(q);
    // C[k][j] = (2k+1)/2 * w_j * P_k(x_j)
    std::vector<double> C(static_cast<std::size_t>(q) * q);
    for (int j = 0; j < q; ++j) {
        const std::vector<double> p = legendre_p_all(q - 1, rule.x[j]);
        for (int k = 0; k < q; ++k)
            C[static_cast<std::size_t>(k) * q + j] = 0.5 * (2.0 * k + 1.0) * rule.w[j] * p[k];
    }
    // B[i][k] = int_{-1}^{x_i} P_k = (P_{k+1} - P_{k-1})/(2k+1) for k >= 1,
    //           and x_i + 1 for k = 0.
    std::vector<double> B(static_cast<std::size_t>(q) * q);
    for (int i = 0; i < q; ++i) {
        const std::vector<double> p = legendre_p_all(q, rule.x[i]);
        B[static_cast<std::size_t>(i) * q + 0] = rule.x[i] + 1.0;
        for (int k = 1; k < q; ++k)
            B[static_cast<std::size_t>(i) * q + k] = (p[k + 1] - p[k - 1]) / (2.0 * k + 1.0);
    }
    std::vector<double> PI(static_cast<std::size_t>(q) * q, 0.0);
    for (int i = 0; i < q; ++i)
        for (int k = 0; k < q; ++k) {
            const double b = B[static_cast<std::size_t>(i) * q + k];
            if (b == 0.0) continue;
            for (int j = 0; j < q; ++j)
                PI[static_cast<std::size_t>(i) * q + j] += b * C[static_cast<std::size_t>(k) * q + j];
        }
    return cache.emplace(q, std::move(PI)).first->second;
}

/// Composite Gauss-Legendre grid over [a, b]: `panels` equal panels with a
/// q-point rule each. Nodes ascend globally; weights integrate over [a, b].
struct CompositeGrid {
    double a = 0.0, b = 0.0;
    int panels = 0;
    int q = 0;
    std::vector<double> t; ///< all nodes, size panels * q
    std::vector<double> w; ///< matching global weights

    CompositeGrid() = default;

    CompositeGrid(double a_, double b_, int panels_, int q_)
        : a(a_), b(b_), panels(panels_), q(q_) {
        if (!(b > a)) throw ArgumentError("CompositeGrid: need b > a");
        if (panels < 1 || q < 1) throw ArgumentError("CompositeGrid: need panels, q >= 1");
        const GaussLegendreRule& rule = gauss_legendre(q);
        const double h = (b - a) / panels;
        t.resize(static_cast<std::size_t>(panels) * q);
        w.resize(t.size());
        for (int p = 0; p < panels; ++p) {
            const double lo = a + p * h;
            const double mid = lo + 0.5 * h;
            for (int j = 0; j < q; ++j) {
                t[static_cast<std::size_t>(p) * q + j] = mid + 0.5 * h * rule.x[j];
                w[static_cast<std::size_t>(p) * q + j] = 0.5 * h * rule.w[j];
            }
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return t.size(); }

    /// Integral of sampled values over [a, b] (deterministic pairwise sum).
    template <typename T>
    T integrate(std::span<const T> f) const {
        if (f.size() != t.size()) throw ArgumentError("CompositeGrid::integrate: size mismatch");
        std::vector<T> terms(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) terms[i] = w[i] * f[i];
        return pairwise_sum(std::span<const T>(terms));
    }

    /// Running antiderivative A_i = int_a^{t_i} f at every node. Spectrally
    /// accurate: within each panel the samples are integrated through their
    /// Legendre expansion; across panels the full-panel integrals accumulate.
    template <typename T>
    std::vector<T> cumulative(std::span<const T> f) const {
        if (f.size() != t.size()) throw ArgumentError("CompositeGrid::cumulative: size mismatch");
        const std::vector<double>& PI = cumulative_matrix(q);
        const GaussLegendreRule& rule = gauss_legendre(q);
        const double h = (b - a) / panels;
        std::vector<T> A(f.size());
        T prefix{}; // integral over all complete panels before the current one
        for (int p = 0; p < panels; ++p) {
            const std::size_t base = static_cast<std::size_t>(p) * q;
            for (int i = 0; i < q; ++i) {
                T acc{};
                for (int j = 0; j < q; ++j)
                    acc += PI[static_cast<std::size_t>(i) * q + j] * f[base + j];
                A[base + i] = prefix + 0.5 * h * acc;
            }
            T panel_sum{};
            for (int j = 0; j < q; ++j) panel_sum += 0.5 * h * rule.w[j] * f[base + j];
            prefix += panel_sum;
        }
        return A;
    }
};

} // namespace padkit
