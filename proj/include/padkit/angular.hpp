#pragma once

// Angular-momentum primitives: Wigner 3j symbols (Racah's single-sum form,
// log-factorial arithmetic; see Edmonds, "Angular Momentum in Quantum
// Mechanics"), reduced and full Wigner rotation matrices, associated
// Legendre functions and spherical harmonics (Condon-Shortley phase), the
// Clebsch-Gordan linearization of D-matrix products, and the analytic
// Euler-angle integral of a triple D-matrix product.
//
// Conventions (used consistently across the whole library):
//   * Rotations are active z-y-z:  R = Rz(alpha) Ry(beta) Rz(gamma) carries
//     the laboratory axes into the molecular axes.
//   * D^l_{m,m'}(alpha,beta,gamma) = e^{-i m alpha} d^l_{m,m'}(beta) e^{-i m' gamma}.
//   * Y_{lm} carries the Condon-Shortley phase; for a direction fixed in
//     space, Y_{lm}(molecular coords) = sum_{m'} D^l_{m',m} Y_{lm'}(lab coords).
//   * P^{-M}_L = (-1)^M (L-M)!/(L+M)! P^M_L.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "padkit/constants.hpp"
#include "padkit/errors.hpp"

namespace padkit {

/// log(n!) as long double; table-backed for the ranges used here.
inline long double log_factorial(int n) {
    if (n < 0) throw ArgumentError("log_factorial: negative argument");
    static const std::vector<long double> table = [] {
        std::vector<long double> t(257);
        t[0] = 0.0L;
        for (int i = 1; i < 257; ++i) t[i] = t[i - 1] + std::log(static_cast<long double>(i));
        return t;
    }();
    if (n < static_cast<int>(table.size())) return table[static_cast<std::size_t>(n)];
    return std::lgamma(static_cast<long double>(n) + 1.0L);
}

/// 3j-symbol arguments. Half-integers are stored as doubled integers so that
/// both integer and half-integer momenta share one exact encoding.
struct AngularKey {
    int two_j1, two_j2, two_j3;
    int two_m1, two_m2, two_m3;

    AngularKey(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3)
        : two_j1(tj1), two_j2(tj2), two_j3(tj3), two_m1(tm1), two_m2(tm2), two_m3(tm3) {
        auto check = [](int tj, int tm) {
            if (tj < 0) throw ArgumentError("AngularKey: negative j");
            if (std::abs(tm) > tj) throw ArgumentError("AngularKey: |m| > j");
            if (((tj ^ tm) & 1) != 0) throw ArgumentError("AngularKey: m parity differs from j parity");
        };
        check(tj1, tm1);
        check(tj2, tm2);
        check(tj3, tm3);
    }

    /// Convenience constructor for the integer momenta used throughout.
    static AngularKey integers(int l1, int l2, int l3, int m1, int m2, int m3) {
        return {2 * l1, 2 * l2, 2 * l3, 2 * m1, 2 * m2, 2 * m3};
    }
};

namespace detail {

/// Racah's single-sum formula, evaluated in log-factorial space with
/// long-double accumulation. Stable for j up to ~40 at double precision.
inline double wigner3j_racah(const AngularKey& k) {
    const int tj1 = k.two_j1, tj2 = k.two_j2, tj3 = k.two_j3;
    const int tm1 = k.two_m1, tm2 = k.two_m2, tm3 = k.two_m3;
    if (tm1 + tm2 + tm3 != 0) return 0.0;
    if (tj3 < std::abs(tj1 - tj2) || tj3 > tj1 + tj2) return 0.0;
    if (((tj1 + tj2 + tj3) & 1) != 0) return 0.0; // j1+j2+j3 must be an integer

    const int jjj = (tj1 + tj2 + tj3) / 2; // j1+j2+j3
    const int j1mj2pj3 = (tj1 - tj2 + tj3) / 2;
    const int j1pj2mj3 = (tj1 + tj2 - tj3) / 2;
    const int mj1pj2pj3 = (-tj1 + tj2 + tj3) / 2;
    const int j1pm1 = (tj1 + tm1) / 2, j1mm1 = (tj1 - tm1) / 2;
    const int j2pm2 = (tj2 + tm2) / 2, j2mm2 = (tj2 - tm2) / 2;
    const int j3pm3 = (tj3 + tm3) / 2, j3mm3 = (tj3 - tm3) / 2;

    const long double pref =
        0.5L * (log_factorial(j1pj2mj3) + log_factorial(j1mj2pj3) + log_factorial(mj1pj2pj3) -
                log_factorial(jjj + 1) + log_factorial(j1pm1) + log_factorial(j1mm1) +
                log_factorial(j2pm2) + log_factorial(j2mm2) + log_factorial(j3pm3) +
                log_factorial(j3mm3));

    const int t_min = std::max({0, (tj2 - tj3 - tm1) / 2, (tj1 - tj3 + tm2) / 2});
    const int t_max = std::min({j1pj2mj3, j1mm1, j2pm2});
    if (t_min > t_max) return 0.0;

    long double sum = 0.0L;
    for (int t = t_min; t <= t_max; ++t) {
        const long double log_den = log_factorial(t) + log_factorial((tj3 - tj2 + tm1) / 2 + t) +
                                    log_factorial((tj3 - tj1 - tm2) / 2 + t) +
                                    log_factorial(j1pj2mj3 - t) + log_factorial(j1mm1 - t) +
                                    log_factorial(j2pm2 - t);
        const long double term = std::exp(pref - log_den);
        sum += (t & 1) ? -term : term;
    }
    const int sign_exp = (tj1 - tj2 - tm3) / 2; // j1 - j2 - m3, an integer here
    const long double value = ((sign_exp & 1) ? -1.0L : 1.0L) * sum;
    return static_cast<double>(value);
}

/// Sharded concurrent memo cache for 3j values. Reads take a shared lock;
/// misses compute outside any lock and insert under an exclusive lock.
class Wigner3jCache {
  public:
    static Wigner3jCache& instance() {
        static Wigner3jCache cache;
        return cache;
    }

    double get(const AngularKey& k) {
        const std::uint64_t key = pack(k);
        Shard& shard = shards_[key % n_shards];
        {
            std::shared_lock lock(shard.mutex);
            auto it = shard.map.find(key);
            if (it != shard.map.end()) return it->second;
        }
        const double value = wigner3j_racah(k);
        {
            std::unique_lock lock(shard.mutex);
            shard.map.emplace(key, value);
        }
        return value;
    }

  private:
    static constexpr std::size_t n_shards = 16;
    struct Shard {
        std::shared_mutex mutex;
        std::unordered_map<std::uint64_t, double> map;
    };
    std::array<Shard, n_shards> shards_;

    static std::uint64_t pack(const AngularKey& k) {
        auto j = [](int tj) { return static_cast<std::uint64_t>(tj); };
        auto m = [](int tm) { return static_cast<std::uint64_t>(tm + 128); };
        return j(k.two_j1) | (j(k.two_j2) << 8) | (j(k.two_j3) << 16) |
               (m(k.two_m1) << 24) | (m(k.two_m2) << 33) | (m(k.two_m3) << 42);
    }
};

} // namespace detail

/// Wigner 3j symbol. Returns exactly 0 outside the triangle rule or when
/// m1+m2+m3 != 0. Values are memoized in a concurrent cache.
inline double wigner3j(const AngularKey& k) {
    if (k.two_m1 + k.two_m2 + k.two_m3 != 0) return 0.0;
    if (k.two_j3 < std::abs(k.two_j1 - k.two_j2) || k.two_j3 > k.two_j1 + k.two_j2) return 0.0;
    if (k.two_j1 > 127 || k.two_j2 > 127 || k.two_j3 > 127)
        return detail::wigner3j_racah(k); // beyond cache key range; compute directly
    return detail::Wigner3jCache::instance().get(k);
}

/// Integer-momentum convenience overload.
inline double wigner3j(int l1, int l2, int l3, int m1, int m2, int m3) {
    if (std::abs(m1) > l1 || std::abs(m2) > l2 || std::abs(m3) > l3) return 0.0;
    return wigner3j(AngularKey::integers(l1, l2, l3, m1, m2, m3));
}

/// Uncached evaluation (reference path for cache tests).
inline double wigner3j_uncached(int l1, int l2, int l3, int m1, int m2, int m3) {
    if (std::abs(m1) > l1 || std::abs(m2) > l2 || std::abs(m3) > l3) return 0.0;
    return detail::wigner3j_racah(AngularKey::integers(l1, l2, l3, m1, m2, m3));
}

struct EulerAngles {
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

/// Reduced rotation matrix d^l_{m,mp}(beta) for the active z-y-z convention.
inline double wigner_d(int l, int m, int mp, double beta) {
    if (l < 0 || std::abs(m) > l || std::abs(mp) > l)
        throw ArgumentError("wigner_d: |m|,|mp| must be <= l");
    const double c = std::cos(0.5 * beta);
    const double s = std::sin(0.5 * beta);
    const long double pref = 0.5L * (log_factorial(l + m) + log_factorial(l - m) +
                                     log_factorial(l + mp) + log_factorial(l - mp));
    const int s_min = std::max(0, mp - m);
    const int s_max = std::min(l + mp, l - m);
    long double sum = 0.0L;
    for (int k = s_min; k <= s_max; ++k) {
        const long double log_den = log_factorial(l + mp - k) + log_factorial(k) +
                                    log_factorial(m - mp + k) + log_factorial(l - m - k);
        long double term = std::exp(pref - log_den);
        term *= std::pow(static_cast<long double>(c), 2 * l + mp - m - 2 * k);
        term *= std::pow(static_cast<long double>(s), m - mp + 2 * k);
        sum += ((m - mp + k) & 1) ? -term : term;
    }
    return static_cast<double>(sum);
}

/// Full rotation matrix D^l_{m,mp} = e^{-i m alpha} d^l_{m,mp}(beta) e^{-i mp gamma}.
inline std::complex<double> wigner_D(int l, int m, int mp, const EulerAngles& g) {
    const double d = wigner_d(l, m, mp, g.beta);
    return std::polar(d, -(m * g.alpha + mp * g.gamma));
}

/// Associated Legendre P^M_L(x) with Condon-Shortley phase, 0 <= M <= L.
inline double assoc_legendre(int L, int M, double x) {
    if (M < 0 || M > L) throw ArgumentError("assoc_legendre: need 0 <= M <= L");
    if (std::abs(x) > 1.0) throw ArgumentError("assoc_legendre: |x| > 1");
    // P^M_M = (-1)^M (2M-1)!! (1-x^2)^{M/2}, then upward recurrence in L.
    double pmm = 1.0;
    if (M > 0) {
        const double somx2 = std::sqrt((1.0 - x) * (1.0 + x));
        double fact = 1.0;
        for (int i = 0; i < M; ++i) {
            pmm *= -fact * somx2;
            fact += 2.0;
        }
    }
    if (L == M) return pmm;
    double pmmp1 = x * (2.0 * M + 1.0) * pmm;
    if (L == M + 1) return pmmp1;
    double pll = 0.0;
    for (int ll = M + 2; ll <= L; ++ll) {
        pll = (x * (2.0 * ll - 1.0) * pmmp1 - (ll + M - 1.0) * pmm) / (ll - M);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    return pll;
}

/// Associated Legendre for any M, using P^{-M}_L = (-1)^M (L-M)!/(L+M)! P^M_L.
inline double assoc_legendre_any(int L, int M, double x) {
    if (std::abs(M) > L) throw ArgumentError("assoc_legendre_any: |M| > L");
    if (M >= 0) return assoc_legendre(L, M, x);
    const int Ma = -M;
    const long double ratio =
        std::exp(log_factorial(L - Ma) - log_factorial(L + Ma));
    const double sign = (Ma & 1) ? -1.0 : 1.0;
    return static_cast<double>(sign * ratio * assoc_legendre(L, Ma, x));
}

/// Spherical harmonic Y_{lm}(theta, phi), Condon-Shortley phase.
inline std::complex<double> sph_harm(int l, int m, double theta, double phi) {
    if (l < 0 || std::abs(m) > l) throw ArgumentError("sph_harm: |m| > l");
    const long double log_norm =
        0.5L * (std::log((2.0L * l + 1.0L) / (4.0L * constants::pi)) +
                log_factorial(l - m) - log_factorial(l + m));
    const double norm = static_cast<double>(std::exp(log_norm));
    const double p = assoc_legendre_any(l, m, std::cos(theta));
    return std::polar(norm * p, m * phi);
}

/// Clebsch-Gordan linearization of a D-matrix product:
///   D^{l1}_{m1,mp1} D^{l2}_{m2,mp2}
///     = sum_l  w_l * conj(D^l_{-(m1+m2), -(mp1+mp2)}),
///   w_l = (2l+1) * 3j(l1,l2,l; m1,m2,-(m1+m2)) * 3j(l1,l2,l; mp1,mp2,-(mp1+mp2)).
/// Returns (l, w_l) for every l in |l1-l2| .. l1+l2, including zero weights.
inline std::vector<std::pair<int, double>> d_product_linearization(int l1, int m1, int mp1,
                                                                   int l2, int m2, int mp2) {
    if (std::abs(m1) > l1 || std::abs(mp1) > l1 || std::abs(m2) > l2 || std::abs(mp2) > l2)
        throw ArgumentError("d_product_linearization: index out of range");
    const int m12 = m1 + m2;
    const int mp12 = mp1 + mp2;
    std::vector<std::pair<int, double>> out;
    for (int l = std::abs(l1 - l2); l <= l1 + l2; ++l) {
        double w = 0.0;
        if (std::abs(m12) <= l && std::abs(mp12) <= l)
            w = (2.0 * l + 1.0) * wigner3j(l1, l2, l, m1, m2, -m12) *
                wigner3j(l1, l2, l, mp1, mp2, -mp12);
        out.emplace_back(l, w);
    }
    return out;
}

/// Analytic Euler-angle average of a triple D-matrix product:
///   (1/8pi^2) Int D^{l1}_{m1,mp1} D^{l2}_{m2,mp2} D^{l3}_{m3,mp3} d(alpha) dcos(beta) d(gamma)
///     = 3j(l1,l2,l3; m1,m2,m3) * 3j(l1,l2,l3; mp1,mp2,mp3).
inline double triple_D_integral(int l1, int m1, int mp1, int l2, int m2, int mp2, int l3, int m3,
                                int mp3) {
    return wigner3j(l1, l2, l3, m1, m2, m3) * wigner3j(l1, l2, l3, mp1, mp2, mp3);
}

} // namespace padkit
