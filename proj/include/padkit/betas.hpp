#pragma once

// Orientation-averaged photoelectron angular distributions in closed form.
//
// After averaging over all molecular orientations (uniform Euler-angle
// measure), the lab-frame angle-resolved ionization probability at
// photoelectron energy e_k separates into three contributions,
//
//   I(theta, phi) = Re  sum_{L,M} [ b1 + b2 + 2*bint ]_{L,M}
//                       P_L^M(cos theta) e^{i M phi},
//
// where b1 comes from |one-photon amplitude|^2 (L <= 2), b2 from
// |two-photon amplitude|^2 (L <= 4), and bint from the one-/two-photon
// cross term (L <= 3). Each table is computed here as a finite sum over
// Wigner 3j symbols contracting the field's spherical components (through
// the time integrals of pulses.hpp) with the tabulated dipole matrix
// elements (structure.hpp). The associated Legendre functions carry the
// Condon-Shortley phase and P_L^{-M} = (-1)^M (L-M)!/(L+M)! P_L^M, so a
// consistent table satisfies the reality pairing
//
//   beta_{L,-M} = (-1)^M (L+M)!/(L-M)! conj(beta_{L,M}),
//
// which assemble() verifies indirectly by rejecting nonreal intensities.
//
// Conventions: spherical field components indexed mu0 in {-1,0,+1} with
// E'_{-mu} = (-1)^mu conj(E'_mu); dipole operators r_mu in the same basis;
// two-photon pathways run over intermediate orbitals p >= i0 (the ionized
// orbital itself contributes the permanent-dipole branch, every later
// orbital the excitation branch). All energies in atomic units.

#include <array>
#include <cmath>
#include <complex>
#include <ostream>
#include <vector>

#include "padkit/angular.hpp"
#include "padkit/constants.hpp"
#include "padkit/errors.hpp"
#include "padkit/pulses.hpp"
#include "padkit/structure.hpp"
#include "padkit/util.hpp"

namespace padkit {

enum class BetaPart { one_photon, two_photon, interference };

inline const char* beta_part_name(BetaPart p) {
    switch (p) {
        case BetaPart::one_photon: return "1ph";
        case BetaPart::two_photon: return "2ph";
        case BetaPart::interference: return "int";
    }
    throw ArgumentError("unknown beta part");
}

/// Dense (L, M) table of anisotropy coefficients for one contribution at one
/// photoelectron energy. Entries above the part's hard cap read as exact
/// zeros: L <= 2 for one-photon, L <= 4 for two-photon, L <= 3 for the
/// interference term (triangle rules on the rank couplings).
class BetaTable {
  public:
    BetaTable(BetaPart part, double e_k_au, int l_cap)
        : part_(part), e_k_(e_k_au), l_cap_(l_cap),
          c_(static_cast<std::size_t>(l_cap + 1) * (l_cap + 1), {0.0, 0.0}) {
        if (l_cap < 0) throw ArgumentError("beta table cap must be >= 0");
    }

    BetaPart part() const { return part_; }
    double e_k() const { return e_k_; } // atomic units
    int l_cap() const { return l_cap_; }

    std::complex<double> at(int L, int M) const {
        if (L < 0 || std::abs(M) > L) throw ArgumentError("beta table index out of range");
        if (L > l_cap_) return {0.0, 0.0};
        return c_[static_cast<std::size_t>(L) * L + L + M];
    }

    std::complex<double>& ref(int L, int M) {
        if (L < 0 || L > l_cap_ || std::abs(M) > L)
            throw ArgumentError("beta table index out of range");
        return c_[static_cast<std::size_t>(L) * L + L + M];
    }

  private:
    BetaPart part_;
    double e_k_;
    int l_cap_;
    std::vector<std::complex<double>> c_;
};

namespace detail {

inline double parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

/// (2L+1)/(4 pi) * sqrt((L-M)!/(L+M)!), the prefactor normalizing each
/// (L, M) coefficient against the P_L^M e^{iM phi} basis.
inline double beta_prefactor(int L, int M) {
    return (2.0 * L + 1.0) / (4.0 * constants::pi) *
           std::exp(0.5 * static_cast<double>(log_factorial(L - M) - log_factorial(L + M)));
}

/// Complex coefficients over partial waves (l, m), dense in l*l + l + m.
struct PartialWaveVector {
    int l_max = 0;
    std::vector<std::complex<double>> c;

    explicit PartialWaveVector(int lmax = 0)
        : l_max(lmax), c(static_cast<std::size_t>(lmax + 1) * (lmax + 1), {0.0, 0.0}) {}

    std::complex<double> at(int l, int m) const {
        return c[static_cast<std::size_t>(lm_index(l, m))];
    }
    std::complex<double>& ref(int l, int m) {
        return c[static_cast<std::size_t>(lm_index(l, m))];
    }
};

/// Contraction of two partial-wave coefficient vectors against the rank-L
/// detector tensor:
///
///   K_L(A, B; s) = sum_{l,m} (-1)^m A_{l,m} sum_{l'} sqrt((2l+1)(2l'+1))
///                  3j(l,l',L;0,0,0) 3j(l,l',L;m,-m',m'-m) conj(B_{l',m'}),
///
/// with m' = m - s. This is the common angular core of all three beta
/// contributions; only the operand vectors and the shift s differ.
inline std::complex<double> partial_wave_contraction(int L, const PartialWaveVector& A,
                                                     const PartialWaveVector& B, int s) {
    std::complex<double> acc{0.0, 0.0};
    for (int l = 0; l <= A.l_max; ++l)
        for (int m = -l; m <= l; ++m) {
            const std::complex<double> a = A.at(l, m);
            if (a == std::complex<double>(0.0, 0.0)) continue;
            const int mp = m - s;
            const int lp_lo = std::max(std::abs(l - L), std::abs(mp));
            const int lp_hi = std::min(B.l_max, l + L);
            for (int lp = lp_lo; lp <= lp_hi; ++lp) {
                const double w0 = wigner3j(l, lp, L, 0, 0, 0);
                if (w0 == 0.0) continue; // parity: l + l' + L must be even
                const double wm = wigner3j(l, lp, L, m, -mp, mp - m);
                if (wm == 0.0) continue;
                acc += parity(m) * a * std::sqrt((2.0 * l + 1.0) * (2.0 * lp + 1.0)) * w0 *
                       wm * std::conj(B.at(lp, mp));
            }
        }
    return acc;
}

/// Ionization dipoles of orbital p at photoelectron energy e_k as three
/// partial-wave vectors indexed by the dipole spherical component mu.
inline std::array<PartialWaveVector, 3> continuum_slices(const DipoleSet& dip, int p,
                                                         double e_k) {
    std::array<PartialWaveVector, 3> out{PartialWaveVector(dip.l_max()),
                                         PartialWaveVector(dip.l_max()),
                                         PartialWaveVector(dip.l_max())};
    for (int l = 0; l <= dip.l_max(); ++l)
        for (int m = -l; m <= l; ++m)
            for (int mu = -1; mu <= 1; ++mu)
                out[static_cast<std::size_t>(mu + 1)].ref(l, m) =
                    interpolate_continuum(dip, p, l, m, mu, e_k);
    return out;
}

/// Bound-side dipole of the two-photon pathway through intermediate p: the
/// i0 -> p excitation dipole, or for p = i0 the summed permanent dipole of
/// the occupied orbitals. Indexed by mu + 1.
inline std::array<std::complex<double>, 3> pathway_bound_dipole(const OrbitalSet& orb,
                                                                const DipoleSet& dip, int p) {
    std::array<std::complex<double>, 3> chi{};
    if (p == orb.i0) {
        for (int i : orb.occupied_indices())
            for (int mu = -1; mu <= 1; ++mu) chi[static_cast<std::size_t>(mu + 1)] += dip.bb(i, i, mu);
    } else {
        for (int mu = -1; mu <= 1; ++mu)
            chi[static_cast<std::size_t>(mu + 1)] = dip.bb(p, orb.i0, mu);
    }
    return chi;
}

/// Two-photon pathway amplitudes coupled to definite rank Q on both the
/// detector side (index a) and the field side (index t):
///
///   Z^Q_{a,t}(l,m) = sum_p s^{p,Q}_a(l,m) f^{p,Q}_t
///   s^{p,Q}_a(l,m) = sum_{mu+nu=a} 3j(1,1,Q;mu,nu,-a) R^p_{l,m,mu} chi^p_nu
///   f^{p,Q}_t      = sum_{mu0+nu0=t} 3j(1,1,Q;-mu0,-nu0,t) F^p_{mu0,nu0}
///
/// where R^p are the ionization dipoles of intermediate p at e_k, chi^p the
/// bound-side dipole, and F^p the time-ordered two-photon field integrals.
struct RankCoupledPathways {
    int l_max = 0;
    // z[Q] is a (2Q+1) x (2Q+1) array over (a, t), each a partial-wave vector.
    std::array<std::vector<PartialWaveVector>, 3> z;

    const PartialWaveVector& at(int Q, int a, int t) const {
        return z[static_cast<std::size_t>(Q)]
                [static_cast<std::size_t>((a + Q) * (2 * Q + 1) + (t + Q))];
    }
    PartialWaveVector& ref(int Q, int a, int t) {
        return z[static_cast<std::size_t>(Q)]
                [static_cast<std::size_t>((a + Q) * (2 * Q + 1) + (t + Q))];
    }
};

inline RankCoupledPathways rank_coupled_pathways(const OrbitalSet& orb, const DipoleSet& dip,
                                                 const TimeIntegrator& integ, double e_k) {
    RankCoupledPathways out;
    out.l_max = dip.l_max();
    for (int Q = 0; Q <= 2; ++Q)
        out.z[static_cast<std::size_t>(Q)].assign(
            static_cast<std::size_t>(2 * Q + 1) * (2 * Q + 1), PartialWaveVector(dip.l_max()));

    const double e_i0 = orb.energy(static_cast<std::size_t>(orb.i0));
    for (int p = orb.i0; p < dip.n_orbitals(); ++p) {
        const auto slices = continuum_slices(dip, p, e_k);
        const auto chi = pathway_bound_dipole(orb, dip, p);
        const auto F = integ.two_photon_all(e_k, orb.energy(static_cast<std::size_t>(p)), e_i0);

        for (int Q = 0; Q <= 2; ++Q) {
            // Field-side scalars f^{p,Q}_t.
            std::array<std::complex<double>, 5> f{};
            for (int t = -Q; t <= Q; ++t)
                for (int mu0 = -1; mu0 <= 1; ++mu0) {
                    const int nu0 = t - mu0;
                    if (std::abs(nu0) > 1) continue;
                    const double w = wigner3j(1, 1, Q, -mu0, -nu0, t);
                    if (w == 0.0) continue;
                    f[static_cast<std::size_t>(t + Q)] +=
                        w * F[static_cast<std::size_t>(mu0 + 1)][static_cast<std::size_t>(nu0 + 1)];
                }
            // Detector-side vectors s^{p,Q}_a, then the outer product into Z.
            for (int a = -Q; a <= Q; ++a) {
                PartialWaveVector s(dip.l_max());
                bool nonzero = false;
                for (int mu = -1; mu <= 1; ++mu) {
                    const int nu = a - mu;
                    if (std::abs(nu) > 1) continue;
                    const double w = wigner3j(1, 1, Q, mu, nu, -a);
                    if (w == 0.0) continue;
                    const std::complex<double> cnu = chi[static_cast<std::size_t>(nu + 1)];
                    if (cnu == std::complex<double>(0.0, 0.0)) continue;
                    nonzero = true;
                    const PartialWaveVector& R = slices[static_cast<std::size_t>(mu + 1)];
                    for (std::size_t i = 0; i < s.c.size(); ++i) s.c[i] += w * cnu * R.c[i];
                }
                if (!nonzero) continue;
                for (int t = -Q; t <= Q; ++t) {
                    const std::complex<double> ft = f[static_cast<std::size_t>(t + Q)];
                    if (ft == std::complex<double>(0.0, 0.0)) continue;
                    PartialWaveVector& zqat = out.ref(Q, a, t);
                    for (std::size_t i = 0; i < s.c.size(); ++i) zqat.c[i] += s.c[i] * ft;
                }
            }
        }
    }
    return out;
}

} // namespace detail

/// Widest |energy difference| the time integrals must support when computing
/// beta tables for photoelectron energies within [e_k_lo, e_k_hi] (a.u.).
inline double beta_bandwidth(const OrbitalSet& orb, double e_k_lo, double e_k_hi) {
    if (orb.i0 < 0) throw ArgumentError("orbital set has no ionized orbital");
    const double e_i0 = orb.energy(static_cast<std::size_t>(orb.i0));
    double bw = 0.0;
    for (std::size_t p = static_cast<std::size_t>(orb.i0); p < orb.size(); ++p) {
        const double e_p = orb.energy(p);
        bw = std::max({bw, std::abs(e_k_lo - e_p), std::abs(e_k_hi - e_p),
                       std::abs(e_p - e_i0)});
    }
    return bw;
}

/// Time-integral engine sized for beta evaluation over [e_k_lo, e_k_hi] (a.u.).
inline TimeIntegrator make_beta_integrator(const FieldSpec& spec, const OrbitalSet& orb,
                                           double e_k_lo, double e_k_hi) {
    return TimeIntegrator(spec, beta_bandwidth(orb, e_k_lo, e_k_hi));
}

/// One-photon anisotropy coefficients (L <= 2),
///
///   b1_{L,M} = pre(L,M) [ sum_{mu0} (-1)^{mu0+M} I_{mu0} conj(I_{mu0+M})
///                         3j(1,1,L;mu0,-mu0-M,M) ]
///              x [ sum_{mu,mu'} (-1)^mu 3j(1,1,L;-mu,mu',mu-mu')
///                  K_L(R_mu, R_mu'; mu-mu') ],
///
/// with I_{mu0} the one-photon field integrals at detuning e_k - e_i0 and
/// R_mu the partial-wave ionization dipoles of the ionized orbital at e_k.
inline BetaTable beta_1ph(const OrbitalSet& orb, const DipoleSet& dip,
                          const TimeIntegrator& integ, double e_k) {
    orb.validate();
    const auto R = detail::continuum_slices(dip, orb.i0, e_k);
    const double delta = e_k - orb.energy(static_cast<std::size_t>(orb.i0));
    std::array<std::complex<double>, 3> I;
    for (int mu0 = -1; mu0 <= 1; ++mu0)
        I[static_cast<std::size_t>(mu0 + 1)] = integ.one_photon(mu0, delta);

    BetaTable out(BetaPart::one_photon, e_k, 2);
    for (int L = 0; L <= 2; ++L)
        for (int M = -L; M <= L; ++M) {
            std::complex<double> field{0.0, 0.0};
            for (int mu0 = -1; mu0 <= 1; ++mu0) {
                const int mu0p = mu0 + M;
                if (std::abs(mu0p) > 1) continue;
                const double w = wigner3j(1, 1, L, mu0, -mu0 - M, M);
                if (w == 0.0) continue;
                field += detail::parity(mu0 + M) * w * I[static_cast<std::size_t>(mu0 + 1)] *
                         std::conj(I[static_cast<std::size_t>(mu0p + 1)]);
            }
            if (field == std::complex<double>(0.0, 0.0)) continue;
            std::complex<double> det{0.0, 0.0};
            for (int mu = -1; mu <= 1; ++mu)
                for (int mup = -1; mup <= 1; ++mup) {
                    const double w = wigner3j(1, 1, L, -mu, mup, mu - mup);
                    if (w == 0.0) continue;
                    det += detail::parity(mu) * w *
                           detail::partial_wave_contraction(
                               L, R[static_cast<std::size_t>(mu + 1)],
                               R[static_cast<std::size_t>(mup + 1)], mu - mup);
                }
            out.ref(L, M) = detail::beta_prefactor(L, M) * field * det;
        }
    return out;
}

/// Two-photon anisotropy coefficients (L <= 4),
///
///   b2_{L,M} = pre(L,M) sum_{Q1,Q2} (2Q1+1)(2Q2+1)
///              sum_{af} (-1)^{af} 3j(Q1,Q2,L;af,-af-M,M)
///              sum_{a,b} (-1)^b 3j(Q1,Q2,L;-a,b,a-b)
///              K_L(Z^{Q1}_{a,af}, Z^{Q2}_{b,af+M}; a-b).
inline BetaTable beta_2ph(const OrbitalSet& orb, const DipoleSet& dip,
                          const TimeIntegrator& integ, double e_k) {
    orb.validate();
    const detail::RankCoupledPathways Z = detail::rank_coupled_pathways(orb, dip, integ, e_k);

    BetaTable out(BetaPart::two_photon, e_k, 4);
    for (int L = 0; L <= 4; ++L)
        for (int M = -L; M <= L; ++M) {
            std::complex<double> sum{0.0, 0.0};
            for (int Q1 = 0; Q1 <= 2; ++Q1)
                for (int Q2 = 0; Q2 <= 2; ++Q2) {
                    if (L < std::abs(Q1 - Q2) || L > Q1 + Q2) continue;
                    std::complex<double> qsum{0.0, 0.0};
                    for (int af = -Q1; af <= Q1; ++af) {
                        if (std::abs(af + M) > Q2) continue;
                        const double w1 = wigner3j(Q1, Q2, L, af, -af - M, M);
                        if (w1 == 0.0) continue;
                        std::complex<double> inner{0.0, 0.0};
                        for (int a = -Q1; a <= Q1; ++a)
                            for (int b = -Q2; b <= Q2; ++b) {
                                const double w2 = wigner3j(Q1, Q2, L, -a, b, a - b);
                                if (w2 == 0.0) continue;
                                inner += detail::parity(b) * w2 *
                                         detail::partial_wave_contraction(
                                             L, Z.at(Q1, a, af), Z.at(Q2, b, af + M), a - b);
                            }
                        qsum += detail::parity(af) * w1 * inner;
                    }
                    sum += static_cast<double>((2 * Q1 + 1) * (2 * Q2 + 1)) * qsum;
                }
            out.ref(L, M) = detail::beta_prefactor(L, M) * sum;
        }
    return out;
}

/// One-/two-photon interference coefficients (L <= 3). The raw cross-term
/// coefficient is
///
///   x_{L,M} = -i pre(L,M) sum_{Q2} (2Q2+1)
///             sum_{mu0} I_{mu0} 3j(1,Q2,L;mu0,-mu0-M,M)
///             sum_{mu,b} (-1)^{mu+b} 3j(1,Q2,L;-mu,b,mu-b)
///             K_L(R_mu, Z^{Q2}_{b,mu0+M}; mu-b),
///
/// and since the physical contribution is the cross term plus its complex
/// conjugate, the stored table is the symmetrized half-sum
///
///   bint_{L,M} = ( x_{L,M} + (-1)^M (L-M)!/(L+M)! conj(x_{L,-M}) ) / 2,
///
/// which satisfies the reality pairing like the squared-amplitude tables and
/// enters the assembled intensity with weight 2.
inline BetaTable beta_int(const OrbitalSet& orb, const DipoleSet& dip,
                          const TimeIntegrator& integ, double e_k) {
    orb.validate();
    const auto R = detail::continuum_slices(dip, orb.i0, e_k);
    const double delta = e_k - orb.energy(static_cast<std::size_t>(orb.i0));
    std::array<std::complex<double>, 3> I;
    for (int mu0 = -1; mu0 <= 1; ++mu0)
        I[static_cast<std::size_t>(mu0 + 1)] = integ.one_photon(mu0, delta);
    const detail::RankCoupledPathways Z = detail::rank_coupled_pathways(orb, dip, integ, e_k);

    BetaTable raw(BetaPart::interference, e_k, 3);
    for (int L = 0; L <= 3; ++L)
        for (int M = -L; M <= L; ++M) {
            std::complex<double> sum{0.0, 0.0};
            for (int Q2 = 0; Q2 <= 2; ++Q2) {
                if (L < std::abs(1 - Q2) || L > 1 + Q2) continue;
                std::complex<double> qsum{0.0, 0.0};
                for (int mu0 = -1; mu0 <= 1; ++mu0) {
                    const int t = mu0 + M;
                    if (std::abs(t) > Q2) continue;
                    const double w1 = wigner3j(1, Q2, L, mu0, -mu0 - M, M);
                    if (w1 == 0.0) continue;
                    std::complex<double> inner{0.0, 0.0};
                    for (int mu = -1; mu <= 1; ++mu)
                        for (int b = -Q2; b <= Q2; ++b) {
                            const double w2 = wigner3j(1, Q2, L, -mu, b, mu - b);
                            if (w2 == 0.0) continue;
                            inner += detail::parity(mu + b) * w2 *
                                     detail::partial_wave_contraction(
                                         L, R[static_cast<std::size_t>(mu + 1)],
                                         Z.at(Q2, b, t), mu - b);
                        }
                    qsum += I[static_cast<std::size_t>(mu0 + 1)] * w1 * inner;
                }
                sum += static_cast<double>(2 * Q2 + 1) * qsum;
            }
            raw.ref(L, M) = std::complex<double>(0.0, -1.0) * detail::beta_prefactor(L, M) * sum;
        }

    BetaTable out(BetaPart::interference, e_k, 3);
    for (int L = 0; L <= 3; ++L)
        for (int M = -L; M <= L; ++M) {
            const double fac =
                detail::parity(M) *
                std::exp(static_cast<double>(log_factorial(L - M) - log_factorial(L + M)));
            out.ref(L, M) = 0.5 * (raw.at(L, M) + fac * std::conj(raw.at(L, -M)));
        }
    return out;
}

/// All three tables at one photoelectron energy.
struct BetaSet {
    double e_k; // atomic units
    BetaTable one;
    BetaTable two;
    BetaTable interference;
};

inline BetaSet compute_betas(const OrbitalSet& orb, const DipoleSet& dip,
                             const TimeIntegrator& integ, double e_k) {
    return BetaSet{e_k, beta_1ph(orb, dip, integ, e_k), beta_2ph(orb, dip, integ, e_k),
                   beta_int(orb, dip, integ, e_k)};
}

// Convenience overloads that build a single-use time integrator sized for
// this one energy. Prefer the TimeIntegrator forms when scanning a grid.
inline BetaTable beta_1ph(const OrbitalSet& orb, const DipoleSet& dip, const FieldSpec& spec,
                          double e_k) {
    return beta_1ph(orb, dip, make_beta_integrator(spec, orb, e_k, e_k), e_k);
}
inline BetaTable beta_2ph(const OrbitalSet& orb, const DipoleSet& dip, const FieldSpec& spec,
                          double e_k) {
    return beta_2ph(orb, dip, make_beta_integrator(spec, orb, e_k, e_k), e_k);
}
inline BetaTable beta_int(const OrbitalSet& orb, const DipoleSet& dip, const FieldSpec& spec,
                          double e_k) {
    return beta_int(orb, dip, make_beta_integrator(spec, orb, e_k, e_k), e_k);
}
inline BetaSet compute_betas(const OrbitalSet& orb, const DipoleSet& dip, const FieldSpec& spec,
                             double e_k) {
    const TimeIntegrator integ = make_beta_integrator(spec, orb, e_k, e_k);
    return compute_betas(orb, dip, integ, e_k);
}

/// Angle-resolved intensity assembled from the three tables:
///   Re sum_{L,M} (b1 + b2 + 2*bint)_{L,M} P_L^M(cos theta) e^{i M phi}.
/// The imaginary residue must stay below 1e-8 of the term-magnitude sum;
/// anything larger signals inconsistent tables and raises NumericalError.
inline double assemble(const BetaTable& b1, const BetaTable& b2, const BetaTable& bint,
                       double theta, double phi) {
    if (b1.part() != BetaPart::one_photon || b2.part() != BetaPart::two_photon ||
        bint.part() != BetaPart::interference)
        throw ArgumentError("assemble expects (one-photon, two-photon, interference) tables");
    if (b1.e_k() != b2.e_k() || b1.e_k() != bint.e_k())
        throw ArgumentError("assemble requires tables at the same photoelectron energy");

    const double x = std::cos(theta);
    std::complex<double> val{0.0, 0.0};
    double scale = 0.0;
    const int l_top = std::max({b1.l_cap(), b2.l_cap(), bint.l_cap()});
    for (int L = 0; L <= l_top; ++L)
        for (int M = -L; M <= L; ++M) {
            const std::complex<double> c = b1.at(L, M) + b2.at(L, M) + 2.0 * bint.at(L, M);
            if (c == std::complex<double>(0.0, 0.0)) continue;
            const std::complex<double> term =
                c * assoc_legendre_any(L, M, x) * std::polar(1.0, M * phi);
            val += term;
            scale += std::abs(term);
        }
    if (scale > 0.0 && std::abs(val.imag()) > 1e-8 * scale)
        throw NumericalError("assembled angular distribution has a nonreal residue (" +
                             std::to_string(val.imag() / scale) +
                             " relative); the beta tables are inconsistent");
    return val.real();
}

/// Integral of the assembled intensity over the full solid angle; only the
/// isotropic (0,0) entries survive.
inline double angular_integral(const BetaTable& b1, const BetaTable& b2,
                               const BetaTable& bint) {
    return 4.0 * constants::pi *
           (b1.at(0, 0) + b2.at(0, 0) + 2.0 * bint.at(0, 0)).real();
}

/// CSV rows "part,e_k_eV,L,M,re,im", one per stored coefficient.
inline void betas_to_csv(std::ostream& out, const BetaSet& set, bool header = true) {
    if (header) out << "part,e_k_eV,L,M,re,im\n";
    const BetaTable* tables[] = {&set.one, &set.two, &set.interference};
    for (const BetaTable* t : tables)
        for (int L = 0; L <= t->l_cap(); ++L)
            for (int M = -L; M <= L; ++M) {
                const std::complex<double> v = t->at(L, M);
                out << beta_part_name(t->part()) << ',' << format_g17(constants::au_to_ev(t->e_k()))
                    << ',' << L << ',' << M << ',' << format_g17(v.real()) << ','
                    << format_g17(v.imag()) << '\n';
            }
}

} // namespace padkit
