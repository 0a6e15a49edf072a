#pragma once
// Brute-force reference pipeline for orientation-averaged photoelectron
// angular distributions: build the first- and second-order molecular-frame
// amplitudes directly, rotate their partial-wave expansions to the lab frame
// with Wigner D-matrices, and average the intensities over molecular
// orientations with an explicit Euler-angle quadrature.
//
// This module is the ground truth the coupled-tensor tables in betas.hpp are
// validated against. It deliberately avoids every piece of product-coupling
// algebra used there (no d_product_linearization, no triple_D_integral, no
// rank-coupled pathway tables); the only shared ingredients are the low-level
// primitives that both pipelines must agree on anyway: Wigner d/D matrices,
// spherical harmonics, the time-domain field integrals, and the continuum
// dipole interpolation.
//
// Quadrature exactness: every integrand is a trigonometric polynomial in
// alpha and gamma of degree at most 2*l_max + 4 and, after the alpha/gamma
// sums, a polynomial in cos(beta) of degree at most 2*l_max + 4. Periodic
// trapezoid rules with n >= 4*l_max + 5 nodes and a Gauss-Legendre rule in
// cos(beta) with n >= 2*l_max + 3 nodes are therefore exact to roundoff,
// which makes agreement checks sharp rather than approximate.

#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <thread>
#include <utility>
#include <vector>

#include "padkit/angular.hpp"
#include "padkit/betas.hpp"
#include "padkit/errors.hpp"
#include "padkit/pulses.hpp"
#include "padkit/quadrature.hpp"
#include "padkit/structure.hpp"

namespace padkit {
namespace oracle {

/// Product quadrature over the Euler angles (alpha, beta, gamma) in the
/// active z-y-z convention: periodic trapezoid in alpha and gamma, and
/// Gauss-Legendre in cos(beta). Total weight is the rotation-group volume
/// 8 pi^2.
struct EulerQuadrature {
    int n_alpha = 0;
    int n_beta = 0;
    int n_gamma = 0;
    std::vector<double> alpha;    ///< trapezoid nodes on [0, 2 pi), weight 2 pi / n_alpha each
    std::vector<double> gamma;    ///< trapezoid nodes on [0, 2 pi), weight 2 pi / n_gamma each
    std::vector<double> beta;     ///< acos of the Gauss-Legendre nodes
    std::vector<double> w_beta;   ///< Gauss-Legendre weights on [-1, 1], sum 2

    std::size_t size() const {
        return alpha.size() * beta.size() * gamma.size();
    }

    /// Angles and weight of flat node index i (beta fastest is NOT used;
    /// layout is alpha-major, then beta, then gamma).
    std::pair<EulerAngles, double> node(std::size_t i) const {
        const std::size_t nb = beta.size(), ng = gamma.size();
        const std::size_t ia = i / (nb * ng);
        const std::size_t ib = (i / ng) % nb;
        const std::size_t ig = i % ng;
        const double two_pi = 2.0 * constants::pi;
        const double w = (two_pi / static_cast<double>(alpha.size())) *
                         (two_pi / static_cast<double>(ng)) * w_beta[ib];
        return {EulerAngles{alpha[ia], beta[ib], gamma[ig]}, w};
    }

    double weight_sum() const {
        double s = 0.0;
        for (std::size_t i = 0; i < size(); ++i) s += node(i).second;
        return s;
    }
};

inline EulerQuadrature make_euler_quadrature(int n_alpha, int n_beta, int n_gamma) {
    if (n_alpha < 2 || n_beta < 2 || n_gamma < 2)
        throw ArgumentError("make_euler_quadrature: need at least 2 nodes per Euler angle");
    EulerQuadrature q;
    q.n_alpha = n_alpha;
    q.n_beta = n_beta;
    q.n_gamma = n_gamma;
    for (int i = 0; i < n_alpha; ++i) q.alpha.push_back(2.0 * constants::pi * i / n_alpha);
    for (int i = 0; i < n_gamma; ++i) q.gamma.push_back(2.0 * constants::pi * i / n_gamma);
    const GaussLegendreRule& gl = gauss_legendre(n_beta);
    for (int i = 0; i < n_beta; ++i) {
        q.beta.push_back(std::acos(gl.x[static_cast<std::size_t>(i)]));
        q.w_beta.push_back(gl.w[static_cast<std::size_t>(i)]);
    }
    return q;
}

/// Node counts that integrate orientation-averaged intensities exactly for
/// partial waves up to l_max (see the degree argument in the file header).
inline EulerQuadrature euler_quadrature_for(int l_max) {
    if (l_max < 0) throw ArgumentError("euler_quadrature_for: l_max must be >= 0");
    return make_euler_quadrature(4 * l_max + 5, 2 * l_max + 3, 4 * l_max + 5);
}

/// 3x3 matrix of the active rotation R = Rz(alpha) Ry(beta) Rz(gamma),
/// row-major; lab vector = R * molecular vector for a vector frozen in the
/// molecular frame.
inline std::array<std::array<double, 3>, 3> rotation_matrix(const EulerAngles& g) {
    const double ca = std::cos(g.alpha), sa = std::sin(g.alpha);
    const double cb = std::cos(g.beta), sb = std::sin(g.beta);
    const double cg = std::cos(g.gamma), sg = std::sin(g.gamma);
    return {{{ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb},
             {sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb},
             {-sb * cg, sb * sg, cb}}};
}

namespace detail {

inline int parity(int n) { return (n % 2 == 0) ? 1 : -1; }

/// Everything about the ionization pathways that does not depend on the
/// molecular orientation: one- and two-photon field integrals, continuum
/// dipoles of each intermediate at the photoelectron energy, and the
/// bound-side dipole chains.
struct Pathways {
    int l_max = 0;
    std::size_t n_lm = 0;
    int i0 = 0;
    std::array<std::complex<double>, 3> I{};  ///< one-photon integrals, index mu0 + 1
    /// Per intermediate p = i0 .. n-1 (offset by i0): continuum dipoles as
    /// flat (l, m) vectors per spherical component mu, the bound-side dipole
    /// chain per component nu, and the 3x3 two-photon field integrals
    /// F[mu0 + 1][nu0 + 1].
    std::vector<std::array<std::vector<std::complex<double>>, 3>> R;
    std::vector<std::array<std::complex<double>, 3>> chi;
    std::vector<std::array<std::array<std::complex<double>, 3>, 3>> F;
};

inline Pathways build_pathways(const OrbitalSet& orb, const DipoleSet& dip,
                               const TimeIntegrator& integ, double e_k) {
    orb.validate();
    Pathways pw;
    pw.l_max = dip.l_max();
    pw.n_lm = static_cast<std::size_t>((dip.l_max() + 1) * (dip.l_max() + 1));
    pw.i0 = orb.i0;
    const double e_i0 = orb.energy(static_cast<std::size_t>(orb.i0));
    for (int mu0 = -1; mu0 <= 1; ++mu0)
        pw.I[static_cast<std::size_t>(mu0 + 1)] = integ.one_photon(mu0, e_k - e_i0);

    for (int p = orb.i0; p < dip.n_orbitals(); ++p) {
        std::array<std::vector<std::complex<double>>, 3> slice;
        for (int mu = -1; mu <= 1; ++mu) {
            auto& v = slice[static_cast<std::size_t>(mu + 1)];
            v.resize(pw.n_lm);
            for (int l = 0; l <= dip.l_max(); ++l)
                for (int m = -l; m <= l; ++m)
                    v[static_cast<std::size_t>(lm_index(l, m))] =
                        interpolate_continuum(dip, p, l, m, mu, e_k);
        }
        pw.R.push_back(std::move(slice));

        std::array<std::complex<double>, 3> chain{};
        if (p == orb.i0) {
            for (int i : orb.occupied_indices())
                for (int mu = -1; mu <= 1; ++mu)
                    chain[static_cast<std::size_t>(mu + 1)] += dip.bb(i, i, mu);
        } else {
            for (int mu = -1; mu <= 1; ++mu)
                chain[static_cast<std::size_t>(mu + 1)] = dip.bb(p, orb.i0, mu);
        }
        pw.chi.push_back(chain);

        pw.F.push_back(integ.two_photon_all(e_k, orb.energy(static_cast<std::size_t>(p)), e_i0));
    }
    return pw;
}

/// Rank-1 Wigner D-matrix cached as D[m + 1][mp + 1].
inline std::array<std::array<std::complex<double>, 3>, 3> d1_matrix(const EulerAngles& g) {
    std::array<std::array<std::complex<double>, 3>, 3> D;
    for (int m = -1; m <= 1; ++m)
        for (int mp = -1; mp <= 1; ++mp)
            D[static_cast<std::size_t>(m + 1)][static_cast<std::size_t>(mp + 1)] =
                wigner_D(1, m, mp, g);
    return D;
}

/// First-order molecular-frame partial-wave coefficients at orientation g:
///
///   c1_{l,m}(g) = i sum_{mu0,mu} (-1)^mu D^1_{mu0,-mu}(g) I_{mu0} R_{l,m,mu}
inline std::vector<std::complex<double>> amp1_coeffs(const Pathways& pw, const EulerAngles& g) {
    const auto D = d1_matrix(g);
    std::vector<std::complex<double>> c(pw.n_lm, {0.0, 0.0});
    for (int mu = -1; mu <= 1; ++mu) {
        std::complex<double> field{0.0, 0.0};
        for (int mu0 = -1; mu0 <= 1; ++mu0)
            field += D[static_cast<std::size_t>(mu0 + 1)][static_cast<std::size_t>(-mu + 1)] *
                     pw.I[static_cast<std::size_t>(mu0 + 1)];
        field *= std::complex<double>(0.0, 1.0) * static_cast<double>(parity(mu));
        if (field == std::complex<double>(0.0, 0.0)) continue;
        const auto& R = pw.R[0][static_cast<std::size_t>(mu + 1)];
        for (std::size_t i = 0; i < pw.n_lm; ++i) c[i] += field * R[i];
    }
    return c;
}

/// Second-order molecular-frame partial-wave coefficients at orientation g:
///
///   c2_{l,m}(g) = - sum_p sum_{mu,nu} (-1)^{mu+nu}
///                   [ sum_{mu0,nu0} D^1_{mu0,-mu}(g) D^1_{nu0,-nu}(g) F^p_{mu0,nu0} ]
///                   R^p_{l,m,mu} chi^p_nu
inline std::vector<std::complex<double>> amp2_coeffs(const Pathways& pw, const EulerAngles& g) {
    const auto D = d1_matrix(g);
    std::vector<std::complex<double>> c(pw.n_lm, {0.0, 0.0});
    for (std::size_t ip = 0; ip < pw.R.size(); ++ip) {
        // q_mu = sum_nu (-1)^nu chi_nu sum_{mu0,nu0} D^1_{mu0,-mu} D^1_{nu0,-nu} F_{mu0,nu0}
        for (int mu = -1; mu <= 1; ++mu) {
            std::complex<double> q{0.0, 0.0};
            for (int nu = -1; nu <= 1; ++nu) {
                const std::complex<double> chain = pw.chi[ip][static_cast<std::size_t>(nu + 1)];
                if (chain == std::complex<double>(0.0, 0.0)) continue;
                std::complex<double> field{0.0, 0.0};
                for (int mu0 = -1; mu0 <= 1; ++mu0)
                    for (int nu0 = -1; nu0 <= 1; ++nu0)
                        field += D[static_cast<std::size_t>(mu0 + 1)]
                                  [static_cast<std::size_t>(-mu + 1)] *
                                 D[static_cast<std::size_t>(nu0 + 1)]
                                  [static_cast<std::size_t>(-nu + 1)] *
                                 pw.F[ip][static_cast<std::size_t>(mu0 + 1)]
                                        [static_cast<std::size_t>(nu0 + 1)];
                q += static_cast<double>(parity(nu)) * chain * field;
            }
            if (q == std::complex<double>(0.0, 0.0)) continue;
            q *= -static_cast<double>(parity(mu));
            const auto& R = pw.R[ip][static_cast<std::size_t>(mu + 1)];
            for (std::size_t i = 0; i < pw.n_lm; ++i) c[i] += q * R[i];
        }
    }
    return c;
}

/// Rotate a molecular-frame partial-wave expansion into the lab frame:
///
///   c'_{l,m'} = sum_m D^l_{m',m}(g) c_{l,m}
///
/// so that sum c'_{l,m'} Y_{l,m'}(lab direction) equals the molecular-frame
/// expansion evaluated at the back-rotated direction.
inline std::vector<std::complex<double>> rotate_to_lab(const std::vector<std::complex<double>>& c,
                                                       int l_max, const EulerAngles& g) {
    std::vector<std::complex<double>> out(c.size(), {0.0, 0.0});
    for (int l = 0; l <= l_max; ++l)
        for (int mp = -l; mp <= l; ++mp) {
            std::complex<double> acc{0.0, 0.0};
            for (int m = -l; m <= l; ++m) {
                const std::complex<double> a = c[static_cast<std::size_t>(lm_index(l, m))];
                if (a == std::complex<double>(0.0, 0.0)) continue;
                acc += wigner_D(l, mp, m, g) * a;
            }
            out[static_cast<std::size_t>(lm_index(l, mp))] = acc;
        }
    return out;
}

/// Evaluate a partial-wave expansion sum c_{l,m} Y_{l,m} at a direction.
inline std::complex<double> eval_expansion(const std::vector<std::complex<double>>& c, int l_max,
                                           double theta, double phi) {
    std::complex<double> acc{0.0, 0.0};
    for (int l = 0; l <= l_max; ++l)
        for (int m = -l; m <= l; ++m) {
            const std::complex<double> a = c[static_cast<std::size_t>(lm_index(l, m))];
            if (a == std::complex<double>(0.0, 0.0)) continue;
            acc += a * sph_harm(l, m, theta, phi);
        }
    return acc;
}

} // namespace detail

/// First-order (one-photon) ionization amplitude for emission direction
/// (theta_k, phi_k) in the molecular frame, at molecular orientation g.
inline std::complex<double> amp1_molframe(const OrbitalSet& orb, const DipoleSet& dip,
                                          const TimeIntegrator& integ, double e_k,
                                          const EulerAngles& g, double theta_k, double phi_k) {
    const detail::Pathways pw = detail::build_pathways(orb, dip, integ, e_k);
    return detail::eval_expansion(detail::amp1_coeffs(pw, g), pw.l_max, theta_k, phi_k);
}

/// Second-order (two-photon) ionization amplitude, molecular frame.
inline std::complex<double> amp2_molframe(const OrbitalSet& orb, const DipoleSet& dip,
                                          const TimeIntegrator& integ, double e_k,
                                          const EulerAngles& g, double theta_k, double phi_k) {
    const detail::Pathways pw = detail::build_pathways(orb, dip, integ, e_k);
    return detail::eval_expansion(detail::amp2_coeffs(pw, g), pw.l_max, theta_k, phi_k);
}

inline std::complex<double> amp1_molframe(const OrbitalSet& orb, const DipoleSet& dip,
                                          const FieldSpec& spec, double e_k, const EulerAngles& g,
                                          double theta_k, double phi_k) {
    return amp1_molframe(orb, dip, make_beta_integrator(spec, orb, e_k, e_k), e_k, g, theta_k,
                         phi_k);
}

inline std::complex<double> amp2_molframe(const OrbitalSet& orb, const DipoleSet& dip,
                                          const FieldSpec& spec, double e_k, const EulerAngles& g,
                                          double theta_k, double phi_k) {
    return amp2_molframe(orb, dip, make_beta_integrator(spec, orb, e_k, e_k), e_k, g, theta_k,
                         phi_k);
}

/// Evaluate a molecular-frame partial-wave amplitude at a lab-frame emission
/// direction, for a molecule rotated by g.
inline std::complex<double> amp_labframe(const std::vector<std::complex<double>>& coeffs,
                                         int l_max, const EulerAngles& g, double theta_kp,
                                         double phi_kp) {
    const std::size_t need = static_cast<std::size_t>((l_max + 1) * (l_max + 1));
    if (coeffs.size() != need)
        throw ArgumentError("amp_labframe: coefficient vector size does not match l_max");
    return detail::eval_expansion(detail::rotate_to_lab(coeffs, l_max, g), l_max, theta_kp,
                                  phi_kp);
}

/// Orientation-averaged photoelectron intensity on a lab-frame polar grid at
/// fixed azimuth, split into the squared first-order, squared second-order,
/// and cross-term contributions (each normalized by the 8 pi^2 rotation
/// volume).
struct OraclePad {
    std::vector<double> theta;  ///< polar angles, radians
    double phi = 0.0;           ///< azimuth, radians
    std::vector<double> one;
    std::vector<double> two;
    std::vector<double> interference;
};

inline OraclePad brute_force_pad(const OrbitalSet& orb, const DipoleSet& dip,
                                 const TimeIntegrator& integ, double e_k,
                                 const std::vector<double>& theta_grid, double phi,
                                 const EulerQuadrature& quad) {
    if (theta_grid.empty()) throw ArgumentError("brute_force_pad: theta grid is empty");
    if (quad.size() == 0) throw ArgumentError("brute_force_pad: empty Euler quadrature");
    const detail::Pathways pw = detail::build_pathways(orb, dip, integ, e_k);
    const std::size_t nt = theta_grid.size();
    const std::size_t n_lm = pw.n_lm;

    // Lab-frame harmonics per direction, contiguous per direction.
    std::vector<std::complex<double>> Y(nt * n_lm);
    for (std::size_t it = 0; it < nt; ++it)
        for (int l = 0; l <= pw.l_max; ++l)
            for (int m = -l; m <= l; ++m)
                Y[it * n_lm + static_cast<std::size_t>(lm_index(l, m))] =
                    sph_harm(l, m, theta_grid[it], phi);

    // Euler nodes are the parallel axis. Nodes are processed in fixed-size
    // blocks; each block accumulates its own partial sums sequentially, and
    // the per-block results are reduced pairwise in block order afterwards,
    // so the result is bit-for-bit reproducible for any thread count.
    const std::size_t n_nodes = quad.size();
    constexpr std::size_t kBlock = 32;
    const std::size_t n_blocks = (n_nodes + kBlock - 1) / kBlock;
    std::vector<std::vector<double>> partial(n_blocks, std::vector<double>(3 * nt, 0.0));

    std::atomic<std::size_t> next_block{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t b = next_block.fetch_add(1);
            if (b >= n_blocks) return;
            std::vector<double>& acc = partial[b];
            const std::size_t lo = b * kBlock;
            const std::size_t hi = std::min(lo + kBlock, n_nodes);
            for (std::size_t i = lo; i < hi; ++i) {
                const auto [g, w] = quad.node(i);
                const auto c1 = detail::rotate_to_lab(detail::amp1_coeffs(pw, g), pw.l_max, g);
                const auto c2 = detail::rotate_to_lab(detail::amp2_coeffs(pw, g), pw.l_max, g);
                for (std::size_t it = 0; it < nt; ++it) {
                    std::complex<double> a1{0.0, 0.0}, a2{0.0, 0.0};
                    const std::complex<double>* y = &Y[it * n_lm];
                    for (std::size_t j = 0; j < n_lm; ++j) {
                        a1 += c1[j] * y[j];
                        a2 += c2[j] * y[j];
                    }
                    acc[0 * nt + it] += w * std::norm(a1);
                    acc[1 * nt + it] += w * std::norm(a2);
                    acc[2 * nt + it] += w * 2.0 * (a1 * std::conj(a2)).real();
                }
            }
        }
    };

    const std::size_t n_threads =
        std::min<std::size_t>(n_blocks, static_cast<std::size_t>(thread_limit()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Pairwise reduction in block order.
    std::vector<std::vector<double>> level = std::move(partial);
    while (level.size() > 1) {
        std::vector<std::vector<double>> up;
        up.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
            std::vector<double> merged = std::move(level[i]);
            const std::vector<double>& other = level[i + 1];
            for (std::size_t j = 0; j < merged.size(); ++j) merged[j] += other[j];
            up.push_back(std::move(merged));
        }
        if (level.size() % 2 == 1) up.push_back(std::move(level.back()));
        level = std::move(up);
    }
    const std::vector<double>& total = level.front();

    OraclePad out;
    out.theta = theta_grid;
    out.phi = phi;
    out.one.resize(nt);
    out.two.resize(nt);
    out.interference.resize(nt);
    const double norm = 1.0 / (8.0 * constants::pi * constants::pi);
    for (std::size_t it = 0; it < nt; ++it) {
        out.one[it] = total[0 * nt + it] * norm;
        out.two[it] = total[1 * nt + it] * norm;
        out.interference[it] = total[2 * nt + it] * norm;
    }
    return out;
}

inline OraclePad brute_force_pad(const OrbitalSet& orb, const DipoleSet& dip,
                                 const FieldSpec& spec, double e_k,
                                 const std::vector<double>& theta_grid, double phi,
                                 const EulerQuadrature& quad) {
    return brute_force_pad(orb, dip, make_beta_integrator(spec, orb, e_k, e_k), e_k, theta_grid,
                           phi, quad);
}

} // namespace oracle
} // namespace padkit
