#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "padkit/oracle.hpp"

using namespace padkit;
using Catch::Approx;
namespace C = padkit::constants;
using cplx = std::complex<double>;

namespace {

// Four-channel field: two near-0.9 a.u. carriers (one linear, one circular)
// driving the one-photon step, and two near-0.45 a.u. carriers whose pairwise
// sum reaches the same final energy through the two-photon pathway.
FieldSpec generic_spec() {
    FieldSpec s;
    s.pulses.emplace_back(0.020, 0.92, 0.70, 10.0, 26.0, Channel::LIN_Z);
    s.pulses.emplace_back(0.015, 0.88, 1.30, -12.0, 26.0, Channel::CRP);
    s.pulses.emplace_back(0.030, 0.44, 2.10, 6.0, 26.0, Channel::LIN_Z);
    s.pulses.emplace_back(0.025, 0.46, 0.35, -5.0, 30.0, Channel::CLP);
    return s;
}

constexpr double kEk = 0.45; // photoelectron energy (a.u.); e_i0 = -0.45

std::pair<double, double> direction_angles(const std::array<double, 3>& v) {
    const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    const double z = std::min(1.0, std::max(-1.0, v[2] / r));
    return {std::acos(z), std::atan2(v[1], v[0])};
}

std::array<double, 3> rotate_vec(const std::array<std::array<double, 3>, 3>& R,
                            const std::array<double, 3>& v) {
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[static_cast<std::size_t>(i)] += R[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
    return out;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

TEST_CASE("orientation quadrature covers the rotation group", "[oracle]") {
    for (int l_max = 0; l_max <= 3; ++l_max) {
        const auto q = oracle::euler_quadrature_for(l_max);
        CHECK(q.n_alpha >= 4 * l_max + 5);
        CHECK(q.n_beta >= 2 * l_max + 3);
        CHECK(q.size() == static_cast<std::size_t>(q.n_alpha) * q.n_beta * q.n_gamma);
        const double vol = 8.0 * C::pi * C::pi;
        CHECK(std::abs(q.weight_sum() - vol) <= 1e-12 * vol);
    }
    CHECK_THROWS_AS(oracle::make_euler_quadrature(1, 5, 5), ArgumentError);
    CHECK_THROWS_AS(oracle::make_euler_quadrature(5, 1, 5), ArgumentError);
    CHECK_THROWS_AS(oracle::make_euler_quadrature(5, 5, 1), ArgumentError);
    CHECK_THROWS_AS(oracle::euler_quadrature_for(-1), ArgumentError);
}

TEST_CASE("first-order molecular-frame amplitude follows field and dipoles", "[oracle]") {
    auto [orb, dip] = synth_hydrogenic(2, linspace(1.0, 21.0, 9), 2, 4242);

    SECTION("zero field gives a vanishing amplitude") {
        FieldSpec s;
        s.pulses.emplace_back(0.0, 0.9, 0.0, 0.0, 26.0, Channel::LIN_Z);
        const cplx a =
            oracle::amp1_molframe(orb, dip, s, kEk, EulerAngles{0.3, 1.1, -0.4}, 1.0, 2.0);
        CHECK(std::abs(a) == 0.0);
    }

    SECTION("z-polarized field at the identity orientation uses only the z dipole") {
        FieldSpec s;
        s.pulses.emplace_back(0.02, 0.9, 0.35, 3.0, 26.0, Channel::LIN_Z);
        const TimeIntegrator integ = make_beta_integrator(s, orb, kEk, kEk);
        const double delta = kEk - orb.energy(static_cast<std::size_t>(orb.i0));
        const cplx I0 = integ.one_photon(0, delta);

        for (auto [th, ph] : {std::pair{0.7, 1.9}, std::pair{2.4, -0.8}, std::pair{1.3, 0.0}}) {
            cplx expected{0.0, 0.0};
            for (int l = 0; l <= dip.l_max(); ++l)
                for (int m = -l; m <= l; ++m)
                    expected += interpolate_continuum(dip, orb.i0, l, m, 0, kEk) *
                                sph_harm(l, m, th, ph);
            expected *= cplx(0.0, 1.0) * I0;
            const cplx a = oracle::amp1_molframe(orb, dip, integ, kEk, EulerAngles{}, th, ph);
            CHECK(std::abs(a - expected) <= 1e-12 * std::abs(expected));
        }
    }

    SECTION("amplitude is linear in the field strength") {
        FieldSpec s1 = generic_spec();
        FieldSpec s2 = s1;
        for (auto& p : s2.pulses) p.E0 *= 2.0;
        const EulerAngles g{0.9, 0.6, -1.7};
        const cplx a1 = oracle::amp1_molframe(orb, dip, s1, kEk, g, 1.1, 0.4);
        const cplx a2 = oracle::amp1_molframe(orb, dip, s2, kEk, g, 1.1, 0.4);
        CHECK(std::abs(a2 - 2.0 * a1) <= 1e-12 * std::abs(a2));
    }
}

TEST_CASE("second-order molecular-frame amplitude scales and factorizes", "[oracle]") {
    auto [orb, dip] = synth_hydrogenic(1, linspace(1.0, 21.0, 9), 2, 777);

    SECTION("zero field gives a vanishing amplitude") {
        FieldSpec s;
        s.pulses.emplace_back(0.0, 0.45, 0.0, 0.0, 26.0, Channel::CLP);
        const cplx a =
            oracle::amp2_molframe(orb, dip, s, kEk, EulerAngles{0.3, 1.1, -0.4}, 1.0, 2.0);
        CHECK(std::abs(a) == 0.0);
    }

    SECTION("amplitude is quadratic in the field strength") {
        FieldSpec s1 = generic_spec();
        FieldSpec s2 = s1;
        for (auto& p : s2.pulses) p.E0 *= 2.0;
        const EulerAngles g{-0.4, 1.9, 0.8};
        const cplx a1 = oracle::amp2_molframe(orb, dip, s1, kEk, g, 0.8, -1.2);
        const cplx a2 = oracle::amp2_molframe(orb, dip, s2, kEk, g, 0.8, -1.2);
        CHECK(std::abs(a2 - 4.0 * a1) <= 1e-12 * std::abs(a2));
    }

    SECTION("well-separated ordered pulses factorize into one-photon steps") {
        // Early pulse resonant with the bound-bound gap (0.20 a.u. for the
        // first virtual), late pulse resonant with the continuum step; the
        // two carriers are far apart compared to the spectral widths, so the
        // time-ordered integral must factorize per intermediate.
        FieldSpec s;
        s.pulses.emplace_back(0.02, 0.20, 0.55, -250.0, 30.0, Channel::LIN_Z);
        s.pulses.emplace_back(0.02, 0.70, -0.85, 250.0, 30.0, Channel::CLP);
        const TimeIntegrator integ = make_beta_integrator(s, orb, kEk, kEk);

        auto pw = oracle::detail::build_pathways(orb, dip, integ, kEk);
        auto injected = pw;
        const double e_i0 = orb.energy(static_cast<std::size_t>(orb.i0));
        for (std::size_t ip = 0; ip < injected.F.size(); ++ip) {
            const double e_p = orb.energy(static_cast<std::size_t>(orb.i0) + ip);
            for (int mu0 = -1; mu0 <= 1; ++mu0)
                for (int nu0 = -1; nu0 <= 1; ++nu0)
                    injected.F[ip][static_cast<std::size_t>(mu0 + 1)]
                              [static_cast<std::size_t>(nu0 + 1)] =
                        integ.one_photon(mu0, kEk - e_p) * integ.one_photon(nu0, e_p - e_i0);
        }

        std::mt19937_64 rng(12345);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        double scale = 0.0;
        std::vector<std::array<double, 5>> samples;
        for (int i = 0; i < 6; ++i)
            samples.push_back({u01(rng) * 2.0 * C::pi, u01(rng) * C::pi - C::pi / 2.0,
                               u01(rng) * 2.0 * C::pi, u01(rng) * C::pi, u01(rng) * 2.0 * C::pi});
        std::vector<std::pair<cplx, cplx>> pairs;
        for (const auto& smp : samples) {
            const EulerAngles g{smp[0], smp[1], smp[2]};
            const cplx a = oracle::detail::eval_expansion(oracle::detail::amp2_coeffs(pw, g),
                                                          pw.l_max, smp[3], smp[4]);
            const cplx b = oracle::detail::eval_expansion(
                oracle::detail::amp2_coeffs(injected, g), pw.l_max, smp[3], smp[4]);
            pairs.emplace_back(a, b);
            scale = std::max(scale, std::abs(a));
        }
        REQUIRE(scale > 0.0);
        for (const auto& [a, b] : pairs) CHECK(std::abs(a - b) <= 1e-8 * scale);
    }
}

TEST_CASE("lab-frame evaluation is a scalar-field transformation", "[oracle]") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int l_max = 3;
    const std::size_t n_lm = static_cast<std::size_t>((l_max + 1) * (l_max + 1));
    std::vector<cplx> c(n_lm);
    for (auto& x : c) x = cplx(u(rng), u(rng));

    SECTION("coefficient count must match the stated band limit") {
        CHECK_THROWS_AS(oracle::amp_labframe(c, 2, EulerAngles{}, 1.0, 1.0), ArgumentError);
    }

    SECTION("identity orientation reproduces the molecular-frame values") {
        for (auto [th, ph] : {std::pair{0.4, -1.0}, std::pair{1.9, 2.8}}) {
            const cplx direct = oracle::detail::eval_expansion(c, l_max, th, ph);
            const cplx lab = oracle::amp_labframe(c, l_max, EulerAngles{}, th, ph);
            CHECK(std::abs(lab - direct) <= 1e-13 * std::abs(direct));
        }
    }

    SECTION("rotating the expansion and the direction together changes nothing") {
        double scale = 0.0;
        for (const auto& x : c) scale += std::abs(x);
        for (int trial = 0; trial < 12; ++trial) {
            const EulerAngles g{u(rng) * C::pi, (u(rng) + 1.0) * C::pi / 2.0, u(rng) * C::pi};
            std::array<double, 3> v{u(rng), u(rng), u(rng)};
            const auto [th_mol, ph_mol] = direction_angles(v);
            const auto [th_lab, ph_lab] = direction_angles(rotate_vec(oracle::rotation_matrix(g), v));
            const cplx mol = oracle::detail::eval_expansion(c, l_max, th_mol, ph_mol);
            const cplx lab = oracle::amp_labframe(c, l_max, g, th_lab, ph_lab);
            CHECK(std::abs(lab - mol) <= 1e-12 * scale);
        }
    }

    SECTION("an isotropic expansion is rotation invariant") {
        std::vector<cplx> iso(1, cplx(0.7, -0.3));
        const cplx ref = oracle::amp_labframe(iso, 0, EulerAngles{}, 0.3, 0.1);
        const cplx rot = oracle::amp_labframe(iso, 0, EulerAngles{1.2, 0.7, -2.1}, 2.0, -0.6);
        CHECK(std::abs(rot - ref) <= 1e-14 * std::abs(ref));
    }
}

TEST_CASE("brute-force average is quadrature-sharp", "[oracle]") {
    auto [orb, dip] = synth_hydrogenic(1, linspace(1.0, 21.0, 9), 2, 909);
    const FieldSpec spec = generic_spec();
    const TimeIntegrator integ = make_beta_integrator(spec, orb, kEk, kEk);
    const std::vector<double> thetas = linspace(0.0, C::pi, 7);

    const auto nominal = oracle::brute_force_pad(orb, dip, integ, kEk, thetas, 0.6,
                                                 oracle::euler_quadrature_for(dip.l_max()));
    const auto boosted = oracle::brute_force_pad(
        orb, dip, integ, kEk, thetas, 0.6,
        oracle::make_euler_quadrature(2 * (4 * dip.l_max() + 5), 2 * (2 * dip.l_max() + 3),
                                      2 * (4 * dip.l_max() + 5)));

    const double s1 = max_abs(nominal.one), s2 = max_abs(nominal.two),
                 si = max_abs(nominal.interference);
    REQUIRE(s1 > 0.0);
    REQUIRE(s2 > 0.0);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        CHECK(std::abs(nominal.one[i] - boosted.one[i]) <= 1e-10 * s1);
        CHECK(std::abs(nominal.two[i] - boosted.two[i]) <= 1e-10 * s2);
        CHECK(std::abs(nominal.interference[i] - boosted.interference[i]) <= 1e-10 * si);
    }
}

TEST_CASE("brute-force angular integrals match the isotropic moments", "[oracle]") {
    auto [orb, dip] = synth_hydrogenic(2, linspace(1.0, 21.0, 9), 2, 4242);
    const FieldSpec spec = generic_spec();
    const TimeIntegrator integ = make_beta_integrator(spec, orb, kEk, kEk);

    // Angular integral of each intensity part via the spherical Parseval
    // identity, averaged over orientations with the exact quadrature.
    const auto pw = oracle::detail::build_pathways(orb, dip, integ, kEk);
    const auto quad = oracle::euler_quadrature_for(dip.l_max());
    double i_one = 0.0, i_two = 0.0, i_int = 0.0;
    for (std::size_t i = 0; i < quad.size(); ++i) {
        const auto [g, w] = quad.node(i);
        const auto c1 = oracle::detail::amp1_coeffs(pw, g);
        const auto c2 = oracle::detail::amp2_coeffs(pw, g);
        cplx cross{0.0, 0.0};
        double p1 = 0.0, p2 = 0.0;
        for (std::size_t j = 0; j < c1.size(); ++j) {
            p1 += std::norm(c1[j]);
            p2 += std::norm(c2[j]);
            cross += c1[j] * std::conj(c2[j]);
        }
        i_one += w * p1;
        i_two += w * p2;
        i_int += w * 2.0 * cross.real();
    }
    const double norm = 1.0 / (8.0 * C::pi * C::pi);
    i_one *= norm;
    i_two *= norm;
    i_int *= norm;

    const BetaSet bs = compute_betas(orb, dip, spec, kEk);
    CHECK(i_one == Approx(4.0 * C::pi * bs.one.at(0, 0).real()).epsilon(1e-8));
    CHECK(i_two == Approx(4.0 * C::pi * bs.two.at(0, 0).real()).epsilon(1e-8));
    // The cross moment can be arbitrarily small relative to itself; compare
    // against the geometric mean of the squared-amplitude moments instead.
    CHECK(std::abs(i_int - 4.0 * C::pi * 2.0 * bs.interference.at(0, 0).real()) <=
          1e-8 * std::sqrt(i_one * i_two));
}

TEST_CASE("coupled-tensor tables reproduce the brute-force distribution", "[oracle]") {
    std::mt19937_64 rng(20240819);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const std::array<Channel, 3> kinds{Channel::LIN_Z, Channel::CRP, Channel::CLP};

    for (int inst = 0; inst < 4; ++inst) {
        const int l_max = 1 + inst % 2;
        const int n_virtual = 1 + inst % 3;
        const std::uint64_t seed = 1000003u * static_cast<std::uint64_t>(inst + 1);
        auto [orb, dip] = synth_hydrogenic(l_max, linspace(1.0, 21.0, 9), n_virtual, seed);

        FieldSpec spec;
        spec.pulses.emplace_back(0.01 + 0.02 * u01(rng), 0.90 + 0.04 * (u01(rng) - 0.5),
                                 2.0 * C::pi * u01(rng), 24.0 * (u01(rng) - 0.5),
                                 22.0 + 8.0 * u01(rng), kinds[static_cast<std::size_t>(inst) % 3]);
        spec.pulses.emplace_back(0.01 + 0.02 * u01(rng), 0.45 + 0.04 * (u01(rng) - 0.5),
                                 2.0 * C::pi * u01(rng), 24.0 * (u01(rng) - 0.5),
                                 22.0 + 8.0 * u01(rng),
                                 kinds[static_cast<std::size_t>(inst + 1) % 3]);
        if (inst >= 2)
            spec.pulses.emplace_back(0.01 + 0.02 * u01(rng), 0.43 + 0.04 * u01(rng),
                                     2.0 * C::pi * u01(rng), 24.0 * (u01(rng) - 0.5),
                                     22.0 + 8.0 * u01(rng),
                                     kinds[static_cast<std::size_t>(inst + 2) % 3]);

        INFO("instance " << inst << ": l_max=" << l_max << " n_virtual=" << n_virtual);

        const TimeIntegrator integ = make_beta_integrator(spec, orb, kEk, kEk);
        const BetaTable b1 = beta_1ph(orb, dip, integ, kEk);
        const BetaTable b2 = beta_2ph(orb, dip, integ, kEk);
        const BetaTable bi = beta_int(orb, dip, integ, kEk);
        const BetaTable z1(BetaPart::one_photon, kEk, 2);
        const BetaTable z2(BetaPart::two_photon, kEk, 4);
        const BetaTable zi(BetaPart::interference, kEk, 3);

        const std::vector<double> thetas = linspace(0.0, C::pi, 13);
        const double phi = 0.7;
        const auto pad = oracle::brute_force_pad(orb, dip, integ, kEk, thetas, phi,
                                                 oracle::euler_quadrature_for(dip.l_max()));

        const double s1 = max_abs(pad.one), s2 = max_abs(pad.two),
                     si = std::max(max_abs(pad.interference), std::sqrt(s1 * s2));
        REQUIRE(s1 > 0.0);
        REQUIRE(s2 > 0.0);
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            INFO("theta = " << thetas[i]);
            CHECK(std::abs(pad.one[i] - assemble(b1, z2, zi, thetas[i], phi)) <= 1e-6 * s1);
            CHECK(std::abs(pad.two[i] - assemble(z1, b2, zi, thetas[i], phi)) <= 1e-6 * s2);
            CHECK(std::abs(pad.interference[i] - assemble(z1, z2, bi, thetas[i], phi)) <=
                  1e-6 * si);
            const double total = pad.one[i] + pad.two[i] + pad.interference[i];
            CHECK(std::abs(total - assemble(b1, b2, bi, thetas[i], phi)) <=
                  1e-6 * (s1 + s2 + si));
        }
    }
}

TEST_CASE("circular light on m-symmetric dipoles gives an inversion-even one-photon "
          "distribution",
          "[oracle]") {
    const auto grid = linspace(1.0, 21.0, 9);
    auto [orb, dip] = synth_hydrogenic(2, grid, 2, 5150, /*m_symmetric=*/true);

    FieldSpec spec;
    spec.pulses.emplace_back(0.02, 0.90, 0.8, 0.0, 26.0, Channel::CRP);
    const TimeIntegrator integ = make_beta_integrator(spec, orb, kEk, kEk);

    // Lab-frame inversion symmetry of the orientation-averaged one-photon
    // intensity: I(theta, phi) == I(pi - theta, phi + pi).
    const std::vector<double> thetas = linspace(0.1, C::pi - 0.1, 8);
    std::vector<double> mirrored;
    for (double t : thetas) mirrored.push_back(C::pi - t);
    const auto quad = oracle::euler_quadrature_for(dip.l_max());
    const auto pad = oracle::brute_force_pad(orb, dip, integ, kEk, thetas, 0.3, quad);
    const auto inv = oracle::brute_force_pad(orb, dip, integ, kEk, mirrored, 0.3 + C::pi, quad);
    const double scale = max_abs(pad.one);
    REQUIRE(scale > 0.0);
    for (std::size_t i = 0; i < thetas.size(); ++i)
        CHECK(std::abs(pad.one[i] - inv.one[i]) <= 1e-10 * scale);

    // Equivalent statement on the coefficient table: odd-L content vanishes.
    const BetaTable b1 = beta_1ph(orb, dip, integ, kEk);
    const double b1scale = std::abs(b1.at(0, 0));
    for (int M = -1; M <= 1; ++M) CHECK(std::abs(b1.at(1, M)) <= 1e-10 * b1scale);

    // Sanity: without the m-symmetry the same field does produce odd-L
    // content, so the cancellation above is informative.
    auto [orb2, dip2] = synth_hydrogenic(2, grid, 2, 5150, /*m_symmetric=*/false);
    const BetaTable g1 = beta_1ph(orb2, dip2, make_beta_integrator(spec, orb2, kEk, kEk), kEk);
    double odd = 0.0;
    for (int M = -1; M <= 1; ++M) odd = std::max(odd, std::abs(g1.at(1, M)));
    CHECK(odd > 1e-8 * std::abs(g1.at(0, 0)));
}
