#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "padkit/pulses.hpp"

using namespace padkit;
using Catch::Approx;
namespace C = padkit::constants;

namespace {

/// Closed-form Fourier transform of one Gaussian sub-pulse's spherical
/// component mu0 at detuning delta (exact up to the 8-sigma window cutoff).
std::complex<double> gaussian_one_photon(const SubPulse& p, int mu0, double delta) {
    const std::complex<double> i(0.0, 1.0);
    auto G = [&](double x) {
        return std::sqrt(C::two_pi) * p.sigma * std::exp(-0.5 * p.sigma * p.sigma * x * x);
    };
    const std::complex<double> shift = std::exp(i * delta * p.tau);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (p.channel) {
        case Channel::LIN_Z:
            if (mu0 != 0) return 0.0;
            return shift * 0.5 * p.E0 *
                   (std::exp(i * p.phase) * G(delta + p.omega) +
                    std::exp(-i * p.phase) * G(delta - p.omega));
        case Channel::CRP:
            if (mu0 == +1) return -inv_sqrt2 * p.E0 * shift * std::exp(i * p.phase) * G(delta + p.omega);
            if (mu0 == -1) return inv_sqrt2 * p.E0 * shift * std::exp(-i * p.phase) * G(delta - p.omega);
            return 0.0;
        case Channel::CLP:
            if (mu0 == +1) return -inv_sqrt2 * p.E0 * shift * std::exp(-i * p.phase) * G(delta - p.omega);
            if (mu0 == -1) return inv_sqrt2 * p.E0 * shift * std::exp(i * p.phase) * G(delta + p.omega);
            return 0.0;
    }
    return 0.0;
}

std::complex<double> gaussian_one_photon(const FieldSpec& spec, int mu0, double delta) {
    std::complex<double> acc = 0.0;
    for (const auto& p : spec.pulses) acc += gaussian_one_photon(p, mu0, delta);
    return acc;
}

bool bits_equal(std::complex<double> a, std::complex<double> b) {
    return std::memcmp(&a, &b, sizeof a) == 0;
}

SubPulse short_pulse(double e0, double omega, double phase, double tau, double fwhm_fs,
                     Channel ch) {
    return SubPulse(e0, omega, phase, tau, C::fwhm_fs_to_sigma_au(fwhm_fs), ch);
}

} // namespace

TEST_CASE("sub-pulse construction and phase normalization", "[pulses]") {
    CHECK_THROWS_AS(SubPulse(-1.0, 0.4, 0.0, 0.0, 100.0, Channel::LIN_Z), ArgumentError);
    CHECK_THROWS_AS(SubPulse(0.01, -0.4, 0.0, 0.0, 100.0, Channel::LIN_Z), ArgumentError);
    CHECK_THROWS_AS(SubPulse(0.01, 0.4, 0.0, 0.0, 0.0, Channel::LIN_Z), ArgumentError);

    const SubPulse a(0.01, 0.4, 0.5 * C::pi, 0.0, 100.0, Channel::LIN_Z);
    const SubPulse b(0.01, 0.4, 2.5 * C::pi, 0.0, 100.0, Channel::LIN_Z);
    CHECK(std::memcmp(&a.phase, &b.phase, sizeof(double)) == 0);
    const SubPulse c(0.01, 0.4, -0.25, 0.0, 100.0, Channel::LIN_Z);
    CHECK(c.phase >= 0.0);
    CHECK(c.phase < C::two_pi);
    CHECK(c.phase == Approx(C::two_pi - 0.25).epsilon(1e-15));
}

TEST_CASE("channel names parse case-insensitively", "[pulses]") {
    CHECK(channel_from_string("LIN_Z") == Channel::LIN_Z);
    CHECK(channel_from_string("Crp") == Channel::CRP);
    CHECK(channel_from_string("clp") == Channel::CLP);
    CHECK_THROWS_AS(channel_from_string("lin_x"), ArgumentError);
    CHECK(to_string(Channel::CRP) == "crp");
}

TEST_CASE("field evaluation at pulse peaks", "[pulses]") {
    const double E0 = 0.02, omega = 0.5;
    {
        FieldSpec s{{short_pulse(E0, omega, 0.0, 0.0, 5.0, Channel::LIN_Z)}};
        const auto f = eval_field(s, 0.0);
        CHECK(f.e_zero.real() == Approx(E0).epsilon(1e-15));
        CHECK(f.e_zero.imag() == 0.0);
        CHECK(std::abs(f.e_plus) == 0.0);
        CHECK(std::abs(f.e_minus) == 0.0);
    }
    {
        FieldSpec s{{short_pulse(E0, omega, 0.0, 0.0, 5.0, Channel::CRP)}};
        const auto c = cartesian_field(s, 0.0);
        CHECK(c[0] == Approx(E0).epsilon(1e-14));
        CHECK(c[1] == Approx(0.0).margin(1e-16));
        CHECK(c[2] == 0.0);
    }
    {
        // Counterclockwise sense: a quarter turn of carrier phase moves the
        // field vector from +x to +y.
        FieldSpec s{{short_pulse(E0, omega, 0.5 * C::pi, 0.0, 5.0, Channel::CRP)}};
        const auto c = cartesian_field(s, 0.0);
        CHECK(c[0] == Approx(0.0).margin(1e-16));
        CHECK(c[1] == Approx(E0).epsilon(1e-14));
    }
    {
        // Clockwise sense for the opposite channel.
        FieldSpec s{{short_pulse(E0, omega, 0.5 * C::pi, 0.0, 5.0, Channel::CLP)}};
        const auto c = cartesian_field(s, 0.0);
        CHECK(c[0] == Approx(0.0).margin(1e-16));
        CHECK(c[1] == Approx(-E0).epsilon(1e-14));
    }
}

TEST_CASE("matched circular pair reduces to linear x polarization", "[pulses]") {
    const double E0 = 0.015, omega = 0.42, fwhm = 4.0;
    FieldSpec pair{{short_pulse(E0, omega, 0.3, 10.0, fwhm, Channel::CRP),
                    short_pulse(E0, omega, 0.3, 10.0, fwhm, Channel::CLP)}};
    const SubPulse ref = short_pulse(E0, omega, 0.3, 10.0, fwhm, Channel::LIN_Z);
    for (int i = 0; i < 100; ++i) {
        const double t = 10.0 + (i - 50) * 4.0;
        const auto c = cartesian_field(pair, t);
        CHECK(std::abs(c[1]) < 1e-12 * E0);
        CHECK(std::abs(c[2]) == 0.0);
        CHECK(c[0] == Approx(2.0 * ref.envelope(t) * std::cos(ref.carrier(t))).margin(1e-12 * E0));
    }
}

TEST_CASE("cartesian reconstruction is real for mixed channels", "[pulses]") {
    std::mt19937_64 rng(314);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    FieldSpec spec;
    for (Channel ch : {Channel::LIN_Z, Channel::CRP, Channel::CLP, Channel::CRP}) {
        spec.pulses.push_back(SubPulse(0.001 + 0.02 * u(rng), 0.2 + 0.6 * u(rng),
                                       C::two_pi * u(rng), 200.0 * (u(rng) - 0.5),
                                       50.0 + 200.0 * u(rng), ch));
    }
    double scale = 0.0;
    for (const auto& p : spec.pulses) scale += p.E0;
    for (int i = 0; i < 100; ++i) {
        const double t = -400.0 + 8.0 * i;
        const auto sample = eval_field(spec, t);
        const auto c = reconstruct_cartesian(sample);
        for (int k = 0; k < 3; ++k) CHECK(std::abs(c[k].imag()) < 1e-12 * scale);
        // Spherical components of a real field obey E_{-mu} = (-1)^mu conj(E_mu).
        CHECK(std::abs(sample.e_minus + std::conj(sample.e_plus)) < 1e-12 * scale);
        CHECK(std::abs(sample.e_zero - std::conj(sample.e_zero)) < 1e-12 * scale);
    }
}

TEST_CASE("helicity of circular sub-bands", "[pulses]") {
    const double w1 = 0.40, w2 = 0.80;
    FieldSpec spec{{short_pulse(0.01, w1, 0.0, 0.0, 5.0, Channel::CRP),
                    short_pulse(0.02, w2, 0.3, 40.0, 5.0, Channel::CLP)}};
    const double sigma = spec.pulses[0].sigma;
    for (double t : {-sigma, 0.0, 0.7 * sigma, 2.0 * sigma}) {
        auto z1 = helicity(spec, w1, t);
        REQUIRE(z1.has_value());
        CHECK(*z1 == Approx(1.0));
        auto z2 = helicity(spec, w2, 40.0 + t);
        REQUIRE(z2.has_value());
        CHECK(*z2 == Approx(-1.0));
    }
    // Equal-amplitude opposite circular pulses in one band cancel.
    FieldSpec both{{short_pulse(0.01, w1, 0.1, 0.0, 5.0, Channel::CRP),
                    short_pulse(0.01, w1, 0.7, 0.0, 5.0, Channel::CLP)}};
    for (double t : {-sigma, 0.0, sigma}) {
        auto z = helicity(both, w1, t);
        REQUIRE(z.has_value());
        CHECK(*z == Approx(0.0).margin(1e-12));
    }
    CHECK_THROWS_AS(helicity(spec, 0.6, 0.0), NotFoundError);
    // Far outside the envelope both magnitudes sit below the floor: gap.
    CHECK_FALSE(helicity(spec, w1, 60.0 * sigma).has_value());
    // A linear-only band matches but carries no circular content: gap.
    FieldSpec lin{{short_pulse(0.01, w1, 0.0, 0.0, 5.0, Channel::LIN_Z)}};
    CHECK_FALSE(helicity(lin, w1, 0.0).has_value());
}

TEST_CASE("one-photon integral matches the Gaussian closed form", "[pulses]") {
    const double omega = 0.45, sigma_fs = 3.0;
    const SubPulse p = short_pulse(0.02, omega, 0.77, 12.0, sigma_fs, Channel::LIN_Z);
    FieldSpec s{{p}};
    const double scale = 0.5 * std::sqrt(C::two_pi) * p.E0 * p.sigma;

    for (double delta : {omega, 0.9 * omega, 0.0, 1.3 * omega}) {
        const auto got = one_photon_integral(s, 0, delta);
        const auto ref = gaussian_one_photon(s, 0, delta);
        CHECK(std::abs(got - ref) < 1e-8 * scale);
    }
    // Resonant magnitude: the counter-rotating term is exponentially small.
    CHECK(std::abs(one_photon_integral(s, 0, omega)) == Approx(scale).epsilon(1e-8));
    // Linear-z field has no transverse spherical components.
    CHECK(one_photon_integral(s, +1, omega) == std::complex<double>(0.0, 0.0));
    CHECK(one_photon_integral(s, -1, omega) == std::complex<double>(0.0, 0.0));

    // Circular channels populate one transverse component per detuning sign.
    for (Channel ch : {Channel::CRP, Channel::CLP}) {
        const SubPulse q = short_pulse(0.013, omega, 1.1, -20.0, sigma_fs, ch);
        FieldSpec sc{{q}};
        const double qs = std::sqrt(C::two_pi) * q.E0 * q.sigma;
        for (int mu0 : {-1, 0, +1})
            for (double delta : {omega, -omega, 0.35}) {
                const auto got = one_photon_integral(sc, mu0, delta);
                const auto ref = gaussian_one_photon(sc, mu0, delta);
                CHECK(std::abs(got - ref) < 1e-8 * qs);
            }
    }
}

TEST_CASE("one-photon integral detuning falloff", "[pulses]") {
    const double omega = 0.5;
    const SubPulse p = short_pulse(0.02, omega, 0.0, 0.0, 2.0, Channel::LIN_Z);
    FieldSpec s{{p}};
    const double peak = std::abs(one_photon_integral(s, 0, omega));
    const double detuned = std::abs(one_photon_integral(s, 0, omega + 5.0 / p.sigma));
    CHECK(detuned < std::exp(-12.5) * peak * 1.01);
}

TEST_CASE("one-photon integral is linear in the spec", "[pulses]") {
    const SubPulse a = short_pulse(0.02, 0.40, 0.2, -30.0, 3.0, Channel::LIN_Z);
    const SubPulse b = short_pulse(0.01, 0.80, 1.4, 25.0, 2.0, Channel::CRP);
    FieldSpec sa{{a}}, sb{{b}}, sab{{a, b}};
    const double scale = std::sqrt(C::two_pi) * (a.E0 * a.sigma + b.E0 * b.sigma);
    for (int mu0 : {-1, 0, +1})
        for (double delta : {0.40, 0.80, -0.80, 0.1}) {
            const auto lhs = one_photon_integral(sab, mu0, delta);
            const auto rhs =
                one_photon_integral(sa, mu0, delta) + one_photon_integral(sb, mu0, delta);
            CHECK(std::abs(lhs - rhs) < 1e-12 * scale);
        }
}

TEST_CASE("full-turn carrier phase leaves integrals unchanged", "[pulses]") {
    const double omega = 0.5, delta = 0.5;
    // Quarter-turn phases and their full-turn partners are exactly
    // representable, so normalization makes the results bit-identical.
    for (double phi : {0.0, 0.5 * C::pi, C::pi, 1.5 * C::pi}) {
        FieldSpec s1{{short_pulse(0.02, omega, phi, 0.0, 3.0, Channel::LIN_Z)}};
        FieldSpec s2{{short_pulse(0.02, omega, phi + C::two_pi, 0.0, 3.0, Channel::LIN_Z)}};
        CHECK(bits_equal(one_photon_integral(s1, 0, delta), one_photon_integral(s2, 0, delta)));
    }
    // Generic phases keep the invariance to rounding accuracy.
    FieldSpec g1{{short_pulse(0.02, omega, 1.234, 0.0, 3.0, Channel::LIN_Z)}};
    FieldSpec g2{{short_pulse(0.02, omega, 1.234 + C::two_pi, 0.0, 3.0, Channel::LIN_Z)}};
    const auto v1 = one_photon_integral(g1, 0, delta);
    const auto v2 = one_photon_integral(g2, 0, delta);
    CHECK(std::abs(v1 - v2) <= 1e-12 * std::abs(v1));
}

TEST_CASE("two-photon integral vanishes when either channel is silent", "[pulses]") {
    FieldSpec s{{short_pulse(0.02, 0.5, 0.0, 0.0, 2.0, Channel::LIN_Z)}};
    CHECK(two_photon_integral(s, +1, 0, 0.9, 0.4, -0.5) == std::complex<double>(0.0, 0.0));
    CHECK(two_photon_integral(s, 0, -1, 0.9, 0.4, -0.5) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("two-photon integral factorizes for sequential disjoint pulses", "[pulses]") {
    // Inner pulse (circular, early) is over before the outer pulse (linear,
    // late) begins; channel separation isolates each step.
    const SubPulse inner = short_pulse(0.02, 0.40, 0.9, -900.0, 2.0, Channel::CRP);
    const SubPulse outer = short_pulse(0.015, 0.80, 0.2, 900.0, 2.0, Channel::LIN_Z);
    FieldSpec spec{{inner, outer}};
    FieldSpec only_inner{{inner}}, only_outer{{outer}};

    const double e_i0 = -0.5;
    struct Case {
        double e_p, e_k;
    };
    for (const Case& c : {Case{-0.5 + 0.40, -0.5 + 0.40 + 0.80}, // both steps resonant
                          Case{-0.15, 0.55}}) {
        const double d_in = c.e_p - e_i0, d_out = c.e_k - c.e_p;
        for (int nu0 : {-1, +1}) {
            const auto lhs = two_photon_integral(spec, 0, nu0, c.e_k, c.e_p, e_i0);
            const auto rhs = one_photon_integral(only_outer, 0, d_out) *
                             one_photon_integral(only_inner, nu0, d_in);
            const double scale = C::two_pi * inner.E0 * inner.sigma * outer.E0 * outer.sigma;
            CHECK(std::abs(lhs - rhs) < 1e-8 * scale);
            CHECK(std::abs(lhs) == Approx(std::abs(rhs)).margin(1e-8 * scale));
        }
    }
}

TEST_CASE("two-photon integral is time-ordered", "[pulses]") {
    // With the circular pulse first and the linear pulse second, the path
    // that absorbs from the linear channel first is blocked by time ordering.
    const SubPulse first = short_pulse(0.02, 0.40, 0.9, -900.0, 2.0, Channel::CRP);
    const SubPulse second = short_pulse(0.015, 0.80, 0.2, 900.0, 2.0, Channel::LIN_Z);
    FieldSpec spec{{first, second}};
    const double e_i0 = -0.5, e_p = -0.1, e_k = 0.7;
    const auto ordered = two_photon_integral(spec, 0, -1, e_k, e_p, e_i0);
    const auto blocked = two_photon_integral(spec, -1, 0, e_k, e_p, e_i0);
    REQUIRE(std::abs(ordered) > 0.0);
    CHECK(std::abs(blocked) < 1e-6 * std::abs(ordered));
}

TEST_CASE("batched two-photon integrals match the single-pair entry point", "[pulses]") {
    FieldSpec spec{{short_pulse(0.02, 0.40, 0.9, -40.0, 2.0, Channel::CRP),
                    short_pulse(0.015, 0.80, 0.2, 40.0, 2.0, Channel::LIN_Z)}};
    TimeIntegrator ti(spec, 2.0);
    const double e_k = 0.7, e_p = -0.1, e_i0 = -0.5;
    const auto batch = ti.two_photon_all(e_k, e_p, e_i0);
    double scale = 0.0;
    for (const auto& p : spec.pulses) scale += C::two_pi * p.E0 * p.sigma;
    for (int mu0 = -1; mu0 <= 1; ++mu0)
        for (int nu0 = -1; nu0 <= 1; ++nu0) {
            const auto single = ti.two_photon(mu0, nu0, e_k, e_p, e_i0);
            CHECK(std::abs(batch[mu0 + 1][nu0 + 1] - single) < 1e-14 * scale);
        }
    CHECK_THROWS_AS(ti.one_photon(0, 5.0), ArgumentError); // beyond constructed bandwidth
}

TEST_CASE("power spectrum of a single Gaussian pulse", "[pulses]") {
    const double omega = 0.5;
    const SubPulse p = short_pulse(0.02, omega, 0.0, 0.0, 1.5, Channel::LIN_Z);
    FieldSpec s{{p}};
    const int n = 401;
    std::vector<double> grid = linspace(0.2, 0.8, n);
    const double bin = grid[1] - grid[0];
    const auto spec = power_spectrum(s, grid);
    REQUIRE(spec.size() == grid.size());

    std::size_t peak = 0;
    for (std::size_t i = 0; i < spec.size(); ++i)
        if (spec[i].intensity > spec[peak].intensity) peak = i;
    CHECK(std::abs(spec[peak].omega - omega) <= 2.0 * bin);

    // Width of the amplitude spectrum sqrt(intensity): 2 sqrt(2 ln 2) / sigma.
    const double half = std::sqrt(spec[peak].intensity) / 2.0;
    std::size_t lo = peak, hi = peak;
    while (lo > 0 && std::sqrt(spec[lo].intensity) > half) --lo;
    while (hi + 1 < spec.size() && std::sqrt(spec[hi].intensity) > half) ++hi;
    const double fwhm = spec[hi].omega - spec[lo].omega;
    CHECK(std::abs(fwhm - 2.0 * std::sqrt(2.0 * std::log(2.0)) / p.sigma) <= 2.0 * bin);
}

TEST_CASE("power spectrum separates disjoint carriers", "[pulses]") {
    FieldSpec s{{short_pulse(0.02, 0.40, 0.0, 0.0, 3.0, Channel::LIN_Z),
                 short_pulse(0.02, 0.80, 0.0, 0.0, 3.0, Channel::LIN_Z)}};
    std::vector<double> grid = linspace(0.3, 0.9, 301);
    const auto spec = power_spectrum(s, grid);
    auto peak_near = [&](double w0) {
        double best = 0.0;
        for (const auto& pt : spec)
            if (std::abs(pt.omega - w0) < 0.05) best = std::max(best, pt.intensity);
        return best;
    };
    const double p1 = peak_near(0.40), p2 = peak_near(0.80), valley = peak_near(0.60);
    CHECK(p1 > 100.0 * valley);
    CHECK(p2 > 100.0 * valley);
}

TEST_CASE("power spectrum shift theorem", "[pulses]") {
    const double omega = 0.5, tau_shift = 40.0; // a.u.
    FieldSpec s0{{short_pulse(0.02, omega, 0.0, 0.0, 1.5, Channel::LIN_Z)}};
    FieldSpec s1{{short_pulse(0.02, omega, 0.0, tau_shift, 1.5, Channel::LIN_Z)}};
    std::vector<double> grid = linspace(0.44, 0.56, 121);
    const auto a = power_spectrum(s0, grid);
    const auto b = power_spectrum(s1, grid);
    double peak = 0.0;
    for (const auto& pt : a) peak = std::max(peak, pt.intensity);
    const double dw = grid[1] - grid[0];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(std::abs(a[i].intensity - b[i].intensity) < 1e-10 * peak);
        if (i > 0 && a[i].intensity > 0.5 * peak && a[i - 1].intensity > 0.5 * peak) {
            // Delay shows up as a linear spectral-phase ramp d(phase)/domega = tau.
            const double slope =
                ((b[i].phase - a[i].phase) - (b[i - 1].phase - a[i - 1].phase)) / dw;
            CHECK(slope == Approx(tau_shift).epsilon(1e-3));
        }
    }
}

TEST_CASE("power spectrum rejects frequencies beyond the sampling limit", "[pulses]") {
    FieldSpec s{{short_pulse(0.02, 0.5, 0.0, 0.0, 2.0, Channel::LIN_Z)}};
    CHECK_THROWS_AS(power_spectrum(s, {0.5, 25.0 * 0.5}), ArgumentError);
    CHECK_THROWS_AS(power_spectrum(s, {-0.1}), ArgumentError);
}

TEST_CASE("spectrogram localizes pulses in time and frequency", "[pulses]") {
    const double w1 = 0.40, w2 = 0.80;
    const double tau2 = 300.0; // a.u.
    FieldSpec s{{short_pulse(0.02, w1, 0.0, 0.0, 3.0, Channel::LIN_Z),
                 short_pulse(0.02, w2, 0.0, tau2, 3.0, Channel::LIN_Z)}};
    std::vector<double> t_grid = linspace(-300.0, 800.0, 221);
    std::vector<double> w_grid = linspace(0.3, 0.9, 61);
    const auto map = time_frequency_map(s, t_grid, w_grid);
    REQUIRE(map.size() == t_grid.size());
    REQUIRE(map[0].size() == w_grid.size());

    auto argmax_time_at = [&](double w0) {
        std::size_t jw = 0;
        for (std::size_t j = 0; j < w_grid.size(); ++j)
            if (std::abs(w_grid[j] - w0) < std::abs(w_grid[jw] - w0)) jw = j;
        std::size_t best = 0;
        for (std::size_t i = 0; i < t_grid.size(); ++i)
            if (map[i][jw] > map[best][jw]) best = i;
        return t_grid[best];
    };
    const double dt = t_grid[1] - t_grid[0];
    const double c1 = argmax_time_at(w1), c2 = argmax_time_at(w2);
    CHECK(std::abs(c1 - 0.0) <= dt);
    CHECK(std::abs(c2 - tau2) <= dt);
    CHECK(std::abs((c2 - c1) - tau2) <= 2.0 * dt);
}

TEST_CASE("spectrogram time marginal follows the squared envelope", "[pulses]") {
    const SubPulse p = short_pulse(0.02, 0.5, 0.0, 0.0, 3.0, Channel::LIN_Z);
    FieldSpec s{{p}};
    std::vector<double> t_grid = linspace(-4.0 * p.sigma, 4.0 * p.sigma, 81);
    std::vector<double> w_grid = linspace(0.2, 0.8, 121);
    const auto map = time_frequency_map(s, t_grid, w_grid);
    std::vector<double> marginal(t_grid.size(), 0.0), envelope_sq(t_grid.size(), 0.0);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        for (double v : map[i]) marginal[i] += v;
        const double h = p.envelope(t_grid[i]);
        envelope_sq[i] = h * h;
    }
    const double m_max = *std::max_element(marginal.begin(), marginal.end());
    const double e_max = *std::max_element(envelope_sq.begin(), envelope_sq.end());
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        CHECK(std::abs(marginal[i] / m_max - envelope_sq[i] / e_max) < 0.10);
}

TEST_CASE("field spec JSON parsing and round trip", "[pulses]") {
    const nlohmann::json j = nlohmann::json::array(
        {{{"channel", "lin_z"},
          {"intensity_Wcm2", 1e11},
          {"omega_eV", 11.0},
          {"fwhm_fs", 23.0}},
         {{"channel", "CRP"},
          {"amplitude_au", 0.004},
          {"omega_eV", 22.0},
          {"fwhm_fs", 10.0},
          {"phase_rad", 1.25},
          {"tau_fs", -5.0}}});
    const FieldSpec spec = field_from_json(j);
    REQUIRE(spec.pulses.size() == 2);
    CHECK(spec.pulses[0].channel == Channel::LIN_Z);
    CHECK(spec.pulses[0].E0 ==
          Approx(std::sqrt(1e11 / C::intensity_au_factor)).epsilon(1e-14));
    CHECK(spec.pulses[0].omega == Approx(11.0 / C::hartree_eV).epsilon(1e-14));
    CHECK(spec.pulses[0].phase == 0.0);
    CHECK(spec.pulses[0].tau == 0.0);
    CHECK(spec.pulses[1].channel == Channel::CRP);
    CHECK(spec.pulses[1].tau == Approx(-5.0 / C::atomic_time_fs).epsilon(1e-14));
    CHECK(spec.pulses[1].sigma ==
          Approx(10.0 / C::atomic_time_fs / (2.0 * std::sqrt(2.0 * std::log(2.0))))
              .epsilon(1e-14));

    // Object wrapper form parses to the same spec.
    const FieldSpec spec2 = field_from_json(nlohmann::json{{"pulses", j}});
    REQUIRE(spec2.pulses.size() == 2);
    CHECK(spec2.pulses[1].E0 == spec.pulses[1].E0);

    // Round trip through serialization.
    const FieldSpec back = field_from_json(field_to_json(spec));
    REQUIRE(back.pulses.size() == spec.pulses.size());
    for (std::size_t i = 0; i < back.pulses.size(); ++i) {
        CHECK(back.pulses[i].E0 == Approx(spec.pulses[i].E0).epsilon(1e-14));
        CHECK(back.pulses[i].omega == Approx(spec.pulses[i].omega).epsilon(1e-14));
        CHECK(back.pulses[i].phase == Approx(spec.pulses[i].phase).margin(1e-14));
        CHECK(back.pulses[i].tau == Approx(spec.pulses[i].tau).margin(1e-12));
        CHECK(back.pulses[i].sigma == Approx(spec.pulses[i].sigma).epsilon(1e-14));
        CHECK(back.pulses[i].channel == spec.pulses[i].channel);
    }
}

TEST_CASE("field spec JSON rejects malformed records", "[pulses]") {
    using nlohmann::json;
    auto rec = [](json patch) {
        json base = {{"channel", "lin_z"}, {"amplitude_au", 0.01}, {"omega_eV", 11.0},
                     {"fwhm_fs", 23.0}};
        base.update(patch);
        return json::array({base});
    };
    CHECK_THROWS_AS(field_from_json(json::object()), ArgumentError);
    CHECK_THROWS_AS(field_from_json(json::array()), ArgumentError);
    CHECK_THROWS_AS(field_from_json(rec({{"channel", "diagonal"}})), ArgumentError);
    CHECK_THROWS_AS(field_from_json(rec({{"intensity_Wcm2", 1e11}})), ArgumentError); // both
    {
        json base = {{"channel", "lin_z"}, {"omega_eV", 11.0}, {"fwhm_fs", 23.0}};
        CHECK_THROWS_AS(field_from_json(json::array({base})), ArgumentError); // neither
    }
    CHECK_THROWS_AS(field_from_json(rec({{"omega_eV", -3.0}})), ArgumentError);
    CHECK_THROWS_AS(field_from_json(rec({{"fwhm_fs", 0.0}})), ArgumentError);
    CHECK_THROWS_AS(field_from_json(rec({{"omega_eV", "eleven"}})), ArgumentError);
    CHECK_THROWS_AS(field_from_json(json::array({json::array()})), ArgumentError);
    CHECK_THROWS_AS(load_field_spec("/nonexistent/path/field.json"), NotFoundError);

    const auto dir = std::filesystem::temp_directory_path() / "padkit_pulse_json";
    std::filesystem::create_directories(dir);
    const auto bad = (dir / "bad.json").string();
    std::ofstream(bad) << "{ not json";
    CHECK_THROWS_AS(load_field_spec(bad), ArgumentError);
}

TEST_CASE("field presets", "[pulses]") {
    const FieldSpec bi = preset_field("bichromatic");
    REQUIRE(bi.pulses.size() == 2);
    CHECK(bi.pulses[1].omega == Approx(2.0 * bi.pulses[0].omega).epsilon(1e-12));
    CHECK(bi.pulses[1].E0 == Approx(std::sqrt(2.0) * bi.pulses[0].E0).epsilon(1e-12));
    CHECK(bi.pulses[0].E0 == Approx(std::sqrt(1e11 / C::intensity_au_factor)).epsilon(1e-12));

    const FieldSpec five = preset_field("five_carrier");
    REQUIRE(five.pulses.size() == 5);
    for (const auto& p : five.pulses) CHECK(p.channel == Channel::LIN_Z);

    const FieldSpec three = preset_field("three_color");
    REQUIRE(three.pulses.size() == 3);
    const double sum_low = C::au_to_ev(three.pulses[0].omega + three.pulses[1].omega);
    CHECK(sum_low == Approx(C::au_to_ev(three.pulses[2].omega)).margin(1e-9));

    CHECK_THROWS_AS(preset_field("four_color"), NotFoundError);
}
