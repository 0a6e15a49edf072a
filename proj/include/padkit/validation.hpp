#pragma once

// Self-check utilities: compare the coupled-tensor beta tables against the
// direct Euler-quadrature reference implementation on small systems.  Both
// code paths start from the same dipole data and field, so any disagreement
// beyond rounding noise indicates a defect in one of them.  The randomized
// driver below is the same check exposed by `padtool validate` and by the
// acceptance gate.

#include "padkit/betas.hpp"
#include "padkit/oracle.hpp"
#include "padkit/structure.hpp"
#include "padkit/util.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace padkit {

/// Largest relative deviations between the table-assembled and the
/// quadrature-averaged angular distributions, split by contribution.
/// Deviations are relative to the peak magnitude of each contribution; the
/// cross term is additionally floored by the geometric mean of the two
/// squared terms so that a vanishing cross term on top of healthy squared
/// terms is not over-penalized.
struct ConsistencyReport {
    int instances = 0;
    double max_dev_one = 0.0;
    double max_dev_two = 0.0;
    double max_dev_interference = 0.0;
    int worst_instance = -1;  ///< index of the instance with the largest deviation

    double max_dev() const {
        return std::max({max_dev_one, max_dev_two, max_dev_interference});
    }
    bool passes(double tol) const { return max_dev() <= tol; }

    /// Fold another report in, keeping per-part maxima.
    void merge(const ConsistencyReport& other, int instance_index) {
        if (other.max_dev() > max_dev()) worst_instance = instance_index;
        max_dev_one = std::max(max_dev_one, other.max_dev_one);
        max_dev_two = std::max(max_dev_two, other.max_dev_two);
        max_dev_interference = std::max(max_dev_interference, other.max_dev_interference);
        instances += other.instances;
    }
};

/// Compare the three assembled contributions against the rotation-quadrature
/// reference for one system, one field, and one photoelectron energy (a.u.).
inline ConsistencyReport check_tables_once(const OrbitalSet& orb, const DipoleSet& dip,
                                           const FieldSpec& spec, double e_k,
                                           int n_theta = 13, double phi = 0.7) {
    const TimeIntegrator integ = make_beta_integrator(spec, orb, e_k, e_k);
    const BetaSet bs = compute_betas(orb, dip, integ, e_k);
    const BetaTable z1(BetaPart::one_photon, e_k, bs.one.l_cap());
    const BetaTable z2(BetaPart::two_photon, e_k, bs.two.l_cap());
    const BetaTable zi(BetaPart::interference, e_k, bs.interference.l_cap());

    const std::vector<double> theta = mirror_theta_grid(n_theta);
    const oracle::OraclePad ref = oracle::brute_force_pad(
        orb, dip, integ, e_k, theta, phi, oracle::euler_quadrature_for(dip.l_max()));

    double s1 = 0.0, s2 = 0.0, si = 0.0;
    for (std::size_t it = 0; it < theta.size(); ++it) {
        s1 = std::max(s1, std::abs(ref.one[it]));
        s2 = std::max(s2, std::abs(ref.two[it]));
        si = std::max(si, std::abs(ref.interference[it]));
    }
    si = std::max(si, std::sqrt(s1 * s2));
    // A contribution that vanishes identically is compared absolutely.
    if (s1 <= 0.0) s1 = 1.0;
    if (s2 <= 0.0) s2 = 1.0;
    if (si <= 0.0) si = 1.0;

    ConsistencyReport r;
    r.instances = 1;
    r.worst_instance = 0;
    for (std::size_t it = 0; it < theta.size(); ++it) {
        const double a1 = assemble(bs.one, z2, zi, theta[it], phi);
        const double a2 = assemble(z1, bs.two, zi, theta[it], phi);
        const double ai = assemble(z1, z2, bs.interference, theta[it], phi);
        r.max_dev_one = std::max(r.max_dev_one, std::abs(a1 - ref.one[it]) / s1);
        r.max_dev_two = std::max(r.max_dev_two, std::abs(a2 - ref.two[it]) / s2);
        r.max_dev_interference =
            std::max(r.max_dev_interference, std::abs(ai - ref.interference[it]) / si);
    }
    return r;
}

/// Settings for the randomized cross-check driver.
struct RandomCheckOptions {
    int instances = 20;            ///< number of independent random systems
    int l_max_cap = 2;             ///< instance i uses l_max = 1 + i % l_max_cap
    int n_virtual_cap = 3;         ///< instance i uses n_virtual = 1 + i % n_virtual_cap
    std::uint64_t seed = 20240819; ///< master seed for fields and dipole synthesis
    double e_k_ev = 12.245;        ///< photoelectron energy for the comparison
    int n_theta = 13;              ///< polar grid size
    double phi = 0.7;              ///< fixed azimuth, radians
};

namespace detail {

/// A randomized two- or three-color field whose carriers bracket the one- and
/// two-photon resonances of the synthetic level scheme (ionization threshold
/// near 0.45 a.u.): one carrier near 2 * 0.45 a.u. and one or two near
/// 0.45 a.u., with random amplitudes, phases, delays, widths, and a rotating
/// assignment of polarization channels.
inline FieldSpec random_check_field(std::mt19937_64& rng, int inst, double e_k_au) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const std::array<Channel, 3> kinds{Channel::LIN_Z, Channel::CRP, Channel::CLP};
    const auto kind = [&](int j) {
        return kinds[static_cast<std::size_t>(inst + j) % kinds.size()];
    };
    FieldSpec spec;
    spec.pulses.emplace_back(0.01 + 0.02 * u01(rng), 2.0 * e_k_au + 0.04 * (u01(rng) - 0.5),
                             2.0 * constants::pi * u01(rng), 24.0 * (u01(rng) - 0.5),
                             22.0 + 8.0 * u01(rng), kind(0));
    spec.pulses.emplace_back(0.01 + 0.02 * u01(rng), e_k_au + 0.04 * (u01(rng) - 0.5),
                             2.0 * constants::pi * u01(rng), 24.0 * (u01(rng) - 0.5),
                             22.0 + 8.0 * u01(rng), kind(1));
    if (inst % 2 == 0)
        spec.pulses.emplace_back(0.01 + 0.02 * u01(rng), e_k_au - 0.02 - 0.04 * u01(rng),
                                 2.0 * constants::pi * u01(rng), 24.0 * (u01(rng) - 0.5),
                                 22.0 + 8.0 * u01(rng), kind(2));
    return spec;
}

}  // namespace detail

/// Run the randomized cross-check: for each instance, synthesize a small
/// hydrogenic-reference system and a random multi-color field, then compare
/// the assembled tables against the brute-force quadrature.  Deterministic
/// for a fixed option set.
inline ConsistencyReport check_tables_randomized(const RandomCheckOptions& opts = {}) {
    if (opts.instances < 1) throw ArgumentError("validation requires at least one instance");
    if (opts.l_max_cap < 1 || opts.l_max_cap > 2)
        throw ArgumentError("validation l_max cap must be 1 or 2");
    if (opts.n_virtual_cap < 1) throw ArgumentError("validation n_virtual cap must be >= 1");
    if (!(opts.e_k_ev > 0.0))
        throw ArgumentError("validation photoelectron energy must be positive");

    const double e_k_au = constants::ev_to_au(opts.e_k_ev);
    const double k_lo_ev = std::min(1.0, 0.5 * opts.e_k_ev);
    const double k_hi_ev = opts.e_k_ev + 9.0;

    std::mt19937_64 rng(opts.seed);
    ConsistencyReport total;
    for (int inst = 0; inst < opts.instances; ++inst) {
        const int l_max = 1 + inst % opts.l_max_cap;
        const int n_virtual = 1 + inst % opts.n_virtual_cap;
        const std::uint64_t sys_seed =
            opts.seed ^ (1000003u * static_cast<std::uint64_t>(inst + 1));
        auto [orb, dip] =
            synth_hydrogenic(l_max, linspace(k_lo_ev, k_hi_ev, 9), n_virtual, sys_seed);
        const FieldSpec spec = detail::random_check_field(rng, inst, e_k_au);
        total.merge(check_tables_once(orb, dip, spec, e_k_au, opts.n_theta, opts.phi), inst);
    }
    return total;
}

}  // namespace padkit
