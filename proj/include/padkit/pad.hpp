#pragma once
// Energy- and angle-resolved photoelectron observables: the intensity map
// I(e, theta) on a fixed azimuthal slice, the normalized left-right
// anisotropy A(e, theta) = [I(e, theta) - I(e, pi - theta)] / I0 with I0 the
// global grid maximum, and the scalar optimization objective max |A| with its
// location.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "padkit/betas.hpp"
#include "padkit/constants.hpp"
#include "padkit/errors.hpp"
#include "padkit/pulses.hpp"
#include "padkit/structure.hpp"
#include "padkit/util.hpp"

namespace padkit {

/// Photoelectron intensity on an (energy, polar-angle) grid at a fixed
/// azimuth. Energies are in eV at this interface; angles in radians on
/// [0, pi]. The polar grid must be mirror-symmetric (theta[n-1-i] ==
/// pi - theta[i]) so reflection-based observables need no interpolation.
/// Intensities are non-negative: tiny negative assembly results (truncation
/// artifacts) are clipped to zero at construction, larger ones additionally
/// leave a warning.
struct PADGrid {
    std::vector<double> e_grid;      ///< ascending, eV
    std::vector<double> theta_grid;  ///< ascending, radians, mirror-symmetric
    std::vector<double> intensity;   ///< row-major [ie * n_theta + it], >= 0
    double phi_slice = 0.5 * constants::pi;  ///< azimuth of evaluation, radians
    std::vector<std::string> warnings;

    std::size_t n_e() const { return e_grid.size(); }
    std::size_t n_theta() const { return theta_grid.size(); }

    double at(std::size_t ie, std::size_t it) const {
        if (ie >= n_e() || it >= n_theta())
            throw ArgumentError("PADGrid::at: index out of range");
        return intensity[ie * n_theta() + it];
    }
};

namespace detail {

/// Verify theta[n-1-i] == pi - theta[i] within tol; used both when building
/// a PADGrid and before reflecting it.
inline void require_mirror_grid(const std::vector<double>& theta, double tol = 1e-12) {
    const std::size_t n = theta.size();
    if (n < 2) throw ArgumentError("theta grid needs at least 2 nodes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(theta[i] > theta[i - 1]))
            throw ArgumentError("theta grid must be strictly ascending");
    if (theta.front() < -tol || theta.back() > constants::pi + tol)
        throw ArgumentError("theta grid must lie within [0, pi]");
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(theta[n - 1 - i] - (constants::pi - theta[i])) > tol)
            throw ArgumentError(
                "theta grid is not mirror-symmetric about pi/2; reflection-based "
                "anisotropy needs theta[n-1-i] == pi - theta[i]");
}

/// Clip negative intensities in place. Values within the floor (relative to
/// the grid maximum) are silently zeroed; anything more negative is zeroed
/// too but reported through the returned warning.
inline std::vector<std::string> clip_negative_intensities(std::vector<double>& v,
                                                          double floor_rel = 1e-12) {
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, x);
    std::size_t n_large = 0;
    double worst = 0.0;
    for (double& x : v) {
        if (x >= 0.0) continue;
        if (-x > floor_rel * peak) {
            ++n_large;
            worst = std::max(worst, -x);
        }
        x = 0.0;
    }
    std::vector<std::string> warnings;
    if (n_large > 0) {
        std::ostringstream msg;
        msg << "intensity consistency: " << n_large << " grid cell(s) were negative beyond the "
            << format_g17(floor_rel) << " relative floor (worst " << format_g17(worst)
            << " against peak " << format_g17(peak) << "); clipped to zero";
        warnings.push_back(msg.str());
    }
    return warnings;
}

} // namespace detail

/// Evaluate the full observable map: all three coefficient tables per energy,
/// assembled on the azimuthal slice phi (default pi/2, the plane containing
/// the propagation direction for z-polarized fields). Rows (energies) are
/// computed in parallel.
inline PADGrid compute_pad(const OrbitalSet& orb, const DipoleSet& dip, const FieldSpec& spec,
                           const std::vector<double>& e_grid_ev,
                           const std::vector<double>& theta_grid,
                           double phi_slice = 0.5 * constants::pi) {
    if (e_grid_ev.empty()) throw ArgumentError("compute_pad: energy grid is empty");
    for (std::size_t i = 1; i < e_grid_ev.size(); ++i)
        if (!(e_grid_ev[i] > e_grid_ev[i - 1]))
            throw ArgumentError("compute_pad: energy grid must be strictly ascending");
    detail::require_mirror_grid(theta_grid);
    if (e_grid_ev.front() < dip.k_grid_ev().front() ||
        e_grid_ev.back() > dip.k_grid_ev().back()) {
        std::ostringstream msg;
        msg << "compute_pad: requested energies [" << format_g17(e_grid_ev.front()) << ", "
            << format_g17(e_grid_ev.back()) << "] eV exceed the tabulated dipole range ["
            << format_g17(dip.k_grid_ev().front()) << ", " << format_g17(dip.k_grid_ev().back())
            << "] eV";
        throw ArgumentError(msg.str());
    }

    PADGrid g;
    g.e_grid = e_grid_ev;
    g.theta_grid = theta_grid;
    g.phi_slice = phi_slice;
    const std::size_t ne = e_grid_ev.size(), nt = theta_grid.size();
    g.intensity.assign(ne * nt, 0.0);

    const TimeIntegrator integ = make_beta_integrator(
        spec, orb, constants::ev_to_au(e_grid_ev.front()), constants::ev_to_au(e_grid_ev.back()));

    parallel_for(ne, thread_limit(), [&](std::size_t ie) {
        const double e_k = constants::ev_to_au(e_grid_ev[ie]);
        const BetaTable b1 = beta_1ph(orb, dip, integ, e_k);
        const BetaTable b2 = beta_2ph(orb, dip, integ, e_k);
        const BetaTable bi = beta_int(orb, dip, integ, e_k);
        for (std::size_t it = 0; it < nt; ++it)
            g.intensity[ie * nt + it] = assemble(b1, b2, bi, theta_grid[it], phi_slice);
    });

    g.warnings = detail::clip_negative_intensities(g.intensity);
    return g;
}

/// Normalized left-right anisotropy map, same layout as the intensity:
///
///   A(e, theta) = [I(e, theta) - I(e, pi - theta)] / I0,    I0 = max I
///
/// Antisymmetric about theta = pi/2 exactly (in floating-point arithmetic,
/// not just analytically), and |A| <= 1 everywhere since I >= 0.
inline std::vector<double> anisotropy(const PADGrid& g) {
    detail::require_mirror_grid(g.theta_grid);
    const std::size_t ne = g.n_e(), nt = g.n_theta();
    if (g.intensity.size() != ne * nt)
        throw ArgumentError("anisotropy: intensity matrix does not match the grids");
    double i0 = 0.0;
    for (double x : g.intensity) i0 = std::max(i0, x);
    if (!(i0 > 0.0))
        throw ValidationError("anisotropy: intensity is identically zero, the normalized "
                              "asymmetry is undefined");
    std::vector<double> a(ne * nt);
    for (std::size_t ie = 0; ie < ne; ++ie)
        for (std::size_t it = 0; it < nt; ++it)
            a[ie * nt + it] =
                (g.intensity[ie * nt + it] - g.intensity[ie * nt + (nt - 1 - it)]) / i0;
    for (double x : a)
        if (!(std::abs(x) <= 1.0))
            throw NumericalError("anisotropy: |A| exceeded 1, the intensity matrix violates "
                                 "its normalization invariant");
    return a;
}

/// Location and value of the grid maximum of |A|. Ties are broken toward the
/// lowest energy index, then the lowest angle index.
struct ObjectiveResult {
    double value = 0.0;        ///< max |A|
    std::size_t e_index = 0;
    std::size_t theta_index = 0;
    double e_ev = 0.0;         ///< energy at the maximum, eV
    double theta = 0.0;        ///< angle at the maximum, radians
};

inline ObjectiveResult objective(const PADGrid& g) {
    const std::vector<double> a = anisotropy(g);
    const std::size_t nt = g.n_theta();
    ObjectiveResult best;
    bool first = true;
    for (std::size_t ie = 0; ie < g.n_e(); ++ie)
        for (std::size_t it = 0; it < nt; ++it) {
            const double v = std::abs(a[ie * nt + it]);
            if (first || v > best.value) {
                first = false;
                best.value = v;
                best.e_index = ie;
                best.theta_index = it;
            }
        }
    best.e_ev = g.e_grid[best.e_index];
    best.theta = g.theta_grid[best.theta_index];
    return best;
}

/// CSV export: one row per (energy, angle) cell with the intensity and the
/// normalized anisotropy.
inline void pad_to_csv(std::ostream& os, const PADGrid& g, bool header = true) {
    const std::vector<double> a = anisotropy(g);
    if (header) os << "e_eV,theta_deg,intensity,anisotropy\n";
    const std::size_t nt = g.n_theta();
    for (std::size_t ie = 0; ie < g.n_e(); ++ie)
        for (std::size_t it = 0; it < nt; ++it)
            os << format_g17(g.e_grid[ie]) << ',' << format_g17(constants::rad_to_deg(g.theta_grid[it]))
               << ',' << format_g17(g.intensity[ie * nt + it]) << ','
               << format_g17(a[ie * nt + it]) << '\n';
}

} // namespace padkit
