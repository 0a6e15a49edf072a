#pragma once

// Physical constants and unit conversions.
//
// All internal computation uses Hartree atomic units (hbar = m_e = e = 1).
// Interfaces accept eV for energies, fs for times, and W/cm^2 for peak
// intensities; the conversion factors below are fixed to CODATA-2018 values.

#include <cmath>
#include <numbers>

namespace padkit::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Hartree energy in electron volts (CODATA 2018).
inline constexpr double hartree_eV = 27.211386245988;

/// Atomic unit of time in femtoseconds (CODATA 2018).
inline constexpr double atomic_time_fs = 0.024188843265857;

/// Peak intensity conversion: I [W/cm^2] = intensity_au_factor * E0[a.u.]^2.
inline constexpr double intensity_au_factor = 3.50945e16;

/// Gaussian envelope: FWHM = fwhm_sigma_factor * sigma.
inline const double fwhm_sigma_factor = 2.0 * std::sqrt(2.0 * std::log(2.0));

inline constexpr double ev_to_au(double e_ev) noexcept { return e_ev / hartree_eV; }
inline constexpr double au_to_ev(double e_au) noexcept { return e_au * hartree_eV; }

inline constexpr double fs_to_au(double t_fs) noexcept { return t_fs / atomic_time_fs; }
inline constexpr double au_to_fs(double t_au) noexcept { return t_au * atomic_time_fs; }

/// Peak field amplitude (a.u.) for a given peak intensity (W/cm^2).
inline double intensity_to_amplitude(double i_wcm2) {
    return std::sqrt(i_wcm2 / intensity_au_factor);
}

/// Peak intensity (W/cm^2) for a given field amplitude (a.u.).
inline constexpr double amplitude_to_intensity(double e0_au) noexcept {
    return intensity_au_factor * e0_au * e0_au;
}

/// Gaussian width parameter sigma (a.u. of time) from a FWHM given in fs.
inline double fwhm_fs_to_sigma_au(double fwhm_fs) {
    return fs_to_au(fwhm_fs) / fwhm_sigma_factor;
}

inline double sigma_au_to_fwhm_fs(double sigma_au) {
    return au_to_fs(sigma_au * fwhm_sigma_factor);
}

inline constexpr double deg_to_rad(double deg) noexcept { return deg * pi / 180.0; }
inline constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / pi; }

} // namespace padkit::constants
