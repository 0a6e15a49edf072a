#pragma once

// Multi-color laser field construction and the time integrals that feed the
// photoionization amplitude sums.
//
// Field model: a coherent superposition of Gaussian sub-pulses. Each
// sub-pulse has envelope
//
//     h(t) = E0 * exp(-(t - tau)^2 / (2 sigma^2)),   FWHM = 2 sqrt(2 ln 2) sigma,
//
// and carrier phase Omega(t) = omega (t - tau) + phi. Channels:
//
//     LIN_Z : linear polarization along z'; contributes h cos(Omega) to the
//             mu0 = 0 spherical component.
//     CRP   : circular, counterclockwise in the x'y' plane when viewed from
//             +z' (cartesian (h cos Omega, h sin Omega, 0));
//             spherical components E_{+1} = -(1/sqrt2) h e^{+i Omega},
//                                  E_{-1} = +(1/sqrt2) h e^{-i Omega}.
//     CLP   : circular, clockwise (cartesian (h cos Omega, -h sin Omega, 0));
//             spherical components E_{+1} = -(1/sqrt2) h e^{-i Omega},
//                                  E_{-1} = +(1/sqrt2) h e^{+i Omega}.
//
// Spherical components follow E_mu = e_mu . E with the Condon-Shortley basis
// e_{+-1} = ∓(e_x +- i e_y)/sqrt2, e_0 = e_z, so the cartesian field is
// recovered as
//
//     E_x = (E_{-1} - E_{+1})/sqrt2,
//     E_y = i (E_{+1} + E_{-1})/sqrt2,
//     E_z = E_0,
//
// which is real-valued for every channel combination (the circular channels
// carry the conjugate-symmetric pair E_{-mu} = (-1)^mu conj(E_mu)).
//
// Units: atomic units internally for every quantity; the JSON interface
// accepts eV / fs / W cm^-2 and converts once at the boundary.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "padkit/constants.hpp"
#include "padkit/errors.hpp"
#include "padkit/quadrature.hpp"
#include "padkit/util.hpp"

namespace padkit {

enum class Channel { LIN_Z, CRP, CLP };

inline std::string to_string(Channel c) {
    switch (c) {
        case Channel::LIN_Z: return "lin_z";
        case Channel::CRP: return "crp";
        case Channel::CLP: return "clp";
    }
    throw ArgumentError("unknown channel enum value");
}

inline Channel channel_from_string(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (s == "lin_z") return Channel::LIN_Z;
    if (s == "crp") return Channel::CRP;
    if (s == "clp") return Channel::CLP;
    throw ArgumentError("unknown polarization channel '" + s +
                        "' (expected lin_z, crp, or clp)");
}

/// One Gaussian sub-pulse. All stored quantities are atomic units; the
/// carrier-envelope phase is normalized into [0, 2pi) at construction so that
/// phases differing by full turns produce bit-identical pulses.
struct SubPulse {
    double E0;
    double omega;
    double phase;
    double tau;
    double sigma;
    Channel channel;

    SubPulse(double E0_, double omega_, double phase_, double tau_, double sigma_, Channel ch)
        : E0(E0_), omega(omega_), phase(normalize_phase(phase_)), tau(tau_), sigma(sigma_),
          channel(ch) {
        if (!(E0 >= 0.0)) throw ArgumentError("sub-pulse amplitude must be >= 0");
        if (!(omega > 0.0)) throw ArgumentError("sub-pulse carrier frequency must be > 0");
        if (!(sigma > 0.0)) throw ArgumentError("sub-pulse width must be > 0");
        if (!std::isfinite(tau)) throw ArgumentError("sub-pulse delay must be finite");
        if (!std::isfinite(phase)) throw ArgumentError("sub-pulse phase must be finite");
    }

    static double normalize_phase(double phi) {
        double r = std::fmod(phi, constants::two_pi); // exact IEEE remainder
        if (r < 0.0) r += constants::two_pi;
        return r;
    }

    double envelope(double t) const {
        const double u = (t - tau) / sigma;
        return E0 * std::exp(-0.5 * u * u);
    }

    double carrier(double t) const { return omega * (t - tau) + phase; }
};

struct FieldSpec {
    std::vector<SubPulse> pulses;
};

/// The three spherical field components at one instant.
struct SphericalFieldSample {
    std::complex<double> e_plus{};  // mu0 = +1
    std::complex<double> e_zero{};  // mu0 =  0
    std::complex<double> e_minus{}; // mu0 = -1

    std::complex<double> component(int mu0) const {
        if (mu0 == 1) return e_plus;
        if (mu0 == 0) return e_zero;
        if (mu0 == -1) return e_minus;
        throw ArgumentError("spherical component index must be -1, 0, or +1");
    }
};

inline SphericalFieldSample eval_field(const FieldSpec& spec, double t) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    SphericalFieldSample s;
    for (const SubPulse& p : spec.pulses) {
        const double h = p.envelope(t);
        const double om = p.carrier(t);
        switch (p.channel) {
            case Channel::LIN_Z:
                s.e_zero += h * std::cos(om);
                break;
            case Channel::CRP:
                s.e_plus += -inv_sqrt2 * h * std::polar(1.0, om);
                s.e_minus += inv_sqrt2 * h * std::polar(1.0, -om);
                break;
            case Channel::CLP:
                s.e_plus += -inv_sqrt2 * h * std::polar(1.0, -om);
                s.e_minus += inv_sqrt2 * h * std::polar(1.0, om);
                break;
        }
    }
    return s;
}

/// Cartesian reconstruction, kept complex so tests can verify that the
/// imaginary parts vanish.
inline std::array<std::complex<double>, 3>
reconstruct_cartesian(const SphericalFieldSample& s) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    const std::complex<double> i(0.0, 1.0);
    return {(s.e_minus - s.e_plus) * inv_sqrt2, i * (s.e_plus + s.e_minus) * inv_sqrt2,
            s.e_zero};
}

inline std::array<double, 3> cartesian_field(const FieldSpec& spec, double t) {
    const auto c = reconstruct_cartesian(eval_field(spec, t));
    return {c[0].real(), c[1].real(), c[2].real()};
}

/// Differential helicity of the sub-band whose carrier matches omega_j:
/// zeta(t) = (A_R - A_L)/(A_R + A_L) with A_R/A_L the magnitudes of the
/// counterclockwise / clockwise circular fields of the matched sub-pulses.
/// Returns nullopt (a gap marker) where both magnitudes sit below the
/// amplitude floor; throws NotFoundError when no sub-pulse carrier matches.
inline std::optional<double> helicity(const FieldSpec& spec, double omega_j, double t,
                                      double freq_tol = 1e-6) {
    bool matched_any = false;
    std::complex<double> a_r = 0.0, a_l = 0.0;
    double e0_max = 0.0;
    for (const SubPulse& p : spec.pulses) {
        if (std::abs(p.omega - omega_j) >= freq_tol) continue;
        matched_any = true;
        e0_max = std::max(e0_max, p.E0);
        if (p.channel == Channel::CRP)
            a_r += p.envelope(t) * std::polar(1.0, p.carrier(t));
        else if (p.channel == Channel::CLP)
            a_l += p.envelope(t) * std::polar(1.0, p.carrier(t));
    }
    if (!matched_any)
        throw NotFoundError("no sub-pulse carrier within tolerance of requested frequency");
    const double r = std::abs(a_r), l = std::abs(a_l);
    const double floor = 1e-12 * e0_max;
    if (r + l <= floor) return std::nullopt;
    return (r - l) / (r + l);
}

namespace detail {

inline std::uint64_t double_bits(double x) {
    std::uint64_t u;
    std::memcpy(&u, &x, sizeof u);
    return u;
}

} // namespace detail

/// Evaluates the one- and two-photon time integrals
///
///     I_mu0(delta)      = int dt' E_mu0(t') e^{i delta t'},
///     F_{mu0 nu0}(k, p) = int dt' e^{i(e_k - e_p) t'} E_mu0(t')
///                           int_{-inf}^{t'} dt'' e^{i(e_p - e_i0) t''} E_nu0(t''),
///
/// over the full envelope support. The support window extends 8 sigma beyond
/// every sub-pulse peak; composite Gauss-Legendre panels are sized from the
/// fastest oscillation the integrator will ever be asked to resolve
/// (carrier + envelope bandwidth + |detuning| <= max_abs_delta), at 20 nodes
/// per shortest period. The nested integral uses the exact per-panel
/// polynomial antiderivative of the inner integrand, so both integrals
/// inherit the spectral accuracy of the rule. Construction runs a
/// grid-halving self-check and throws NumericalError if the probe integrals
/// have not converged to 1e-10 relative to the natural field scale.
///
/// Inner cumulative antiderivatives depend only on (nu0, e_p - e_i0) and are
/// cached; the cache is guarded for concurrent use.
class TimeIntegrator {
  public:
    TimeIntegrator(FieldSpec spec, double max_abs_delta)
        : spec_(std::move(spec)), max_abs_delta_(std::abs(max_abs_delta)) {
        if (spec_.pulses.empty()) throw ArgumentError("field spec has no sub-pulses");
        build_grid(grid_, samples_, 1);

        // Self-check: rebuild with doubled panel density and compare probe
        // integrals. Both grids resolve the integrand by design, so any
        // disagreement flags a sampling problem (e.g. pathological spec).
        Grid fine;
        Samples fine_samples;
        build_grid(fine, fine_samples, 2);
        double scale = 0.0;
        for (const SubPulse& p : spec_.pulses)
            scale += p.E0 * p.sigma * std::sqrt(constants::two_pi);
        double worst = 0.0;
        for (int mu0 = -1; mu0 <= 1; ++mu0)
            for (double delta : {-max_abs_delta_, 0.0, max_abs_delta_}) {
                const auto a = one_photon_on(grid_, samples_, mu0, delta);
                const auto b = one_photon_on(fine, fine_samples, mu0, delta);
                worst = std::max(worst, std::abs(a - b));
            }
        for (auto [mu0, nu0] : {std::pair{0, 0}, {1, -1}, {-1, 1}}) {
            const auto a = two_photon_on(grid_, samples_, mu0, nu0, 0.5 * max_abs_delta_,
                                         -0.5 * max_abs_delta_);
            const auto b = two_photon_on(fine, fine_samples, mu0, nu0, 0.5 * max_abs_delta_,
                                         -0.5 * max_abs_delta_);
            worst = std::max(worst, std::abs(a - b));
        }
        if (!(worst <= 1e-10 * scale)) {
            std::ostringstream msg;
            msg << "time quadrature failed its grid-halving self-check: probe disagreement "
                << worst << " exceeds " << 1e-10 * scale << " (panels=" << grid_.panels
                << ", window=[" << grid_.a << ", " << grid_.b << "] a.u.)";
            throw NumericalError(msg.str());
        }
    }

    double window_begin() const { return grid_.a; }
    double window_end() const { return grid_.b; }
    const FieldSpec& spec() const { return spec_; }

    std::complex<double> one_photon(int mu0, double delta) const {
        require_delta(delta);
        return one_photon_on(grid_, samples_, mu0, delta);
    }

    std::complex<double> two_photon(int mu0, int nu0, double e_k, double e_p,
                                    double e_i0) const {
        const double d_out = e_k - e_p, d_in = e_p - e_i0;
        require_delta(d_out);
        require_delta(d_in);
        const std::vector<std::complex<double>>& inner = inner_cumulative(nu0, d_in);
        const auto& f = samples_[index_of(mu0)];
        std::vector<std::complex<double>> terms(grid_.t.size());
        for (std::size_t i = 0; i < grid_.t.size(); ++i)
            terms[i] = grid_.w[i] * std::polar(1.0, d_out * grid_.t[i]) * f[i] * inner[i];
        return pairwise_sum(std::span<const std::complex<double>>(terms));
    }

    /// All nine (mu0, nu0) two-photon integrals for one (e_k, e_p) pair; the
    /// outer phase factor is shared across the batch. out[mu0+1][nu0+1].
    std::array<std::array<std::complex<double>, 3>, 3>
    two_photon_all(double e_k, double e_p, double e_i0) const {
        const double d_out = e_k - e_p, d_in = e_p - e_i0;
        require_delta(d_out);
        require_delta(d_in);
        const std::size_t n = grid_.t.size();
        std::vector<std::complex<double>> phase(n);
        for (std::size_t i = 0; i < n; ++i)
            phase[i] = grid_.w[i] * std::polar(1.0, d_out * grid_.t[i]);
        std::array<std::array<std::complex<double>, 3>, 3> out{};
        std::vector<std::complex<double>> terms(n);
        for (int nu0 = -1; nu0 <= 1; ++nu0) {
            const auto& inner = inner_cumulative(nu0, d_in);
            for (int mu0 = -1; mu0 <= 1; ++mu0) {
                const auto& f = samples_[index_of(mu0)];
                for (std::size_t i = 0; i < n; ++i) terms[i] = phase[i] * f[i] * inner[i];
                out[mu0 + 1][nu0 + 1] =
                    pairwise_sum(std::span<const std::complex<double>>(terms));
            }
        }
        return out;
    }

  private:
    struct Grid {
        double a = 0.0, b = 0.0;
        int panels = 0, q = 16;
        std::vector<double> t, w;
    };
    using Samples = std::array<std::vector<std::complex<double>>, 3>; // mu0 = -1, 0, +1

    static int index_of(int mu0) {
        if (mu0 < -1 || mu0 > 1) throw ArgumentError("spherical component index must be -1, 0, or +1");
        return mu0 + 1;
    }

    void require_delta(double delta) const {
        if (std::abs(delta) > max_abs_delta_ * (1.0 + 1e-12) + 1e-300)
            throw ArgumentError(
                "detuning exceeds the bandwidth this integrator was constructed for");
    }

    void build_grid(Grid& g, Samples& s, int density) const {
        double lo = spec_.pulses.front().tau, hi = lo;
        double f_max = 0.0;
        for (const SubPulse& p : spec_.pulses) {
            lo = std::min(lo, p.tau - 8.0 * p.sigma);
            hi = std::max(hi, p.tau + 8.0 * p.sigma);
            f_max = std::max(f_max, p.omega + 3.0 / p.sigma);
        }
        f_max += max_abs_delta_;
        const double panel_width = 0.8 * constants::two_pi / f_max;
        g.a = lo;
        g.b = hi;
        g.q = 16;
        g.panels = density * std::max(1, static_cast<int>(std::ceil((hi - lo) / panel_width)));
        const CompositeGrid cg(g.a, g.b, g.panels, g.q);
        g.t = cg.t;
        g.w = cg.w;
        for (auto& comp : s) comp.resize(g.t.size());
        for (std::size_t i = 0; i < g.t.size(); ++i) {
            const SphericalFieldSample f = eval_field(spec_, g.t[i]);
            s[0][i] = f.e_minus;
            s[1][i] = f.e_zero;
            s[2][i] = f.e_plus;
        }
    }

    static std::complex<double> one_photon_on(const Grid& g, const Samples& s, int mu0,
                                              double delta) {
        const auto& f = s[index_of(mu0)];
        std::vector<std::complex<double>> terms(g.t.size());
        for (std::size_t i = 0; i < g.t.size(); ++i)
            terms[i] = g.w[i] * f[i] * std::polar(1.0, delta * g.t[i]);
        return pairwise_sum(std::span<const std::complex<double>>(terms));
    }

    static std::vector<std::complex<double>> cumulative_on(const Grid& g, const Samples& s,
                                                           int nu0, double d_in) {
        const auto& f = s[index_of(nu0)];
        std::vector<std::complex<double>> integrand(g.t.size());
        for (std::size_t i = 0; i < g.t.size(); ++i)
            integrand[i] = f[i] * std::polar(1.0, d_in * g.t[i]);
        const CompositeGrid cg(g.a, g.b, g.panels, g.q);
        return cg.cumulative(std::span<const std::complex<double>>(integrand));
    }

    static std::complex<double> two_photon_on(const Grid& g, const Samples& s, int mu0,
                                              int nu0, double d_out, double d_in) {
        const auto inner = cumulative_on(g, s, nu0, d_in);
        const auto& f = s[index_of(mu0)];
        std::vector<std::complex<double>> terms(g.t.size());
        for (std::size_t i = 0; i < g.t.size(); ++i)
            terms[i] = g.w[i] * std::polar(1.0, d_out * g.t[i]) * f[i] * inner[i];
        return pairwise_sum(std::span<const std::complex<double>>(terms));
    }

    const std::vector<std::complex<double>>& inner_cumulative(int nu0, double d_in) const {
        const std::pair<int, std::uint64_t> key{nu0, detail::double_bits(d_in)};
        {
            std::shared_lock lk(cache_mutex_);
            auto it = inner_cache_.find(key);
            if (it != inner_cache_.end()) return it->second;
        }
        auto value = cumulative_on(grid_, samples_, nu0, d_in);
        std::unique_lock lk(cache_mutex_);
        return inner_cache_.try_emplace(key, std::move(value)).first->second;
    }

    FieldSpec spec_;
    double max_abs_delta_;
    Grid grid_;
    Samples samples_;
    mutable std::shared_mutex cache_mutex_;
    mutable std::map<std::pair<int, std::uint64_t>, std::vector<std::complex<double>>>
        inner_cache_;
};

/// Convenience one-shot wrappers (tests and small diagnostics); heavy callers
/// should construct one TimeIntegrator and reuse it.
inline std::complex<double> one_photon_integral(const FieldSpec& spec, int mu0, double delta) {
    return TimeIntegrator(spec, std::abs(delta)).one_photon(mu0, delta);
}

inline std::complex<double> two_photon_integral(const FieldSpec& spec, int mu0, int nu0,
                                                double e_k, double e_p, double e_i0) {
    const double cap = std::max(std::abs(e_k - e_p), std::abs(e_p - e_i0));
    return TimeIntegrator(spec, cap).two_photon(mu0, nu0, e_k, e_p, e_i0);
}

// ---------------------------------------------------------------------------
// Spectral diagnostics
// ---------------------------------------------------------------------------

struct SpectrumPoint {
    double omega;
    double intensity;
    double phase;
};

namespace detail {

struct UniformSampling {
    double t0, dt;
    std::array<std::vector<double>, 3> e; // cartesian components x, y, z
};

inline UniformSampling sample_cartesian(const FieldSpec& spec) {
    if (spec.pulses.empty()) throw ArgumentError("field spec has no sub-pulses");
    double lo = spec.pulses.front().tau, hi = lo, period = 1e300;
    for (const SubPulse& p : spec.pulses) {
        lo = std::min(lo, p.tau - 8.0 * p.sigma);
        hi = std::max(hi, p.tau + 8.0 * p.sigma);
        period = std::min(period, constants::two_pi / p.omega);
    }
    UniformSampling s;
    s.dt = period / 40.0;
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / s.dt)) + 1;
    s.t0 = lo;
    for (auto& comp : s.e) comp.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = cartesian_field(spec, lo + static_cast<double>(i) * s.dt);
        s.e[0][i] = c[0];
        s.e[1][i] = c[1];
        s.e[2][i] = c[2];
    }
    return s;
}

inline int dominant_component(const UniformSampling& s) {
    int best = 0;
    double best_power = -1.0;
    for (int c = 0; c < 3; ++c) {
        double power = 0.0;
        for (double v : s.e[c]) power += v * v;
        if (power > best_power) {
            best_power = power;
            best = c;
        }
    }
    return best;
}

} // namespace detail

/// Discrete Fourier transform of the cartesian field over the full envelope
/// window. intensity = sum_c |E_c(omega)|^2; phase = unwrapped argument of
/// the dominant cartesian component. The requested frequencies must lie
/// below the Nyquist limit of the internal sampling.
inline std::vector<SpectrumPoint> power_spectrum(const FieldSpec& spec,
                                                 const std::vector<double>& omega_grid) {
    const auto s = detail::sample_cartesian(spec);
    const double nyquist = constants::pi / s.dt;
    for (double w : omega_grid)
        if (!(w >= 0.0) || w > nyquist)
            throw ArgumentError("requested spectrum frequency exceeds the Nyquist limit of "
                                "the internal field sampling");
    const int dom = detail::dominant_component(s);
    std::vector<SpectrumPoint> out(omega_grid.size());
    std::vector<double> raw_phase(omega_grid.size());
    for (std::size_t k = 0; k < omega_grid.size(); ++k) {
        const double w = omega_grid[k];
        std::array<std::complex<double>, 3> amp{};
        for (std::size_t i = 0; i < s.e[0].size(); ++i) {
            const std::complex<double> ph =
                std::polar(s.dt, w * (s.t0 + static_cast<double>(i) * s.dt));
            for (int c = 0; c < 3; ++c) amp[c] += ph * s.e[c][i];
        }
        double intensity = 0.0;
        for (int c = 0; c < 3; ++c) intensity += std::norm(amp[c]);
        out[k] = {w, intensity, 0.0};
        raw_phase[k] = std::arg(amp[dom]);
    }
    // Unwrap the phase along the grid.
    double offset = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (k > 0) {
            double d = raw_phase[k] - raw_phase[k - 1];
            while (d > constants::pi) {
                offset -= constants::two_pi;
                d -= constants::two_pi;
            }
            while (d < -constants::pi) {
                offset += constants::two_pi;
                d += constants::two_pi;
            }
        }
        out[k].phase = raw_phase[k] + offset;
    }
    return out;
}

/// Gabor spectrogram of the dominant cartesian component:
/// map[i][j] = |int E(t') g(t' - t_i) e^{i omega_j t'} dt'|^2 with a Gaussian
/// window g of width sigma_w = min_j(sigma_j)/4.
inline std::vector<std::vector<double>>
time_frequency_map(const FieldSpec& spec, const std::vector<double>& t_grid,
                   const std::vector<double>& omega_grid) {
    const auto s = detail::sample_cartesian(spec);
    const double nyquist = constants::pi / s.dt;
    for (double w : omega_grid)
        if (!(w >= 0.0) || w > nyquist)
            throw ArgumentError("requested spectrogram frequency exceeds the Nyquist limit "
                                "of the internal field sampling");
    double sigma_w = 1e300;
    for (const SubPulse& p : spec.pulses) sigma_w = std::min(sigma_w, p.sigma / 4.0);
    const int dom = detail::dominant_component(s);
    const auto n = s.e[dom].size();
    std::vector<std::vector<double>> map(t_grid.size(),
                                         std::vector<double>(omega_grid.size(), 0.0));
    for (std::size_t it = 0; it < t_grid.size(); ++it) {
        const double tc = t_grid[it];
        const auto i_lo = static_cast<std::size_t>(
            std::max(0.0, std::floor((tc - 6.0 * sigma_w - s.t0) / s.dt)));
        const auto i_hi =
            std::min(n, static_cast<std::size_t>(
                            std::max(0.0, std::ceil((tc + 6.0 * sigma_w - s.t0) / s.dt) + 1.0)));
        for (std::size_t jw = 0; jw < omega_grid.size(); ++jw) {
            std::complex<double> acc = 0.0;
            for (std::size_t i = i_lo; i < i_hi; ++i) {
                const double t = s.t0 + static_cast<double>(i) * s.dt;
                const double u = (t - tc) / sigma_w;
                acc += s.e[dom][i] * std::exp(-0.5 * u * u) *
                       std::polar(s.dt, omega_grid[jw] * t);
            }
            map[it][jw] = std::norm(acc);
        }
    }
    return map;
}

// ---------------------------------------------------------------------------
// JSON interface
// ---------------------------------------------------------------------------
//
// A field spec is a JSON array of sub-pulse records (or an object with a
// "pulses" array). Each record:
//   channel        : "lin_z" | "crp" | "clp"          (required)
//   omega_eV       : carrier photon energy in eV      (required, > 0)
//   fwhm_fs        : intensity FWHM in fs             (required, > 0)
//   amplitude_au | intensity_Wcm2 : exactly one       (required)
//   phase_rad      : carrier-envelope phase           (optional, default 0)
//   tau_fs         : peak delay in fs                 (optional, default 0)

inline FieldSpec field_from_json(const nlohmann::json& j) {
    const nlohmann::json* arr = nullptr;
    if (j.is_array()) {
        arr = &j;
    } else if (j.is_object() && j.contains("pulses") && j["pulses"].is_array()) {
        arr = &j["pulses"];
    } else {
        throw ArgumentError(
            "field spec must be a JSON array of sub-pulses or an object with a 'pulses' array");
    }
    if (arr->empty()) throw ArgumentError("field spec has no sub-pulses");
    FieldSpec spec;
    for (std::size_t idx = 0; idx < arr->size(); ++idx) {
        const nlohmann::json& rec = (*arr)[idx];
        const std::string where = "sub-pulse " + std::to_string(idx) + ": ";
        if (!rec.is_object()) throw ArgumentError(where + "record must be a JSON object");
        auto require_number = [&](const char* key) -> double {
            if (!rec.contains(key))
                throw ArgumentError(where + "missing required key '" + key + "'");
            if (!rec[key].is_number())
                throw ArgumentError(where + "key '" + key + "' must be a number");
            return rec[key].get<double>();
        };
        if (!rec.contains("channel") || !rec["channel"].is_string())
            throw ArgumentError(where + "missing required string key 'channel'");
        Channel ch;
        try {
            ch = channel_from_string(rec["channel"].get<std::string>());
        } catch (const ArgumentError& e) {
            throw ArgumentError(where + e.what());
        }
        const bool has_amp = rec.contains("amplitude_au");
        const bool has_int = rec.contains("intensity_Wcm2");
        if (has_amp == has_int)
            throw ArgumentError(where +
                                "exactly one of 'amplitude_au' or 'intensity_Wcm2' is required");
        double e0;
        if (has_amp) {
            e0 = require_number("amplitude_au");
            if (!(e0 >= 0.0)) throw ArgumentError(where + "'amplitude_au' must be >= 0");
        } else {
            const double intensity = require_number("intensity_Wcm2");
            if (!(intensity >= 0.0))
                throw ArgumentError(where + "'intensity_Wcm2' must be >= 0");
            e0 = constants::intensity_to_amplitude(intensity);
        }
        const double omega_ev = require_number("omega_eV");
        if (!(omega_ev > 0.0)) throw ArgumentError(where + "'omega_eV' must be > 0");
        const double fwhm_fs = require_number("fwhm_fs");
        if (!(fwhm_fs > 0.0)) throw ArgumentError(where + "'fwhm_fs' must be > 0");
        const double phase = rec.contains("phase_rad") ? require_number("phase_rad") : 0.0;
        const double tau_fs = rec.contains("tau_fs") ? require_number("tau_fs") : 0.0;
        try {
            spec.pulses.emplace_back(e0, constants::ev_to_au(omega_ev), phase,
                                     constants::fs_to_au(tau_fs),
                                     constants::fwhm_fs_to_sigma_au(fwhm_fs), ch);
        } catch (const ArgumentError& e) {
            throw ArgumentError(where + e.what());
        }
    }
    return spec;
}

inline nlohmann::json field_to_json(const FieldSpec& spec) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SubPulse& p : spec.pulses) {
        arr.push_back({{"channel", to_string(p.channel)},
                       {"amplitude_au", p.E0},
                       {"omega_eV", constants::au_to_ev(p.omega)},
                       {"phase_rad", p.phase},
                       {"tau_fs", constants::au_to_fs(p.tau)},
                       {"fwhm_fs", constants::sigma_au_to_fwhm_fs(p.sigma)}});
    }
    return nlohmann::json{{"pulses", arr}};
}

inline FieldSpec load_field_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open field spec file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError("field spec file " + path + " is not valid JSON: " + e.what());
    }
    return field_from_json(j);
}

inline void save_field_spec(const std::string& path, const FieldSpec& spec) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot write field spec file: " + path);
    out << field_to_json(spec).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

/// Named field templates:
///   "bichromatic"  : omega + 2 omega linear pair (11 / 22 eV) with a 1:2
///                    intensity ratio, 23 fs.
///   "five_carrier" : five linear carriers at 7.1 / 10.8 / 11.1 / 14.8 /
///                    21.9 eV, 23 fs.
///   "three_color"  : 7.075 / 14.803 / 21.878 eV linear trio, 23 fs; the two
///                    low carriers drive a sequential two-photon path whose
///                    total 21.878 eV matches the single-photon carrier.
inline FieldSpec preset_field(const std::string& name) {
    auto pulse = [](double omega_ev, double intensity_wcm2) {
        return SubPulse(constants::intensity_to_amplitude(intensity_wcm2),
                        constants::ev_to_au(omega_ev), 0.0, 0.0,
                        constants::fwhm_fs_to_sigma_au(23.0), Channel::LIN_Z);
    };
    FieldSpec spec;
    if (name == "bichromatic") {
        spec.pulses = {pulse(11.0, 1e11), pulse(22.0, 2e11)};
    } else if (name == "five_carrier") {
        spec.pulses = {pulse(7.1, 1e11), pulse(10.8, 1e11), pulse(11.1, 1e11),
                       pulse(14.8, 1e11), pulse(21.9, 4.11e9)};
    } else if (name == "three_color") {
        spec.pulses = {pulse(7.075, 1e11), pulse(14.803, 1e11), pulse(21.878, 4.11e9)};
    } else {
        throw NotFoundError("unknown field preset '" + name +
                            "' (available: bichromatic, five_carrier, three_color)");
    }
    return spec;
}

} // namespace padkit
