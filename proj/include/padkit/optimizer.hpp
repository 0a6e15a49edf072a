#pragma once

// Derivative-free maximization of the photoemission-anisotropy objective over
// box-constrained pulse parameters, plus two-color carrier/phase asymmetry
// scans.
//
// The search engine is a cyclic coordinate descent: each free parameter in
// turn is line-searched with a golden-section bracket over its bound interval,
// and an optional Nelder-Mead polish runs once the sweeps stall. Both stages
// are gradient-free and fully deterministic; simplex candidates that leave
// the box are reflected back inside (triangle fold), and a total-amplitude
// cap across all sub-pulses is enforced by rescaling the free amplitudes
// toward their lower bounds. Objective values are cached keyed by the
// quantized parameter vector so that re-visits during a line search are free.
//
// Units at this interface match the JSON pulse interface: amplitudes in
// atomic units, carriers in eV, phases in radians, delays and widths (FWHM)
// in femtoseconds. Conversions happen once when a parameter vector is
// written into a field specification.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "padkit/constants.hpp"
#include "padkit/errors.hpp"
#include "padkit/pad.hpp"
#include "padkit/pulses.hpp"
#include "padkit/structure.hpp"
#include "padkit/util.hpp"

namespace padkit {

// ---------------------------------------------------------------------------
// Evaluation trace
// ---------------------------------------------------------------------------

/// One objective evaluation: the flattened free-parameter vector (interface
/// units) and the value it produced. Failed evaluations carry -infinity.
struct OptEval {
    int index = 0;
    std::vector<double> params;
    double value = 0.0;
};

/// Complete evaluation history of one optimization run. `best_so_far[i]` is
/// the running maximum after evaluation i, non-decreasing by construction.
struct OptTrace {
    std::vector<std::string> param_names;
    std::vector<OptEval> evals;
    std::vector<double> best_so_far;
    std::vector<double> best_params;
    double best_value = -std::numeric_limits<double>::infinity();
};

/// CSV export: eval index, value, running best, then one column per
/// parameter.
inline void trace_to_csv(std::ostream& os, const OptTrace& t, bool header = true) {
    if (header) {
        os << "eval,value,best_so_far";
        for (const std::string& n : t.param_names) os << ',' << n;
        os << '\n';
    }
    for (std::size_t i = 0; i < t.evals.size(); ++i) {
        os << t.evals[i].index << ',' << format_g17(t.evals[i].value) << ','
           << format_g17(t.best_so_far[i]);
        for (double p : t.evals[i].params) os << ',' << format_g17(p);
        os << '\n';
    }
}

// ---------------------------------------------------------------------------
// Search engine (generic, objective-agnostic)
// ---------------------------------------------------------------------------

/// Linear coupling constraint: sum of the listed coordinates plus a fixed
/// contribution must not exceed `total`. Used for the total-amplitude cap.
struct SumCap {
    std::vector<int> coords;
    double total = std::numeric_limits<double>::infinity();
    double fixed_part = 0.0;
};

struct EngineOptions {
    double line_tol_rel = 1e-5;  ///< golden-section interval tolerance / range
    int max_sweeps = 100;        ///< coordinate-descent sweeps before stopping
    bool nelder_mead_polish = true;
    int nm_max_iters = 200;
    std::optional<SumCap> cap;
};

struct EngineResult {
    std::vector<double> best_x;
    double best_value = -std::numeric_limits<double>::infinity();
    OptTrace trace;
};

namespace detail {

/// Reflect a scalar into [lo, hi] by folding at the walls (period 2*range).
inline double fold_into(double x, double lo, double hi) {
    if (x >= lo && x <= hi) return x;
    const double range = hi - lo;
    const double period = 2.0 * range;
    double y = std::fmod(x - lo, period);
    if (y < 0.0) y += period;
    if (y > range) y = period - y;
    return std::min(hi, std::max(lo, lo + y));
}

/// Scale the capped coordinates' excess above their lower bounds so the sum
/// constraint holds with equality when it was violated. Leaves feasible
/// vectors untouched.
inline void project_cap(std::vector<double>& x, const std::vector<double>& lo,
                        const SumCap& cap) {
    double sum = cap.fixed_part;
    for (int i : cap.coords) sum += x[static_cast<std::size_t>(i)];
    if (sum <= cap.total) return;
    double lo_sum = cap.fixed_part, excess = 0.0;
    for (int i : cap.coords) {
        lo_sum += lo[static_cast<std::size_t>(i)];
        excess += x[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)];
    }
    const double slack = cap.total - lo_sum; // >= 0, validated upstream
    const double s = excess > 0.0 ? std::max(0.0, slack / excess) : 0.0;
    for (int i : cap.coords) {
        const std::size_t k = static_cast<std::size_t>(i);
        x[k] = lo[k] + s * (x[k] - lo[k]);
    }
}

/// Budgeted, cached, feasibility-checked objective evaluator. Every fresh
/// evaluation lands in the trace; cache hits are free (no budget, no trace
/// entry). Values are sanitized: NaN counts as a failed evaluation.
class BudgetedEvaluator {
  public:
    BudgetedEvaluator(std::function<double(const std::vector<double>&)> f,
                      const std::vector<double>& lo, const std::vector<double>& hi,
                      const std::optional<SumCap>& cap, int budget)
        : f_(std::move(f)), lo_(lo), hi_(hi), cap_(cap), budget_(budget) {
        steps_.resize(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i)
            steps_[i] = (hi[i] - lo[i]) * 0x1p-44; // ~6e-14 of the range per tick
    }

    bool exhausted() const { return n_evals_ >= budget_; }
    int evals() const { return n_evals_; }

    /// Cached value if known; otherwise evaluate (budget permitting).
    /// nullopt signals an exhausted budget, never a failed objective.
    std::optional<double> value(const std::vector<double>& x) {
        assert_feasible(x);
        const std::vector<long long> key = quantize(x);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        if (exhausted()) return std::nullopt;
        double v = f_(x);
        if (std::isnan(v)) v = -std::numeric_limits<double>::infinity();
        cache_.emplace(key, v);
        trace_.evals.push_back({n_evals_, x, v});
        if (v > trace_.best_value) {
            trace_.best_value = v;
            trace_.best_params = x;
            best_x_ = x;
        } else if (trace_.best_params.empty()) {
            trace_.best_params = x; // first evaluation, even when it failed
            best_x_ = x;
        }
        trace_.best_so_far.push_back(trace_.best_value);
        ++n_evals_;
        return v;
    }

    const std::vector<double>& best_x() const { return best_x_; }
    double best_value() const { return trace_.best_value; }
    OptTrace take_trace() { return std::move(trace_); }

  private:
    std::vector<long long> quantize(const std::vector<double>& x) const {
        std::vector<long long> key(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            key[i] = steps_[i] > 0.0 ? std::llround((x[i] - lo_[i]) / steps_[i]) : 0;
        return key;
    }

    void assert_feasible(const std::vector<double>& x) const {
        if (x.size() != lo_.size())
            throw NumericalError("optimizer invariant violated: parameter vector size changed");
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!(x[i] >= lo_[i] && x[i] <= hi_[i]))
                throw NumericalError(
                    "optimizer invariant violated: candidate left its bound interval");
        if (cap_) {
            double sum = cap_->fixed_part;
            for (int i : cap_->coords) sum += x[static_cast<std::size_t>(i)];
            if (!(sum <= cap_->total * (1.0 + 1e-12) + 1e-300))
                throw NumericalError(
                    "optimizer invariant violated: candidate exceeds the amplitude cap");
        }
    }

    std::function<double(const std::vector<double>&)> f_;
    std::vector<double> lo_, hi_, steps_;
    std::optional<SumCap> cap_;
    int budget_ = 0;
    int n_evals_ = 0;
    std::map<std::vector<long long>, double> cache_;
    OptTrace trace_;
    std::vector<double> best_x_;
};

} // namespace detail

/// Maximize f over the box [lo, hi] starting from x0, spending at most
/// `budget` objective evaluations. Deterministic: no internal randomness, so
/// identical inputs produce bit-identical traces. Objective exceptions must
/// be handled by the caller (wrap f); NaN results are treated as -infinity.
inline EngineResult
maximize_derivative_free(const std::function<double(const std::vector<double>&)>& f,
                         const std::vector<double>& lo, const std::vector<double>& hi,
                         std::vector<double> x0, int budget,
                         const EngineOptions& opts = {}) {
    const std::size_t n = lo.size();
    if (hi.size() != n || x0.size() != n)
        throw ArgumentError("maximize_derivative_free: bounds and start must have equal sizes");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]))
            throw ArgumentError("maximize_derivative_free: bounds must be finite");
        if (!(lo[i] < hi[i]))
            throw ArgumentError("maximize_derivative_free: lower bound must be < upper bound");
    }
    if (budget < 1) throw ArgumentError("maximize_derivative_free: budget must be >= 1");
    if (opts.cap) {
        double lo_sum = opts.cap->fixed_part;
        for (int i : opts.cap->coords) {
            if (i < 0 || static_cast<std::size_t>(i) >= n)
                throw ArgumentError("maximize_derivative_free: cap coordinate out of range");
            lo_sum += lo[static_cast<std::size_t>(i)];
        }
        if (!(lo_sum <= opts.cap->total))
            throw ArgumentError("maximize_derivative_free: the sum cap is infeasible against "
                                "the lower bounds");
    }

    for (std::size_t i = 0; i < n; ++i) x0[i] = std::min(hi[i], std::max(lo[i], x0[i]));
    if (opts.cap) detail::project_cap(x0, lo, *opts.cap);

    detail::BudgetedEvaluator ev(f, lo, hi, opts.cap, budget);
    std::vector<double> cur = x0;
    double cur_val = *ev.value(cur); // budget >= 1, so this always evaluates

    // Effective line-search interval for one coordinate: its own bounds,
    // truncated from above by the cap slack left by the other coordinates.
    auto interval = [&](std::size_t i, const std::vector<double>& x) {
        double a = lo[i], b = hi[i];
        if (opts.cap &&
            std::find(opts.cap->coords.begin(), opts.cap->coords.end(), static_cast<int>(i)) !=
                opts.cap->coords.end()) {
            double others = opts.cap->fixed_part;
            for (int j : opts.cap->coords)
                if (static_cast<std::size_t>(j) != i) others += x[static_cast<std::size_t>(j)];
            b = std::min(b, opts.cap->total - others);
            b = std::max(b, a); // pinned when the rest of the budget is spent
        }
        return std::pair<double, double>(a, b);
    };

    constexpr double invphi = 0.6180339887498949;
    bool out_of_budget = false;

    for (int sweep = 0; sweep < opts.max_sweeps && !out_of_budget; ++sweep) {
        bool moved = false;
        for (std::size_t i = 0; i < n && !out_of_budget; ++i) {
            auto [a, b] = interval(i, cur);
            if (!(b - a > 0.0)) continue;
            const double tol = opts.line_tol_rel * (hi[i] - lo[i]);

            double best_t = cur[i], best_v = cur_val;
            double c = b - invphi * (b - a);
            double d = a + invphi * (b - a);
            std::vector<double> xc = cur, xd = cur;
            xc[i] = std::min(b, std::max(a, c));
            xd[i] = std::min(b, std::max(a, d));
            auto fc = ev.value(xc), fd = ev.value(xd);
            if (!fc || !fd) { out_of_budget = true; break; }
            if (*fc > best_v) { best_v = *fc; best_t = xc[i]; }
            if (*fd > best_v) { best_v = *fd; best_t = xd[i]; }

            while (b - a > tol) {
                if (*fc >= *fd) {
                    b = d; d = c; fd = fc;
                    c = b - invphi * (b - a);
                    std::vector<double> x = cur;
                    x[i] = std::min(b, std::max(a, c));
                    fc = ev.value(x);
                    if (!fc) { out_of_budget = true; break; }
                    if (*fc > best_v) { best_v = *fc; best_t = x[i]; }
                } else {
                    a = c; c = d; fc = fd;
                    d = a + invphi * (b - a);
                    std::vector<double> x = cur;
                    x[i] = std::min(b, std::max(a, d));
                    fd = ev.value(x);
                    if (!fd) { out_of_budget = true; break; }
                    if (*fd > best_v) { best_v = *fd; best_t = x[i]; }
                }
            }

            if (best_v > cur_val) {
                cur[i] = best_t;
                cur_val = best_v;
                moved = true;
            }
        }
        if (!moved) break;
    }

    // Nelder-Mead polish around the incumbent. Candidates are folded back
    // into the box and cap-projected, so every evaluation stays feasible.
    if (opts.nelder_mead_polish && n >= 1 && !out_of_budget && !ev.exhausted()) {
        auto sanitize = [&](std::vector<double> x) {
            for (std::size_t i = 0; i < n; ++i) x[i] = detail::fold_into(x[i], lo[i], hi[i]);
            if (opts.cap) detail::project_cap(x, lo, *opts.cap);
            return x;
        };

        std::vector<std::vector<double>> pts;
        std::vector<double> vals;
        auto push_point = [&](const std::vector<double>& x) -> bool {
            const auto v = ev.value(x);
            if (!v) return false;
            pts.push_back(x);
            vals.push_back(*v);
            return true;
        };

        bool alive = push_point(cur);
        for (std::size_t i = 0; i < n && alive; ++i) {
            std::vector<double> x = cur;
            x[i] += 0.05 * (hi[i] - lo[i]);
            alive = push_point(sanitize(std::move(x)));
        }

        for (int iter = 0; alive && iter < opts.nm_max_iters; ++iter) {
            std::vector<std::size_t> order(pts.size());
            for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t p, std::size_t q) { return vals[p] > vals[q]; });
            const std::size_t ib = order.front(), iw = order.back();
            const std::size_t is = order[order.size() - 2]; // second worst
            if (std::isfinite(vals[ib]) &&
                vals[ib] - vals[iw] <= 1e-13 * (1.0 + std::abs(vals[ib])))
                break;

            std::vector<double> cen(n, 0.0);
            for (std::size_t k : order)
                if (k != iw)
                    for (std::size_t i = 0; i < n; ++i) cen[i] += pts[k][i];
            for (std::size_t i = 0; i < n; ++i) cen[i] /= static_cast<double>(pts.size() - 1);

            auto along = [&](double coef) {
                std::vector<double> x(n);
                for (std::size_t i = 0; i < n; ++i)
                    x[i] = cen[i] + coef * (cen[i] - pts[iw][i]);
                return sanitize(std::move(x));
            };

            const std::vector<double> xr = along(1.0);
            const auto fr = ev.value(xr);
            if (!fr) break;
            if (*fr > vals[ib]) {
                const std::vector<double> xe = along(2.0);
                const auto fe = ev.value(xe);
                if (!fe) break;
                if (*fe > *fr) { pts[iw] = xe; vals[iw] = *fe; }
                else { pts[iw] = xr; vals[iw] = *fr; }
            } else if (*fr > vals[is]) {
                pts[iw] = xr;
                vals[iw] = *fr;
            } else {
                const std::vector<double> xc = along(-0.5); // inside contraction
                const auto fcv = ev.value(xc);
                if (!fcv) break;
                if (*fcv > vals[iw]) {
                    pts[iw] = xc;
                    vals[iw] = *fcv;
                } else {
                    for (std::size_t k = 0; k < pts.size() && alive; ++k) {
                        if (k == ib) continue;
                        std::vector<double> x(n);
                        for (std::size_t i = 0; i < n; ++i)
                            x[i] = pts[ib][i] + 0.5 * (pts[k][i] - pts[ib][i]);
                        x = sanitize(std::move(x));
                        const auto v = ev.value(x);
                        if (!v) { alive = false; break; }
                        pts[k] = x;
                        vals[k] = *v;
                    }
                }
            }
        }
    }

    EngineResult r;
    r.best_x = ev.best_x();
    r.best_value = ev.best_value();
    r.trace = ev.take_trace();
    return r;
}

// ---------------------------------------------------------------------------
// Pulse-parameter problem layer
// ---------------------------------------------------------------------------

/// Inclusive bound interval for one free parameter, in interface units.
struct ParamBound {
    double lower = 0.0;
    double upper = 0.0;
};

/// Which parameters of one sub-pulse are free. An engaged optional frees the
/// parameter over the given interval; disengaged parameters stay at their
/// template values.
struct PulseFreedom {
    std::optional<ParamBound> amplitude; ///< peak field E0, atomic units
    std::optional<ParamBound> omega_ev;  ///< carrier, eV
    std::optional<ParamBound> phase;     ///< carrier-envelope phase, radians
    std::optional<ParamBound> delay_fs;  ///< envelope center, fs
    std::optional<ParamBound> fwhm_fs;   ///< intensity FWHM, fs
};

namespace defaults {

/// Documented default bounds for freed envelope parameters.
inline ParamBound fwhm_bound() { return {1.0, 60.0}; }        // fs
inline ParamBound delay_bound() { return {-100.0, 100.0}; }   // fs

/// Default total-amplitude cap: the peak field of a single pulse at
/// 1e12 W/cm^2, applied to the sum of all sub-pulse amplitudes.
inline double amplitude_cap_au() { return constants::intensity_to_amplitude(1e12); }

} // namespace defaults

/// What the optimizer maximizes: the largest |A| of the anisotropy map over
/// the energy x angle grid (a single-entry energy grid targets one energy).
struct AnisotropyObjective {
    std::vector<double> e_grid_ev;
    int n_theta = 91;
    double phi_slice = 0.5 * constants::pi;
};

struct OptProblem {
    FieldSpec tmpl;                     ///< template field; fixed values come from here
    std::vector<PulseFreedom> freedom;  ///< empty = everything fixed; else one per pulse
    AnisotropyObjective objective;
    int budget = 200;                   ///< max objective evaluations
    std::uint64_t seed = 1;             ///< start-point seed for restarts
    double amplitude_cap_au = defaults::amplitude_cap_au(); ///< cap on sum of E0
    bool nelder_mead_polish = true;
};

namespace detail {

/// Flattened view of the free parameters: bounds, start point (the template
/// values clamped into bounds), names, and where each coordinate writes.
struct FlatProblem {
    enum Which { kAmplitude, kOmega, kPhase, kDelay, kFwhm };
    struct Slot {
        std::size_t pulse;
        Which which;
    };
    std::vector<double> lo, hi, x0;
    std::vector<std::string> names;
    std::vector<Slot> slots;
    std::vector<int> amp_coords;
    double fixed_amp_sum = 0.0;
};

inline void check_bound(const ParamBound& b, const std::string& what, double hard_lower,
                        bool strict_lower) {
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper))
        throw ArgumentError("optimizer bounds for " + what + " must be finite");
    if (!(b.lower < b.upper))
        throw ArgumentError("optimizer bounds for " + what + " need lower < upper");
    if (strict_lower ? !(b.lower > hard_lower) : !(b.lower >= hard_lower))
        throw ArgumentError("optimizer lower bound for " + what + " is out of the physical range");
}

inline FlatProblem flatten_problem(const OptProblem& p) {
    if (p.tmpl.pulses.empty())
        throw ArgumentError("optimizer template must contain at least one sub-pulse");
    if (!p.freedom.empty() && p.freedom.size() != p.tmpl.pulses.size())
        throw ArgumentError("per-pulse freedom list must match the number of sub-pulses");
    if (!(std::isfinite(p.amplitude_cap_au) && p.amplitude_cap_au > 0.0))
        throw ArgumentError("total-amplitude cap must be positive and finite");

    FlatProblem f;
    for (std::size_t ip = 0; ip < p.tmpl.pulses.size(); ++ip) {
        const SubPulse& sp = p.tmpl.pulses[ip];
        const PulseFreedom none{};
        const PulseFreedom& fr = p.freedom.empty() ? none : p.freedom[ip];
        const std::string tag = "pulse" + std::to_string(ip);
        auto add = [&](const std::optional<ParamBound>& b, FlatProblem::Which w,
                       const std::string& name, double start) {
            if (!b) return;
            f.lo.push_back(b->lower);
            f.hi.push_back(b->upper);
            f.x0.push_back(std::min(b->upper, std::max(b->lower, start)));
            f.names.push_back(tag + "." + name);
            f.slots.push_back({ip, w});
        };
        if (fr.amplitude) check_bound(*fr.amplitude, "amplitude", 0.0, false);
        if (fr.omega_ev) check_bound(*fr.omega_ev, "carrier frequency", 0.0, true);
        if (fr.phase) check_bound(*fr.phase, "phase", -std::numeric_limits<double>::max(), false);
        if (fr.delay_fs)
            check_bound(*fr.delay_fs, "delay", -std::numeric_limits<double>::max(), false);
        if (fr.fwhm_fs) check_bound(*fr.fwhm_fs, "pulse width", 0.0, true);

        add(fr.amplitude, FlatProblem::kAmplitude, "amplitude_au", sp.E0);
        if (fr.amplitude) f.amp_coords.push_back(static_cast<int>(f.lo.size()) - 1);
        else f.fixed_amp_sum += sp.E0;
        add(fr.omega_ev, FlatProblem::kOmega, "omega_ev", constants::au_to_ev(sp.omega));
        add(fr.phase, FlatProblem::kPhase, "phase_rad", sp.phase);
        add(fr.delay_fs, FlatProblem::kDelay, "delay_fs", constants::au_to_fs(sp.tau));
        add(fr.fwhm_fs, FlatProblem::kFwhm, "fwhm_fs",
            constants::sigma_au_to_fwhm_fs(sp.sigma));
    }

    double amp_lo_sum = f.fixed_amp_sum;
    for (int i : f.amp_coords) amp_lo_sum += f.lo[static_cast<std::size_t>(i)];
    if (!(amp_lo_sum <= p.amplitude_cap_au))
        throw ArgumentError("amplitude bounds are infeasible: the fixed amplitudes plus the "
                            "free lower bounds already exceed the total-amplitude cap");

    if (p.budget < 1 || static_cast<std::size_t>(p.budget) < f.lo.size())
        throw ArgumentError("optimizer budget must cover at least one evaluation per free "
                            "parameter (and at least one overall)");

    if (p.objective.e_grid_ev.empty())
        throw ArgumentError("objective energy grid must not be empty");
    for (std::size_t i = 1; i < p.objective.e_grid_ev.size(); ++i)
        if (!(p.objective.e_grid_ev[i] > p.objective.e_grid_ev[i - 1]))
            throw ArgumentError("objective energy grid must be strictly ascending");
    if (p.objective.n_theta < 2)
        throw ArgumentError("objective angle grid needs at least 2 nodes");
    if (!std::isfinite(p.objective.phi_slice))
        throw ArgumentError("objective azimuth must be finite");

    return f;
}

/// Write a flattened parameter vector into a copy of the template. Values go
/// through the SubPulse constructor, so phases are normalized and the usual
/// validity checks run.
inline FieldSpec apply_params(const FieldSpec& tmpl, const FlatProblem& f,
                              const std::vector<double>& x) {
    FieldSpec spec = tmpl;
    for (std::size_t k = 0; k < f.slots.size(); ++k) {
        SubPulse& sp = spec.pulses[f.slots[k].pulse];
        double e0 = sp.E0, omega = sp.omega, phase = sp.phase, tau = sp.tau, sigma = sp.sigma;
        switch (f.slots[k].which) {
            case FlatProblem::kAmplitude: e0 = x[k]; break;
            case FlatProblem::kOmega: omega = constants::ev_to_au(x[k]); break;
            case FlatProblem::kPhase: phase = x[k]; break;
            case FlatProblem::kDelay: tau = constants::fs_to_au(x[k]); break;
            case FlatProblem::kFwhm: sigma = constants::fwhm_fs_to_sigma_au(x[k]); break;
        }
        sp = SubPulse(e0, omega, phase, tau, sigma, sp.channel);
    }
    return spec;
}

} // namespace detail

struct OptResult {
    FieldSpec best;
    OptTrace trace;
};

namespace detail {

inline OptResult optimize_from(const OptProblem& p, const OrbitalSet& orb, const DipoleSet& dip,
                               const std::optional<std::vector<double>>& start) {
    orb.validate();
    const FlatProblem flat = flatten_problem(p);
    if (p.objective.e_grid_ev.front() < dip.k_grid_ev().front() ||
        p.objective.e_grid_ev.back() > dip.k_grid_ev().back())
        throw ArgumentError("objective energy grid exceeds the tabulated dipole range");

    const std::vector<double> theta_grid =
        mirror_theta_grid(static_cast<std::size_t>(p.objective.n_theta));

    auto objective_value = [&](const std::vector<double>& x) -> double {
        try {
            const FieldSpec spec = apply_params(p.tmpl, flat, x);
            const PADGrid g = compute_pad(orb, dip, spec, p.objective.e_grid_ev, theta_grid,
                                          p.objective.phi_slice);
            return objective(g).value;
        } catch (const std::exception&) {
            return -std::numeric_limits<double>::infinity();
        }
    };

    EngineOptions opts;
    opts.nelder_mead_polish = p.nelder_mead_polish;
    if (!flat.amp_coords.empty())
        opts.cap = SumCap{flat.amp_coords, p.amplitude_cap_au, flat.fixed_amp_sum};

    if (flat.lo.empty()) {
        // Nothing to vary: evaluate the template once and return it unchanged.
        OptTrace t;
        const double v = objective_value({});
        t.evals.push_back({0, {}, v});
        t.best_so_far.push_back(v);
        t.best_value = v;
        OptResult r{p.tmpl, std::move(t)};
        return r;
    }

    const EngineResult er = maximize_derivative_free(
        objective_value, flat.lo, flat.hi, start ? *start : flat.x0, p.budget, opts);

    OptResult r{apply_params(p.tmpl, flat, er.best_x), er.trace};
    r.trace.param_names = flat.names;
    return r;
}

} // namespace detail

/// Maximize the anisotropy objective over the problem's free parameters.
/// Deterministic: the single-start search has no internal randomness, so a
/// given problem always yields the same trace (the seed selects restart
/// start points in optimize_restarts).
inline OptResult optimize(const OptProblem& p, const OrbitalSet& orb, const DipoleSet& dip) {
    return detail::optimize_from(p, orb, dip, std::nullopt);
}

struct MultiStartResult {
    OptResult best;
    std::vector<OptTrace> traces;
    int best_index = 0;
};

/// Independent restarts: run 0 starts from the template, run r > 0 from a
/// point drawn uniformly inside the bounds with generator seed (seed + r).
/// The returned best is the maximum over the runs (ties toward the earliest
/// run); all traces are kept.
inline MultiStartResult optimize_restarts(const OptProblem& p, const OrbitalSet& orb,
                                          const DipoleSet& dip, int n_restarts) {
    if (n_restarts < 1) throw ArgumentError("optimize_restarts needs at least one restart");
    const detail::FlatProblem flat = detail::flatten_problem(p);

    MultiStartResult out;
    bool have_best = false;
    for (int r = 0; r < n_restarts; ++r) {
        std::optional<std::vector<double>> start;
        if (r > 0 && !flat.lo.empty()) {
            std::mt19937_64 rng(p.seed + static_cast<std::uint64_t>(r));
            std::vector<double> x(flat.lo.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                std::uniform_real_distribution<double> u(flat.lo[i], flat.hi[i]);
                x[i] = u(rng);
            }
            start = std::move(x);
        }
        OptProblem pr = p;
        pr.seed = p.seed + static_cast<std::uint64_t>(r);
        OptResult res = detail::optimize_from(pr, orb, dip, start);
        out.traces.push_back(res.trace);
        if (!have_best || res.trace.best_value > out.best.trace.best_value) {
            have_best = true;
            out.best = std::move(res);
            out.best_index = r;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Two-color carrier/phase scan
// ---------------------------------------------------------------------------

/// Fixed parameters of the two-color scan. The second color is locked to
/// twice the fundamental carrier; the scanned phase is the carrier-envelope
/// phase of that second-harmonic pulse.
struct ScanSettings {
    double fundamental_wcm2 = 1e11;     ///< peak intensity of the fundamental
    double second_wcm2 = 2e11;          ///< peak intensity of the second harmonic
    double fwhm_fs = 23.0;              ///< shared intensity FWHM
    Channel channel = Channel::LIN_Z;   ///< polarization of both colors
    double fundamental_phase = 0.0;     ///< CEP of the fundamental, radians
    std::vector<double> e_grid_ev;      ///< empty = one energy per cell at 2*omega + e_i0
    int n_theta = 91;
    double phi_slice = 0.5 * constants::pi;
    std::optional<double> theta_rad;    ///< fixed readout angle (nearest grid node)
};

/// Signed-asymmetry map over (fundamental carrier) x (second-harmonic CEP),
/// with the reporting location per cell.
struct BichromaticScan {
    std::vector<double> omega_ev; ///< row axis
    std::vector<double> phase;    ///< column axis, radians
    std::vector<double> asym;     ///< row-major signed A
    std::vector<double> e_ev;     ///< reported energy per cell
    std::vector<double> theta;    ///< reported angle per cell, radians

    std::size_t n_omega() const { return omega_ev.size(); }
    std::size_t n_phase() const { return phase.size(); }

    double at(std::size_t i, std::size_t j) const {
        if (i >= n_omega() || j >= n_phase())
            throw ArgumentError("BichromaticScan::at: index out of range");
        return asym[i * n_phase() + j];
    }
};

/// The two-pulse field of one scan cell: a fundamental at omega_ev and its
/// second harmonic at exactly twice that carrier, both at delay 0 with a
/// shared width.
inline FieldSpec bichromatic_pair(double omega_ev, double phase2, const ScanSettings& s) {
    const double sigma = constants::fwhm_fs_to_sigma_au(s.fwhm_fs);
    const double omega = constants::ev_to_au(omega_ev);
    FieldSpec spec;
    spec.pulses.emplace_back(constants::intensity_to_amplitude(s.fundamental_wcm2), omega,
                             s.fundamental_phase, 0.0, sigma, s.channel);
    spec.pulses.emplace_back(constants::intensity_to_amplitude(s.second_wcm2), 2.0 * omega,
                             phase2, 0.0, sigma, s.channel);
    return spec;
}

/// Scan the signed anisotropy over fundamental carriers (rows) and
/// second-harmonic phases (columns). Each cell computes the full observable
/// map on the configured energy grid (or the cell's own two-photon resonance
/// energy when the grid is empty) and reports the signed A at the cell's
/// largest |A| -- restricted to the fixed readout angle when one is set.
/// Ties break toward the lowest energy index, then the lowest angle index.
inline BichromaticScan scan_bichromatic(const OrbitalSet& orb, const DipoleSet& dip,
                                        const std::vector<double>& omega_ev,
                                        const std::vector<double>& phase,
                                        const ScanSettings& s = {}) {
    if (omega_ev.empty() || phase.empty())
        throw ArgumentError("scan ranges must be non-empty");
    for (double w : omega_ev)
        if (!(w > 0.0)) throw ArgumentError("scan carriers must be positive");
    if (!(s.fundamental_wcm2 >= 0.0) || !(s.second_wcm2 >= 0.0))
        throw ArgumentError("scan intensities must be >= 0");
    if (!(s.fwhm_fs > 0.0)) throw ArgumentError("scan pulse width must be > 0");
    if (s.n_theta < 2) throw ArgumentError("scan angle grid needs at least 2 nodes");
    orb.validate();

    const std::vector<double> theta_grid =
        mirror_theta_grid(static_cast<std::size_t>(s.n_theta));
    std::optional<std::size_t> it_fixed;
    if (s.theta_rad) {
        std::size_t best = 0;
        for (std::size_t it = 1; it < theta_grid.size(); ++it)
            if (std::abs(theta_grid[it] - *s.theta_rad) <
                std::abs(theta_grid[best] - *s.theta_rad))
                best = it;
        it_fixed = best;
    }

    BichromaticScan scan;
    scan.omega_ev = omega_ev;
    scan.phase = phase;
    const std::size_t cells = omega_ev.size() * phase.size();
    scan.asym.assign(cells, 0.0);
    scan.e_ev.assign(cells, 0.0);
    scan.theta.assign(cells, 0.0);

    const double e_i0_ev = orb.at(static_cast<std::size_t>(orb.i0)).energy_ev;

    for (std::size_t iw = 0; iw < omega_ev.size(); ++iw) {
        std::vector<double> e_grid = s.e_grid_ev;
        if (e_grid.empty()) e_grid = {2.0 * omega_ev[iw] + e_i0_ev};
        for (std::size_t jp = 0; jp < phase.size(); ++jp) {
            const FieldSpec spec = bichromatic_pair(omega_ev[iw], phase[jp], s);
            const PADGrid g = compute_pad(orb, dip, spec, e_grid, theta_grid, s.phi_slice);
            const std::vector<double> a = anisotropy(g);
            const std::size_t nt = g.n_theta();

            std::size_t be = 0, bt = it_fixed.value_or(0);
            double bv = -1.0;
            for (std::size_t ie = 0; ie < g.n_e(); ++ie) {
                if (it_fixed) {
                    const double v = std::abs(a[ie * nt + *it_fixed]);
                    if (v > bv) { bv = v; be = ie; }
                } else {
                    for (std::size_t it = 0; it < nt; ++it) {
                        const double v = std::abs(a[ie * nt + it]);
                        if (v > bv) { bv = v; be = ie; bt = it; }
                    }
                }
            }
            const std::size_t cell = iw * phase.size() + jp;
            scan.asym[cell] = a[be * nt + bt];
            scan.e_ev[cell] = g.e_grid[be];
            scan.theta[cell] = g.theta_grid[bt];
        }
    }
    return scan;
}

/// CSV export, row-major (one row per scan cell): carrier, phase, signed A,
/// and the cell's reporting location.
inline void scan_to_csv(std::ostream& os, const BichromaticScan& scan, bool header = true) {
    if (header) os << "omega_eV,phase_rad,asymmetry,e_eV,theta_deg\n";
    for (std::size_t i = 0; i < scan.n_omega(); ++i)
        for (std::size_t j = 0; j < scan.n_phase(); ++j) {
            const std::size_t cell = i * scan.n_phase() + j;
            os << format_g17(scan.omega_ev[i]) << ',' << format_g17(scan.phase[j]) << ','
               << format_g17(scan.asym[cell]) << ',' << format_g17(scan.e_ev[cell]) << ','
               << format_g17(constants::rad_to_deg(scan.theta[cell])) << '\n';
        }
}

} // namespace padkit
