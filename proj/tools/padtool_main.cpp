// padtool: command-line front end for the photoionization anisotropy toolkit.
//
// Subcommands:
//   pad       energy/angle photoelectron map for one field and one dipole set
//   scan      two-color asymmetry map over (fundamental carrier) x (relative phase)
//   optimize  derivative-free pulse-parameter search maximizing the anisotropy
//   pulse     field diagnostics: power spectrum, spectrogram, helicity trace
//   validate  cross-check the fast tables against the brute-force reference
//
// Every run writes a manifest.json into the output directory recording the
// command line, the resolved inputs, and the files produced.  Interface units
// are eV / fs / W/cm^2 / degrees (phases in radians); internals are atomic.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 data validation
// error, 4 numerical failure.

#include "padkit/optimizer.hpp"
#include "padkit/svg.hpp"
#include "padkit/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace padkit;
namespace C = padkit::constants;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> g_argv; // echoed into every manifest

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Shared option bundles
// ---------------------------------------------------------------------------

struct CommonArgs {
    std::string out_dir = ".";
    unsigned threads = 0; // 0 = one worker per hardware thread
};

void add_common(CLI::App* sub, CommonArgs& c) {
    sub->add_option("--out", c.out_dir, "output directory (created if absent)")
        ->capture_default_str();
    sub->add_option("--threads", c.threads, "worker thread cap; 0 = hardware concurrency")
        ->capture_default_str();
}

std::ofstream open_output(const CommonArgs& c, const std::string& name) {
    fs::create_directories(c.out_dir);
    std::ofstream f(fs::path(c.out_dir) / name);
    if (!f) throw ArgumentError("cannot create output file '" + name + "' in " + c.out_dir);
    return f;
}

void write_manifest(const CommonArgs& c, const std::string& command, const json& inputs,
                    std::vector<std::string> outputs) {
    outputs.emplace_back("manifest.json");
    json m;
    m["tool"] = "padtool";
    m["version"] = kVersion;
    m["command"] = command;
    m["argv"] = g_argv;
    m["threads"] = thread_limit();
    m["units"] = {{"energy", "eV"},
                  {"time", "fs"},
                  {"intensity", "W/cm^2"},
                  {"angle", "degrees in CSV columns"},
                  {"phase", "radians"},
                  {"internal", "Hartree atomic units"}};
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    std::ofstream f = open_output(c, "manifest.json");
    f << m.dump(2) << '\n';
}

struct DipoleArgs {
    std::string path;
    std::string preset;
    int l_max = 2;
    int n_virtual = 2;
    std::uint64_t seed = 20240817;
};

void add_dipole_source(CLI::App* sub, DipoleArgs& d) {
    auto* file = sub->add_option("--dipoles", d.path, "dipole table file (text format)");
    auto* preset =
        sub->add_option("--preset-dipoles", d.preset,
                        "built-in dipole set: 'hydrogenic' (synthetic, reproducible) or "
                        "'chfclbr' (bundled demonstration molecule)")
            ->check(CLI::IsMember({"hydrogenic", "chfclbr"}));
    file->excludes(preset);
    sub->add_option("--l-max", d.l_max, "partial-wave cutoff for preset dipole sets")
        ->check(CLI::Range(1, 2))
        ->capture_default_str();
    sub->add_option("--n-virtual", d.n_virtual,
                    "number of virtual orbitals for --preset-dipoles hydrogenic")
        ->check(CLI::Range(1, 8))
        ->capture_default_str();
    sub->add_option("--dipole-seed", d.seed,
                    "seed for --preset-dipoles hydrogenic matrix elements")
        ->capture_default_str();
}

std::pair<OrbitalSet, DipoleSet> load_dipole_source(const DipoleArgs& d, json& inputs) {
    if (!d.path.empty()) {
        inputs["dipoles"] = {{"file", d.path}};
        return load_dipoles(d.path);
    }
    if (d.preset == "hydrogenic") {
        const std::vector<double> k_grid = linspace(0.5, 30.0, 119);
        inputs["dipoles"] = {{"preset", "hydrogenic"},
                             {"l_max", d.l_max},
                             {"n_virtual", d.n_virtual},
                             {"seed", d.seed},
                             {"k_grid_ev", {k_grid.front(), k_grid.back(), k_grid.size()}}};
        return synth_hydrogenic(d.l_max, k_grid, d.n_virtual, d.seed);
    }
    if (d.preset == "chfclbr") {
        inputs["dipoles"] = {{"preset", "chfclbr"}, {"l_max", d.l_max}};
        return preset_chfclbr(d.l_max);
    }
    throw ArgumentError("a dipole source is required: --dipoles FILE or --preset-dipoles NAME");
}

struct FieldArgs {
    std::string path;
    std::string preset;
};

void add_field_source(CLI::App* sub, FieldArgs& f) {
    auto* file = sub->add_option("--field", f.path, "field specification file (JSON)");
    auto* preset = sub->add_option("--preset", f.preset,
                                   "built-in field: bichromatic, five_carrier, three_color");
    file->excludes(preset);
}

FieldSpec load_field_source(const FieldArgs& f, json& inputs) {
    FieldSpec spec;
    if (!f.path.empty()) {
        spec = load_field_spec(f.path);
        inputs["field_file"] = f.path;
    } else if (!f.preset.empty()) {
        spec = preset_field(f.preset);
        inputs["field_preset"] = f.preset;
    } else {
        throw ArgumentError("a field source is required: --field FILE or --preset NAME");
    }
    inputs["field_resolved"] = field_to_json(spec);
    return spec;
}

// ---------------------------------------------------------------------------
// Angle convention: CSV angle columns and the summary line can be labeled
// either from the polarization axis (theta, the internal convention) or from
// the in-slice propagation axis (theta - 90 degrees, a pure relabeling).
// ---------------------------------------------------------------------------

struct AngleArgs {
    std::string convention = "pol-axis";
};

void add_angle_convention(CLI::App* sub, AngleArgs& a) {
    sub->add_option("--angle-convention", a.convention,
                    "angle zero for reported angles: pol-axis (polarization axis) or "
                    "prop-axis (in-slice propagation axis; relabels by -90 degrees)")
        ->check(CLI::IsMember({"pol-axis", "prop-axis"}))
        ->capture_default_str();
}

double angle_out_deg(const AngleArgs& a, double theta_rad) {
    const double deg = C::rad_to_deg(theta_rad);
    return a.convention == "prop-axis" ? deg - 90.0 : deg;
}

// ---------------------------------------------------------------------------
// Energy-grid helper shared by pad and optimize
// ---------------------------------------------------------------------------

std::vector<double> build_energy_grid(double e_single, double e_min, double e_max, int steps,
                                      const char* cmd) {
    if (!std::isnan(e_single)) return {e_single};
    if (std::isnan(e_min))
        throw ArgumentError(std::string(cmd) + " requires --e EV or --e-min/--e-max");
    if (std::isnan(e_max)) e_max = e_min;
    if (steps < 1) throw ArgumentError("--e-steps must be >= 1");
    if (steps == 1) return {e_min};
    if (!(e_max > e_min))
        throw ArgumentError("--e-max must exceed --e-min when --e-steps > 1");
    return linspace(e_min, e_max, static_cast<std::size_t>(steps));
}

void write_pad_outputs(const CommonArgs& common, const AngleArgs& angle, const PADGrid& g,
                       bool svg, std::vector<std::string>& outputs) {
    const std::vector<double> a = anisotropy(g);
    const std::size_t nt = g.n_theta();
    {
        std::ofstream f = open_output(common, "pad.csv");
        f << "e_eV,theta_deg,intensity,anisotropy\n";
        for (std::size_t ie = 0; ie < g.n_e(); ++ie)
            for (std::size_t it = 0; it < nt; ++it)
                f << format_g17(g.e_grid[ie]) << ','
                  << format_g17(angle_out_deg(angle, g.theta_grid[it])) << ','
                  << format_g17(g.intensity[ie * nt + it]) << ','
                  << format_g17(a[ie * nt + it]) << '\n';
        outputs.emplace_back("pad.csv");
    }
    {
        std::ofstream f = open_output(common, "anisotropy.csv");
        f << "e_eV,theta_deg,anisotropy\n";
        for (std::size_t ie = 0; ie < g.n_e(); ++ie)
            for (std::size_t it = 0; it < nt; ++it)
                f << format_g17(g.e_grid[ie]) << ','
                  << format_g17(angle_out_deg(angle, g.theta_grid[it])) << ','
                  << format_g17(a[ie * nt + it]) << '\n';
        outputs.emplace_back("anisotropy.csv");
    }
    if (svg) {
        std::ofstream fi = open_output(common, "pad.svg");
        pad_intensity_svg(fi, g);
        outputs.emplace_back("pad.svg");
        std::ofstream fa = open_output(common, "anisotropy.svg");
        pad_anisotropy_svg(fa, g);
        outputs.emplace_back("anisotropy.svg");
    }
}

void print_summary(const AngleArgs& angle, const PADGrid& g) {
    for (const std::string& w : g.warnings) std::cerr << "warning: " << w << '\n';
    const ObjectiveResult best = objective(g);
    std::cout << "best |A| = " << fmt6(best.value) << " at e=" << fmt6(best.e_ev)
              << " eV, theta=" << fmt6(angle_out_deg(angle, best.theta)) << " deg\n";
}

// ---------------------------------------------------------------------------
// pad
// ---------------------------------------------------------------------------

struct PadArgs {
    CommonArgs common;
    DipoleArgs dip;
    FieldArgs field;
    AngleArgs angle;
    double e_single = kUnset;
    double e_min = kUnset, e_max = kUnset;
    int e_steps = 25;
    int theta_steps = 91;
    double phi_slice_deg = 90.0;
    bool svg = false;
};

void run_pad(const PadArgs& a) {
    set_thread_limit(a.common.threads);
    json inputs;
    auto [orb, dip] = load_dipole_source(a.dip, inputs);
    const FieldSpec spec = load_field_source(a.field, inputs);
    const std::vector<double> e_grid =
        build_energy_grid(a.e_single, a.e_min, a.e_max, a.e_steps, "pad");
    const std::vector<double> theta_grid =
        mirror_theta_grid(static_cast<std::size_t>(a.theta_steps));

    const PADGrid g = compute_pad(orb, dip, spec, e_grid, theta_grid,
                                  C::deg_to_rad(a.phi_slice_deg));

    inputs["e_grid_ev"] = {e_grid.front(), e_grid.back(), e_grid.size()};
    inputs["theta_steps"] = a.theta_steps;
    inputs["phi_slice_deg"] = a.phi_slice_deg;
    inputs["angle_convention"] = a.angle.convention;

    std::vector<std::string> outputs;
    write_pad_outputs(a.common, a.angle, g, a.svg, outputs);
    write_manifest(a.common, "pad", inputs, outputs);
    print_summary(a.angle, g);
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

struct ScanArgs {
    CommonArgs common;
    DipoleArgs dip;
    double omega_min = kUnset, omega_max = kUnset;
    int omega_steps = 9;
    double phase_min = 0.0, phase_max = C::two_pi;
    int phase_steps = 9;
    double i_fund = 1e11, i_second = 2e11;
    double fwhm_fs = 23.0;
    double fund_phase = 0.0;
    std::string channel = "lin_z";
    int theta_steps = 91;
    double phi_slice_deg = 90.0;
    double theta_deg = kUnset; // fixed readout angle
    double e_single = kUnset;
    double e_min = kUnset, e_max = kUnset;
    int e_steps = 1;
    bool svg = false;
};

std::vector<double> build_axis(double lo, double hi, int steps, const char* what) {
    if (steps < 1) throw ArgumentError(std::string(what) + " steps must be >= 1");
    if (steps == 1) return {lo};
    if (!(hi > lo))
        throw ArgumentError(std::string(what) + " range needs max > min when steps > 1");
    return linspace(lo, hi, static_cast<std::size_t>(steps));
}

void run_scan(const ScanArgs& a) {
    set_thread_limit(a.common.threads);
    json inputs;
    auto [orb, dip] = load_dipole_source(a.dip, inputs);
    if (std::isnan(a.omega_min) || std::isnan(a.omega_max))
        throw ArgumentError("scan requires --omega-min and --omega-max");
    const std::vector<double> omega =
        build_axis(a.omega_min, a.omega_max, a.omega_steps, "--omega");
    const std::vector<double> phase =
        build_axis(a.phase_min, a.phase_max, a.phase_steps, "--phase");

    ScanSettings s;
    s.fundamental_wcm2 = a.i_fund;
    s.second_wcm2 = a.i_second;
    s.fwhm_fs = a.fwhm_fs;
    s.channel = channel_from_string(a.channel);
    s.fundamental_phase = a.fund_phase;
    s.n_theta = a.theta_steps;
    s.phi_slice = C::deg_to_rad(a.phi_slice_deg);
    if (!std::isnan(a.theta_deg)) s.theta_rad = C::deg_to_rad(a.theta_deg);
    if (!std::isnan(a.e_single) || !std::isnan(a.e_min))
        s.e_grid_ev = build_energy_grid(a.e_single, a.e_min, a.e_max, a.e_steps, "scan");

    const BichromaticScan scan = scan_bichromatic(orb, dip, omega, phase, s);

    inputs["omega_ev"] = {omega.front(), omega.back(), omega.size()};
    inputs["phase_rad"] = {phase.front(), phase.back(), phase.size()};
    inputs["fundamental_wcm2"] = a.i_fund;
    inputs["second_harmonic_wcm2"] = a.i_second;
    inputs["fwhm_fs"] = a.fwhm_fs;
    inputs["channel"] = a.channel;
    inputs["fundamental_phase_rad"] = a.fund_phase;
    inputs["theta_steps"] = a.theta_steps;
    inputs["phi_slice_deg"] = a.phi_slice_deg;
    if (!std::isnan(a.theta_deg)) inputs["theta_readout_deg"] = a.theta_deg;
    inputs["e_grid_ev"] =
        s.e_grid_ev.empty()
            ? json("auto: per-cell two-photon resonance")
            : json{s.e_grid_ev.front(), s.e_grid_ev.back(), s.e_grid_ev.size()};

    std::vector<std::string> outputs;
    {
        std::ofstream f = open_output(a.common, "scan.csv");
        scan_to_csv(f, scan);
        outputs.emplace_back("scan.csv");
    }
    if (a.svg) {
        std::ofstream f = open_output(a.common, "scan.svg");
        scan_svg(f, scan);
        outputs.emplace_back("scan.svg");
    }
    write_manifest(a.common, "scan", inputs, outputs);

    // Report the strongest cell of the map.
    std::size_t bi = 0, bj = 0;
    double bv = -1.0;
    for (std::size_t i = 0; i < scan.n_omega(); ++i)
        for (std::size_t j = 0; j < scan.n_phase(); ++j)
            if (std::abs(scan.at(i, j)) > bv) {
                bv = std::abs(scan.at(i, j));
                bi = i;
                bj = j;
            }
    std::cout << "peak |A| = " << fmt6(bv) << " at omega=" << fmt6(scan.omega_ev[bi])
              << " eV, phase=" << fmt6(scan.phase[bj]) << " rad\n";
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

struct OptimizeArgs {
    CommonArgs common;
    DipoleArgs dip;
    FieldArgs field;
    AngleArgs angle;
    std::vector<std::string> free_specs;
    int budget = 60;
    std::uint64_t seed = 1;
    int restarts = 1;
    double cap_wcm2 = 1e12;
    double e_single = kUnset;
    double e_min = kUnset, e_max = kUnset;
    int e_steps = 1;
    int theta_steps = 31;
    double phi_slice_deg = 90.0;
    bool no_polish = false;
    bool svg = false;
};

double parse_number(const std::string& s, const std::string& whole) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ArgumentError("malformed number '" + s + "' in --free '" + whole + "'");
    }
    if (pos != s.size())
        throw ArgumentError("malformed number '" + s + "' in --free '" + whole + "'");
    return v;
}

// Grammar: INDEX.PARAM=LO:HI with PARAM in {amplitude, omega, phase, delay, fwhm}.
// Units: amplitude in a.u., omega in eV, phase in radians, delay/fwhm in fs.
void apply_free_spec(const std::string& s, std::vector<PulseFreedom>& freedom) {
    const auto dot = s.find('.');
    const auto eq = s.find('=');
    const auto colon = s.find(':', eq == std::string::npos ? 0 : eq);
    if (dot == std::string::npos || eq == std::string::npos || colon == std::string::npos ||
        !(dot < eq && eq < colon))
        throw ArgumentError("malformed --free '" + s + "'; expected INDEX.PARAM=LO:HI");

    std::size_t idx = 0;
    try {
        std::size_t pos = 0;
        const std::string head = s.substr(0, dot);
        idx = std::stoul(head, &pos);
        if (pos != head.size()) throw std::invalid_argument(head);
    } catch (const std::exception&) {
        throw ArgumentError("malformed pulse index in --free '" + s + "'");
    }
    if (idx >= freedom.size())
        throw ArgumentError("--free '" + s + "' addresses pulse " + std::to_string(idx) +
                            " but the template has " + std::to_string(freedom.size()) +
                            " pulses");

    const std::string name = s.substr(dot + 1, eq - dot - 1);
    const ParamBound b{parse_number(s.substr(eq + 1, colon - eq - 1), s),
                       parse_number(s.substr(colon + 1), s)};
    PulseFreedom& f = freedom[idx];
    if (name == "amplitude")
        f.amplitude = b;
    else if (name == "omega")
        f.omega_ev = b;
    else if (name == "phase")
        f.phase = b;
    else if (name == "delay")
        f.delay_fs = b;
    else if (name == "fwhm")
        f.fwhm_fs = b;
    else
        throw ArgumentError("unknown parameter '" + name + "' in --free '" + s +
                            "'; expected amplitude, omega, phase, delay, or fwhm");
}

void run_optimize(const OptimizeArgs& a) {
    set_thread_limit(a.common.threads);
    json inputs;
    auto [orb, dip] = load_dipole_source(a.dip, inputs);

    OptProblem p;
    p.tmpl = load_field_source(a.field, inputs);
    if (!a.free_specs.empty()) {
        p.freedom.assign(p.tmpl.pulses.size(), PulseFreedom{});
        for (const std::string& s : a.free_specs) apply_free_spec(s, p.freedom);
    }
    p.objective.e_grid_ev =
        build_energy_grid(a.e_single, a.e_min, a.e_max, a.e_steps, "optimize");
    p.objective.n_theta = a.theta_steps;
    p.objective.phi_slice = C::deg_to_rad(a.phi_slice_deg);
    p.budget = a.budget;
    p.seed = a.seed;
    p.amplitude_cap_au = C::intensity_to_amplitude(a.cap_wcm2);
    p.nelder_mead_polish = !a.no_polish;

    OptResult result;
    int best_index = 0;
    if (a.restarts > 1) {
        MultiStartResult mr = optimize_restarts(p, orb, dip, a.restarts);
        result = std::move(mr.best);
        best_index = mr.best_index;
    } else {
        result = optimize(p, orb, dip);
    }

    inputs["free"] = a.free_specs;
    inputs["budget"] = a.budget;
    inputs["seed"] = a.seed;
    inputs["restarts"] = a.restarts;
    inputs["amplitude_cap_wcm2"] = a.cap_wcm2;
    inputs["amplitude_cap_au"] = p.amplitude_cap_au;
    inputs["e_grid_ev"] = {p.objective.e_grid_ev.front(), p.objective.e_grid_ev.back(),
                           p.objective.e_grid_ev.size()};
    inputs["theta_steps"] = a.theta_steps;
    inputs["phi_slice_deg"] = a.phi_slice_deg;
    inputs["angle_convention"] = a.angle.convention;
    inputs["nelder_mead_polish"] = p.nelder_mead_polish;

    std::vector<std::string> outputs;
    fs::create_directories(a.common.out_dir);
    save_field_spec((fs::path(a.common.out_dir) / "best_field.json").string(), result.best);
    outputs.emplace_back("best_field.json");
    {
        std::ofstream f = open_output(a.common, "trace.csv");
        trace_to_csv(f, result.trace);
        outputs.emplace_back("trace.csv");
    }

    // Re-evaluate the winner on the objective grids for the CSV/SVG outputs.
    const PADGrid g =
        compute_pad(orb, dip, result.best, p.objective.e_grid_ev,
                    mirror_theta_grid(static_cast<std::size_t>(p.objective.n_theta)),
                    p.objective.phi_slice);
    write_pad_outputs(a.common, a.angle, g, a.svg, outputs);

    json summary;
    summary["best_value"] = result.trace.best_value;
    summary["evaluations"] = result.trace.evals.size();
    summary["best_restart"] = best_index;
    summary["best_params"] = json::object();
    for (std::size_t i = 0; i < result.trace.param_names.size(); ++i)
        summary["best_params"][result.trace.param_names[i]] = result.trace.best_params[i];
    inputs["result"] = summary;

    write_manifest(a.common, "optimize", inputs, outputs);
    std::cout << "evaluations: " << result.trace.evals.size() << " (budget " << a.budget
              << ")\n";
    print_summary(a.angle, g);
}

// ---------------------------------------------------------------------------
// pulse
// ---------------------------------------------------------------------------

struct PulseArgs {
    CommonArgs common;
    FieldArgs field;
    double spec_min_ev = 1.0, spec_max_ev = 30.0;
    int spec_steps = 241;
    int t_steps = 121;
    int tf_omega_steps = 61;
};

void run_pulse(const PulseArgs& a) {
    set_thread_limit(a.common.threads);
    json inputs;
    const FieldSpec spec = load_field_source(a.field, inputs);
    if (a.spec_steps < 2 || a.tf_omega_steps < 2 || a.t_steps < 2)
        throw ArgumentError("pulse diagnostics need at least 2 grid points per axis");
    if (!(a.spec_max_ev > a.spec_min_ev) || !(a.spec_min_ev >= 0.0))
        throw ArgumentError("spectrum range needs 0 <= --spec-min < --spec-max");

    // Time window covering every envelope out to four standard deviations.
    double t_lo = spec.pulses.front().tau, t_hi = t_lo;
    for (const SubPulse& p : spec.pulses) {
        t_lo = std::min(t_lo, p.tau - 4.0 * p.sigma);
        t_hi = std::max(t_hi, p.tau + 4.0 * p.sigma);
    }
    const std::vector<double> t_grid =
        linspace(t_lo, t_hi, static_cast<std::size_t>(a.t_steps));

    std::vector<std::string> outputs;

    // Power spectrum.
    {
        std::vector<double> w_ev =
            linspace(a.spec_min_ev, a.spec_max_ev, static_cast<std::size_t>(a.spec_steps));
        std::vector<double> w_au(w_ev.size());
        for (std::size_t i = 0; i < w_ev.size(); ++i) w_au[i] = C::ev_to_au(w_ev[i]);
        const std::vector<SpectrumPoint> sp = power_spectrum(spec, w_au);
        std::ofstream f = open_output(a.common, "spectrum.csv");
        f << "omega_eV,intensity,phase_rad\n";
        for (const SpectrumPoint& pt : sp)
            f << format_g17(C::au_to_ev(pt.omega)) << ',' << format_g17(pt.intensity) << ','
              << format_g17(pt.phase) << '\n';
        outputs.emplace_back("spectrum.csv");

        std::size_t peak = 0;
        for (std::size_t i = 1; i < sp.size(); ++i)
            if (sp[i].intensity > sp[peak].intensity) peak = i;
        std::cout << "spectrum peak at " << fmt6(C::au_to_ev(sp[peak].omega)) << " eV\n";
    }

    // Gabor spectrogram of the dominant component.
    {
        std::vector<double> w_ev = linspace(a.spec_min_ev, a.spec_max_ev,
                                            static_cast<std::size_t>(a.tf_omega_steps));
        std::vector<double> w_au(w_ev.size());
        for (std::size_t i = 0; i < w_ev.size(); ++i) w_au[i] = C::ev_to_au(w_ev[i]);
        const auto map = time_frequency_map(spec, t_grid, w_au);
        std::ofstream f = open_output(a.common, "tfmap.csv");
        f << "t_fs,omega_eV,magnitude\n";
        for (std::size_t it = 0; it < t_grid.size(); ++it)
            for (std::size_t jw = 0; jw < w_ev.size(); ++jw)
                f << format_g17(C::au_to_fs(t_grid[it])) << ',' << format_g17(w_ev[jw]) << ','
                  << format_g17(map[it][jw]) << '\n';
        outputs.emplace_back("tfmap.csv");
    }

    // Helicity trace per distinct carrier.
    {
        std::vector<double> carriers;
        for (const SubPulse& p : spec.pulses) {
            bool known = false;
            for (double w : carriers)
                if (std::abs(w - p.omega) <= 1e-9) known = true;
            if (!known) carriers.push_back(p.omega);
        }
        std::sort(carriers.begin(), carriers.end());

        std::ofstream f = open_output(a.common, "helicity.csv");
        f << "t_fs";
        for (double w : carriers) f << ",zeta_" << fmt6(C::au_to_ev(w)) << "eV";
        f << '\n';
        for (double t : t_grid) {
            f << format_g17(C::au_to_fs(t));
            for (double w : carriers) {
                const std::optional<double> z = helicity(spec, w, t);
                f << ',';
                if (z) f << format_g17(*z);
            }
            f << '\n';
        }
        outputs.emplace_back("helicity.csv");

        json jc = json::array();
        for (double w : carriers) jc.push_back(C::au_to_ev(w));
        inputs["carriers_ev"] = jc;
    }

    inputs["spectrum_ev"] = {a.spec_min_ev, a.spec_max_ev, a.spec_steps};
    inputs["t_steps"] = a.t_steps;
    inputs["t_window_fs"] = {C::au_to_fs(t_lo), C::au_to_fs(t_hi)};
    inputs["tf_omega_steps"] = a.tf_omega_steps;
    write_manifest(a.common, "pulse", inputs, outputs);
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

struct ValidateArgs {
    CommonArgs common;
    std::string dipole_path; // when set: check this table instead of synthetic runs
    int l_max = 2;
    int n_virtual = 3;
    int instances = 5;
    std::uint64_t seed = 20240819;
    double e_ev = 12.245;
    double tol = 1e-6;
    int theta_steps = 13;
};

void run_validate(const ValidateArgs& a) {
    set_thread_limit(a.common.threads);
    if (!(a.tol > 0.0)) throw ArgumentError("--tol must be positive");

    json inputs;
    ConsistencyReport report;
    if (!a.dipole_path.empty()) {
        auto [orb, dip] = load_dipoles(a.dipole_path);
        const std::vector<double>& kg = dip.k_grid_ev();
        if (a.e_ev < kg.front() || a.e_ev > kg.back())
            throw ArgumentError("--e " + fmt6(a.e_ev) + " eV is outside the tabulated range [" +
                                fmt6(kg.front()) + ", " + fmt6(kg.back()) + "] eV");
        const double e_k = C::ev_to_au(a.e_ev);
        // One- and two-photon resonant two-color probe with mixed polarization.
        const double w1 = e_k - orb.energy(orb.i0);
        FieldSpec spec;
        spec.pulses.emplace_back(0.02, w1, 0.3, 0.0, 26.0, Channel::LIN_Z);
        spec.pulses.emplace_back(0.015, 0.5 * w1, 1.1, 3.0, 26.0, Channel::CRP);
        report = check_tables_once(orb, dip, spec, e_k, a.theta_steps);
        inputs["dipoles"] = {{"file", a.dipole_path}};
        inputs["probe_field"] = field_to_json(spec);
    } else {
        RandomCheckOptions opts;
        opts.instances = a.instances;
        opts.l_max_cap = a.l_max;
        opts.n_virtual_cap = a.n_virtual;
        opts.seed = a.seed;
        opts.e_k_ev = a.e_ev;
        opts.n_theta = a.theta_steps;
        report = check_tables_randomized(opts);
        inputs["instances"] = a.instances;
        inputs["l_max_cap"] = a.l_max;
        inputs["n_virtual_cap"] = a.n_virtual;
        inputs["seed"] = a.seed;
    }
    inputs["e_ev"] = a.e_ev;
    inputs["tolerance"] = a.tol;
    inputs["theta_steps"] = a.theta_steps;
    inputs["result"] = {{"max_dev_one", report.max_dev_one},
                        {"max_dev_two", report.max_dev_two},
                        {"max_dev_interference", report.max_dev_interference},
                        {"instances", report.instances},
                        {"worst_instance", report.worst_instance},
                        {"passed", report.passes(a.tol)}};
    write_manifest(a.common, "validate", inputs, {});

    char line[128];
    std::snprintf(line, sizeof line, "one-photon    max rel deviation = %.3e",
                  report.max_dev_one);
    std::cout << line << '\n';
    std::snprintf(line, sizeof line, "two-photon    max rel deviation = %.3e",
                  report.max_dev_two);
    std::cout << line << '\n';
    std::snprintf(line, sizeof line, "interference  max rel deviation = %.3e",
                  report.max_dev_interference);
    std::cout << line << '\n';
    std::cout << "instances checked: " << report.instances << '\n';
    if (!report.passes(a.tol))
        throw ValidationError("validation failed: max relative deviation " +
                              fmt6(report.max_dev()) + " exceeds tolerance " + fmt6(a.tol));
    std::cout << "validation PASSED (tolerance " << fmt6(a.tol) << ")\n";
}

// ---------------------------------------------------------------------------
// wiring
// ---------------------------------------------------------------------------

void add_energy_grid(CLI::App* sub, double& e_single, double& e_min, double& e_max,
                     int& e_steps, int steps_default) {
    sub->add_option("--e", e_single, "single photoelectron energy, eV");
    sub->add_option("--e-min", e_min, "energy grid start, eV");
    sub->add_option("--e-max", e_max, "energy grid end, eV");
    e_steps = steps_default;
    sub->add_option("--e-steps", e_steps, "energy grid size")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    g_argv.assign(argv, argv + argc);
    CLI::App app{"orientation-averaged photoelectron angular distributions from tabulated "
                 "dipole matrix elements and shaped multi-color pulses"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    PadArgs pad_args;
    auto* sub_pad = app.add_subcommand("pad", "energy/angle photoelectron map");
    add_common(sub_pad, pad_args.common);
    add_dipole_source(sub_pad, pad_args.dip);
    add_field_source(sub_pad, pad_args.field);
    add_angle_convention(sub_pad, pad_args.angle);
    add_energy_grid(sub_pad, pad_args.e_single, pad_args.e_min, pad_args.e_max,
                    pad_args.e_steps, 25);
    sub_pad->add_option("--theta-steps", pad_args.theta_steps, "polar grid size")
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
    sub_pad->add_option("--phi-slice", pad_args.phi_slice_deg, "azimuth of the slice, degrees")
        ->capture_default_str();
    sub_pad->add_flag("--svg", pad_args.svg, "also render SVG heat maps");
    sub_pad->callback([&] { run_pad(pad_args); });

    ScanArgs scan_args;
    auto* sub_scan = app.add_subcommand(
        "scan", "two-color asymmetry over carrier and relative phase");
    add_common(sub_scan, scan_args.common);
    add_dipole_source(sub_scan, scan_args.dip);
    sub_scan->add_option("--omega-min", scan_args.omega_min, "fundamental carrier start, eV");
    sub_scan->add_option("--omega-max", scan_args.omega_max, "fundamental carrier end, eV");
    sub_scan->add_option("--omega-steps", scan_args.omega_steps, "carrier grid size")
        ->capture_default_str();
    sub_scan->add_option("--phase-min", scan_args.phase_min, "second-harmonic phase start, rad")
        ->capture_default_str();
    sub_scan->add_option("--phase-max", scan_args.phase_max, "second-harmonic phase end, rad")
        ->capture_default_str();
    sub_scan->add_option("--phase-steps", scan_args.phase_steps, "phase grid size")
        ->capture_default_str();
    sub_scan->add_option("--i-fund", scan_args.i_fund, "fundamental peak intensity, W/cm^2")
        ->capture_default_str();
    sub_scan->add_option("--i-second", scan_args.i_second,
                         "second-harmonic peak intensity, W/cm^2")
        ->capture_default_str();
    sub_scan->add_option("--fwhm", scan_args.fwhm_fs, "shared intensity FWHM, fs")
        ->capture_default_str();
    sub_scan->add_option("--fund-phase", scan_args.fund_phase, "fundamental CEP, rad")
        ->capture_default_str();
    sub_scan->add_option("--channel", scan_args.channel, "polarization: lin_z, crp, or clp")
        ->capture_default_str();
    sub_scan->add_option("--theta-steps", scan_args.theta_steps, "polar grid size")
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
    sub_scan->add_option("--phi-slice", scan_args.phi_slice_deg,
                         "azimuth of the slice, degrees")
        ->capture_default_str();
    sub_scan->add_option("--theta", scan_args.theta_deg,
                         "fixed readout angle, degrees (nearest grid node)");
    add_energy_grid(sub_scan, scan_args.e_single, scan_args.e_min, scan_args.e_max,
                    scan_args.e_steps, 1);
    sub_scan->add_flag("--svg", scan_args.svg, "also render an SVG heat map");
    sub_scan->callback([&] { run_scan(scan_args); });

    OptimizeArgs opt_args;
    auto* sub_opt = app.add_subcommand(
        "optimize", "derivative-free pulse search maximizing the anisotropy");
    add_common(sub_opt, opt_args.common);
    add_dipole_source(sub_opt, opt_args.dip);
    add_field_source(sub_opt, opt_args.field);
    add_angle_convention(sub_opt, opt_args.angle);
    sub_opt->add_option("--free", opt_args.free_specs,
                        "free parameter as INDEX.PARAM=LO:HI; PARAM is amplitude (a.u.), "
                        "omega (eV), phase (rad), delay (fs), or fwhm (fs); repeatable");
    sub_opt->add_option("--budget", opt_args.budget, "objective evaluation budget")
        ->check(CLI::Range(1, 1000000))
        ->capture_default_str();
    sub_opt->add_option("--seed", opt_args.seed, "seed for restart start points")
        ->capture_default_str();
    sub_opt->add_option("--restarts", opt_args.restarts, "independent restarts")
        ->check(CLI::Range(1, 1000))
        ->capture_default_str();
    sub_opt->add_option("--cap-intensity", opt_args.cap_wcm2,
                        "total-amplitude cap expressed as a single-pulse intensity, W/cm^2")
        ->capture_default_str();
    add_energy_grid(sub_opt, opt_args.e_single, opt_args.e_min, opt_args.e_max,
                    opt_args.e_steps, 1);
    sub_opt->add_option("--theta-steps", opt_args.theta_steps, "polar grid size")
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
    sub_opt->add_option("--phi-slice", opt_args.phi_slice_deg,
                        "azimuth of the slice, degrees")
        ->capture_default_str();
    sub_opt->add_flag("--no-polish", opt_args.no_polish,
                      "skip the simplex polish after the coordinate sweeps");
    sub_opt->add_flag("--svg", opt_args.svg, "also render SVG heat maps of the winner");
    sub_opt->callback([&] { run_optimize(opt_args); });

    PulseArgs pulse_args;
    auto* sub_pulse = app.add_subcommand(
        "pulse", "field diagnostics: spectrum, spectrogram, helicity");
    add_common(sub_pulse, pulse_args.common);
    add_field_source(sub_pulse, pulse_args.field);
    sub_pulse->add_option("--spec-min", pulse_args.spec_min_ev, "spectrum start, eV")
        ->capture_default_str();
    sub_pulse->add_option("--spec-max", pulse_args.spec_max_ev, "spectrum end, eV")
        ->capture_default_str();
    sub_pulse->add_option("--spec-steps", pulse_args.spec_steps, "spectrum grid size")
        ->capture_default_str();
    sub_pulse->add_option("--t-steps", pulse_args.t_steps, "time grid size")
        ->capture_default_str();
    sub_pulse->add_option("--tf-omega-steps", pulse_args.tf_omega_steps,
                          "spectrogram frequency grid size")
        ->capture_default_str();
    sub_pulse->callback([&] { run_pulse(pulse_args); });

    ValidateArgs val_args;
    auto* sub_val = app.add_subcommand(
        "validate", "cross-check fast tables against the brute-force reference");
    add_common(sub_val, val_args.common);
    sub_val->add_option("--dipoles", val_args.dipole_path,
                        "check this dipole table instead of synthetic instances");
    sub_val->add_option("--l-max", val_args.l_max, "partial-wave cap for synthetic instances")
        ->check(CLI::Range(1, 2))
        ->capture_default_str();
    sub_val->add_option("--n-virtual", val_args.n_virtual,
                        "virtual-orbital cap for synthetic instances")
        ->check(CLI::Range(1, 8))
        ->capture_default_str();
    sub_val->add_option("--instances", val_args.instances, "number of synthetic instances")
        ->check(CLI::Range(1, 1000))
        ->capture_default_str();
    sub_val->add_option("--seed", val_args.seed, "master seed for synthetic instances")
        ->capture_default_str();
    sub_val->add_option("--e", val_args.e_ev, "photoelectron energy, eV")
        ->capture_default_str();
    sub_val->add_option("--tol", val_args.tol, "pass/fail tolerance on relative deviation")
        ->capture_default_str();
    sub_val->add_option("--theta-steps", val_args.theta_steps, "polar grid size")
        ->check(CLI::Range(2, 1000))
        ->capture_default_str();
    sub_val->callback([&] { run_validate(val_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "padtool: error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "padtool: unexpected error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
