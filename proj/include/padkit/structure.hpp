#pragma once

// Orbital level schemes and molecular-frame dipole matrix elements.
//
// Data model
//   OrbitalSet : labeled orbital energies with occupied flags and one marked
//                ionized orbital i0.
//   DipoleSet  : bound-bound spherical dipole components  <p| r_mu |q>  and
//                bound-continuum components <k l m (-)| r_mu |p> tabulated on
//                an ascending photoelectron energy grid. Absent entries are
//                exact zeros. Bound-bound entries satisfy the hermiticity
//                relation  bb(q,p,mu) = (-1)^mu conj(bb(p,q,-mu)).
//
// Units: energies are stored both in eV (the serialized form, kept verbatim
// so that save/load round-trips are byte-identical) and in atomic units
// (derived once from the eV value; all computation uses the a.u. fields).
//
// File format (UTF-8, line oriented, whitespace separated):
//   #orbital <label> <energy_eV> <occ|virt> [i0]
//   #kgrid_eV <v1> <v2> ...
//   bb <p> <q> <mu> <re> <im>
//   bc <p> <k_index> <l> <m> <mu> <re> <im>
// Orbital indices are 0-based in declaration order; '#' starts a comment
// unless the line is one of the directives above; numbers are decimal
// doubles rendered with 17 significant digits for lossless round trips.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "padkit/constants.hpp"
#include "padkit/errors.hpp"
#include "padkit/util.hpp"

namespace padkit {

struct Orbital {
    std::string label;
    double energy_ev;
    double energy; // atomic units, derived from energy_ev
    bool occupied;
};

struct OrbitalSet {
    std::vector<Orbital> orbitals;
    int i0 = -1; // index of the ionized orbital

    std::size_t size() const { return orbitals.size(); }

    const Orbital& at(std::size_t p) const {
        if (p >= orbitals.size()) throw ArgumentError("orbital index out of range");
        return orbitals[p];
    }

    double energy(std::size_t p) const { return at(p).energy; }

    std::vector<int> occupied_indices() const {
        std::vector<int> idx;
        for (std::size_t p = 0; p < orbitals.size(); ++p)
            if (orbitals[p].occupied) idx.push_back(static_cast<int>(p));
        return idx;
    }

    void validate() const {
        if (orbitals.empty()) throw ValidationError("orbital set is empty");
        if (i0 < 0 || static_cast<std::size_t>(i0) >= orbitals.size())
            throw ValidationError("no orbital is marked as the ionized orbital (i0)");
        if (!orbitals[static_cast<std::size_t>(i0)].occupied)
            throw ValidationError("the ionized orbital must be occupied");
        for (const Orbital& o : orbitals)
            if (!std::isfinite(o.energy))
                throw ValidationError("orbital '" + o.label + "' has a non-finite energy");
    }
};

/// Index of the (l, m) pair in the dense partial-wave ordering
/// (0,0), (1,-1), (1,0), (1,+1), (2,-2), ...
inline int lm_index(int l, int m) {
    if (l < 0 || std::abs(m) > l) throw ArgumentError("invalid partial wave (l, m)");
    return l * l + l + m;
}

class DipoleSet {
  public:
    DipoleSet(int n_orbitals, std::vector<double> k_grid_ev, int l_max)
        : n_orb_(n_orbitals), l_max_(l_max), k_grid_ev_(std::move(k_grid_ev)) {
        if (n_orb_ <= 0) throw ValidationError("dipole set needs at least one orbital");
        if (l_max_ < 0) throw ValidationError("maximum partial wave must be >= 0");
        if (k_grid_ev_.empty()) throw ValidationError("photoelectron energy grid is empty");
        for (std::size_t i = 1; i < k_grid_ev_.size(); ++i)
            if (!(k_grid_ev_[i] > k_grid_ev_[i - 1]))
                throw ValidationError("photoelectron energy grid must be strictly increasing");
        k_grid_.resize(k_grid_ev_.size());
        for (std::size_t i = 0; i < k_grid_ev_.size(); ++i)
            k_grid_[i] = constants::ev_to_au(k_grid_ev_[i]);
        bb_.assign(static_cast<std::size_t>(n_orb_) * n_orb_ * 3, {0.0, 0.0});
        const std::size_t nlm = static_cast<std::size_t>(l_max_ + 1) * (l_max_ + 1);
        bc_.assign(static_cast<std::size_t>(n_orb_) * k_grid_.size() * nlm * 3, {0.0, 0.0});
    }

    int n_orbitals() const { return n_orb_; }
    int l_max() const { return l_max_; }
    const std::vector<double>& k_grid() const { return k_grid_; }       // a.u.
    const std::vector<double>& k_grid_ev() const { return k_grid_ev_; } // serialized form

    std::complex<double> bb(int p, int q, int mu) const { return bb_[bb_index(p, q, mu)]; }
    void set_bb(int p, int q, int mu, std::complex<double> v) { bb_[bb_index(p, q, mu)] = v; }

    std::complex<double> bc(int p, int k_idx, int l, int m, int mu) const {
        return bc_[bc_index(p, k_idx, l, m, mu)];
    }
    void set_bc(int p, int k_idx, int l, int m, int mu, std::complex<double> v) {
        bc_[bc_index(p, k_idx, l, m, mu)] = v;
    }

    const std::vector<std::complex<double>>& bb_raw() const { return bb_; }
    const std::vector<std::complex<double>>& bc_raw() const { return bc_; }

    /// Verify bb(q,p,mu) = (-1)^mu conj(bb(p,q,-mu)) for every stored pair.
    void validate_hermiticity(double tol = 1e-10) const {
        std::ostringstream offenders;
        int count = 0;
        for (int p = 0; p < n_orb_; ++p)
            for (int q = p; q < n_orb_; ++q)
                for (int mu = -1; mu <= 1; ++mu) {
                    const std::complex<double> lhs = bb(q, p, mu);
                    const std::complex<double> rhs =
                        (mu == 0 ? 1.0 : -1.0) * std::conj(bb(p, q, -mu));
                    if (std::abs(lhs - rhs) > tol) {
                        if (count < 8)
                            offenders << " (p=" << p << ", q=" << q << ", mu=" << mu << ")";
                        ++count;
                    }
                }
        if (count > 0)
            throw ValidationError("bound-bound dipoles break hermiticity at " +
                                  std::to_string(count) + " entries:" + offenders.str());
    }

  private:
    std::size_t bb_index(int p, int q, int mu) const {
        if (p < 0 || p >= n_orb_ || q < 0 || q >= n_orb_ || mu < -1 || mu > 1)
            throw ArgumentError("bound-bound dipole index out of range");
        return (static_cast<std::size_t>(p) * n_orb_ + q) * 3 + (mu + 1);
    }
    std::size_t bc_index(int p, int k_idx, int l, int m, int mu) const {
        if (p < 0 || p >= n_orb_ || k_idx < 0 ||
            static_cast<std::size_t>(k_idx) >= k_grid_.size() || l < 0 || l > l_max_ ||
            std::abs(m) > l || mu < -1 || mu > 1)
            throw ArgumentError("bound-continuum dipole index out of range");
        const std::size_t nlm = static_cast<std::size_t>(l_max_ + 1) * (l_max_ + 1);
        return ((static_cast<std::size_t>(p) * k_grid_.size() + k_idx) * nlm +
                static_cast<std::size_t>(lm_index(l, m))) *
                   3 +
               (mu + 1);
    }

    int n_orb_, l_max_;
    std::vector<double> k_grid_ev_, k_grid_;
    std::vector<std::complex<double>> bb_, bc_;
};

/// Linear interpolation of a bound-continuum component at photoelectron
/// energy e_k (atomic units). Exact on grid nodes; refuses to extrapolate.
inline std::complex<double> interpolate_continuum(const DipoleSet& d, int p, int l, int m,
                                                  int mu, double e_k) {
    const std::vector<double>& g = d.k_grid();
    if (!(e_k >= g.front()) || !(e_k <= g.back()))
        throw ArgumentError("photoelectron energy outside the tabulated dipole grid");
    auto it = std::upper_bound(g.begin(), g.end(), e_k);
    std::size_t hi = static_cast<std::size_t>(it - g.begin());
    if (hi == 0) hi = 1;
    if (hi == g.size()) hi = g.size() - 1;
    const std::size_t lo = hi - 1;
    const double t = (e_k - g[lo]) / (g[hi] - g[lo]);
    const auto a = d.bc(p, static_cast<int>(lo), l, m, mu);
    const auto b = d.bc(p, static_cast<int>(hi), l, m, mu);
    return (1.0 - t) * a + t * b;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline void save_dipoles(const std::string& path, const OrbitalSet& orb, const DipoleSet& dip,
                         const std::string& comment = "") {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot write dipole file: " + path);
    if (!comment.empty()) {
        std::istringstream lines(comment);
        std::string line;
        while (std::getline(lines, line)) out << "# " << line << '\n';
    }
    for (std::size_t p = 0; p < orb.size(); ++p) {
        const Orbital& o = orb.orbitals[p];
        out << "#orbital " << o.label << ' ' << format_g17(o.energy_ev) << ' '
            << (o.occupied ? "occ" : "virt");
        if (static_cast<int>(p) == orb.i0) out << " i0";
        out << '\n';
    }
    out << "#kgrid_eV";
    for (double v : dip.k_grid_ev()) out << ' ' << format_g17(v);
    out << '\n';
    for (int p = 0; p < dip.n_orbitals(); ++p)
        for (int q = 0; q < dip.n_orbitals(); ++q)
            for (int mu = -1; mu <= 1; ++mu) {
                const auto v = dip.bb(p, q, mu);
                if (v == std::complex<double>(0.0, 0.0)) continue;
                out << "bb " << p << ' ' << q << ' ' << mu << ' ' << format_g17(v.real())
                    << ' ' << format_g17(v.imag()) << '\n';
            }
    for (int p = 0; p < dip.n_orbitals(); ++p)
        for (std::size_t k = 0; k < dip.k_grid().size(); ++k)
            for (int l = 0; l <= dip.l_max(); ++l)
                for (int m = -l; m <= l; ++m)
                    for (int mu = -1; mu <= 1; ++mu) {
                        const auto v = dip.bc(p, static_cast<int>(k), l, m, mu);
                        if (v == std::complex<double>(0.0, 0.0)) continue;
                        out << "bc " << p << ' ' << k << ' ' << l << ' ' << m << ' ' << mu
                            << ' ' << format_g17(v.real()) << ' ' << format_g17(v.imag())
                            << '\n';
                    }
    if (!out) throw ArgumentError("failed while writing dipole file: " + path);
}

namespace detail {

struct RawBB {
    int p, q, mu;
    double re, im;
    int line;
};
struct RawBC {
    int p, k, l, m, mu;
    double re, im;
    int line;
};

inline double parse_double(const std::string& tok, int line) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw ValidationError("dipole file line " + std::to_string(line) +
                              ": cannot parse number '" + tok + "'");
    }
    if (pos != tok.size())
        throw ValidationError("dipole file line " + std::to_string(line) +
                              ": trailing characters in number '" + tok + "'");
    return v;
}

inline long parse_int(const std::string& tok, int line) {
    std::size_t pos = 0;
    long v;
    try {
        v = std::stol(tok, &pos);
    } catch (const std::exception&) {
        throw ValidationError("dipole file line " + std::to_string(line) +
                              ": cannot parse integer '" + tok + "'");
    }
    if (pos != tok.size())
        throw ValidationError("dipole file line " + std::to_string(line) +
                              ": trailing characters in integer '" + tok + "'");
    return v;
}

} // namespace detail

inline std::pair<OrbitalSet, DipoleSet> load_dipoles(const std::string& path) {
    std::ifstream in(path);
    // A dipole table is the run's data input, so an unreadable path is a
    // data error (exit 3), unlike missing configuration (exit 2).
    if (!in) throw ValidationError("cannot open dipole file: " + path);

    OrbitalSet orb;
    std::vector<double> kgrid_ev;
    std::vector<detail::RawBB> raw_bb;
    std::vector<detail::RawBC> raw_bc;
    bool have_grid = false;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string tok;
        if (!(ss >> tok)) continue; // blank line
        auto fail = [&](const std::string& what) -> ValidationError {
            return ValidationError("dipole file line " + std::to_string(line_no) + ": " + what);
        };
        if (tok == "#orbital") {
            Orbital o;
            std::string occ;
            std::string energy_tok;
            if (!(ss >> o.label >> energy_tok >> occ))
                throw fail("expected '#orbital <label> <energy_eV> <occ|virt> [i0]'");
            o.energy_ev = detail::parse_double(energy_tok, line_no);
            o.energy = constants::ev_to_au(o.energy_ev);
            if (occ == "occ")
                o.occupied = true;
            else if (occ == "virt")
                o.occupied = false;
            else
                throw fail("occupation must be 'occ' or 'virt', got '" + occ + "'");
            std::string marker;
            if (ss >> marker) {
                if (marker != "i0") throw fail("unexpected trailing token '" + marker + "'");
                if (orb.i0 >= 0) throw fail("a second orbital is marked i0");
                orb.i0 = static_cast<int>(orb.orbitals.size());
            }
            orb.orbitals.push_back(std::move(o));
        } else if (tok == "#kgrid_eV") {
            if (have_grid) throw fail("duplicate #kgrid_eV line");
            std::string num;
            while (ss >> num) kgrid_ev.push_back(detail::parse_double(num, line_no));
            if (kgrid_ev.empty()) throw fail("#kgrid_eV line lists no energies");
            have_grid = true;
        } else if (tok == "bb") {
            detail::RawBB r;
            std::string t1, t2, t3, t4, t5;
            if (!(ss >> t1 >> t2 >> t3 >> t4 >> t5))
                throw fail("expected 'bb <p> <q> <mu> <re> <im>'");
            r.p = static_cast<int>(detail::parse_int(t1, line_no));
            r.q = static_cast<int>(detail::parse_int(t2, line_no));
            r.mu = static_cast<int>(detail::parse_int(t3, line_no));
            r.re = detail::parse_double(t4, line_no);
            r.im = detail::parse_double(t5, line_no);
            r.line = line_no;
            std::string extra;
            if (ss >> extra) throw fail("unexpected trailing token '" + extra + "'");
            raw_bb.push_back(r);
        } else if (tok == "bc") {
            detail::RawBC r;
            std::string t[7];
            if (!(ss >> t[0] >> t[1] >> t[2] >> t[3] >> t[4] >> t[5] >> t[6]))
                throw fail("expected 'bc <p> <k_index> <l> <m> <mu> <re> <im>'");
            r.p = static_cast<int>(detail::parse_int(t[0], line_no));
            r.k = static_cast<int>(detail::parse_int(t[1], line_no));
            r.l = static_cast<int>(detail::parse_int(t[2], line_no));
            r.m = static_cast<int>(detail::parse_int(t[3], line_no));
            r.mu = static_cast<int>(detail::parse_int(t[4], line_no));
            r.re = detail::parse_double(t[5], line_no);
            r.im = detail::parse_double(t[6], line_no);
            r.line = line_no;
            std::string extra;
            if (ss >> extra) throw fail("unexpected trailing token '" + extra + "'");
            raw_bc.push_back(r);
        } else if (tok[0] == '#') {
            continue; // comment
        } else {
            throw fail("unrecognized record '" + tok + "'");
        }
    }

    if (orb.orbitals.empty()) throw ValidationError("dipole file declares no orbitals");
    if (!have_grid) throw ValidationError("dipole file has no #kgrid_eV line");
    try {
        orb.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("dipole file: ") + e.what());
    }

    int l_max = 0;
    for (const auto& r : raw_bc) l_max = std::max(l_max, r.l);

    DipoleSet dip(static_cast<int>(orb.size()), kgrid_ev, l_max); // validates the grid

    const int n = dip.n_orbitals();
    std::vector<char> explicit_bb(static_cast<std::size_t>(n) * n * 3, 0);
    auto flat = [n](int p, int q, int mu) {
        return (static_cast<std::size_t>(p) * n + q) * 3 + (mu + 1);
    };
    for (const auto& r : raw_bb) {
        if (r.p < 0 || r.p >= n || r.q < 0 || r.q >= n || r.mu < -1 || r.mu > 1)
            throw ValidationError("dipole file line " + std::to_string(r.line) +
                                  ": bb indices out of range");
        if (explicit_bb[flat(r.p, r.q, r.mu)])
            throw ValidationError("dipole file line " + std::to_string(r.line) +
                                  ": duplicate bb entry");
        explicit_bb[flat(r.p, r.q, r.mu)] = 1;
        dip.set_bb(r.p, r.q, r.mu, {r.re, r.im});
    }
    for (const auto& r : raw_bc) {
        if (r.p < 0 || r.p >= n || r.k < 0 ||
            static_cast<std::size_t>(r.k) >= dip.k_grid().size() || std::abs(r.m) > r.l ||
            r.mu < -1 || r.mu > 1)
            throw ValidationError("dipole file line " + std::to_string(r.line) +
                                  ": bc indices out of range");
        dip.set_bc(r.p, r.k, r.l, r.m, r.mu, {r.re, r.im});
    }

    // Hermiticity: check explicit pairs against each other (tolerance 1e-10)
    // and autofill the partner of every one-sided entry.
    std::ostringstream offenders;
    int breaches = 0;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int mu = -1; mu <= 1; ++mu) {
                if (!explicit_bb[flat(p, q, mu)]) continue;
                const std::complex<double> v = dip.bb(p, q, mu);
                const std::complex<double> partner =
                    (mu == 0 ? 1.0 : -1.0) * std::conj(v); // value bb(q,p,-mu) must take
                if (explicit_bb[flat(q, p, -mu)]) {
                    if (std::abs(dip.bb(q, p, -mu) - partner) > 1e-10) {
                        if (breaches < 8)
                            offenders << " (p=" << p << ", q=" << q << ", mu=" << mu << ")";
                        ++breaches;
                    }
                } else {
                    dip.set_bb(q, p, -mu, partner);
                    explicit_bb[flat(q, p, -mu)] = 1;
                }
            }
    if (breaches > 0)
        throw ValidationError("dipole file: bound-bound entries break hermiticity at " +
                              std::to_string(breaches) + " pairs:" + offenders.str());

    return {std::move(orb), std::move(dip)};
}

// ---------------------------------------------------------------------------
// Synthetic data generator
// ---------------------------------------------------------------------------

namespace detail {

/// SplitMix64: a tiny, fully specified generator used to derive independent
/// coefficient streams from (seed, structural key) pairs.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double unit_double(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-52 - 1.0; // [-1, 1)
}

inline std::uint64_t mix_key(std::uint64_t seed, std::initializer_list<int> parts) {
    std::uint64_t s = seed ^ 0x243f6a8885a308d3ULL;
    for (int v : parts) {
        s ^= static_cast<std::uint64_t>(static_cast<std::int64_t>(v)) + 0x9e3779b97f4a7c15ULL +
             (s << 6) + (s >> 2);
        (void)splitmix64(s);
    }
    return s;
}

/// Fill an allocated DipoleSet with deterministic smooth synthetic
/// amplitudes (see synth_hydrogenic for the contract).
inline void fill_synthetic_dipoles(DipoleSet& dip, std::uint64_t seed, bool m_symmetric) {
    const int n = dip.n_orbitals();
    const int l_max = dip.l_max();
    const double k0 = dip.k_grid().front();
    const double k1 = dip.k_grid().back();
    const double span = (k1 > k0) ? (k1 - k0) : 1.0;

    // Bound-continuum: quadratic-in-energy complex amplitudes. In the
    // m-symmetric mode, only canonical (m, mu) pairs draw fresh coefficients.
    auto canonical = [](int m, int mu) { return m > 0 || (m == 0 && mu >= 0); };
    for (int p = 0; p < n; ++p)
        for (int l = 0; l <= l_max; ++l)
            for (int m = -l; m <= l; ++m)
                for (int mu = -1; mu <= 1; ++mu) {
                    int km = m, kmu = mu;
                    double sign = 1.0;
                    if (m_symmetric && !canonical(m, mu)) {
                        km = -m;
                        kmu = -mu;
                        sign = ((m + mu) % 2 == 0) ? 1.0 : -1.0;
                    }
                    std::uint64_t s = detail::mix_key(seed, {1, p, l, km, kmu});
                    std::complex<double> c[3];
                    for (auto& ck : c)
                        ck = {detail::unit_double(s), detail::unit_double(s)};
                    const double damp = 1.0 / (1.0 + l);
                    for (std::size_t k = 0; k < dip.k_grid().size(); ++k) {
                        const double x = (dip.k_grid()[k] - k0) / span;
                        dip.set_bc(p, static_cast<int>(k), l, m, mu,
                                   sign * damp * (c[0] + c[1] * x + c[2] * (x * x)));
                    }
                }

    // Bound-bound: free entries drawn for p < q (and the diagonal), partners
    // filled by hermiticity; the m-symmetric mode adds the mu reflection.
    for (int p = 0; p < n; ++p) {
        std::uint64_t s = detail::mix_key(seed, {2, p, p});
        // Diagonal: mu = 0 must be real; mu = -1 follows from mu = +1.
        dip.set_bb(p, p, 0, {detail::unit_double(s), 0.0});
        std::complex<double> d1{detail::unit_double(s), detail::unit_double(s)};
        if (m_symmetric) d1 = {d1.real(), 0.0}; // reflection forces a real value
        dip.set_bb(p, p, +1, d1);
        dip.set_bb(p, p, -1, -std::conj(d1));
        for (int q = p + 1; q < n; ++q) {
            std::uint64_t sq = detail::mix_key(seed, {2, p, q});
            std::complex<double> v[3]; // mu = -1, 0, +1
            for (auto& vk : v) vk = {detail::unit_double(sq), detail::unit_double(sq)};
            if (m_symmetric) v[0] = -v[2];
            for (int mu = -1; mu <= 1; ++mu) {
                dip.set_bb(p, q, mu, v[mu + 1]);
                dip.set_bb(q, p, -mu, (mu == 0 ? 1.0 : -1.0) * std::conj(v[mu + 1]));
            }
        }
    }

    dip.validate_hermiticity();
}

} // namespace detail

/// Synthetic hydrogen-like test system: one core orbital, one valence
/// orbital (the ionized one i0), and n_virtual higher levels. Bound-continuum
/// dipoles are smooth quadratic polynomials of the normalized photoelectron
/// energy with complex coefficients drawn deterministically from the seed;
/// every (l, m, mu) component gets independent phases by default, so no
/// accidental symmetry survives orientation averaging. With m_symmetric =
/// true the components instead obey
///     bc(l,-m,-mu) = (-1)^(m+mu) bc(l,m,mu),
///     bb(p,q,-mu)  = (-1)^mu     bb(p,q,mu),
/// a surrogate for a non-chiral target in which circular-field odd-L
/// anisotropy cancels after orientation averaging.
inline std::pair<OrbitalSet, DipoleSet>
synth_hydrogenic(int l_max, const std::vector<double>& k_grid_ev, int n_virtual,
                 std::uint64_t seed = 20240817, bool m_symmetric = false) {
    if (l_max < 1) throw ArgumentError("synthetic generator needs l_max >= 1");
    if (n_virtual < 1) throw ArgumentError("synthetic generator needs n_virtual >= 1");

    OrbitalSet orb;
    auto level = [](std::string label, double e_au, bool occ) {
        const double e_ev = constants::au_to_ev(e_au);
        return Orbital{std::move(label), e_ev, constants::ev_to_au(e_ev), occ};
    };
    orb.orbitals.push_back(level("core", -0.9, true));
    orb.orbitals.push_back(level("homo", -0.45, true));
    orb.i0 = 1;
    for (int v = 0; v < n_virtual; ++v)
        orb.orbitals.push_back(level("v" + std::to_string(v + 1), -0.25 + 0.05 * v, false));
    orb.validate();

    DipoleSet dip(static_cast<int>(orb.size()), k_grid_ev, l_max);
    detail::fill_synthetic_dipoles(dip, seed, m_symmetric);
    return {std::move(orb), std::move(dip)};
}

/// Level scheme with the halomethane-like energies used throughout the docs
/// (HOMO -11.878 eV, LUMO -4.803 eV, LUMO+1 -0.974 eV, LUMO+2 -0.8136 eV).
/// The dipole amplitudes attached to it are SYNTHETIC surrogates from the
/// deterministic generator - placeholders standing in for ab initio data, so
/// only level arithmetic (resonance positions, pathway energies) is
/// physically meaningful.
inline std::pair<OrbitalSet, DipoleSet> preset_chfclbr(int l_max = 2) {
    OrbitalSet levels;
    levels.orbitals = {{"HOMO", -11.878, constants::ev_to_au(-11.878), true},
                       {"LUMO", -4.803, constants::ev_to_au(-4.803), false},
                       {"LUMO+1", -0.974, constants::ev_to_au(-0.974), false},
                       {"LUMO+2", -0.8136, constants::ev_to_au(-0.8136), false}};
    levels.i0 = 0;
    levels.validate();
    DipoleSet dip(static_cast<int>(levels.size()), linspace(0.5, 22.0, 87), l_max);
    detail::fill_synthetic_dipoles(dip, 424242, false);
    return {std::move(levels), std::move(dip)};
}

} // namespace padkit
