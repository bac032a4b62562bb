#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "leedecay/errors.hpp"
#include "leedecay/model.hpp"
#include "leedecay/quadrature.hpp"

namespace leedecay {

// Sigma(m) evaluated on the upper edge m + i0. im <= 0 always; im vanishes
// outside all coupled windows.
struct SelfEnergyValue {
    double re = 0.0;
    double im = 0.0;
};

// Bound-state pole of the resolvent: real root of m - m0 - ReSigma(m) outside
// the closed continuum support, with residue weight 1/(1 - ReSigma'(m)).
struct Pole {
    double position = 0.0;
    double weight = 0.0;
};

struct SupportInterval {
    double lo = 0.0;
    double hi = 0.0;
};

namespace spectral_detail {

inline constexpr double kTwoPi = 2.0 * kPi;

// Channels with g2 = 0 are fully decoupled: they contribute nothing to the
// self-energy, the support, or the pole equation.
inline std::vector<Channel> coupled_channels(const LeeModel& model) {
    std::vector<Channel> live;
    for (const Channel& ch : model.channels)
        if (ch.g2 > 0.0) live.push_back(ch);
    return live;
}

inline std::vector<SupportInterval> merge_windows(const std::vector<Channel>& chans) {
    std::vector<SupportInterval> raw;
    for (const Channel& ch : chans) raw.push_back({ch.e_th, ch.lambda_cut});
    std::sort(raw.begin(), raw.end(),
              [](const SupportInterval& x, const SupportInterval& y) { return x.lo < y.lo; });
    std::vector<SupportInterval> merged;
    for (const SupportInterval& s : raw) {
        if (!merged.empty() && s.lo <= merged.back().hi)
            merged.back().hi = std::max(merged.back().hi, s.hi);
        else
            merged.push_back(s);
    }
    return merged;
}

inline double re_sigma(const std::vector<Channel>& chans, double m) {
    double v = 0.0;
    for (const Channel& ch : chans)
        v += ch.g2 / kTwoPi * std::log(std::abs((m - ch.e_th) / (m - ch.lambda_cut)));
    return v;
}

inline double im_sigma(const std::vector<Channel>& chans, double m) {
    double v = 0.0;
    for (const Channel& ch : chans)
        if (m >= ch.e_th && m <= ch.lambda_cut) v -= 0.5 * ch.g2;
    return v;
}

inline double re_sigma_prime(const std::vector<Channel>& chans, double m) {
    double v = 0.0;
    for (const Channel& ch : chans)
        v += ch.g2 / kTwoPi * (1.0 / (m - ch.e_th) - 1.0 / (m - ch.lambda_cut));
    return v;
}

// F(m) = m - m0 - ReSigma(m) and ReSigma'(m) evaluated at m = anchor +
// sign*delta with every edge distance formed as (anchor - edge) + sign*delta.
// This keeps delta exact when anchor is itself an edge, which linear-m
// arithmetic cannot do once delta drops below ulp(anchor).
struct OffsetEval {
    const std::vector<Channel>* chans;
    double m0;
    double anchor;
    double sign;

    double dist(double edge, double delta) const { return (anchor - edge) + sign * delta; }

    double pole_fn(double delta) const {
        double v = (anchor - m0) + sign * delta;
        for (const Channel& ch : *chans)
            v -= ch.g2 / kTwoPi *
                 (std::log(std::abs(dist(ch.e_th, delta))) -
                  std::log(std::abs(dist(ch.lambda_cut, delta))));
        return v;
    }

    double re_sigma_prime(double delta) const {
        double v = 0.0;
        for (const Channel& ch : *chans)
            v += ch.g2 / kTwoPi * (1.0 / dist(ch.e_th, delta) - 1.0 / dist(ch.lambda_cut, delta));
        return v;
    }
};

// Locates the single root of pole_fn on a geometric delta ladder descending
// from delta_max. Increasing = whether pole_fn grows with delta. Returns false
// when the sign change lies below the representability floor (the pole weight
// is then far under any tolerance) and throws when the root lies beyond
// delta_max, i.e. outside the scan range.
inline bool ladder_root(const OffsetEval& fn, double delta_max, double range, bool increasing,
                        Pole& out) {
    const double floor_delta = range * 1e-250;
    double f_hi = fn.pole_fn(delta_max);
    if ((f_hi < 0.0) != increasing && f_hi != 0.0) {
        // Root would sit beyond the scan boundary.
        throw BracketingFailure("find_poles: no sign change within scan range");
    }
    double d_hi = delta_max;
    bool found = false;
    double d_lo = 0.0;
    for (double d = 0.5 * delta_max; d > floor_delta; d *= 0.5) {
        const double f = fn.pole_fn(d);
        const bool low_side = increasing ? (f < 0.0) : (f > 0.0);
        if (low_side) {
            d_lo = d;
            found = true;
            break;
        }
        d_hi = d;
    }
    if (!found) return false; // pole hugs the edge below representability

    // Bisect in log-delta; the bracket is one ladder step (factor 2) wide.
    double u_lo = std::log(d_lo), u_hi = std::log(d_hi);
    for (int i = 0; i < 80; ++i) {
        const double u = 0.5 * (u_lo + u_hi);
        const double f = fn.pole_fn(std::exp(u));
        const bool low_side = increasing ? (f < 0.0) : (f > 0.0);
        (low_side ? u_lo : u_hi) = u;
    }
    const double delta = std::exp(0.5 * (u_lo + u_hi));
    out.position = fn.anchor + fn.sign * delta;
    out.weight = 1.0 / (1.0 - fn.re_sigma_prime(delta));
    return true;
}

} // namespace spectral_detail

// Closed-form self-energy of the box model on the upper edge:
//   Re = sum_i g2_i/(2 pi) ln|(m - e_i)/(m - L_i)|,  Im = -sum_i g2_i/2 f_i(m).
inline SelfEnergyValue self_energy(const LeeModel& model, double m) {
    const std::vector<Channel> live = spectral_detail::coupled_channels(model);
    for (const Channel& ch : live)
        if (m == ch.e_th || m == ch.lambda_cut)
            throw EvaluationAtLogSingularity("self_energy: m = " + std::to_string(m) +
                                             " sits exactly on a window edge");
    return {spectral_detail::re_sigma(live, m), spectral_detail::im_sigma(live, m)};
}

// d ReSigma / dm from the closed form; used for pole residues.
inline double re_sigma_derivative(const LeeModel& model, double m) {
    return spectral_detail::re_sigma_prime(spectral_detail::coupled_channels(model), m);
}

// All real poles of the resolvent outside the closed continuum support. One
// root lives below the support, one above, and one in every gap between merged
// windows (F is strictly increasing on each complement component). Near-edge
// roots are refined in log-offset coordinates.
inline std::vector<Pole> find_poles(const LeeModel& model) {
    validate_model(model);
    const std::vector<Channel> live = spectral_detail::coupled_channels(model);
    if (live.empty()) return {Pole{model.m0, 1.0}};

    const std::vector<SupportInterval> comps = spectral_detail::merge_windows(live);
    const double range = comps.back().hi - comps.front().lo;
    std::vector<Pole> poles;
    Pole p;

    // Below the lowest threshold: F decreases as delta grows (m moves left).
    {
        spectral_detail::OffsetEval fn{&live, model.m0, comps.front().lo, -1.0};
        if (spectral_detail::ladder_root(fn, 50.0 * range, range, /*increasing=*/false, p))
            poles.push_back(p);
    }
    // Gaps between merged windows: exactly one root each.
    for (std::size_t i = 0; i + 1 < comps.size(); ++i) {
        const double gap_lo = comps[i].hi, gap_hi = comps[i + 1].lo;
        const double width = gap_hi - gap_lo;
        const double f_mid =
            0.5 * (gap_lo + gap_hi) - model.m0 -
            spectral_detail::re_sigma(live, 0.5 * (gap_lo + gap_hi));
        if (f_mid > 0.0) {
            // Root in the lower half, anchored at the gap's left edge.
            spectral_detail::OffsetEval fn{&live, model.m0, gap_lo, +1.0};
            if (spectral_detail::ladder_root(fn, 0.5 * width, range, /*increasing=*/true, p))
                poles.push_back(p);
        } else {
            spectral_detail::OffsetEval fn{&live, model.m0, gap_hi, -1.0};
            if (spectral_detail::ladder_root(fn, 0.5 * width, range, /*increasing=*/false, p))
                poles.push_back(p);
        }
    }
    // Above the highest cutoff: F increases with delta.
    {
        spectral_detail::OffsetEval fn{&live, model.m0, comps.back().hi, +1.0};
        if (spectral_detail::ladder_root(fn, 50.0 * range, range, /*increasing=*/true, p))
            poles.push_back(p);
    }

    std::sort(poles.begin(), poles.end(),
              [](const Pole& x, const Pole& y) { return x.position < y.position; });
    return poles;
}

// Short-time scale of p(t) ~ 1 - t^2/tau_Z^2: inverse square root of the
// energy variance sum_i g2_i (L_i - e_i) / (2 pi).
inline double zeno_time(const LeeModel& model) {
    validate_model(model);
    double var = 0.0;
    for (const Channel& ch : model.channels)
        var += ch.g2 * (ch.lambda_cut - ch.e_th) / spectral_detail::kTwoPi;
    if (var <= 0.0) throw DomainError("zeno_time: needs at least one coupled channel");
    return 1.0 / std::sqrt(var);
}

struct SpectralOptions {
    QuadratureSpec quad{};
    double norm_tolerance = 1e-6;
};

// Energy distribution of the unstable state: Breit-Wigner-like continuum on
// the coupled windows plus bound-state poles. Normalized to 1 overall.
struct SpectralDensity {
    LeeModel model;
    EnergyGrid grid;
    std::vector<double> grid_m;  // sample abscissae, edge points nudged inward
    std::vector<double> values;  // d_S at grid_m
    std::vector<Pole> poles;
    std::vector<SupportInterval> support;
    std::vector<double> peaks;           // resonance positions inside the support
    std::vector<double> interior_splits; // window edges + peaks, for quadrature
    double continuum_norm = 0.0;
    double norm_residual = 0.0;

    // Continuum density; 0 outside the support and, as the inside limit, at
    // exact window edges where ReSigma diverges.
    double evaluate(double m) const {
        double im = 0.0, re = 0.0;
        for (const Channel& ch : model.channels) {
            if (!(ch.g2 > 0.0)) continue;
            if (m == ch.e_th || m == ch.lambda_cut) return 0.0;
            if (m > ch.e_th && m < ch.lambda_cut) im -= 0.5 * ch.g2;
            re += ch.g2 / spectral_detail::kTwoPi *
                  std::log(std::abs((m - ch.e_th) / (m - ch.lambda_cut)));
        }
        if (im == 0.0) return 0.0;
        const double shifted = m - model.m0 - re;
        return (1.0 / kPi) * (-im) / (shifted * shifted + im * im);
    }

    bool has_continuum() const { return !support.empty(); }
};

namespace spectral_detail {

inline std::vector<double> interior_peaks(const std::vector<Channel>& live, double m0,
                                          const std::vector<SupportInterval>& comps) {
    std::vector<double> peaks;
    auto f = [&](double m) { return m - m0 - re_sigma(live, m); };
    for (const SupportInterval& c : comps) {
        const double pad = 1e-9 * (c.hi - c.lo);
        const double lo = c.lo + pad, hi = c.hi - pad;
        const int n = 512;
        double prev_m = lo, prev_f = f(lo);
        for (int i = 1; i <= n; ++i) {
            const double m = lo + (hi - lo) * static_cast<double>(i) / n;
            const double fm = f(m);
            if (prev_f == 0.0)
                peaks.push_back(prev_m);
            else if ((prev_f > 0.0) != (fm > 0.0))
                peaks.push_back(find_root_bracketed(f, prev_m, m, 1e-13));
            prev_m = m;
            prev_f = fm;
        }
    }
    return peaks;
}

} // namespace spectral_detail

inline SpectralDensity spectral_density(const LeeModel& model, const EnergyGrid& grid,
                                        const SpectralOptions& opts = {}) {
    validate_model(model);
    grid.validate();
    opts.quad.validate();

    SpectralDensity sd;
    sd.model = model;
    sd.grid = grid;

    const std::vector<Channel> live = spectral_detail::coupled_channels(model);
    if (live.empty()) {
        // Free theory: the full weight sits in a single pole at m0.
        sd.poles = {Pole{model.m0, 1.0}};
        sd.continuum_norm = 0.0;
        sd.norm_residual = 0.0;
        return sd;
    }

    sd.support = spectral_detail::merge_windows(live);
    const double lo_edge = sd.support.front().lo;
    const double hi_edge = sd.support.back().hi;
    const double slack = 1e-9 * (hi_edge - lo_edge);
    if (grid.lo > lo_edge + slack || grid.hi < hi_edge - slack)
        throw DomainError("spectral_density: grid must span the union of channel windows");

    sd.poles = find_poles(model);
    sd.peaks = spectral_detail::interior_peaks(live, model.m0, sd.support);

    std::vector<double> edges;
    for (const Channel& ch : live) {
        edges.push_back(ch.e_th);
        edges.push_back(ch.lambda_cut);
    }
    sd.interior_splits = edges;
    sd.interior_splits.insert(sd.interior_splits.end(), sd.peaks.begin(), sd.peaks.end());
    std::sort(sd.interior_splits.begin(), sd.interior_splits.end());
    sd.interior_splits.erase(std::unique(sd.interior_splits.begin(), sd.interior_splits.end()),
                             sd.interior_splits.end());

    // Sample the grid; exact edge hits are nudged inward by 1e-12 of the
    // component width so no sample sits on a log singularity.
    sd.grid_m.resize(grid.n);
    sd.values.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        double m = grid.point(i);
        for (const SupportInterval& c : sd.support) {
            const double nudge = 1e-12 * (c.hi - c.lo);
            if (m == c.lo) m += nudge;
            if (m == c.hi) m -= nudge;
        }
        for (double e : edges)
            if (m == e) m += 1e-12 * (hi_edge - lo_edge);
        sd.grid_m[i] = m;
        sd.values[i] = sd.evaluate(m);
    }

    double cont = 0.0;
    for (const SupportInterval& c : sd.support)
        cont += integrate_adaptive([&](double m) { return sd.evaluate(m); }, c.lo, c.hi,
                                   opts.quad, sd.interior_splits)
                    .value;
    sd.continuum_norm = cont;

    double pole_weight = 0.0;
    for (const Pole& pl : sd.poles) pole_weight += pl.weight;
    sd.norm_residual = std::abs(cont + pole_weight - 1.0);
    if (sd.norm_residual > opts.norm_tolerance)
        throw NormalizationFailure("spectral_density: |norm - 1| = " +
                                   std::to_string(sd.norm_residual) + " exceeds tolerance " +
                                   std::to_string(opts.norm_tolerance));
    return sd;
}

} // namespace leedecay
