#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "leedecay/errors.hpp"

namespace leedecay {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Tolerances and budgets for the adaptive engines. max_subdivisions bounds the
// bisection depth of any single panel; panel_phase_budget bounds the phase
// advance of the pre-split panels handed to the oscillatory integrator.
struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 60;
    double panel_phase_budget = kPi / 4.0;
    std::size_t max_phase_panels = 500000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw DomainError("QuadratureSpec: tolerances must be > 0");
        if (max_subdivisions < 1)
            throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
        if (!(panel_phase_budget > 0.0) || panel_phase_budget > kPi)
            throw DomainError("QuadratureSpec: panel_phase_budget must be in (0, pi]");
    }

    QuadratureSpec tightened(double factor) const {
        QuadratureSpec s = *this;
        s.rel_tol *= factor;
        s.abs_tol *= factor;
        return s;
    }
};

template <class V>
struct IntegralResult {
    V value{};
    double error = 0.0;
};

namespace quad_detail {

// Gauss-Kronrod 7-15 abscissae/weights on [-1,1] (QUADPACK dqk15 constants).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Panel {
    double a = 0.0, b = 0.0;
    V value{};
    double err = 0.0;
    int depth = 0;
    bool dead = false;
};

template <class V, class F>
void eval_gk15(F& f, Panel<V>& p) {
    const double half = 0.5 * (p.b - p.a);
    const double mid = 0.5 * (p.a + p.b);
    const V fc = f(mid);
    V sum_k = kWgk[7] * fc;
    V sum_g = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const V fp = f(mid + dx);
        const V fm = f(mid - dx);
        sum_k += kWgk[i] * (fp + fm);
        if (i % 2 == 1) sum_g += kWg[i / 2] * (fp + fm);
    }
    p.value = sum_k * half;
    p.err = std::abs((sum_k - sum_g) * half);
}

// Neumaier-compensated sum; works for double and complex<double>.
template <class V>
struct CompensatedSum {
    V sum{};
    V comp{};
    void add(const V& x) {
        const V t = sum + x;
        if constexpr (std::is_same_v<V, double>) {
            comp += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
        } else {
            comp += (std::norm(sum) >= std::norm(x)) ? (sum - t) + x : (x - t) + sum;
        }
        sum = t;
    }
    V total() const { return sum + comp; }
};

template <class V, class F>
IntegralResult<V> adaptive_core(F&& f, const std::vector<double>& boundaries,
                                const QuadratureSpec& spec) {
    spec.validate();
    std::vector<Panel<V>> panels;
    panels.reserve(boundaries.size() * 2);
    for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
        if (!(boundaries[i] < boundaries[i + 1])) continue;
        Panel<V> p;
        p.a = boundaries[i];
        p.b = boundaries[i + 1];
        eval_gk15(f, p);
        panels.push_back(p);
    }
    if (panels.empty()) return {V{}, 0.0};

    using Entry = std::pair<double, std::size_t>; // (err, panel index)
    std::priority_queue<Entry> worst;
    V total{};
    double err_total = 0.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
        total += panels[i].value;
        err_total += panels[i].err;
        worst.emplace(panels[i].err, i);
    }

    constexpr std::size_t kMaxPanels = 2000000;
    while (true) {
        const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
        if (err_total <= target) break;
        if (worst.empty())
            throw NonConvergence("integrate: error " + std::to_string(err_total) +
                                 " above target with no refinable panel left");
        auto [key, idx] = worst.top();
        worst.pop();
        if (panels[idx].dead || panels[idx].err != key) continue; // stale entry
        Panel<V>& parent = panels[idx];
        const double mid = 0.5 * (parent.a + parent.b);
        if (parent.depth >= spec.max_subdivisions || mid <= parent.a || mid >= parent.b)
            throw NonConvergence("integrate: tolerance not met after max subdivisions (error " +
                                 std::to_string(err_total) + ", target " + std::to_string(target) + ")");
        if (panels.size() + 2 > kMaxPanels)
            throw NonConvergence("integrate: panel budget exhausted");

        Panel<V> left{parent.a, mid, V{}, 0.0, parent.depth + 1, false};
        Panel<V> right{mid, parent.b, V{}, 0.0, parent.depth + 1, false};
        eval_gk15(f, left);
        eval_gk15(f, right);
        total += left.value + right.value - parent.value;
        err_total += left.err + right.err - parent.err;
        parent.dead = true;
        panels.push_back(left);
        worst.emplace(left.err, panels.size() - 1);
        panels.push_back(right);
        worst.emplace(right.err, panels.size() - 1);
    }

    CompensatedSum<V> val;
    CompensatedSum<double> err;
    for (const Panel<V>& p : panels) {
        if (p.dead) continue;
        val.add(p.value);
        err.add(p.err);
    }
    return {val.total(), err.total()};
}

inline std::vector<double> make_boundaries(double a, double b, const std::vector<double>& splits) {
    std::vector<double> bs;
    bs.push_back(a);
    for (double s : splits)
        if (s > a && s < b) bs.push_back(s);
    bs.push_back(b);
    std::sort(bs.begin(), bs.end());
    bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
    return bs;
}

} // namespace quad_detail

// Adaptive Gauss-Kronrod integration of f over [a,b]. Optional interior split
// points mark known kinks/discontinuities/peaks; endpoints are never evaluated,
// so integrable endpoint singularities are handled by bisection alone.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec = {},
                        const std::vector<double>& splits = {})
    -> IntegralResult<std::invoke_result_t<F&, double>> {
    using V = std::invoke_result_t<F&, double>;
    if (!(a < b)) throw DomainError("integrate_adaptive: need a < b");
    return quad_detail::adaptive_core<V>(f, quad_detail::make_boundaries(a, b, splits), spec);
}

// Panel boundaries such that |phi| advances at most spec.panel_phase_budget per
// panel. phi must be monotone on each sub-interval between the given splits.
template <class Phi>
std::vector<double> split_by_phase(Phi&& phi, double a, double b, const QuadratureSpec& spec,
                                   const std::vector<double>& splits = {}) {
    if (!(a < b)) throw DomainError("split_by_phase: need a < b");
    spec.validate();
    const std::vector<double> outer = quad_detail::make_boundaries(a, b, splits);
    std::vector<double> bounds;
    bounds.push_back(a);
    std::vector<std::pair<double, double>> stack;
    for (std::size_t i = 0; i + 1 < outer.size(); ++i) {
        stack.emplace_back(outer[i], outer[i + 1]);
        while (!stack.empty()) {
            auto [x, y] = stack.back();
            stack.pop_back();
            const double advance = std::abs(phi(y) - phi(x));
            const double mid = 0.5 * (x + y);
            if (!(advance > spec.panel_phase_budget) || mid <= x || mid >= y) {
                bounds.push_back(y);
                continue;
            }
            if (bounds.size() + stack.size() > spec.max_phase_panels)
                throw PhaseBudgetOverflow("split_by_phase: panel count exceeds " +
                                          std::to_string(spec.max_phase_panels));
            stack.emplace_back(mid, y);
            stack.emplace_back(x, mid);
        }
    }
    return bounds;
}

// Integrates an arbitrary (possibly complex) integrand whose oscillation rate
// is bounded by the rate of phi: panels are pre-sized by phase advance, then
// refined adaptively.
template <class F, class Phi>
auto integrate_with_phase_hint(F&& f, Phi&& phi, double a, double b,
                               const QuadratureSpec& spec = {},
                               const std::vector<double>& splits = {})
    -> IntegralResult<std::invoke_result_t<F&, double>> {
    using V = std::invoke_result_t<F&, double>;
    return quad_detail::adaptive_core<V>(f, split_by_phase(phi, a, b, spec, splits), spec);
}

// Oscillatory integral of g(m) * exp(-i phi(m)) over [a,b]. phi must be
// monotone differentiable on each panel after the declared splits.
template <class G, class Phi>
IntegralResult<std::complex<double>> integrate_oscillatory(G&& g, Phi&& phi, double a, double b,
                                                           const QuadratureSpec& spec = {},
                                                           const std::vector<double>& splits = {}) {
    auto f = [&](double m) -> std::complex<double> {
        return std::complex<double>(g(m)) * std::exp(std::complex<double>(0.0, -phi(m)));
    };
    return integrate_with_phase_hint(f, phi, a, b, spec, splits);
}

// Cauchy principal value of f over [a,b] with a simple pole at c: symmetric
// excision around c, Richardson-extrapolated in the excision radius
// (I(eps) = PV - c1*eps - c3*eps^3 - ..., so halving eps gains odd orders).
template <class F>
IntegralResult<double> principal_value(F&& f, double c, double a, double b,
                                       const QuadratureSpec& spec = {}) {
    if (!(a < c && c < b)) throw DomainError("principal_value: need a < c < b");
    spec.validate();
    const double radius = std::min(c - a, b - c);
    const QuadratureSpec side = spec.tightened(0.05);

    double outer = 0.0;
    if (a < c - radius) outer += integrate_adaptive(f, a, c - radius, side).value;
    if (c + radius < b) outer += integrate_adaptive(f, c + radius, b, side).value;

    constexpr int kMaxLevels = 14;
    std::vector<std::vector<double>> table;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int k = 0; k < kMaxLevels; ++k) {
        const double eps = radius * std::ldexp(1.0, -(k + 1));
        const double lo = integrate_adaptive(f, c - radius, c - eps, side).value;
        const double hi = integrate_adaptive(f, c + eps, c + radius, side).value;
        table.emplace_back();
        table[k].push_back(lo + hi);
        for (int j = 1; j <= k; ++j) {
            const double factor = std::ldexp(1.0, 2 * j - 1) - 1.0; // 2^(2j-1) - 1
            table[k].push_back(table[k][j - 1] +
                               (table[k][j - 1] - table[k - 1][j - 1]) / factor);
        }
        const double best = table[k][k];
        if (k >= 1) {
            const double diff = std::abs(best - prev);
            if (diff <= std::max(spec.abs_tol, spec.rel_tol * std::abs(best)))
                return {outer + best, diff};
        }
        prev = table[k][k];
    }
    throw NonConvergence("principal_value: Richardson table did not settle");
}

// Brent root bracketing: f(a) and f(b) must straddle zero.
template <class F>
double find_root_bracketed(F&& f, double a, double b, double rel_tol = 1e-12) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw NoSignChange("find_root_bracketed: f(" + std::to_string(a) + ") and f(" +
                           std::to_string(b) + ") have the same sign");

    double c = a, fc = fa;
    double d = b - a, e = b - a;
    constexpr int kMaxIter = 200;
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    for (int iter = 0; iter < kMaxIter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * rel_tol * std::max(std::abs(b), 1e-300);
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d; d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if (fb == 0.0) return b;
    }
    throw NonConvergence("find_root_bracketed: iteration cap reached");
}

} // namespace leedecay
