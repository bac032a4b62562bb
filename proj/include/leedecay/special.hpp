#pragma once

#include <cmath>
#include <complex>

#include <gsl/gsl_sf_expint.h>

namespace leedecay {

// sin(x)/x with the removable singularity filled by its Taylor series.
inline double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

// Cin(x) = gamma + ln|x| - Ci(|x|) = sum_{k>=1} (-1)^(k+1) x^(2k) / (2k (2k)!).
// Even in x. The series avoids the gamma+log-Ci cancellation at small x.
inline double cin(double x) {
    const double ax = std::abs(x);
    if (ax == 0.0) return 0.0;
    if (ax < 1.0) {
        const double x2 = ax * ax;
        double term = x2 / 4.0; // k = 1
        double sum = term;
        for (int k = 2; k <= 16; ++k) {
            term *= -x2 * (2 * k - 2) / (2.0 * k * (2 * k) * (2 * k - 1));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    constexpr double kEulerGamma = 0.577215664901532860606512090082402431;
    return kEulerGamma + std::log(ax) - gsl_sf_Ci(ax);
}

inline double sine_integral(double x) { return gsl_sf_Si(x); }

// G(x) = int_0^x (e^{iv} - 1)/v dv = -Cin(x) + i Si(x); entire, odd real
// behaviour split as Cin even / Si odd. Satisfies
// int_a^b (e^{iut} - 1)/u du = G(bt) - G(at) for any real a, b.
inline std::complex<double> osc_exp_integral(double x) {
    if (x == 0.0) return {0.0, 0.0};
    return {-cin(x), sine_integral(x)};
}

// (1 - p^n) / (1 - p) for p in [0,1], evaluated stably near p = 1 where the
// value tends to n.
inline double geometric_ratio(double p, long long n) {
    if (p == 1.0) return static_cast<double>(n);
    if (p == 0.0) return 1.0;
    const double d = p - 1.0; // negative
    // 1 - p^n = -expm1(n log p); log p = log1p(d) keeps p near 1 exact.
    return -std::expm1(static_cast<double>(n) * std::log1p(d)) / (-d);
}

} // namespace leedecay
