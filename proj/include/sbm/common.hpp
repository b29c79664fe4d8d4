// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace sbm {

/// Thrown when an input is outside an operation's domain (e.g. lambda <= 0).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical method detects that it cannot deliver its
/// documented accuracy (quadrature non-convergence, inversion collapse, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when an operation is asked for something it does not support
/// (e.g. a closed-form density for an exponent that has none).
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Strictly increasing logarithmic grid with n points from lo to hi inclusive.
inline std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw DomainError("log_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> g(static_cast<std::size_t>(n));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] =
            std::exp(llo + (lhi - llo) * static_cast<double>(i) / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

/// Unweighted least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("ls_slope: need two or more points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw DomainError("ls_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

/// Scaled complementary error function exp(x^2) erfc(x) for x >= 0.
/// Direct product below the erfc underflow region, asymptotic series above.
inline double erfcx(double x) {
    if (x < 0.0) throw DomainError("erfcx: negative argument");
    if (x < 12.0) return std::exp(x * x) * std::erfc(x);
    // erfcx(x) ~ (1/(x sqrt(pi))) sum_k (-1)^k (2k-1)!!/(2x^2)^k
    const double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 10; ++k) {
        term *= -(2.0 * k - 1.0) * inv2x2;
        sum += term;
    }
    return sum / (x * std::sqrt(M_PI));
}

}  // namespace sbm
