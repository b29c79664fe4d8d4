// SPDX-License-Identifier: Apache-2.0
//
// Numerical inverse Laplace transforms for smooth completely-monotone-like
// originals. Two engines:
//   * fixed Talbot contour (needs the transform at complex arguments) --
//     roughly 1e-10 relative accuracy in double precision on the validation
//     set, used whenever a complex evaluator is available;
//   * Gaver-Stehfest series acceleration (real arguments only) -- about 1e-6
//     relative on smooth targets, used as fallback and as cross-check.
// Successive-order disagreement flags precision collapse.
#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "sbm/common.hpp"

namespace sbm {

using ComplexFn = std::function<std::complex<double>(std::complex<double>)>;
using RealFn1 = std::function<double(double)>;

/// Carries both estimates when an inversion cross-check fails.
class InversionError : public NumericalError {
public:
    InversionError(const std::string& what, double primary, double check)
        : NumericalError(what), primary_estimate(primary), check_estimate(check) {}
    double primary_estimate;
    double check_estimate;
};

struct InversionResult {
    double value = 0.0;
    double cross_check = 0.0;      // value at the lower order
    double rel_discrepancy = 0.0;  // |value - cross_check| / max(|value|, tiny)
    int order = 0;
    std::string method;            // "talbot" or "stehfest"
};

/// Stehfest weights for even order n (exact integers in double).
const std::vector<double>& stehfest_coefficients(int order);

/// Gaver-Stehfest inversion at fixed even order (long double accumulation).
double stehfest(const RealFn1& F, double t, int order = 14);

/// Fixed-Talbot inversion with `order` contour nodes.
double talbot(const ComplexFn& F, double t, int order = 24);

/// Stehfest with order / order-2 cross-check. Throws InversionError when the
/// two orders disagree beyond `collapse_tol` relative.
InversionResult invert_laplace(const RealFn1& F, double t, int order = 14,
                               double collapse_tol = 1e-3);

/// Talbot with order / order-4 cross-check.
InversionResult invert_laplace(const ComplexFn& F, double t, int order = 24,
                               double collapse_tol = 1e-6);

/// Inverted values over a logarithmic grid, with method provenance.
struct InversionProfile {
    std::string method;          // "talbot" or "stehfest"
    int order = 0;
    std::vector<double> t_grid;  // strictly increasing, positive
    std::vector<double> values;
};

InversionProfile invert_laplace_profile(const RealFn1& F,
                                        const std::vector<double>& t_grid,
                                        int order = 14);
InversionProfile invert_laplace_profile(const ComplexFn& F,
                                        const std::vector<double>& t_grid,
                                        int order = 24);

}  // namespace sbm
