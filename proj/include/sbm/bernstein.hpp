// SPDX-License-Identifier: Apache-2.0
//
// Laplace exponents of subordinators: evaluation, derivatives, composition
// and conjugation. Values are immutable after construction and safe to read
// concurrently.
#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>

#include "sbm/common.hpp"
#include "sbm/inversion.hpp"

namespace sbm {

struct LaplaceExponent {
    RealFn1 phi;                 // lambda > 0 -> phi(lambda) > 0
    RealFn1 phi_prime;           // closed form when available, numeric otherwise
    ComplexFn phi_complex;       // optional analytic continuation (may be null)
    ComplexFn phi_prime_complex; // optional analytic continuation of phi'
    double drift = 0.0;          // coefficient of the linear term
    double kill_rate = 0.0;      // phi(0+)
    std::optional<double> alpha; // regular-variation parameter in [0,2]
    bool is_complete_bernstein = true;
    std::string label;

    double operator()(double lam) const { return eval(lam); }

    double eval(double lam) const {
        if (!(lam > 0.0)) throw DomainError("phi: lambda must be positive (" + label + ")");
        return phi(lam);
    }

    double prime(double lam) const {
        if (!(lam > 0.0)) throw DomainError("phi': lambda must be positive (" + label + ")");
        return phi_prime(lam);
    }

    bool has_complex() const { return static_cast<bool>(phi_complex); }
};

/// Central difference with step lam * eps^(1/3), Richardson-extrapolated once.
double numerical_derivative(const RealFn1& f, double lam);

/// outer(inner(.)) with chain-rule derivative. Complete-Bernstein flag is the
/// conjunction of the inputs' flags; alpha combines as alpha_i * alpha_o / 2
/// when both are known.
LaplaceExponent compose(const LaplaceExponent& outer, const LaplaceExponent& inner);

/// lambda / phi(lambda) with quotient-rule derivative; alpha maps to 2 - alpha.
/// Warns (flag false) rather than failing when the input is not marked
/// complete Bernstein.
LaplaceExponent conjugate(const LaplaceExponent& exp);

/// phi(lambda) = lambda (pure drift).
LaplaceExponent identity_exponent();

}  // namespace sbm
