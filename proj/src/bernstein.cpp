// SPDX-License-Identifier: Apache-2.0
#include "sbm/bernstein.hpp"

#include <cmath>
#include <limits>

namespace sbm {

double numerical_derivative(const RealFn1& f, double lam) {
    if (!(lam > 0.0)) throw DomainError("numerical_derivative: lambda must be positive");
    const double h = lam * std::cbrt(std::numeric_limits<double>::epsilon());
    const auto central = [&](double step) {
        return (f(lam + step) - f(lam - step)) / (2.0 * step);
    };
    const double d1 = central(h);
    const double d2 = central(0.5 * h);
    return (4.0 * d2 - d1) / 3.0;  // one Richardson step
}

namespace {

// phi(0+) by evaluation near zero, snapping values that are numerical noise.
double kill_from_eval(const RealFn1& phi) {
    const double v = phi(1e-12);
    return v < 1e-8 ? 0.0 : v;
}

}  // namespace

LaplaceExponent compose(const LaplaceExponent& outer, const LaplaceExponent& inner) {
    LaplaceExponent out;
    const RealFn1 po = outer.phi, pi = inner.phi;
    const RealFn1 dpo = outer.phi_prime, dpi = inner.phi_prime;
    out.phi = [po, pi](double l) { return po(pi(l)); };
    out.phi_prime = [dpo, pi, dpi](double l) { return dpo(pi(l)) * dpi(l); };
    if (outer.has_complex() && inner.has_complex()) {
        const ComplexFn co = outer.phi_complex, ci = inner.phi_complex;
        out.phi_complex = [co, ci](std::complex<double> s) { return co(ci(s)); };
        if (outer.phi_prime_complex && inner.phi_prime_complex) {
            const ComplexFn dco = outer.phi_prime_complex, dci = inner.phi_prime_complex;
            out.phi_prime_complex = [dco, ci, dci](std::complex<double> s) {
                return dco(ci(s)) * dci(s);
            };
        }
    }
    out.drift = outer.drift * inner.drift;
    out.kill_rate = kill_from_eval(out.phi);
    out.is_complete_bernstein = outer.is_complete_bernstein && inner.is_complete_bernstein;
    if (outer.alpha && inner.alpha) {
        const double a = *outer.alpha * *inner.alpha / 2.0;
        if (a >= 0.0 && a <= 2.0) out.alpha = a;
    }
    out.label = outer.label + "∘" + inner.label;
    return out;
}

LaplaceExponent conjugate(const LaplaceExponent& exp) {
    LaplaceExponent out;
    const RealFn1 p = exp.phi, dp = exp.phi_prime;
    out.phi = [p](double l) {
        const double v = p(l);
        if (!(v > 0.0)) throw NumericalError("conjugate: phi(lambda) not positive");
        return l / v;
    };
    out.phi_prime = [p, dp](double l) {
        const double v = p(l);
        return (v - l * dp(l)) / (v * v);
    };
    if (exp.has_complex()) {
        const ComplexFn c = exp.phi_complex;
        out.phi_complex = [c](std::complex<double> s) { return s / c(s); };
        if (exp.phi_prime_complex) {
            const ComplexFn dc = exp.phi_prime_complex;
            out.phi_prime_complex = [c, dc](std::complex<double> s) {
                const std::complex<double> v = c(s);
                return (v - s * dc(s)) / (v * v);
            };
        }
    }
    out.drift = 0.0;
    out.kill_rate = kill_from_eval(out.phi);
    out.is_complete_bernstein = exp.is_complete_bernstein;  // closed under conjugation
    if (exp.alpha) out.alpha = 2.0 - *exp.alpha;
    out.label = "conj(" + exp.label + ")";
    return out;
}

LaplaceExponent identity_exponent() {
    LaplaceExponent out;
    out.phi = [](double l) { return l; };
    out.phi_prime = [](double) { return 1.0; };
    out.phi_complex = [](std::complex<double> s) { return s; };
    out.phi_prime_complex = [](std::complex<double>) { return std::complex<double>(1.0, 0.0); };
    out.drift = 1.0;
    out.kill_rate = 0.0;
    out.alpha = 2.0;
    out.is_complete_bernstein = true;
    out.label = "drift";
    return out;
}

}  // namespace sbm
