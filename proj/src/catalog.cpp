// SPDX-License-Identifier: Apache-2.0
#include "sbm/catalog.hpp"

#include <cmath>
#include <cstdio>

#include "sbm/quadrature.hpp"

namespace sbm {
namespace {

using cplx = std::complex<double>;

LaplaceExponent make_stable(double a) {
    if (!(a > 0.0 && a < 2.0)) throw DomainError("stable(a): need 0 < a < 2");
    const double e = a / 2.0;
    LaplaceExponent x;
    x.phi = [e](double l) { return std::pow(l, e); };
    x.phi_prime = [e](double l) { return e * std::pow(l, e - 1.0); };
    x.phi_complex = [e](cplx s) { return std::exp(e * std::log(s)); };
    x.phi_prime_complex = [e](cplx s) { return e * std::exp((e - 1.0) * std::log(s)); };
    x.alpha = a;
    char buf[32];
    std::snprintf(buf, sizeof buf, "stable(%g)", a);
    x.label = buf;
    return x;
}

LaplaceExponent make_stable_log(double a) {
    if (!(a > 0.0 && a < 2.0)) throw DomainError("stable-log(a): need 0 < a < 2");
    const double e = a / 2.0;
    LaplaceExponent x;
    x.phi = [e](double l) {
        return std::pow(l, e) * std::pow(std::log1p(l), 1.0 - e);
    };
    x.phi_prime = [e](double l) {
        const double L = std::log1p(l);
        return std::pow(l, e - 1.0) * std::pow(L, -e) *
               (e * L + (1.0 - e) * l / (1.0 + l));
    };
    x.phi_complex = [e](cplx s) {
        return std::exp(e * std::log(s) + (1.0 - e) * std::log(std::log(1.0 + s)));
    };
    x.phi_prime_complex = [e](cplx s) {
        const cplx L = std::log(1.0 + s);
        return std::exp((e - 1.0) * std::log(s) - e * std::log(L)) *
               (e * L + (1.0 - e) * s / (1.0 + s));
    };
    x.alpha = a;
    char buf[32];
    std::snprintf(buf, sizeof buf, "stable-log(%g)", a);
    x.label = buf;
    return x;
}

LaplaceExponent make_geo(double b) {
    if (!(b > 0.0 && b <= 2.0)) throw DomainError("geo(b): need 0 < b <= 2");
    const double e = b / 2.0;
    LaplaceExponent x;
    x.phi = [e](double l) { return std::log1p(std::pow(l, e)); };
    x.phi_prime = [e](double l) {
        const double p = std::pow(l, e);
        return e * p / (l * (1.0 + p));
    };
    x.phi_complex = [e](cplx s) { return std::log(1.0 + std::exp(e * std::log(s))); };
    x.phi_prime_complex = [e](cplx s) {
        const cplx p = std::exp(e * std::log(s));
        return e * p / (s * (1.0 + p));
    };
    x.alpha = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "geo(%g)", b);
    x.label = buf;
    return x;
}

LaplaceExponent make_geo_iter(double b, int n) {
    if (n < 1) throw DomainError("geo-iter(b,n): need n >= 1");
    LaplaceExponent x = make_geo(b);
    const LaplaceExponent base = x;
    for (int i = 1; i < n; ++i) x = compose(base, x);
    x.alpha = 0.0;
    x.kill_rate = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "geo-iter(%g,%d)", b, n);
    x.label = buf;
    return x;
}

LaplaceExponent make_conj_geo_iter(double b, int n) {
    LaplaceExponent x = conjugate(make_geo_iter(b, n));
    x.alpha = 2.0;
    // phi_n(l) ~ l as l->0 exactly when b = 2; the conjugate is then a killed
    // subordinator with unit killing rate. For b < 2 there is no killing.
    x.kill_rate = (b == 2.0) ? 1.0 : 0.0;
    char buf[48];
    std::snprintf(buf, sizeof buf, "conj-geo-iter(%g,%d)", b, n);
    x.label = buf;
    return x;
}

// Levy density of the twice-iterated gamma-type subordinator (b = 2, n = 2):
//   mu(t) = exp(-t) * Int_0^inf t^(s-1) exp(-s) / Gamma(s+1) ds.
double mu_geo_iter_2_2(double t) {
    if (!(t > 0.0)) throw DomainError("mu: t must be positive");
    if (t > 700.0) return 0.0;  // exp(-t) underflows; value below 1e-300
    const double lt = std::log(t);
    const auto integrand = [lt](double s) {
        return std::exp((s - 1.0) * lt - s - std::lgamma(s + 1.0));
    };
    const double splits[] = {1.0, std::max(1.0, t)};
    QuadratureResult coarse = integrate_zero_inf(integrand, 1e-8, splits, 400);
    const double tol = 1e-11 * std::max(std::fabs(coarse.value), 1e-300);
    QuadratureResult fine = integrate_zero_inf(integrand, tol, splits);
    return std::exp(-t) * fine.value;
}

bool parse_params(const std::string& key, const std::string& name, int nargs,
                  double* p1, int* p2) {
    if (key.size() <= name.size() + 2 || key.compare(0, name.size(), name) != 0 ||
        key[name.size()] != '(' || key.back() != ')')
        return false;
    const std::string inner = key.substr(name.size() + 1, key.size() - name.size() - 2);
    if (nargs == 1) return std::sscanf(inner.c_str(), "%lf", p1) == 1;
    return std::sscanf(inner.c_str(), "%lf,%d", p1, p2) == 2;
}

}  // namespace

CatalogEntry catalog(const std::string& key) {
    CatalogEntry e;
    e.key = key;
    double p = 0.0;
    int n = 0;

    if (key == "drift") {
        e.exponent = identity_exponent();
        e.closed_form_mu = [](double) { return 0.0; };
        e.closed_form_u = [](double) { return 1.0; };
        e.expected_alpha = 2.0;
        return e;
    }
    if (key == "vg") {
        LaplaceExponent x;
        x.phi = [](double l) { return std::log1p(l); };
        x.phi_prime = [](double l) { return 1.0 / (1.0 + l); };
        x.phi_complex = [](cplx s) { return std::log(1.0 + s); };
        x.phi_prime_complex = [](cplx s) { return 1.0 / (1.0 + s); };
        x.alpha = 0.0;
        x.label = "vg";
        e.exponent = x;
        e.closed_form_mu = [](double t) { return std::exp(-t) / t; };
        e.expected_alpha = 0.0;
        return e;
    }
    if (key == "example3") {
        e.exponent = conjugate(make_geo(1.0));
        e.exponent.alpha = 2.0;
        e.exponent.kill_rate = 0.0;
        e.exponent.label = "example3";
        e.expected_alpha = 2.0;
        return e;
    }
    if (parse_params(key, "stable", 1, &p, nullptr)) {
        e.exponent = make_stable(p);
        const double a = p / 2.0;
        e.closed_form_mu = [a](double t) {
            return a / std::tgamma(1.0 - a) * std::pow(t, -1.0 - a);
        };
        e.closed_form_u = [a](double t) {
            return std::pow(t, a - 1.0) / std::tgamma(a);
        };
        e.expected_alpha = p;
        return e;
    }
    if (parse_params(key, "stable-log", 1, &p, nullptr)) {
        e.exponent = make_stable_log(p);
        e.expected_alpha = p;
        return e;
    }
    if (parse_params(key, "geo", 1, &p, nullptr)) {
        e.exponent = make_geo(p);
        if (p == 2.0) e.closed_form_mu = [](double t) { return std::exp(-t) / t; };
        if (p == 1.0)
            e.closed_form_mu = [](double t) {
                if (!(t > 0.0)) throw DomainError("mu: t must be positive");
                return 0.5 / t * erfcx(std::sqrt(t));
            };
        e.expected_alpha = 0.0;
        return e;
    }
    if (parse_params(key, "geo-iter", 2, &p, &n)) {
        e.exponent = make_geo_iter(p, n);
        if (p == 2.0 && n == 1) e.closed_form_mu = [](double t) { return std::exp(-t) / t; };
        if (p == 1.0 && n == 1)
            e.closed_form_mu = [](double t) { return 0.5 / t * erfcx(std::sqrt(t)); };
        if (p == 2.0 && n == 2) e.closed_form_mu = mu_geo_iter_2_2;
        e.expected_alpha = 0.0;
        return e;
    }
    if (parse_params(key, "conj-geo-iter", 2, &p, &n)) {
        e.exponent = make_conj_geo_iter(p, n);
        e.expected_alpha = 2.0;
        return e;
    }
    throw DomainError("unknown catalog key: " + key);
}

std::vector<std::string> catalog_keys() {
    return {"drift",
            "vg",
            "geo(0.5)",
            "geo(1)",
            "geo(1.5)",
            "geo-iter(2,2)",
            "geo-iter(1,2)",
            "conj-geo-iter(2,1)",
            "conj-geo-iter(2,2)",
            "example3",
            "stable(0.5)",
            "stable(1)",
            "stable(1.5)",
            "stable-log(0.5)",
            "stable-log(1)",
            "stable-log(1.5)"};
}

}  // namespace sbm
