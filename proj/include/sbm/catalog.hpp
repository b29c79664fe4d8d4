// SPDX-License-Identifier: Apache-2.0
//
// Built-in Laplace exponents, addressed by key strings:
//   drift                phi(l) = l
//   stable(a)            phi(l) = l^(a/2),                      0 < a < 2
//   stable-log(a)        phi(l) = l^(a/2) log(1+l)^(1-a/2),     0 < a < 2
//   vg                   phi(l) = log(1+l)
//   geo(b)               phi(l) = log(1+l^(b/2)),               0 < b <= 2
//   geo-iter(b,n)        n-fold composition of geo(b)
//   conj-geo-iter(b,n)   l / geo-iter(b,n)(l)
//   example3             l / log(1+sqrt(l))   (== conj-geo-iter(1,1))
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sbm/bernstein.hpp"

namespace sbm {

struct CatalogEntry {
    std::string key;
    LaplaceExponent exponent;
    RealFn1 closed_form_mu;  // null when no closed form is known
    RealFn1 closed_form_u;   // null when no closed form is known
    double expected_alpha = 0.0;

    bool has_mu() const { return static_cast<bool>(closed_form_mu); }
    bool has_u() const { return static_cast<bool>(closed_form_u); }
};

/// Parse a key and build the entry. Throws DomainError for unknown keys or
/// out-of-range parameters.
CatalogEntry catalog(const std::string& key);

/// Canonical key list used by `phi list` and the catalog-wide property tests.
std::vector<std::string> catalog_keys();

}  // namespace sbm
