// SPDX-License-Identifier: Apache-2.0
#include "sbm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace sbm {
namespace {

// Gauss-Kronrod 15/7 nodes and weights on [-1,1] (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
};

Panel gk15(const RealFn& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);
    for (double& v : fv)
        if (!std::isfinite(v)) v = 0.0;  // underflow/overflow tails count as 0
    double kron = kWgk[7] * fv[7];
    double gauss = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kron += kWgk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) gauss += kWg[i / 2] * (fv[i] + fv[14 - i]);
    }
    kron *= h;
    gauss *= h;
    // QUADPACK-style conservative error estimate.
    const double diff = std::fabs(kron - gauss);
    double err = diff;
    if (diff > 0.0) {
        double resabs = 0.0;
        for (int i = 0; i < 7; ++i) resabs += kWgk[i] * (std::fabs(fv[i]) + std::fabs(fv[14 - i]));
        resabs = (resabs + kWgk[7] * std::fabs(fv[7])) * std::fabs(h);
        const double scaled = std::pow(200.0 * diff / std::max(resabs, 1e-300), 1.5) * resabs;
        err = std::min(diff * 200.0, std::max(scaled, diff));
    }
    return {a, b, kron, err};
}

QuadratureResult refine(const RealFn& f, std::vector<Panel> panels, double tol,
                        int max_subdivisions) {
    auto worse = [](const Panel& x, const Panel& y) { return x.error < y.error; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> heap(worse);
    double total = 0.0, err = 0.0;
    for (const Panel& p : panels) {
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    int subdivisions = static_cast<int>(panels.size());
    while (err > tol && subdivisions < max_subdivisions && !heap.empty()) {
        const Panel worst = heap.top();
        heap.pop();
        if (worst.error <= 0.0 || worst.b - worst.a < 1e-14 * (std::fabs(worst.a) + 1.0)) {
            err = worst.error;  // cannot split further; remaining heap error below
            double rest = 0.0;
            std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> copy = heap;
            while (!copy.empty()) {
                rest += copy.top().error;
                copy.pop();
            }
            err += rest;
            break;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = gk15(f, worst.a, mid);
        const Panel right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }
    QuadratureResult res;
    res.value = total;
    res.abs_error_estimate = std::max(err, 0.0);
    res.subdivisions = subdivisions;
    res.converged = res.abs_error_estimate <= tol;
    return res;
}

}  // namespace

QuadratureResult integrate(const RealFn& f, double a, double b, double tol,
                           int max_subdivisions) {
    if (!(b > a)) throw DomainError("integrate: need b > a");
    if (!(tol > 0.0)) throw DomainError("integrate: tolerance must be positive");
    return refine(f, {gk15(f, a, b)}, tol, max_subdivisions);
}

QuadratureResult integrate_zero_inf(const RealFn& f, double tol,
                                    std::span<const double> split_points,
                                    int max_subdivisions) {
    if (!(tol > 0.0)) throw DomainError("integrate_zero_inf: tolerance must be positive");
    const auto g = [&f](double s) {
        const double t = std::exp(s);
        const double v = f(t) * t;
        return std::isfinite(v) ? v : 0.0;
    };

    std::vector<double> knots;
    for (double t : split_points)
        if (t > 0.0 && std::isfinite(t)) knots.push_back(std::log(t));
    knots.push_back(0.0);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    // Core window around the split points, widened so single panels stay short.
    constexpr double kMaxS = 700.0, kStep = 3.0;
    double lo = std::max(knots.front() - 6.0, -kMaxS);
    double hi = std::min(knots.back() + 6.0, kMaxS);
    std::vector<double> edges;
    edges.push_back(lo);
    for (double k : knots)
        if (k > lo && k < hi) edges.push_back(k);
    edges.push_back(hi);
    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i];
        const double b = edges[i + 1];
        while (b - a > kStep) {
            panels.push_back(gk15(g, a, a + kStep));
            a += kStep;
        }
        panels.push_back(gk15(g, a, b));
    }

    // Extend outward until the newest boundary panel is negligible.
    const double tail_tol = 0.05 * tol;
    double magnitude = 0.0;
    for (const Panel& p : panels) magnitude += std::fabs(p.value);
    for (double a = lo; a > -kMaxS;) {
        const Panel p = gk15(g, std::max(a - kStep, -kMaxS), a);
        panels.push_back(p);
        a -= kStep;
        if (std::fabs(p.value) + p.error < tail_tol * std::max(magnitude, 1e-300) ||
            std::fabs(p.value) + p.error < 1e-305)
            break;
        magnitude += std::fabs(p.value);
    }
    for (double b = hi; b < kMaxS;) {
        const Panel p = gk15(g, b, std::min(b + kStep, kMaxS));
        panels.push_back(p);
        b += kStep;
        if (std::fabs(p.value) + p.error < tail_tol * std::max(magnitude, 1e-300) ||
            std::fabs(p.value) + p.error < 1e-305)
            break;
        magnitude += std::fabs(p.value);
    }

    return refine(g, std::move(panels), tol, max_subdivisions);
}

}  // namespace sbm
