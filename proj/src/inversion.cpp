// SPDX-License-Identifier: Apache-2.0
#include "sbm/inversion.hpp"

#include <cmath>
#include <map>

namespace sbm {

const std::vector<double>& stehfest_coefficients(int order) {
    // V_k = (-1)^(n/2+k) sum_j j^(n/2) (2j)! / ((n/2-j)! j! (j-1)! (k-j)! (2j-k)!)
    // The rationals are precomputed exactly and stored as correctly rounded
    // doubles; the factorial ratios overflow exact integer arithmetic in long
    // double, so they are not evaluated at run time.
    static const std::map<int, std::vector<double>> tables = {
        {10, {0.083333333333333329, -32.083333333333336, 1279, -15623.666666666666,
              84244.166666666672, -236957.5, 375911.66666666669, -340071.66666666669,
              164062.5, -32812.5}},
        {12, {-0.016666666666666666, 16.016666666666666, -1247, 27554.333333333332,
              -263280.83333333331, 1324138.7, -3891705.5333333332, 7053286.333333333,
              -8005336.5, 5552830.5, -2155507.2000000002, 359251.20000000001}},
        {14, {0.0027777777777777779, -6.4027777777777777, 924.04999999999995,
              -34597.927777777775, 540321.11111111112, -4398346.3666666662,
              21087591.777777776, -63944913.044444442, 127597579.55,
              -170137188.08333334, 150327467.03333333, -84592161.5,
              27478884.766666666, -3925554.9666666668}},
        {16, {-0.00039682539682539683, 2.1337301587301587, -551.01666666666665,
              33500.161111111112, -812665.11111111112, 10076183.766666668,
              -73241382.977777779, 339059632.07301587, -1052539536.2785715,
              2259013328.5833335, -3399701984.4333334, 3582450461.6999998,
              -2591494081.3666668, 1227049828.7666667, -342734555.4285714,
              42841819.428571425}}};
    const auto it = tables.find(order);
    if (it == tables.end())
        throw DomainError("stehfest_coefficients: order must be one of 10, 12, 14, 16");
    return it->second;
}

double stehfest(const RealFn1& F, double t, int order) {
    if (!(t > 0.0)) throw DomainError("stehfest: t must be positive");
    const auto& a = stehfest_coefficients(order);
    const double ln2_t = M_LN2 / t;
    long double sum = 0.0L;
    for (int k = 1; k <= order; ++k)
        sum += static_cast<long double>(a[static_cast<std::size_t>(k - 1)]) *
               static_cast<long double>(F(k * ln2_t));
    return static_cast<double>(sum * static_cast<long double>(ln2_t));
}

double talbot(const ComplexFn& F, double t, int order) {
    if (!(t > 0.0)) throw DomainError("talbot: t must be positive");
    if (order < 8) throw DomainError("talbot: order too small");
    const double r = 2.0 * order / (5.0 * t);
    double sum = 0.5 * std::exp(r * t) * F(std::complex<double>(r, 0.0)).real();
    for (int k = 1; k < order; ++k) {
        const double th = k * M_PI / order;
        const double cot = std::cos(th) / std::sin(th);
        const std::complex<double> sk(r * th * cot, r * th);
        const double sigma = th + (th * cot - 1.0) * cot;
        const std::complex<double> term =
            std::exp(t * sk) * F(sk) * std::complex<double>(1.0, sigma);
        sum += term.real();
    }
    return sum * r / order;
}

namespace {

InversionResult checked(double primary, double check, int order, const char* method,
                        double collapse_tol) {
    InversionResult res;
    res.value = primary;
    res.cross_check = check;
    res.order = order;
    res.method = method;
    const double scale = std::max({std::fabs(primary), std::fabs(check), 1e-300});
    res.rel_discrepancy = std::fabs(primary - check) / scale;
    if (res.rel_discrepancy > collapse_tol)
        throw InversionError(std::string(method) +
                                 " inversion cross-check failed: rel discrepancy " +
                                 std::to_string(res.rel_discrepancy),
                             primary, check);
    return res;
}

}  // namespace

InversionResult invert_laplace(const RealFn1& F, double t, int order,
                               double collapse_tol) {
    return checked(stehfest(F, t, order), stehfest(F, t, order - 2), order,
                   "stehfest", collapse_tol);
}

InversionResult invert_laplace(const ComplexFn& F, double t, int order,
                               double collapse_tol) {
    return checked(talbot(F, t, order), talbot(F, t, order - 4), order, "talbot",
                   collapse_tol);
}

namespace {

void require_log_grid(const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw DomainError("invert_laplace_profile: empty grid");
    double prev = 0.0;
    for (double t : t_grid) {
        if (!(t > prev)) throw DomainError(
            "invert_laplace_profile: grid must be strictly increasing and positive");
        prev = t;
    }
}

}  // namespace

InversionProfile invert_laplace_profile(const RealFn1& F,
                                        const std::vector<double>& t_grid, int order) {
    require_log_grid(t_grid);
    InversionProfile p{"stehfest", order, t_grid, {}};
    for (double t : t_grid) p.values.push_back(invert_laplace(F, t, order).value);
    return p;
}

InversionProfile invert_laplace_profile(const ComplexFn& F,
                                        const std::vector<double>& t_grid, int order) {
    require_log_grid(t_grid);
    InversionProfile p{"talbot", order, t_grid, {}};
    for (double t : t_grid) p.values.push_back(invert_laplace(F, t, order).value);
    return p;
}

}  // namespace sbm
