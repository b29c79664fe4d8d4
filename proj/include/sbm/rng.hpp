// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random streams (Philox4x32-10, Salmon et al. 2011) plus the
// non-uniform generators the simulators need. One stream per (seed, stream id)
// pair; streams with distinct ids are independent, so path i of a Monte Carlo
// run can always be reproduced bit-exactly regardless of how paths are
// scheduled across workers.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "sbm/common.hpp"

namespace sbm {

class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          stream_id_(stream_id) {}

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            block_ = philox_block();
            ++counter_;
            pos_ = 0;
        }
        return block_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform on the open interval (0,1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential() { return -std::log(uniform()); }

    /// Standard normal via Marsaglia polar method (second value cached).
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double x, y, s;
        do {
            x = 2.0 * uniform() - 1.0;
            y = 2.0 * uniform() - 1.0;
            s = x * x + y * y;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = y * m;
        have_cached_ = true;
        return x * m;
    }

    /// Gamma(shape, 1) via Marsaglia-Tsang, with the standard power boost for
    /// shape < 1. Underflows to exact 0 for very small shapes; those samples
    /// are below 1e-290 and irrelevant at double precision.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw DomainError("gamma: shape must be positive");
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            const double log_u = std::log(uniform());
            const double e = std::log(g) + log_u / shape;
            return e < -700.0 ? 0.0 : std::exp(e);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// One-sided strictly stable sample with E[exp(-lam S)] = exp(-lam^a),
    /// 0 < a < 1 (Kanter / Chambers-Mallows-Stuck representation).
    double stable_positive(double a) {
        if (!(a > 0.0 && a < 1.0))
            throw DomainError("stable_positive: index must be in (0,1)");
        const double u = M_PI * uniform();
        const double e = exponential();
        const double log_a_u = ((1.0 - a) * std::log(std::sin((1.0 - a) * u)) +
                                a * std::log(std::sin(a * u)) -
                                std::log(std::sin(u))) / (1.0 - a);
        const double log_s = (1.0 - a) / a * (log_a_u - std::log(e));
        if (log_s > 700.0) return 1e304;
        if (log_s < -700.0) return 0.0;
        return std::exp(log_s);
    }

    /// Exact Poisson count. Product-of-uniforms for small means, recursive
    /// halving (superposition) above it so no approximation enters.
    std::uint64_t poisson(double mean) {
        if (mean < 0.0) throw DomainError("poisson: negative mean");
        if (mean == 0.0) return 0;
        if (mean <= 12.0) {
            const double l = std::exp(-mean);
            std::uint64_t k = 0;
            double p = uniform();
            while (p > l) {
                ++k;
                p *= uniform();
            }
            return k;
        }
        return poisson(mean * 0.5) + poisson(mean * 0.5);
    }

private:
    static void mul_hi_lo(std::uint32_t a, std::uint32_t b,
                          std::uint32_t* hi, std::uint32_t* lo) {
        const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        *hi = static_cast<std::uint32_t>(p >> 32);
        *lo = static_cast<std::uint32_t>(p);
    }

    std::array<std::uint32_t, 4> philox_block() const {
        constexpr std::uint32_t kW32A = 0x9E3779B9u, kW32B = 0xBB67AE85u;
        constexpr std::uint32_t kM4x32A = 0xD2511F53u, kM4x32B = 0xCD9E8D57u;
        std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(counter_),
            static_cast<std::uint32_t>(counter_ >> 32),
            static_cast<std::uint32_t>(stream_id_),
            static_cast<std::uint32_t>(stream_id_ >> 32)};
        std::uint32_t k0 = key_[0], k1 = key_[1];
        for (int round = 0; round < 10; ++round) {
            std::uint32_t hi0, lo0, hi1, lo1;
            mul_hi_lo(kM4x32A, ctr[0], &hi0, &lo0);
            mul_hi_lo(kM4x32B, ctr[2], &hi1, &lo1);
            ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
            k0 += kW32A;
            k1 += kW32B;
        }
        return ctr;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_id_ = 0;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int pos_ = 4;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace sbm
