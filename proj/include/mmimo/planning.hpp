// SPDX-License-Identifier: Apache-2.0
//
// mmimo-sg: stochastic-geometry uplink massive MIMO SINR toolkit
// Copyright (C) 2026 The mmimo-sg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Antenna/user scaling laws and rate metrics.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "curves.hpp"
#include "errors.hpp"
#include "numerics.hpp"

namespace mmimo::planning
{

struct ScalingSpec
{
    double s = 1.0;  // MRC exponent: (M+1) ~ K^s
    double xi = 1.0; // ZF/MRC antenna ratio (M_zf + 1) = xi (M_mrc + 1)
};

// s = (alpha/2)(1 - eps) + eps
inline double mrc_scaling_exponent(double alpha, double epsilon)
{
    if (!(alpha >= 2.0))
        throw DomainError("mrc_scaling_exponent: alpha must be at least 2");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw DomainError("epsilon must lie in [0, 1]");
    return alpha / 2.0 * (1.0 - epsilon) + epsilon;
}

// Antennas that keep the coverage unchanged when moving from K to K_new users: (M+1)(K_new/K)^s - 1.
inline int scale_antennas(int M, int K, int K_new, double s)
{
    if (K < 1 || K_new < 1)
        throw DomainError("scale_antennas: user counts must be at least 1");
    const double m = (static_cast<double>(M) + 1.0) * std::pow(static_cast<double>(K_new) / K, s) - 1.0;
    return static_cast<int>(std::lround(m));
}

// xi = K^-((alpha/2 - 1)(1 - eps))
inline double zf_antenna_ratio(int K, double alpha, double epsilon)
{
    if (K < 1)
        throw DomainError("zf_antenna_ratio: K must be at least 1");
    if (!(alpha >= 2.0))
        throw DomainError("zf_antenna_ratio: alpha must be at least 2");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw DomainError("epsilon must lie in [0, 1]");
    return std::pow(static_cast<double>(K), -(alpha / 2.0 - 1.0) * (1.0 - epsilon));
}

struct ZfMatch
{
    int m_zf = 0;        // round(xi (M_mrc + 1) - 1)
    int m_zf_scaled = 0; // round(xi (M_mrc + 1)), the reading without the -1 offset
    double xi = 1.0;
    bool valid = true;   // M_zf / K >= 3
    std::string warning;
};

// ZF antenna count giving approximately the same SIR coverage as MRC with M_mrc antennas.
inline ZfMatch zf_match_mrc(int M_mrc, int K, double alpha, double epsilon)
{
    ZfMatch r;
    r.xi = zf_antenna_ratio(K, alpha, epsilon);
    const double scaled = r.xi * (static_cast<double>(M_mrc) + 1.0);
    r.m_zf = static_cast<int>(std::lround(scaled - 1.0));
    r.m_zf_scaled = static_cast<int>(std::lround(scaled));
    r.valid = r.m_zf >= 3 * K;
    if (!r.valid)
        r.warning = "M_zf/K = " + std::to_string(r.m_zf) + "/" + std::to_string(K) +
                    " is below 3; the ZF approximation may be loose";
    return r;
}

struct RateParams
{
    double t_max_db = 21.0;
    double t_c_symbols = 200.0;
};

struct RateResult
{
    double psi = 0.0;       // training overhead K / T_c
    double tau0 = 0.0;      // bps/Hz per user, no overhead
    double tau0_bar = 0.0;  // bps/Hz per user, (1 - psi) tau0
    double tau_cell = 0.0;  // bps/Hz per cell, K (1 - psi) tau0
};

// tau0 = (1/ln 2) int_0^T_max P(SINR > x) / (1 + x) dx, integrated in y = ln(1 + x).
inline double spectral_efficiency(const std::function<double(double)> &ccdf, double t_max,
                                  const numerics::QuadratureSpec &quad = {1e-9, 1e-9, 400})
{
    if (!(t_max > 0.0))
        throw DomainError("spectral_efficiency: T_max must be positive");
    const auto r = numerics::integrate(
        [&](double y) {
            const double x = std::expm1(y);
            return x > 0.0 ? ccdf(x) : 1.0;
        },
        0.0, std::log1p(t_max), quad);
    return r.value / std::log(2.0);
}

// Same integral over a tabulated curve. The curve must start at or below `floor_db` and reach
// T_max; between x = 0 and the first grid point the CCDF is interpolated linearly from 1.
inline double spectral_efficiency(const CcdfCurve &curve, double t_max, double floor_db = -30.0)
{
    if (!(t_max > 0.0))
        throw DomainError("spectral_efficiency: T_max must be positive");
    if (curve.size() < 2 || curve.probabilities.size() != curve.size())
        throw StructuralError("spectral_efficiency: curve needs at least two points");
    const double t_max_db = numerics::linear_to_db(t_max);
    if (curve.thresholds_db.front() > floor_db || curve.thresholds_db.back() < t_max_db - 1e-9)
        throw StructuralError("spectral_efficiency: curve does not cover [0, T_max]; refusing to extrapolate");

    const double x0 = numerics::db_to_linear(curve.thresholds_db.front());
    auto segment = [&](double x_lo, double x_hi, const std::function<double(double)> &p) {
        if (x_hi <= x_lo)
            return 0.0;
        return numerics::integrate([&](double y) { return p(std::expm1(y)); }, std::log1p(x_lo), std::log1p(x_hi),
                                   {1e-12, 1e-10, 200})
            .value;
    };

    double total = segment(0.0, std::min(x0, t_max), [&](double x) {
        return 1.0 + (curve.probabilities.front() - 1.0) * (x / x0);
    });
    for (std::size_t i = 0; i + 1 < curve.size(); ++i)
    {
        const double lo_db = curve.thresholds_db[i], hi_db = curve.thresholds_db[i + 1];
        const double lo = numerics::db_to_linear(lo_db);
        if (lo >= t_max)
            break;
        const double hi = std::min(numerics::db_to_linear(hi_db), t_max);
        const double p_lo = curve.probabilities[i], p_hi = curve.probabilities[i + 1];
        total += segment(lo, hi, [&](double x) {
            const double w = (numerics::linear_to_db(x) - lo_db) / (hi_db - lo_db);
            return p_lo + w * (p_hi - p_lo);
        });
    }
    return total / std::log(2.0);
}

// Training overhead psi = K / T_c and the resulting per-user and per-cell rates.
inline RateResult overhead_and_throughput(int K, double t_c_symbols, double tau0)
{
    if (K < 1)
        throw DomainError("overhead_and_throughput: K must be at least 1");
    if (!(static_cast<double>(K) < t_c_symbols))
        throw DomainError("overhead_and_throughput: training length K must be shorter than T_c");
    RateResult r;
    r.psi = static_cast<double>(K) / t_c_symbols;
    r.tau0 = tau0;
    r.tau0_bar = (1.0 - r.psi) * tau0;
    r.tau_cell = static_cast<double>(K) * r.tau0_bar;
    return r;
}

} // namespace mmimo::planning
