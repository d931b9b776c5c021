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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "propagation.hpp"

namespace mmimo
{

// Scalar system parameters shared by the closed-form coverage evaluators.
struct SystemParams
{
    int M = 64;
    int K = 10;
    double alpha = 4.0;
    double epsilon = 0.0;
    double sigma2 = 0.0; // W
    double p_t = propagation::dbm_to_watt(23.0);
    double C = propagation::free_space_reference_gain(2.0e9);
    double lambda_b = 2.0 / (std::sqrt(3.0) * 500.0 * 500.0);
    int n_terms = 5;

    void validate() const
    {
        if (M < 1)
            throw DomainError("M must be at least 1");
        if (K < 1)
            throw DomainError("K must be at least 1");
        if (!(alpha > 2.0))
            throw DomainError("alpha must exceed 2");
        if (!(epsilon >= 0.0 && epsilon <= 1.0))
            throw DomainError("epsilon must lie in [0, 1]");
        if (!(sigma2 >= 0.0) || !(p_t > 0.0) || !(C > 0.0) || !(lambda_b > 0.0))
            throw DomainError("sigma2 must be >= 0 and P_t, C, lambda_b positive");
        if (n_terms < 1)
            throw DomainError("term count N must be at least 1");
    }
};

// Normalised noise power sigma^2 / (K P_t C^(1-eps) (lambda_b pi)^(alpha (1-eps) / 2)).
inline double c_sigma2(const SystemParams &p)
{
    if (p.sigma2 == 0.0)
        return 0.0;
    const double scale = std::pow(p.C, 1.0 - p.epsilon) *
                         std::pow(p.lambda_b * std::numbers::pi, p.alpha * (1.0 - p.epsilon) / 2.0);
    return p.sigma2 / (static_cast<double>(p.K) * p.p_t * scale);
}

// Mean-substituted other-cell interference level 2 Gamma^alpha(eps/2 + 1) / (alpha - 2) + C_sigma2,
// in units of C^(1-eps) (lambda_b pi)^(alpha (1-eps) / 2).
inline double mean_interference_level(double alpha, double epsilon, double c_sigma2_value)
{
    return 2.0 * std::pow(std::tgamma(epsilon / 2.0 + 1.0), alpha) / (alpha - 2.0) + c_sigma2_value;
}

// Clamps a computed probability to [0, 1] after checking it is only off by rounding.
inline double checked_probability(double raw, const char *what)
{
    constexpr double slack = 1e-6;
    if (!(raw >= -slack && raw <= 1.0 + slack))
        throw NumericalError(std::string(what) + ": probability out of range", raw, 0.0);
    return std::clamp(raw, 0.0, 1.0);
}

} // namespace mmimo
