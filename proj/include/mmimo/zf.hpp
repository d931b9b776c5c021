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

// Zero-forcing: per-realization conditional SINR and the closed-form coverage approximation.

#include <cmath>
#include <limits>
#include <random>

#include "errors.hpp"
#include "numerics.hpp"
#include "propagation.hpp"
#include "system.hpp"

namespace mmimo::zf
{

enum class IntraCellModel
{
    exact,          // conditional factor (1 - P beta / S^(k)) kept per interferer
    mean_substituted,  // in-cell signal replaced by its mean, out-of-cell factor bounded by 1
};

enum class CombinerGainModel
{
    deterministic, // |g|^2 = 1 / ((M-K+1) S^(1))
    chi_square,    // |g|^2 = 1 / (G S^(1)), G ~ Gamma(M-K+1, 1)
};

struct ZfOptions
{
    IntraCellModel intra = IntraCellModel::exact;
    CombinerGainModel gain = CombinerGainModel::deterministic;
    // C^(1-eps) (lambda_b pi)^(alpha(1-eps)/2); only read by IntraCellModel::mean_substituted.
    double mean_signal = 0.0;
};

// Individual denominator terms of the ZF conditional SINR (all relative to the same scale).
struct ZfTerms
{
    double signal = 0.0;
    double estimation_error = 0.0;
    double pilot_contamination = 0.0;
    double intra_cell = 0.0;
    double other_cell = 0.0;
    double noise = 0.0;

    double interference() const
    {
        return estimation_error + pilot_contamination + intra_cell + other_cell + noise;
    }

    double sinr() const
    {
        const double d = interference();
        return d <= 0.0 ? std::numeric_limits<double>::infinity() : signal / d;
    }
};

// `dof_gain` is the realised (M-K+1) in the deterministic model or the Gamma draw otherwise.
inline ZfTerms zf_sinr_terms(const propagation::LinkBudget &lb, int M, double dof_gain, const ZfOptions &opt = {})
{
    const std::size_t K = lb.pilots();
    if (K == 0 || lb.S.size() != K || lb.interferers.size() != K)
        throw StructuralError("zf_conditional_sinr: link budget is not populated for every pilot");
    if (M < static_cast<int>(K))
        throw DomainError("zf_conditional_sinr: ZF needs M >= K");
    if (opt.intra == IntraCellModel::mean_substituted && !(opt.mean_signal > 0.0))
        throw DomainError("zf_conditional_sinr: mean_substituted model needs a positive mean_signal");

    const double m = static_cast<double>(M);
    const double dof = static_cast<double>(M) - static_cast<double>(K) + 1.0;
    const double b1 = lb.signal[0];
    const double s1 = lb.S[0];
    const double gain = 1.0 / (dof_gain * s1); // |g_00^(1)|^2

    ZfTerms t;
    t.signal = b1 * b1 / (s1 * s1);
    t.estimation_error = lb.delta1[0] * b1 / s1 * gain;

    double total1 = 0.0;
    for (double p : lb.interferers[0])
        total1 += p;
    double contamination = 0.0, cross = 0.0;
    for (double p : lb.interferers[0])
    {
        contamination += p * p;
        cross += p * (b1 + total1 - p + lb.noise_term);
    }
    t.pilot_contamination = (contamination + cross / (m + 1.0)) / (s1 * s1);

    double intra = 0.0, other = 0.0;
    for (std::size_t k = 1; k < K; ++k)
    {
        const double sk = lb.S[k];
        if (opt.intra == IntraCellModel::exact)
        {
            intra += lb.signal[k] * (1.0 - lb.signal[k] / sk);
            for (double p : lb.interferers[k])
                other += p * (1.0 - p / sk);
        }
        else
        {
            intra += opt.mean_signal * lb.delta1[k] / (opt.mean_signal + lb.delta1[k]);
            for (double p : lb.interferers[k])
                other += p;
        }
    }
    t.intra_cell = m * intra / dof * gain;
    t.other_cell = m * other / dof * gain;
    t.noise = static_cast<double>(K) * lb.noise_term * gain; // sigma^2 / P_t
    return t;
}

// Fading-averaged ZF SINR of the typical user with the deterministic combiner-gain model.
inline double zf_conditional_sinr(const propagation::LinkBudget &lb, int M, const ZfOptions &opt = {})
{
    if (opt.gain != CombinerGainModel::deterministic)
        throw DomainError("zf_conditional_sinr: the chi-square gain model needs a random engine");
    const double dof = static_cast<double>(M) - static_cast<double>(lb.pilots()) + 1.0;
    return zf_sinr_terms(lb, M, dof, opt).sinr();
}

template <typename Rng>
double zf_conditional_sinr(const propagation::LinkBudget &lb, int M, const ZfOptions &opt, Rng &rng)
{
    if (opt.gain == CombinerGainModel::deterministic)
        return zf_conditional_sinr(lb, M, opt);
    const double dof = static_cast<double>(M) - static_cast<double>(lb.pilots()) + 1.0;
    if (!(dof >= 1.0))
        throw DomainError("zf_conditional_sinr: ZF needs M >= K");
    std::gamma_distribution<double> draw(dof, 1.0);
    return zf_sinr_terms(lb, M, draw(rng), opt).sinr();
}

struct ZfConstants
{
    int M = 0;
    int K = 0;
    double c6 = 0.0;
    double c7 = 0.0;
    double c8 = 0.0;
    double c9 = 0.0;
    double c_sigma2 = 0.0;
    int n_terms = 5;
    double eta = 1.0;
};

inline ZfConstants zf_constants(const SystemParams &p)
{
    p.validate();
    if (p.M - p.K + 1 < 1)
        throw DomainError("zf_constants: ZF needs M >= K");
    ZfConstants c;
    c.M = p.M;
    c.K = p.K;
    c.n_terms = p.n_terms;
    c.eta = numerics::eta(p.n_terms);
    c.c_sigma2 = c_sigma2(p);

    const double g = std::pow(numerics::gamma_fn(p.epsilon / 2.0 + 1.0), p.alpha);
    const double cs = c.c_sigma2;
    c.c9 = 2.0 * g / (p.alpha - 2.0) + cs;
    c.c8 = (2.0 * g + (p.alpha - 2.0) * cs) / ((p.alpha - 2.0) * (1.0 + cs) + 2.0 * g);

    const double M = static_cast<double>(p.M);
    const double K = static_cast<double>(p.K);
    const double dof = M - K + 1.0;
    const double spill = M * (K - 1.0) / (dof * dof);
    c.c6 = c.c9 * (1.0 / dof + 1.0 / (M + 1.0) + spill) + spill * c.c8;
    c.c7 = M / (M + 1.0) * std::pow(numerics::gamma_fn(p.epsilon + 1.0), p.alpha) / (p.alpha - 1.0) +
           (1.0 / (M + 1.0) + spill) * c.c9 * c.c9 + spill * c.c8 * c.c9;
    return c;
}

// P(SINR > T) = sum_n C(N,n) (-1)^(n+1) int_0^inf exp(-n eta T (c6 t^a + c7 t^(2a)) - t) dt,
// a = alpha (1-eps) / 2.
inline double zf_ccdf(double T, const ZfConstants &c, double alpha, double epsilon,
                      const numerics::QuadratureSpec &quad = {})
{
    if (!(T > 0.0))
        throw DomainError("zf_ccdf: threshold must be positive");
    if (!(alpha > 2.0))
        throw DomainError("alpha must exceed 2");
    const double a = alpha * (1.0 - epsilon) / 2.0;
    const double raw = numerics::alternating_binomial_sum(c.n_terms, [&](int n) {
        const double scale = static_cast<double>(n) * c.eta * T;
        return numerics::integrate_semi_infinite(
            [&](double t) {
                const double ta = std::pow(t, a);
                return std::exp(-scale * (c.c6 * ta + c.c7 * ta * ta) - t);
            },
            quad);
    });
    return checked_probability(raw, "zf_ccdf");
}

} // namespace mmimo::zf
