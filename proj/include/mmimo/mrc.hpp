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

// Maximum ratio combining: per-realization conditional SINR and the closed-form
// coverage (CCDF) approximations for general, full and no power control.

#include <cmath>
#include <limits>

#include "errors.hpp"
#include "numerics.hpp"
#include "propagation.hpp"
#include "system.hpp"

namespace mmimo::mrc
{

// Fading-averaged SINR of the typical user (pilot 1 of the tagged cell):
//
//              (M+1) b1^2
//   -------------------------------------------------------------
//   M D2 + b1 D1(1) + (sum_{k>=2} b_k + sum_k D1(k)) (b1 + D1(1))
//
// with b_k = (beta_00^(k))^(1-eps). Returns +inf when the denominator vanishes.
inline double mrc_conditional_sinr(const propagation::LinkBudget &lb, int M)
{
    if (M < 1)
        throw DomainError("mrc_conditional_sinr: M must be at least 1");
    const std::size_t K = lb.pilots();
    if (K == 0 || lb.signal.size() != K || lb.delta1.size() != K)
        throw StructuralError("mrc_conditional_sinr: link budget is not populated for every pilot");

    const double b1 = lb.signal[0];
    double others = 0.0;
    for (std::size_t k = 1; k < K; ++k)
        others += lb.signal[k];
    for (std::size_t k = 0; k < K; ++k)
        others += lb.delta1[k];

    const double m = static_cast<double>(M);
    const double numerator = (m + 1.0) * b1 * b1;
    const double denominator = m * lb.delta2 + b1 * lb.delta1[0] + others * (b1 + lb.delta1[0]);
    if (denominator <= 0.0)
        return std::numeric_limits<double>::infinity();
    return numerator / denominator;
}

struct MrcConstants
{
    int M = 0;
    int K = 0;
    double c_sigma2 = 0.0;
    double interference_level = 0.0; // 2 Gamma^alpha(eps/2+1)/(alpha-2) + C_sigma2
    double c1 = 0.0;                 // (K+1)/(M+1) * level
    double c2 = 0.0;                 // M Gamma^alpha(eps+1) / ((M+1)(alpha-1)) + K/(M+1) * level^2
    double c5 = 0.0;                 // full power control, depends on alpha only
    double mu = 0.0;                 // K / (M+1)^(2/alpha)
    int n_terms = 5;
    double eta = 1.0;
};

inline MrcConstants mrc_constants(const SystemParams &p)
{
    p.validate();
    MrcConstants c;
    c.M = p.M;
    c.K = p.K;
    c.n_terms = p.n_terms;
    c.eta = numerics::eta(p.n_terms);
    c.c_sigma2 = c_sigma2(p);
    c.interference_level = mean_interference_level(p.alpha, p.epsilon, c.c_sigma2);

    const double m1 = static_cast<double>(p.M) + 1.0;
    const double K = static_cast<double>(p.K);
    const double level = c.interference_level;
    c.c1 = (K + 1.0) / m1 * level;
    c.c2 = static_cast<double>(p.M) * std::pow(numerics::gamma_fn(p.epsilon + 1.0), p.alpha) / (m1 * (p.alpha - 1.0)) +
           K / m1 * level * level;

    const double g = std::pow(numerics::gamma_fn(1.5), p.alpha);
    c.c5 = (4.0 * g * g + (p.alpha * p.alpha - 4.0) * g) / ((p.alpha - 2.0) * (p.alpha - 2.0));
    c.mu = K / std::pow(m1, 2.0 / p.alpha);
    return c;
}

// How the intra-cell factor C3(t) is evaluated.
enum class IntraCellIntegral
{
    exact,       // (int_0^inf exp(-u - s u^-a) du)^(K-1)
    rational,    // exp(-x) ~ 1/(1+x) inside the integral: (1 - s int_0^inf e^-u / (s + u^a) du)^(K-1)
};

namespace detail
{

inline double intra_cell_factor(double s, double a, int interferers, IntraCellIntegral mode,
                                const numerics::QuadratureSpec &quad)
{
    if (interferers == 0 || s == 0.0)
        return 1.0;
    double base;
    if (a == 0.0)
        base = std::exp(-s);
    else if (mode == IntraCellIntegral::exact)
        base = numerics::integrate_semi_infinite(
            [&](double u) { return u <= 0.0 ? 0.0 : std::exp(-u - s * std::pow(u, -a)); }, quad);
    else
        base = 1.0 - s * numerics::integrate_semi_infinite(
                             [&](double u) { return std::exp(-u) / (s + std::pow(u, a)); }, quad);
    return std::pow(std::clamp(base, 0.0, 1.0), interferers);
}

} // namespace detail

// Coverage P(SINR > T) for general fractional power control and noise (T linear).
//
//   sum_n C(N,n) (-1)^(n+1) int_0^inf exp(-t - n eta T (c1 t^a + c2 t^(2a))) C3_n(t) dt
//   C3_n(t) = (int_0^inf exp(-u - u^-a n eta T C4(t)) du)^(K-1)
//   C4(t)   = (level t^(2a) + t^a) / (M+1),   a = alpha (1-eps) / 2
//
// c1 carries the t^a power and c2 the t^(2a) power; this pairing follows from the conditional
// SINR after mean substitution and is what makes the eps = 0 and eps = 1 special cases line up.
inline double mrc_ccdf(double T, const MrcConstants &c, double alpha, double epsilon,
                       const numerics::QuadratureSpec &quad = {},
                       IntraCellIntegral intra = IntraCellIntegral::exact)
{
    if (!(T > 0.0))
        throw DomainError("mrc_ccdf: threshold must be positive");
    if (!(alpha > 2.0))
        throw DomainError("alpha must exceed 2");
    const double a = alpha * (1.0 - epsilon) / 2.0;
    const double m1 = static_cast<double>(c.M) + 1.0;
    numerics::QuadratureSpec inner = quad;
    inner.abs_tol = std::min(quad.abs_tol, 1e-10);
    inner.rel_tol = std::min(quad.rel_tol, 1e-10);

    const double raw = numerics::alternating_binomial_sum(c.n_terms, [&](int n) {
        const double scale = static_cast<double>(n) * c.eta * T;
        return numerics::integrate_semi_infinite(
            [&](double t) {
                const double ta = std::pow(t, a);
                const double t2a = ta * ta;
                const double expo = -t - scale * (c.c1 * ta + c.c2 * t2a);
                if (expo < -745.0)
                    return 0.0;
                const double c4 = (c.interference_level * t2a + ta) / m1;
                return std::exp(expo) * detail::intra_cell_factor(scale * c4, a, c.K - 1, intra, inner);
            },
            quad);
    });
    return checked_probability(raw, "mrc_ccdf");
}

// Full path-loss compensation (eps = 1), no noise:
//   sum_n C(N,n) (-1)^(n+1) exp(-T eta n ((c5 K + Gamma^alpha(1.5)) / (M+1) + 1/(alpha-1)))
inline double mrc_ccdf_full_pc(double T, int M, int K, double alpha, int n_terms = 5)
{
    if (!(T > 0.0))
        throw DomainError("mrc_ccdf_full_pc: threshold must be positive");
    SystemParams p;
    p.M = M, p.K = K, p.alpha = alpha, p.epsilon = 1.0, p.n_terms = n_terms;
    const auto c = mrc_constants(p);
    const double g = std::pow(numerics::gamma_fn(1.5), alpha);
    const double rate = (c.c5 * K + g) / (static_cast<double>(M) + 1.0) + 1.0 / (alpha - 1.0);
    const double raw = numerics::alternating_binomial_sum(
        n_terms, [&](int n) { return std::exp(-T * c.eta * static_cast<double>(n) * rate); });
    return checked_probability(raw, "mrc_ccdf_full_pc");
}

// No power control (eps = 0), no noise:
//   sum_n C(N,n) (-1)^(n+1) int_0^inf exp(-(mu Gamma(1-2/alpha) (n eta T)^(2/alpha) + 1) t - n eta T t^alpha / (alpha-1)) dt
// M and K enter only through mu = K / (M+1)^(2/alpha).
inline double mrc_ccdf_no_pc(double T, int M, int K, double alpha, int n_terms = 5,
                             const numerics::QuadratureSpec &quad = {})
{
    if (!(T > 0.0))
        throw DomainError("mrc_ccdf_no_pc: threshold must be positive");
    SystemParams p;
    p.M = M, p.K = K, p.alpha = alpha, p.epsilon = 0.0, p.n_terms = n_terms;
    const auto c = mrc_constants(p);
    const double g = numerics::gamma_fn(1.0 - 2.0 / alpha);
    const double raw = numerics::alternating_binomial_sum(n_terms, [&](int n) {
        const double x = static_cast<double>(n) * c.eta * T;
        const double linear = c.mu * g * std::pow(x, 2.0 / alpha) + 1.0;
        const double power = x / (alpha - 1.0);
        return numerics::integrate_semi_infinite(
            [&](double t) { return std::exp(-linear * t - power * std::pow(t, alpha)); }, quad);
    });
    return checked_probability(raw, "mrc_ccdf_no_pc");
}

} // namespace mmimo::mrc
