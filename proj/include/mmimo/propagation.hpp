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

// Path loss, fractional power control, noise, and the per-realization interference
// aggregates that both receivers' conditional SINR expressions are built from.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"

namespace mmimo::propagation
{

inline constexpr double kSpeedOfLight = 299'792'458.0;

// Free-space gain at a 1 m reference distance, (c / (4 pi f_c))^2.
inline double free_space_reference_gain(double carrier_hz)
{
    const double g = kSpeedOfLight / (4.0 * std::numbers::pi * carrier_hz);
    return g * g;
}

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

struct PathLossModel
{
    double C = free_space_reference_gain(2.0e9);
    double alpha = 4.0;
    double min_distance_m = 1.0;

    void validate() const
    {
        if (!(alpha > 2.0))
            throw DomainError("alpha must exceed 2");
        if (!(C > 0.0))
            throw DomainError("path-loss constant C must be positive");
        if (!(min_distance_m > 0.0))
            throw DomainError("minimum distance must be positive");
    }
};

struct PowerControl
{
    double epsilon = 0.0; // fraction of path loss compensated
    double p_t = dbm_to_watt(23.0);

    void validate() const
    {
        if (!(epsilon >= 0.0 && epsilon <= 1.0))
            throw DomainError("epsilon must lie in [0, 1]");
        if (!(p_t > 0.0))
            throw DomainError("P_t must be positive");
    }
};

struct NoiseModel
{
    double sigma2_w = 0.0;

    static NoiseModel off() { return {}; }

    static NoiseModel from_dbm(double dbm) { return {dbm_to_watt(dbm)}; }

    // -174 dBm/Hz thermal floor over the bandwidth plus the receiver noise figure.
    static NoiseModel thermal(double bandwidth_hz, double noise_figure_db = 0.0)
    {
        if (!(bandwidth_hz > 0.0))
            throw DomainError("bandwidth must be positive");
        return from_dbm(-174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
    }
};

// Counts distance clamps applied by path_loss.
struct PathLossDiagnostics
{
    std::size_t clamped = 0;
};

// beta = C d^-alpha, with d clamped from below to model.min_distance_m.
inline double path_loss(double distance_m, const PathLossModel &model, PathLossDiagnostics *diag = nullptr)
{
    if (distance_m < model.min_distance_m)
    {
        distance_m = model.min_distance_m;
        if (diag)
            ++diag->clamped;
    }
    return model.C * std::pow(distance_m, -model.alpha);
}

// P = P_t beta^-epsilon; no maximum-power cap.
inline double tx_power(double beta_serving, const PowerControl &pc)
{
    if (!(beta_serving > 0.0))
        throw DomainError("tx_power: serving gain must be positive");
    return pc.p_t * std::pow(beta_serving, -pc.epsilon);
}

// Interference aggregates of one realization, normalised by P_t.
//
//   interferers[k][l] = (beta_ll^(k))^-eps beta_0l^(k)             other cells l > 0
//   delta1[k] = sum_l interferers[k][l] + sigma^2 / (K P_t)
//   delta2    = sum_l (interferers[0][l])^2                          pilot 1 only
//   S[k]      = (beta_00^(k))^(1-eps) + delta1[k]
struct LinkBudget
{
    double epsilon = 0.0;
    double noise_term = 0.0; // sigma^2 / (K P_t)
    std::vector<double> beta00;
    std::vector<double> signal; // (beta_00^(k))^(1-eps)
    std::vector<std::vector<double>> interferers;
    std::vector<double> delta1;
    double delta2 = 0.0;
    std::vector<double> S;
    std::size_t clamped_links = 0;

    std::size_t pilots() const { return beta00.size(); }

    // Assembles the aggregates from raw per-pilot terms. `beta00` and `interferers` must have
    // one entry per pilot.
    static LinkBudget from_terms(std::vector<double> beta00, std::vector<std::vector<double>> interferers,
                                 double epsilon, double noise_term)
    {
        if (beta00.empty() || beta00.size() != interferers.size())
            throw StructuralError("LinkBudget: need one serving gain and one interferer list per pilot");
        LinkBudget lb;
        lb.epsilon = epsilon;
        lb.noise_term = noise_term;
        lb.beta00 = std::move(beta00);
        lb.interferers = std::move(interferers);
        const std::size_t K = lb.beta00.size();
        lb.signal.resize(K);
        lb.delta1.resize(K);
        lb.S.resize(K);
        for (std::size_t k = 0; k < K; ++k)
        {
            lb.signal[k] = std::pow(lb.beta00[k], 1.0 - epsilon);
            double sum = 0.0;
            for (double p : lb.interferers[k])
                sum += p;
            lb.delta1[k] = sum + noise_term;
            lb.S[k] = lb.signal[k] + lb.delta1[k];
        }
        for (double p : lb.interferers[0])
            lb.delta2 += p * p;
        return lb;
    }

    // The same aggregates with pilot j moved into the typical-user slot.
    LinkBudget with_pilot_first(std::size_t j) const
    {
        if (j >= pilots())
            throw StructuralError("LinkBudget: pilot index out of range");
        auto b = beta00;
        auto terms = interferers;
        std::swap(b[0], b[j]);
        std::swap(terms[0], terms[j]);
        return from_terms(std::move(b), std::move(terms), epsilon, noise_term);
    }
};

// Aggregates for the tagged cell of a realization; sums run over every other cell in the
// simulated region.
inline LinkBudget link_budget(const geometry::NetworkRealization &real, const PathLossModel &model,
                              const PowerControl &pc, const NoiseModel &noise, int K)
{
    model.validate();
    pc.validate();
    if (K < 1 || real.pilots() != static_cast<std::size_t>(K))
        throw StructuralError("link_budget: realization does not carry exactly K pilots");
    const std::size_t cells = real.cells();
    for (const auto &pilot : real.users)
        if (pilot.size() != cells)
            throw StructuralError("link_budget: pilot population does not cover every cell");
    if (real.tagged_bs >= cells)
        throw StructuralError("link_budget: tagged base station out of range");

    PathLossDiagnostics diag;
    const auto &tagged = real.bs_points[real.tagged_bs];
    std::vector<double> beta00(static_cast<std::size_t>(K));
    std::vector<std::vector<double>> interferers(static_cast<std::size_t>(K));
    for (std::size_t k = 0; k < static_cast<std::size_t>(K); ++k)
    {
        const auto &users = real.users[k];
        beta00[k] = path_loss(geometry::distance(users[real.tagged_bs], tagged), model, &diag);
        auto &terms = interferers[k];
        terms.reserve(cells - 1);
        for (std::size_t l = 0; l < cells; ++l)
        {
            if (l == real.tagged_bs)
                continue;
            const double own = path_loss(geometry::distance(users[l], real.bs_points[l]), model, &diag);
            const double cross = path_loss(geometry::distance(users[l], tagged), model, &diag);
            terms.push_back(std::pow(own, -pc.epsilon) * cross);
        }
    }
    auto lb = LinkBudget::from_terms(std::move(beta00), std::move(interferers), pc.epsilon,
                                     noise.sigma2_w / (static_cast<double>(K) * pc.p_t));
    lb.clamped_links = diag.clamped;
    return lb;
}

// Homogeneous PPP of density lambda_b on the annulus R_e < r <= region_radius around the
// tagged base station at the origin.
template <typename Rng>
std::vector<geometry::Point2> sample_exclusion_ball_interferers(double lambda_b, double region_radius, Rng &rng)
{
    if (!(lambda_b > 0.0))
        throw DomainError("lambda_b must be positive");
    const double re2 = 1.0 / (std::numbers::pi * lambda_b);
    const double r2 = region_radius * region_radius;
    if (!(r2 > re2))
        throw DomainError("region radius must exceed the exclusion radius");
    std::poisson_distribution<long> count_dist(lambda_b * std::numbers::pi * (r2 - re2));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const long count = count_dist(rng);
    std::vector<geometry::Point2> points;
    points.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i)
    {
        const double r = std::sqrt(re2 + unit(rng) * (r2 - re2));
        const double theta = 2.0 * std::numbers::pi * unit(rng);
        points.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
    return points;
}

// Mean of sum_l beta_0l over the exclusion-ball PPP extended to infinity: 2C (lambda_b pi)^(alpha/2) / (alpha - 2).
inline double campbell_mean_interference(double C, double alpha, double lambda_b)
{
    if (!(alpha > 2.0))
        throw DomainError("alpha must exceed 2");
    return 2.0 * C * std::pow(lambda_b * std::numbers::pi, alpha / 2.0) / (alpha - 2.0);
}

} // namespace mmimo::propagation
