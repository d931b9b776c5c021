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

// Special functions, adaptive quadrature and alternating binomial sums used by
// every closed-form coverage evaluator.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "errors.hpp"

namespace mmimo::numerics
{

struct QuadratureSpec
{
    double abs_tol = 1e-8;
    double rel_tol = 1e-8;
    int max_subdivisions = 200;

    void validate() const
    {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw DomainError("QuadratureSpec: tolerances must be positive");
        if (max_subdivisions < 1)
            throw DomainError("QuadratureSpec: max_subdivisions must be at least 1");
    }
};

struct QuadratureResult
{
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
};

// Gamma function. Throws for x <= 0 (the poles and the negative axis are never needed here).
inline double gamma_fn(double x)
{
    if (!(x > 0.0))
        throw DomainError("gamma_fn: argument must be positive, got " + std::to_string(x));
    return std::tgamma(x);
}

// eta = N (N!)^(-1/N), the scale of the normalized-gamma step approximation.
inline double eta(int n_terms)
{
    if (n_terms < 1)
        throw DomainError("eta: term count must be at least 1");
    const double n = static_cast<double>(n_terms);
    return n * std::exp(-std::lgamma(n + 1.0) / n);
}

inline std::uint64_t binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

inline constexpr int kMaxBinomialTerms = 20;

// sum_{n=1}^{N} C(N,n) (-1)^(n+1) term(n)
//
// Terms are accumulated in descending magnitude so the result does not depend on the
// evaluation order of `term`.
template <typename Term>
double alternating_binomial_sum(int n_terms, Term &&term)
{
    if (n_terms < 1 || n_terms > kMaxBinomialTerms)
        throw DomainError("alternating_binomial_sum: N must lie in [1, " + std::to_string(kMaxBinomialTerms) + "]");

    std::array<double, kMaxBinomialTerms> terms{};
    for (int n = 1; n <= n_terms; ++n)
    {
        const double sign = (n % 2 == 1) ? 1.0 : -1.0;
        terms[n - 1] = sign * static_cast<double>(binomial(n_terms, n)) * static_cast<double>(term(n));
    }
    std::sort(terms.begin(), terms.begin() + n_terms,
              [](double a, double b) { return std::abs(a) > std::abs(b); });
    double sum = 0.0;
    for (int i = 0; i < n_terms; ++i)
        sum += terms[i];
    return sum;
}

namespace detail
{

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment
{
    double a;
    double b;
    double value;
    double error;
    int piece;

    bool operator<(const Segment &o) const { return error < o.error; }
};

template <typename F>
std::pair<double, double> gauss_kronrod_15(F &f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j)
    {
        const double dx = half * kKronrodNodes[j];
        const double fsum = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[j] * fsum;
        if (j % 2 == 1)
            gauss += kGaussWeights[j / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;
    return {kronrod, std::abs(kronrod - gauss)};
}

// Globally adaptive bisection over a set of pieces; `eval(piece, x)` evaluates the
// (possibly transformed) integrand of each piece.
template <typename Eval>
QuadratureResult adaptive(Eval &&eval, std::vector<std::pair<double, double>> pieces, const QuadratureSpec &spec)
{
    spec.validate();
    std::priority_queue<Segment> heap;
    double total = 0.0;
    double total_err = 0.0;
    int count = 0;
    for (int p = 0; p < static_cast<int>(pieces.size()); ++p)
    {
        auto f = [&](double x) { return eval(p, x); };
        auto [v, e] = gauss_kronrod_15(f, pieces[p].first, pieces[p].second);
        heap.push({pieces[p].first, pieces[p].second, v, e, p});
        total += v;
        total_err += e;
        ++count;
    }

    auto converged = [&] { return total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };
    while (!converged())
    {
        if (count >= spec.max_subdivisions)
        {
            if (!std::isfinite(total))
                throw NumericalError("quadrature produced a non-finite value", total, total_err);
            throw NumericalError("quadrature did not converge within " + std::to_string(spec.max_subdivisions) +
                                     " subdivisions",
                                 total, total_err);
        }
        const Segment s = heap.top();
        heap.pop();
        const double mid = 0.5 * (s.a + s.b);
        auto f = [&](double x) { return eval(s.piece, x); };
        auto [v1, e1] = gauss_kronrod_15(f, s.a, mid);
        auto [v2, e2] = gauss_kronrod_15(f, mid, s.b);
        total += v1 + v2 - s.value;
        total_err += e1 + e2 - s.error;
        heap.push({s.a, mid, v1, e1, s.piece});
        heap.push({mid, s.b, v2, e2, s.piece});
        ++count;
    }

    // Re-sum to shed the drift of the running updates.
    double value = 0.0, error = 0.0;
    while (!heap.empty())
    {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    return {value, error, count};
}

} // namespace detail

// Adaptive Gauss-Kronrod quadrature on a finite interval [a, b].
template <typename F>
QuadratureResult integrate(F &&f, double a, double b, const QuadratureSpec &spec = {})
{
    if (a == b)
        return {};
    return detail::adaptive([&](int, double x) { return static_cast<double>(f(x)); }, {{a, b}}, spec);
}

// Integral over (0, inf) of an integrand carrying an e^{-t} envelope.
//
// [0, T_cut] is integrated directly with T_cut = ln(1/abs_tol), starting from a geometrically
// graded partition so that mass concentrated near t = 0 is not missed; the tail is mapped onto
// (0, 1] by t = T_cut - ln(u), where the integrand becomes f(T_cut - ln u) / u.
template <typename F>
QuadratureResult integrate_semi_infinite_detailed(F &&f, const QuadratureSpec &spec = {})
{
    spec.validate();
    const double t_cut = std::max(1.0, std::log(1.0 / spec.abs_tol));
    std::vector<std::pair<double, double>> pieces;
    double lo = 0.0;
    for (double b = 1.0 / 4096.0; b < t_cut; b *= 4.0)
    {
        pieces.emplace_back(lo, b);
        lo = b;
    }
    pieces.emplace_back(lo, t_cut);
    const int tail = static_cast<int>(pieces.size());
    pieces.emplace_back(0.0, 1.0);
    auto eval = [&](int piece, double x) -> double {
        if (piece != tail)
            return static_cast<double>(f(x));
        if (x <= 0.0)
            return 0.0;
        return static_cast<double>(f(t_cut - std::log(x))) / x;
    };
    QuadratureSpec grown = spec;
    grown.max_subdivisions = spec.max_subdivisions + tail + 1;
    return detail::adaptive(eval, std::move(pieces), grown);
}

template <typename F>
double integrate_semi_infinite(F &&f, const QuadratureSpec &spec = {})
{
    return integrate_semi_infinite_detailed(std::forward<F>(f), spec).value;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double linear)
{
    if (linear == std::numeric_limits<double>::infinity())
        return linear;
    return 10.0 * std::log10(linear);
}

} // namespace mmimo::numerics
