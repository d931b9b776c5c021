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

// Closed-form CCDF evaluators selected by receiver and power-control special case.

#include <functional>
#include <string>

#include "errors.hpp"
#include "montecarlo.hpp"
#include "mrc.hpp"
#include "numerics.hpp"
#include "system.hpp"
#include "zf.hpp"

namespace mmimo
{

enum class AnalyticForm
{
    general, // fractional power control with noise (MRC or ZF)
    no_pc,   // MRC, eps = 0, no noise
    full_pc, // MRC, eps = 1, no noise
};

inline AnalyticForm parse_analytic_form(const std::string &s)
{
    if (s == "general")
        return AnalyticForm::general;
    if (s == "no_pc")
        return AnalyticForm::no_pc;
    if (s == "full_pc")
        return AnalyticForm::full_pc;
    throw ConfigError("form", "expected general, no_pc or full_pc");
}

// Returns T (linear) -> P(SINR > T). Constants are computed once up front.
inline std::function<double(double)> make_ccdf_evaluator(const SystemParams &p, montecarlo::Receiver receiver,
                                                         AnalyticForm form = AnalyticForm::general,
                                                         const numerics::QuadratureSpec &quad = {},
                                                         mrc::IntraCellIntegral intra = mrc::IntraCellIntegral::exact)
{
    p.validate();
    if (receiver == montecarlo::Receiver::zf)
    {
        if (form != AnalyticForm::general)
            throw ConfigError("form", "the special-case forms exist for MRC only");
        const auto c = zf::zf_constants(p);
        return [c, p, quad](double T) { return zf::zf_ccdf(T, c, p.alpha, p.epsilon, quad); };
    }
    switch (form)
    {
    case AnalyticForm::no_pc:
        return [p, quad](double T) { return mrc::mrc_ccdf_no_pc(T, p.M, p.K, p.alpha, p.n_terms, quad); };
    case AnalyticForm::full_pc:
        return [p](double T) { return mrc::mrc_ccdf_full_pc(T, p.M, p.K, p.alpha, p.n_terms); };
    default:
    {
        const auto c = mrc::mrc_constants(p);
        return [c, p, quad, intra](double T) { return mrc::mrc_ccdf(T, c, p.alpha, p.epsilon, quad, intra); };
    }
    }
}

// Analytic CCDF tabulated on a dB grid.
inline CcdfCurve analytic_curve(const SystemParams &p, montecarlo::Receiver receiver,
                                const std::vector<double> &thresholds_db, AnalyticForm form = AnalyticForm::general,
                                std::string meta = {}, mrc::IntraCellIntegral intra = mrc::IntraCellIntegral::exact)
{
    return tabulate_ccdf(make_ccdf_evaluator(p, receiver, form, {}, intra), thresholds_db, std::move(meta));
}

} // namespace mmimo
