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

// Coverage curves on a dB threshold grid, pointwise comparison, and CSV I/O.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"

namespace mmimo
{

enum class CurveSource
{
    analytic,
    empirical,
};

struct CcdfCurve
{
    std::vector<double> thresholds_db;
    std::vector<double> probabilities;
    CurveSource source = CurveSource::analytic;
    std::string meta; // digest of the producing configuration

    std::size_t size() const { return thresholds_db.size(); }
};

struct CompareReport
{
    double max_abs_dev = 0.0;
    double argmax_threshold_db = 0.0;
    std::vector<double> deviations;
};

// min, min+step, ..., up to max (inclusive within a small rounding allowance).
inline std::vector<double> make_threshold_grid(double min_db, double max_db, double step_db)
{
    if (!(step_db > 0.0) || !(max_db >= min_db))
        throw DomainError("threshold grid needs step > 0 and max >= min");
    std::vector<double> grid;
    const auto n = static_cast<std::size_t>(std::floor((max_db - min_db) / step_db + 1e-9));
    grid.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        grid.push_back(min_db + static_cast<double>(i) * step_db);
    return grid;
}

// Tabulates a coverage evaluator taking a linear threshold.
inline CcdfCurve tabulate_ccdf(const std::function<double(double)> &ccdf, const std::vector<double> &thresholds_db,
                               std::string meta = {})
{
    CcdfCurve curve;
    curve.thresholds_db = thresholds_db;
    curve.source = CurveSource::analytic;
    curve.meta = std::move(meta);
    curve.probabilities.reserve(thresholds_db.size());
    for (double db : thresholds_db)
        curve.probabilities.push_back(ccdf(numerics::db_to_linear(db)));
    return curve;
}

inline CompareReport compare_curves(const CcdfCurve &a, const CcdfCurve &b)
{
    if (a.thresholds_db.size() != b.thresholds_db.size() || a.probabilities.size() != a.thresholds_db.size() ||
        b.probabilities.size() != b.thresholds_db.size())
        throw StructuralError("compare_curves: threshold grids differ in length");
    CompareReport r;
    r.deviations.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        if (std::abs(a.thresholds_db[i] - b.thresholds_db[i]) > 1e-9)
            throw StructuralError("compare_curves: threshold grids differ at index " + std::to_string(i));
        const double d = std::abs(a.probabilities[i] - b.probabilities[i]);
        r.deviations.push_back(d);
        if (i == 0 || d > r.max_abs_dev)
        {
            r.max_abs_dev = d;
            r.argmax_threshold_db = a.thresholds_db[i];
        }
    }
    return r;
}

inline void write_curve_csv(std::ostream &os, const CcdfCurve &curve)
{
    os << "threshold_db,ccdf\n";
    os << std::setprecision(10);
    for (std::size_t i = 0; i < curve.size(); ++i)
        os << curve.thresholds_db[i] << ',' << curve.probabilities[i] << '\n';
}

inline CcdfCurve read_curve_csv(std::istream &is, CurveSource source = CurveSource::empirical)
{
    std::string line;
    if (!std::getline(is, line) || line.rfind("threshold_db,ccdf", 0) != 0)
        throw StructuralError("curve CSV must start with the header 'threshold_db,ccdf'");
    CcdfCurve curve;
    curve.source = source;
    std::size_t row = 1;
    while (std::getline(is, line))
    {
        ++row;
        if (line.empty() || line == "\r")
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw StructuralError("curve CSV: malformed row " + std::to_string(row));
        try
        {
            curve.thresholds_db.push_back(std::stod(line.substr(0, comma)));
            curve.probabilities.push_back(std::stod(line.substr(comma + 1)));
        }
        catch (const std::exception &)
        {
            throw StructuralError("curve CSV: non-numeric value in row " + std::to_string(row));
        }
    }
    return curve;
}

inline CcdfCurve read_curve_csv(const std::string &path, CurveSource source = CurveSource::empirical)
{
    std::ifstream in(path);
    if (!in)
        throw StructuralError("cannot open curve file " + path);
    return read_curve_csv(in, source);
}

} // namespace mmimo
