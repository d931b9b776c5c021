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

// Run configuration: JSON ingestion with defaults, validation, emission and digest.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

#include "curves.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "montecarlo.hpp"
#include "mrc.hpp"
#include "propagation.hpp"
#include "system.hpp"
#include "zf.hpp"

namespace mmimo
{

using json = nlohmann::json;

struct NoiseSpec
{
    enum class Kind
    {
        off,
        dbm,
        thermal
    };
    Kind kind = Kind::thermal;
    double sigma2_dbm = -100.0;
    double bandwidth_hz = 20.0e6;
    double noise_figure_db = 0.0;

    double sigma2_w() const
    {
        switch (kind)
        {
        case Kind::dbm:
            return propagation::dbm_to_watt(sigma2_dbm);
        case Kind::thermal:
            return propagation::NoiseModel::thermal(bandwidth_hz, noise_figure_db).sigma2_w;
        default:
            return 0.0;
        }
    }
};

struct ThresholdSpec
{
    double min_db = -10.0;
    double max_db = 30.0;
    double step_db = 0.5;

    std::vector<double> grid() const { return make_threshold_grid(min_db, max_db, step_db); }
};

struct RunConfig
{
    int M = 64;
    int K = 10;
    double alpha = 4.0;
    double epsilon = 0.0;
    double isd_m = 500.0;
    double lambda_b = geometry::density_from_isd(500.0);
    double C = propagation::free_space_reference_gain(2.0e9);
    double P_t_dbm = 23.0;
    NoiseSpec noise;
    int N_terms = 5;
    geometry::LayoutKind layout = geometry::LayoutKind::ppp;
    int hex_rings = 2;
    std::uint64_t iterations = 10000;
    std::uint64_t master_seed = 1;
    ThresholdSpec thresholds;
    double T_max_db = 21.0;
    double T_c_symbols = 200.0;
    double user_density_multiplier = 60.0;
    double sim_radius_factor = 10.0;
    geometry::SchedulingMode scheduling = geometry::SchedulingMode::ppp_thinning;
    zf::IntraCellModel zf_intra = zf::IntraCellModel::exact;
    zf::CombinerGainModel zf_gain = zf::CombinerGainModel::deterministic;
    mrc::IntraCellIntegral mrc_intra = mrc::IntraCellIntegral::exact;

    void validate() const
    {
        if (M < 1)
            throw ConfigError("M", "must be at least 1");
        if (K < 1)
            throw ConfigError("K", "must be at least 1");
        if (!(alpha > 2.0))
            throw ConfigError("alpha", "alpha must exceed 2");
        if (!(epsilon >= 0.0 && epsilon <= 1.0))
            throw ConfigError("epsilon", "must lie in [0, 1]");
        if (!(isd_m > 0.0))
            throw ConfigError("isd_m", "must be positive");
        if (!(lambda_b > 0.0))
            throw ConfigError("lambda_b", "must be positive");
        if (!(C > 0.0))
            throw ConfigError("C", "must be positive");
        if (!std::isfinite(P_t_dbm))
            throw ConfigError("P_t_dbm", "must be finite");
        if (noise.kind == NoiseSpec::Kind::thermal && !(noise.bandwidth_hz > 0.0))
            throw ConfigError("noise.bandwidth_hz", "must be positive");
        if (N_terms < 1 || N_terms > numerics::kMaxBinomialTerms)
            throw ConfigError("N_terms", "must lie in [1, " + std::to_string(numerics::kMaxBinomialTerms) + "]");
        if (hex_rings < 0)
            throw ConfigError("hex_rings", "must be non-negative");
        if (iterations < 1)
            throw ConfigError("iterations", "must be at least 1");
        if (!(thresholds.step_db > 0.0) || !(thresholds.max_db >= thresholds.min_db))
            throw ConfigError("thresholds_db", "need min <= max and a positive step");
        if (!(T_max_db > -100.0 && std::isfinite(T_max_db)))
            throw ConfigError("T_max_db", "must be finite");
        if (!(T_c_symbols >= 1.0))
            throw ConfigError("T_c_symbols", "must be at least 1");
        if (!(user_density_multiplier > 0.0))
            throw ConfigError("user_density_multiplier", "must be positive");
        if (!(sim_radius_factor >= 5.0))
            throw ConfigError("sim_radius_factor", "must be at least 5");
    }

    // ZF needs at least as many antennas as users.
    void validate_zf() const
    {
        if (M < K)
            throw ConfigError("M", "ZF requires M >= K");
    }

    double p_t_w() const { return propagation::dbm_to_watt(P_t_dbm); }
    double t_max() const { return numerics::db_to_linear(T_max_db); }

    SystemParams system() const
    {
        SystemParams p;
        p.M = M;
        p.K = K;
        p.alpha = alpha;
        p.epsilon = epsilon;
        p.sigma2 = noise.sigma2_w();
        p.p_t = p_t_w();
        p.C = C;
        p.lambda_b = lambda_b;
        p.n_terms = N_terms;
        return p;
    }

    montecarlo::SimConfig simulation() const
    {
        montecarlo::SimConfig s;
        s.geometry.lambda_b = lambda_b;
        s.geometry.sim_radius_factor = sim_radius_factor;
        s.geometry.user_density_multiplier = user_density_multiplier;
        s.geometry.scheduling_mode = scheduling;
        s.geometry.layout = layout;
        s.geometry.hex_isd_m = isd_m;
        s.geometry.hex_rings = hex_rings;
        s.path_loss.C = C;
        s.path_loss.alpha = alpha;
        s.p_t = p_t_w();
        s.K = K;
        s.zf_options.intra = zf_intra;
        s.zf_options.gain = zf_gain;
        s.zf_options.mean_signal =
            std::pow(C, 1.0 - epsilon) * std::pow(lambda_b * std::numbers::pi, alpha * (1.0 - epsilon) / 2.0);
        return s;
    }

    montecarlo::SinrProbe probe(montecarlo::Receiver r) const { return {r, M, epsilon, noise.sigma2_w()}; }
};

// ---------------------------------------------------------------------------------------------
// JSON

namespace detail
{

inline std::string join_path(const std::string &base, const std::string &key)
{
    return base.empty() ? key : base + "." + key;
}

inline void reject_unknown(const json &obj, const std::set<std::string> &known, const std::string &base)
{
    for (const auto &item : obj.items())
        if (!known.count(item.key()))
            throw ConfigError(join_path(base, item.key()), "unknown key");
}

template <typename T>
T get_number(const json &obj, const std::string &key, const std::string &path, T fallback)
{
    if (!obj.contains(key))
        return fallback;
    const auto &v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(path, "expected a number");
    if constexpr (std::is_integral_v<T>)
    {
        if (!v.is_number_integer())
        {
            const double d = v.get<double>();
            if (d != std::floor(d))
                throw ConfigError(path, "expected an integer");
            return static_cast<T>(d);
        }
        if constexpr (std::is_unsigned_v<T>)
            if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)
                throw ConfigError(path, "must be non-negative");
    }
    return v.get<T>();
}

inline std::string get_string(const json &obj, const std::string &key, const std::string &path,
                              const std::string &fallback)
{
    if (!obj.contains(key))
        return fallback;
    if (!obj.at(key).is_string())
        throw ConfigError(path, "expected a string");
    return obj.at(key).get<std::string>();
}

} // namespace detail

inline json to_json(const RunConfig &c)
{
    json j;
    j["M"] = c.M;
    j["K"] = c.K;
    j["alpha"] = c.alpha;
    j["epsilon"] = c.epsilon;
    j["isd_m"] = c.isd_m;
    j["lambda_b"] = c.lambda_b;
    j["C"] = c.C;
    j["P_t_dbm"] = c.P_t_dbm;
    switch (c.noise.kind)
    {
    case NoiseSpec::Kind::off:
        j["noise"] = {{"kind", "off"}};
        break;
    case NoiseSpec::Kind::dbm:
        j["noise"] = {{"kind", "dbm"}, {"sigma2_dbm", c.noise.sigma2_dbm}};
        break;
    case NoiseSpec::Kind::thermal:
        j["noise"] = {{"kind", "thermal"},
                      {"bandwidth_hz", c.noise.bandwidth_hz},
                      {"noise_figure_db", c.noise.noise_figure_db}};
        break;
    }
    j["N_terms"] = c.N_terms;
    j["layout"] = c.layout == geometry::LayoutKind::ppp ? "ppp" : "hex";
    j["hex_rings"] = c.hex_rings;
    j["iterations"] = c.iterations;
    j["master_seed"] = c.master_seed;
    j["thresholds_db"] = {{"min", c.thresholds.min_db}, {"max", c.thresholds.max_db}, {"step", c.thresholds.step_db}};
    j["T_max_db"] = c.T_max_db;
    j["T_c_symbols"] = c.T_c_symbols;
    j["user_density_multiplier"] = c.user_density_multiplier;
    j["sim_radius_factor"] = c.sim_radius_factor;
    j["scheduling"] = c.scheduling == geometry::SchedulingMode::ppp_thinning ? "ppp_thinning" : "uniform_in_cell";
    j["zf"] = {{"intra", c.zf_intra == zf::IntraCellModel::exact ? "exact" : "mean_substituted"},
               {"gain", c.zf_gain == zf::CombinerGainModel::deterministic ? "deterministic" : "chi_square"}};
    j["mrc"] = {{"intra_integral", c.mrc_intra == mrc::IntraCellIntegral::exact ? "exact" : "rational"}};
    return j;
}

inline RunConfig config_from_json(const json &j)
{
    using detail::get_number;
    using detail::get_string;
    if (!j.is_object())
        throw ConfigError("<root>", "configuration must be a JSON object");
    detail::reject_unknown(j,
                           {"M", "K", "alpha", "epsilon", "isd_m", "lambda_b", "C", "P_t_dbm", "noise", "N_terms",
                            "layout", "hex_rings", "iterations", "master_seed", "thresholds_db", "T_max_db",
                            "T_c_symbols", "user_density_multiplier", "sim_radius_factor", "scheduling", "zf", "mrc"},
                           "");
    RunConfig c;
    c.M = get_number<int>(j, "M", "M", c.M);
    c.K = get_number<int>(j, "K", "K", c.K);
    c.alpha = get_number<double>(j, "alpha", "alpha", c.alpha);
    c.epsilon = get_number<double>(j, "epsilon", "epsilon", c.epsilon);
    c.isd_m = get_number<double>(j, "isd_m", "isd_m", c.isd_m);
    if (!(c.isd_m > 0.0))
        throw ConfigError("isd_m", "must be positive");
    c.lambda_b = j.contains("lambda_b") ? get_number<double>(j, "lambda_b", "lambda_b", 0.0)
                                        : geometry::density_from_isd(c.isd_m);
    c.C = get_number<double>(j, "C", "C", c.C);
    c.P_t_dbm = get_number<double>(j, "P_t_dbm", "P_t_dbm", c.P_t_dbm);

    if (j.contains("noise"))
    {
        const auto &n = j.at("noise");
        if (n.is_string())
        {
            if (n.get<std::string>() != "off")
                throw ConfigError("noise", "string form only accepts \"off\"");
            c.noise.kind = NoiseSpec::Kind::off;
        }
        else if (n.is_object())
        {
            detail::reject_unknown(n, {"kind", "sigma2_dbm", "bandwidth_hz", "noise_figure_db"}, "noise");
            const std::string kind = get_string(n, "kind", "noise.kind",
                                                n.contains("sigma2_dbm") ? "dbm" : "thermal");
            if (kind == "off")
                c.noise.kind = NoiseSpec::Kind::off;
            else if (kind == "dbm")
            {
                c.noise.kind = NoiseSpec::Kind::dbm;
                if (!n.contains("sigma2_dbm"))
                    throw ConfigError("noise.sigma2_dbm", "required when kind is dbm");
                c.noise.sigma2_dbm = get_number<double>(n, "sigma2_dbm", "noise.sigma2_dbm", 0.0);
            }
            else if (kind == "thermal")
            {
                c.noise.kind = NoiseSpec::Kind::thermal;
                c.noise.bandwidth_hz = get_number<double>(n, "bandwidth_hz", "noise.bandwidth_hz", c.noise.bandwidth_hz);
                c.noise.noise_figure_db =
                    get_number<double>(n, "noise_figure_db", "noise.noise_figure_db", c.noise.noise_figure_db);
            }
            else
                throw ConfigError("noise.kind", "expected off, dbm or thermal");
        }
        else
            throw ConfigError("noise", "expected \"off\" or an object");
    }

    c.N_terms = get_number<int>(j, "N_terms", "N_terms", c.N_terms);
    const std::string layout = get_string(j, "layout", "layout", "ppp");
    if (layout == "ppp")
        c.layout = geometry::LayoutKind::ppp;
    else if (layout == "hex")
        c.layout = geometry::LayoutKind::hex;
    else
        throw ConfigError("layout", "expected ppp or hex");
    c.hex_rings = get_number<int>(j, "hex_rings", "hex_rings", c.hex_rings);
    c.iterations = get_number<std::uint64_t>(j, "iterations", "iterations", c.iterations);
    c.master_seed = get_number<std::uint64_t>(j, "master_seed", "master_seed", c.master_seed);

    if (j.contains("thresholds_db"))
    {
        const auto &t = j.at("thresholds_db");
        if (!t.is_object())
            throw ConfigError("thresholds_db", "expected an object with min, max, step");
        detail::reject_unknown(t, {"min", "max", "step"}, "thresholds_db");
        c.thresholds.min_db = get_number<double>(t, "min", "thresholds_db.min", c.thresholds.min_db);
        c.thresholds.max_db = get_number<double>(t, "max", "thresholds_db.max", c.thresholds.max_db);
        c.thresholds.step_db = get_number<double>(t, "step", "thresholds_db.step", c.thresholds.step_db);
    }
    c.T_max_db = get_number<double>(j, "T_max_db", "T_max_db", c.T_max_db);
    c.T_c_symbols = get_number<double>(j, "T_c_symbols", "T_c_symbols", c.T_c_symbols);
    c.user_density_multiplier =
        get_number<double>(j, "user_density_multiplier", "user_density_multiplier", c.user_density_multiplier);
    c.sim_radius_factor = get_number<double>(j, "sim_radius_factor", "sim_radius_factor", c.sim_radius_factor);

    const std::string sched = get_string(j, "scheduling", "scheduling", "ppp_thinning");
    if (sched == "ppp_thinning")
        c.scheduling = geometry::SchedulingMode::ppp_thinning;
    else if (sched == "uniform_in_cell")
        c.scheduling = geometry::SchedulingMode::uniform_in_cell;
    else
        throw ConfigError("scheduling", "expected ppp_thinning or uniform_in_cell");

    if (j.contains("zf"))
    {
        const auto &z = j.at("zf");
        if (!z.is_object())
            throw ConfigError("zf", "expected an object");
        detail::reject_unknown(z, {"intra", "gain"}, "zf");
        const std::string intra = get_string(z, "intra", "zf.intra", "exact");
        if (intra == "exact")
            c.zf_intra = zf::IntraCellModel::exact;
        else if (intra == "mean_substituted")
            c.zf_intra = zf::IntraCellModel::mean_substituted;
        else
            throw ConfigError("zf.intra", "expected exact or mean_substituted");
        const std::string gain = get_string(z, "gain", "zf.gain", "deterministic");
        if (gain == "deterministic")
            c.zf_gain = zf::CombinerGainModel::deterministic;
        else if (gain == "chi_square")
            c.zf_gain = zf::CombinerGainModel::chi_square;
        else
            throw ConfigError("zf.gain", "expected deterministic or chi_square");
    }
    if (j.contains("mrc"))
    {
        const auto &m = j.at("mrc");
        if (!m.is_object())
            throw ConfigError("mrc", "expected an object");
        detail::reject_unknown(m, {"intra_integral"}, "mrc");
        const std::string intra = get_string(m, "intra_integral", "mrc.intra_integral", "exact");
        if (intra == "exact")
            c.mrc_intra = mrc::IntraCellIntegral::exact;
        else if (intra == "rational")
            c.mrc_intra = mrc::IntraCellIntegral::rational;
        else
            throw ConfigError("mrc.intra_integral", "expected exact or rational");
    }
    c.validate();
    return c;
}

inline RunConfig parse_config_text(const std::string &text)
{
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(j);
}

inline RunConfig parse_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("<file>", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

inline std::string emit_config(const RunConfig &c) { return to_json(c).dump(2); }

// 64-bit FNV-1a over the canonical (sorted-key, compact) JSON form, as 16 hex digits.
inline std::string config_digest(const RunConfig &c)
{
    const std::string canon = to_json(c).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : canon)
    {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    static const char *hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4)
        out[static_cast<std::size_t>(i)] = hex[h & 0xF];
    return out;
}

} // namespace mmimo
