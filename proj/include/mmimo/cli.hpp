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

// Command-line front end: <tool> <command> --config <path> [--out <path>] [--receiver mrc|zf] [overrides]

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "analytic.hpp"
#include "config.hpp"
#include "curves.hpp"
#include "errors.hpp"
#include "montecarlo.hpp"
#include "planning.hpp"

namespace mmimo::cli
{

struct Overrides
{
    std::optional<int> M, K;
    std::optional<double> alpha, epsilon, isd_m, noise_dbm;
    std::optional<std::uint64_t> iterations, seed;
    bool noise_off = false;
};

inline montecarlo::Receiver parse_receiver(const std::string &s)
{
    if (s == "mrc")
        return montecarlo::Receiver::mrc;
    if (s == "zf")
        return montecarlo::Receiver::zf;
    throw ConfigError("receiver", "expected mrc or zf");
}

// "a:b:step" or a comma-separated list.
inline std::vector<double> parse_values(const std::string &spec)
{
    std::vector<double> out;
    if (spec.find(':') != std::string::npos)
    {
        double a, b, step;
        char c1, c2;
        std::istringstream in(spec);
        if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0) || b < a)
            throw ConfigError("values", "expected start:stop:step");
        const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i)
            out.push_back(a + static_cast<double>(i) * step);
        return out;
    }
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ','))
    {
        try
        {
            out.push_back(std::stod(item));
        }
        catch (const std::exception &)
        {
            throw ConfigError("values", "cannot parse '" + item + "'");
        }
    }
    if (out.empty())
        throw ConfigError("values", "no values given");
    return out;
}

class Dispatcher
{
public:
    Dispatcher(std::ostream &out, std::ostream &err) : out_(out), err_(err) {}

    int run(int argc, const char *const *argv)
    {
        CLI::App app{"Uplink massive MIMO SINR toolkit"};
        app.require_subcommand(1, 1);

        auto *simulate = add(app, "simulate", "Monte Carlo CCDF of the typical user (CSV threshold_db,ccdf)");
        simulate->add_option("--samples-out", samples_out_, "Also dump per-iteration samples (CSV iteration,sinr_db)");
        auto *analytic = add(app, "analytic", "Closed-form CCDF (CSV threshold_db,ccdf)");
        analytic->add_option("--form", form_, "general | no_pc | full_pc")->capture_default_str();
        auto *compare = add(app, "compare", "Analytic vs simulated CCDF, or two curve files (JSON report)");
        compare->add_option("--a", curve_a_, "First curve CSV");
        compare->add_option("--b", curve_b_, "Second curve CSV");
        compare->add_option("--form", form_, "Analytic form when curves are computed")->capture_default_str();
        auto *scaling = add(app, "scaling", "Scaling-law calculator (JSON)");
        scaling->add_option("--match-mrc", match_mrc_, "MRC antenna count to match with ZF");
        scaling->add_option("--k", scaling_k_, "Users per cell");
        scaling->add_option("--k-new", k_new_, "Target users per cell for MRC antenna scaling");
        auto *rate = add(app, "rate", "Spectral efficiency and cell throughput (JSON)");
        rate->add_option("--source", source_, "analytic | simulate")->capture_default_str();
        auto *sweep = add(app, "sweep", "Rates over an epsilon or K grid (CSV)");
        sweep->add_option("--param", sweep_param_, "epsilon | K")->required();
        sweep->add_option("--values", sweep_values_, "start:stop:step or a comma list")->required();
        sweep->add_option("--source", source_, "analytic | simulate")->capture_default_str();

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::ParseError &e)
        {
            return app.exit(e, out_, err_);
        }

        try
        {
            RunConfig cfg = config_path_.empty() ? RunConfig{} : parse_config(config_path_);
            apply_overrides(cfg);
            const auto receiver = parse_receiver(receiver_);
            if (receiver == montecarlo::Receiver::zf && !scaling->parsed())
                cfg.validate_zf();

            std::ostringstream body;
            if (simulate->parsed())
                cmd_simulate(cfg, receiver, body);
            else if (analytic->parsed())
                write_curve_csv(body, analytic_curve(cfg.system(), receiver, cfg.thresholds.grid(),
                                                     parse_analytic_form(form_), config_digest(cfg), cfg.mrc_intra));
            else if (compare->parsed())
                cmd_compare(cfg, receiver, body);
            else if (scaling->parsed())
                cmd_scaling(cfg, receiver, body);
            else if (rate->parsed())
                cmd_rate(cfg, receiver, body);
            else if (sweep->parsed())
                cmd_sweep(cfg, receiver, body);
            emit(body.str());
            return 0;
        }
        catch (const std::exception &e)
        {
            err_ << "error: " << e.what() << '\n';
            return 1;
        }
    }

private:
    CLI::App *add(CLI::App &app, const std::string &name, const std::string &help)
    {
        auto *sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path_, "JSON run configuration");
        sub->add_option("--out", out_path_, "Output file (default: stdout)");
        sub->add_option("--receiver", receiver_, "mrc | zf")->capture_default_str();
        sub->add_option("--M", ov_.M, "Override antennas per base station");
        sub->add_option("--K", ov_.K, "Override users per cell");
        sub->add_option("--alpha", ov_.alpha, "Override path-loss exponent");
        sub->add_option("--epsilon", ov_.epsilon, "Override power-control fraction");
        sub->add_option("--isd", ov_.isd_m, "Override inter-site distance (m); resets lambda_b");
        sub->add_option("--noise-dbm", ov_.noise_dbm, "Override noise power (dBm)");
        sub->add_flag("--noise-off", ov_.noise_off, "Disable noise");
        sub->add_option("--iterations", ov_.iterations, "Override Monte Carlo iterations");
        sub->add_option("--seed", ov_.seed, "Override master seed");
        return sub;
    }

    void apply_overrides(RunConfig &cfg) const
    {
        if (ov_.M)
            cfg.M = *ov_.M;
        if (ov_.K)
            cfg.K = *ov_.K;
        if (ov_.alpha)
            cfg.alpha = *ov_.alpha;
        if (ov_.epsilon)
            cfg.epsilon = *ov_.epsilon;
        if (ov_.isd_m)
        {
            cfg.isd_m = *ov_.isd_m;
            if (!(cfg.isd_m > 0.0))
                throw ConfigError("isd_m", "must be positive");
            cfg.lambda_b = geometry::density_from_isd(cfg.isd_m);
        }
        if (ov_.noise_dbm)
        {
            cfg.noise.kind = NoiseSpec::Kind::dbm;
            cfg.noise.sigma2_dbm = *ov_.noise_dbm;
        }
        if (ov_.noise_off)
            cfg.noise.kind = NoiseSpec::Kind::off;
        if (ov_.iterations)
            cfg.iterations = *ov_.iterations;
        if (ov_.seed)
            cfg.master_seed = *ov_.seed;
        cfg.validate();
    }

    void emit(const std::string &text) const
    {
        if (out_path_.empty())
        {
            out_ << text;
            return;
        }
        std::ofstream f(out_path_);
        if (!f)
            throw ConfigError("out", "cannot write " + out_path_);
        f << text;
    }

    static montecarlo::SinrSamples simulate(const RunConfig &cfg, montecarlo::Receiver receiver)
    {
        return montecarlo::run_uplink_sim(cfg.simulation(), cfg.probe(receiver), cfg.iterations, cfg.master_seed);
    }

    void cmd_simulate(const RunConfig &cfg, montecarlo::Receiver receiver, std::ostream &body) const
    {
        const auto samples = simulate(cfg, receiver);
        if (!samples_out_.empty())
        {
            std::ofstream f(samples_out_);
            if (!f)
                throw ConfigError("samples-out", "cannot write " + samples_out_);
            montecarlo::write_samples_csv(f, samples);
        }
        write_curve_csv(body, montecarlo::empirical_ccdf(samples, cfg.thresholds.grid(), config_digest(cfg)));
    }

    void cmd_compare(const RunConfig &cfg, montecarlo::Receiver receiver, std::ostream &body) const
    {
        CcdfCurve a, b;
        if (!curve_a_.empty() || !curve_b_.empty())
        {
            if (curve_a_.empty() || curve_b_.empty())
                throw ConfigError("compare", "--a and --b must be given together");
            a = read_curve_csv(curve_a_);
            b = read_curve_csv(curve_b_);
        }
        else
        {
            const auto grid = cfg.thresholds.grid();
            a = analytic_curve(cfg.system(), receiver, grid, parse_analytic_form(form_), config_digest(cfg),
                               cfg.mrc_intra);
            b = montecarlo::empirical_ccdf(simulate(cfg, receiver), grid, config_digest(cfg));
        }
        const auto r = compare_curves(a, b);
        json j;
        j["max_abs_dev"] = r.max_abs_dev;
        j["argmax_threshold_db"] = r.argmax_threshold_db;
        j["thresholds_db"] = a.thresholds_db;
        j["deviations"] = r.deviations;
        j["config_digest"] = config_digest(cfg);
        body << j.dump(2) << '\n';
    }

    void cmd_scaling(const RunConfig &cfg, montecarlo::Receiver receiver, std::ostream &body) const
    {
        const int K = scaling_k_.value_or(cfg.K);
        json j;
        j["alpha"] = cfg.alpha;
        j["epsilon"] = cfg.epsilon;
        j["K"] = K;
        j["s"] = planning::mrc_scaling_exponent(cfg.alpha, cfg.epsilon);
        j["xi"] = planning::zf_antenna_ratio(K, cfg.alpha, cfg.epsilon);
        if (receiver == montecarlo::Receiver::zf)
        {
            const int m_mrc = match_mrc_.value_or(cfg.M);
            const auto m = planning::zf_match_mrc(m_mrc, K, cfg.alpha, cfg.epsilon);
            j["receiver"] = "zf";
            j["M_mrc"] = m_mrc;
            j["M_zf"] = m.m_zf;
            j["M_zf_scaled"] = m.m_zf_scaled;
            j["valid"] = m.valid;
            if (!m.valid)
            {
                j["warning"] = m.warning;
                err_ << "warning: " << m.warning << '\n';
            }
        }
        else
        {
            j["receiver"] = "mrc";
            j["M"] = cfg.M;
            if (k_new_)
            {
                j["K_new"] = *k_new_;
                j["M_new"] = planning::scale_antennas(cfg.M, K, *k_new_, j["s"].get<double>());
            }
        }
        body << j.dump(2) << '\n';
    }

    double tau0(const RunConfig &cfg, montecarlo::Receiver receiver) const
    {
        if (source_ == "simulate")
            return montecarlo::spectral_efficiency(simulate(cfg, receiver), cfg.t_max());
        if (source_ != "analytic")
            throw ConfigError("source", "expected analytic or simulate");
        return planning::spectral_efficiency(make_ccdf_evaluator(cfg.system(), receiver, AnalyticForm::general, {},
                                                                 cfg.mrc_intra),
                                             cfg.t_max());
    }

    static json rate_json(const planning::RateResult &r)
    {
        return {{"psi", r.psi}, {"tau0", r.tau0}, {"tau0_bar", r.tau0_bar}, {"tau_cell", r.tau_cell}};
    }

    void cmd_rate(const RunConfig &cfg, montecarlo::Receiver receiver, std::ostream &body) const
    {
        auto j = rate_json(planning::overhead_and_throughput(cfg.K, cfg.T_c_symbols, tau0(cfg, receiver)));
        j["K"] = cfg.K;
        j["T_c_symbols"] = cfg.T_c_symbols;
        j["T_max_db"] = cfg.T_max_db;
        j["source"] = source_;
        body << j.dump(2) << '\n';
    }

    void cmd_sweep(const RunConfig &base, montecarlo::Receiver receiver, std::ostream &body) const
    {
        if (sweep_param_ != "epsilon" && sweep_param_ != "K")
            throw ConfigError("param", "expected epsilon or K");
        body << sweep_param_ << ",tau0,tau0_bar,tau_cell\n";
        body.precision(10);
        for (double v : parse_values(sweep_values_))
        {
            RunConfig cfg = base;
            if (sweep_param_ == "epsilon")
                cfg.epsilon = v;
            else
            {
                if (v != std::floor(v))
                    throw ConfigError("values", "K must be an integer");
                cfg.K = static_cast<int>(v);
            }
            cfg.validate();
            if (receiver == montecarlo::Receiver::zf)
                cfg.validate_zf();
            const auto r = planning::overhead_and_throughput(cfg.K, cfg.T_c_symbols, tau0(cfg, receiver));
            body << v << ',' << r.tau0 << ',' << r.tau0_bar << ',' << r.tau_cell << '\n';
        }
    }

    std::ostream &out_;
    std::ostream &err_;
    std::string config_path_, out_path_, receiver_ = "mrc", form_ = "general", samples_out_;
    std::string curve_a_, curve_b_, source_ = "analytic", sweep_param_, sweep_values_;
    std::optional<int> match_mrc_, scaling_k_, k_new_;
    Overrides ov_;
};

inline int dispatch(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr)
{
    Dispatcher d(out, err);
    return d.run(argc, argv);
}

} // namespace mmimo::cli
