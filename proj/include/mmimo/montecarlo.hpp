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

// Monte Carlo harness: fresh geometry per iteration, conditional SINR of the typical user,
// empirical CCDF.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "curves.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "mrc.hpp"
#include "numerics.hpp"
#include "propagation.hpp"
#include "zf.hpp"

namespace mmimo::montecarlo
{

enum class Receiver
{
    mrc,
    zf
};

inline const char *to_string(Receiver r) { return r == Receiver::mrc ? "mrc" : "zf"; }

struct SinrSamples
{
    std::vector<double> values; // linear SINR, +inf when the interference vanishes
    Receiver receiver = Receiver::mrc;

    std::size_t count() const { return values.size(); }
};

// Everything a simulation needs besides the receiver-specific settings of each probe.
struct SimConfig
{
    geometry::GeometryConfig geometry;
    propagation::PathLossModel path_loss;
    double p_t = propagation::dbm_to_watt(23.0);
    int K = 10;
    zf::ZfOptions zf_options;
    // Record every scheduled user of the tagged cell (K samples per snapshot) instead of pilot 1
    // only. Pilots are exchangeable, so the marginal distribution is unchanged; used for rate
    // averages where the extra samples cut the variance.
    bool all_tagged_users = false;

    void validate() const
    {
        geometry.validate();
        path_loss.validate();
        if (K < 1)
            throw ConfigError("K", "must be at least 1");
        if (!(p_t > 0.0))
            throw ConfigError("P_t_dbm", "transmit power must be finite");
    }
};

// One SINR read-out taken on every simulated network snapshot. Several probes share the same
// geometry, which makes receiver and power-control comparisons paired.
struct SinrProbe
{
    Receiver receiver = Receiver::mrc;
    int M = 64;
    double epsilon = 0.0;
    double sigma2_w = 0.0;
};

// splitmix64 finaliser applied to (seed, index); gives independent per-iteration streams.
inline std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index)
{
    std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Worker count: MMIMO_THREADS if set to a positive integer, else the hardware concurrency.
inline unsigned worker_count()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("MMIMO_THREADS"))
    {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0)
            n = static_cast<unsigned>(v);
    }
    return n;
}

// Runs body(i) for i in [0, count) on up to `workers` threads. The first exception is rethrown.
template <typename Body>
void parallel_for(std::size_t count, unsigned workers, Body &&body)
{
    workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(1, count)));
    if (workers == 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load())
                return;
            try
            {
                body(i);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(run);
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

inline double receiver_sinr(const propagation::LinkBudget &lb, const SimConfig &cfg, const SinrProbe &probe,
                            std::mt19937_64 &rng)
{
    if (probe.receiver == Receiver::mrc)
        return mrc::mrc_conditional_sinr(lb, probe.M);
    return zf::zf_conditional_sinr(lb, probe.M, cfg.zf_options, rng);
}

// SINR of the typical user, or of every user of the tagged cell, written to `out`.
inline void probe_sinr(const geometry::NetworkRealization &net, const SimConfig &cfg, const SinrProbe &probe,
                       std::mt19937_64 &rng, double *out)
{
    const propagation::PowerControl pc{probe.epsilon, cfg.p_t};
    const auto lb = propagation::link_budget(net, cfg.path_loss, pc, propagation::NoiseModel{probe.sigma2_w}, cfg.K);
    out[0] = receiver_sinr(lb, cfg, probe, rng);
    if (cfg.all_tagged_users)
        for (std::size_t j = 1; j < lb.pilots(); ++j)
            out[j] = receiver_sinr(lb.with_pilot_first(j), cfg, probe, rng);
}

// Simulates `iterations` snapshots and evaluates every probe on each. Output order is by
// iteration index and does not depend on the worker count.
inline std::vector<SinrSamples> run_probes(const SimConfig &cfg, const std::vector<SinrProbe> &probes,
                                           std::size_t iterations, std::uint64_t master_seed,
                                           unsigned workers = worker_count())
{
    cfg.validate();
    if (iterations < 1)
        throw DomainError("run_probes: iterations must be at least 1");
    if (probes.empty())
        throw DomainError("run_probes: no probes requested");
    for (const auto &p : probes)
    {
        if (p.M < 1)
            throw ConfigError("M", "must be at least 1");
        if (!(p.epsilon >= 0.0 && p.epsilon <= 1.0))
            throw ConfigError("epsilon", "must lie in [0, 1]");
        if (!(p.sigma2_w >= 0.0))
            throw ConfigError("noise", "noise power must be non-negative");
        if (p.receiver == Receiver::zf && p.M < cfg.K)
            throw ConfigError("M", "ZF needs M >= K");
    }
    if (cfg.zf_options.intra == zf::IntraCellModel::mean_substituted && !(cfg.zf_options.mean_signal > 0.0))
        throw ConfigError("zf", "mean_substituted intra-cell model needs a positive mean signal");

    const std::size_t per_iteration = cfg.all_tagged_users ? static_cast<std::size_t>(cfg.K) : 1;
    std::vector<SinrSamples> out(probes.size());
    for (std::size_t j = 0; j < probes.size(); ++j)
    {
        out[j].receiver = probes[j].receiver;
        out[j].values.resize(iterations * per_iteration);
    }
    parallel_for(iterations, workers, [&](std::size_t i) {
        std::mt19937_64 rng(stream_seed(master_seed, i));
        const auto net = geometry::generate_network(cfg.geometry, cfg.K, rng);
        for (std::size_t j = 0; j < probes.size(); ++j)
            probe_sinr(net, cfg, probes[j], rng, out[j].values.data() + i * per_iteration);
    });
    return out;
}

// Single-receiver convenience wrapper.
inline SinrSamples run_uplink_sim(const SimConfig &cfg, const SinrProbe &probe, std::size_t iterations,
                                  std::uint64_t master_seed, unsigned workers = worker_count())
{
    return std::move(run_probes(cfg, {probe}, iterations, master_seed, workers).front());
}

// Fraction of samples strictly above each threshold; +inf samples exceed every threshold.
inline CcdfCurve empirical_ccdf(const SinrSamples &samples, const std::vector<double> &thresholds_db,
                                std::string meta = {})
{
    if (samples.values.empty())
        throw DomainError("empirical_ccdf: no samples");
    std::vector<double> sorted = samples.values;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    CcdfCurve curve;
    curve.source = CurveSource::empirical;
    curve.meta = std::move(meta);
    curve.thresholds_db = thresholds_db;
    curve.probabilities.reserve(thresholds_db.size());
    for (double db : thresholds_db)
    {
        const double t = numerics::db_to_linear(db);
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
        curve.probabilities.push_back(static_cast<double>(above) / n);
    }
    return curve;
}

// Mean of log2(1 + min(SINR, T_max)) over the samples.
inline double spectral_efficiency(const SinrSamples &samples, double t_max)
{
    if (samples.values.empty())
        throw DomainError("spectral_efficiency: no samples");
    if (!(t_max > 0.0))
        throw DomainError("spectral_efficiency: T_max must be positive");
    double sum = 0.0;
    for (double s : samples.values)
        sum += std::log2(1.0 + std::min(s, t_max));
    return sum / static_cast<double>(samples.values.size());
}

inline double median_db(const SinrSamples &samples)
{
    if (samples.values.empty())
        throw DomainError("median_db: no samples");
    std::vector<double> v = samples.values;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    double m = *mid;
    if (v.size() % 2 == 0)
        m = 0.5 * (m + *std::max_element(v.begin(), mid));
    return numerics::linear_to_db(m);
}

// CSV: iteration,sinr_db (inf for the sentinel).
inline void write_samples_csv(std::ostream &os, const SinrSamples &samples)
{
    os << "iteration,sinr_db\n";
    os.precision(10);
    for (std::size_t i = 0; i < samples.values.size(); ++i)
        os << i << ',' << numerics::linear_to_db(samples.values[i]) << '\n';
}

} // namespace mmimo::montecarlo
