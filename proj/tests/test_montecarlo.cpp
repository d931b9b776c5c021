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

#include "catch_amalgamated.hpp"
#include "mmimo/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

using namespace mmimo;
using namespace mmimo::montecarlo;

static SinrSamples samples(std::vector<double> v)
{
    SinrSamples s;
    s.values = std::move(v);
    return s;
}

static SimConfig small_config(int K = 4)
{
    SimConfig cfg;
    cfg.K = K;
    cfg.geometry.sim_radius_factor = 6.0;
    cfg.geometry.user_density_multiplier = 30.0;
    return cfg;
}

TEST_CASE("empirical_ccdf - Small sample")
{
    const auto c = empirical_ccdf(samples({1.0, 2.0, 3.0}), {numerics::linear_to_db(1.5), numerics::linear_to_db(3.0)});
    CHECK(std::abs(c.probabilities[0] - 2.0 / 3.0) < 1e-15);
    CHECK(c.probabilities[1] == 0.0);
    CHECK(c.source == CurveSource::empirical);
}

TEST_CASE("empirical_ccdf - Infinite samples are always covered")
{
    const double inf = std::numeric_limits<double>::infinity();
    const auto c = empirical_ccdf(samples({inf, inf}), {-10.0, 0.0, 60.0});
    for (double p : c.probabilities)
        CHECK(p == 1.0);
    CHECK_THROWS_AS(empirical_ccdf(samples({}), {0.0}), DomainError);
}

TEST_CASE("empirical_ccdf - Exponential samples")
{
    std::mt19937_64 rng(11);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> v(100000);
    for (auto &x : v)
        x = e(rng);
    const auto c = empirical_ccdf(samples(std::move(v)), {0.0});
    CHECK(std::abs(c.probabilities[0] - std::exp(-1.0)) < 0.005);
}

TEST_CASE("compare_curves - Deviation report")
{
    CcdfCurve a, b;
    a.thresholds_db = b.thresholds_db = {-5.0, 0.0, 5.0};
    a.probabilities = {1.0, 1.0, 1.0};
    b.probabilities = {0.95, 0.9, 0.99};
    const auto same = compare_curves(a, a);
    CHECK(same.max_abs_dev == 0.0);
    const auto r = compare_curves(a, b);
    CHECK(std::abs(r.max_abs_dev - 0.1) < 1e-12);
    CHECK(r.argmax_threshold_db == 0.0);
    CHECK(r.deviations.size() == 3);

    CcdfCurve c = b;
    c.thresholds_db[1] = 0.5;
    CHECK_THROWS_AS(compare_curves(a, c), StructuralError);
    c.thresholds_db.pop_back();
    c.probabilities.pop_back();
    CHECK_THROWS_AS(compare_curves(a, c), StructuralError);
}

TEST_CASE("spectral_efficiency - Sample average with cap")
{
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(std::abs(spectral_efficiency(samples({inf}), 100.0) - std::log2(101.0)) < 1e-12);
    CHECK(std::abs(spectral_efficiency(samples({1.0, 3.0}), 100.0) - 1.5) < 1e-12);
    CHECK(std::abs(spectral_efficiency(samples({1.0, 1000.0}), 3.0) - 1.5) < 1e-12);
}

TEST_CASE("median_db - Odd and even counts")
{
    CHECK(std::abs(median_db(samples({100.0, 1.0, 10.0})) - 10.0) < 1e-12);
    CHECK(std::abs(median_db(samples({1.0, 3.0})) - numerics::linear_to_db(2.0)) < 1e-12);
}

TEST_CASE("write_samples_csv - Header and rows")
{
    std::ostringstream os;
    write_samples_csv(os, samples({10.0, 100.0}));
    CHECK(os.str() == "iteration,sinr_db\n0,10\n1,20\n");
}

TEST_CASE("stream_seed - Distinct streams")
{
    CHECK(stream_seed(1, 0) != stream_seed(1, 1));
    CHECK(stream_seed(1, 0) != stream_seed(2, 0));
    CHECK(stream_seed(5, 7) == stream_seed(5, 7));
}

TEST_CASE("parallel_for - Covers every index and rethrows")
{
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits)
        CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                        if (i == 5)
                            throw DomainError("boom");
                    }),
                    DomainError);
}

TEST_CASE("run_uplink_sim - Reproducible and independent of the worker count")
{
    const auto cfg = small_config();
    const SinrProbe probe{Receiver::mrc, 32, 0.0, 0.0};
    const auto once = run_uplink_sim(cfg, probe, 1, 42, 1);
    const auto again = run_uplink_sim(cfg, probe, 1, 42, 1);
    REQUIRE(once.count() == 1);
    CHECK(once.values[0] == again.values[0]);

    const auto serial = run_uplink_sim(cfg, probe, 16, 42, 1);
    const auto threaded = run_uplink_sim(cfg, probe, 16, 42, 4);
    CHECK(serial.values == threaded.values);
    const auto other = run_uplink_sim(cfg, probe, 16, 43, 1);
    CHECK(serial.values != other.values);
}

TEST_CASE("run_probes - Paired probes and all-user sampling")
{
    auto cfg = small_config();
    const std::vector<SinrProbe> probes{{Receiver::mrc, 32, 0.0, 0.0},
                                        {Receiver::zf, 32, 0.0, 0.0},
                                        {Receiver::mrc, 64, 0.0, 0.0}};
    const auto out = run_probes(cfg, probes, 20, 3, 2);
    REQUIRE(out.size() == 3);
    CHECK(out[1].receiver == Receiver::zf);
    for (std::size_t i = 0; i < 20; ++i)
    {
        CHECK(out[0].values[i] > 0.0);
        // Same geometry: more antennas never hurt MRC.
        CHECK(out[2].values[i] >= out[0].values[i] * (1.0 - 1e-12));
    }

    cfg.all_tagged_users = true;
    const auto all = run_probes(cfg, {probes[0]}, 5, 3, 1);
    CHECK(all[0].count() == 5 * 4);
    // Slot 0 of each snapshot is the typical user of the single-user run.
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(all[0].values[i * 4] == out[0].values[i]);
}

TEST_CASE("run_probes - Argument checks")
{
    const auto cfg = small_config();
    CHECK_THROWS_AS(run_probes(cfg, {{Receiver::mrc, 32, 0.0, 0.0}}, 0, 1), DomainError);
    CHECK_THROWS_AS(run_probes(cfg, {}, 5, 1), DomainError);
    CHECK_THROWS_AS(run_probes(cfg, {{Receiver::zf, 2, 0.0, 0.0}}, 5, 1), ConfigError);
    CHECK_THROWS_AS(run_probes(cfg, {{Receiver::mrc, 32, 1.5, 0.0}}, 5, 1), ConfigError);
}

TEST_CASE("run_uplink_sim - Interference-limited SIR does not depend on the density")
{
    // Without noise a PPP network is scale-free: scaling lambda_b only rescales distances.
    auto sparse = small_config(4);
    auto dense = sparse;
    dense.geometry.lambda_b *= 4.0;
    const SinrProbe probe{Receiver::mrc, 32, 0.0, 0.0};
    const std::size_t n = 1500;
    auto a = run_uplink_sim(sparse, probe, n, 100);
    auto b = run_uplink_sim(dense, probe, n, 200);
    std::sort(a.values.begin(), a.values.end());
    std::sort(b.values.begin(), b.values.end());
    double ks = 0.0;
    for (double x : a.values)
    {
        const double fa = static_cast<double>(std::upper_bound(a.values.begin(), a.values.end(), x) - a.values.begin()) / n;
        const double fb = static_cast<double>(std::upper_bound(b.values.begin(), b.values.end(), x) - b.values.begin()) / n;
        ks = std::max(ks, std::abs(fa - fb));
    }
    // 1% two-sample critical value at n = 1500 is about 0.06.
    CHECK(ks < 0.06);
}
