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
#include "mmimo/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

using namespace mmimo;
using namespace mmimo::geometry;

// Brute-force nearest site; ties go to the lower index.
static std::size_t brute_nearest(const std::vector<Point2> &sites, const Point2 &p)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < sites.size(); ++i)
        if (squared_distance(sites[i], p) < squared_distance(sites[best], p))
            best = i;
    return best;
}

TEST_CASE("sample_ppp - Empty for zero density")
{
    std::mt19937_64 rng(1);
    CHECK(sample_ppp(0.0, 100.0, rng).empty());
}

TEST_CASE("sample_ppp - Mean count")
{
    std::mt19937_64 rng(2);
    const int draws = 10000;
    double total = 0.0;
    for (int i = 0; i < draws; ++i)
    {
        const auto pts = sample_ppp(1e-5, 5000.0, rng);
        total += static_cast<double>(pts.size());
        if (i == 0)
            for (const auto &p : pts)
                CHECK(norm(p) <= 5000.0);
    }
    const double expected = 1e-5 * std::numbers::pi * 5000.0 * 5000.0; // 785.4
    CHECK(std::abs(total / draws - expected) < 0.02 * expected);
}

TEST_CASE("sample_ppp - Fixed seed is reproducible")
{
    std::mt19937_64 a(42), b(42);
    const auto pa = sample_ppp(1e-4, 300.0, a);
    const auto pb = sample_ppp(1e-4, 300.0, b);
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i)
    {
        CHECK(pa[i].x == pb[i].x);
        CHECK(pa[i].y == pb[i].y);
    }
}

TEST_CASE("sample_ppp - Rejects bad arguments")
{
    std::mt19937_64 rng(3);
    CHECK_THROWS_AS(sample_ppp(-1.0, 10.0, rng), DomainError);
    CHECK_THROWS_AS(sample_ppp(1.0, 0.0, rng), DomainError);
}

TEST_CASE("build_hex_grid - Site counts and spacing")
{
    const auto one = build_hex_grid(300.0, 0);
    REQUIRE(one.size() == 1);
    CHECK(norm(one[0]) == 0.0);

    const auto grid = build_hex_grid(300.0, 2);
    REQUIRE(grid.size() == 19);
    CHECK(norm(grid[0]) < 1e-9);
    double min_d = 1e300;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j)
            min_d = std::min(min_d, distance(grid[i], grid[j]));
    CHECK(std::abs(min_d - 300.0) < 1e-9);
    CHECK(build_hex_grid(500.0, 3).size() == 37);
}

TEST_CASE("density_from_isd - Hexagonal cell area")
{
    CHECK(std::abs(density_from_isd(500.0) - 4.6188021535e-6) < 1e-15);
    CHECK_THROWS_AS(density_from_isd(0.0), DomainError);
}

TEST_CASE("GeometryConfig - Exclusion radius calibration")
{
    for (double lambda : {1e-6, density_from_isd(500.0), 3.0e-4})
    {
        GeometryConfig cfg;
        cfg.lambda_b = lambda;
        const double re = cfg.exclusion_radius();
        CHECK(std::abs(lambda * std::numbers::pi * re * re - 1.0) < 1e-12);
    }
    GeometryConfig bad;
    bad.sim_radius_factor = 4.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("Region - Hex cluster membership")
{
    const auto region = Region::hex_cluster(300.0, 2);
    CHECK(region.contains({0.0, 0.0}));
    CHECK(region.contains({600.0, 0.0}));
    CHECK(region.contains({740.0, 0.0}));  // inside the outer hexagon, short of its far corner
    CHECK_FALSE(region.contains({800.0, 0.0}));
    CHECK(std::abs(region.area() - 19.0 * std::sqrt(3.0) / 2.0 * 300.0 * 300.0) < 1e-6);
}

TEST_CASE("NearestSiteIndex - Agrees with brute force")
{
    std::mt19937_64 rng(5);
    const auto sites = sample_ppp(1e-5, 3000.0, rng);
    REQUIRE(sites.size() > 50);
    const NearestSiteIndex index(sites);
    std::uniform_real_distribution<double> u(-3500.0, 3500.0);
    for (int i = 0; i < 2000; ++i)
    {
        const Point2 p{u(rng), u(rng)};
        CHECK(index.nearest(p) == brute_nearest(sites, p));
    }
}

TEST_CASE("associate_and_schedule - Single base station")
{
    std::mt19937_64 rng(6);
    std::vector<Point2> bs = {{0.0, 0.0}};
    std::vector<Point2> users;
    for (int i = 0; i < 10; ++i)
        users.push_back({10.0 * i - 45.0, 3.0});
    const auto net = associate_and_schedule(bs, users, 3, SchedulingMode::ppp_thinning, Region::disc(100.0), rng);
    REQUIRE(net.pilots() == 3);
    REQUIRE(net.cells() == 1);
    CHECK(net.topped_up_cells == 0);
    CHECK(net.tagged_bs == 0);
    // Three distinct candidates were picked.
    CHECK((net.users[0][0].x != net.users[1][0].x));
    CHECK((net.users[1][0].x != net.users[2][0].x));
    CHECK((net.users[0][0].x != net.users[2][0].x));
}

TEST_CASE("associate_and_schedule - Nearest base station")
{
    std::mt19937_64 rng(7);
    std::vector<Point2> bs = {{-500.0, 0.0}, {500.0, 0.0}};
    std::vector<Point2> users = {{100.0, 0.0}, {-300.0, 0.0}};
    const auto net = associate_and_schedule(bs, users, 1, SchedulingMode::ppp_thinning, Region::disc(1000.0), rng);
    CHECK(net.users[0][1].x == 100.0);
    CHECK(net.users[0][0].x == -300.0);
}

TEST_CASE("associate_and_schedule - Empty base-station set")
{
    std::mt19937_64 rng(8);
    std::vector<Point2> bs, users = {{1.0, 1.0}};
    CHECK_THROWS_AS(associate_and_schedule(bs, users, 1, SchedulingMode::ppp_thinning, Region::disc(10.0), rng),
                    ConfigError);
}

TEST_CASE("generate_network - Voronoi consistency and pilot partition")
{
    std::mt19937_64 rng(9);
    GeometryConfig cfg;
    for (auto mode : {SchedulingMode::ppp_thinning, SchedulingMode::uniform_in_cell})
    {
        cfg.scheduling_mode = mode;
        const auto net = generate_network(cfg, 4, rng);
        REQUIRE(net.pilots() == 4);
        for (const auto &pilot : net.users)
        {
            REQUIRE(pilot.size() == net.cells());
            for (std::size_t c = 0; c < pilot.size(); ++c)
                CHECK(brute_nearest(net.bs_points, pilot[c]) == c);
        }
        CHECK(net.tagged_bs == brute_nearest(net.bs_points, {0.0, 0.0}));
        CHECK(net.typical_user.x == net.users[0][net.tagged_bs].x);
    }
}

TEST_CASE("generate_network - Hexagonal layout")
{
    std::mt19937_64 rng(10);
    GeometryConfig cfg;
    cfg.layout = LayoutKind::hex;
    const auto net = generate_network(cfg, 5, rng);
    REQUIRE(net.cells() == 19);
    CHECK(net.tagged_bs == 0);
    const auto region = Region::hex_cluster(cfg.hex_isd_m, cfg.hex_rings);
    for (const auto &pilot : net.users)
        for (std::size_t c = 0; c < pilot.size(); ++c)
        {
            CHECK(region.contains(pilot[c]));
            CHECK(brute_nearest(net.bs_points, pilot[c]) == c);
        }
}

TEST_CASE("generate_network - Top-up is rare at 60 candidates per cell")
{
    std::mt19937_64 rng(11);
    GeometryConfig cfg;
    double topped = 0.0, cells = 0.0;
    for (int i = 0; i < 1000; ++i)
    {
        const auto net = generate_network(cfg, 10, rng);
        topped += static_cast<double>(net.topped_up_cells);
        cells += static_cast<double>(net.cells());
    }
    CHECK(topped / cells < 0.05);
}

TEST_CASE("cell_bounding_box - Contains the cell")
{
    std::mt19937_64 rng(12);
    const auto sites = sample_ppp(2e-5, 2000.0, rng);
    const NearestSiteIndex index(sites);
    const auto region = Region::disc(2000.0);
    std::uniform_real_distribution<double> u(-2000.0, 2000.0);
    for (int i = 0; i < 3000; ++i)
    {
        const Point2 p{u(rng), u(rng)};
        if (!region.contains(p))
            continue;
        const auto c = index.nearest(p);
        const auto box = cell_bounding_box(c, index, region);
        CHECK(p.x >= box.xmin - 1e-9);
        CHECK(p.x <= box.xmax + 1e-9);
        CHECK(p.y >= box.ymin - 1e-9);
        CHECK(p.y <= box.ymax + 1e-9);
    }
}

TEST_CASE("sample_serving_distance - Rayleigh mean")
{
    std::mt19937_64 rng(13);
    const int n = 100000;
    double sum = 0.0, sum4 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        sum += sample_serving_distance(1.0 / std::numbers::pi, rng);
        sum4 += sample_serving_distance(4.0 / std::numbers::pi, rng);
    }
    const double expected = 0.5 * std::sqrt(std::numbers::pi);
    CHECK(std::abs(sum / n - expected) < 0.01 * expected);
    CHECK(std::abs(sum4 / n - expected / 2.0) < 0.01 * expected / 2.0);

    std::mt19937_64 a(99), b(99);
    CHECK(sample_serving_distance(1e-5, a) == sample_serving_distance(1e-5, b));
}

TEST_CASE("write_realization_csv - Layout")
{
    NetworkRealization net;
    net.bs_points = {{0.0, 0.0}, {10.0, 0.0}};
    net.users = {{{1.0, 2.0}, {11.0, 2.0}}};
    std::ostringstream os;
    write_realization_csv(os, net);
    const std::string expected = "kind,pilot,x_m,y_m,cell_index\n"
                                 "bs,0,0,0,0\n"
                                 "bs,0,10,0,1\n"
                                 "user,1,1,2,0\n"
                                 "user,1,11,2,1\n";
    CHECK(os.str() == expected);
}
