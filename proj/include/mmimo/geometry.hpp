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

// Base-station and scheduled-user point patterns: PPP and hexagonal layouts,
// nearest-site association and per-cell pilot scheduling.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace mmimo::geometry
{

struct Point2
{
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2 &, const Point2 &) = default;
};

inline double squared_distance(const Point2 &a, const Point2 &b)
{
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double distance(const Point2 &a, const Point2 &b) { return std::sqrt(squared_distance(a, b)); }

inline double norm(const Point2 &p) { return std::hypot(p.x, p.y); }

enum class SchedulingMode
{
    ppp_thinning,    // PPP of candidate users, K picked at random per cell
    uniform_in_cell, // K users drawn directly, uniform in each cell
};

enum class LayoutKind
{
    ppp,
    hex,
};

// Base-station density of a hexagonal layout with the given inter-site distance.
inline double density_from_isd(double isd_m)
{
    if (!(isd_m > 0.0))
        throw DomainError("density_from_isd: inter-site distance must be positive");
    return 2.0 / (std::sqrt(3.0) * isd_m * isd_m);
}

struct GeometryConfig
{
    double lambda_b = density_from_isd(500.0); // base stations per m^2
    double sim_radius_factor = 10.0;            // region radius = factor / sqrt(lambda_b)
    double user_density_multiplier = 60.0;      // candidate-user density relative to lambda_b
    SchedulingMode scheduling_mode = SchedulingMode::ppp_thinning;
    LayoutKind layout = LayoutKind::ppp;
    double hex_isd_m = 300.0;
    int hex_rings = 2;

    // Radius of the exclusion ball; lambda_b * pi * R_e^2 == 1.
    double exclusion_radius() const { return std::sqrt(1.0 / (std::numbers::pi * lambda_b)); }

    double region_radius() const { return sim_radius_factor / std::sqrt(lambda_b); }

    void validate() const
    {
        if (!(lambda_b > 0.0))
            throw ConfigError("lambda_b", "base-station density must be positive");
        if (!(sim_radius_factor >= 5.0))
            throw ConfigError("sim_radius_factor", "must be at least 5");
        if (!(user_density_multiplier > 0.0))
            throw ConfigError("user_density_multiplier", "must be positive");
        if (layout == LayoutKind::hex)
        {
            if (!(hex_isd_m > 0.0))
                throw ConfigError("isd_m", "inter-site distance must be positive");
            if (hex_rings < 0)
                throw ConfigError("hex_rings", "must be non-negative");
        }
    }
};

// ---------------------------------------------------------------------------------------------
// Regions

// Area on which users live: a disc around the origin, or the union of the hexagonal cells of a
// finite hex cluster.
class Region
{
public:
    static Region disc(double radius) { return Region(LayoutKind::ppp, radius, 0.0, 0); }

    static Region hex_cluster(double isd_m, int rings) { return Region(LayoutKind::hex, 0.0, isd_m, rings); }

    bool contains(const Point2 &p) const
    {
        if (kind_ == LayoutKind::ppp)
            return p.x * p.x + p.y * p.y <= radius_ * radius_;
        const auto [q, r] = nearest_lattice_axial(p);
        return hex_ring_of(q, r) <= rings_;
    }

    // Radius of a disc around the origin that covers the region.
    double bounding_radius() const
    {
        return kind_ == LayoutKind::ppp ? radius_ : (static_cast<double>(rings_) + 1.0) * isd_;
    }

    double area() const
    {
        if (kind_ == LayoutKind::ppp)
            return std::numbers::pi * radius_ * radius_;
        const double cells = 1.0 + 3.0 * rings_ * (rings_ + 1.0);
        return cells * std::sqrt(3.0) / 2.0 * isd_ * isd_;
    }

    LayoutKind kind() const { return kind_; }

    static int hex_ring_of(long q, long r)
    {
        return static_cast<int>(std::max({std::labs(q), std::labs(r), std::labs(q + r)}));
    }

private:
    Region(LayoutKind kind, double radius, double isd, int rings) : kind_(kind), radius_(radius), isd_(isd), rings_(rings) {}

    // Axial coordinates of the nearest point of the infinite lattice with spacing isd.
    std::pair<long, long> nearest_lattice_axial(const Point2 &p) const
    {
        const double rf = p.y / (isd_ * std::sqrt(3.0) / 2.0);
        const double qf = p.x / isd_ - rf / 2.0;
        const double sf = -qf - rf;
        double q = std::round(qf), r = std::round(rf), s = std::round(sf);
        const double dq = std::abs(q - qf), dr = std::abs(r - rf), ds = std::abs(s - sf);
        if (dq > dr && dq > ds)
            q = -r - s;
        else if (dr > ds)
            r = -q - s;
        return {static_cast<long>(q), static_cast<long>(r)};
    }

    LayoutKind kind_;
    double radius_;
    double isd_;
    int rings_;
};

// ---------------------------------------------------------------------------------------------
// Nearest-site lookup

// Uniform bucket grid over a fixed set of sites.
class NearestSiteIndex
{
public:
    explicit NearestSiteIndex(std::span<const Point2> sites) : sites_(sites.begin(), sites.end())
    {
        if (sites_.empty())
            throw ConfigError("bs_points", "cannot index an empty set of base stations");
        double xmin = sites_[0].x, xmax = xmin, ymin = sites_[0].y, ymax = ymin;
        for (const auto &s : sites_)
        {
            xmin = std::min(xmin, s.x), xmax = std::max(xmax, s.x);
            ymin = std::min(ymin, s.y), ymax = std::max(ymax, s.y);
        }
        const double extent = std::max({xmax - xmin, ymax - ymin, 1e-9});
        side_ = std::max<long>(1, static_cast<long>(std::ceil(std::sqrt(static_cast<double>(sites_.size())))));
        cell_ = extent / static_cast<double>(side_) * (1.0 + 1e-12);
        x0_ = xmin;
        y0_ = ymin;

        std::vector<std::size_t> counts(static_cast<std::size_t>(side_ * side_) + 1, 0);
        std::vector<long> bucket_of(sites_.size());
        for (std::size_t i = 0; i < sites_.size(); ++i)
        {
            bucket_of[i] = bucket_index(clamp_coord(sites_[i].x, x0_), clamp_coord(sites_[i].y, y0_));
            ++counts[static_cast<std::size_t>(bucket_of[i]) + 1];
        }
        for (std::size_t b = 1; b < counts.size(); ++b)
            counts[b] += counts[b - 1];
        start_ = counts;
        order_.resize(sites_.size());
        packed_.resize(sites_.size());
        for (std::size_t i = 0; i < sites_.size(); ++i)
        {
            const std::size_t slot = counts[static_cast<std::size_t>(bucket_of[i])]++;
            order_[slot] = i;
            packed_[slot] = sites_[i];
        }
    }

    std::size_t size() const { return sites_.size(); }

    const Point2 &site(std::size_t i) const { return sites_[i]; }

    std::span<const Point2> sites() const { return sites_; }

    std::size_t nearest(const Point2 &p) const
    {
        const long cx = clamp_coord(p.x, x0_), cy = clamp_coord(p.y, y0_);
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        for (long ring = 0; ring < side_ + 1; ++ring)
        {
            for_each_in_ring(cx, cy, ring, [&](std::size_t slot) {
                const double d = squared_distance(packed_[slot], p);
                // Ties resolve to the lower site index so results do not depend on bucketing.
                if (d < best || (d == best && order_[slot] < best_i))
                {
                    best = d;
                    best_i = order_[slot];
                }
            });
            const double reach = static_cast<double>(ring) * cell_;
            if (best <= reach * reach)
                break;
        }
        return best_i;
    }

    // Visits sites ring by ring around p. `visit(site_index)` is called for every site in the
    // ring; `stop(lower_bound)` receives a lower bound on the distance of every site not yet
    // visited and ends the walk by returning true.
    template <typename Visit, typename Stop>
    void walk_rings(const Point2 &p, Visit &&visit, Stop &&stop) const
    {
        const long cx = clamp_coord(p.x, x0_), cy = clamp_coord(p.y, y0_);
        for (long ring = 0; ring < side_ + 1; ++ring)
        {
            for_each_in_ring(cx, cy, ring, [&](std::size_t slot) { visit(order_[slot]); });
            if (stop(static_cast<double>(ring) * cell_))
                return;
        }
    }

private:
    long clamp_coord(double v, double origin) const
    {
        const double c = std::floor((v - origin) / cell_);
        if (!(c > 0.0))
            return 0;
        return std::min(side_ - 1, static_cast<long>(c));
    }

    long bucket_index(long bx, long by) const { return by * side_ + bx; }

    template <typename F>
    void for_each_in_ring(long cx, long cy, long ring, F &&f) const
    {
        auto visit_bucket = [&](long bx, long by) {
            if (bx < 0 || by < 0 || bx >= side_ || by >= side_)
                return;
            const auto b = static_cast<std::size_t>(bucket_index(bx, by));
            for (std::size_t s = start_[b]; s < start_[b + 1]; ++s)
                f(s);
        };
        if (ring == 0)
        {
            visit_bucket(cx, cy);
            return;
        }
        for (long dx = -ring; dx <= ring; ++dx)
        {
            visit_bucket(cx + dx, cy - ring);
            visit_bucket(cx + dx, cy + ring);
        }
        for (long dy = -ring + 1; dy <= ring - 1; ++dy)
        {
            visit_bucket(cx - ring, cy + dy);
            visit_bucket(cx + ring, cy + dy);
        }
    }

    std::vector<Point2> sites_;
    std::vector<Point2> packed_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> start_;
    long side_ = 1;
    double cell_ = 1.0;
    double x0_ = 0.0, y0_ = 0.0;
};

// ---------------------------------------------------------------------------------------------
// Point processes

// Homogeneous PPP on a disc of the given radius around the origin.
template <typename Rng>
std::vector<Point2> sample_ppp(double density, double radius, Rng &rng)
{
    if (density < 0.0 || !(radius > 0.0))
        throw DomainError("sample_ppp: density must be >= 0 and radius > 0");
    std::vector<Point2> points;
    const double mean = density * std::numbers::pi * radius * radius;
    if (mean <= 0.0)
        return points;
    std::poisson_distribution<long> count_dist(mean);
    const long count = count_dist(rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    points.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i)
    {
        const double r = radius * std::sqrt(unit(rng));
        const double theta = 2.0 * std::numbers::pi * unit(rng);
        points.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
    return points;
}

// Homogeneous PPP restricted to a region.
template <typename Rng>
std::vector<Point2> sample_ppp(double density, const Region &region, Rng &rng)
{
    if (region.kind() == LayoutKind::ppp)
        return sample_ppp(density, region.bounding_radius(), rng);
    auto points = sample_ppp(density, region.bounding_radius(), rng);
    std::erase_if(points, [&](const Point2 &p) { return !region.contains(p); });
    return points;
}

// Hexagonal lattice centred at the origin with `rings` rings of neighbours (rings=2: 19 sites).
inline std::vector<Point2> build_hex_grid(double isd_m, int rings)
{
    if (!(isd_m > 0.0) || rings < 0)
        throw DomainError("build_hex_grid: isd must be positive and rings non-negative");
    std::vector<Point2> sites;
    const double row = isd_m * std::sqrt(3.0) / 2.0;
    // Centre first, then outward by ring, so the tagged site is index 0.
    for (int ring = 0; ring <= rings; ++ring)
        for (int r = -rings; r <= rings; ++r)
            for (int q = -rings; q <= rings; ++q)
                if (Region::hex_ring_of(q, r) == ring)
                    sites.push_back({isd_m * (q + 0.5 * r), row * r});
    return sites;
}

// Distance from a user to its serving base station under the Rayleigh model with mean
// 0.5 / sqrt(lambda_b).
template <typename Rng>
double sample_serving_distance(double lambda_b, Rng &rng)
{
    if (!(lambda_b > 0.0))
        throw DomainError("sample_serving_distance: lambda_b must be positive");
    std::exponential_distribution<double> unit_exp(1.0);
    return std::sqrt(unit_exp(rng) / (std::numbers::pi * lambda_b));
}

// ---------------------------------------------------------------------------------------------
// Cells and scheduling

struct Box
{
    double xmin, ymin, xmax, ymax;
};

// Axis-aligned bounding box of the Voronoi cell of site `cell`, clipped to the region's
// bounding square. Built by half-plane clipping against neighbours in order of distance.
inline Box cell_bounding_box(std::size_t cell, const NearestSiteIndex &index, const Region &region)
{
    const Point2 c = index.site(cell);
    const double rb = region.bounding_radius();
    std::vector<Point2> poly = {{-rb, -rb}, {rb, -rb}, {rb, rb}, {-rb, rb}};
    std::vector<Point2> next;
    next.reserve(16);

    auto max_reach = [&] {
        double m = 0.0;
        for (const auto &v : poly)
            m = std::max(m, squared_distance(v, c));
        return std::sqrt(m);
    };
    double reach = max_reach();

    index.walk_rings(
        c,
        [&](std::size_t j) {
            if (j == cell)
                return;
            const Point2 s = index.site(j);
            // Keep {p : (s - c) . p <= (|s|^2 - |c|^2) / 2}.
            const double nx = s.x - c.x, ny = s.y - c.y;
            const double rhs = 0.5 * ((s.x * s.x + s.y * s.y) - (c.x * c.x + c.y * c.y));
            if (nx * nx + ny * ny > 4.0 * reach * reach)
                return;
            next.clear();
            for (std::size_t i = 0; i < poly.size(); ++i)
            {
                const Point2 &a = poly[i];
                const Point2 &b = poly[(i + 1) % poly.size()];
                const double fa = nx * a.x + ny * a.y - rhs;
                const double fb = nx * b.x + ny * b.y - rhs;
                if (fa <= 0.0)
                    next.push_back(a);
                if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0))
                {
                    const double t = fa / (fa - fb);
                    next.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
                }
            }
            poly.swap(next);
            reach = max_reach();
        },
        [&](double lower_bound) { return lower_bound > 2.0 * reach; });

    Box box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto &v : poly)
    {
        box.xmin = std::min(box.xmin, v.x), box.xmax = std::max(box.xmax, v.x);
        box.ymin = std::min(box.ymin, v.y), box.ymax = std::max(box.ymax, v.y);
    }
    return box;
}

// Draws one point uniformly from (Voronoi cell of `cell`) intersected with `region`.
template <typename Rng>
Point2 sample_in_cell(std::size_t cell, const Box &box, const NearestSiteIndex &index, const Region &region, Rng &rng)
{
    std::uniform_real_distribution<double> ux(box.xmin, box.xmax), uy(box.ymin, box.ymax);
    for (int attempt = 0; attempt < 10'000'000; ++attempt)
    {
        const Point2 p{ux(rng), uy(rng)};
        if (region.contains(p) && index.nearest(p) == cell)
            return p;
    }
    throw NumericalError("sample_in_cell: rejection sampling failed for cell " + std::to_string(cell), 0.0, 0.0);
}

struct NetworkRealization
{
    std::vector<Point2> bs_points;
    // users[k][cell]: the user scheduled on pilot k+1 in the cell of bs_points[cell].
    std::vector<std::vector<Point2>> users;
    std::size_t tagged_bs = 0;
    Point2 typical_user;
    std::size_t topped_up_cells = 0; // cells that needed users beyond the candidate process

    std::size_t pilots() const { return users.size(); }
    std::size_t cells() const { return bs_points.size(); }
};

// Associates candidate users to their nearest base station and schedules K per cell.
//
// ppp_thinning: a uniform random K-subset of each cell's candidates; cells with fewer than K
// candidates are topped up with points drawn uniformly in the cell.
// uniform_in_cell: `users` is ignored and every cell draws K points uniformly.
// The tagged base station is the one nearest the origin.
template <typename Rng>
NetworkRealization associate_and_schedule(std::span<const Point2> bs, std::span<const Point2> users, int K,
                                          SchedulingMode mode, const Region &region, Rng &rng)
{
    if (bs.empty())
        throw ConfigError("bs_points", "no base stations to associate with");
    if (K < 1)
        throw DomainError("associate_and_schedule: K must be at least 1");

    const NearestSiteIndex index(bs);
    const std::size_t cells = bs.size();
    const auto k_count = static_cast<std::size_t>(K);
    std::vector<std::vector<Point2>> per_cell(cells);

    if (mode == SchedulingMode::ppp_thinning)
    {
        std::vector<std::vector<std::size_t>> members(cells);
        for (std::size_t u = 0; u < users.size(); ++u)
            members[index.nearest(users[u])].push_back(u);
        for (std::size_t c = 0; c < cells; ++c)
        {
            auto &m = members[c];
            const std::size_t take = std::min(k_count, m.size());
            for (std::size_t i = 0; i < take; ++i)
            {
                std::uniform_int_distribution<std::size_t> pick(i, m.size() - 1);
                std::swap(m[i], m[pick(rng)]);
                per_cell[c].push_back(users[m[i]]);
            }
        }
    }

    NetworkRealization out;
    for (std::size_t c = 0; c < cells; ++c)
    {
        if (per_cell[c].size() >= k_count)
            continue;
        if (mode == SchedulingMode::ppp_thinning)
            ++out.topped_up_cells;
        const Box box = cell_bounding_box(c, index, region);
        while (per_cell[c].size() < k_count)
            per_cell[c].push_back(sample_in_cell(c, box, index, region, rng));
    }

    out.bs_points.assign(bs.begin(), bs.end());
    out.users.assign(k_count, std::vector<Point2>(cells));
    for (std::size_t c = 0; c < cells; ++c)
        for (std::size_t k = 0; k < k_count; ++k)
            out.users[k][c] = per_cell[c][k];
    out.tagged_bs = index.nearest({0.0, 0.0});
    out.typical_user = out.users[0][out.tagged_bs];
    return out;
}

// One network snapshot per the configured layout: base stations, candidate users,
// association and scheduling.
template <typename Rng>
NetworkRealization generate_network(const GeometryConfig &cfg, int K, Rng &rng)
{
    cfg.validate();
    std::vector<Point2> bs;
    Region region = Region::disc(cfg.region_radius());
    double user_density = cfg.user_density_multiplier * cfg.lambda_b;
    if (cfg.layout == LayoutKind::hex)
    {
        bs = build_hex_grid(cfg.hex_isd_m, cfg.hex_rings);
        region = Region::hex_cluster(cfg.hex_isd_m, cfg.hex_rings);
        user_density = cfg.user_density_multiplier * density_from_isd(cfg.hex_isd_m);
    }
    else
    {
        bs = sample_ppp(cfg.lambda_b, region.bounding_radius(), rng);
        // An empty draw is possible in principle (probability e^{-100 pi}); keep the tagged cell defined.
        if (bs.empty())
            bs.push_back({0.0, 0.0});
    }
    std::vector<Point2> candidates;
    if (cfg.scheduling_mode == SchedulingMode::ppp_thinning)
        candidates = sample_ppp(user_density, region, rng);
    return associate_and_schedule(bs, candidates, K, cfg.scheduling_mode, region, rng);
}

// CSV dump: kind,pilot,x_m,y_m,cell_index (pilot 0 for base stations).
inline void write_realization_csv(std::ostream &os, const NetworkRealization &r)
{
    os << "kind,pilot,x_m,y_m,cell_index\n";
    for (std::size_t c = 0; c < r.bs_points.size(); ++c)
        os << "bs,0," << r.bs_points[c].x << ',' << r.bs_points[c].y << ',' << c << '\n';
    for (std::size_t k = 0; k < r.users.size(); ++k)
        for (std::size_t c = 0; c < r.users[k].size(); ++c)
            os << "user," << (k + 1) << ',' << r.users[k][c].x << ',' << r.users[k][c].y << ',' << c << '\n';
}

} // namespace mmimo::geometry
