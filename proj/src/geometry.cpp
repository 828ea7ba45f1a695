// SPDX-License-Identifier: Apache-2.0
//
// mgsat - forward-link simulator for multi-gateway multibeam satellite systems
// Copyright (C) 2026 The mgsat authors
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

#include "mgsat/geometry.hpp"
#include "mgsat/errors.hpp"
#include "mgsat/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mgsat
{
    namespace
    {
        // Ring directions, counter-clockwise starting at +x.
        constexpr std::array<HexCoord, 6> hex_directions = {
            HexCoord{1, 0}, HexCoord{0, 1}, HexCoord{-1, 1}, HexCoord{-1, 0}, HexCoord{0, -1}, HexCoord{1, -1}};

        int floor_mod(int a, int m)
        {
            int r = a % m;
            return r < 0 ? r + m : r;
        }

        // Centred hexagonal number -> ring count, or -1.
        int rings_for_count(int n)
        {
            for (int rings = 0; 3 * rings * (rings + 1) + 1 <= n; ++rings)
                if (3 * rings * (rings + 1) + 1 == n)
                    return rings;
            return -1;
        }

        // Positions of a hexagon of `rings` rings: centre, then ring by ring.
        // Ring m starts at m * dir0 and walks counter-clockwise.
        std::vector<HexCoord> spiral(int rings)
        {
            std::vector<HexCoord> out{{0, 0}};
            for (int m = 1; m <= rings; ++m)
                for (int side = 0; side < 6; ++side)
                {
                    const HexCoord a = hex_directions[side];
                    const HexCoord b = hex_directions[(side + 1) % 6];
                    for (int s = 0; s < m; ++s)
                        out.push_back({m * a.q + s * (b.q - a.q), m * a.r + s * (b.r - a.r)});
                }
            return out;
        }

        Vec2 hex_to_plane(const HexCoord &h, double pitch)
        {
            return {pitch * (h.q + 0.5 * h.r), pitch * (std::sqrt(3.0) / 2.0) * h.r};
        }

        // Each ring-1 cluster cooperates with the ring-2 corner cluster in its
        // direction and the ring-2 edge cluster preceding that corner.
        std::vector<std::vector<int>> hyper_cluster_plan(int rings)
        {
            std::vector<std::vector<int>> plan;
            if (rings >= 1)
            {
                for (int i = 0; i < 6; ++i)
                {
                    std::vector<int> group{1 + i};
                    if (rings >= 2)
                    {
                        group.push_back(7 + 2 * i);
                        group.push_back(7 + (2 * i + 11) % 12);
                    }
                    std::sort(group.begin(), group.end());
                    plan.push_back(std::move(group));
                }
            }
            plan.push_back({0});
            const int total = 3 * rings * (rings + 1) + 1;
            for (int c = 19; c < total; ++c)
                plan.push_back({c});
            return plan;
        }
    }

    std::vector<int> Topology::cooperating_neighbours(int cluster) const
    {
        std::vector<int> out;
        for (int c : hyper_clusters.at(hyper_of_cluster.at(cluster)))
            if (c != cluster)
                out.push_back(c);
        std::sort(out.begin(), out.end());
        return out;
    }

    double Topology::cell_circumradius_km() const
    {
        return beam_pitch_km / std::sqrt(3.0);
    }

    double layout_extent_in_pitches(int beams_per_cluster, int clusters)
    {
        const Topology unit = build_topology_with_pitch(1.0, beams_per_cluster, clusters);
        double r = 0.0;
        for (const auto &c : unit.beam_centers)
            r = std::max(r, std::hypot(c.x, c.y));
        return r + unit.cell_circumradius_km();
    }

    double beam_pitch_for_spacing_deg(double spacing_deg, double altitude_km)
    {
        if (!(spacing_deg > 0.0) || !(altitude_km > 0.0))
            throw ConfigError("beam spacing and altitude must be positive");
        return altitude_km * std::tan(spacing_deg * std::numbers::pi / 180.0);
    }

    double coverage_diameter_for_pitch(double pitch_km, int beams_per_cluster, int clusters)
    {
        return 2.0 * pitch_km * layout_extent_in_pitches(beams_per_cluster, clusters);
    }

    Topology build_topology(double coverage_diameter_km, int beams_per_cluster, int clusters)
    {
        if (!(coverage_diameter_km > 0.0) || !std::isfinite(coverage_diameter_km))
            throw ConfigError("coverage diameter must be positive");
        const double extent = layout_extent_in_pitches(beams_per_cluster, clusters);
        return build_topology_with_pitch(coverage_diameter_km / (2.0 * extent), beams_per_cluster, clusters);
    }

    Topology build_topology_with_pitch(double beam_pitch_km, int beams_per_cluster, int clusters)
    {
        if (!(beam_pitch_km > 0.0) || !std::isfinite(beam_pitch_km))
            throw ConfigError("beam pitch must be positive");
        if (beams_per_cluster <= 0 || clusters <= 0)
            throw ConfigError("beams per cluster and cluster count must be positive");
        if (beams_per_cluster != 1 && beams_per_cluster != 7)
            throw ConfigError("beams per cluster must be 1 or 7 (hexagonal cluster shapes)");
        const int rings = rings_for_count(clusters);
        if (rings < 0)
            throw ConfigError("cluster count " + std::to_string(clusters) +
                              " has no hexagonal arrangement (expected 1, 7, 19, 37, ...)");

        // Cluster super-lattice: 7-beam flowers tile the plane with translation
        // vectors (2,1) and (-1,3); single beams with the unit vectors.
        const HexCoord ua = beams_per_cluster == 7 ? HexCoord{2, 1} : HexCoord{1, 0};
        const HexCoord ub = beams_per_cluster == 7 ? HexCoord{-1, 3} : HexCoord{0, 1};
        const std::vector<HexCoord> flower = beams_per_cluster == 7 ? spiral(1) : spiral(0);

        Topology t;
        t.beams_per_cluster = beams_per_cluster;
        t.clusters = clusters;
        t.beam_pitch_km = beam_pitch_km;
        t.satellite_position = {0.0, 0.0, geo_altitude_km};

        for (const HexCoord &cc : spiral(rings))
        {
            const HexCoord origin{cc.q * ua.q + cc.r * ub.q, cc.q * ua.r + cc.r * ub.r};
            const int cluster = static_cast<int>(t.beam_hex.size()) / beams_per_cluster;
            for (const HexCoord &f : flower)
            {
                const HexCoord h{origin.q + f.q, origin.r + f.r};
                t.beam_hex.push_back(h);
                t.beam_centers.push_back(hex_to_plane(h, beam_pitch_km));
                t.cluster_of_beam.push_back(cluster);
                t.colour_of_beam.push_back(floor_mod(h.q, 2) + 2 * floor_mod(h.r, 2));
            }
        }

        t.hyper_clusters = hyper_cluster_plan(rings);
        t.hyper_of_cluster.assign(clusters, -1);
        for (int i = 0; i < static_cast<int>(t.hyper_clusters.size()); ++i)
            for (int c : t.hyper_clusters[i])
                t.hyper_of_cluster[c] = i;
        return t;
    }

    int adjacent_colour_conflicts(const Topology &topology)
    {
        int conflicts = 0;
        const int n = topology.beam_count();
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
            {
                const int dq = topology.beam_hex[b].q - topology.beam_hex[a].q;
                const int dr = topology.beam_hex[b].r - topology.beam_hex[a].r;
                const bool adjacent = std::any_of(hex_directions.begin(), hex_directions.end(),
                                                  [&](const HexCoord &d) { return d.q == dq && d.r == dr; });
                if (adjacent && topology.colour_of_beam[a] == topology.colour_of_beam[b])
                    ++conflicts;
            }
        return conflicts;
    }

    double off_axis_angle(const Vec3 &sat, const Vec2 &a, const Vec2 &b)
    {
        const Eigen::Vector3d va(a.x - sat.x, a.y - sat.y, -sat.z);
        const Eigen::Vector3d vb(b.x - sat.x, b.y - sat.y, -sat.z);
        // atan2 keeps full relative precision for the sub-degree angles involved
        return std::atan2(va.cross(vb).norm(), va.dot(vb));
    }

    UserDrop place_users(const Topology &topology, std::vector<Vec2> positions)
    {
        const int n = topology.beam_count();
        if (static_cast<int>(positions.size()) != n)
            throw ConfigError("need exactly one user position per beam");

        UserDrop drop;
        drop.user_position = std::move(positions);
        drop.slant_range_km.resize(n);
        drop.off_axis_angle.resize(n, n);
        const Vec3 &sat = topology.satellite_position;
        for (int u = 0; u < n; ++u)
        {
            const Vec2 &p = drop.user_position[u];
            drop.slant_range_km[u] = std::sqrt((p.x - sat.x) * (p.x - sat.x) + (p.y - sat.y) * (p.y - sat.y) + sat.z * sat.z);
            for (int f = 0; f < n; ++f)
                drop.off_axis_angle(f, u) = off_axis_angle(sat, topology.beam_centers[f], p);
        }
        return drop;
    }

    UserDrop drop_users(const Topology &topology, std::uint64_t rng_seed)
    {
        Engine rng(rng_seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double p = topology.beam_pitch_km;
        const Vec2 a1{p, 0.0}, a2{0.5 * p, 0.5 * std::sqrt(3.0) * p};

        // A uniform point of the lattice's fundamental parallelogram, reduced to
        // its nearest lattice point, is uniform on the hexagonal Voronoi cell.
        std::vector<Vec2> positions;
        positions.reserve(topology.beam_count());
        for (const Vec2 &centre : topology.beam_centers)
        {
            const double s = unit(rng), t = unit(rng);
            const Vec2 raw{s * a1.x + t * a2.x, s * a1.y + t * a2.y};
            Vec2 best = raw;
            double best_d = std::numeric_limits<double>::infinity();
            for (int i = -1; i <= 2; ++i)
                for (int j = -1; j <= 2; ++j)
                {
                    const Vec2 off{raw.x - i * a1.x - j * a2.x, raw.y - i * a1.y - j * a2.y};
                    const double d = off.x * off.x + off.y * off.y;
                    if (d < best_d)
                    {
                        best_d = d;
                        best = off;
                    }
                }
            positions.push_back({centre.x + best.x, centre.y + best.y});
        }
        return place_users(topology, std::move(positions));
    }

    std::string topology_to_json(const Topology &t)
    {
        nlohmann::json j;
        j["beams_per_cluster"] = t.beams_per_cluster;
        j["clusters"] = t.clusters;
        j["beam_pitch_km"] = t.beam_pitch_km;
        j["satellite_position_km"] = {t.satellite_position.x, t.satellite_position.y, t.satellite_position.z};
        auto &beams = j["beams"] = nlohmann::json::array();
        for (int b = 0; b < t.beam_count(); ++b)
            beams.push_back({{"beam", b},
                             {"x_km", t.beam_centers[b].x},
                             {"y_km", t.beam_centers[b].y},
                             {"cluster", t.cluster_of_beam[b]},
                             {"colour", t.colour_of_beam[b]}});
        j["hyper_clusters"] = t.hyper_clusters;
        return j.dump(2);
    }
}
