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

#ifndef MGSAT_GEOMETRY_HPP
#define MGSAT_GEOMETRY_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mgsat
{
    inline constexpr double geo_altitude_km = 35786.0;
    inline constexpr int colour_count = 4;

    struct Vec2
    {
        double x = 0.0, y = 0.0; // km, coverage plane
    };

    struct Vec3
    {
        double x = 0.0, y = 0.0, z = 0.0; // km
    };

    // Axial hex-lattice coordinate (q along x, r at +60 degrees).
    struct HexCoord
    {
        int q = 0, r = 0;
        friend bool operator==(const HexCoord &, const HexCoord &) = default;
    };

    // Beam layout of a multi-gateway system. Beams are grouped into hexagonal
    // clusters ("flowers"), one gateway per cluster. Beam b belongs to cluster
    // b / beams_per_cluster, and within-cluster order is centre first, then the
    // ring counter-clockwise. All indices are 0-based.
    struct Topology
    {
        int beams_per_cluster = 0;
        int clusters = 0;
        double beam_pitch_km = 0.0;          // centre-to-centre distance of adjacent beams
        std::vector<HexCoord> beam_hex;      // lattice coordinate of each beam
        std::vector<Vec2> beam_centers;      // km
        std::vector<int> cluster_of_beam;    // beam -> cluster
        std::vector<int> colour_of_beam;     // beam -> 0..3
        std::vector<std::vector<int>> hyper_clusters; // partition of 0..clusters-1
        std::vector<int> hyper_of_cluster;   // cluster -> hyper-cluster index
        Vec3 satellite_position;             // km

        int beam_count() const { return static_cast<int>(beam_centers.size()); }
        int beam_index(int cluster, int k) const { return cluster * beams_per_cluster + k; }

        // Other clusters in the same hyper-cluster as `cluster`, ascending.
        std::vector<int> cooperating_neighbours(int cluster) const;

        // Radius of the hexagonal beam cell (centre to vertex).
        double cell_circumradius_km() const;
    };

    // Distance from the layout centre to the farthest cell vertex, in beam pitches.
    double layout_extent_in_pitches(int beams_per_cluster, int clusters);

    // Beam pitch on the ground for a given angular beam spacing seen from a
    // nadir GEO satellite.
    double beam_pitch_for_spacing_deg(double spacing_deg, double altitude_km = geo_altitude_km);

    // Coverage disk diameter that yields `pitch_km` for the given layout.
    double coverage_diameter_for_pitch(double pitch_km, int beams_per_cluster, int clusters);

    // Builds the canonical layout with the beam pitch chosen so that the layout
    // (cells included) fills a disk of the given diameter.
    // beams_per_cluster must be 1 or 7; clusters must be a centred hexagonal
    // number (1, 7, 19, 37, ...). Throws ConfigError otherwise.
    Topology build_topology(double coverage_diameter_km, int beams_per_cluster, int clusters);

    // Same layout with an explicit beam pitch.
    Topology build_topology_with_pitch(double beam_pitch_km, int beams_per_cluster, int clusters);

    // Number of pairs of lattice-adjacent beams sharing a colour (0 for a valid map).
    int adjacent_colour_conflicts(const Topology &topology);

    // Per-trial terminal placement: one user per beam, user b served by beam b.
    struct UserDrop
    {
        std::vector<Vec2> user_position;      // km
        std::vector<double> slant_range_km;   // user -> distance to satellite
        Eigen::MatrixXd off_axis_angle;       // (feed beam, user) -> radians

        int user_count() const { return static_cast<int>(user_position.size()); }
    };

    // Geometry of explicit user positions (no randomness).
    UserDrop place_users(const Topology &topology, std::vector<Vec2> positions);

    // Uniform position inside each beam's hexagonal cell. Pure in (topology, seed).
    UserDrop drop_users(const Topology &topology, std::uint64_t rng_seed);

    // Angle at the satellite between the directions to two ground points.
    double off_axis_angle(const Vec3 &satellite, const Vec2 &a, const Vec2 &b);

    std::string topology_to_json(const Topology &topology);
}

#endif
