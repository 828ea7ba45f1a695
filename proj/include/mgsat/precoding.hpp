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

#ifndef MGSAT_PRECODING_HPP
#define MGSAT_PRECODING_HPP

#include "mgsat/channel.hpp"

#include <map>
#include <span>
#include <vector>

namespace mgsat
{
    // A scheduled user: beam k of cluster `cluster`.
    struct UserId
    {
        int cluster = 0;
        int index = 0;

        int global(int users_per_cluster) const { return cluster * users_per_cluster + index; }
        friend auto operator<=>(const UserId &, const UserId &) = default;
    };

    // Unit-norm beamformers of every gateway, keyed by the served user.
    struct BeamformerSet
    {
        std::map<int, std::vector<UserId>> served_sets;  // gateway -> ordered served users
        std::map<int, std::vector<UserId>> leakage_sets; // gateway -> users with known CSI
        std::map<std::pair<int, UserId>, cvec> w;        // (gateway, user) -> beamformer

        const cvec &at(int gateway, const UserId &user) const { return w.at({gateway, user}); }
    };

    // Regularized zero-forcing. `h` is users x feeds with row k = h_k^H, so the
    // returned column k is (H^H H + beta I)^{-1} h_k, normalized.
    // Throws NumericalError when beta == 0 and H^H H is singular.
    cmat rzf_precoder(const cmat &h, double beta);

    // N0 W K / P_T.
    double optimal_beta(double n0, double bandwidth_hz, int k_users, double p_total);

    // Maximizer of |w^H h|^2 / (w^H (sum of leakage outer products + noise I) w)
    // over unit w, i.e. M^{-1} h / ||M^{-1} h||. The phase makes w^H h real positive.
    cvec slnr_beamformer(const cvec &h_target, std::span<const cvec> intra_leakage,
                         std::span<const cvec> inter_leakage, double noise_power);

    // SLNR of a given unit vector, for checks.
    double slnr(const cvec &w, const cvec &h_target, std::span<const cvec> intra_leakage,
                std::span<const cvec> inter_leakage, double noise_power);

    // For every neighbouring cluster b, the m users j with the largest
    // ||h_{gw, b, j}||^2 (ties to the lower index). Neighbours are visited in the
    // order given. Throws ConfigError when m exceeds the users per cluster.
    std::vector<UserId> select_edge_users(const ChannelRealization &channels, int gw,
                                          std::span<const int> neighbours, int m_per_neighbour);
}

#endif
