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

#ifndef MGSAT_SCHEMES_HPP
#define MGSAT_SCHEMES_HPP

#include "mgsat/channel.hpp"
#include "mgsat/geometry.hpp"
#include "mgsat/power_alloc.hpp"
#include "mgsat/precoding.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mgsat
{
    enum class SchemeKind
    {
        Coloring4,           // 4-colour frequency reuse, one beam per stream
        ClusterRZF,          // per-gateway regularized zero-forcing
        HyperClusterCSI,     // SLNR with CSI of neighbouring edge users
        HyperClusterCSIData, // SLNR, edge users also served by the neighbours
    };

    inline constexpr SchemeKind all_schemes[] = {SchemeKind::Coloring4, SchemeKind::ClusterRZF,
                                                 SchemeKind::HyperClusterCSI, SchemeKind::HyperClusterCSIData};

    // CLI names: coloring, rzf, csi, csidata.
    std::string_view scheme_name(SchemeKind kind);
    SchemeKind parse_scheme(std::string_view name);

    struct SchemeConfig
    {
        SchemeKind kind = SchemeKind::ClusterRZF;
        int m_per_neighbour = 1;
        // Colouring noise 4 W N0 instead of the sub-band noise W N0 / 4.
        bool paper_literal_coloring = false;
        // SLNR regularized with W N0 instead of W N0 K / P_T.
        bool literal_slnr_noise = false;
        double p_total_per_gw = 7.0; // watts
        SolverOptions solver;

        void validate() const;
    };

    // One gateway's share of a stream.
    struct Contribution
    {
        int gateway = 0;
        cvec w;
        double power = 0.0;
    };

    // Data symbol of one user and the gateways that transmit it.
    struct Stream
    {
        int user = 0;
        std::vector<Contribution> parts;
    };

    // All streams of a full-reuse scheme; one stream per user.
    struct Transmission
    {
        std::vector<Stream> streams;
    };

    struct SinrTerms
    {
        double signal = 0.0;       // |sum over serving gateways of sqrt(p) w^H h|^2
        double interference = 0.0; // same for every other stream, summed
        double noise = 0.0;
        double sinr() const { return signal / (interference + noise); }
    };

    // Coherent-combining SINR terms of `user`. Throws ConfigError when a stream
    // has no serving gateway or the user has no stream.
    SinrTerms evaluate_sinr_terms(const Transmission &tx, const ChannelRealization &channels, int user, double noise);
    double evaluate_sinr_global(const Transmission &tx, const ChannelRealization &channels, int user, double noise);

    // SINR of every user in one pass.
    std::vector<double> evaluate_all_sinr(const Transmission &tx, const ChannelRealization &channels, double noise);

    struct SchemeDiagnostics
    {
        int solver_runs = 0;
        int solver_nonconverged = 0;
        std::vector<std::vector<UserId>> edge_users; // per gateway, selection order
        std::vector<int> serving_set_size;           // per user
        std::vector<double> design_view_rate;        // per user, home gateway's view, bits/s/Hz
        std::uint64_t channel_checksum = 0;
    };

    struct SchemeResult
    {
        SchemeConfig scheme;
        std::vector<double> per_user_rate;       // bits/s/Hz (colouring includes the 1/4 pre-log)
        std::vector<double> per_beam_throughput; // bits/s
        SchemeDiagnostics diagnostics;
        BeamformerSet beamformers;
        Transmission transmission;

        double mean_rate() const;
        double mean_throughput() const;
    };

    SchemeResult run_coloring(const Topology &topology, const ChannelRealization &channels,
                              const LinkBudget &budget, const SchemeConfig &config);
    SchemeResult run_cluster_rzf(const Topology &topology, const ChannelRealization &channels,
                                 const LinkBudget &budget, const SchemeConfig &config);
    SchemeResult run_hypercluster_csi(const Topology &topology, const ChannelRealization &channels,
                                      const LinkBudget &budget, const SchemeConfig &config);
    SchemeResult run_hypercluster_csi_data(const Topology &topology, const ChannelRealization &channels,
                                           const LinkBudget &budget, const SchemeConfig &config);

    // Dispatch on config.kind.
    SchemeResult run_scheme(const Topology &topology, const ChannelRealization &channels,
                            const LinkBudget &budget, const SchemeConfig &config);
}

#endif
