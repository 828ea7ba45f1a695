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

#include "mgsat/schemes.hpp"
#include "mgsat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mgsat
{
    std::string_view scheme_name(SchemeKind kind)
    {
        switch (kind)
        {
        case SchemeKind::Coloring4:
            return "coloring";
        case SchemeKind::ClusterRZF:
            return "rzf";
        case SchemeKind::HyperClusterCSI:
            return "csi";
        case SchemeKind::HyperClusterCSIData:
            return "csidata";
        }
        return "unknown";
    }

    SchemeKind parse_scheme(std::string_view name)
    {
        for (SchemeKind k : all_schemes)
            if (scheme_name(k) == name)
                return k;
        throw ConfigError("unknown scheme '" + std::string(name) + "' (expected coloring, rzf, csi or csidata)");
    }

    void SchemeConfig::validate() const
    {
        if (m_per_neighbour < 0)
            throw ConfigError("m_per_neighbour must be non-negative");
        if (!(p_total_per_gw > 0.0) || !std::isfinite(p_total_per_gw))
            throw ConfigError("per-gateway total power must be positive and finite");
        if (!(solver.tol > 0.0) || solver.max_iters < 1)
            throw ConfigError("solver tol must be positive and max_iters at least 1");
    }

    double SchemeResult::mean_rate() const
    {
        return per_user_rate.empty() ? 0.0
                                     : std::accumulate(per_user_rate.begin(), per_user_rate.end(), 0.0) /
                                           static_cast<double>(per_user_rate.size());
    }

    double SchemeResult::mean_throughput() const
    {
        return per_beam_throughput.empty() ? 0.0
                                           : std::accumulate(per_beam_throughput.begin(), per_beam_throughput.end(), 0.0) /
                                                 static_cast<double>(per_beam_throughput.size());
    }

    namespace
    {
        // amplitude(s, u): received amplitude of stream s at user u.
        Eigen::MatrixXcd stream_amplitudes(const Transmission &tx, const ChannelRealization &channels)
        {
            const int n = channels.users();
            const int k = channels.feeds_per_cluster();
            Eigen::MatrixXcd amp = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(tx.streams.size()), n);
            for (std::size_t s = 0; s < tx.streams.size(); ++s)
            {
                if (tx.streams[s].parts.empty())
                    throw ConfigError("stream of user " + std::to_string(tx.streams[s].user) + " has no serving gateway");
                for (const Contribution &c : tx.streams[s].parts)
                    amp.row(static_cast<Eigen::Index>(s)) +=
                        std::sqrt(c.power) * (c.w.adjoint() * channels.gains().middleRows(c.gateway * k, k));
            }
            return amp;
        }

        std::vector<int> stream_of_user(const Transmission &tx, int users)
        {
            std::vector<int> out(users, -1);
            for (std::size_t s = 0; s < tx.streams.size(); ++s)
            {
                const int u = tx.streams[s].user;
                if (u < 0 || u >= users)
                    throw ConfigError("stream addresses a user outside the realization");
                out[u] = static_cast<int>(s);
            }
            return out;
        }

        SinrTerms terms_from(const Eigen::MatrixXcd &amp, int stream, int user, double noise)
        {
            SinrTerms t;
            t.noise = noise;
            for (Eigen::Index s = 0; s < amp.rows(); ++s)
            {
                const double power = std::norm(amp(s, user));
                if (s == stream)
                    t.signal = power;
                else
                    t.interference += power;
            }
            return t;
        }

        // g(j, k) = |w_j^H h(gw, user_k)|^2 for the streams a gateway transmits.
        EffectiveGainTable gain_table(const ChannelRealization &channels, int gw,
                                      const std::vector<int> &users, const std::vector<cvec> &w, double noise)
        {
            const auto n = static_cast<Eigen::Index>(users.size());
            EffectiveGainTable table;
            table.noise = noise;
            table.g.resize(n, n);
            for (Eigen::Index k = 0; k < n; ++k)
            {
                const cvec h = channels.h(gw, users[k]);
                for (Eigen::Index j = 0; j < n; ++j)
                    table.g(j, k) = std::norm(w[j].dot(h));
            }
            return table;
        }

        void finish_full_reuse(SchemeResult &result, const ChannelRealization &channels, const LinkBudget &budget)
        {
            const double noise = budget.noise_power();
            const std::vector<double> sinr = evaluate_all_sinr(result.transmission, channels, noise);
            const int n = channels.users();
            result.per_user_rate.resize(n);
            result.per_beam_throughput.resize(n);
            result.diagnostics.serving_set_size.assign(n, 0);
            for (const Stream &s : result.transmission.streams)
                result.diagnostics.serving_set_size[s.user] = static_cast<int>(s.parts.size());
            for (int u = 0; u < n; ++u)
            {
                result.per_user_rate[u] = std::log2(1.0 + sinr[u]);
                result.per_beam_throughput[u] = budget.bandwidth_hz * result.per_user_rate[u];
            }
            result.diagnostics.channel_checksum = channels.checksum();
        }

        void check_inputs(const Topology &topology, const ChannelRealization &channels, const SchemeConfig &config)
        {
            config.validate();
            if (channels.users() != topology.beam_count() || channels.feeds_per_cluster() != topology.beams_per_cluster)
                throw ConfigError("channel realization does not match the topology");
        }

        double slnr_noise(const SchemeConfig &config, const LinkBudget &budget, int beams_per_cluster)
        {
            if (config.literal_slnr_noise)
                return budget.noise_power();
            return optimal_beta(budget.noise_psd(), budget.bandwidth_hz, beams_per_cluster, config.p_total_per_gw);
        }

        SchemeResult run_slnr(const Topology &topology, const ChannelRealization &channels,
                              const LinkBudget &budget, const SchemeConfig &config, bool share_data)
        {
            check_inputs(topology, channels, config);
            const int K = topology.beams_per_cluster;
            const int n = topology.beam_count();
            const double noise = budget.noise_power();
            const double regularizer = slnr_noise(config, budget, K);

            SchemeResult result;
            result.scheme = config;
            result.diagnostics.edge_users.resize(topology.clusters);
            result.diagnostics.design_view_rate.assign(n, 0.0);
            result.transmission.streams.resize(n);
            for (int u = 0; u < n; ++u)
                result.transmission.streams[u].user = u;

            for (int c = 0; c < topology.clusters; ++c)
            {
                const std::vector<int> neighbours = topology.cooperating_neighbours(c);
                const std::vector<UserId> edge = select_edge_users(channels, c, neighbours, config.m_per_neighbour);
                result.diagnostics.edge_users[c] = edge;

                std::vector<UserId> served;
                for (int k = 0; k < K; ++k)
                    served.push_back({c, k});
                std::vector<UserId> leakage_only;
                for (const UserId &e : edge)
                {
                    if (share_data && std::find(served.begin(), served.end(), e) == served.end())
                        served.push_back(e);
                    else if (!share_data)
                        leakage_only.push_back(e);
                }

                std::vector<int> served_global;
                for (const UserId &s : served)
                    served_global.push_back(s.global(K));
                std::vector<cvec> inter;
                for (const UserId &e : leakage_only)
                    inter.push_back(channels.h(c, e.global(K)));

                std::vector<cvec> w;
                std::vector<cvec> intra;
                for (std::size_t t = 0; t < served.size(); ++t)
                {
                    intra.clear();
                    for (std::size_t j = 0; j < served.size(); ++j)
                        if (j != t)
                            intra.push_back(channels.h(c, served_global[j]));
                    w.push_back(slnr_beamformer(channels.h(c, served_global[t]), intra, inter, regularizer));
                }

                const EffectiveGainTable table = gain_table(channels, c, served_global, w, noise);
                const PowerAllocation alloc = allocate_sumrate(table, config.p_total_per_gw, config.solver);
                ++result.diagnostics.solver_runs;
                if (!alloc.converged)
                    ++result.diagnostics.solver_nonconverged;
                const Eigen::VectorXd design = stream_rates(table, alloc.p);

                auto &bf = result.beamformers;
                bf.served_sets[c] = served;
                bf.leakage_sets[c] = edge;
                for (std::size_t t = 0; t < served.size(); ++t)
                {
                    bf.w[{c, served[t]}] = w[t];
                    result.transmission.streams[served_global[t]].parts.push_back({c, w[t], alloc.p[static_cast<Eigen::Index>(t)]});
                    if (served[t].cluster == c)
                        result.diagnostics.design_view_rate[served_global[t]] = design[static_cast<Eigen::Index>(t)];
                }
            }

            finish_full_reuse(result, channels, budget);
            return result;
        }
    }

    SinrTerms evaluate_sinr_terms(const Transmission &tx, const ChannelRealization &channels, int user, double noise)
    {
        const std::vector<int> owner = stream_of_user(tx, channels.users());
        if (user < 0 || user >= channels.users() || owner[user] < 0)
            throw ConfigError("user " + std::to_string(user) + " has no stream");
        return terms_from(stream_amplitudes(tx, channels), owner[user], user, noise);
    }

    double evaluate_sinr_global(const Transmission &tx, const ChannelRealization &channels, int user, double noise)
    {
        return evaluate_sinr_terms(tx, channels, user, noise).sinr();
    }

    std::vector<double> evaluate_all_sinr(const Transmission &tx, const ChannelRealization &channels, double noise)
    {
        const int n = channels.users();
        const std::vector<int> owner = stream_of_user(tx, n);
        const Eigen::MatrixXcd amp = stream_amplitudes(tx, channels);
        const Eigen::RowVectorXd total = amp.cwiseAbs2().colwise().sum();
        std::vector<double> sinr(n);
        for (int u = 0; u < n; ++u)
        {
            if (owner[u] < 0)
                throw ConfigError("user " + std::to_string(u) + " has no stream");
            const double signal = std::norm(amp(owner[u], u));
            sinr[u] = signal / (std::max(total[u] - signal, 0.0) + noise);
        }
        return sinr;
    }

    SchemeResult run_coloring(const Topology &topology, const ChannelRealization &channels,
                              const LinkBudget &budget, const SchemeConfig &config)
    {
        check_inputs(topology, channels, config);
        const int n = topology.beam_count();
        const double p_beam = config.p_total_per_gw / topology.beams_per_cluster;
        const double full_band_noise = budget.noise_power();
        const double noise = config.paper_literal_coloring ? 4.0 * full_band_noise : full_band_noise / 4.0;
        const cmat &g = channels.gains();

        SchemeResult result;
        result.scheme = config;
        result.per_user_rate.resize(n);
        result.per_beam_throughput.resize(n);
        result.diagnostics.serving_set_size.assign(n, 1);
        result.diagnostics.edge_users.resize(topology.clusters);
        for (int u = 0; u < n; ++u)
        {
            const int colour = topology.colour_of_beam[u];
            double interference = 0.0;
            for (int b = 0; b < n; ++b)
                if (b != u && topology.colour_of_beam[b] == colour)
                    interference += p_beam * std::norm(g(b, u));
            const double sinr = p_beam * std::norm(g(u, u)) / (interference + noise);
            result.per_user_rate[u] = 0.25 * std::log2(1.0 + sinr);
            // (W / 4) log2(1 + sinr)
            result.per_beam_throughput[u] = budget.bandwidth_hz * result.per_user_rate[u];
        }
        result.diagnostics.design_view_rate = result.per_user_rate;
        result.diagnostics.channel_checksum = channels.checksum();
        return result;
    }

    SchemeResult run_cluster_rzf(const Topology &topology, const ChannelRealization &channels,
                                 const LinkBudget &budget, const SchemeConfig &config)
    {
        check_inputs(topology, channels, config);
        const int K = topology.beams_per_cluster;
        const int n = topology.beam_count();
        const double noise = budget.noise_power();
        const double beta = optimal_beta(budget.noise_psd(), budget.bandwidth_hz, K, config.p_total_per_gw);

        SchemeResult result;
        result.scheme = config;
        result.diagnostics.edge_users.resize(topology.clusters);
        result.diagnostics.design_view_rate.assign(n, 0.0);
        result.transmission.streams.resize(n);

        for (int c = 0; c < topology.clusters; ++c)
        {
            cmat h(K, K);
            std::vector<int> users;
            for (int k = 0; k < K; ++k)
            {
                users.push_back(topology.beam_index(c, k));
                h.row(k) = channels.h(c, c, k).adjoint();
            }
            const cmat w_matrix = rzf_precoder(h, beta);
            std::vector<cvec> w;
            for (int k = 0; k < K; ++k)
                w.push_back(w_matrix.col(k));

            const EffectiveGainTable table = gain_table(channels, c, users, w, noise);
            const PowerAllocation alloc = allocate_sumrate(table, config.p_total_per_gw, config.solver);
            ++result.diagnostics.solver_runs;
            if (!alloc.converged)
                ++result.diagnostics.solver_nonconverged;
            const Eigen::VectorXd design = stream_rates(table, alloc.p);

            auto &bf = result.beamformers;
            for (int k = 0; k < K; ++k)
            {
                const UserId id{c, k};
                bf.served_sets[c].push_back(id);
                bf.w[{c, id}] = w[k];
                result.transmission.streams[users[k]] = Stream{users[k], {{c, w[k], alloc.p[k]}}};
                result.diagnostics.design_view_rate[users[k]] = design[k];
            }
            bf.leakage_sets[c] = {};
        }

        finish_full_reuse(result, channels, budget);
        return result;
    }

    SchemeResult run_hypercluster_csi(const Topology &topology, const ChannelRealization &channels,
                                      const LinkBudget &budget, const SchemeConfig &config)
    {
        return run_slnr(topology, channels, budget, config, false);
    }

    SchemeResult run_hypercluster_csi_data(const Topology &topology, const ChannelRealization &channels,
                                           const LinkBudget &budget, const SchemeConfig &config)
    {
        return run_slnr(topology, channels, budget, config, true);
    }

    SchemeResult run_scheme(const Topology &topology, const ChannelRealization &channels,
                            const LinkBudget &budget, const SchemeConfig &config)
    {
        switch (config.kind)
        {
        case SchemeKind::Coloring4:
            return run_coloring(topology, channels, budget, config);
        case SchemeKind::ClusterRZF:
            return run_cluster_rzf(topology, channels, budget, config);
        case SchemeKind::HyperClusterCSI:
            return run_hypercluster_csi(topology, channels, budget, config);
        case SchemeKind::HyperClusterCSIData:
            return run_hypercluster_csi_data(topology, channels, budget, config);
        }
        throw ConfigError("unknown scheme kind");
    }
}
