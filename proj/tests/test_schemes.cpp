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


#include "mgsat/errors.hpp"
#include "mgsat/harness.hpp"
#include "mgsat/schemes.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

using namespace mgsat;

namespace
{
    struct Scenario
    {
        Topology topology;
        LinkBudget budget;
        ChannelRealization channels;
    };

    Scenario scenario(std::uint64_t trial, int clusters = 19, std::uint64_t master = 1)
    {
        SimConfig cfg;
        cfg.clusters = clusters;
        Scenario s{cfg.make_topology(), cfg.budget, {}};
        const UserDrop drop = drop_users(s.topology, derive_seed(master, seed_stream_drop, trial));
        s.channels = synthesize_channels(s.topology, drop, s.budget, derive_seed(master, seed_stream_channel, trial));
        return s;
    }

    SchemeConfig config(SchemeKind kind, double per_beam_dbw, int k = 7)
    {
        SchemeConfig c;
        c.kind = kind;
        c.p_total_per_gw = k * std::pow(10.0, per_beam_dbw / 10.0);
        return c;
    }

    double mean(const std::vector<double> &v)
    {
        double s = 0.0;
        for (double x : v)
            s += x;
        return s / static_cast<double>(v.size());
    }

    // Received amplitude of every stream at `user`, straight from the parts.
    std::vector<std::complex<double>> amplitudes_at(const Transmission &tx, const ChannelRealization &ch, int user)
    {
        std::vector<std::complex<double>> out;
        for (const Stream &s : tx.streams)
        {
            std::complex<double> a = 0.0;
            for (const Contribution &c : s.parts)
                a += std::sqrt(c.power) * c.w.dot(ch.h(c.gateway, user));
            out.push_back(a);
        }
        return out;
    }

    ChannelRealization tiny_channel(const cmat &g, int k) { return ChannelRealization(g, std::vector<RainFade>(g.cols()), k); }
}

TEST_CASE("scheme names")
{
    for (SchemeKind k : all_schemes)
        CHECK(parse_scheme(scheme_name(k)) == k);
    CHECK(scheme_name(SchemeKind::HyperClusterCSIData) == "csidata");
    CHECK_THROWS_AS(parse_scheme("zf"), ConfigError);
}

TEST_CASE("scheme config validation")
{
    SchemeConfig c;
    CHECK_NOTHROW(c.validate());
    c.m_per_neighbour = -1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SchemeConfig{};
    c.p_total_per_gw = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("SINR with all powers zero")
{
    const Scenario s = scenario(0);
    SchemeResult r = run_cluster_rzf(s.topology, s.channels, s.budget, config(SchemeKind::ClusterRZF, 10));
    for (Stream &st : r.transmission.streams)
        for (Contribution &c : st.parts)
            c.power = 0.0;
    for (double v : evaluate_all_sinr(r.transmission, s.channels, s.budget.noise_power()))
        CHECK(v == 0.0);
}

TEST_CASE("SINR of a lone user is its SNR")
{
    cmat g(1, 1);
    g(0, 0) = {0.0, 3.0};
    const ChannelRealization ch = tiny_channel(g, 1);
    cvec w(1);
    w[0] = {0.0, 1.0};
    Transmission tx{{Stream{0, {{0, w, 2.0}}}}};
    const SinrTerms t = evaluate_sinr_terms(tx, ch, 0, 0.5);
    CHECK(t.signal == doctest::Approx(18.0).epsilon(1e-15));
    CHECK(t.interference == 0.0);
    CHECK(evaluate_sinr_global(tx, ch, 0, 0.5) == doctest::Approx(36.0).epsilon(1e-15));
}

TEST_CASE("two aligned gateways combine coherently")
{
    // one feed per gateway; user 0 hears both gateways with amplitude a
    const double a = 0.7;
    cmat g = cmat::Zero(2, 2);
    g(0, 0) = a;
    g(1, 0) = a;
    g(1, 1) = 1.0;
    const ChannelRealization ch = tiny_channel(g, 1);
    const cvec one = cvec::Ones(1);
    Transmission both{{Stream{0, {{0, one, 1.0}, {1, one, 1.0}}}, Stream{1, {{1, one, 0.0}}}}};
    Transmission single{{Stream{0, {{0, one, 1.0}}}, Stream{1, {{1, one, 0.0}}}}};
    const SinrTerms tb = evaluate_sinr_terms(both, ch, 0, 1.0);
    const SinrTerms ts = evaluate_sinr_terms(single, ch, 0, 1.0);
    CHECK(tb.signal == doctest::Approx(4.0 * a * a).epsilon(1e-15));
    CHECK(ts.signal == doctest::Approx(a * a).epsilon(1e-15));
    CHECK(tb.interference == 0.0);
    CHECK(tb.noise == 1.0);
}

TEST_CASE("malformed transmissions are rejected")
{
    const cmat g = cmat::Identity(2, 2);
    const ChannelRealization ch = tiny_channel(g, 1);
    const cvec one = cvec::Ones(1);
    Transmission empty_part{{Stream{0, {}}, Stream{1, {{1, one, 1.0}}}}};
    CHECK_THROWS_AS(evaluate_all_sinr(empty_part, ch, 1.0), ConfigError);
    Transmission missing{{Stream{0, {{0, one, 1.0}}}}};
    CHECK_THROWS_AS(evaluate_all_sinr(missing, ch, 1.0), ConfigError);
    CHECK_THROWS_AS(evaluate_sinr_global(missing, ch, 1, 1.0), ConfigError);
}

TEST_CASE("interference accounting closes for every scheme")
{
    const Scenario s = scenario(3);
    for (SchemeKind kind : {SchemeKind::ClusterRZF, SchemeKind::HyperClusterCSI, SchemeKind::HyperClusterCSIData})
    {
        const SchemeResult r = run_scheme(s.topology, s.channels, s.budget, config(kind, 15));
        const std::vector<double> all = evaluate_all_sinr(r.transmission, s.channels, s.budget.noise_power());
        for (int u = 0; u < s.topology.beam_count(); u += 5)
        {
            const auto amp = amplitudes_at(r.transmission, s.channels, u);
            double total = 0.0, own = 0.0;
            for (std::size_t j = 0; j < amp.size(); ++j)
            {
                total += std::norm(amp[j]);
                if (r.transmission.streams[j].user == u)
                    own = std::norm(amp[j]);
            }
            const SinrTerms t = evaluate_sinr_terms(r.transmission, s.channels, u, s.budget.noise_power());
            CHECK(t.signal == doctest::Approx(own).epsilon(1e-9));
            CHECK(t.signal + t.interference == doctest::Approx(total).epsilon(1e-9));
            CHECK(all[u] == doctest::Approx(t.sinr()).epsilon(1e-12));
        }
    }
}

TEST_CASE("colouring: isolated beam")
{
    SimConfig cfg;
    cfg.clusters = 1;
    cfg.beams_per_cluster = 1;
    const Topology t = cfg.make_topology();
    const LinkBudget b;
    const ChannelRealization ch = synthesize_channels(t, drop_users(t, 4), b, 5);
    SchemeConfig c = config(SchemeKind::Coloring4, 10, 1);
    const double p = 10.0;
    const double h2 = std::norm(ch.gains()(0, 0));
    const SchemeResult physical = run_coloring(t, ch, b, c);
    CHECK(physical.per_user_rate[0] == doctest::Approx(0.25 * std::log2(1.0 + p * h2 / (b.noise_power() / 4.0))).epsilon(1e-14));
    c.paper_literal_coloring = true;
    const SchemeResult literal = run_coloring(t, ch, b, c);
    CHECK(literal.per_user_rate[0] == doctest::Approx(0.25 * std::log2(1.0 + p * h2 / (4.0 * b.noise_power()))).epsilon(1e-14));
    CHECK(literal.per_beam_throughput[0] == doctest::Approx(b.bandwidth_hz / 4.0 * std::log2(1.0 + p * h2 / (4.0 * b.noise_power()))).epsilon(1e-14));
}

TEST_CASE("colouring: mirrored co-colour twins get equal SINR")
{
    SimConfig cfg;
    cfg.clusters = 1;
    const Topology t = cfg.make_topology();
    const LinkBudget b;
    const UserDrop d = place_users(t, t.beam_centers);
    const ChannelRealization ch = synthesize_channels(t, d, b, std::vector<RainFade>(7, RainFade{1.0, 0.0}));
    const SchemeResult r = run_coloring(t, ch, b, config(SchemeKind::Coloring4, 10));
    // opposite ring beams (1,4), (2,5), (3,6) are point reflections through nadir
    for (int i = 1; i <= 3; ++i)
    {
        REQUIRE(t.colour_of_beam[i] == t.colour_of_beam[i + 3]);
        CHECK(r.per_user_rate[i] == doctest::Approx(r.per_user_rate[i + 3]).epsilon(1e-9));
    }
}

TEST_CASE("colouring matches a direct evaluation over the full layout")
{
    const Scenario s = scenario(7);
    for (bool literal : {false, true})
        for (double dbw : {0.0, 15.0, 30.0})
        {
            SchemeConfig c = config(SchemeKind::Coloring4, dbw);
            c.paper_literal_coloring = literal;
            const SchemeResult r = run_coloring(s.topology, s.channels, s.budget, c);
            const double p = std::pow(10.0, dbw / 10.0);
            const double noise = literal ? 4.0 * s.budget.noise_power() : s.budget.noise_power() / 4.0;
            for (int c2 = 0; c2 < 19; ++c2)
                for (int k = 0; k < 7; ++k)
                {
                    const int u = c2 * 7 + k;
                    const double signal = p * std::norm(s.channels.h(c2, c2, k)[k]);
                    double interference = 0.0;
                    for (int c1 = 0; c1 < 19; ++c1)
                    {
                        const cvec h = s.channels.h(c1, c2, k);
                        for (int i = 0; i < 7; ++i)
                            if ((c1 != c2 || i != k) && s.topology.colour_of_beam[c1 * 7 + i] == s.topology.colour_of_beam[u])
                                interference += p * std::norm(h[i]);
                    }
                    const double rate = 0.25 * std::log2(1.0 + signal / (interference + noise));
                    CHECK(std::abs(r.per_user_rate[u] - rate) <= 1e-12);
                }
        }
}

TEST_CASE("R-ZF in a single-cluster world achieves its design view")
{
    for (std::uint64_t trial = 0; trial < 20; ++trial)
    {
        const Scenario s = scenario(trial, 1);
        for (double dbw : {0.0, 15.0, 30.0})
        {
            const SchemeResult r = run_cluster_rzf(s.topology, s.channels, s.budget, config(SchemeKind::ClusterRZF, dbw));
            for (int u = 0; u < 7; ++u)
                CHECK(std::abs(r.per_user_rate[u] - r.diagnostics.design_view_rate[u]) <= 1e-9);
        }
    }
}

TEST_CASE("R-ZF achieved rates never exceed the design view")
{
    for (std::uint64_t trial = 0; trial < 5; ++trial)
    {
        const Scenario s = scenario(trial);
        for (double dbw : {0.0, 15.0, 30.0})
        {
            const SchemeResult r = run_cluster_rzf(s.topology, s.channels, s.budget, config(SchemeKind::ClusterRZF, dbw));
            for (int u = 0; u < s.topology.beam_count(); ++u)
                CHECK(r.per_user_rate[u] <= r.diagnostics.design_view_rate[u] + 1e-12);
        }
    }
}

TEST_CASE("R-ZF beats colouring on a fixed realization at mid-grid")
{
    const Scenario s = scenario(11);
    SchemeConfig col = config(SchemeKind::Coloring4, 15);
    col.paper_literal_coloring = true;
    const double rzf = run_cluster_rzf(s.topology, s.channels, s.budget, config(SchemeKind::ClusterRZF, 15)).mean_rate();
    CHECK(rzf > run_coloring(s.topology, s.channels, s.budget, col).mean_rate());
}

TEST_CASE("CSI sharing: the lone central cluster uses intra-cluster leakage only")
{
    const Scenario s = scenario(2);
    const SchemeConfig c = config(SchemeKind::HyperClusterCSI, 15);
    const SchemeResult r = run_hypercluster_csi(s.topology, s.channels, s.budget, c);
    CHECK(r.diagnostics.edge_users[0].empty());
    CHECK(r.beamformers.leakage_sets.at(0).empty());
    const double reg = optimal_beta(s.budget.noise_psd(), s.budget.bandwidth_hz, 7, c.p_total_per_gw);
    for (int k = 0; k < 7; ++k)
    {
        std::vector<cvec> intra;
        for (int j = 0; j < 7; ++j)
            if (j != k)
                intra.push_back(s.channels.h(0, 0, j));
        const cvec w = slnr_beamformer(s.channels.h(0, 0, k), intra, {}, reg);
        CHECK((r.beamformers.at(0, {0, k}) - w).norm() < 1e-14);
    }
}

TEST_CASE("CSI sharing without edge users reproduces R-ZF directions")
{
    const Scenario s = scenario(4);
    for (double dbw : {0.0, 15.0, 30.0})
    {
        SchemeConfig c = config(SchemeKind::HyperClusterCSI, dbw);
        c.m_per_neighbour = 0;
        const SchemeResult slnr = run_hypercluster_csi(s.topology, s.channels, s.budget, c);
        const SchemeResult rzf = run_cluster_rzf(s.topology, s.channels, s.budget, config(SchemeKind::ClusterRZF, dbw));
        for (int g = 0; g < 19; ++g)
            for (int k = 0; k < 7; ++k)
                CHECK(oracle::overlap(slnr.beamformers.at(g, {g, k}), rzf.beamformers.at(g, {g, k})) >= 1.0 - 1e-12);
    }
}

TEST_CASE("data sharing with m = 0 is CSI sharing, field for field")
{
    const Scenario s = scenario(5);
    for (double dbw : {0.0, 15.0, 30.0})
    {
        SchemeConfig c = config(SchemeKind::HyperClusterCSI, dbw);
        c.m_per_neighbour = 0;
        const SchemeResult a = run_hypercluster_csi(s.topology, s.channels, s.budget, c);
        c.kind = SchemeKind::HyperClusterCSIData;
        const SchemeResult b = run_hypercluster_csi_data(s.topology, s.channels, s.budget, c);
        CHECK(a.per_user_rate == b.per_user_rate);
        CHECK(a.per_beam_throughput == b.per_beam_throughput);
        CHECK(a.diagnostics.design_view_rate == b.diagnostics.design_view_rate);
        CHECK(a.diagnostics.serving_set_size == b.diagnostics.serving_set_size);
        CHECK(a.diagnostics.edge_users == b.diagnostics.edge_users);
        CHECK(a.diagnostics.solver_runs == b.diagnostics.solver_runs);
        CHECK(a.diagnostics.solver_nonconverged == b.diagnostics.solver_nonconverged);
        CHECK(a.diagnostics.channel_checksum == b.diagnostics.channel_checksum);
        CHECK(a.beamformers.served_sets == b.beamformers.served_sets);
        CHECK(a.beamformers.leakage_sets == b.beamformers.leakage_sets);
        CHECK(a.beamformers.w == b.beamformers.w);
    }
}

TEST_CASE("data sharing: serving sets follow the edge selection")
{
    const Scenario s = scenario(6);
    const SchemeResult r = run_hypercluster_csi_data(s.topology, s.channels, s.budget, config(SchemeKind::HyperClusterCSIData, 15));
    std::map<int, int> picked;
    for (int g = 0; g < 19; ++g)
    {
        CHECK(r.diagnostics.edge_users[g].size() == s.topology.cooperating_neighbours(g).size());
        for (const UserId &e : r.diagnostics.edge_users[g])
        {
            CHECK(e.cluster != g);
            ++picked[e.global(7)];
        }
        // every served user has CSI at the gateway: own users or selected edges
        const auto &leak = r.beamformers.leakage_sets.at(g);
        for (const UserId &u : r.beamformers.served_sets.at(g))
            CHECK((u.cluster == g || std::find(leak.begin(), leak.end(), u) != leak.end()));
    }
    int size_two = 0;
    for (int u = 0; u < 133; ++u)
    {
        CHECK(r.diagnostics.serving_set_size[u] == 1 + picked[u]);
        size_two += r.diagnostics.serving_set_size[u] == 2;
    }
    CHECK(size_two > 0);
}

TEST_CASE("data sharing: contributions of one user add in phase")
{
    const Scenario s = scenario(8);
    const SchemeResult r = run_hypercluster_csi_data(s.topology, s.channels, s.budget, config(SchemeKind::HyperClusterCSIData, 15));
    for (const Stream &st : r.transmission.streams)
    {
        if (st.parts.size() < 2)
            continue;
        double sum_amp = 0.0;
        for (const Contribution &c : st.parts)
            sum_amp += std::sqrt(c.power) * std::abs(c.w.dot(s.channels.h(c.gateway, st.user)));
        const SinrTerms t = evaluate_sinr_terms(r.transmission, s.channels, st.user, s.budget.noise_power());
        CHECK(t.signal == doctest::Approx(sum_amp * sum_amp).epsilon(1e-9));
    }
}

TEST_CASE("data sharing never hurts edge users deep in the noise-limited regime")
{
    int compared = 0;
    for (std::uint64_t trial = 0; trial < 10; ++trial)
    {
        const Scenario s = scenario(trial);
        const SchemeResult csi = run_hypercluster_csi(s.topology, s.channels, s.budget, config(SchemeKind::HyperClusterCSI, -30));
        const SchemeResult data = run_hypercluster_csi_data(s.topology, s.channels, s.budget, config(SchemeKind::HyperClusterCSIData, -30));
        for (int u = 0; u < 133; ++u)
            if (data.diagnostics.serving_set_size[u] >= 2)
            {
                ++compared;
                CHECK(data.per_user_rate[u] >= csi.per_user_rate[u] * (1.0 - 1e-12));
            }
    }
    CHECK(compared > 0);
}

TEST_CASE("a helper gateway adds received power to an edge user")
{
    // same home transmission as CSI sharing, plus the helpers' contributions
    const Scenario s = scenario(9);
    const double noise = s.budget.noise_power();
    const SchemeResult csi = run_hypercluster_csi(s.topology, s.channels, s.budget, config(SchemeKind::HyperClusterCSI, 15));
    const SchemeResult data = run_hypercluster_csi_data(s.topology, s.channels, s.budget, config(SchemeKind::HyperClusterCSIData, 15));
    Transmission helped = csi.transmission;
    int strict = 0;
    for (const Stream &st : data.transmission.streams)
        for (const Contribution &c : st.parts)
            if (c.gateway != st.user / 7)
                helped.streams[st.user].parts.push_back(c);
    for (const Stream &st : data.transmission.streams)
    {
        if (st.parts.size() < 2)
            continue;
        const SinrTerms before = evaluate_sinr_terms(csi.transmission, s.channels, st.user, noise);
        const SinrTerms after = evaluate_sinr_terms(helped, s.channels, st.user, noise);
        CHECK(after.signal >= before.signal);
        double helper_power = 0.0;
        for (const Contribution &c : st.parts)
            if (c.gateway != st.user / 7)
                helper_power += c.power;
        if (helper_power > 0.0)
        {
            CHECK(after.signal > before.signal);
            CHECK(after.signal / noise > before.signal / noise);
            ++strict;
        }
    }
    CHECK(strict > 0);
}

TEST_CASE("every scheme: finite non-negative rates, unit beamformers, budget respected")
{
    for (std::uint64_t trial = 0; trial < 3; ++trial)
    {
        const Scenario s = scenario(trial);
        for (SchemeKind kind : all_schemes)
            for (double dbw : {-10.0, 0.0, 15.0, 30.0, 40.0})
            {
                SchemeConfig c = config(kind, dbw);
                const SchemeResult r = run_scheme(s.topology, s.channels, s.budget, c);
                REQUIRE(r.per_user_rate.size() == 133);
                for (double v : r.per_user_rate)
                {
                    CHECK(std::isfinite(v));
                    CHECK(v >= 0.0);
                }
                for (const auto &[key, w] : r.beamformers.w)
                    CHECK(std::abs(w.norm() - 1.0) <= 1e-12);
                std::map<int, double> spent;
                for (const Stream &st : r.transmission.streams)
                    for (const Contribution &part : st.parts)
                    {
                        CHECK(part.power >= 0.0);
                        spent[part.gateway] += part.power;
                    }
                for (const auto &[g, p] : spent)
                    CHECK(p <= c.p_total_per_gw * (1.0 + 1e-9));
                CHECK(r.diagnostics.channel_checksum == s.channels.checksum());
                CHECK(r.mean_throughput() == doctest::Approx(s.budget.bandwidth_hz * r.mean_rate()).epsilon(1e-14));
            }
    }
}

TEST_CASE("every scheme: doubling the power never lowers the mean rate")
{
    for (std::uint64_t trial = 0; trial < 3; ++trial)
    {
        const Scenario s = scenario(trial);
        for (SchemeKind kind : all_schemes)
        {
            double previous = -1.0;
            for (double dbw = -10.0; dbw <= 35.0; dbw += 10.0 * std::log10(2.0))
            {
                const double rate = run_scheme(s.topology, s.channels, s.budget, config(kind, dbw)).mean_rate();
                CHECK(rate >= previous);
                previous = rate;
            }
        }
    }
}
