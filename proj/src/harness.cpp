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

#include "mgsat/harness.hpp"
#include "mgsat/errors.hpp"
#include "mgsat/rng.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace mgsat
{
    namespace
    {
        std::string trim(std::string_view s)
        {
            const auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string_view::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r\n");
            return std::string(s.substr(b, e - b + 1));
        }

        std::vector<std::string> split(std::string_view s, char sep)
        {
            std::vector<std::string> out;
            std::size_t start = 0;
            while (true)
            {
                const auto pos = s.find(sep, start);
                out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
                if (pos == std::string_view::npos)
                    break;
                start = pos + 1;
            }
            return out;
        }

        double parse_double(std::string_view text, std::string_view what)
        {
            const std::string t = trim(text);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
                throw ConfigError("cannot parse " + std::string(what) + " '" + t + "'");
            return v;
        }

        int parse_int(std::string_view text, std::string_view what)
        {
            const std::string t = trim(text);
            int v = 0;
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
                throw ConfigError("cannot parse " + std::string(what) + " '" + t + "'");
            return v;
        }
    }

    std::string format_double(double value)
    {
        char buf[64];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
        return std::string(buf, ptr);
    }

    ReportFormat parse_format(std::string_view name)
    {
        if (name == "csv")
            return ReportFormat::Csv;
        if (name == "json")
            return ReportFormat::Json;
        throw ConfigError("unknown output format '" + std::string(name) + "' (expected csv or json)");
    }

    std::vector<double> parse_power_grid(std::string_view text)
    {
        std::vector<double> grid;
        if (text.find(':') != std::string_view::npos)
        {
            const auto parts = split(text, ':');
            if (parts.size() != 3)
                throw ConfigError("power grid range must be start:stop:step");
            const double start = parse_double(parts[0], "power grid start");
            const double stop = parse_double(parts[1], "power grid stop");
            const double step = parse_double(parts[2], "power grid step");
            if (!(step > 0.0) || !(stop >= start))
                throw ConfigError("power grid range needs step > 0 and stop >= start");
            const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
            if (count > 10000)
                throw ConfigError("power grid has too many points");
            for (long i = 0; i < count; ++i)
                grid.push_back(start + static_cast<double>(i) * step);
        }
        else
        {
            for (const auto &p : split(text, ','))
                if (!p.empty())
                    grid.push_back(parse_double(p, "power grid value"));
        }
        if (grid.empty())
            throw ConfigError("power grid is empty");
        for (double v : grid)
            if (!std::isfinite(v))
                throw ConfigError("power grid values must be finite");
        return grid;
    }

    std::vector<SchemeKind> parse_scheme_list(std::string_view text)
    {
        std::vector<SchemeKind> out;
        for (const auto &name : split(text, ','))
            if (!name.empty())
                out.push_back(parse_scheme(name));
        if (out.empty())
            throw ConfigError("no schemes selected");
        return out;
    }

    void SimConfig::validate() const
    {
        if (trials < 1)
            throw ConfigError("trials must be at least 1");
        if (power_grid_dbw.empty())
            throw ConfigError("power grid is empty");
        for (double p : power_grid_dbw)
            if (!std::isfinite(p))
                throw ConfigError("power grid values must be finite");
        if (schemes.empty())
            throw ConfigError("no schemes selected");
        if (m_per_neighbour < 0 || m_per_neighbour > beams_per_cluster)
            throw ConfigError("m must be in [0, beams per cluster]");
        if (!(solver.tol > 0.0) || solver.max_iters < 1)
            throw ConfigError("solver tol must be positive and max_iters at least 1");
        if (workers < 0)
            throw ConfigError("workers must be non-negative (0 = all cores)");
        if (!(coverage_diameter_km > 0.0) && !(beam_spacing_deg > 0.0))
            throw ConfigError("beam spacing must be positive");
        budget.validate();
    }

    Topology SimConfig::make_topology() const
    {
        if (coverage_diameter_km > 0.0)
            return build_topology(coverage_diameter_km, beams_per_cluster, clusters);
        return build_topology_with_pitch(beam_pitch_for_spacing_deg(beam_spacing_deg), beams_per_cluster, clusters);
    }

    SchemeConfig SimConfig::scheme_config(SchemeKind kind, double per_beam_power_dbw) const
    {
        SchemeConfig s;
        s.kind = kind;
        s.m_per_neighbour = m_per_neighbour;
        s.paper_literal_coloring = paper_literal_coloring;
        s.literal_slnr_noise = literal_slnr_noise;
        s.p_total_per_gw = beams_per_cluster * dbw_to_watts(per_beam_power_dbw);
        s.solver = solver;
        return s;
    }

    const SweepCell &SweepReport::cell(SchemeKind scheme, std::size_t power_index) const
    {
        for (const SweepCell &c : cells)
            if (c.scheme == scheme && power_index < power_grid_dbw.size() &&
                c.per_beam_power_dbw == power_grid_dbw[power_index])
                return c;
        throw ConfigError("report has no cell for scheme " + std::string(scheme_name(scheme)));
    }

    double standard_error(const std::vector<double> &samples)
    {
        const std::size_t n = samples.size();
        if (n < 2)
            return 0.0;
        double mean = 0.0;
        for (double v : samples)
            mean += v;
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (double v : samples)
            ss += (v - mean) * (v - mean);
        return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    }

    PairedGain paired_gain(const SweepReport &report, SchemeKind a, SchemeKind b, std::size_t power_index)
    {
        const SweepCell &ca = report.cell(a, power_index);
        const SweepCell &cb = report.cell(b, power_index);
        if (ca.trial_means_bps.size() != cb.trial_means_bps.size() || ca.trial_means_bps.empty())
            throw ConfigError("paired comparison needs per-trial results of both schemes");
        std::vector<double> diff(ca.trial_means_bps.size());
        for (std::size_t t = 0; t < diff.size(); ++t)
            diff[t] = ca.trial_means_bps[t] - cb.trial_means_bps[t];
        PairedGain g;
        g.mean_difference = ca.mean_throughput_bps - cb.mean_throughput_bps;
        g.relative_gain = ca.mean_throughput_bps / cb.mean_throughput_bps - 1.0;
        g.std_error = standard_error(diff);
        return g;
    }

    TrialRecord run_trial(const SimConfig &config, const Topology &topology, int trial, bool keep_rates)
    {
        const auto t = static_cast<std::uint64_t>(trial);
        const UserDrop drop = drop_users(topology, derive_seed(config.master_seed, seed_stream_drop, t));
        const ChannelRealization channels =
            synthesize_channels(topology, drop, config.budget, derive_seed(config.master_seed, seed_stream_channel, t));

        TrialRecord record;
        record.channel_checksum = channels.checksum();
        record.outcomes.resize(config.schemes.size());
        for (std::size_t s = 0; s < config.schemes.size(); ++s)
            for (double power : config.power_grid_dbw)
            {
                const SchemeResult r = run_scheme(topology, channels, config.budget, config.scheme_config(config.schemes[s], power));
                TrialOutcome o;
                o.mean_throughput_bps = r.mean_throughput();
                o.solver_nonconverged = r.diagnostics.solver_nonconverged;
                o.channel_checksum = r.diagnostics.channel_checksum;
                if (keep_rates)
                    o.per_user_rate = r.per_user_rate;
                record.outcomes[s].push_back(std::move(o));
            }
        return record;
    }

    int effective_workers(const SimConfig &config)
    {
        int workers = config.workers;
        if (const char *env = std::getenv("MGSAT_WORKERS"); env != nullptr && *env != '\0')
        {
            workers = parse_int(env, "MGSAT_WORKERS");
            if (workers < 0)
                throw ConfigError("MGSAT_WORKERS must be non-negative");
        }
        if (workers == 0)
            workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
        return workers;
    }

    SweepReport run_sweep(const SimConfig &config, const TrialSink &sink)
    {
        config.validate();
        const Topology topology = config.make_topology();
        const bool keep_rates = static_cast<bool>(sink) && !config.per_beam_path.empty();
        const int workers = std::min(effective_workers(config), config.trials);

        std::vector<TrialRecord> records(config.trials);
        std::atomic<int> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto work = [&]()
        {
            for (int t = next++; t < config.trials; t = next++)
            {
                try
                {
                    records[t] = run_trial(config, topology, t, keep_rates);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next = config.trials;
                }
            }
        };
        if (workers <= 1)
            work();
        else
        {
            std::vector<std::jthread> pool;
            for (int i = 0; i < workers; ++i)
                pool.emplace_back(work);
        }
        if (failure)
            std::rethrow_exception(failure);

        SweepReport report;
        report.power_grid_dbw = config.power_grid_dbw;
        report.schemes = config.schemes;
        for (const TrialRecord &r : records)
            report.trial_checksums.push_back(r.channel_checksum);
        for (std::size_t s = 0; s < config.schemes.size(); ++s)
            for (std::size_t p = 0; p < config.power_grid_dbw.size(); ++p)
            {
                SweepCell cell;
                cell.scheme = config.schemes[s];
                cell.per_beam_power_dbw = config.power_grid_dbw[p];
                cell.trials = config.trials;
                double sum = 0.0;
                for (const TrialRecord &r : records)
                {
                    const TrialOutcome &o = r.outcomes[s][p];
                    cell.trial_means_bps.push_back(o.mean_throughput_bps);
                    cell.solver_nonconverged += o.solver_nonconverged;
                    sum += o.mean_throughput_bps;
                }
                cell.mean_throughput_bps = sum / static_cast<double>(config.trials);
                cell.std_error_bps = standard_error(cell.trial_means_bps);
                cell.mean_rate = cell.mean_throughput_bps / config.budget.bandwidth_hz;
                report.cells.push_back(std::move(cell));
            }

        if (sink)
            for (int t = 0; t < config.trials; ++t)
                sink(t, records[t]);
        return report;
    }
}
