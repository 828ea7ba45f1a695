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

#ifndef MGSAT_HARNESS_HPP
#define MGSAT_HARNESS_HPP

#include "mgsat/channel.hpp"
#include "mgsat/geometry.hpp"
#include "mgsat/schemes.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace mgsat
{
    enum class ReportFormat
    {
        Csv,
        Json
    };

    ReportFormat parse_format(std::string_view name);

    // "a:b:step" (inclusive) or a comma separated list of dBW values.
    std::vector<double> parse_power_grid(std::string_view text);

    // Comma separated scheme names.
    std::vector<SchemeKind> parse_scheme_list(std::string_view text);

    struct SimConfig
    {
        int trials = 200;
        std::uint64_t master_seed = 1;
        std::vector<double> power_grid_dbw{0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0}; // per beam
        std::vector<SchemeKind> schemes{std::begin(all_schemes), std::end(all_schemes)};
        int m_per_neighbour = 1;
        SolverOptions solver;
        bool paper_literal_coloring = false;
        bool literal_slnr_noise = false;

        int clusters = 19;
        int beams_per_cluster = 7;
        double beam_spacing_deg = 0.6;      // angular distance of adjacent beam centres
        double coverage_diameter_km = 0.0;  // > 0 overrides beam_spacing_deg
        LinkBudget budget;

        int workers = 1;
        std::string output_path = "results.csv";
        ReportFormat format = ReportFormat::Csv;
        std::string per_beam_path; // optional per-beam detail CSV

        void validate() const;
        Topology make_topology() const;
        SchemeConfig scheme_config(SchemeKind kind, double per_beam_power_dbw) const;
    };

    inline double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }

    struct SweepCell
    {
        SchemeKind scheme = SchemeKind::Coloring4;
        double per_beam_power_dbw = 0.0;
        double mean_throughput_bps = 0.0; // mean over trials of the per-beam mean
        double std_error_bps = 0.0;
        double mean_rate = 0.0;           // bits/s/Hz
        int trials = 0;
        int solver_nonconverged = 0;
        std::vector<double> trial_means_bps; // per trial, in trial order
    };

    struct PairedGain
    {
        double relative_gain = 0.0;   // mean(a) / mean(b) - 1
        double mean_difference = 0.0; // bits/s
        double std_error = 0.0;       // of the paired difference
    };

    struct SweepReport
    {
        std::vector<double> power_grid_dbw;
        std::vector<SchemeKind> schemes;
        std::vector<SweepCell> cells;               // scheme-major, then power
        std::vector<std::uint64_t> trial_checksums; // channel realization per trial

        const SweepCell &cell(SchemeKind scheme, std::size_t power_index) const;
    };

    // Gain of scheme a over scheme b at one power point, from the same trials.
    PairedGain paired_gain(const SweepReport &report, SchemeKind a, SchemeKind b, std::size_t power_index);

    // Standard error of the mean (sample standard deviation / sqrt(n)).
    double standard_error(const std::vector<double> &samples);

    // One scheme on one power point of one trial.
    struct TrialOutcome
    {
        double mean_throughput_bps = 0.0;
        int solver_nonconverged = 0;
        std::uint64_t channel_checksum = 0;
        std::vector<double> per_user_rate; // kept only when per-beam output is requested
    };

    // Everything computed for trial t: outcomes[scheme][power].
    struct TrialRecord
    {
        std::uint64_t channel_checksum = 0;
        std::vector<std::vector<TrialOutcome>> outcomes;
    };

    TrialRecord run_trial(const SimConfig &config, const Topology &topology, int trial, bool keep_rates);

    // Worker count after the MGSAT_WORKERS environment override.
    int effective_workers(const SimConfig &config);

    using TrialSink = std::function<void(int trial, const TrialRecord &)>;

    // Monte-Carlo sweep. Trials run on worker threads; results are reduced in
    // trial order, so the report does not depend on the worker count. The sink,
    // if given, sees every trial in ascending order.
    SweepReport run_sweep(const SimConfig &config, const TrialSink &sink = {});

    // CSV: scheme,per_beam_power_dbw,mean_throughput_mbps,std_error_mbps,trials
    void write_report_csv(const SweepReport &report, std::ostream &os);
    void write_report_json(const SweepReport &report, std::ostream &os);
    // Columns: power, then one throughput column (Mbit/s) per scheme.
    void write_plot_data(const SweepReport &report, std::ostream &os);

    SweepReport read_report_csv(std::istream &is);
    SweepReport read_report_json(std::istream &is);

    // Writes the report to `path` and the plot data next to it (extension .dat).
    // Throws IoError with the path on failure.
    void export_report(const SweepReport &report, const std::string &path, ReportFormat format);

    // Per-beam detail rows: trial,scheme,per_beam_power_dbw,beam,rate_bps_hz,throughput_mbps
    void write_per_beam_header(std::ostream &os);
    void write_per_beam_rows(std::ostream &os, const SimConfig &config, int trial, const TrialRecord &record);

    std::string format_double(double value);
}

#endif
