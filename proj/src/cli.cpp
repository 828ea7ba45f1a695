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

#include "mgsat/cli.hpp"
#include "mgsat/errors.hpp"
#include "mgsat/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>

namespace mgsat
{
    namespace
    {
        template <typename Writer>
        void write_text_file(const std::string &path, Writer &&writer)
        {
            std::ofstream os(path, std::ios::binary);
            if (!os)
                throw IoError("cannot open '" + path + "' for writing");
            writer(os);
            if (!os)
                throw IoError("write to '" + path + "' failed");
        }
    }

    int run_simulate_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"Monte-Carlo forward-link simulator for multi-gateway multibeam satellite systems.\n"
                     "Compares 4-colour reuse, per-gateway R-ZF, SLNR with CSI sharing and SLNR with\n"
                     "CSI + data sharing, reporting mean per-beam throughput versus per-beam power.",
                     "simulate"};

        SimConfig cfg;
        std::string schemes = "coloring,rzf,csi,csidata";
        std::string power = "0:30:5";
        std::string format = "csv";
        std::string topology_out, channel_dump;
        bool quiet = false;

        app.set_config("--config", "", "Read options from a key=value file; command-line flags take precedence");
        app.add_option("--trials", cfg.trials, "Monte-Carlo trials")->capture_default_str();
        app.add_option("--seed", cfg.master_seed, "Master seed")->capture_default_str();
        app.add_option("--schemes", schemes, "Comma separated subset of coloring,rzf,csi,csidata")->capture_default_str();
        app.add_option("--power-dbw", power, "Per-beam power grid in dBW: start:stop:step or a comma list")->capture_default_str();
        app.add_option("--m", cfg.m_per_neighbour, "Edge users selected per neighbouring cluster")->capture_default_str();
        app.add_option("--out", cfg.output_path, "Report path; plot data is written next to it as .dat")->capture_default_str();
        app.add_option("--format", format, "Report format: csv or json")->capture_default_str();
        app.add_flag("--paper-literal-coloring", cfg.paper_literal_coloring,
                     "Colouring noise term 4 W N0 instead of the sub-band noise W N0 / 4");
        app.add_flag("--literal-slnr-noise", cfg.literal_slnr_noise,
                     "Regularize SLNR beamformers with W N0 instead of W N0 K / P_T");
        app.add_option("--workers", cfg.workers, "Worker threads (0 = all cores); MGSAT_WORKERS overrides")->capture_default_str();
        app.add_option("--beam-spacing-deg", cfg.beam_spacing_deg, "Angular spacing of adjacent beam centres")->capture_default_str();
        app.add_option("--coverage-diameter-km", cfg.coverage_diameter_km,
                       "Fit the layout into a disk of this diameter (overrides --beam-spacing-deg)");
        app.add_option("--tol", cfg.solver.tol, "Power solver relative tolerance")->capture_default_str();
        app.add_option("--max-iters", cfg.solver.max_iters, "Power solver iteration cap per start")->capture_default_str();
        bool single_start = false;
        app.add_flag("--single-start", single_start, "Run the power solver from the uniform split only");
        app.add_option("--per-beam-out", cfg.per_beam_path, "Optional per-beam CSV (trial, scheme, power, beam, rate, throughput)");
        app.add_option("--topology-out", topology_out, "Optional topology JSON (beam centres, clusters, colours)");
        app.add_option("--channel-dump", channel_dump, "Optional CSV of the first trial's channel matrix");
        app.add_flag("-q,--quiet", quiet, "Do not print the summary table");

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::CallForHelp &e)
        {
            return app.exit(e, out, err);
        }
        catch (const CLI::CallForAllHelp &e)
        {
            return app.exit(e, out, err);
        }
        catch (const CLI::ParseError &e)
        {
            app.exit(e, out, err);
            return exit_config_error;
        }

        try
        {
            cfg.schemes = parse_scheme_list(schemes);
            cfg.power_grid_dbw = parse_power_grid(power);
            cfg.format = parse_format(format);
            cfg.solver.multi_start = !single_start;
            cfg.validate();
            const Topology topology = cfg.make_topology();

            if (!topology_out.empty())
                write_text_file(topology_out, [&](std::ostream &os) { os << topology_to_json(topology) << '\n'; });
            if (!channel_dump.empty())
            {
                const UserDrop drop = drop_users(topology, derive_seed(cfg.master_seed, seed_stream_drop, 0));
                const ChannelRealization ch =
                    synthesize_channels(topology, drop, cfg.budget, derive_seed(cfg.master_seed, seed_stream_channel, 0));
                write_text_file(channel_dump, [&](std::ostream &os) { write_channel_csv(ch, os); });
            }

            std::ofstream per_beam;
            TrialSink sink;
            if (!cfg.per_beam_path.empty())
            {
                per_beam.open(cfg.per_beam_path, std::ios::binary);
                if (!per_beam)
                    throw IoError("cannot open '" + cfg.per_beam_path + "' for writing");
                write_per_beam_header(per_beam);
                sink = [&](int trial, const TrialRecord &record) { write_per_beam_rows(per_beam, cfg, trial, record); };
            }

            const SweepReport report = run_sweep(cfg, sink);
            if (per_beam.is_open() && !per_beam.flush())
                throw IoError("write to '" + cfg.per_beam_path + "' failed");
            export_report(report, cfg.output_path, cfg.format);

            if (!quiet)
            {
                out << "scheme      P[dBW]   mean[Mbit/s]   s.e.   nonconv\n";
                for (const SweepCell &c : report.cells)
                {
                    char line[128];
                    std::snprintf(line, sizeof(line), "%-10s %6.1f %14.3f %7.3f %8d\n",
                                  std::string(scheme_name(c.scheme)).c_str(), c.per_beam_power_dbw,
                                  c.mean_throughput_bps / 1e6, c.std_error_bps / 1e6, c.solver_nonconverged);
                    out << line;
                }
            }
            return exit_ok;
        }
        catch (const ConfigError &e)
        {
            err << "configuration error: " << e.what() << '\n';
            return exit_config_error;
        }
        catch (const IoError &e)
        {
            err << "I/O error: " << e.what() << '\n';
            return exit_io_error;
        }
    }
}
