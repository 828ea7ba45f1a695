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

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace mgsat
{
    namespace
    {
        constexpr const char *csv_header = "scheme,per_beam_power_dbw,mean_throughput_mbps,std_error_mbps,trials";

        void add_axis_values(SweepReport &report, const SweepCell &cell)
        {
            if (std::find(report.schemes.begin(), report.schemes.end(), cell.scheme) == report.schemes.end())
                report.schemes.push_back(cell.scheme);
            if (std::find(report.power_grid_dbw.begin(), report.power_grid_dbw.end(), cell.per_beam_power_dbw) ==
                report.power_grid_dbw.end())
                report.power_grid_dbw.push_back(cell.per_beam_power_dbw);
        }

        double number(const std::string &field, int line)
        {
            try
            {
                std::size_t used = 0;
                const double v = std::stod(field, &used);
                if (used != field.size())
                    throw std::invalid_argument(field);
                return v;
            }
            catch (const std::exception &)
            {
                throw ConfigError("report line " + std::to_string(line) + ": bad number '" + field + "'");
            }
        }

        template <typename Writer>
        void write_file(const std::string &path, Writer &&writer)
        {
            std::ofstream os(path, std::ios::binary);
            if (!os)
                throw IoError("cannot open '" + path + "' for writing");
            writer(os);
            os.flush();
            if (!os)
                throw IoError("write to '" + path + "' failed");
        }
    }

    void write_report_csv(const SweepReport &report, std::ostream &os)
    {
        os << csv_header << '\n';
        for (const SweepCell &c : report.cells)
            os << scheme_name(c.scheme) << ',' << format_double(c.per_beam_power_dbw) << ','
               << format_double(c.mean_throughput_bps / 1e6) << ',' << format_double(c.std_error_bps / 1e6) << ','
               << c.trials << '\n';
    }

    SweepReport read_report_csv(std::istream &is)
    {
        std::string line;
        if (!std::getline(is, line) || line != csv_header)
            throw ConfigError("report CSV header mismatch");
        SweepReport report;
        int line_no = 1;
        while (std::getline(is, line))
        {
            ++line_no;
            if (line.empty())
                continue;
            std::vector<std::string> f;
            std::stringstream ss(line);
            for (std::string field; std::getline(ss, field, ',');)
                f.push_back(field);
            if (f.size() != 5)
                throw ConfigError("report line " + std::to_string(line_no) + ": expected 5 fields");
            SweepCell c;
            c.scheme = parse_scheme(f[0]);
            c.per_beam_power_dbw = number(f[1], line_no);
            c.mean_throughput_bps = number(f[2], line_no) * 1e6;
            c.std_error_bps = number(f[3], line_no) * 1e6;
            c.trials = static_cast<int>(number(f[4], line_no));
            add_axis_values(report, c);
            report.cells.push_back(std::move(c));
        }
        return report;
    }

    void write_report_json(const SweepReport &report, std::ostream &os)
    {
        nlohmann::json j;
        j["cells"] = nlohmann::json::array();
        for (const SweepCell &c : report.cells)
            j["cells"].push_back({{"scheme", scheme_name(c.scheme)},
                                  {"per_beam_power_dbw", c.per_beam_power_dbw},
                                  {"mean_throughput_mbps", c.mean_throughput_bps / 1e6},
                                  {"std_error_mbps", c.std_error_bps / 1e6},
                                  {"trials", c.trials},
                                  {"mean_spectral_efficiency_bps_hz", c.mean_rate},
                                  {"solver_nonconverged", c.solver_nonconverged}});

        // paired relative gains, only available with per-trial data
        j["relative_gains"] = nlohmann::json::array();
        for (std::size_t p = 0; p < report.power_grid_dbw.size(); ++p)
            for (SchemeKind a : report.schemes)
                for (SchemeKind b : report.schemes)
                {
                    if (a == b || report.cell(a, p).trial_means_bps.empty())
                        continue;
                    const PairedGain g = paired_gain(report, a, b, p);
                    j["relative_gains"].push_back({{"scheme", scheme_name(a)},
                                                   {"baseline", scheme_name(b)},
                                                   {"per_beam_power_dbw", report.power_grid_dbw[p]},
                                                   {"relative_gain", g.relative_gain},
                                                   {"mean_difference_mbps", g.mean_difference / 1e6},
                                                   {"std_error_mbps", g.std_error / 1e6}});
                }
        os << j.dump(2) << '\n';
    }

    SweepReport read_report_json(std::istream &is)
    {
        nlohmann::json j;
        try
        {
            is >> j;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ConfigError(std::string("report JSON: ") + e.what());
        }
        SweepReport report;
        for (const auto &e : j.at("cells"))
        {
            SweepCell c;
            c.scheme = parse_scheme(e.at("scheme").get<std::string>());
            c.per_beam_power_dbw = e.at("per_beam_power_dbw").get<double>();
            c.mean_throughput_bps = e.at("mean_throughput_mbps").get<double>() * 1e6;
            c.std_error_bps = e.at("std_error_mbps").get<double>() * 1e6;
            c.trials = e.at("trials").get<int>();
            c.mean_rate = e.value("mean_spectral_efficiency_bps_hz", 0.0);
            c.solver_nonconverged = e.value("solver_nonconverged", 0);
            add_axis_values(report, c);
            report.cells.push_back(std::move(c));
        }
        return report;
    }

    void write_plot_data(const SweepReport &report, std::ostream &os)
    {
        os << "# per_beam_power_dbw";
        for (SchemeKind s : report.schemes)
            os << ' ' << scheme_name(s) << "_mbps";
        os << '\n';
        for (std::size_t p = 0; p < report.power_grid_dbw.size(); ++p)
        {
            os << format_double(report.power_grid_dbw[p]);
            for (SchemeKind s : report.schemes)
                os << ' ' << format_double(report.cell(s, p).mean_throughput_bps / 1e6);
            os << '\n';
        }
    }

    void export_report(const SweepReport &report, const std::string &path, ReportFormat format)
    {
        write_file(path, [&](std::ostream &os)
                   {
                       if (format == ReportFormat::Csv)
                           write_report_csv(report, os);
                       else
                           write_report_json(report, os); });
        std::filesystem::path plot(path);
        plot.replace_extension(".dat");
        if (plot.string() != path)
            write_file(plot.string(), [&](std::ostream &os) { write_plot_data(report, os); });
    }

    void write_per_beam_header(std::ostream &os)
    {
        os << "trial,scheme,per_beam_power_dbw,beam,rate_bps_hz,throughput_mbps\n";
    }

    void write_per_beam_rows(std::ostream &os, const SimConfig &config, int trial, const TrialRecord &record)
    {
        for (std::size_t s = 0; s < config.schemes.size(); ++s)
            for (std::size_t p = 0; p < config.power_grid_dbw.size(); ++p)
            {
                const auto &rates = record.outcomes[s][p].per_user_rate;
                for (std::size_t b = 0; b < rates.size(); ++b)
                    os << trial << ',' << scheme_name(config.schemes[s]) << ','
                       << format_double(config.power_grid_dbw[p]) << ',' << b << ',' << format_double(rates[b]) << ','
                       << format_double(rates[b] * config.budget.bandwidth_hz / 1e6) << '\n';
            }
    }
}
