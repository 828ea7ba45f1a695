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

#include "mgsat/channel.hpp"
#include "mgsat/errors.hpp"

#include <cmath>
#include <cstring>
#include <iomanip>
#include <ostream>

namespace mgsat
{
    void LinkBudget::validate() const
    {
        if (!(frequency_hz > 0.0) || !(bandwidth_hz > 0.0) || !(noise_temp_k > 0.0))
            throw ConfigError("link budget: frequency, bandwidth and noise temperature must be positive");
        if (!(theta_3db_deg > 0.0))
            throw ConfigError("link budget: 3 dB angle must be positive");
        if (!std::isfinite(max_tx_gain_db) || !std::isfinite(rx_gain_db))
            throw ConfigError("link budget: antenna gains must be finite");
        if (!(rain_sigma >= 0.0) || !std::isfinite(rain_mu))
            throw ConfigError("link budget: rain parameters invalid");
    }

    double beam_gain(double theta_rad, double theta_3db_rad, double b_max_linear)
    {
        if (!(theta_3db_rad > 0.0))
            throw ConfigError("beam_gain: theta_3db must be positive");
        const double u = 2.07123 * std::sin(theta_rad) / std::sin(theta_3db_rad);
        const double au = std::abs(u);
        double shape;
        if (au < 1e-4)
            // J1(u)/(2u) -> 1/4 - u^2/32, 36 J3(u)/u^3 -> 3/4 - 3u^2/64
            shape = 1.0 - 5.0 * au * au / 64.0;
        else
            shape = std::cyl_bessel_j(1.0, au) / (2.0 * au) + 36.0 * std::cyl_bessel_j(3.0, au) / (au * au * au);
        return b_max_linear * shape * shape;
    }

    RainFade sample_rain_fade(Engine &rng, double mu, double sigma)
    {
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        const double attenuation_db = std::exp(mu + sigma * normal(rng));
        RainFade out;
        out.xi_linear = std::pow(10.0, attenuation_db / 10.0);
        out.phi = phase(rng);
        return out;
    }

    RainFade sample_rain_fade(std::uint64_t rng_seed, double mu, double sigma)
    {
        Engine rng(rng_seed);
        return sample_rain_fade(rng, mu, sigma);
    }

    double path_loss_gain(double d_km, double wavelength_m)
    {
        if (!(d_km > 0.0))
            throw ConfigError("path_loss_gain: distance must be positive");
        const double r = wavelength_m / (4.0 * std::numbers::pi * d_km * 1e3);
        return r * r;
    }

    ChannelRealization::ChannelRealization(cmat gains, std::vector<RainFade> rain, int feeds_per_cluster)
        : gains_(std::move(gains)), rain_(std::move(rain)), feeds_per_cluster_(feeds_per_cluster)
    {
    }

    std::uint64_t ChannelRealization::checksum() const
    {
        std::uint64_t hash = 0xcbf29ce484222325ULL;
        const auto *bytes = reinterpret_cast<const unsigned char *>(gains_.data());
        const std::size_t n = static_cast<std::size_t>(gains_.size()) * sizeof(std::complex<double>);
        for (std::size_t i = 0; i < n; ++i)
        {
            hash ^= bytes[i];
            hash *= 0x100000001b3ULL;
        }
        return hash;
    }

    ChannelRealization synthesize_channels(const Topology &topology, const UserDrop &drop,
                                           const LinkBudget &budget, const std::vector<RainFade> &rain)
    {
        budget.validate();
        const int n = topology.beam_count();
        if (drop.user_count() != n || static_cast<int>(rain.size()) != n)
            throw ConfigError("synthesize_channels: user drop / rain draws do not match the topology");

        const double b_max = budget.max_tx_gain();
        const double g_rx = budget.rx_gain();
        const double theta_3db = budget.theta_3db_rad();
        const double lambda = budget.wavelength_m();

        cmat gains(n, n);
        for (int u = 0; u < n; ++u)
        {
            const double common = g_rx * path_loss_gain(drop.slant_range_km[u], lambda) / rain[u].xi_linear;
            const std::complex<double> phase = std::polar(1.0, -rain[u].phi);
            for (int f = 0; f < n; ++f)
                gains(f, u) = phase * std::sqrt(common * beam_gain(drop.off_axis_angle(f, u), theta_3db, b_max));
        }
        return ChannelRealization(std::move(gains), rain, topology.beams_per_cluster);
    }

    ChannelRealization synthesize_channels(const Topology &topology, const UserDrop &drop,
                                           const LinkBudget &budget, std::uint64_t rng_seed)
    {
        Engine rng(rng_seed);
        std::vector<RainFade> rain;
        rain.reserve(topology.beam_count());
        for (int u = 0; u < topology.beam_count(); ++u)
            rain.push_back(sample_rain_fade(rng, budget.rain_mu, budget.rain_sigma));
        return synthesize_channels(topology, drop, budget, rain);
    }

    void write_channel_csv(const ChannelRealization &channels, std::ostream &os)
    {
        const cmat &g = channels.gains();
        os << "feed";
        for (Eigen::Index u = 0; u < g.cols(); ++u)
            os << ",re_" << u << ",im_" << u;
        os << '\n'
           << std::setprecision(17);
        for (Eigen::Index f = 0; f < g.rows(); ++f)
        {
            os << f;
            for (Eigen::Index u = 0; u < g.cols(); ++u)
                os << ',' << g(f, u).real() << ',' << g(f, u).imag();
            os << '\n';
        }
    }
}
