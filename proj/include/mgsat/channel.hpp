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

#ifndef MGSAT_CHANNEL_HPP
#define MGSAT_CHANNEL_HPP

#include "mgsat/geometry.hpp"
#include "mgsat/rng.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace mgsat
{
    using cvec = Eigen::VectorXcd;
    using cmat = Eigen::MatrixXcd;

    inline constexpr double speed_of_light = 299792458.0; // m/s
    inline constexpr double boltzmann = 1.380649e-23;     // J/K

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

    // Ka-band user-link budget. Defaults are the reference scenario.
    struct LinkBudget
    {
        double frequency_hz = 20e9;
        double max_tx_gain_db = 52.0;      // feed gain at beam centre
        double rx_gain_db = 41.7;          // user terminal
        double theta_3db_deg = 0.4;        // off-axis angle of the -3 dB point
        double bandwidth_hz = 500e6;
        double noise_temp_k = 207.0;       // clear-sky receiver temperature
        double rain_mu = -3.4249;          // mean of ln(A_dB)
        double rain_sigma = 1.5768;        // standard deviation of ln(A_dB)

        double wavelength_m() const { return speed_of_light / frequency_hz; }
        double theta_3db_rad() const { return theta_3db_deg * std::numbers::pi / 180.0; }
        double max_tx_gain() const { return db_to_linear(max_tx_gain_db); }
        double rx_gain() const { return db_to_linear(rx_gain_db); }
        double noise_psd() const { return boltzmann * noise_temp_k; }    // N0, W/Hz
        double noise_power() const { return noise_psd() * bandwidth_hz; } // N0 W, watts

        void validate() const;
    };

    // Single-feed radiation pattern b_max (J1(u)/(2u) + 36 J3(u)/u^3)^2 with
    // u = 2.07123 sin(theta) / sin(theta_3db).
    double beam_gain(double theta_rad, double theta_3db_rad, double b_max_linear);

    struct RainFade
    {
        double xi_linear = 1.0; // power attenuation factor, >= 1
        double phi = 0.0;       // common phase, [0, 2 pi)
    };

    // ln(A_dB) ~ N(mu, sigma^2), xi = 10^(A_dB/10), phi ~ U[0, 2 pi).
    RainFade sample_rain_fade(Engine &rng, double mu, double sigma);
    RainFade sample_rain_fade(std::uint64_t rng_seed, double mu, double sigma);

    // Free-space power gain (lambda / (4 pi d))^2.
    double path_loss_gain(double d_km, double wavelength_m);

    // Complex gains from every feed to every user. Column u holds the channel of
    // user u from all feeds; rows of cluster c1 form h_{c1, c2, k} for the user
    // (c2, k). Feeds, beams and users share one index space.
    class ChannelRealization
    {
    public:
        ChannelRealization() = default;
        ChannelRealization(cmat gains, std::vector<RainFade> rain, int feeds_per_cluster);

        const cmat &gains() const { return gains_; }
        const std::vector<RainFade> &rain() const { return rain_; }
        int feeds_per_cluster() const { return feeds_per_cluster_; }
        int clusters() const { return static_cast<int>(gains_.rows()) / feeds_per_cluster_; }
        int users() const { return static_cast<int>(gains_.cols()); }

        // Channel from the feeds of `source_cluster` to global user `user`.
        cvec h(int source_cluster, int user) const
        {
            return gains_.block(source_cluster * feeds_per_cluster_, user, feeds_per_cluster_, 1);
        }
        cvec h(int source_cluster, int dest_cluster, int k) const
        {
            return h(source_cluster, dest_cluster * feeds_per_cluster_ + k);
        }

        // FNV-1a over the raw gain bytes; identifies a realization in diagnostics.
        std::uint64_t checksum() const;

    private:
        cmat gains_;
        std::vector<RainFade> rain_;
        int feeds_per_cluster_ = 1;
    };

    // Channel from explicit rain draws (one per user).
    ChannelRealization synthesize_channels(const Topology &topology, const UserDrop &drop,
                                           const LinkBudget &budget, const std::vector<RainFade> &rain);

    ChannelRealization synthesize_channels(const Topology &topology, const UserDrop &drop,
                                           const LinkBudget &budget, std::uint64_t rng_seed);

    // CSV dump: one row per feed, columns re_u,im_u for every user.
    void write_channel_csv(const ChannelRealization &channels, std::ostream &os);
}

#endif
