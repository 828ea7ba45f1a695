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

#include "mgsat/precoding.hpp"
#include "mgsat/errors.hpp"

#include <algorithm>
#include <numeric>

namespace mgsat
{
    namespace
    {
        void normalize_columns(cmat &w)
        {
            for (Eigen::Index k = 0; k < w.cols(); ++k)
            {
                const double n = w.col(k).norm();
                if (!(n > 0.0) || !std::isfinite(n))
                    throw NumericalError("beamformer column has zero or non-finite norm");
                w.col(k) /= n;
            }
        }

        // Phase convention: w^H h real and non-negative.
        void align_phase(cvec &w, const cvec &h)
        {
            const std::complex<double> ip = w.dot(h); // w^H h
            if (std::abs(ip) > 0.0)
                w *= ip / std::abs(ip);
        }

        Eigen::MatrixXcd leakage_matrix(Eigen::Index dim, std::span<const cvec> intra,
                                        std::span<const cvec> inter, double noise_power)
        {
            Eigen::MatrixXcd m = noise_power * Eigen::MatrixXcd::Identity(dim, dim);
            for (const cvec &v : intra)
                m.noalias() += v * v.adjoint();
            for (const cvec &v : inter)
                m.noalias() += v * v.adjoint();
            return m;
        }
    }

    cmat rzf_precoder(const cmat &h, double beta)
    {
        if (!(beta >= 0.0) || !std::isfinite(beta))
            throw ConfigError("rzf_precoder: beta must be finite and non-negative");
        if (!h.allFinite())
            throw NumericalError("rzf_precoder: channel has non-finite entries");

        const Eigen::Index feeds = h.cols();
        const cmat gram = h.adjoint() * h + beta * cmat::Identity(feeds, feeds);
        Eigen::LLT<cmat> llt(gram);
        // Reject numerically singular systems relative to the Gram scale
        const double scale = gram.diagonal().real().maxCoeff();
        if (llt.info() != Eigen::Success || !(scale > 0.0) || llt.rcond() < 1e-14)
            throw NumericalError("rzf_precoder: H^H H + beta I is singular");
        cmat w = llt.solve(h.adjoint());
        normalize_columns(w);
        return w;
    }

    double optimal_beta(double n0, double bandwidth_hz, int k_users, double p_total)
    {
        if (!(p_total > 0.0))
            throw ConfigError("optimal_beta: total power must be positive");
        if (!(n0 > 0.0) || !(bandwidth_hz > 0.0) || k_users <= 0)
            throw ConfigError("optimal_beta: noise density, bandwidth and user count must be positive");
        return n0 * bandwidth_hz * k_users / p_total;
    }

    cvec slnr_beamformer(const cvec &h_target, std::span<const cvec> intra_leakage,
                         std::span<const cvec> inter_leakage, double noise_power)
    {
        if (!(noise_power > 0.0))
            throw ConfigError("slnr_beamformer: noise power must be positive");
        const cmat m = leakage_matrix(h_target.size(), intra_leakage, inter_leakage, noise_power);
        cvec w = m.llt().solve(h_target);
        const double n = w.norm();
        if (!(n > 0.0) || !std::isfinite(n))
            throw NumericalError("slnr_beamformer: degenerate target channel");
        w /= n;
        align_phase(w, h_target);
        return w;
    }

    double slnr(const cvec &w, const cvec &h_target, std::span<const cvec> intra_leakage,
                std::span<const cvec> inter_leakage, double noise_power)
    {
        double leak = noise_power * w.squaredNorm();
        for (const cvec &v : intra_leakage)
            leak += std::norm(w.dot(v));
        for (const cvec &v : inter_leakage)
            leak += std::norm(w.dot(v));
        return std::norm(w.dot(h_target)) / leak;
    }

    std::vector<UserId> select_edge_users(const ChannelRealization &channels, int gw,
                                          std::span<const int> neighbours, int m_per_neighbour)
    {
        const int per_cluster = channels.feeds_per_cluster();
        if (m_per_neighbour < 0 || m_per_neighbour > per_cluster)
            throw ConfigError("select_edge_users: m_per_neighbour must be in [0, " + std::to_string(per_cluster) + "]");

        std::vector<UserId> out;
        std::vector<int> order(per_cluster);
        std::vector<double> norms(per_cluster);
        for (int b : neighbours)
        {
            for (int j = 0; j < per_cluster; ++j)
                norms[j] = channels.h(gw, b, j).squaredNorm();
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](int a, int c) { return norms[a] > norms[c]; });
            for (int i = 0; i < m_per_neighbour; ++i)
                out.push_back({b, order[i]});
        }
        return out;
    }
}
