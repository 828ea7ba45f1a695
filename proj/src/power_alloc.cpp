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

#include "mgsat/power_alloc.hpp"
#include "mgsat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace mgsat
{
    void EffectiveGainTable::validate() const
    {
        if (g.rows() != g.cols())
            throw ConfigError("gain table must be square (streams x streams)");
        if (!g.allFinite() || (g.array() < 0.0).any())
            throw ConfigError("gain table entries must be finite and non-negative");
        if (!(noise > 0.0) || !std::isfinite(noise))
            throw ConfigError("gain table noise must be positive");
    }

    Eigen::VectorXd stream_rates(const EffectiveGainTable &gains, const Eigen::VectorXd &p)
    {
        const Eigen::Index n = gains.g.rows();
        // received(k) = sum_j p_j g_jk
        const Eigen::VectorXd received = gains.g.transpose() * p;
        Eigen::VectorXd rates(n);
        for (Eigen::Index k = 0; k < n; ++k)
        {
            const double signal = p[k] * gains.g(k, k);
            const double interference = std::max(received[k] - signal, 0.0);
            rates[k] = std::log2(1.0 + signal / (interference + gains.noise));
        }
        return rates;
    }

    double sum_rate_objective(const EffectiveGainTable &gains, const Eigen::VectorXd &p)
    {
        return stream_rates(gains, p).sum();
    }

    Eigen::VectorXd sum_rate_gradient(const EffectiveGainTable &gains, const Eigen::VectorXd &p)
    {
        // f = sum_k ln(T_k) - ln(I_k), T_k = sum_j p_j g_jk + noise, I_k = T_k - p_k g_kk
        const Eigen::Index n = gains.g.rows();
        const Eigen::VectorXd total = (gains.g.transpose() * p).array() + gains.noise;
        Eigen::VectorXd inv_total(n), inv_interf(n);
        for (Eigen::Index k = 0; k < n; ++k)
        {
            inv_total[k] = 1.0 / total[k];
            inv_interf[k] = 1.0 / std::max(total[k] - p[k] * gains.g(k, k), gains.noise);
        }
        Eigen::VectorXd grad = gains.g * inv_total - gains.g * inv_interf;
        // the j == k term of the interference sum does not exist
        grad += (gains.g.diagonal().array() * inv_interf.array()).matrix();
        return grad / std::numbers::ln2;
    }

    Eigen::VectorXd project_to_budget(const Eigen::VectorXd &v, double p_total)
    {
        Eigen::VectorXd clamped = v.cwiseMax(0.0);
        if (clamped.sum() <= p_total)
            return clamped;

        // projection onto the simplex {p >= 0, sum p = p_total}
        std::vector<double> u(v.data(), v.data() + v.size());
        std::sort(u.begin(), u.end(), std::greater<>());
        double cumulative = 0.0, threshold = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
        {
            cumulative += u[i];
            const double t = (cumulative - p_total) / static_cast<double>(i + 1);
            if (u[i] - t > 0.0)
                threshold = t;
        }
        Eigen::VectorXd out = (v.array() - threshold).cwiseMax(0.0);
        // rounding can leave the sum a few ulps above the budget
        const double s = out.sum();
        if (s > p_total)
            out *= p_total / s;
        return out;
    }

    namespace
    {
        struct AscentRun
        {
            Eigen::VectorXd p;
            double objective = 0.0;
            int iterations = 0;
            bool converged = true;
            std::vector<double> history;
            std::vector<Eigen::VectorXd> iterates;
        };

        AscentRun ascend(const EffectiveGainTable &gains, double p_total, Eigen::VectorXd p, const SolverOptions &options)
        {
            constexpr double armijo = 1e-4;
            AscentRun out;
            double f = sum_rate_objective(gains, p);
            if (options.record_history)
            {
                out.history.push_back(f);
                out.iterates.push_back(p);
            }

            double last_change = std::numeric_limits<double>::infinity();
            int iter = 0;
            for (; iter < options.max_iters; ++iter)
            {
                const Eigen::VectorXd grad = sum_rate_gradient(gains, p);
                const double gmax = grad.cwiseAbs().maxCoeff();
                if (!(gmax > 0.0))
                {
                    last_change = 0.0;
                    break;
                }

                // first trial moves the largest coordinate by the whole budget
                double step = p_total / gmax;
                bool accepted = false;
                Eigen::VectorXd candidate;
                double f_candidate = f;
                for (int halving = 0; halving < 60; ++halving, step *= 0.5)
                {
                    candidate = project_to_budget(p + step * grad, p_total);
                    const double ascent = grad.dot(candidate - p);
                    if (!(ascent > 0.0))
                        break; // projected direction vanished: stationary
                    f_candidate = sum_rate_objective(gains, candidate);
                    if (f_candidate >= f + armijo * ascent)
                    {
                        accepted = true;
                        break;
                    }
                }
                if (!accepted)
                {
                    last_change = 0.0;
                    break;
                }

                last_change = (f_candidate - f) / std::max(std::abs(f_candidate), 1e-300);
                p = candidate;
                f = f_candidate;
                if (options.record_history)
                {
                    out.history.push_back(f);
                    out.iterates.push_back(p);
                }
                if (last_change < options.tol)
                {
                    ++iter;
                    break;
                }
            }

            out.p = std::move(p);
            out.objective = f;
            out.iterations = iter;
            out.converged = !(iter >= options.max_iters && last_change > 100.0 * options.tol);
            return out;
        }
    }

    PowerAllocation allocate_sumrate(const EffectiveGainTable &gains, double p_total, const SolverOptions &options)
    {
        gains.validate();
        if (!(p_total > 0.0) || !std::isfinite(p_total))
            throw ConfigError("allocate_sumrate: total power must be positive");
        if (!(options.tol > 0.0) || options.max_iters < 0)
            throw ConfigError("allocate_sumrate: tol must be positive and max_iters non-negative");

        PowerAllocation out;
        const Eigen::Index n = gains.g.rows();
        if (n == 0)
        {
            out.p = Eigen::VectorXd();
            return out;
        }

        std::vector<Eigen::VectorXd> starts{Eigen::VectorXd::Constant(n, p_total / static_cast<double>(n))};
        if (options.multi_start && n > 1)
        {
            for (Eigen::Index k = 0; k < n; ++k)
            {
                Eigen::VectorXd vertex = Eigen::VectorXd::Zero(n);
                vertex[k] = p_total;
                starts.push_back(vertex);
            }
            if (n > 2)
                for (Eigen::Index k = 0; k < n; ++k)
                {
                    Eigen::VectorXd face = Eigen::VectorXd::Constant(n, p_total / static_cast<double>(n - 1));
                    face[k] = 0.0;
                    starts.push_back(face);
                }
        }

        AscentRun best;
        for (std::size_t s = 0; s < starts.size(); ++s)
        {
            AscentRun run = ascend(gains, p_total, starts[s], options);
            out.iterations += run.iterations;
            if (options.record_history)
                out.run_history.push_back(run.history);
            // strict improvement keeps the earliest start on ties
            if (s == 0 || run.objective > best.objective)
            {
                best = std::move(run);
                out.chosen_start = static_cast<int>(s);
            }
        }

        out.starts = static_cast<int>(starts.size());
        out.p = std::move(best.p);
        out.objective = best.objective;
        out.converged = best.converged;
        out.history = std::move(best.history);
        out.iterates = std::move(best.iterates);
        return out;
    }
}
