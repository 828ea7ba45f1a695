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

#ifndef MGSAT_POWER_ALLOC_HPP
#define MGSAT_POWER_ALLOC_HPP

#include <vector>

#include <Eigen/Dense>

namespace mgsat
{
    // g(j, k) = |w_j^H h_k|^2: power gain of stream j at the user of stream k.
    struct EffectiveGainTable
    {
        Eigen::MatrixXd g;
        double noise = 0.0; // W N0, per user

        int streams() const { return static_cast<int>(g.rows()); }
        void validate() const;
    };

    struct SolverOptions
    {
        double tol = 1e-6;   // relative objective change, per ascent run
        int max_iters = 500; // per ascent run
        bool record_history = false;
        // Also start from every single-stream vertex and every face with one
        // stream switched off; the best stationary point is returned.
        bool multi_start = true;
    };

    struct PowerAllocation
    {
        Eigen::VectorXd p;               // watts per stream
        double objective = 0.0;          // bits/s/Hz, design view
        int iterations = 0;              // summed over all ascent runs
        int starts = 0;                  // ascent runs performed
        int chosen_start = 0;            // 0 is the uniform start
        bool converged = true;           // false: the chosen run hit max_iters with change > 100 tol
        std::vector<double> history;     // objective per iterate of the chosen run, when recorded
        std::vector<Eigen::VectorXd> iterates;        // p per iterate of the chosen run
        std::vector<std::vector<double>> run_history; // objective per iterate of every run
    };

    // Sum over streams of log2(1 + p_k g_kk / (sum_{j != k} p_j g_jk + noise)).
    double sum_rate_objective(const EffectiveGainTable &gains, const Eigen::VectorXd &p);

    // Per-stream rates of the same design view.
    Eigen::VectorXd stream_rates(const EffectiveGainTable &gains, const Eigen::VectorXd &p);

    Eigen::VectorXd sum_rate_gradient(const EffectiveGainTable &gains, const Eigen::VectorXd &p);

    // Euclidean projection onto {p >= 0, sum p <= p_total}.
    Eigen::VectorXd project_to_budget(const Eigen::VectorXd &v, double p_total);

    // Projected gradient ascent with Armijo backtracking, first from the uniform
    // point p_total / K, then (multi_start) from the other starting points. The
    // objective never decreases between iterates of a run.
    PowerAllocation allocate_sumrate(const EffectiveGainTable &gains, double p_total,
                                     const SolverOptions &options = {});
}

#endif
