// SPDX-License-Identifier: Apache-2.0
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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmw/baselines.hpp"
#include "mmw/config.hpp"

namespace mmw
{
    /// ||truth - estimate||_F^2 / ||truth||_F^2
    double nmse(const CMatrix &truth, const CMatrix &estimate);

    struct SweepRow
    {
        Method method = Method::proposed;
        SweepVariable variable = SweepVariable::slots;
        double value = 0.0;
        Index trial = 0;
        double nmse_linear = 0.0;
        double nmse_db = 0.0;
        int iterations = 0;
        bool converged = false;
        double wall_ms = 0.0;

        bool failed = false; // estimator threw; nmse fields are NaN
        std::string error;
    };

    struct SweepResult
    {
        std::vector<SweepRow> rows;
    };

    /// Trial seed for trial index i of a run seeded with `seed`.
    std::uint64_t trial_seed(std::uint64_t seed, Index trial);

    /// Draws channel, pilots, spikes and noise from independent sub-streams of the
    /// trial seed, so sweeping T or eta keeps every other random quantity fixed.
    SensingProblem sample_problem(const SystemConfig &cfg, std::uint64_t seed);

    struct TrialOptions
    {
        bool record_wall_time = false;
        TraceSink trace;
    };

    SweepRow estimate_and_score(const SensingProblem &problem, const SystemConfig &cfg, const Hyperparams &hp,
                                Method method, const TrialOptions &options = {});

    SweepRow run_trial(const SystemConfig &cfg, const Hyperparams &hp, Method method, std::uint64_t seed,
                       const TrialOptions &options = {});

    /// values x methods x trials rows, ordered by (value, trial, method) in declared order.
    /// Trials run in parallel; output does not depend on the thread count.
    SweepResult run_sweep(const SystemConfig &cfg, const Hyperparams &hp, const SweepSpec &spec);

    struct PointSummary
    {
        Method method = Method::proposed;
        double value = 0.0;
        Index count = 0;
        Index failures = 0;
        Index converged = 0;
        double mean_db = 0.0;
        double std_db = 0.0;
        double stderr_db = 0.0;
        double mean_linear = 0.0;
    };

    /// Per (method, value) statistics over successful trials, ordered by method then value.
    std::vector<PointSummary> summarize(const SweepResult &result);
}
