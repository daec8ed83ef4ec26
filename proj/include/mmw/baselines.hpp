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

#include <optional>
#include <vector>

#include "mmw/vi_core.hpp"

namespace mmw
{
    /// Exactly one stopping rule is active.
    struct OmpConfig
    {
        std::optional<Index> sparsity_k;
        std::optional<double> residual_threshold;

        static OmpConfig with_sparsity(Index k) { return {k, std::nullopt}; }
        static OmpConfig with_threshold(double t) { return {std::nullopt, t}; }
        void validate(Index num_atoms) const;
    };

    struct OmpResult
    {
        CVector coefficients;
        std::vector<Index> support;       // selection order
        std::vector<double> residual_norms; // before the first pick, then after each pick
    };

    /// H_LS = Y S^H (S S^H)^-1
    CMatrix ls_estimate(const CMatrix &observed, const CMatrix &pilots);

    OmpResult omp_estimate(const CVector &y, const CMatrix &phi, const OmpConfig &cfg);

    /// Student-t interference model: same variational machinery with
    /// e ~ CN(0, diag(lambda_e)^-1), lambda_e ~ Gamma(a, b).
    inline EstimateResult sie_estimate(const SensingProblem &problem, const Hyperparams &hp,
                                       const TraceSink &trace = {})
    {
        return run_variational(problem, hp, InterferencePrior::student_t, trace);
    }
}
