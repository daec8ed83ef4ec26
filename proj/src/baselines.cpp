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

#include "mmw/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mmw/kernels.hpp"

namespace mmw
{
    namespace
    {
        constexpr double kOmpRankTolerance = 1e-10;
    }

    void OmpConfig::validate(Index num_atoms) const
    {
        if (sparsity_k.has_value() == residual_threshold.has_value())
            throw std::invalid_argument("OmpConfig: set exactly one of sparsity_k and residual_threshold");
        if (sparsity_k && (*sparsity_k < 0 || *sparsity_k > num_atoms))
            throw std::invalid_argument("OmpConfig: sparsity " + std::to_string(*sparsity_k) +
                                        " outside [0, " + std::to_string(num_atoms) + "]");
        if (residual_threshold && !(*residual_threshold > 0.0))
            throw std::invalid_argument("OmpConfig: residual threshold must be positive");
    }

    CMatrix ls_estimate(const CMatrix &observed, const CMatrix &pilots)
    {
        if (observed.cols() != pilots.cols())
            throw std::invalid_argument("ls_estimate: Y and S must have the same number of slots");
        if (pilots.cols() < pilots.rows())
            throw std::invalid_argument("ls_estimate: need T >= N_t slots, got T = " +
                                        std::to_string(pilots.cols()));
        const CMatrix ssh = pilots * pilots.adjoint();
        Eigen::FullPivLU<CMatrix> lu(ssh);
        if (!lu.isInvertible())
            throw std::runtime_error("ls_estimate: S S^H is rank deficient");
        // H S S^H = Y S^H, solved as (S S^H) H^H = S Y^H.
        return lu.solve(pilots * observed.adjoint()).adjoint();
    }

    OmpResult omp_estimate(const CVector &y, const CMatrix &phi, const OmpConfig &cfg)
    {
        cfg.validate(phi.cols());
        if (phi.rows() != y.size())
            throw std::invalid_argument("omp_estimate: dimension mismatch");

        const Index max_atoms = cfg.sparsity_k ? *cfg.sparsity_k : std::min(phi.rows(), phi.cols());
        const double stop_norm = cfg.residual_threshold.value_or(0.0);
        // An exactly explained observation has nothing left to select.
        const double exact_norm = 1e-14 * y.norm();

        OmpResult out;
        out.coefficients = CVector::Zero(phi.cols());
        CVector residual = y;
        out.residual_norms.push_back(residual.norm());

        std::vector<char> used(static_cast<std::size_t>(phi.cols()), 0);
        CVector fitted;
        while (static_cast<Index>(out.support.size()) < max_atoms)
        {
            const double rn = residual.norm();
            if (rn <= exact_norm || (cfg.residual_threshold && rn < stop_norm))
                break;

            const CVector corr = kernels::adjoint_apply(phi, residual);
            Index best = -1;
            double best_mag = -1.0;
            for (Index i = 0; i < phi.cols(); ++i)
            {
                if (used[static_cast<std::size_t>(i)])
                    continue;
                const double mag = std::abs(corr[i]);
                if (mag > best_mag) // strict: ties keep the lowest index
                {
                    best_mag = mag;
                    best = i;
                }
            }
            if (best < 0)
                break;
            used[static_cast<std::size_t>(best)] = 1;
            out.support.push_back(best);

            CMatrix sub(phi.rows(), static_cast<Index>(out.support.size()));
            for (std::size_t k = 0; k < out.support.size(); ++k)
                sub.col(static_cast<Index>(k)) = phi.col(out.support[k]);
            // Past rank(phi) = N_r min(T, N_t) new atoms are dependent. The complete
            // orthogonal decomposition still returns a least-squares minimizer there
            // (the pivoted-QR basic solution does not).
            Eigen::CompleteOrthogonalDecomposition<CMatrix> cod;
            cod.setThreshold(kOmpRankTolerance);
            cod.compute(sub);
            fitted = cod.solve(y);
            residual = y - sub * fitted;
            out.residual_norms.push_back(residual.norm());
        }

        for (std::size_t k = 0; k < out.support.size(); ++k)
            out.coefficients[out.support[k]] = fitted[static_cast<Index>(k)];
        return out;
    }
}
