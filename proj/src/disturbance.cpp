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

#include "mmw/disturbance.hpp"

#include <cmath>
#include <stdexcept>

namespace mmw
{
    double dbm_to_watt(double p_dbm) { return std::pow(10.0, (p_dbm - 30.0) / 10.0); }

    double watt_to_dbm(double p_watt) { return 10.0 * std::log10(p_watt) + 30.0; }

    double NoiseConfig::variance_watt() const
    {
        if (!(bandwidth_hz > 0.0))
            throw std::invalid_argument("NoiseConfig: bandwidth must be positive");
        return dbm_to_watt(psd_dbm_per_hz + 10.0 * std::log10(bandwidth_hz));
    }

    void ImpulseConfig::validate() const
    {
        // c2 = 1 is accepted here for tests; scenario configs restrict it to [0, 1).
        if (!(occurrence_prob >= 0.0 && occurrence_prob <= 1.0))
            throw std::invalid_argument("ImpulseConfig: occurrence probability must lie in [0, 1]");
        if (!(power_ratio > 0.0))
            throw std::invalid_argument("ImpulseConfig: power ratio must be positive");
        if (!(base_variance_watt > 0.0))
            throw std::invalid_argument("ImpulseConfig: base variance must be positive");
    }

    CMatrix sample_awgn(Rng &rng, Index rows, Index cols, double variance_watt)
    {
        if (!(variance_watt > 0.0))
            throw std::invalid_argument("sample_awgn: variance must be positive");
        CMatrix n(rows, cols);
        for (Index t = 0; t < cols; ++t)
            for (Index r = 0; r < rows; ++r)
                n(r, t) = sample_complex_gaussian(rng, variance_watt);
        return n;
    }

    CMatrix sample_impulsive(Rng &rng, Index rows, Index cols, const ImpulseConfig &cfg)
    {
        cfg.validate();
        const double var = cfg.spike_variance_watt();
        std::uniform_real_distribution<double> u(0.0, 1.0);
        CMatrix e = CMatrix::Zero(rows, cols);
        for (Index t = 0; t < cols; ++t)
            for (Index r = 0; r < rows; ++r)
            {
                // Both branches consume the same draws so spike positions are
                // independent of eta.
                const bool hit = u(rng) < cfg.occurrence_prob;
                const cplx z = sample_complex_gaussian(rng, var);
                if (hit)
                    e(r, t) = z;
            }
        return e;
    }
}
