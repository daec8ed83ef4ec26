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

#include "mmw/types.hpp"

namespace mmw
{
    double dbm_to_watt(double p_dbm);
    double watt_to_dbm(double p_watt);

    /// Thermal noise from a power spectral density and bandwidth.
    struct NoiseConfig
    {
        double psd_dbm_per_hz = -174.0;
        double bandwidth_hz = 1e8;

        double variance_watt() const;
    };

    /// Two-component mixture: with probability occurrence_prob an entry carries a
    /// spike of variance power_ratio * base_variance_watt.
    struct ImpulseConfig
    {
        double occurrence_prob = 0.1; // c2
        double power_ratio = 1e5;     // eta
        double base_variance_watt = 1.0;

        double spike_variance_watt() const { return power_ratio * base_variance_watt; }
        void validate() const;
    };

    CMatrix sample_awgn(Rng &rng, Index rows, Index cols, double variance_watt);

    /// Sparse spike matrix. Entries are drawn column by column (slot-major), so the
    /// first T columns of a longer draw from the same seed coincide.
    CMatrix sample_impulsive(Rng &rng, Index rows, Index cols, const ImpulseConfig &cfg);
}
