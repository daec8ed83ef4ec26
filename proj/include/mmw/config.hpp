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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mmw/vi_core.hpp"

namespace mmw
{
    enum class Method
    {
        proposed,
        sie,
        omp,
        ls,
    };

    std::string_view method_name(Method m);
    Method parse_method(std::string_view name);
    std::vector<Method> parse_method_list(std::string_view csv);

    enum class SweepVariable
    {
        slots,  // T
        p_dbm,  // per-antenna pilot power
        c2,     // spike occurrence probability
        eta,    // spike-to-noise power ratio
    };

    std::string_view variable_name(SweepVariable v);
    SweepVariable parse_variable(std::string_view name);

    struct SystemConfig
    {
        Index n_t = 16;
        Index n_r = 4;
        Index d_u = 8;  // 2 N_r
        Index d_b = 32; // 2 N_t
        Index slots = 200;
        Index paths = 3;
        double spacing_over_wavelength = 0.5;
        double fc_hz = 28e9;
        double bandwidth_hz = 1e8;
        double distance_m = 50.0;
        double psd_dbm_per_hz = -174.0;
        double p_dbm_per_antenna = 30.0;
        double c2 = 0.1;
        double eta = 1e5;
        bool on_grid = false;
        // Drop the AWGN realization entirely; the estimator still sees sigma^2 = 1e-15 W.
        bool noiseless = false;
        std::uint64_t seed = 1;
        Index trials = 100;
        std::optional<Index> omp_sparsity; // defaults to 2 L

        double noise_variance_watt() const;
        double pilot_power_watt() const;
        Index omp_k() const { return omp_sparsity.value_or(2 * paths); }
        void validate() const;
    };

    inline constexpr double kNoiselessVarianceFloor = 1e-15;

    /// N_t = 8, N_r = 2, D_U = 4, D_B = 16, T = 50, 50 trials.
    SystemConfig desk_preset();
    SystemConfig preset_by_name(std::string_view name);

    struct SweepSpec
    {
        SweepVariable variable = SweepVariable::slots;
        std::vector<double> values{200.0};
        std::vector<Method> methods{Method::proposed, Method::sie, Method::omp, Method::ls};
        bool record_wall_time = false;

        void validate() const;
    };

    /// Copy of cfg with the swept variable set to value.
    SystemConfig apply_sweep_value(SystemConfig cfg, SweepVariable variable, double value);

    class ConfigError : public std::runtime_error
    {
      public:
        using std::runtime_error::runtime_error;
    };

    struct ExperimentConfig
    {
        SystemConfig system;
        Hyperparams hyper;
        SweepSpec sweep;
    };

    /// INI-style text, sections [system], [hyper], [sweep]; see docs/config_format.md.
    /// Keys missing from the text keep the values already in `base`.
    ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base = {});
    ExperimentConfig parse_config(const std::filesystem::path &path, ExperimentConfig base = {});
}
