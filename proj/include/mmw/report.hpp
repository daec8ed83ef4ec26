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

#include <filesystem>
#include <string>

#include "mmw/experiment.hpp"

namespace mmw
{
    inline constexpr const char *kCsvHeader =
        "method,variable,value,trial,nmse_linear,nmse_db,iterations,converged,wall_ms";

    std::string format_csv(const SweepResult &result);
    SweepResult parse_csv(const std::string &text);

    void write_csv(const SweepResult &result, const std::filesystem::path &path);
    SweepResult read_csv(const std::filesystem::path &path);

    /// Mean NMSE (dB) per method vs the swept value, with +-1 std error bars.
    std::string render_svg(const SweepResult &result);
    void write_svg_plot(const SweepResult &result, const std::filesystem::path &path);

    /// Per-iteration trace CSV: iteration,delta_mu_h,delta_mu_e,beta,elbo
    class TraceCsvWriter
    {
      public:
        explicit TraceCsvWriter(const std::filesystem::path &path);
        void operator()(const TraceRow &row);

      private:
        std::filesystem::path path_;
    };
}
