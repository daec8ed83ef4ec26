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

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace mmw
{
    using cplx = std::complex<double>;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;
    using RVector = Eigen::VectorXd;
    using Index = Eigen::Index;

    // All sampling goes through an explicit engine; libstdc++ distributions are
    // deterministic for a fixed seed, which is what the reproducibility tests rely on.
    using Rng = std::mt19937_64;

    inline constexpr double kPi = 3.14159265358979323846;
    inline constexpr double kSpeedOfLight = 2.99792458e8;

    // splitmix64 finalizer: decorrelates neighbouring seeds.
    constexpr std::uint64_t mix_seed(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    /// Child seed for sub-stream `stream` of `parent`.
    constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream)
    {
        return mix_seed(mix_seed(parent) ^ mix_seed(stream + 0x632BE59BD9B4E019ULL));
    }

    /// Standard circularly-symmetric complex Gaussian scaled to E|z|^2 = variance.
    inline cplx sample_complex_gaussian(Rng &rng, double variance)
    {
        std::normal_distribution<double> n(0.0, 1.0);
        const double s = std::sqrt(variance / 2.0);
        const double re = n(rng);
        const double im = n(rng);
        return {s * re, s * im};
    }
}
