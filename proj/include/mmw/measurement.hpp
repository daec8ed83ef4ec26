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

#include "mmw/angular_model.hpp"

namespace mmw
{
    struct PilotMatrix
    {
        CMatrix matrix; // N_t x T
        double per_symbol_power_watt = 1.0;

        Index num_tx() const { return matrix.rows(); }
        Index num_slots() const { return matrix.cols(); }
    };

    /// Vectorized pilot observation y = Phi h + e + n together with the ground truth
    /// needed to score an estimate.
    struct SensingProblem
    {
        CVector y;         // vec(Y), length N_r T
        CMatrix observed;  // Y, N_r x T
        CMatrix phi;       // (S^T conj(A_B)) (x) A_U
        CMatrix phi_gram;  // phi^H phi, computed once
        PilotMatrix pilots;
        Dictionary dict_rx;
        Dictionary dict_tx;

        CVector truth_h;     // vec(H); zeros when the channel is off grid
        CMatrix truth_dense; // H-bar
        CVector truth_e;     // vec(E)
        double noise_variance = 0.0;

        Index num_rx() const { return observed.rows(); }
        Index num_slots() const { return observed.cols(); }
        Index num_observations() const { return y.size(); }
        Index num_coefficients() const { return phi.cols(); }
    };

    /// Column-major vec: vec(M)[t * rows + r] = M(r, t).
    CVector vec(const CMatrix &m);
    CMatrix unvec(const CVector &v, Index rows, Index cols);

    /// QPSK symbols sqrt(P) (+-1 +- j)/sqrt(2), drawn slot by slot.
    PilotMatrix generate_pilots(Rng &rng, Index num_tx, Index num_slots, double power_watt);

    /// (S^T conj(A_B)) (x) A_U, shape (N_r T) x (D_U D_B).
    CMatrix build_sensing_matrix(const PilotMatrix &pilots, const Dictionary &dict_tx, const Dictionary &dict_rx);

    /// Y = H-bar S + E + N and the matching vectorized problem.
    SensingProblem observe(const GeometricChannel &channel, const PilotMatrix &pilots, const Dictionary &dict_rx,
                           const Dictionary &dict_tx, const CMatrix &interference, const CMatrix &noise,
                           double noise_variance);

    // Debug dump, see docs/file_formats.md. Little-endian IEEE-754 doubles.
    void write_problem_binary(const SensingProblem &problem, const std::filesystem::path &path);

    struct ProblemDump
    {
        Index num_rx = 0, num_slots = 0, num_tx = 0, num_coefficients = 0;
        double noise_variance = 0.0;
        CVector y;
        CMatrix phi;
        CVector truth_h;
        CMatrix truth_dense;
        CVector truth_e;
    };
    ProblemDump read_problem_binary(const std::filesystem::path &path);
}
