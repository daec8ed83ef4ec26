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

#include "mmw/types.hpp"

namespace mmw
{
    /// Uniform linear array: element count and spacing in wavelengths.
    struct ArrayGeometry
    {
        Index num_elements = 1;
        double spacing_over_wavelength = 0.5;

        void validate() const;
    };

    /// Overcomplete steering-vector dictionary on a grid uniform in direction cosine.
    /// Column i is steering_vector(geometry, grid_cosines[i]).
    struct Dictionary
    {
        ArrayGeometry geometry;
        RVector grid_cosines;
        CMatrix matrix; // num_elements x D

        Index size() const { return matrix.cols(); }
    };

    /// Path-level ground truth plus the dense N_r x N_t matrix it generates.
    struct GeometricChannel
    {
        CVector gains;       // alpha_l, linear amplitude including path loss
        RVector aoa_cosines; // receive side (UE)
        RVector aod_cosines; // transmit side (gNB)
        CMatrix dense;

        // Grid positions of each path when the angles were snapped to the dictionaries.
        std::optional<std::vector<Index>> aoa_grid_index;
        std::optional<std::vector<Index>> aod_grid_index;

        Index num_paths() const { return gains.size(); }
        bool on_grid() const { return aoa_grid_index.has_value() && aod_grid_index.has_value(); }
    };

    /// Angular-domain coefficients H (D_U x D_B).
    struct AngularChannel
    {
        CMatrix matrix;
    };

    /// What sample_geometric_channel needs from a scenario description.
    struct ChannelSpec
    {
        ArrayGeometry rx;
        ArrayGeometry tx;
        Index num_paths = 3;
        double path_amplitude = 1.0; // rho, shared by all paths
        bool on_grid = false;
        Index rx_grid_size = 0; // used only when on_grid
        Index tx_grid_size = 0;
    };

    /// ULA response (1/sqrt(N)) exp(j 2 pi (d/lambda) k cos) for k = 0..N-1.
    CVector steering_vector(const ArrayGeometry &geometry, double direction_cosine);

    /// Grid cosine i of a D-point dictionary: -1 + 2i/D.
    double grid_cosine(Index i, Index grid_size);

    Dictionary build_dictionary(const ArrayGeometry &geometry, Index grid_size);

    /// Friis free-space amplitude 10^(-FSPL_dB/20).
    double free_space_path_gain(double fc_hz, double distance_m);

    /// sqrt(N_r N_t / L) * sum_l alpha_l a_r(aoa_l) a_t(aod_l)^H
    CMatrix assemble_geometric(const ArrayGeometry &rx, const ArrayGeometry &tx,
                               const CVector &gains, const RVector &aoa_cosines,
                               const RVector &aod_cosines);

    /// Builds a channel from explicit path parameters (dense matrix filled in).
    GeometricChannel make_geometric_channel(const ArrayGeometry &rx, const ArrayGeometry &tx,
                                            CVector gains, RVector aoa_cosines, RVector aod_cosines);

    /// Random draw: cosines uniform on [-1, 1) (or uniform grid points when
    /// spec.on_grid), gains rho * CN(0, 1).
    GeometricChannel sample_geometric_channel(Rng &rng, const ChannelSpec &spec);

    /// A_U H A_B^H
    CMatrix angular_expand(const AngularChannel &h_ang, const Dictionary &dict_rx, const Dictionary &dict_tx);

    /// Angular coefficients that reproduce an on-grid channel exactly. Throws for off-grid channels.
    AngularChannel on_grid_coefficients(const GeometricChannel &channel, const Dictionary &dict_rx,
                                        const Dictionary &dict_tx);
}
