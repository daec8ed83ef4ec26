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

#include "mmw/angular_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mmw
{
    void ArrayGeometry::validate() const
    {
        if (num_elements < 1)
            throw std::invalid_argument("ArrayGeometry: num_elements must be >= 1");
        if (!(spacing_over_wavelength > 0.0))
            throw std::invalid_argument("ArrayGeometry: spacing_over_wavelength must be > 0");
    }

    CVector steering_vector(const ArrayGeometry &geometry, double direction_cosine)
    {
        geometry.validate();
        if (!(std::abs(direction_cosine) <= 1.0))
            throw std::invalid_argument("steering_vector: |direction cosine| must be <= 1, got " +
                                        std::to_string(direction_cosine));

        const Index n = geometry.num_elements;
        const double step = 2.0 * kPi * geometry.spacing_over_wavelength * direction_cosine;
        const double norm = 1.0 / std::sqrt(static_cast<double>(n));
        CVector a(n);
        for (Index k = 0; k < n; ++k)
            a[k] = norm * std::polar(1.0, step * static_cast<double>(k));
        return a;
    }

    double grid_cosine(Index i, Index grid_size)
    {
        return -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(grid_size);
    }

    Dictionary build_dictionary(const ArrayGeometry &geometry, Index grid_size)
    {
        geometry.validate();
        if (grid_size < geometry.num_elements)
            throw std::invalid_argument("build_dictionary: grid size " + std::to_string(grid_size) +
                                        " is smaller than the array size " +
                                        std::to_string(geometry.num_elements));

        Dictionary d;
        d.geometry = geometry;
        d.grid_cosines.resize(grid_size);
        d.matrix.resize(geometry.num_elements, grid_size);
        for (Index i = 0; i < grid_size; ++i)
        {
            d.grid_cosines[i] = grid_cosine(i, grid_size);
            d.matrix.col(i) = steering_vector(geometry, d.grid_cosines[i]);
        }
        return d;
    }

    double free_space_path_gain(double fc_hz, double distance_m)
    {
        if (!(fc_hz > 0.0) || !(distance_m > 0.0))
            throw std::invalid_argument("free_space_path_gain: carrier and distance must be positive");
        const double fspl_db = 20.0 * std::log10(4.0 * kPi * distance_m * fc_hz / kSpeedOfLight);
        return std::pow(10.0, -fspl_db / 20.0);
    }

    CMatrix assemble_geometric(const ArrayGeometry &rx, const ArrayGeometry &tx, const CVector &gains,
                               const RVector &aoa_cosines, const RVector &aod_cosines)
    {
        const Index num_paths = gains.size();
        if (num_paths < 1 || aoa_cosines.size() != num_paths || aod_cosines.size() != num_paths)
            throw std::invalid_argument("assemble_geometric: path parameter lengths disagree");

        const double scale = std::sqrt(static_cast<double>(rx.num_elements * tx.num_elements) /
                                       static_cast<double>(num_paths));
        CMatrix dense = CMatrix::Zero(rx.num_elements, tx.num_elements);
        for (Index l = 0; l < num_paths; ++l)
        {
            const CVector ar = steering_vector(rx, aoa_cosines[l]);
            const CVector at = steering_vector(tx, aod_cosines[l]);
            dense.noalias() += (scale * gains[l]) * ar * at.adjoint();
        }
        return dense;
    }

    GeometricChannel make_geometric_channel(const ArrayGeometry &rx, const ArrayGeometry &tx, CVector gains,
                                            RVector aoa_cosines, RVector aod_cosines)
    {
        GeometricChannel ch;
        ch.dense = assemble_geometric(rx, tx, gains, aoa_cosines, aod_cosines);
        ch.gains = std::move(gains);
        ch.aoa_cosines = std::move(aoa_cosines);
        ch.aod_cosines = std::move(aod_cosines);
        return ch;
    }

    GeometricChannel sample_geometric_channel(Rng &rng, const ChannelSpec &spec)
    {
        spec.rx.validate();
        spec.tx.validate();
        if (spec.num_paths < 1)
            throw std::invalid_argument("sample_geometric_channel: need at least one path");
        if (spec.on_grid && (spec.rx_grid_size < 1 || spec.tx_grid_size < 1))
            throw std::invalid_argument("sample_geometric_channel: on-grid mode needs grid sizes");

        const Index L = spec.num_paths;
        CVector gains(L);
        RVector aoa(L), aod(L);
        std::vector<Index> aoa_idx, aod_idx;

        std::uniform_real_distribution<double> cosine(-1.0, 1.0);
        for (Index l = 0; l < L; ++l)
        {
            if (spec.on_grid)
            {
                std::uniform_int_distribution<Index> pick_rx(0, spec.rx_grid_size - 1);
                std::uniform_int_distribution<Index> pick_tx(0, spec.tx_grid_size - 1);
                aoa_idx.push_back(pick_rx(rng));
                aod_idx.push_back(pick_tx(rng));
                aoa[l] = grid_cosine(aoa_idx.back(), spec.rx_grid_size);
                aod[l] = grid_cosine(aod_idx.back(), spec.tx_grid_size);
            }
            else
            {
                aoa[l] = cosine(rng);
                aod[l] = cosine(rng);
            }
            gains[l] = spec.path_amplitude * sample_complex_gaussian(rng, 1.0);
        }

        GeometricChannel ch = make_geometric_channel(spec.rx, spec.tx, std::move(gains), std::move(aoa), std::move(aod));
        if (spec.on_grid)
        {
            ch.aoa_grid_index = std::move(aoa_idx);
            ch.aod_grid_index = std::move(aod_idx);
        }
        return ch;
    }

    CMatrix angular_expand(const AngularChannel &h_ang, const Dictionary &dict_rx, const Dictionary &dict_tx)
    {
        if (h_ang.matrix.rows() != dict_rx.size() || h_ang.matrix.cols() != dict_tx.size())
            throw std::invalid_argument("angular_expand: coefficient matrix is " +
                                        std::to_string(h_ang.matrix.rows()) + "x" +
                                        std::to_string(h_ang.matrix.cols()) + ", dictionaries need " +
                                        std::to_string(dict_rx.size()) + "x" + std::to_string(dict_tx.size()));
        return dict_rx.matrix * h_ang.matrix * dict_tx.matrix.adjoint();
    }

    AngularChannel on_grid_coefficients(const GeometricChannel &channel, const Dictionary &dict_rx,
                                        const Dictionary &dict_tx)
    {
        if (!channel.on_grid())
            throw std::invalid_argument("on_grid_coefficients: channel was not drawn on the grid");

        const auto &ri = *channel.aoa_grid_index;
        const auto &ti = *channel.aod_grid_index;
        const double scale = std::sqrt(static_cast<double>(dict_rx.geometry.num_elements *
                                                           dict_tx.geometry.num_elements) /
                                       static_cast<double>(channel.num_paths()));
        AngularChannel h{CMatrix::Zero(dict_rx.size(), dict_tx.size())};
        for (Index l = 0; l < channel.num_paths(); ++l)
        {
            if (ri[l] >= dict_rx.size() || ti[l] >= dict_tx.size())
                throw std::invalid_argument("on_grid_coefficients: grid index outside the dictionary");
            h.matrix(ri[l], ti[l]) += scale * channel.gains[l];
        }
        return h;
    }
}
