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

#include "mmw/measurement.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "mmw/kernels.hpp"

namespace mmw
{
    CVector vec(const CMatrix &m)
    {
        // Eigen storage is column-major, which is exactly the vec layout.
        return Eigen::Map<const CVector>(m.data(), m.size());
    }

    CMatrix unvec(const CVector &v, Index rows, Index cols)
    {
        if (v.size() != rows * cols)
            throw std::invalid_argument("unvec: length " + std::to_string(v.size()) + " does not match " +
                                        std::to_string(rows) + "x" + std::to_string(cols));
        return Eigen::Map<const CMatrix>(v.data(), rows, cols);
    }

    PilotMatrix generate_pilots(Rng &rng, Index num_tx, Index num_slots, double power_watt)
    {
        if (!(power_watt > 0.0))
            throw std::invalid_argument("generate_pilots: pilot power must be positive");
        if (num_tx < 1 || num_slots < 1)
            throw std::invalid_argument("generate_pilots: need at least one antenna and one slot");

        const double amp = std::sqrt(power_watt / 2.0);
        std::bernoulli_distribution coin(0.5);
        PilotMatrix s;
        s.per_symbol_power_watt = power_watt;
        s.matrix.resize(num_tx, num_slots);
        for (Index t = 0; t < num_slots; ++t)
            for (Index k = 0; k < num_tx; ++k)
            {
                const double re = coin(rng) ? amp : -amp;
                const double im = coin(rng) ? amp : -amp;
                s.matrix(k, t) = {re, im};
            }
        return s;
    }

    CMatrix build_sensing_matrix(const PilotMatrix &pilots, const Dictionary &dict_tx, const Dictionary &dict_rx)
    {
        if (pilots.num_tx() != dict_tx.matrix.rows())
            throw std::invalid_argument("build_sensing_matrix: pilots have " + std::to_string(pilots.num_tx()) +
                                        " rows, transmit dictionary has " +
                                        std::to_string(dict_tx.matrix.rows()) + " elements");
        const CMatrix left = pilots.matrix.transpose() * dict_tx.matrix.conjugate();
        return kernels::kron(left, dict_rx.matrix);
    }

    SensingProblem observe(const GeometricChannel &channel, const PilotMatrix &pilots, const Dictionary &dict_rx,
                           const Dictionary &dict_tx, const CMatrix &interference, const CMatrix &noise,
                           double noise_variance)
    {
        const Index nr = channel.dense.rows();
        const Index nt = channel.dense.cols();
        const Index T = pilots.num_slots();
        if (pilots.num_tx() != nt)
            throw std::invalid_argument("observe: pilot matrix does not match the channel's transmit dimension");
        if (dict_rx.matrix.rows() != nr || dict_tx.matrix.rows() != nt)
            throw std::invalid_argument("observe: dictionaries do not match the channel dimensions");
        if (interference.rows() != nr || interference.cols() != T || noise.rows() != nr || noise.cols() != T)
            throw std::invalid_argument("observe: interference/noise must be " + std::to_string(nr) + "x" +
                                        std::to_string(T));

        SensingProblem p;
        p.observed = channel.dense * pilots.matrix + interference + noise;
        p.y = vec(p.observed);
        p.phi = build_sensing_matrix(pilots, dict_tx, dict_rx);
        p.phi_gram = kernels::gram(p.phi);
        p.pilots = pilots;
        p.dict_rx = dict_rx;
        p.dict_tx = dict_tx;
        p.truth_dense = channel.dense;
        p.truth_e = vec(interference);
        p.noise_variance = noise_variance;
        if (channel.on_grid())
            p.truth_h = vec(on_grid_coefficients(channel, dict_rx, dict_tx).matrix);
        else
            p.truth_h = CVector::Zero(dict_rx.size() * dict_tx.size());
        return p;
    }

    namespace
    {
        static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");

        constexpr std::array<char, 8> kMagic{'M', 'M', 'W', 'S', 'P', 'R', 'B', '1'};

        template <typename T>
        void put(std::ofstream &out, T v)
        {
            out.write(reinterpret_cast<const char *>(&v), sizeof(T));
        }

        template <typename T>
        T get(std::ifstream &in, const std::filesystem::path &path)
        {
            T v{};
            if (!in.read(reinterpret_cast<char *>(&v), sizeof(T)))
                throw std::runtime_error("read_problem_binary: truncated file " + path.string());
            return v;
        }

        // Row-major (r, c) order.
        void put_matrix(std::ofstream &out, const CMatrix &m)
        {
            for (Index r = 0; r < m.rows(); ++r)
                for (Index c = 0; c < m.cols(); ++c)
                {
                    put(out, m(r, c).real());
                    put(out, m(r, c).imag());
                }
        }

        CMatrix get_matrix(std::ifstream &in, Index rows, Index cols, const std::filesystem::path &path)
        {
            CMatrix m(rows, cols);
            for (Index r = 0; r < rows; ++r)
                for (Index c = 0; c < cols; ++c)
                {
                    const double re = get<double>(in, path);
                    const double im = get<double>(in, path);
                    m(r, c) = {re, im};
                }
            return m;
        }
    }

    void write_problem_binary(const SensingProblem &problem, const std::filesystem::path &path)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("write_problem_binary: cannot open " + path.string());
        out.write(kMagic.data(), kMagic.size());
        put<std::uint64_t>(out, static_cast<std::uint64_t>(problem.num_rx()));
        put<std::uint64_t>(out, static_cast<std::uint64_t>(problem.num_slots()));
        put<std::uint64_t>(out, static_cast<std::uint64_t>(problem.truth_dense.cols()));
        put<std::uint64_t>(out, static_cast<std::uint64_t>(problem.num_coefficients()));
        put<double>(out, problem.noise_variance);
        put_matrix(out, problem.y);
        put_matrix(out, problem.phi);
        put_matrix(out, problem.truth_h);
        put_matrix(out, problem.truth_dense);
        put_matrix(out, problem.truth_e);
        if (!out)
            throw std::runtime_error("write_problem_binary: write failed for " + path.string());
    }

    ProblemDump read_problem_binary(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("read_problem_binary: cannot open " + path.string());
        std::array<char, 8> magic{};
        in.read(magic.data(), magic.size());
        if (!in || magic != kMagic)
            throw std::runtime_error("read_problem_binary: bad magic in " + path.string());

        ProblemDump d;
        d.num_rx = static_cast<Index>(get<std::uint64_t>(in, path));
        d.num_slots = static_cast<Index>(get<std::uint64_t>(in, path));
        d.num_tx = static_cast<Index>(get<std::uint64_t>(in, path));
        d.num_coefficients = static_cast<Index>(get<std::uint64_t>(in, path));
        d.noise_variance = get<double>(in, path);
        const Index q = d.num_rx * d.num_slots;
        d.y = get_matrix(in, q, 1, path);
        d.phi = get_matrix(in, q, d.num_coefficients, path);
        d.truth_h = get_matrix(in, d.num_coefficients, 1, path);
        d.truth_dense = get_matrix(in, d.num_rx, d.num_tx, path);
        d.truth_e = get_matrix(in, q, 1, path);
        return d;
    }
}
