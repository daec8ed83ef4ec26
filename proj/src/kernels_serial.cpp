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

// Plain-loop reference kernels. Kept deliberately naive; the tests compare the
// OpenMP path against these.

#include "mmw/kernels.hpp"

#include <stdexcept>

namespace mmw::kernels::serial
{
    CMatrix kron(const CMatrix &a, const CMatrix &b)
    {
        const Index br = b.rows(), bc = b.cols();
        CMatrix out(a.rows() * br, a.cols() * bc);
        for (Index i = 0; i < a.rows(); ++i)
            for (Index j = 0; j < a.cols(); ++j)
                for (Index k = 0; k < br; ++k)
                    for (Index l = 0; l < bc; ++l)
                        out(i * br + k, j * bc + l) = a(i, j) * b(k, l);
        return out;
    }

    CMatrix gram(const CMatrix &phi)
    {
        const Index m = phi.cols();
        CMatrix g(m, m);
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < m; ++j)
            {
                cplx acc = 0.0;
                for (Index r = 0; r < phi.rows(); ++r)
                    acc += std::conj(phi(r, i)) * phi(r, j);
                g(i, j) = acc;
            }
        return g;
    }

    CVector adjoint_apply(const CMatrix &phi, const CVector &r)
    {
        if (phi.rows() != r.size())
            throw std::invalid_argument("adjoint_apply: dimension mismatch");
        CVector out(phi.cols());
        for (Index i = 0; i < phi.cols(); ++i)
        {
            cplx acc = 0.0;
            for (Index k = 0; k < phi.rows(); ++k)
                acc += std::conj(phi(k, i)) * r[k];
            out[i] = acc;
        }
        return out;
    }

    double trace_product_hermitian(const CMatrix &a, const CMatrix &b)
    {
        if (a.rows() != b.cols() || a.cols() != b.rows())
            throw std::invalid_argument("trace_product_hermitian: dimension mismatch");
        cplx acc = 0.0;
        for (Index i = 0; i < a.rows(); ++i)
            for (Index k = 0; k < a.cols(); ++k)
                acc += a(i, k) * b(k, i);
        return acc.real();
    }
}
