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

#include "mmw/kernels.hpp"

#include <stdexcept>

#include <omp.h>

namespace mmw::kernels
{
    int max_threads() { return omp_get_max_threads(); }
}

namespace mmw::kernels::omp
{
    CMatrix kron(const CMatrix &a, const CMatrix &b)
    {
        const Index br = b.rows(), bc = b.cols();
        const Index acols = a.cols();
        CMatrix out(a.rows() * br, acols * bc);
        // One output block column per (j, l); independent writes.
#pragma omp parallel for schedule(static)
        for (Index col = 0; col < acols * bc; ++col)
        {
            const Index j = col / bc, l = col % bc;
            for (Index i = 0; i < a.rows(); ++i)
                out.col(col).segment(i * br, br) = a(i, j) * b.col(l);
        }
        return out;
    }

    CMatrix gram(const CMatrix &phi)
    {
        const Index m = phi.cols();
        CMatrix g(m, m);
        // Upper triangle by column, mirrored; dynamic schedule balances the triangle.
#pragma omp parallel for schedule(dynamic, 4)
        for (Index j = 0; j < m; ++j)
        {
            for (Index i = 0; i <= j; ++i)
            {
                const cplx v = phi.col(i).dot(phi.col(j)); // conjugates the left operand
                g(i, j) = v;
                g(j, i) = std::conj(v);
            }
        }
        return g;
    }

    CVector adjoint_apply(const CMatrix &phi, const CVector &r)
    {
        if (phi.rows() != r.size())
            throw std::invalid_argument("adjoint_apply: dimension mismatch");
        CVector out(phi.cols());
#pragma omp parallel for schedule(static)
        for (Index i = 0; i < phi.cols(); ++i)
            out[i] = phi.col(i).dot(r);
        return out;
    }

    double trace_product_hermitian(const CMatrix &a, const CMatrix &b)
    {
        if (a.rows() != b.cols() || a.cols() != b.rows())
            throw std::invalid_argument("trace_product_hermitian: dimension mismatch");
        // tr(AB) = sum_ik A_ik B_ki; for Hermitian B, B_ki = conj(B_ik), so each column
        // pair is a conjugated dot product.
        // Partial sums are combined serially so the result is independent of the
        // thread count.
        RVector partial(a.cols());
#pragma omp parallel for schedule(static)
        for (Index k = 0; k < a.cols(); ++k)
            partial[k] = b.col(k).dot(a.col(k)).real();
        return partial.sum();
    }
}
