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

// Data-parallel building blocks. Every kernel exists twice: a plain-loop serial
// reference kept for testing, and the OpenMP version used on the hot path.
namespace mmw::kernels
{
    namespace serial
    {
        CMatrix kron(const CMatrix &a, const CMatrix &b);
        CMatrix gram(const CMatrix &phi);
        CVector adjoint_apply(const CMatrix &phi, const CVector &r);
        double trace_product_hermitian(const CMatrix &a, const CMatrix &b);
    }

    namespace omp
    {
        CMatrix kron(const CMatrix &a, const CMatrix &b);
        CMatrix gram(const CMatrix &phi);
        CVector adjoint_apply(const CMatrix &phi, const CVector &r);
        double trace_product_hermitian(const CMatrix &a, const CMatrix &b);
    }

    /// a (x) b
    inline CMatrix kron(const CMatrix &a, const CMatrix &b) { return omp::kron(a, b); }
    /// phi^H phi
    inline CMatrix gram(const CMatrix &phi) { return omp::gram(phi); }
    /// phi^H r
    inline CVector adjoint_apply(const CMatrix &phi, const CVector &r) { return omp::adjoint_apply(phi, r); }
    /// Re tr(A B) for Hermitian A, B.
    inline double trace_product_hermitian(const CMatrix &a, const CMatrix &b)
    {
        return omp::trace_product_hermitian(a, b);
    }

    int max_threads();
}
