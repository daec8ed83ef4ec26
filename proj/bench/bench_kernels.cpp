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

// Serial reference kernels against their OpenMP counterparts. Sizes follow the
// sensing matrix of the desk preset (Q = 100, M = 64) and the full-scale default
// (Q = 800, M = 256).

#include <benchmark/benchmark.h>

#include "mmw/kernels.hpp"

using namespace mmw;
namespace k = mmw::kernels;

namespace
{
    CMatrix random_complex(Index r, Index c, std::uint64_t seed)
    {
        Rng rng(seed);
        CMatrix m(r, c);
        for (Index i = 0; i < m.size(); ++i)
            m.data()[i] = sample_complex_gaussian(rng, 1.0);
        return m;
    }

    CMatrix random_hermitian(Index n, std::uint64_t seed)
    {
        const CMatrix a = random_complex(n, n, seed);
        return a + a.adjoint();
    }

    void sensing_sizes(benchmark::internal::Benchmark *b)
    {
        b->Args({100, 64})->Args({400, 128})->Args({800, 256});
    }

    template <CMatrix (*Gram)(const CMatrix &)> void bm_gram(benchmark::State &state)
    {
        const CMatrix phi = random_complex(state.range(0), state.range(1), 1);
        for (auto _ : state)
            benchmark::DoNotOptimize(Gram(phi));
    }

    template <CVector (*Apply)(const CMatrix &, const CVector &)> void bm_adjoint(benchmark::State &state)
    {
        const CMatrix phi = random_complex(state.range(0), state.range(1), 2);
        const CVector r = random_complex(state.range(0), 1, 3);
        for (auto _ : state)
            benchmark::DoNotOptimize(Apply(phi, r));
    }

    template <double (*Trace)(const CMatrix &, const CMatrix &)> void bm_trace(benchmark::State &state)
    {
        const CMatrix a = random_hermitian(state.range(0), 4), b = random_hermitian(state.range(0), 5);
        for (auto _ : state)
            benchmark::DoNotOptimize(Trace(a, b));
    }

    // (S^T conj A_B) is T x D_B, A_U is N_r x D_U
    template <CMatrix (*Kron)(const CMatrix &, const CMatrix &)> void bm_kron(benchmark::State &state)
    {
        const CMatrix a = random_complex(state.range(0), state.range(1), 6);
        const CMatrix b = random_complex(state.range(2), state.range(3), 7);
        for (auto _ : state)
            benchmark::DoNotOptimize(Kron(a, b));
    }

    void kron_sizes(benchmark::internal::Benchmark *b)
    {
        b->Args({50, 16, 2, 4})->Args({200, 32, 4, 8});
    }
}

BENCHMARK(bm_gram<k::serial::gram>)->Name("gram/serial")->Apply(sensing_sizes);
BENCHMARK(bm_gram<k::omp::gram>)->Name("gram/omp")->Apply(sensing_sizes)->UseRealTime();
BENCHMARK(bm_adjoint<k::serial::adjoint_apply>)->Name("adjoint_apply/serial")->Apply(sensing_sizes);
BENCHMARK(bm_adjoint<k::omp::adjoint_apply>)->Name("adjoint_apply/omp")->Apply(sensing_sizes)->UseRealTime();
BENCHMARK(bm_trace<k::serial::trace_product_hermitian>)->Name("trace/serial")->Arg(64)->Arg(256);
BENCHMARK(bm_trace<k::omp::trace_product_hermitian>)->Name("trace/omp")->Arg(64)->Arg(256)->UseRealTime();
BENCHMARK(bm_kron<k::serial::kron>)->Name("kron/serial")->Apply(kron_sizes);
BENCHMARK(bm_kron<k::omp::kron>)->Name("kron/omp")->Apply(kron_sizes)->UseRealTime();

BENCHMARK_MAIN();
