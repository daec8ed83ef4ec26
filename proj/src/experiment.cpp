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

#include "mmw/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "mmw/disturbance.hpp"

namespace mmw
{
    double nmse(const CMatrix &truth, const CMatrix &estimate)
    {
        if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols())
            throw std::invalid_argument("nmse: shape mismatch");
        const double denom = truth.squaredNorm();
        if (!(denom > 0.0))
            throw std::invalid_argument("nmse: reference matrix has zero norm");
        return (truth - estimate).squaredNorm() / denom;
    }

    std::uint64_t trial_seed(std::uint64_t seed, Index trial)
    {
        return derive_seed(seed, static_cast<std::uint64_t>(trial));
    }

    namespace
    {
        enum Stream : std::uint64_t
        {
            kChannelStream = 1,
            kPilotStream = 2,
            kImpulseStream = 3,
            kNoiseStream = 4,
        };
    }

    SensingProblem sample_problem(const SystemConfig &cfg, std::uint64_t seed)
    {
        cfg.validate();
        const ArrayGeometry rx{cfg.n_r, cfg.spacing_over_wavelength};
        const ArrayGeometry tx{cfg.n_t, cfg.spacing_over_wavelength};
        const Dictionary dict_rx = build_dictionary(rx, cfg.d_u);
        const Dictionary dict_tx = build_dictionary(tx, cfg.d_b);

        ChannelSpec spec;
        spec.rx = rx;
        spec.tx = tx;
        spec.num_paths = cfg.paths;
        spec.path_amplitude = free_space_path_gain(cfg.fc_hz, cfg.distance_m);
        spec.on_grid = cfg.on_grid;
        spec.rx_grid_size = cfg.d_u;
        spec.tx_grid_size = cfg.d_b;

        Rng channel_rng(derive_seed(seed, kChannelStream));
        Rng pilot_rng(derive_seed(seed, kPilotStream));
        Rng impulse_rng(derive_seed(seed, kImpulseStream));
        Rng noise_rng(derive_seed(seed, kNoiseStream));

        const GeometricChannel channel = sample_geometric_channel(channel_rng, spec);
        const PilotMatrix pilots = generate_pilots(pilot_rng, cfg.n_t, cfg.slots, cfg.pilot_power_watt());

        const double sigma2 = cfg.noise_variance_watt();
        const ImpulseConfig impulses{cfg.c2, cfg.eta, sigma2};
        const CMatrix e = sample_impulsive(impulse_rng, cfg.n_r, cfg.slots, impulses);

        if (cfg.noiseless)
            return observe(channel, pilots, dict_rx, dict_tx, e, CMatrix::Zero(cfg.n_r, cfg.slots),
                           kNoiselessVarianceFloor);
        const CMatrix n = sample_awgn(noise_rng, cfg.n_r, cfg.slots, sigma2);
        return observe(channel, pilots, dict_rx, dict_tx, e, n, sigma2);
    }

    SweepRow estimate_and_score(const SensingProblem &problem, const SystemConfig &cfg, const Hyperparams &hp,
                                Method method, const TrialOptions &options)
    {
        SweepRow row;
        row.method = method;
        const auto start = std::chrono::steady_clock::now();
        try
        {
            CMatrix estimate;
            switch (method)
            {
            case Method::proposed:
            case Method::sie:
            {
                const EstimateResult r = method == Method::proposed ? run(problem, hp, options.trace)
                                                                    : sie_estimate(problem, hp, options.trace);
                estimate = r.dense_channel_estimate;
                row.iterations = r.iterations;
                row.converged = r.converged;
                break;
            }
            case Method::omp:
            {
                const OmpResult r = omp_estimate(problem.y, problem.phi, OmpConfig::with_sparsity(cfg.omp_k()));
                const AngularChannel h{unvec(r.coefficients, problem.dict_rx.size(), problem.dict_tx.size())};
                estimate = angular_expand(h, problem.dict_rx, problem.dict_tx);
                row.iterations = static_cast<int>(r.support.size());
                row.converged = true;
                break;
            }
            case Method::ls:
                estimate = ls_estimate(problem.observed, problem.pilots.matrix);
                row.iterations = 1;
                row.converged = true;
                break;
            }
            row.nmse_linear = nmse(problem.truth_dense, estimate);
            row.nmse_db = 10.0 * std::log10(row.nmse_linear);
        }
        catch (const std::exception &err)
        {
            row.failed = true;
            row.converged = false;
            row.error = err.what();
            row.nmse_linear = std::numeric_limits<double>::quiet_NaN();
            row.nmse_db = std::numeric_limits<double>::quiet_NaN();
        }
        if (options.record_wall_time)
            row.wall_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return row;
    }

    SweepRow run_trial(const SystemConfig &cfg, const Hyperparams &hp, Method method, std::uint64_t seed,
                       const TrialOptions &options)
    {
        return estimate_and_score(sample_problem(cfg, seed), cfg, hp, method, options);
    }

    SweepResult run_sweep(const SystemConfig &cfg, const Hyperparams &hp, const SweepSpec &spec)
    {
        cfg.validate();
        hp.validate();
        spec.validate();

        std::vector<SystemConfig> points;
        for (double v : spec.values)
            points.push_back(apply_sweep_value(cfg, spec.variable, v));

        const Index nv = static_cast<Index>(points.size());
        const Index nt = cfg.trials;
        const Index nm = static_cast<Index>(spec.methods.size());
        SweepResult out;
        out.rows.resize(static_cast<std::size_t>(nv * nt * nm));

        TrialOptions options;
        options.record_wall_time = spec.record_wall_time;

        // Each job owns a disjoint slice of the output; ordering is fixed up front.
#pragma omp parallel for schedule(dynamic, 1)
        for (Index job = 0; job < nv * nt; ++job)
        {
            const Index v = job / nt, t = job % nt;
            const std::size_t base = static_cast<std::size_t>(job * nm);
            try
            {
                const SensingProblem problem = sample_problem(points[v], trial_seed(cfg.seed, t));
                for (Index m = 0; m < nm; ++m)
                    out.rows[base + m] = estimate_and_score(problem, points[v], hp, spec.methods[m], options);
            }
            catch (const std::exception &err)
            {
                for (Index m = 0; m < nm; ++m)
                {
                    SweepRow &r = out.rows[base + m];
                    r.method = spec.methods[m];
                    r.failed = true;
                    r.error = err.what();
                    r.nmse_linear = r.nmse_db = std::numeric_limits<double>::quiet_NaN();
                }
            }
            for (Index m = 0; m < nm; ++m)
            {
                SweepRow &r = out.rows[base + m];
                r.variable = spec.variable;
                r.value = spec.values[static_cast<std::size_t>(v)];
                r.trial = t;
            }
        }
        return out;
    }

    std::vector<PointSummary> summarize(const SweepResult &result)
    {
        std::vector<Method> methods;
        std::vector<double> values;
        for (const auto &r : result.rows)
        {
            if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
                methods.push_back(r.method);
            if (std::find(values.begin(), values.end(), r.value) == values.end())
                values.push_back(r.value);
        }

        std::vector<PointSummary> out;
        for (Method m : methods)
            for (double v : values)
            {
                PointSummary s;
                s.method = m;
                s.value = v;
                double sum = 0.0, sum_sq = 0.0, sum_lin = 0.0;
                for (const auto &r : result.rows)
                {
                    if (r.method != m || r.value != v)
                        continue;
                    if (r.failed)
                    {
                        ++s.failures;
                        continue;
                    }
                    ++s.count;
                    s.converged += r.converged ? 1 : 0;
                    sum += r.nmse_db;
                    sum_sq += r.nmse_db * r.nmse_db;
                    sum_lin += r.nmse_linear;
                }
                if (s.count == 0 && s.failures == 0)
                    continue;
                if (s.count > 0)
                {
                    const double n = static_cast<double>(s.count);
                    s.mean_db = sum / n;
                    s.mean_linear = sum_lin / n;
                    if (s.count > 1)
                    {
                        const double var = std::max(0.0, (sum_sq - n * s.mean_db * s.mean_db) / (n - 1.0));
                        s.std_db = std::sqrt(var);
                        s.stderr_db = s.std_db / std::sqrt(n);
                    }
                }
                else
                {
                    s.mean_db = s.mean_linear = std::numeric_limits<double>::quiet_NaN();
                }
                out.push_back(s);
            }
        return out;
    }
}
