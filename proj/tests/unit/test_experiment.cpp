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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include <omp.h>

#include "mmw/experiment.hpp"

using namespace mmw;
using Catch::Matchers::WithinAbs;

namespace
{
    bool same_row(const SweepRow &a, const SweepRow &b)
    {
        auto bits_equal = [](double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; };
        return a.method == b.method && a.variable == b.variable && bits_equal(a.value, b.value) &&
               a.trial == b.trial && bits_equal(a.nmse_linear, b.nmse_linear) && bits_equal(a.nmse_db, b.nmse_db) &&
               a.iterations == b.iterations && a.converged == b.converged && bits_equal(a.wall_ms, b.wall_ms) &&
               a.failed == b.failed;
    }

    SystemConfig small_desk(Index trials)
    {
        SystemConfig cfg = desk_preset();
        cfg.trials = trials;
        return cfg;
    }
}

TEST_CASE("nmse", "[experiment]")
{
    CMatrix t(2, 2);
    t << cplx(1, 2), cplx(0, -1), cplx(3, 0), cplx(-1, 1);
    CHECK(nmse(t, t) == 0.0);
    CHECK(nmse(t, CMatrix::Zero(2, 2)) == 1.0);
    CHECK_THAT(nmse(t, 2.0 * t), WithinAbs(1.0, 1e-15));
    CHECK_THROWS_AS(nmse(CMatrix::Zero(2, 2), t), std::invalid_argument);
    CHECK_THROWS_AS(nmse(t, CMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("trials are deterministic", "[experiment]")
{
    const SystemConfig cfg = desk_preset();
    for (Method m : {Method::proposed, Method::sie, Method::omp, Method::ls})
    {
        const SweepRow a = run_trial(cfg, {}, m, trial_seed(cfg.seed, 3));
        const SweepRow b = run_trial(cfg, {}, m, trial_seed(cfg.seed, 3));
        CHECK(same_row(a, b));
        CHECK_FALSE(a.failed);
        CHECK(a.wall_ms == 0.0);
        CHECK_THAT(a.nmse_db, WithinAbs(10.0 * std::log10(a.nmse_linear), 1e-12));
    }
    const SweepRow other = run_trial(cfg, {}, Method::ls, trial_seed(cfg.seed, 4));
    CHECK(other.nmse_linear != run_trial(cfg, {}, Method::ls, trial_seed(cfg.seed, 3)).nmse_linear);

    TrialOptions timed;
    timed.record_wall_time = true;
    CHECK(run_trial(cfg, {}, Method::proposed, 5, timed).wall_ms > 0.0);
}

TEST_CASE("noiseless least squares is exact", "[experiment]")
{
    SystemConfig cfg = desk_preset();
    cfg.noiseless = true;
    cfg.c2 = 0.0;
    for (double eta : {1e3, 1e9})
    {
        cfg.eta = eta;
        const SweepRow r = run_trial(cfg, {}, Method::ls, 17);
        CHECK_THAT(r.nmse_linear, WithinAbs(0.0, 1e-20));
    }
}

TEST_CASE("sampled problems", "[experiment]")
{
    const SystemConfig cfg = desk_preset();
    const SensingProblem p = sample_problem(cfg, 123);
    CHECK(p.y.size() == cfg.n_r * cfg.slots);
    CHECK(p.phi.cols() == cfg.d_u * cfg.d_b);
    CHECK(p.noise_variance == cfg.noise_variance_watt());

    // Sweeping T keeps the channel and the shared prefix of every random matrix.
    const SensingProblem longer = sample_problem(apply_sweep_value(cfg, SweepVariable::slots, 100.0), 123);
    CHECK(longer.truth_dense == p.truth_dense);
    const Index q = p.y.size();
    CHECK(longer.truth_e.head(q) == p.truth_e);

    // Sweeping eta rescales the same spikes.
    const SensingProblem louder = sample_problem(apply_sweep_value(cfg, SweepVariable::eta, 4e5), 123);
    CHECK(louder.truth_dense == p.truth_dense);
    CHECK((louder.truth_e - 2.0 * p.truth_e).norm() <= 1e-12 * louder.truth_e.norm());

    SystemConfig quiet = cfg;
    quiet.noiseless = true;
    const SensingProblem q0 = sample_problem(quiet, 123);
    CHECK(q0.noise_variance == kNoiselessVarianceFloor);
    const CMatrix clean = q0.truth_dense * q0.pilots.matrix;
    CHECK((q0.observed - clean - unvec(q0.truth_e, cfg.n_r, cfg.slots)).norm() <= 1e-12 * q0.observed.norm());
}

TEST_CASE("trial streams are uncorrelated", "[experiment]")
{
    auto draws = [](std::uint64_t seed) {
        Rng rng(seed);
        std::normal_distribution<double> n(0.0, 1.0);
        RVector v(1000);
        for (Index i = 0; i < v.size(); ++i)
            v[i] = n(rng);
        return v;
    };
    auto corr = [](const RVector &a, const RVector &b) {
        const RVector ca = a.array() - a.mean(), cb = b.array() - b.mean();
        return ca.dot(cb) / (ca.norm() * cb.norm());
    };
    const double first_pair = corr(draws(trial_seed(1, 0)), draws(trial_seed(1, 1)));
    CHECK(std::abs(first_pair) < 0.05);

    // With 1000 draws |rho| has standard deviation ~0.032, so independent streams
    // exceed 0.05 about 11.4 % of the time. Over many adjacent pairs the exceedance
    // count and the mean of n rho^2 (expected 1) must match that null distribution.
    const int pairs = 200;
    int exceed = 0;
    double scaled_sq = 0.0;
    for (Index t = 0; t < pairs; ++t)
    {
        const double rho = corr(draws(trial_seed(1, t)), draws(trial_seed(1, t + 1)));
        exceed += std::abs(rho) >= 0.05 ? 1 : 0;
        scaled_sq += 1000.0 * rho * rho;
        REQUIRE(trial_seed(1, t) != trial_seed(1, t + 1));
    }
    CHECK(exceed >= 8);
    CHECK(exceed <= 40);
    CHECK(scaled_sq / pairs > 0.6);
    CHECK(scaled_sq / pairs < 1.4);

    // sub-streams of one trial
    for (std::uint64_t s = 1; s < 4; ++s)
        CHECK(std::abs(corr(draws(derive_seed(trial_seed(1, 0), s)), draws(derive_seed(trial_seed(1, 0), s + 1)))) <
              0.05);
}

TEST_CASE("sweeps", "[experiment]")
{
    const SystemConfig cfg = small_desk(5);
    SweepSpec spec;
    spec.variable = SweepVariable::eta;
    spec.values = {1e3, 1e4, 1e5};
    spec.methods = {Method::omp, Method::ls};

    const SweepResult r = run_sweep(cfg, {}, spec);
    REQUIRE(r.rows.size() == 30);
    std::size_t i = 0;
    for (double v : spec.values)
        for (Index t = 0; t < 5; ++t)
            for (Method m : spec.methods)
            {
                const SweepRow &row = r.rows[i++];
                CHECK(row.value == v);
                CHECK(row.trial == t);
                CHECK(row.method == m);
                CHECK(row.variable == SweepVariable::eta);
                CHECK(row.nmse_linear >= 0.0);
                CHECK_THAT(row.nmse_db, WithinAbs(10.0 * std::log10(row.nmse_linear), 1e-12));
            }

    // A sweep row equals the stand-alone trial at the same seed.
    const SweepRow single =
        run_trial(apply_sweep_value(cfg, SweepVariable::eta, 1e4), {}, Method::ls, trial_seed(cfg.seed, 2));
    const SweepRow &in_sweep = r.rows[(1 * 5 + 2) * 2 + 1];
    CHECK(in_sweep.nmse_linear == single.nmse_linear);

    SECTION("independent of the thread count")
    {
        SweepSpec vi = spec;
        vi.methods = {Method::proposed, Method::omp};
        vi.values = {1e3, 1e5};
        const int saved = omp_get_max_threads();
        omp_set_num_threads(1);
        const SweepResult serial = run_sweep(cfg, {}, vi);
        omp_set_num_threads(4);
        const SweepResult parallel = run_sweep(cfg, {}, vi);
        omp_set_num_threads(saved);
        REQUIRE(serial.rows.size() == parallel.rows.size());
        for (std::size_t k = 0; k < serial.rows.size(); ++k)
            CHECK(same_row(serial.rows[k], parallel.rows[k]));
    }

    SECTION("estimator failures become failed rows")
    {
        SweepSpec slots;
        slots.variable = SweepVariable::slots;
        slots.values = {4, 10};
        slots.methods = {Method::ls, Method::omp};
        const SweepResult s = run_sweep(small_desk(2), {}, slots);
        REQUIRE(s.rows.size() == 8);
        CHECK(s.rows[0].failed);
        CHECK(std::isnan(s.rows[0].nmse_db));
        CHECK_FALSE(s.rows[0].error.empty());
        CHECK_FALSE(s.rows[1].failed);
        CHECK_FALSE(s.rows[4].failed);

        const auto summary = summarize(s);
        REQUIRE(summary.size() == 4);
        CHECK(summary[0].method == Method::ls);
        CHECK(summary[0].value == 4.0);
        CHECK(summary[0].failures == 2);
        CHECK(summary[0].count == 0);
        CHECK(std::isnan(summary[0].mean_db));
    }
}

TEST_CASE("summary statistics", "[experiment]")
{
    SweepResult r;
    const double db[] = {-10.0, -12.0, -14.0};
    for (Index t = 0; t < 3; ++t)
    {
        SweepRow row;
        row.method = Method::sie;
        row.value = 2.0;
        row.trial = t;
        row.nmse_db = db[t];
        row.nmse_linear = std::pow(10.0, db[t] / 10.0);
        row.converged = t != 1;
        r.rows.push_back(row);
    }
    const auto s = summarize(r);
    REQUIRE(s.size() == 1);
    CHECK(s[0].count == 3);
    CHECK(s[0].converged == 2);
    CHECK_THAT(s[0].mean_db, WithinAbs(-12.0, 1e-12));
    CHECK_THAT(s[0].std_db, WithinAbs(2.0, 1e-12));
    CHECK_THAT(s[0].stderr_db, WithinAbs(2.0 / std::sqrt(3.0), 1e-12));
    CHECK_THAT(s[0].mean_linear, WithinAbs((0.1 + std::pow(10.0, -1.2) + std::pow(10.0, -1.4)) / 3.0, 1e-15));
}
