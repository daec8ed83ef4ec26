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
#include <functional>

#include "mmw/experiment.hpp"
#include "mmw/vi_core.hpp"

using namespace mmw;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    // E[g(x)] and the entropy of the density proportional to exp(log_w(x)), by the
    // trapezoid rule in u = log x.
    struct Quadrature
    {
        double expect_log = 0.0;
        double entropy = 0.0;
    };

    Quadrature integrate_log_domain(const std::function<double(double)> &log_w, double lo, double hi, int n)
    {
        const double h = (hi - lo) / n;
        double peak = -INFINITY;
        for (int k = 0; k <= n; ++k)
        {
            const double u = lo + h * k;
            peak = std::max(peak, log_w(std::exp(u)) + u);
        }
        double z = 0.0, m_log = 0.0, m_logw = 0.0;
        for (int k = 0; k <= n; ++k)
        {
            const double u = lo + h * k;
            const double lw = log_w(std::exp(u));
            const double weight = std::exp(lw + u - peak) * ((k == 0 || k == n) ? 0.5 : 1.0);
            z += weight;
            m_log += weight * u;
            m_logw += weight * lw;
        }
        const double log_z = peak + std::log(z * h);
        return {m_log / z, log_z - m_logw / z};
    }

    Quadrature gig_half_oracle(double chi, double psi)
    {
        auto log_w = [&](double x) { return -0.5 * std::log(x) - 0.5 * (chi * x + psi / x); };
        const double centre = 0.5 * std::log(psi / chi);
        return integrate_log_domain(log_w, centre - 40.0, centre + 40.0, 400000);
    }
}

TEST_CASE("GIG(1/2) log-mean and entropy against quadrature", "[elbo]")
{
    // chi = gamma / 2, psi = 2 s^2; z = sqrt(chi psi) spans both branches of e^x E1(x)
    for (const auto [chi, psi] : {std::pair{2.0, 2.0}, {0.5, 8e-6}, {1e-3, 0.3}, {12.5, 50.0}, {400.0, 900.0},
                                  {5e5, 2e-2}, {3.0, 1e4}})
    {
        const Quadrature q = gig_half_oracle(chi, psi);
        INFO("chi = " << chi << ", psi = " << psi);
        CHECK_THAT(gig_half_log_mean(chi, psi), WithinAbs(q.expect_log, 1e-8));
        CHECK_THAT(gig_half_entropy(chi, psi), WithinAbs(q.entropy, 1e-8));
    }
}

TEST_CASE("gamma helpers", "[elbo]")
{
    constexpr double euler_gamma = 0.57721566490153286;
    CHECK_THAT(gamma_log_mean(1.0, 1.0), WithinAbs(-euler_gamma, 1e-14));
    CHECK_THAT(gamma_entropy(1.0, 2.0), WithinAbs(1.0 - std::log(2.0), 1e-14));

    for (const auto [shape, rate] : {std::pair{1e-6 + 1.0, 3e-4}, {2.5, 7.0}, {101.0, 0.25}, {1.5, 1e6}})
    {
        auto log_w = [&](double x) { return (shape - 1.0) * std::log(x) - rate * x; };
        const double centre = std::log(shape / rate);
        const Quadrature q = integrate_log_domain(log_w, centre - 40.0, centre + 10.0, 400000);
        INFO("shape = " << shape << ", rate = " << rate);
        CHECK_THAT(gamma_log_mean(shape, rate), WithinAbs(q.expect_log, 1e-8));
        CHECK_THAT(gamma_entropy(shape, rate), WithinAbs(q.entropy, 1e-8));
    }
}

namespace
{
    struct Problem
    {
        SensingProblem raw;
        CVector y;
    };

    Problem normalized(std::uint64_t seed, double factor = 1.0)
    {
        Problem p{sample_problem(desk_preset(), seed), {}};
        const double scale = std::sqrt(p.raw.y.squaredNorm() / static_cast<double>(p.raw.y.size()));
        p.y = factor * p.raw.y / scale;
        return p;
    }

    double elbo_of(const VIState &s, const Problem &p, const Hyperparams &hp)
    {
        return compute_elbo(s, p.y, p.raw.phi, p.raw.phi_gram, hp);
    }

    void set_gig(VIState &s, Index j, double energy_sqrt, double gamma)
    {
        s.lambda_e_energy_sqrt[j] = energy_sqrt;
        s.lambda_e_gamma[j] = gamma;
        s.lambda_e_mean[j] = 2.0 * energy_sqrt / std::sqrt(gamma) + 2.0 / gamma;
        s.lambda_e_inv_mean[j] = std::sqrt(gamma) / (2.0 * energy_sqrt);
    }
}

TEST_CASE("ELBO is non-decreasing across sweeps", "[elbo]")
{
    const Hyperparams hp;
    for (double factor : {1.0, 2.0})
        for (std::uint64_t seed : {1u, 2u, 3u, 4u})
        {
            const Problem p = normalized(seed, factor);
            for (auto prior : {InterferencePrior::adaptive_laplace, InterferencePrior::student_t})
            {
                VariationalEstimator est(p.y, p.raw.phi, p.raw.phi_gram, hp, prior);
                est.sweep();
                double previous = est.elbo();
                for (int it = 1; it < 60; ++it)
                {
                    est.sweep();
                    const double current = est.elbo();
                    INFO("seed " << seed << " factor " << factor << " iteration " << it);
                    REQUIRE(std::isfinite(current));
                    REQUIRE(current >= previous - 1e-6 * std::abs(previous));
                    previous = current;
                }
            }
        }
}

TEST_CASE("ELBO is stationary at the fixed point", "[elbo]")
{
    // The default eps = 1e-3 stops while pruned entries are still tightening
    // (relative ELBO steps ~1e-4 there); the fixed point itself is reached with a
    // tight threshold.
    Hyperparams hp;
    hp.eps_h = hp.eps_e = 1e-6;
    hp.max_iters = 2000;
    for (std::uint64_t seed : {6u, 7u})
    {
        const Problem p = normalized(seed);
        VariationalEstimator est(p.y, p.raw.phi, p.raw.phi_gram, hp);
        SweepDeltas d;
        do
        {
            d = est.sweep();
        } while ((d.mu_h >= hp.eps_h || d.mu_e >= hp.eps_e) && est.iterations() < hp.max_iters);
        REQUIRE(est.iterations() < hp.max_iters);
        const double before = est.elbo();
        est.sweep();
        CHECK(std::abs(est.elbo() - before) <= 1e-6 * std::abs(before));
    }
}

TEST_CASE("each update maximizes the ELBO in its own factor", "[elbo]")
{
    const Hyperparams hp;
    const Problem p = normalized(9);
    VariationalEstimator est(p.y, p.raw.phi, p.raw.phi_gram, hp);
    for (int it = 0; it < 6; ++it)
        est.sweep();

    // Re-run the updates in order so that every factor is optimal given the others
    // at the moment it is perturbed.
    VIState s = est.state();
    const auto &phi = p.raw.phi;
    const auto &gram = p.raw.phi_gram;

    auto expect_peak = [&](const char *what, const std::function<void(VIState &, double)> &perturb) {
        const double base = elbo_of(s, p, hp);
        for (double sign : {-1.0, 1.0})
        {
            VIState t = s;
            perturb(t, sign);
            INFO(what << " sign " << sign);
            CHECK(elbo_of(t, p, hp) < base);
        }
    };

    update_h(s, p.y, phi, gram, 0);
    expect_peak("mu_h", [](VIState &t, double sign) {
        t.mu_h[3] += sign * 0.3 * std::sqrt(t.sigma_h(3, 3).real());
        t.mu_h[10] += cplx(0.0, sign * 0.3 * std::sqrt(t.sigma_h(10, 10).real()));
    });
    expect_peak("Sigma_h scale", [](VIState &t, double sign) {
        const double f = 1.0 + 0.05 * sign;
        t.sigma_h *= f;
        t.sigma_h_logdet += static_cast<double>(t.sigma_h.rows()) * std::log(f);
    });

    update_e(s, p.y, phi);
    expect_peak("mu_e", [](VIState &t, double sign) { t.mu_e[5] += sign * 0.3 * std::sqrt(t.sigma_e_diag[5]); });
    expect_peak("Sigma_e", [](VIState &t, double sign) { t.sigma_e_diag[7] *= 1.0 + 0.05 * sign; });

    update_lambda_h(s, hp);
    expect_peak("lambda_h rate", [](VIState &t, double sign) {
        t.lambda_h_rate[2] *= 1.0 + 0.05 * sign;
        t.lambda_h_mean[2] = t.lambda_h_shape / t.lambda_h_rate[2];
    });
    expect_peak("lambda_h shape", [](VIState &t, double sign) {
        t.lambda_h_shape *= 1.0 + 0.05 * sign;
        t.lambda_h_mean = (t.lambda_h_shape / t.lambda_h_rate.array()).matrix();
    });

    update_lambda_e(s);
    expect_peak("GIG energy", [](VIState &t, double sign) {
        set_gig(t, 4, t.lambda_e_energy_sqrt[4] * (1.0 + 0.05 * sign), t.lambda_e_gamma[4]);
    });
    expect_peak("GIG gamma", [](VIState &t, double sign) {
        set_gig(t, 4, t.lambda_e_energy_sqrt[4], t.lambda_e_gamma[4] * (1.0 + 0.05 * sign));
    });

    update_gamma(s, hp);
    expect_peak("gamma rate", [](VIState &t, double sign) {
        t.gamma_rate[4] *= 1.0 + 0.05 * sign;
        t.gamma_mean[4] = t.gamma_shape / t.gamma_rate[4];
    });

    update_beta(s, hp, p.y, phi, gram);
    expect_peak("beta rate", [](VIState &t, double sign) {
        t.beta_rate *= 1.0 + 0.05 * sign;
        t.beta_mean = t.beta_shape / t.beta_rate;
    });
    expect_peak("beta shape", [](VIState &t, double sign) {
        t.beta_shape *= 1.0 + 0.05 * sign;
        t.beta_mean = t.beta_shape / t.beta_rate;
    });
}
