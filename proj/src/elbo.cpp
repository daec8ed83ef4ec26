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

// Evidence lower bound of the channel / interference hierarchy:
//   E_q[log p(y, h, e, lambda_h, lambda_e, gamma, beta)] + H[q].
// Complex Gaussians contribute log det(pi e Sigma); gamma factors the usual
// shape/rate entropy; q(lambda_e) is a GIG with order 1/2, for which the Bessel
// functions reduce to elementary ones.

#include <cmath>

#include <boost/math/special_functions/digamma.hpp>

#include "mmw/vi_core.hpp"

namespace mmw
{
    namespace
    {
        const double kLogPi = std::log(kPi);

        // e^x E1(x) for x > 0.
        double scaled_exp_integral(double x)
        {
            if (x < 40.0)
                return std::exp(x) * -std::expint(-x);
            // Asymptotic series; at x >= 40 the 12-term truncation error is below 1e-16.
            double term = 1.0 / x, sum = term;
            for (int k = 1; k <= 12; ++k)
            {
                term *= -static_cast<double>(k) / x;
                sum += term;
            }
            return sum;
        }

        double gamma_prior_term(double a, double b, double mean, double log_mean)
        {
            return a * std::log(b) - std::lgamma(a) + (a - 1.0) * log_mean - b * mean;
        }

        // Terms shared by both interference models: likelihood, beta, h, lambda_h.
        double shared_terms(const VIState &s, const CVector &y, const CMatrix &phi, const CMatrix &phi_gram,
                            const Hyperparams &hp)
        {
            const double q = static_cast<double>(y.size());
            const double m = static_cast<double>(s.mu_h.size());

            const double cb = expected_residual_energy(s, y, phi, phi_gram);
            const double log_beta = gamma_log_mean(s.beta_shape, s.beta_rate);
            double total = q * log_beta - q * kLogPi - s.beta_mean * cb;
            total += gamma_prior_term(hp.a, hp.b, s.beta_mean, log_beta);
            total += gamma_entropy(s.beta_shape, s.beta_rate);

            const RVector h_second = s.sigma_h.diagonal().real() + s.mu_h.cwiseAbs2();
            for (Index i = 0; i < s.mu_h.size(); ++i)
            {
                const double log_lambda = gamma_log_mean(s.lambda_h_shape, s.lambda_h_rate[i]);
                const double lambda = s.lambda_h_mean[i];
                total += log_lambda - kLogPi - lambda * h_second[i];
                total += gamma_prior_term(hp.a, hp.b, lambda, log_lambda);
                total += gamma_entropy(s.lambda_h_shape, s.lambda_h_rate[i]);
            }
            total += m * (kLogPi + 1.0) + s.sigma_h_logdet;

            for (Index j = 0; j < s.mu_e.size(); ++j)
                total += kLogPi + 1.0 + std::log(s.sigma_e_diag[j]);
            return total;
        }
    }

    double gamma_log_mean(double shape, double rate) { return boost::math::digamma(shape) - std::log(rate); }

    double gamma_entropy(double shape, double rate)
    {
        return shape - std::log(rate) + std::lgamma(shape) + (1.0 - shape) * boost::math::digamma(shape);
    }

    // Density proportional to x^{-1/2} exp(-(chi x + psi / x) / 2).
    double gig_half_log_mean(double chi, double psi)
    {
        const double z = std::sqrt(chi * psi);
        return 0.5 * std::log(psi / chi) + scaled_exp_integral(2.0 * z);
    }

    double gig_half_entropy(double chi, double psi)
    {
        const double z = std::sqrt(chi * psi);
        const double root = std::sqrt(psi / chi);
        const double mean = root * (1.0 + 1.0 / z);
        const double inv_mean = 1.0 / root;
        // log(2 K_{1/2}(z)) = log 2 + log(pi / (2z)) / 2 - z
        const double log_norm = std::log(2.0) + 0.5 * std::log(kPi / (2.0 * z)) - z;
        return -0.25 * std::log(chi / psi) + log_norm + 0.5 * gig_half_log_mean(chi, psi) +
               0.5 * (chi * mean + psi * inv_mean);
    }

    double compute_elbo(const VIState &s, const CVector &y, const CMatrix &phi, const CMatrix &phi_gram,
                        const Hyperparams &hp)
    {
        double total = shared_terms(s, y, phi, phi_gram, hp);
        const double lgamma_three_halves = std::lgamma(1.5);
        const double log4 = std::log(4.0);
        for (Index j = 0; j < s.mu_e.size(); ++j)
        {
            const double chi = 0.5 * s.lambda_e_gamma[j];
            const double psi = 2.0 * s.lambda_e_energy_sqrt[j] * s.lambda_e_energy_sqrt[j];
            const double log_lambda_e = gig_half_log_mean(chi, psi);
            const double e_second = s.sigma_e_diag[j] + std::norm(s.mu_e[j]);

            // p(e | lambda_e) with lambda_e a variance
            total += -log_lambda_e - kLogPi - s.lambda_e_inv_mean[j] * e_second;
            // p(lambda_e | gamma) = Gamma(3/2, gamma / 4)
            const double log_gamma = gamma_log_mean(s.gamma_shape, s.gamma_rate[j]);
            total += 1.5 * (log_gamma - log4) - lgamma_three_halves + 0.5 * log_lambda_e -
                     0.25 * s.gamma_mean[j] * s.lambda_e_mean[j];
            total += gamma_prior_term(hp.a, hp.b, s.gamma_mean[j], log_gamma);
            total += gamma_entropy(s.gamma_shape, s.gamma_rate[j]);
            total += gig_half_entropy(chi, psi);
        }
        return total;
    }

    double compute_elbo_student_t(const VIState &s, const CVector &y, const CMatrix &phi,
                                  const CMatrix &phi_gram, const Hyperparams &hp)
    {
        double total = shared_terms(s, y, phi, phi_gram, hp);
        for (Index j = 0; j < s.mu_e.size(); ++j)
        {
            const double log_lambda = gamma_log_mean(s.lambda_e_shape, s.lambda_e_rate[j]);
            const double e_second = s.sigma_e_diag[j] + std::norm(s.mu_e[j]);
            total += log_lambda - kLogPi - s.lambda_e_mean[j] * e_second;
            total += gamma_prior_term(hp.a, hp.b, s.lambda_e_mean[j], log_lambda);
            total += gamma_entropy(s.lambda_e_shape, s.lambda_e_rate[j]);
        }
        return total;
    }
}
