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

#include <functional>
#include <stdexcept>

#include "mmw/measurement.hpp"

namespace mmw
{
    struct Hyperparams
    {
        double a = 1e-6; // gamma shape for beta, lambda_h, gamma
        double b = 1e-6; // gamma rate
        double eps_h = 1e-3;
        double eps_e = 1e-3;
        int max_iters = 200;
        // Rescale y to unit mean power before inference and undo it afterwards.
        // The a, b priors are not scale invariant; at physical units (|y|^2 ~ 1e-9 W)
        // the rate b would dominate every posterior rate.
        bool normalize = true;

        void validate() const;
    };

    /// Smallest s_j = sqrt(<|e_j|^2>) used in the GIG moments.
    inline constexpr double kInterferenceEnergyFloor = 1e-12;

    /// Variational posterior moments. Besides the means required by the updates it
    /// keeps the shape/rate of every gamma factor and the GIG parameters, which
    /// the evidence lower bound needs.
    struct VIState
    {
        CVector mu_h;
        CMatrix sigma_h;
        double sigma_h_logdet = 0.0; // log det Sigma_h

        CVector mu_e;
        RVector sigma_e_diag;

        double lambda_h_shape = 0.0;
        RVector lambda_h_rate;
        RVector lambda_h_mean;

        // q(lambda_e,j) = GIG(p = 1/2, chi = gamma_j / 2, psi = 2 s_j^2)
        RVector lambda_e_energy_sqrt; // s_j, floored
        RVector lambda_e_gamma;       // <gamma_j> the GIG was formed with
        RVector lambda_e_mean;
        RVector lambda_e_inv_mean;

        // q(lambda_e,j) = Gamma(shape, rate_j); used only by the Student-t prior,
        // where lambda_e is a precision.
        double lambda_e_shape = 0.0;
        RVector lambda_e_rate;

        double gamma_shape = 0.0;
        RVector gamma_rate;
        RVector gamma_mean;

        double beta_shape = 0.0;
        double beta_rate = 0.0;
        double beta_mean = 0.0;

        Index num_coefficients() const { return mu_h.size(); }
        Index num_observations() const { return mu_e.size(); }
    };

    class FactorizationError : public std::runtime_error
    {
      public:
        FactorizationError(const std::string &what, int iteration)
            : std::runtime_error(what), iteration_(iteration) {}
        int iteration() const { return iteration_; }

      private:
        int iteration_;
    };

    VIState init_state(const Hyperparams &hp, Index num_coefficients, Index num_observations);

    /// Sigma_h = (<beta> phi^H phi + diag<lambda_h>)^-1,  mu_h = <beta> Sigma_h phi^H (y - mu_e).
    /// The precision matrix is Cholesky-factored; on failure jitter of 1e-12, 1e-9, 1e-6
    /// times its mean diagonal is tried before throwing FactorizationError.
    void update_h(VIState &state, const CVector &y, const CMatrix &phi, const CMatrix &phi_gram, int iteration = 0);

    /// Sigma_e = diag(1 / (<beta> + <lambda_e^-1>)),  mu_e = <beta> Sigma_e (y - phi mu_h).
    void update_e(VIState &state, const CVector &y, const CMatrix &phi);

    /// Same update with an arbitrary expected prior precision per entry.
    void update_e_with_precision(VIState &state, const CVector &y, const CMatrix &phi, const RVector &precision);

    /// <lambda_h,i> = (a + 1) / (b + [Sigma_h + mu_h mu_h^H]_ii)
    void update_lambda_h(VIState &state, const Hyperparams &hp);

    /// GIG moments: <lambda_e> = 2 s / sqrt(g) + 2 / g,  <lambda_e^-1> = sqrt(g) / (2 s).
    void update_lambda_e(VIState &state);

    /// <gamma_j> = (a + 3/2) / (b + <lambda_e,j> / 4)
    void update_gamma(VIState &state, const Hyperparams &hp);

    /// Expected squared residual C_b = ||y - phi mu_h - mu_e||^2 + tr(phi^H phi Sigma_h) + sum(Sigma_e).
    double expected_residual_energy(const VIState &state, const CVector &y, const CMatrix &phi,
                                    const CMatrix &phi_gram);

    /// <beta> = (a + N_r T) / (b + C_b)
    void update_beta(VIState &state, const Hyperparams &hp, const CVector &y, const CMatrix &phi,
                     const CMatrix &phi_gram);

    /// Student-t interference layer: <lambda_e,j> = (a + 1) / (b + [Sigma_e + mu_e mu_e^H]_jj).
    void update_lambda_e_student_t(VIState &state, const Hyperparams &hp);

    /// Evidence lower bound of the full hierarchy under the current factors. Valid once
    /// every factor has been updated at least once.
    double compute_elbo(const VIState &state, const CVector &y, const CMatrix &phi, const CMatrix &phi_gram,
                        const Hyperparams &hp);

    /// Lower bound for the Student-t interference model (h, beta factors unchanged).
    double compute_elbo_student_t(const VIState &state, const CVector &y, const CMatrix &phi,
                                  const CMatrix &phi_gram, const Hyperparams &hp);

    // GIG(p = 1/2) helpers, exposed for tests.
    double gig_half_log_mean(double chi, double psi);
    double gig_half_entropy(double chi, double psi);
    double gamma_entropy(double shape, double rate);
    double gamma_log_mean(double shape, double rate);

    enum class InterferencePrior
    {
        adaptive_laplace, // two-layer Gamma-Gamma (proposed)
        student_t,        // single gamma precision layer (SIE baseline)
    };

    struct SweepDeltas
    {
        double mu_h = 0.0;
        double mu_e = 0.0;
    };

    /// Coordinate ascent over one observation. Holds references to phi and its Gram
    /// matrix; they must outlive the estimator.
    class VariationalEstimator
    {
      public:
        VariationalEstimator(CVector y, const CMatrix &phi, const CMatrix &phi_gram, Hyperparams hp,
                             InterferencePrior prior = InterferencePrior::adaptive_laplace);

        /// One pass of the updates in the fixed order h, e, lambda_h, lambda_e, gamma, beta.
        SweepDeltas sweep();

        const VIState &state() const { return state_; }
        int iterations() const { return iterations_; }
        double elbo() const;

      private:
        CVector y_;
        const CMatrix *phi_;
        const CMatrix *phi_gram_;
        Hyperparams hp_;
        InterferencePrior prior_;
        VIState state_;
        int iterations_ = 0;
    };

    struct EstimateResult
    {
        CMatrix dense_channel_estimate;
        CVector angular_estimate;
        CVector interference_estimate;
        int iterations = 0;
        bool converged = false;
        SweepDeltas final_deltas;
    };

    struct TraceRow
    {
        int iteration = 0;
        double delta_mu_h = 0.0;
        double delta_mu_e = 0.0;
        double beta_mean = 0.0;
        double elbo = 0.0;
    };
    using TraceSink = std::function<void(const TraceRow &)>;

    EstimateResult run_variational(const SensingProblem &problem, const Hyperparams &hp, InterferencePrior prior,
                                   const TraceSink &trace = {});

    /// Joint channel / impulsive-interference estimate under the adaptive Laplace prior.
    inline EstimateResult run(const SensingProblem &problem, const Hyperparams &hp, const TraceSink &trace = {})
    {
        return run_variational(problem, hp, InterferencePrior::adaptive_laplace, trace);
    }
}
