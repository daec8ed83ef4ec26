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

#include "mmw/vi_core.hpp"

#include <array>
#include <cmath>
#include <string>

#include "mmw/kernels.hpp"

namespace mmw
{
    void Hyperparams::validate() const
    {
        if (!(a > 0.0) || !(b > 0.0))
            throw std::invalid_argument("Hyperparams: a and b must be positive");
        if (!(eps_h > 0.0) || !(eps_e > 0.0))
            throw std::invalid_argument("Hyperparams: convergence thresholds must be positive");
        if (max_iters < 1)
            throw std::invalid_argument("Hyperparams: max_iters must be >= 1");
    }

    VIState init_state(const Hyperparams &hp, Index num_coefficients, Index num_observations)
    {
        const Index m = num_coefficients, q = num_observations;
        const double prior_mean = hp.a / hp.b;

        VIState s;
        s.mu_h = CVector::Zero(m);
        s.sigma_h = CMatrix::Zero(m, m);
        s.mu_e = CVector::Zero(q);
        s.sigma_e_diag = RVector::Zero(q);

        s.lambda_h_shape = hp.a;
        s.lambda_h_rate = RVector::Constant(m, hp.b);
        s.lambda_h_mean = RVector::Constant(m, prior_mean);

        s.gamma_shape = hp.a;
        s.gamma_rate = RVector::Constant(q, hp.b);
        s.gamma_mean = RVector::Constant(q, prior_mean);

        s.lambda_e_mean = s.gamma_mean.cwiseInverse();
        s.lambda_e_inv_mean = s.lambda_e_mean.cwiseInverse();
        s.lambda_e_energy_sqrt = RVector::Zero(q);
        s.lambda_e_gamma = s.gamma_mean;
        s.lambda_e_shape = hp.a;
        s.lambda_e_rate = RVector::Constant(q, hp.b);

        s.beta_shape = hp.a;
        s.beta_rate = hp.b;
        s.beta_mean = prior_mean;
        return s;
    }

    void update_h(VIState &state, const CVector &y, const CMatrix &phi, const CMatrix &phi_gram, int iteration)
    {
        const Index m = phi.cols();
        if (phi_gram.rows() != m || phi_gram.cols() != m || y.size() != phi.rows() ||
            state.mu_h.size() != m || state.mu_e.size() != y.size())
            throw std::invalid_argument("update_h: dimension mismatch");

        CMatrix precision = state.beta_mean * phi_gram;
        precision.diagonal() += state.lambda_h_mean.cast<cplx>();
        const double mean_diag = precision.diagonal().real().mean();

        constexpr std::array<double, 4> jitter{0.0, 1e-12, 1e-9, 1e-6};
        Eigen::LLT<CMatrix> llt;
        bool ok = false;
        for (double j : jitter)
        {
            CMatrix p = precision;
            if (j > 0.0)
                p.diagonal().array() += j * mean_diag;
            llt.compute(p);
            if (llt.info() == Eigen::Success && llt.matrixLLT().diagonal().real().minCoeff() > 0.0 &&
                llt.matrixLLT().diagonal().allFinite())
            {
                ok = true;
                break;
            }
        }
        if (!ok)
            throw FactorizationError("update_h: precision matrix is not positive definite at iteration " +
                                         std::to_string(iteration),
                                     iteration);

        const CVector rhs = state.beta_mean * kernels::adjoint_apply(phi, y - state.mu_e);
        state.mu_h = llt.solve(rhs);
        CMatrix sigma = llt.solve(CMatrix::Identity(m, m));
        state.sigma_h = 0.5 * (sigma + sigma.adjoint());
        state.sigma_h_logdet = -2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
    }

    void update_e_with_precision(VIState &state, const CVector &y, const CMatrix &phi, const RVector &precision)
    {
        if (precision.size() != y.size() || phi.rows() != y.size() || phi.cols() != state.mu_h.size())
            throw std::invalid_argument("update_e: dimension mismatch");
        const CVector residual = y - phi * state.mu_h;
        state.sigma_e_diag = (state.beta_mean + precision.array()).inverse().matrix();
        state.mu_e = (state.beta_mean * state.sigma_e_diag.array()).cast<cplx>() * residual.array();
    }

    void update_e(VIState &state, const CVector &y, const CMatrix &phi)
    {
        update_e_with_precision(state, y, phi, state.lambda_e_inv_mean);
    }

    void update_lambda_h(VIState &state, const Hyperparams &hp)
    {
        const RVector second_moment =
            state.sigma_h.diagonal().real() + state.mu_h.cwiseAbs2();
        state.lambda_h_shape = hp.a + 1.0;
        state.lambda_h_rate = (hp.b + second_moment.array()).matrix();
        state.lambda_h_mean = (state.lambda_h_shape / state.lambda_h_rate.array()).matrix();
    }

    void update_lambda_e(VIState &state)
    {
        const Index q = state.mu_e.size();
        state.lambda_e_energy_sqrt.resize(q);
        state.lambda_e_gamma = state.gamma_mean;
        state.lambda_e_mean.resize(q);
        state.lambda_e_inv_mean.resize(q);
        for (Index j = 0; j < q; ++j)
        {
            const double energy = state.sigma_e_diag[j] + std::norm(state.mu_e[j]);
            const double s = std::max(std::sqrt(energy), kInterferenceEnergyFloor);
            const double g = state.gamma_mean[j];
            const double sqrt_g = std::sqrt(g);
            state.lambda_e_energy_sqrt[j] = s;
            state.lambda_e_mean[j] = 2.0 * s / sqrt_g + 2.0 / g;
            state.lambda_e_inv_mean[j] = sqrt_g / (2.0 * s);
        }
    }

    void update_lambda_e_student_t(VIState &state, const Hyperparams &hp)
    {
        const RVector second_moment = state.sigma_e_diag + state.mu_e.cwiseAbs2();
        state.lambda_e_shape = hp.a + 1.0;
        state.lambda_e_rate = (hp.b + second_moment.array()).matrix();
        state.lambda_e_mean = (state.lambda_e_shape / state.lambda_e_rate.array()).matrix();
    }

    void update_gamma(VIState &state, const Hyperparams &hp)
    {
        state.gamma_shape = hp.a + 1.5;
        state.gamma_rate = (hp.b + 0.25 * state.lambda_e_mean.array()).matrix();
        state.gamma_mean = (state.gamma_shape / state.gamma_rate.array()).matrix();
    }

    double expected_residual_energy(const VIState &state, const CVector &y, const CMatrix &phi,
                                    const CMatrix &phi_gram)
    {
        const CVector r = y - phi * state.mu_h - state.mu_e;
        return r.squaredNorm() + kernels::trace_product_hermitian(phi_gram, state.sigma_h) +
               state.sigma_e_diag.sum();
    }

    void update_beta(VIState &state, const Hyperparams &hp, const CVector &y, const CMatrix &phi,
                     const CMatrix &phi_gram)
    {
        const double cb = expected_residual_energy(state, y, phi, phi_gram);
        state.beta_shape = hp.a + static_cast<double>(y.size());
        state.beta_rate = hp.b + cb;
        state.beta_mean = state.beta_shape / state.beta_rate;
    }

    VariationalEstimator::VariationalEstimator(CVector y, const CMatrix &phi, const CMatrix &phi_gram,
                                               Hyperparams hp, InterferencePrior prior)
        : y_(std::move(y)), phi_(&phi), phi_gram_(&phi_gram), hp_(hp), prior_(prior)
    {
        hp_.validate();
        if (phi.rows() != y_.size() || phi_gram.rows() != phi.cols() || phi_gram.cols() != phi.cols())
            throw std::invalid_argument("VariationalEstimator: dimension mismatch");
        state_ = init_state(hp_, phi.cols(), y_.size());
        if (prior_ == InterferencePrior::student_t)
        {
            // lambda_e is a precision here, initialized at its prior mean.
            state_.lambda_e_mean = RVector::Constant(y_.size(), hp_.a / hp_.b);
            state_.lambda_e_inv_mean = state_.lambda_e_mean.cwiseInverse();
        }
    }

    SweepDeltas VariationalEstimator::sweep()
    {
        const CVector previous_h = state_.mu_h;
        const CVector previous_e = state_.mu_e;
        ++iterations_;

        update_h(state_, y_, *phi_, *phi_gram_, iterations_);
        if (prior_ == InterferencePrior::adaptive_laplace)
        {
            update_e(state_, y_, *phi_);
            update_lambda_h(state_, hp_);
            update_lambda_e(state_);
            update_gamma(state_, hp_);
        }
        else
        {
            update_e_with_precision(state_, y_, *phi_, state_.lambda_e_mean);
            update_lambda_h(state_, hp_);
            update_lambda_e_student_t(state_, hp_);
        }
        update_beta(state_, hp_, y_, *phi_, *phi_gram_);

        return {(state_.mu_h - previous_h).norm(), (state_.mu_e - previous_e).norm()};
    }

    double VariationalEstimator::elbo() const
    {
        if (prior_ == InterferencePrior::adaptive_laplace)
            return compute_elbo(state_, y_, *phi_, *phi_gram_, hp_);
        return compute_elbo_student_t(state_, y_, *phi_, *phi_gram_, hp_);
    }

    EstimateResult run_variational(const SensingProblem &problem, const Hyperparams &hp, InterferencePrior prior,
                                   const TraceSink &trace)
    {
        hp.validate();
        const Index q = problem.y.size();
        double scale = 1.0;
        if (hp.normalize && q > 0)
        {
            const double power = problem.y.squaredNorm() / static_cast<double>(q);
            if (power > 0.0)
                scale = std::sqrt(power);
        }

        VariationalEstimator est(problem.y / scale, problem.phi, problem.phi_gram, hp, prior);
        EstimateResult out;
        for (int it = 0; it < hp.max_iters; ++it)
        {
            out.final_deltas = est.sweep();
            if (trace)
                trace({est.iterations(), out.final_deltas.mu_h, out.final_deltas.mu_e, est.state().beta_mean,
                       est.elbo()});
            if (out.final_deltas.mu_h < hp.eps_h && out.final_deltas.mu_e < hp.eps_e)
            {
                out.converged = true;
                break;
            }
        }
        out.iterations = est.iterations();
        out.angular_estimate = scale * est.state().mu_h;
        out.interference_estimate = scale * est.state().mu_e;
        const AngularChannel h{unvec(out.angular_estimate, problem.dict_rx.size(), problem.dict_tx.size())};
        out.dense_channel_estimate = angular_expand(h, problem.dict_rx, problem.dict_tx);
        return out;
    }
}
