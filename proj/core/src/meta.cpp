// Copyright 2026 The Privex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "privex/meta.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace privex {

namespace {

void require_symmetric(const Eigen::MatrixXd& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw InvalidInputError(std::string(who) + ": matrix must be square");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    std::ostringstream msg;
    msg << who << ": matrix asymmetry " << asym << " exceeds tolerance";
    throw InvalidInputError(msg.str());
  }
}

// Sign convention: first entry with magnitude above tolerance is positive.
void sign_normalize(Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::fabs(v[i]) > 1e-14) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

Eigen::MatrixXd decorrelate(const Eigen::MatrixXd& sigma_mat) {
  require_symmetric(sigma_mat, "decorrelate");
  const auto m = sigma_mat.rows();
  const double total = sigma_mat.sum();  // 1' Sigma 1
  Eigen::MatrixXd out =
      sigma_mat -
      (total / static_cast<double>(m * m)) * Eigen::MatrixXd::Ones(m, m);
  out = 0.5 * (out + out.transpose().eval());
  return out;
}

EigenPair leading_eigenvalue(const Eigen::MatrixXd& mat,
                             const Eigen::VectorXd& warm) {
  require_symmetric(mat, "leading_eigenvalue");
  const auto m = mat.rows();
  if (warm.size() != m) {
    throw InvalidInputError("leading_eigenvalue: warm start has wrong size");
  }

  const double inf_norm = mat.cwiseAbs().rowwise().sum().maxCoeff();
  if (inf_norm == 0.0) {
    Eigen::VectorXd v = warm;
    if (v.norm() < 1e-300) v = Eigen::VectorXd::Unit(m, 0);
    v.normalize();
    sign_normalize(v);
    return {0.0, v};
  }

  // Shift so the largest signed eigenvalue becomes the largest in
  // magnitude; the shift is removed from the Rayleigh quotient at the end.
  const double shift = inf_norm;
  const Eigen::MatrixXd shifted =
      mat + shift * Eigen::MatrixXd::Identity(m, m);

  Eigen::VectorXd v = warm;
  if (v.norm() < 1e-300) v = Eigen::VectorXd::Unit(m, 0);
  v.normalize();

  const int max_iter = 1000;
  const double tol = 1e-10 * (1.0 + inf_norm);
  double lambda_shifted = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::VectorXd w = shifted * v;
    const double norm_w = w.norm();
    if (norm_w < 1e-300) {
      // Warm start fell in the kernel of the shifted matrix; restart from a
      // fixed direction.
      v = Eigen::VectorXd::Unit(m, iter % m);
      continue;
    }
    w /= norm_w;
    lambda_shifted = w.dot(shifted * w);
    const double residual = (shifted * w - lambda_shifted * w).norm();
    v = w;
    if (residual <= tol) {
      sign_normalize(v);
      return {lambda_shifted - shift, v};
    }
  }
  const double residual = (shifted * v - lambda_shifted * v).norm();
  std::ostringstream msg;
  msg << "leading_eigenvalue: no convergence after " << max_iter
      << " iterations, residual " << residual;
  throw InternalError(msg.str());
}

Eigen::VectorXd sample_correlated(const Eigen::MatrixXd& cov,
                                  const RoundSeed& seed, double clamp_tol) {
  require_symmetric(cov, "sample_correlated");
  const auto m = cov.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success) {
    throw InternalError("sample_correlated: eigendecomposition failed");
  }
  const double tol = (clamp_tol >= 0.0)
                         ? clamp_tol
                         : 1e-8 * std::max(0.0, cov.trace()) /
                               static_cast<double>(m);
  Eigen::VectorXd lambda = es.eigenvalues();
  for (Eigen::Index i = 0; i < m; ++i) {
    if (lambda[i] < -tol) {
      std::ostringstream msg;
      msg << "sample_correlated: eigenvalue " << lambda[i]
          << " below clamp threshold " << -tol;
      throw InternalError(msg.str());
    }
    lambda[i] = std::max(0.0, lambda[i]);
  }
  CounterRng rng(seed);
  Eigen::VectorXd z(m);
  for (Eigen::Index i = 0; i < m; ++i) z[i] = rng.next_normal();
  return es.eigenvectors() * (lambda.cwiseSqrt().asDiagonal() * z);
}

MetaState meta_init(int m, double eta, const RoundSeed& seed) {
  if (m < 1) throw InvalidInputError("meta_init: m >= 1");
  if (!(eta >= 0.0)) throw InvalidInputError("meta_init: eta >= 0");
  CounterRng rng(seed);
  MetaState state;
  state.learner_estimate.resize(m);
  for (int i = 0; i < m; ++i) state.learner_estimate[i] = eta * rng.next_normal();
  state.sigma_mat = eta * eta * Eigen::MatrixXd::Identity(m, m);
  state.warm_eigvec = Eigen::VectorXd::Constant(m, 1.0 / std::sqrt(m));
  state.t = 0;
  return state;
}

MetaStepResult meta_step(const MetaState& state, const LearnerSet& learners,
                         std::span<const NoisyGainVector> history,
                         const NoisyGainVector& g_noisy, double eta,
                         const RoundSeed& seed) {
  const int m = static_cast<int>(learners.size());
  const int n = g_noisy.n();
  if (m < 1) throw InvalidInputError("meta_step: need at least one learner");
  if (state.learner_estimate.size() != m) {
    throw InvalidInputError("meta_step: state/learner count mismatch");
  }

  const std::int64_t t = state.t + 1;  // 1-based round index

  const Eigen::MatrixXd sigma_star = decorrelate(state.sigma_mat);
  const EigenPair top = leading_eigenvalue(sigma_star, state.warm_eigvec);
  const double sigma_sq = std::max(2.0 * static_cast<double>(t), top.lambda_max);

  Eigen::MatrixXd perturb_cov =
      sigma_sq * Eigen::MatrixXd::Identity(m, m) - sigma_star;
  perturb_cov = 0.5 * (perturb_cov + perturb_cov.transpose().eval());

  // PSD holds by construction (sigma^2 >= lambda_max); anything below
  // -1e-8 sigma^2 is a real defect, not roundoff.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(perturb_cov);
  if (es.info() != Eigen::Success) {
    throw InternalError("meta_step: eigendecomposition failed");
  }
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -1e-8 * sigma_sq) {
    std::ostringstream msg;
    msg << "meta_step: perturbation covariance eigenvalue " << min_eig
        << " below -1e-8 * sigma^2 = " << -1e-8 * sigma_sq;
    throw InternalError(msg.str());
  }

  const Eigen::VectorXd y =
      sample_correlated(perturb_cov, seed, 1e-8 * sigma_sq);

  const Eigen::VectorXd perturbed = state.learner_estimate + y;
  const int chosen = argmax_tiebreak(
      std::span<const double>(perturbed.data(), perturbed.size()));

  // Evaluate every learner once on the committed history.
  Eigen::MatrixXd x_mat(m, n);
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd xi = learners[i]->act(history, n);
    if (xi.size() != n) {
      throw InvalidInputError("meta_step: learner '" + learners[i]->id() +
                              "' returned wrong dimension");
    }
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (xi[j] < -1e-9) {
        throw InvalidInputError("meta_step: learner '" + learners[i]->id() +
                                "' returned a negative weight");
      }
      sum += xi[j];
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
      throw InvalidInputError("meta_step: learner '" + learners[i]->id() +
                              "' output does not sum to 1");
    }
    x_mat.row(i) = xi;
  }

  const Eigen::Map<const Eigen::VectorXd> g_vec(g_noisy.values.data(), n);

  MetaStepResult result;
  result.chosen = chosen;
  result.action = x_mat.row(chosen);
  result.learner_actions = x_mat;
  result.sigma_sq = sigma_sq;
  result.lambda_max = top.lambda_max;
  result.min_cov_eigenvalue = min_eig;
  result.next.learner_estimate = state.learner_estimate + x_mat * g_vec;
  result.next.sigma_mat =
      state.sigma_mat + eta * eta * (x_mat * x_mat.transpose());
  result.next.sigma_mat =
      0.5 * (result.next.sigma_mat + result.next.sigma_mat.transpose().eval());
  result.next.warm_eigvec = top.eigvec;
  result.next.t = t;
  return result;
}

double meta_regret_bound(const Eigen::MatrixXd& sigma_star_T, double eta,
                         std::int64_t T, int m) {
  if (T < 1) throw InvalidInputError("meta_regret_bound: T >= 1");
  if (m < 2) throw InvalidInputError("meta_regret_bound: m >= 2");
  double data_term = std::sqrt(2.0);
  if (eta > 0.0) {
    const Eigen::VectorXd warm =
        Eigen::VectorXd::Constant(sigma_star_T.rows(),
                                  1.0 / std::sqrt(sigma_star_T.rows()));
    const double lambda =
        leading_eigenvalue(sigma_star_T, warm).lambda_max /
        (eta * eta * static_cast<double>(T));
    data_term = std::max(std::sqrt(2.0), eta * std::sqrt(std::max(0.0, lambda)));
  }
  return (data_term + std::sqrt(2.0)) *
         std::sqrt(2.0 * static_cast<double>(T) * std::log(m));
}

}  // namespace privex
