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

#ifndef PRIVEX_META_HPP_
#define PRIVEX_META_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "privex/core.hpp"

namespace privex {

// A data-dependent expert: a deterministic map from the noisy-gain history
// (rounds 1..t-1) to a point on the n-simplex. Learners never see raw
// gains, so selecting and acting on them is post-processing.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual const std::string& id() const = 0;
  virtual Eigen::VectorXd act(std::span<const NoisyGainVector> history,
                              int n) const = 0;
};

using LearnerSet = std::vector<std::shared_ptr<const Learner>>;

// RW-Meta bookkeeping: cumulative learner-gain estimate, its covariance
// Sigma, and the warm-start vector for the leading-eigenvalue solve.
struct MetaState {
  Eigen::VectorXd learner_estimate;  // length m
  Eigen::MatrixXd sigma_mat;         // m x m, symmetric PSD
  Eigen::VectorXd warm_eigvec;       // unit length
  std::int64_t t = 0;
};

// Sigma* = Sigma - (1'Sigma 1)/m^2 * 11'. Annihilates the all-ones
// component: 1' Sigma* 1 = 0.
Eigen::MatrixXd decorrelate(const Eigen::MatrixXd& sigma_mat);

struct EigenPair {
  double lambda_max = 0.0;
  Eigen::VectorXd eigvec;
};

// Largest (signed) eigenvalue of a symmetric matrix by shifted power
// iteration from the warm start. |lambda - true| <= 1e-8 (1 + |lambda|);
// the eigenvector is sign-normalized so its first nonzero entry is > 0.
EigenPair leading_eigenvalue(const Eigen::MatrixXd& mat,
                             const Eigen::VectorXd& warm);

// Mean-zero Gaussian with the given covariance via symmetric
// eigendecomposition. Eigenvalues in [-clamp_tol, 0) are treated as
// floating-point artifacts and clamped to zero; anything lower throws.
// clamp_tol < 0 selects the default 1e-8 * trace/m.
Eigen::VectorXd sample_correlated(const Eigen::MatrixXd& cov,
                                  const RoundSeed& seed,
                                  double clamp_tol = -1.0);

MetaState meta_init(int m, double eta, const RoundSeed& seed);

struct MetaStepResult {
  int chosen = 0;
  Eigen::VectorXd action;         // simplex point of the chosen learner
  Eigen::MatrixXd learner_actions;  // m x n; row i is learner i's suggestion
  MetaState next;
  // Diagnostics for run logs and invariant checks.
  double sigma_sq = 0.0;
  double lambda_max = 0.0;
  double min_cov_eigenvalue = 0.0;
};

// One round of RW-Meta: decorrelate Sigma, complete it to sigma^2 I with
// sigma^2 = max(2t, lambda_max(Sigma*)), perturb the learner estimate,
// follow the perturbed leader, then absorb X g_noisy and eta^2 X X'.
// Learners are evaluated once on `history` (rounds before this one) and
// reused for both the action and the update.
MetaStepResult meta_step(const MetaState& state, const LearnerSet& learners,
                         std::span<const NoisyGainVector> history,
                         const NoisyGainVector& g_noisy, double eta,
                         const RoundSeed& seed);

// Regret bound versus the best learner:
// [max(sqrt(2), eta * sqrt(lambda_max(Sigma*_T / (eta^2 T)))) + sqrt(2)]
//   * sqrt(2 T log m).
double meta_regret_bound(const Eigen::MatrixXd& sigma_star_T, double eta,
                         std::int64_t T, int m);

}  // namespace privex

#endif  // PRIVEX_META_HPP_
