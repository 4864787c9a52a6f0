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

#ifndef PRIVEX_ADABATCH_HPP_
#define PRIVEX_ADABATCH_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "privex/core.hpp"
#include "privex/monotone_spline.hpp"

namespace privex {

// Inputs to the random-walk stability bound: starting gap k, residual-gap
// threshold kappa, per-step noise scale eta, walk length B, dimension n.
struct StabilityQuery {
  double k = 0.0;
  double kappa = 0.0;
  double eta = 1.0;
  std::int64_t walk_length = 1;
  int n = 2;
};

// Upper bound on the probability that a Gaussian random walk started at gap
// k sees its gap dip below kappa within walk_length steps:
//   min(1, 2 Phi(-sqrt(2) beta) + 2 sqrt(pi) phi(beta) [Phi(beta) - Phi(-beta)])
// with beta = (k - kappa)/(eta sqrt(2B)) - sqrt(log(2n - 2)). Returns 1 when
// the bound is vacuous (k - kappa below the expected challenger maximum).
double stability_bound(const StabilityQuery& q);

// The bound above as a function of beta alone.
double stability_bound_at_beta(double beta);

// Largest batch size whose scheduled leader-change probability stays under
// the tolerance schedule alpha * sqrt(log n / (t + B)). The candidate gap is
// first discounted by the worst-case deterministic drift B (gains lie in
// [0,1]^n, so B rounds can close at most B of the gap). Root-finding is a
// bracketed secant/bisection hybrid on B in [0, t + 1e6] with relative
// tolerance 1e-9; the result is max(0, floor(root)).
std::int64_t compute_delay(double k, double eta, int n, double alpha,
                           std::int64_t t);

// The scheduling expression U1(B) + U2(B)*U3(B) - alpha*sqrt(log n/(t+B))
// whose root compute_delay floors. Exposed for feasibility checks.
double compute_delay_residual(double B, double k, double eta, int n,
                              double alpha, std::int64_t t);

// Precomputed monotone cubic interpolant of the stability bound over beta,
// supporting inverse queries. Speeds up delay computation; correctness
// tests always run the direct root-finder.
class BoundInverse {
 public:
  BoundInverse(double eta, int n, double alpha);

  double bound_at(double beta) const;
  double beta_for(double target) const;

  // Spline-accelerated equivalent of compute_delay.
  std::int64_t delay(double k, std::int64_t t) const;

  const std::vector<double>& knots() const { return beta_knots_; }
  const std::vector<double>& knot_values() const { return bound_knots_; }

 private:
  double eta_;
  int n_;
  double alpha_;
  double log_n_;
  double e_term_;  // sqrt(log(2n - 2))
  std::vector<double> beta_knots_;
  std::vector<double> bound_knots_;
  std::unique_ptr<MonotoneCubicSpline> spline_;
};

struct AdaBatchConfig {
  int n = 2;
  double eta = 1.0;
  double alpha = 0.01;
  // Off by default; the +-1 batch-size wobble of the interpolant must not
  // leak into conformance runs.
  bool use_spline = false;
};

// A flushed batch: 1-based round of its first element and its size.
struct BatchRecord {
  std::int64_t start = 0;
  std::int64_t size = 0;
};

struct AdaBatchState {
  CumulativeEstimate estimate;          // absorbed data only
  std::vector<NoisyGainVector> buffer;  // received, not yet absorbed
  std::int64_t delay = 0;               // rounds until next flush
  std::int64_t t = 0;
  std::int64_t batch_start = 1;  // first round of the current buffer
};

struct AdaBatchStepResult {
  int action = 0;
  AdaBatchState next;
  std::optional<BatchRecord> flushed;
  // Batch size scheduled at a flush (max(delay, 1)); the containing batch
  // size of every round in the upcoming buffer.
  std::optional<std::int64_t> scheduled_size;
};

// Same initial perturbation as ftpl_init, empty buffer, delay 0.
AdaBatchState adabatch_init(const AdaBatchConfig& cfg, const RoundSeed& seed);

// Plays the leader of the absorbed estimate, buffers g_noisy, and when the
// delay hits zero flushes the buffer and schedules the next batch via
// compute_delay on the post-flush gap.
AdaBatchStepResult adabatch_step(const AdaBatchConfig& cfg,
                                 const AdaBatchState& state,
                                 const NoisyGainVector& g_noisy,
                                 const BoundInverse* inverse = nullptr);

// (1 + alpha/2) times the RW-FTPL bound.
double adabatch_regret_bound(double eta, std::int64_t T, int n, double alpha);

}  // namespace privex

#endif  // PRIVEX_ADABATCH_HPP_
