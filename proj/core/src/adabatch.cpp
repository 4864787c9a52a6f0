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

#include "privex/adabatch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "privex/ftpl.hpp"
#include "privex/normal.hpp"
#include "privex/root_find.hpp"

namespace privex {

namespace {

constexpr double kBetaShortCircuit = 38.0;

void validate_query(const StabilityQuery& q) {
  if (!(q.k >= 0.0) || !std::isfinite(q.k)) {
    throw InvalidInputError("stability_bound: k must be finite and >= 0");
  }
  if (!(q.kappa >= 0.0) || !std::isfinite(q.kappa)) {
    throw InvalidInputError("stability_bound: kappa must be finite and >= 0");
  }
  if (!(q.eta > 0.0)) throw InvalidInputError("stability_bound: eta > 0");
  if (q.walk_length < 1) {
    throw InvalidInputError("stability_bound: walk length must be >= 1");
  }
  if (q.n < 2) throw InvalidInputError("stability_bound: n must be >= 2");
}

}  // namespace

double stability_bound_at_beta(double beta) {
  if (beta <= 0.0) return 1.0;
  if (beta > kBetaShortCircuit) return 0.0;
  const double val =
      2.0 * norm_cdf(-std::numbers::sqrt2 * beta) +
      2.0 * std::sqrt(std::numbers::pi) * norm_pdf(beta) *
          (norm_cdf(beta) - norm_cdf(-beta));
  return std::min(1.0, val);
}

double stability_bound(const StabilityQuery& q) {
  validate_query(q);
  const double beta =
      (q.k - q.kappa) /
          (q.eta * std::sqrt(2.0 * static_cast<double>(q.walk_length))) -
      std::sqrt(std::log(2.0 * q.n - 2.0));
  return stability_bound_at_beta(beta);
}

double compute_delay_residual(double B, double k, double eta, int n,
                              double alpha, std::int64_t t) {
  const double e_term = std::sqrt(std::log(2.0 * n - 2.0));
  const double sqrt_b = std::sqrt(B);
  const double u1 =
      2.0 * norm_cdf((B - k) / (eta * sqrt_b) + std::numbers::sqrt2 * e_term);
  const double arg = (k - B) / (eta * std::numbers::sqrt2 * sqrt_b) - e_term;
  const double u2 = 2.0 * std::sqrt(std::numbers::pi) * norm_pdf(arg);
  const double u3 = norm_cdf(arg) - norm_cdf(-arg);
  const double delta_t =
      alpha * std::sqrt(std::log(n) / (static_cast<double>(t) + B));
  return u1 + u2 * u3 - delta_t;
}

std::int64_t compute_delay(double k, double eta, int n, double alpha,
                           std::int64_t t) {
  if (!(k >= 0.0) || !std::isfinite(k)) {
    throw InvalidInputError("compute_delay: k must be finite and >= 0");
  }
  if (!(eta > 0.0)) throw InvalidInputError("compute_delay: eta > 0");
  if (n < 2) throw InvalidInputError("compute_delay: n >= 2");
  if (!(alpha > 0.0)) throw InvalidInputError("compute_delay: alpha > 0");
  if (t < 1) throw InvalidInputError("compute_delay: t >= 1");

  if (k == 0.0) return 0;

  const auto residual = [&](double B) {
    return compute_delay_residual(B, k, eta, n, alpha, t);
  };

  const double lo = 1e-9;
  if (residual(lo) >= 0.0) return 0;

  const double cap = static_cast<double>(t) + 1e6;
  double hi = std::min(cap, std::max(2.0, k));
  while (residual(hi) <= 0.0) {
    if (hi >= cap) {
      // The tolerance schedule is satisfiable all the way to the cap.
      return static_cast<std::int64_t>(cap);
    }
    hi = std::min(cap, 2.0 * hi);
  }

  const double root = find_root(residual, lo, hi);
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(root)));
}

// -- BoundInverse -------------------------------------------------------------

BoundInverse::BoundInverse(double eta, int n, double alpha)
    : eta_(eta), n_(n), alpha_(alpha) {
  if (!(eta > 0.0)) throw InvalidInputError("BoundInverse: eta > 0");
  if (n < 2) throw InvalidInputError("BoundInverse: n >= 2");
  if (!(alpha > 0.0)) throw InvalidInputError("BoundInverse: alpha > 0");
  log_n_ = std::log(n);
  e_term_ = std::sqrt(std::log(2.0 * n - 2.0));

  // Dense knots where the bound bends, coarser in the deep tail. Raw
  // (unclamped) values so the inverse stays meaningful for targets > 1.
  const auto raw_bound = [](double beta) {
    return 2.0 * norm_cdf(-std::numbers::sqrt2 * beta) +
           2.0 * std::sqrt(std::numbers::pi) * norm_pdf(beta) *
               (norm_cdf(beta) - norm_cdf(-beta));
  };
  for (double b = -3.0; b < 6.0; b += 0.01) beta_knots_.push_back(b);
  for (double b = 6.0; b <= 39.0 + 1e-9; b += 0.1) beta_knots_.push_back(b);
  bound_knots_.reserve(beta_knots_.size());
  for (double b : beta_knots_) bound_knots_.push_back(raw_bound(b));
  spline_ = std::make_unique<MonotoneCubicSpline>(beta_knots_, bound_knots_);
}

double BoundInverse::bound_at(double beta) const { return (*spline_)(beta); }

double BoundInverse::beta_for(double target) const {
  return spline_->solve(target);
}

std::int64_t BoundInverse::delay(double k, std::int64_t t) const {
  if (!(k >= 0.0) || !std::isfinite(k)) {
    throw InvalidInputError("BoundInverse::delay: k must be finite and >= 0");
  }
  if (t < 1) throw InvalidInputError("BoundInverse::delay: t >= 1");
  if (k == 0.0) return 0;

  // Feasibility of batch B reads beta(B) >= beta_req(delta_t(B)); both sides
  // are monotone in B so the difference has a single sign change.
  const auto residual = [&](double B) {
    const double beta =
        (k - B) / (eta_ * std::numbers::sqrt2 * std::sqrt(B)) - e_term_;
    const double delta_t =
        alpha_ * std::sqrt(log_n_ / (static_cast<double>(t) + B));
    return beta_for(delta_t) - beta;
  };

  const double lo = 1e-9;
  if (residual(lo) >= 0.0) return 0;
  const double cap = static_cast<double>(t) + 1e6;
  double hi = std::min(cap, std::max(2.0, k));
  while (residual(hi) <= 0.0) {
    if (hi >= cap) return static_cast<std::int64_t>(cap);
    hi = std::min(cap, 2.0 * hi);
  }
  const double root = find_root(residual, lo, hi);
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(root)));
}

// -- state machine ------------------------------------------------------------

AdaBatchState adabatch_init(const AdaBatchConfig& cfg, const RoundSeed& seed) {
  if (cfg.n < 2) throw InvalidInputError("adabatch_init: n >= 2");
  if (!(cfg.eta > 0.0)) throw InvalidInputError("adabatch_init: eta > 0");
  if (!(cfg.alpha > 0.0)) throw InvalidInputError("adabatch_init: alpha > 0");
  CounterRng rng(seed);
  AdaBatchState state;
  state.estimate.values.resize(static_cast<std::size_t>(cfg.n));
  for (auto& v : state.estimate.values) v = cfg.eta * rng.next_normal();
  return state;
}

AdaBatchStepResult adabatch_step(const AdaBatchConfig& cfg,
                                 const AdaBatchState& state,
                                 const NoisyGainVector& g_noisy,
                                 const BoundInverse* inverse) {
  if (g_noisy.n() != state.estimate.n()) {
    throw InvalidInputError("adabatch_step: dimension mismatch");
  }
  AdaBatchStepResult result;
  result.action = argmax_tiebreak(state.estimate.values);
  result.next = state;
  AdaBatchState& next = result.next;
  next.t = state.t + 1;
  next.buffer.push_back(g_noisy);
  if (next.delay > 0) --next.delay;

  if (next.delay == 0) {
    for (const auto& buffered : next.buffer) {
      for (std::size_t i = 0; i < buffered.values.size(); ++i) {
        next.estimate.values[i] += buffered.values[i];
      }
    }
    result.flushed = BatchRecord{
        next.batch_start, static_cast<std::int64_t>(next.buffer.size())};
    next.buffer.clear();
    next.estimate.t = next.t;
    const double post_gap = gap(next.estimate.values);
    next.delay = (cfg.use_spline && inverse != nullptr)
                     ? inverse->delay(post_gap, next.t)
                     : compute_delay(post_gap, cfg.eta, cfg.n, cfg.alpha,
                                     next.t);
    next.batch_start = next.t + 1;
    result.scheduled_size = std::max<std::int64_t>(next.delay, 1);
  }
  return result;
}

double adabatch_regret_bound(double eta, std::int64_t T, int n, double alpha) {
  if (!(alpha > 0.0)) throw InvalidInputError("adabatch_regret_bound: alpha > 0");
  return (1.0 + alpha / 2.0) * ftpl_regret_bound(eta, T, n);
}

}  // namespace privex
