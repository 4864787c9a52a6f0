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

#ifndef PRIVEX_PRIVACY_HPP_
#define PRIVEX_PRIVACY_HPP_

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace privex {

struct TradeoffPoint {
  double alpha = 0.0;  // false positive rate
  double beta = 0.0;   // minimal false negative rate
};

// A sampled f-DP tradeoff curve. Construction validates: alpha strictly
// increasing, beta nonincreasing, convex piecewise-linear envelope,
// beta(0) <= 1, beta(1) >= 0.
class TradeoffCurve {
 public:
  static TradeoffCurve from_points(std::vector<TradeoffPoint> points,
                                   std::string label);

  const std::vector<TradeoffPoint>& points() const { return points_; }
  const std::string& label() const { return label_; }

  // Linear interpolation along the piecewise-linear envelope. Chords of a
  // convex curve lie above it, so this never understates the bound.
  double beta_at(double alpha) const;

  // "alpha,beta" CSV rows.
  void write_csv(std::ostream& out) const;

 private:
  TradeoffCurve(std::vector<TradeoffPoint> points, std::string label)
      : points_(std::move(points)), label_(std::move(label)) {}

  std::vector<TradeoffPoint> points_;
  std::string label_;
};

// Probability mass over containing batch sizes {1..b_max}; the bridge from
// AdaBatch behavior to amplified privacy.
struct BatchSizeDistribution {
  std::map<std::int64_t, double> weights;
  std::int64_t b_max = 1;

  static BatchSizeDistribution checked(std::map<std::int64_t, double> weights,
                                       std::int64_t b_max);
  static BatchSizeDistribution point_mass(std::int64_t b);

  // P[size > b].
  double survival(std::int64_t b) const;
};

// Worst-case gap law of a coordinate-wise N(0, scale^2) vector.
struct GapLawParams {
  int n = 2;
  double scale = 1.0;

  static GapLawParams checked(int n, double scale);
};

// G_mu tradeoff curve: beta(alpha) = Phi(Phi^{-1}(1 - alpha) - mu), sampled
// on the standard threshold grid (exact closed form when mu = 0).
TradeoffCurve gaussian_tradeoff(double mu);

// Exact closed-form evaluation of the G_mu curve at one point.
double gaussian_beta(double mu, double alpha);

// CDF of the worst-case gap: F(eps) = 1 - n Int phi(x) Phi(x - e)^{n-1} dx
// with e = eps/scale. Absolute quadrature error <= 1e-9.
double gap_cdf(double eps, const GapLawParams& params);

// Density of the worst-case gap:
// f(eps) = n(n-1)/scale * Int phi(x) phi(x - e) Phi(x - e)^{n-2} dx.
double gap_pdf(double eps, const GapLawParams& params);

struct BatchThreshold {
  double kappa = 0.0;
  double grid_step = 0.0;
  // No gap below the search cap forces a batch larger than B+1 at this t.
  bool saturated = false;
};

// Smallest gap kappa such that compute_delay(kappa, eta, n, alpha, t)
// exceeds B+1, located by bisection on the monotone gap -> delay map.
BatchThreshold batch_threshold(std::int64_t t, std::int64_t B, double eta,
                               int n, double alpha);

// Proxy distribution over containing batch sizes at round t, stochastically
// smaller than the true law: survival at b is lower-bounded by
//   Int f_gap(k + kappa_B) (1 - stability_bound(k + kappa_B, kappa_B, B)) dk
// with B = b-1 and the worst-case gap law at per-coordinate scale
// eta*sqrt(t) (pairwise coordinate differences then have scale
// eta*sqrt(2t)). Unaccounted mass sits at batch size 1 and tail mass above
// b_max is truncated down to b_max; both directions only weaken the claimed
// amplification. mu is validated but does not influence the weights.
BatchSizeDistribution proxy_batch_distribution(std::int64_t t, double eta,
                                               int n, double alpha, double mu,
                                               std::int64_t b_max);

// Mixture log-likelihood-ratio test errors at threshold thresh, pairing
// batch size b with Gaussian level mu/sqrt(b):
//   alpha_b = Phi(-thresh sqrt(b)/mu - mu/(2 sqrt(b)))
//   beta_b  = Phi( thresh sqrt(b)/mu - mu/(2 sqrt(b)))
double mixture_alpha(const BatchSizeDistribution& dist, double mu,
                     double thresh);
double mixture_beta(const BatchSizeDistribution& dist, double mu,
                    double thresh);

// Amplified tradeoff curve of the batch-size mixture (joint-concavity
// bound), swept parametrically over the standard threshold grid.
TradeoffCurve amplified_tradeoff(const BatchSizeDistribution& dist, double mu);

// Dual (epsilon, delta) point of the mixture curve at the optimal
// threshold t = eps: delta = 1 - e^eps alpha(eps) - beta(eps), in [0, 1].
double to_approx_dp(const BatchSizeDistribution& dist, double mu, double eps);

// Closed-form heuristic for the amplification-ratio quantile,
//   r = gamma^2 pi t / (sqrt(2 log(2n-2)) +
//                       sqrt(2 log(1/alpha) + log(t / log n)))^2.
// Interpretation aid only; never used for accounting.
double heuristic_amplification(std::int64_t t, int n, double alpha,
                               double gamma);

// JSON export of a batch-size distribution: {"1": w1, "2": w2, ...}.
void write_distribution_json(std::ostream& out,
                             const BatchSizeDistribution& dist);

}  // namespace privex

#endif  // PRIVEX_PRIVACY_HPP_
