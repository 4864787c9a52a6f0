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

#include "privex/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <utility>

#include "privex/adabatch.hpp"
#include "privex/errors.hpp"
#include "privex/monotone_spline.hpp"
#include "privex/normal.hpp"
#include "privex/quadrature.hpp"

namespace privex {

namespace {

// Log-likelihood-ratio threshold grid: 2001 points on [-40, 40], cosine
// spacing concentrated near 0 so both the low-FPR tails and the knee of the
// curve are resolved.
std::vector<double> threshold_grid() {
  constexpr int kPoints = 2001;
  constexpr double kRange = 40.0;
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    const double u = -1.0 + 2.0 * i / (kPoints - 1);
    const double mag = 1.0 - std::cos(0.5 * std::numbers::pi * std::fabs(u));
    grid[i] = kRange * (u < 0.0 ? -mag : mag);
  }
  return grid;
}

void append_point(std::vector<TradeoffPoint>& pts, double alpha, double beta) {
  if (!pts.empty() && !(alpha > pts.back().alpha)) return;
  pts.push_back({alpha, beta});
}

}  // namespace

// -- TradeoffCurve ------------------------------------------------------------

TradeoffCurve TradeoffCurve::from_points(std::vector<TradeoffPoint> points,
                                         std::string label) {
  if (points.size() < 2) {
    throw InvalidInputError("TradeoffCurve: need at least 2 points");
  }
  double prev_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.alpha >= 0.0) || !(p.alpha <= 1.0)) {
      throw InvalidInputError("TradeoffCurve: alpha outside [0, 1]");
    }
    if (!(p.beta >= -1e-12) || !(p.beta <= 1.0 + 1e-9)) {
      throw InvalidInputError("TradeoffCurve: beta outside [0, 1]");
    }
    if (i > 0) {
      const auto& q = points[i - 1];
      if (!(p.alpha > q.alpha)) {
        throw InvalidInputError("TradeoffCurve: alpha not strictly increasing");
      }
      if (p.beta > q.beta + 1e-12) {
        throw InvalidInputError("TradeoffCurve: beta not nonincreasing");
      }
      const double slope = (p.beta - q.beta) / (p.alpha - q.alpha);
      if (slope < prev_slope - 1e-9 * (1.0 + std::fabs(prev_slope))) {
        throw InvalidInputError("TradeoffCurve: envelope not convex");
      }
      prev_slope = slope;
    }
  }
  return TradeoffCurve(std::move(points), std::move(label));
}

double TradeoffCurve::beta_at(double alpha) const {
  if (alpha <= points_.front().alpha) return points_.front().beta;
  if (alpha >= points_.back().alpha) return points_.back().beta;
  const auto it = std::lower_bound(
      points_.begin(), points_.end(), alpha,
      [](const TradeoffPoint& p, double a) { return p.alpha < a; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (alpha - lo.alpha) / (hi.alpha - lo.alpha);
  return lo.beta + w * (hi.beta - lo.beta);
}

void TradeoffCurve::write_csv(std::ostream& out) const {
  out << "alpha,beta\n";
  char buf[80];
  for (const auto& p : points_) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.alpha, p.beta);
    out << buf;
  }
}

// -- BatchSizeDistribution ----------------------------------------------------

BatchSizeDistribution BatchSizeDistribution::checked(
    std::map<std::int64_t, double> weights, std::int64_t b_max) {
  if (b_max < 1) throw InvalidInputError("BatchSizeDistribution: b_max >= 1");
  double sum = 0.0;
  for (const auto& [b, w] : weights) {
    if (b < 1 || b > b_max) {
      throw InvalidInputError(
          "BatchSizeDistribution: batch size outside {1..b_max}");
    }
    if (!(w >= 0.0)) {
      throw InvalidInputError("BatchSizeDistribution: negative weight");
    }
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "BatchSizeDistribution: weights sum to " << sum << ", not 1";
    throw InvalidInputError(msg.str());
  }
  return BatchSizeDistribution{std::move(weights), b_max};
}

BatchSizeDistribution BatchSizeDistribution::point_mass(std::int64_t b) {
  if (b < 1) throw InvalidInputError("point_mass: b >= 1");
  return BatchSizeDistribution{{{b, 1.0}}, b};
}

double BatchSizeDistribution::survival(std::int64_t b) const {
  double s = 0.0;
  for (const auto& [size, w] : weights) {
    if (size > b) s += w;
  }
  return s;
}

// -- Gaussian tradeoff ----------------------------------------------------------

GapLawParams GapLawParams::checked(int n, double scale) {
  if (n < 2) throw InvalidInputError("GapLawParams: n >= 2");
  if (!(scale > 0.0)) throw InvalidInputError("GapLawParams: scale > 0");
  return GapLawParams{n, scale};
}

double gaussian_beta(double mu, double alpha) {
  if (!(mu >= 0.0)) throw InvalidInputError("gaussian_beta: mu >= 0");
  if (!(alpha >= 0.0) || !(alpha <= 1.0)) {
    throw InvalidInputError("gaussian_beta: alpha in [0, 1]");
  }
  if (alpha >= 1.0) return 0.0;
  if (alpha <= 0.0) return 1.0;
  return norm_cdf(norm_ppf(1.0 - alpha) - mu);
}

TradeoffCurve gaussian_tradeoff(double mu) {
  if (!(mu >= 0.0)) throw InvalidInputError("gaussian_tradeoff: mu >= 0");
  std::ostringstream label;
  label << "gaussian_mu=" << mu;
  if (mu == 0.0) {
    std::vector<TradeoffPoint> pts;
    constexpr int kPoints = 2001;
    pts.reserve(kPoints);
    for (int i = 0; i < kPoints; ++i) {
      const double a = static_cast<double>(i) / (kPoints - 1);
      pts.push_back({a, 1.0 - a});
    }
    return TradeoffCurve::from_points(std::move(pts), label.str());
  }
  return amplified_tradeoff(BatchSizeDistribution::point_mass(1), mu);
}

// -- worst-case gap law ---------------------------------------------------------

double gap_cdf(double eps, const GapLawParams& params) {
  GapLawParams::checked(params.n, params.scale);
  if (!(eps >= 0.0)) throw InvalidInputError("gap_cdf: eps >= 0");
  const double e = eps / params.scale;
  const double n = params.n;
  const auto integrand = [&](double x) {
    return n * norm_pdf(x) * std::pow(norm_cdf(x - e), params.n - 1);
  };
  const double integral =
      integrate(integrand, -12.0, 12.0 + e, {.abs_tol = 1e-10});
  return std::clamp(1.0 - integral, 0.0, 1.0);
}

double gap_pdf(double eps, const GapLawParams& params) {
  GapLawParams::checked(params.n, params.scale);
  if (!(eps >= 0.0)) throw InvalidInputError("gap_pdf: eps >= 0");
  const double e = eps / params.scale;
  const double factor =
      static_cast<double>(params.n) * (params.n - 1) / params.scale;
  const auto integrand = [&](double x) {
    return factor * norm_pdf(x) * norm_pdf(x - e) *
           std::pow(norm_cdf(x - e), params.n - 2);
  };
  return std::max(0.0, integrate(integrand, -12.0, 12.0 + e,
                                 {.abs_tol = 1e-10}));
}

// -- batch threshold and proxy distribution -------------------------------------

BatchThreshold batch_threshold(std::int64_t t, std::int64_t B, double eta,
                               int n, double alpha) {
  if (t < 1) throw InvalidInputError("batch_threshold: t >= 1");
  if (B < 1) throw InvalidInputError("batch_threshold: B >= 1");
  if (!(eta > 0.0)) throw InvalidInputError("batch_threshold: eta > 0");
  if (n < 2) throw InvalidInputError("batch_threshold: n >= 2");
  if (!(alpha > 0.0)) throw InvalidInputError("batch_threshold: alpha > 0");

  const auto feasible = [&](double k) {
    return compute_delay(k, eta, n, alpha, t) > B + 1;
  };

  const double e_term = std::sqrt(std::log(2.0 * n - 2.0));
  const double cap = static_cast<double>(B + 2) +
                     eta * std::sqrt(2.0 * static_cast<double>(B + 2)) *
                         (e_term + 80.0) +
                     10.0 * eta;
  const double step = 1e-6 * std::max(1.0, eta);

  double lo = 0.0;
  if (feasible(lo)) return {0.0, step, false};
  if (!feasible(cap)) return {cap, step, true};
  double hi = cap;
  while (hi - lo > step) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {hi, step, false};
}

namespace {

// Unit-scale gap density cache per dimension; the proxy integrals hit it
// thousands of times per batch size.
const MonotoneCubicSpline& unit_gap_pdf_table(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<MonotoneCubicSpline>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    constexpr double kMaxE = 50.0;
    constexpr int kKnots = 4001;
    std::vector<double> xs(kKnots), ys(kKnots);
    const GapLawParams unit{n, 1.0};
    for (int i = 0; i < kKnots; ++i) {
      xs[i] = kMaxE * i / (kKnots - 1);
      ys[i] = gap_pdf(xs[i], unit);
    }
    it = cache
             .emplace(n, std::make_unique<MonotoneCubicSpline>(std::move(xs),
                                                               std::move(ys)))
             .first;
  }
  return *it->second;
}

}  // namespace

BatchSizeDistribution proxy_batch_distribution(std::int64_t t, double eta,
                                               int n, double alpha, double mu,
                                               std::int64_t b_max) {
  if (t < 1) throw InvalidInputError("proxy_batch_distribution: t >= 1");
  if (!(eta > 0.0)) throw InvalidInputError("proxy_batch_distribution: eta > 0");
  if (n < 2) throw InvalidInputError("proxy_batch_distribution: n >= 2");
  if (!(alpha > 0.0)) {
    throw InvalidInputError("proxy_batch_distribution: alpha > 0");
  }
  if (!(mu > 0.0)) throw InvalidInputError("proxy_batch_distribution: mu > 0");
  if (b_max < 1) throw InvalidInputError("proxy_batch_distribution: b_max >= 1");

  // Per-coordinate scale of the cumulative estimate at round t; pairwise
  // coordinate differences then carry scale eta*sqrt(2t).
  const double scale = eta * std::sqrt(static_cast<double>(t));
  const MonotoneCubicSpline& pdf_unit = unit_gap_pdf_table(n);
  const double support_end = scale * 50.0;

  // survival[b] lower-bounds P[containing batch size > b], b = 1..b_max.
  std::vector<double> survival(static_cast<std::size_t>(b_max) + 1, 0.0);
  double prev = 1.0;
  for (std::int64_t b = 2; b <= b_max; ++b) {
    const std::int64_t window = b - 1;
    const BatchThreshold th = batch_threshold(t, window, eta, n, alpha);
    double lb = 0.0;
    if (!th.saturated && th.kappa < support_end) {
      const auto integrand = [&](double u) {
        const double stay =
            1.0 - stability_bound({u, th.kappa, eta, window, n});
        if (stay <= 0.0) return 0.0;
        return pdf_unit(u / scale) / scale * stay;
      };
      lb = integrate(integrand, th.kappa, support_end, {.abs_tol = 1e-9});
    }
    prev = std::clamp(lb, 0.0, prev);
    survival[static_cast<std::size_t>(b)] = prev;
    if (th.saturated || prev < 1e-14) break;  // later sizes only shrink
  }
  survival[1] = (b_max >= 2) ? survival[2] : 0.0;

  std::map<std::int64_t, double> weights;
  double acc = 0.0;
  for (std::int64_t b = 1; b < b_max; ++b) {
    const double prev_s = (b == 1) ? 1.0 : survival[static_cast<std::size_t>(b) - 1];
    const double w = prev_s - survival[static_cast<std::size_t>(b)];
    if (w > 0.0) weights[b] = w;
    acc += w;
  }
  // Tail mass truncates down onto b_max.
  const double tail = (b_max >= 2) ? survival[static_cast<std::size_t>(b_max) - 1]
                                   : 1.0;
  if (tail > 0.0) weights[b_max] = tail;
  acc += tail;
  if (std::fabs(acc - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "proxy_batch_distribution: mass telescoped to " << acc;
    throw InternalError(msg.str());
  }
  // Absorb float dust into batch size 1 so the invariant is exact.
  weights[1] += 1.0 - acc;
  if (weights[1] <= 0.0) weights.erase(1);
  return BatchSizeDistribution::checked(std::move(weights), b_max);
}

// -- mixture curve and dual ------------------------------------------------------

double mixture_alpha(const BatchSizeDistribution& dist, double mu,
                     double thresh) {
  double a = 0.0;
  for (const auto& [b, w] : dist.weights) {
    if (w == 0.0) continue;
    const double rb = std::sqrt(static_cast<double>(b));
    a += w * norm_cdf(-thresh * rb / mu - mu / (2.0 * rb));
  }
  return a;
}

double mixture_beta(const BatchSizeDistribution& dist, double mu,
                    double thresh) {
  double v = 0.0;
  for (const auto& [b, w] : dist.weights) {
    if (w == 0.0) continue;
    const double rb = std::sqrt(static_cast<double>(b));
    v += w * norm_cdf(thresh * rb / mu - mu / (2.0 * rb));
  }
  return v;
}

TradeoffCurve amplified_tradeoff(const BatchSizeDistribution& dist,
                                 double mu) {
  if (!(mu > 0.0)) throw InvalidInputError("amplified_tradeoff: mu > 0");
  BatchSizeDistribution::checked(dist.weights, dist.b_max);

  const std::vector<double> grid = threshold_grid();
  std::vector<TradeoffPoint> pts;
  pts.reserve(grid.size() + 2);
  // Sweep thresholds high to low so alpha ascends.
  for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
    append_point(pts, mixture_alpha(dist, mu, *it),
                 mixture_beta(dist, mu, *it));
  }
  if (pts.empty() || pts.front().alpha > 0.0) {
    pts.insert(pts.begin(), {0.0, 1.0});
  }
  if (pts.back().alpha < 1.0) {
    pts.push_back({1.0, 0.0});
  }
  std::ostringstream label;
  label << "amplified_mu=" << mu << "_bmax=" << dist.b_max;
  return TradeoffCurve::from_points(std::move(pts), label.str());
}

double to_approx_dp(const BatchSizeDistribution& dist, double mu, double eps) {
  if (!(mu > 0.0)) throw InvalidInputError("to_approx_dp: mu > 0");
  if (!(eps >= 0.0)) throw InvalidInputError("to_approx_dp: eps >= 0");
  // delta = 1 - e^eps alpha(eps) - beta(eps) at the optimal threshold
  // t = eps; e^eps alpha is assembled in log space per component so large
  // eps cannot overflow.
  double escaled = 0.0;
  for (const auto& [b, w] : dist.weights) {
    if (w == 0.0) continue;
    const double rb = std::sqrt(static_cast<double>(b));
    escaled += w * std::exp(eps + log_norm_cdf(-eps * rb / mu - mu / (2.0 * rb)));
  }
  const double delta = 1.0 - escaled - mixture_beta(dist, mu, eps);
  return std::clamp(delta, 0.0, 1.0);
}

double heuristic_amplification(std::int64_t t, int n, double alpha,
                               double gamma) {
  if (t < 2) throw InvalidInputError("heuristic_amplification: t >= 2");
  if (n < 2) throw InvalidInputError("heuristic_amplification: n >= 2");
  if (!(alpha > 0.0)) {
    throw InvalidInputError("heuristic_amplification: alpha > 0");
  }
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    throw InvalidInputError("heuristic_amplification: gamma in (0, 1)");
  }
  const double td = static_cast<double>(t);
  const double den = std::sqrt(2.0 * std::log(2.0 * n - 2.0)) +
                     std::sqrt(2.0 * std::log(1.0 / alpha) +
                               std::log(td / std::log(n)));
  return gamma * gamma * std::numbers::pi * td / (den * den);
}

void write_distribution_json(std::ostream& out,
                             const BatchSizeDistribution& dist) {
  out << "{";
  char buf[64];
  bool first = true;
  for (const auto& [b, w] : dist.weights) {
    std::snprintf(buf, sizeof buf, "%s\"%lld\":%.17g", first ? "" : ",",
                  static_cast<long long>(b), w);
    out << buf;
    first = false;
  }
  out << "}";
}

}  // namespace privex
