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

#include "privex/monotone_spline.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "privex/errors.hpp"

namespace privex {

MonotoneCubicSpline::MonotoneCubicSpline(std::vector<double> x,
                                         std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw InvalidInputError("MonotoneCubicSpline: need >= 2 matching knots");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw InvalidInputError(
          "MonotoneCubicSpline: knot abscissae must be strictly increasing");
    }
  }

  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }

  slope_.assign(n, 0.0);
  slope_[0] = delta[0];
  slope_[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      slope_[i] = 0.0;
    } else {
      // Weighted harmonic mean keeps the tangent inside the monotone region.
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  // Fritsch-Carlson limiting on the end tangents.
  for (std::size_t i : {std::size_t{0}, n - 1}) {
    const double d = (i == 0) ? delta[0] : delta[n - 2];
    if (d == 0.0) {
      slope_[i] = 0.0;
    } else if (slope_[i] / d < 0.0) {
      slope_[i] = 0.0;
    } else if (std::fabs(slope_[i]) > 3.0 * std::fabs(d)) {
      slope_[i] = 3.0 * d;
    }
  }
}

double MonotoneCubicSpline::eval_segment(std::size_t i, double x) const {
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] +
         h11 * h * slope_[i + 1];
}

double MonotoneCubicSpline::operator()(double x) const {
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  return eval_segment(i, x);
}

double MonotoneCubicSpline::solve(double y) const {
  const bool increasing = y_.back() >= y_.front();
  const double y_lo = increasing ? y_.front() : y_.back();
  const double y_hi = increasing ? y_.back() : y_.front();
  if (y <= y_lo) return increasing ? x_.front() : x_.back();
  if (y >= y_hi) return increasing ? x_.back() : x_.front();

  // Locate the containing segment by knot values, then bisect inside it.
  std::size_t lo = 0, hi = x_.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    const bool left = increasing ? (y_[mid] > y) : (y_[mid] < y);
    if (left) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  double a = x_[lo], b = x_[hi];
  for (int iter = 0; iter < 80 && (b - a) > 1e-14 * std::max(1.0, std::fabs(b));
       ++iter) {
    const double m = 0.5 * (a + b);
    const double v = eval_segment(lo, m);
    const bool left = increasing ? (v > y) : (v < y);
    if (left) {
      b = m;
    } else {
      a = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace privex
