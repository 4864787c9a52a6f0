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

#ifndef PRIVEX_MONOTONE_SPLINE_HPP_
#define PRIVEX_MONOTONE_SPLINE_HPP_

#include <vector>

namespace privex {

// Monotone cubic Hermite interpolant (Fritsch-Carlson slope limiting).
// Knot values are reproduced exactly and the interpolant is monotone
// whenever the data are.
class MonotoneCubicSpline {
 public:
  MonotoneCubicSpline(std::vector<double> x, std::vector<double> y);

  // Evaluates the interpolant; clamps to the end values outside the knots.
  double operator()(double x) const;

  // Inverse query on monotone data: returns some x with spline(x) ~= y,
  // clamped to the knot range when y falls outside the data range.
  double solve(double y) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  double y_first() const { return y_.front(); }
  double y_last() const { return y_.back(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;  // Hermite tangents at the knots

  double eval_segment(std::size_t i, double x) const;
};

}  // namespace privex

#endif  // PRIVEX_MONOTONE_SPLINE_HPP_
