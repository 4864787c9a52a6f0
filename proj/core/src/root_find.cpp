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

#include "privex/root_find.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "privex/errors.hpp"

namespace privex {

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const RootFindOptions& opts) {
  if (!(lo <= hi)) throw InvalidInputError("find_root: requires lo <= hi");
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream msg;
    msg << "find_root: no sign change on [" << lo << ", " << hi << "], f="
        << flo << " .. " << fhi;
    throw InvalidInputError(msg.str());
  }

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const double width = hi - lo;
    const double scale = std::max({1.0, std::fabs(lo), std::fabs(hi)});
    if (width <= opts.rel_tol * scale) {
      return 0.5 * (lo + hi);
    }
    // Secant proposal from the bracket endpoints; reject toward bisection if
    // it leaves the central 98% of the bracket.
    double x = lo - flo * width / (fhi - flo);
    if (!(x > lo + 0.01 * width) || !(x < hi - 0.01 * width)) {
      x = 0.5 * (lo + hi);
    }
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
  }
  std::ostringstream msg;
  msg << "find_root: no convergence after " << opts.max_iter
      << " iterations; bracket [" << lo << ", " << hi << "], f=" << flo
      << " .. " << fhi;
  throw InternalError(msg.str());
}

}  // namespace privex
