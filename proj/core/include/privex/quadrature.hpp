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

#ifndef PRIVEX_QUADRATURE_HPP_
#define PRIVEX_QUADRATURE_HPP_

#include <functional>

namespace privex {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  int max_depth = 48;
};

// Adaptive Gauss-Kronrod (G7, K15) on [a, b]. Throws InternalError if the
// local error estimate cannot be driven below tolerance within max_depth
// bisections.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts = {});

}  // namespace privex

#endif  // PRIVEX_QUADRATURE_HPP_
