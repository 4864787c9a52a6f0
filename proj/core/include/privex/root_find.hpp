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

#ifndef PRIVEX_ROOT_FIND_HPP_
#define PRIVEX_ROOT_FIND_HPP_

#include <functional>

namespace privex {

struct RootFindOptions {
  double rel_tol = 1e-9;
  int max_iter = 200;
};

// Finds a root of f on [lo, hi] where f(lo) and f(hi) have opposite signs
// (or either is zero). Secant steps inside a maintained bracket, falling
// back to bisection whenever the secant step stalls or escapes. Throws
// InvalidInputError if the bracket is bad and InternalError (with the final
// bracket in the message) if max_iter is exhausted.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const RootFindOptions& opts = {});

}  // namespace privex

#endif  // PRIVEX_ROOT_FIND_HPP_
