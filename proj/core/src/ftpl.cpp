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

#include "privex/ftpl.hpp"

#include <cmath>

namespace privex {

FtplState ftpl_init(int n, double eta, const RoundSeed& seed) {
  if (n < 2) throw InvalidInputError("ftpl_init: n must be >= 2");
  if (!(eta > 0.0)) throw InvalidInputError("ftpl_init: eta must be > 0");
  CounterRng rng(seed);
  FtplState state;
  state.estimate.values.resize(static_cast<std::size_t>(n));
  for (auto& v : state.estimate.values) v = eta * rng.next_normal();
  state.estimate.t = 0;
  state.t = 0;
  return state;
}

FtplStepResult ftpl_step(const FtplState& state,
                         const NoisyGainVector& g_noisy) {
  if (g_noisy.n() != state.estimate.n()) {
    throw InvalidInputError("ftpl_step: dimension mismatch");
  }
  FtplStepResult result;
  result.action = argmax_tiebreak(state.estimate.values);
  result.next = state;
  for (std::size_t i = 0; i < g_noisy.values.size(); ++i) {
    result.next.estimate.values[i] += g_noisy.values[i];
  }
  result.next.t = state.t + 1;
  result.next.estimate.t = result.next.t;
  return result;
}

double ftpl_regret_bound(double eta, std::int64_t T, int n) {
  if (!(eta > 0.0)) throw InvalidInputError("ftpl_regret_bound: eta > 0");
  if (T < 1) throw InvalidInputError("ftpl_regret_bound: T >= 1");
  if (n < 2) throw InvalidInputError("ftpl_regret_bound: n >= 2");
  return (eta + 2.0 / eta) *
         std::sqrt(2.0 * static_cast<double>(T) * std::log(n));
}

}  // namespace privex
