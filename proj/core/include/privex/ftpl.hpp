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

#ifndef PRIVEX_FTPL_HPP_
#define PRIVEX_FTPL_HPP_

#include <cstdint>
#include <utility>

#include "privex/core.hpp"

namespace privex {

// RW-FTPL: follow the leader of an initially perturbed running sum of noisy
// gains. The state is an explicit value so runs can pause, resume, and fork.
struct FtplState {
  CumulativeEstimate estimate;  // initial perturbation plus absorbed rounds
  std::int64_t t = 0;
};

// Fresh state whose estimate is a N(0, eta^2 I_n) draw.
FtplState ftpl_init(int n, double eta, const RoundSeed& seed);

struct FtplStepResult {
  int action = 0;
  FtplState next;
};

// Plays the current leader, then absorbs g_noisy into the estimate.
FtplStepResult ftpl_step(const FtplState& state,
                         const NoisyGainVector& g_noisy);

// Expected static regret bound: (eta + 2/eta) * sqrt(2 T log n).
double ftpl_regret_bound(double eta, std::int64_t T, int n);

}  // namespace privex

#endif  // PRIVEX_FTPL_HPP_
