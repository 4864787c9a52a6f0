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

#ifndef PRIVEX_SIM_HPP_
#define PRIVEX_SIM_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "privex/adabatch.hpp"
#include "privex/core.hpp"
#include "privex/ftpl.hpp"
#include "privex/meta.hpp"
#include "privex/privacy.hpp"

namespace privex::sim {

// Shared Monte Carlo configuration. Runs are sharded across workers with
// per-run derived seeds; every aggregate is a commutative sum, so results
// do not depend on the thread count.
struct McConfig {
  std::int64_t runs = 1;
  std::int64_t T = 1;
  int n = 2;
  double eta = 1.0;
  double alpha = 0.01;
  std::uint64_t master_seed = 0;
  std::shared_ptr<const GainStream> stream;  // null means all-zero
  int threads = 1;

  void validate() const;
  std::shared_ptr<const GainStream> effective_stream() const;
};

// round t -> (containing batch size -> frequency); frequencies at every
// round sum to `runs`.
struct EmpiricalPmf {
  std::map<std::int64_t, std::map<std::int64_t, std::int64_t>> counts;
  std::int64_t runs = 0;
};

// Replays RW-AdaBatch `runs` times and tallies, for each round, the size of
// the batch containing it. Flushed rounds use their flush batch; rounds
// still buffered at the horizon use the size their batch was scheduled with
// (the two agree for every batch that completes).
EmpiricalPmf mc_batch_pmf(const McConfig& cfg);

// Batch-size distribution observed at one round of the PMF.
BatchSizeDistribution pmf_round_distribution(const EmpiricalPmf& pmf,
                                             std::int64_t round);

// Amplified tradeoff curve implied by the empirical PMF at `round`.
TradeoffCurve empirical_tradeoff(const EmpiricalPmf& pmf, std::int64_t round,
                                 double mu);

struct LeaderChangeEstimate {
  double p_hat = 0.0;
  double ci99_half = 0.0;
  std::int64_t changes = 0;
  std::int64_t runs = 0;
};

// Gaussian random walks from the adversarial start (leader at 0, all
// challengers at -k); estimates the probability that the leader changes
// within walk_length steps. The Monte Carlo oracle for stability_bound.
LeaderChangeEstimate mc_leader_change(double k, double eta,
                                      std::int64_t walk_length, int n,
                                      std::int64_t runs,
                                      std::uint64_t master_seed = 0,
                                      int threads = 1);

// -- single-run drivers -------------------------------------------------------

struct AdaRunLogEntry {
  std::int64_t round = 0;
  int action = 0;
  std::int64_t delay_remaining = 0;
  bool flush = false;
  std::int64_t batch_size = 0;  // meaningful when flush
};

struct FtplRun {
  std::vector<int> actions;
  double algo_gain = 0.0;
  std::vector<double> column_gain;  // per-expert raw totals
};

struct AdaRun {
  std::vector<int> actions;
  double algo_gain = 0.0;
  std::vector<double> column_gain;
  std::vector<BatchRecord> batches;
  std::vector<AdaRunLogEntry> log;
  // containing_size[t-1] for t = 1..T (scheduled size for a trailing
  // unflushed batch).
  std::vector<std::int64_t> containing_size;
};

struct MetaRunLogEntry {
  std::int64_t round = 0;
  int chosen = 0;
  double sigma_sq = 0.0;
  double lambda_max = 0.0;
  std::vector<double> action;
};

struct MetaRun {
  std::vector<int> chosen;
  double algo_gain = 0.0;
  std::vector<double> learner_gain;  // per-learner raw totals
  std::vector<double> column_gain;
  MetaState final_state;
  std::vector<MetaRunLogEntry> log;
  double min_cov_eigenvalue = 0.0;  // most negative seen across rounds
};

// Provides the round-t noisy gain; lets callers swap in nonuniform noise.
using NoisyProvider = std::function<NoisyGainVector(std::int64_t)>;

FtplRun run_ftpl(const GainStream& raw, std::int64_t T, double eta,
                 std::uint64_t run_seed);
AdaRun run_adabatch(const GainStream& raw, std::int64_t T, double eta,
                    double alpha, std::uint64_t run_seed, bool keep_log = false,
                    bool use_spline = false,
                    const BoundInverse* inverse = nullptr,
                    bool force_delay_zero = false);
MetaRun run_meta(const GainStream& raw, std::int64_t T,
                 const LearnerSet& learners, double eta,
                 std::uint64_t run_seed, bool keep_log = false);
MetaRun run_meta_with_provider(const GainStream& raw, std::int64_t T,
                               const LearnerSet& learners,
                               const NoisyProvider& noisy, double eta,
                               std::uint64_t run_seed, bool keep_log = false);

// -- regret experiments ---------------------------------------------------------

enum class Algo { kFtpl, kAdaBatch, kMeta };
Algo parse_algo(const std::string& label);

struct RegretSummary {
  std::string algo;
  std::int64_t runs = 0;
  std::int64_t T = 0;
  int n = 0;
  double eta = 0.0;
  double alpha = 0.0;
  double mean = 0.0;  // static regret
  double se = 0.0;
  double max = 0.0;
  std::vector<double> per_run;
  // RW-Meta only: regret versus the best learner and the per-run bound.
  std::vector<double> per_run_vs_best_learner;
  double mean_vs_best_learner = 0.0;
  double se_vs_best_learner = 0.0;
  double mean_meta_bound = 0.0;
};

// Per-run static regret statistics. In paired mode the per-run seeds are
// algorithm-independent, so paired calls share initial perturbations and
// gain noise stream for stream-noise draws.
RegretSummary regret_experiment(Algo algo, const McConfig& cfg, bool paired,
                                const LearnerSet& learners = {});

double mean_of(const std::vector<double>& xs);
double stderr_of(const std::vector<double>& xs);

}  // namespace privex::sim

#endif  // PRIVEX_SIM_HPP_
