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

#include "privex/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace privex::sim {

namespace {

constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile

// Static sharding over run indices; the per-run seeds make the result
// independent of the shard layout.
void parallel_runs(std::int64_t runs, int threads,
                   const std::function<void(std::int64_t, int)>& body) {
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(runs)));
  if (workers == 1) {
    for (std::int64_t r = 0; r < runs; ++r) body(r, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::int64_t r = w; r < runs; r += workers) body(r, w);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

void McConfig::validate() const {
  if (runs < 1) throw InvalidInputError("McConfig: runs >= 1");
  if (T < 1) throw InvalidInputError("McConfig: T >= 1");
  if (n < 2) throw InvalidInputError("McConfig: n >= 2");
  if (!(eta > 0.0)) throw InvalidInputError("McConfig: eta > 0");
  if (!(alpha > 0.0)) throw InvalidInputError("McConfig: alpha > 0");
  if (stream && stream->n() != n) {
    throw InvalidInputError("McConfig: stream dimension != n");
  }
}

std::shared_ptr<const GainStream> McConfig::effective_stream() const {
  if (stream) return stream;
  return std::make_shared<ZeroStream>(n);
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double stderr_of(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / (static_cast<double>(n) * (n - 1)));
}

// -- single-run drivers ---------------------------------------------------------

FtplRun run_ftpl(const GainStream& raw, std::int64_t T, double eta,
                 std::uint64_t run_seed) {
  const int n = raw.n();
  FtplRun out;
  out.actions.reserve(static_cast<std::size_t>(T));
  out.column_gain.assign(static_cast<std::size_t>(n), 0.0);
  FtplState state = ftpl_init(n, eta, RoundSeed{run_seed, 0, "init"});
  for (std::int64_t t = 1; t <= T; ++t) {
    const GainVector g = raw.at(t);
    const NoisyGainVector noisy = gaussian_perturb(
        g, eta, RoundSeed{run_seed, static_cast<std::uint64_t>(t), "gain"});
    FtplStepResult step = ftpl_step(state, noisy);
    out.actions.push_back(step.action);
    out.algo_gain += g.values[static_cast<std::size_t>(step.action)];
    for (int i = 0; i < n; ++i) {
      out.column_gain[static_cast<std::size_t>(i)] +=
          g.values[static_cast<std::size_t>(i)];
    }
    state = std::move(step.next);
  }
  return out;
}

AdaRun run_adabatch(const GainStream& raw, std::int64_t T, double eta,
                    double alpha, std::uint64_t run_seed, bool keep_log,
                    bool use_spline, const BoundInverse* inverse,
                    bool force_delay_zero) {
  const int n = raw.n();
  AdaBatchConfig cfg{n, eta, alpha, use_spline};
  AdaRun out;
  out.actions.reserve(static_cast<std::size_t>(T));
  out.column_gain.assign(static_cast<std::size_t>(n), 0.0);
  out.containing_size.assign(static_cast<std::size_t>(T), 0);
  AdaBatchState state = adabatch_init(cfg, RoundSeed{run_seed, 0, "init"});
  for (std::int64_t t = 1; t <= T; ++t) {
    const GainVector g = raw.at(t);
    const NoisyGainVector noisy = gaussian_perturb(
        g, eta, RoundSeed{run_seed, static_cast<std::uint64_t>(t), "gain"});
    AdaBatchStepResult step = adabatch_step(cfg, state, noisy, inverse);
    if (force_delay_zero) {
      // Test hook: behave as if ComputeDelay always returned 0.
      if (step.flushed) {
        step.next.delay = 0;
        step.next.batch_start = t + 1;
        step.scheduled_size = 1;
      }
    }
    out.actions.push_back(step.action);
    out.algo_gain += g.values[static_cast<std::size_t>(step.action)];
    for (int i = 0; i < n; ++i) {
      out.column_gain[static_cast<std::size_t>(i)] +=
          g.values[static_cast<std::size_t>(i)];
    }
    if (step.flushed) {
      out.batches.push_back(*step.flushed);
      for (std::int64_t r = step.flushed->start;
           r < step.flushed->start + step.flushed->size; ++r) {
        out.containing_size[static_cast<std::size_t>(r - 1)] =
            step.flushed->size;
      }
    }
    if (keep_log) {
      out.log.push_back({t, step.action, step.next.delay,
                         step.flushed.has_value(),
                         step.flushed ? step.flushed->size : 0});
    }
    state = std::move(step.next);
  }
  // Rounds still buffered at the horizon keep the size their batch was
  // scheduled with: buffered so far plus the remaining delay.
  if (state.batch_start <= T) {
    const std::int64_t scheduled =
        (T - state.batch_start + 1) + state.delay;
    for (std::int64_t r = state.batch_start; r <= T; ++r) {
      out.containing_size[static_cast<std::size_t>(r - 1)] = scheduled;
    }
  }
  return out;
}

MetaRun run_meta_with_provider(const GainStream& raw, std::int64_t T,
                               const LearnerSet& learners,
                               const NoisyProvider& noisy, double eta,
                               std::uint64_t run_seed, bool keep_log) {
  const int n = raw.n();
  const int m = static_cast<int>(learners.size());
  if (m < 1) throw InvalidInputError("run_meta: need at least one learner");
  MetaRun out;
  out.chosen.reserve(static_cast<std::size_t>(T));
  out.learner_gain.assign(static_cast<std::size_t>(m), 0.0);
  out.column_gain.assign(static_cast<std::size_t>(n), 0.0);
  out.min_cov_eigenvalue = 0.0;

  MetaState state = meta_init(m, eta, RoundSeed{run_seed, 0, "meta_init"});
  std::vector<NoisyGainVector> history;
  history.reserve(static_cast<std::size_t>(T));
  for (std::int64_t t = 1; t <= T; ++t) {
    const GainVector g = raw.at(t);
    const NoisyGainVector g_noisy = noisy(t);
    MetaStepResult step = meta_step(
        state, learners, history, g_noisy, eta,
        RoundSeed{run_seed, static_cast<std::uint64_t>(t), "meta_y"});
    out.chosen.push_back(step.chosen);
    out.min_cov_eigenvalue =
        std::min(out.min_cov_eigenvalue, step.min_cov_eigenvalue);

    // Raw-gain scoring: the chosen learner's suggestion and every
    // learner's standalone suggestion, all from the same noisy history.
    const Eigen::Map<const Eigen::VectorXd> g_raw(g.values.data(), n);
    out.algo_gain += step.action.dot(g_raw);
    const Eigen::VectorXd per_learner = step.learner_actions * g_raw;
    for (int i = 0; i < m; ++i) {
      out.learner_gain[static_cast<std::size_t>(i)] += per_learner[i];
    }
    for (int i = 0; i < n; ++i) {
      out.column_gain[static_cast<std::size_t>(i)] +=
          g.values[static_cast<std::size_t>(i)];
    }
    if (keep_log) {
      MetaRunLogEntry entry;
      entry.round = t;
      entry.chosen = step.chosen;
      entry.sigma_sq = step.sigma_sq;
      entry.lambda_max = step.lambda_max;
      entry.action.assign(step.action.data(), step.action.data() + n);
      out.log.push_back(std::move(entry));
    }
    history.push_back(g_noisy);
    state = std::move(step.next);
  }
  out.final_state = std::move(state);
  return out;
}

MetaRun run_meta(const GainStream& raw, std::int64_t T,
                 const LearnerSet& learners, double eta,
                 std::uint64_t run_seed, bool keep_log) {
  const NoisyProvider provider = [&raw, eta, run_seed](std::int64_t t) {
    const GainVector g = raw.at(t);
    if (eta == 0.0) return NoisyGainVector{g.values, 0.0};
    return gaussian_perturb(
        g, eta, RoundSeed{run_seed, static_cast<std::uint64_t>(t), "gain"});
  };
  return run_meta_with_provider(raw, T, learners, provider, eta, run_seed,
                                keep_log);
}

// -- Monte Carlo aggregates -------------------------------------------------------

EmpiricalPmf mc_batch_pmf(const McConfig& cfg) {
  cfg.validate();
  const auto stream = cfg.effective_stream();
  const int workers =
      std::max(1, std::min<int>(cfg.threads, static_cast<int>(cfg.runs)));
  std::vector<EmpiricalPmf> partial(static_cast<std::size_t>(workers));

  parallel_runs(cfg.runs, workers, [&](std::int64_t run, int worker) {
    const std::uint64_t run_seed =
        derive_seed(cfg.master_seed, static_cast<std::uint64_t>(run), "mc_run");
    const AdaRun result =
        run_adabatch(*stream, cfg.T, cfg.eta, cfg.alpha, run_seed);
    auto& counts = partial[static_cast<std::size_t>(worker)].counts;
    for (std::int64_t t = 1; t <= cfg.T; ++t) {
      ++counts[t][result.containing_size[static_cast<std::size_t>(t - 1)]];
    }
  });

  EmpiricalPmf pmf;
  pmf.runs = cfg.runs;
  for (const auto& part : partial) {
    for (const auto& [round, sizes] : part.counts) {
      for (const auto& [size, count] : sizes) {
        pmf.counts[round][size] += count;
      }
    }
  }
  return pmf;
}

BatchSizeDistribution pmf_round_distribution(const EmpiricalPmf& pmf,
                                             std::int64_t round) {
  const auto it = pmf.counts.find(round);
  if (it == pmf.counts.end()) {
    std::ostringstream msg;
    msg << "empirical PMF has no data at round " << round;
    throw InvalidInputError(msg.str());
  }
  std::map<std::int64_t, double> weights;
  std::int64_t total = 0;
  std::int64_t b_max = 1;
  for (const auto& [size, count] : it->second) {
    total += count;
    b_max = std::max(b_max, size);
  }
  for (const auto& [size, count] : it->second) {
    weights[size] = static_cast<double>(count) / static_cast<double>(total);
  }
  // Compensate accumulated rounding so the distribution validates exactly.
  double sum = 0.0;
  for (const auto& [size, w] : weights) sum += w;
  weights.begin()->second += 1.0 - sum;
  return BatchSizeDistribution::checked(std::move(weights), b_max);
}

TradeoffCurve empirical_tradeoff(const EmpiricalPmf& pmf, std::int64_t round,
                                 double mu) {
  return amplified_tradeoff(pmf_round_distribution(pmf, round), mu);
}

LeaderChangeEstimate mc_leader_change(double k, double eta,
                                      std::int64_t walk_length, int n,
                                      std::int64_t runs,
                                      std::uint64_t master_seed, int threads) {
  if (!(k >= 0.0)) throw InvalidInputError("mc_leader_change: k >= 0");
  if (!(eta > 0.0)) throw InvalidInputError("mc_leader_change: eta > 0");
  if (walk_length < 1) throw InvalidInputError("mc_leader_change: B >= 1");
  if (n < 2) throw InvalidInputError("mc_leader_change: n >= 2");
  if (runs < 1) throw InvalidInputError("mc_leader_change: runs >= 1");

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(runs)));
  std::vector<std::int64_t> changes(static_cast<std::size_t>(workers), 0);

  parallel_runs(runs, workers, [&](std::int64_t run, int worker) {
    CounterRng rng(
        RoundSeed{master_seed, static_cast<std::uint64_t>(run), "mc_walk"});
    // Leader starts at 0, every challenger at -k (the adversarial start
    // consistent with the union bound).
    std::vector<double> walk(static_cast<std::size_t>(n), -k);
    walk[0] = 0.0;
    for (std::int64_t step = 0; step < walk_length; ++step) {
      bool changed = false;
      for (auto& coord : walk) coord += eta * rng.next_normal();
      for (std::size_t i = 1; i < walk.size(); ++i) {
        if (walk[i] > walk[0]) {
          changed = true;
          break;
        }
      }
      if (changed) {
        ++changes[static_cast<std::size_t>(worker)];
        break;
      }
    }
  });

  LeaderChangeEstimate est;
  est.runs = runs;
  for (std::int64_t c : changes) est.changes += c;
  est.p_hat = static_cast<double>(est.changes) / static_cast<double>(runs);
  est.ci99_half =
      kZ99 * std::sqrt(est.p_hat * (1.0 - est.p_hat) /
                       static_cast<double>(runs));
  return est;
}

Algo parse_algo(const std::string& label) {
  if (label == "ftpl") return Algo::kFtpl;
  if (label == "adabatch") return Algo::kAdaBatch;
  if (label == "meta") return Algo::kMeta;
  throw InvalidInputError("unknown algorithm label: " + label);
}

RegretSummary regret_experiment(Algo algo, const McConfig& cfg, bool paired,
                                const LearnerSet& learners) {
  cfg.validate();
  if (algo == Algo::kMeta && learners.empty()) {
    throw InvalidInputError("regret_experiment: meta requires learners");
  }
  const auto stream = cfg.effective_stream();

  RegretSummary summary;
  summary.algo = (algo == Algo::kFtpl)       ? "ftpl"
                 : (algo == Algo::kAdaBatch) ? "adabatch"
                                             : "meta";
  summary.runs = cfg.runs;
  summary.T = cfg.T;
  summary.n = cfg.n;
  summary.eta = cfg.eta;
  summary.alpha = cfg.alpha;
  summary.per_run.resize(static_cast<std::size_t>(cfg.runs));
  if (algo == Algo::kMeta) {
    summary.per_run_vs_best_learner.resize(static_cast<std::size_t>(cfg.runs));
  }
  std::vector<double> bounds(
      algo == Algo::kMeta ? static_cast<std::size_t>(cfg.runs) : 0);

  // Paired mode derives seeds without the algorithm label, so every
  // algorithm replays the same initial perturbation and noise stream.
  const std::string seed_label =
      paired ? "paired_run" : ("run_" + summary.algo);

  parallel_runs(cfg.runs, cfg.threads, [&](std::int64_t run, int) {
    const std::uint64_t run_seed = derive_seed(
        cfg.master_seed, static_cast<std::uint64_t>(run), seed_label);
    double algo_gain = 0.0;
    std::vector<double> column_gain;
    if (algo == Algo::kFtpl) {
      FtplRun r = run_ftpl(*stream, cfg.T, cfg.eta, run_seed);
      algo_gain = r.algo_gain;
      column_gain = std::move(r.column_gain);
    } else if (algo == Algo::kAdaBatch) {
      AdaRun r = run_adabatch(*stream, cfg.T, cfg.eta, cfg.alpha, run_seed);
      algo_gain = r.algo_gain;
      column_gain = std::move(r.column_gain);
    } else {
      MetaRun r = run_meta(*stream, cfg.T, learners, cfg.eta, run_seed);
      algo_gain = r.algo_gain;
      column_gain = std::move(r.column_gain);
      const double best_learner =
          *std::max_element(r.learner_gain.begin(), r.learner_gain.end());
      summary.per_run_vs_best_learner[static_cast<std::size_t>(run)] =
          best_learner - algo_gain;
      bounds[static_cast<std::size_t>(run)] = meta_regret_bound(
          decorrelate(r.final_state.sigma_mat), cfg.eta, cfg.T,
          static_cast<int>(learners.size()));
    }
    const double best_static =
        *std::max_element(column_gain.begin(), column_gain.end());
    summary.per_run[static_cast<std::size_t>(run)] = best_static - algo_gain;
  });

  summary.mean = mean_of(summary.per_run);
  summary.se = stderr_of(summary.per_run);
  summary.max =
      *std::max_element(summary.per_run.begin(), summary.per_run.end());
  if (algo == Algo::kMeta) {
    summary.mean_vs_best_learner = mean_of(summary.per_run_vs_best_learner);
    summary.se_vs_best_learner = stderr_of(summary.per_run_vs_best_learner);
    summary.mean_meta_bound = mean_of(bounds);
  }
  return summary;
}

}  // namespace privex::sim
