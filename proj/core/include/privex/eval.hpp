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

#ifndef PRIVEX_EVAL_HPP_
#define PRIVEX_EVAL_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "privex/core.hpp"
#include "privex/meta.hpp"

namespace privex::eval {

// Weekly panel of per-unit gain densities plus the per-week sensitivity
// inputs (smallest bed count that week).
struct PanelDataset {
  std::int64_t weeks = 0;
  std::int64_t units = 0;
  std::vector<std::string> unit_ids;  // column order, sorted lexicographically
  Eigen::MatrixXd density;            // weeks x units, entries in [0, 1]
  std::vector<double> min_beds;       // per week, > 0

  // Per-week sensitivity sqrt(2)/min_beds and its maximum over weeks.
  double sensitivity_at(std::int64_t week) const;
  double max_sensitivity() const;
};

struct IngestReport {
  PanelDataset dataset;
  std::vector<std::string> dropped_units;
};

// Loads rows of (week_index, unit_id, covid_density, total_beds); an
// optional header line is skipped. Units whose total cases
// (sum of density*beds) fall below min_cases_filter are dropped and
// reported. Row order never affects the result.
IngestReport ingest_csv(const std::string& path, double min_cases_filter);

enum class LearnerKind { kRollingRegression, kFtplBaseline, kConstantVertex };
enum class Regularization { kWeak, kMedium, kStrong };

struct LearnerSpec {
  LearnerKind kind = LearnerKind::kRollingRegression;
  int window = 8;                            // regression only, >= 2
  Regularization reg = Regularization::kMedium;
  int vertex = 0;                            // constant-vertex only

  std::string id() const;
};

// Rolling regression: per expert, a ridge-penalized linear trend of the
// noisy gains over the trailing window (slope-only penalty
// lambda = {0.1, 1, 10} * window for weak/medium/strong), forecast one step
// ahead, play the argmax vertex. Histories shorter than 2 rounds play e0.
std::shared_ptr<const Learner> make_learner(const LearnerSpec& spec);

// The 13-learner zoo: windows {8, 16, 32, 64} x {weak, medium, strong}
// regressions plus the plain cumulative-sum follower.
std::vector<LearnerSpec> default_learner_specs();
LearnerSet default_learner_zoo();
LearnerSet make_learners(const std::vector<LearnerSpec>& specs);

// Gaussian composition split: each of m learners gets level mu/sqrt(m).
double naive_budget_split(int m, double mu);

// Piecewise-stationary stream: the best expert rotates every regime_length
// rounds with a fixed gain advantage over the base level, plus a small
// seeded uniform jitter. Entries stay in [0, 1].
std::vector<GainVector> synthetic_drift_stream(int n, std::int64_t T,
                                               std::int64_t regime_length,
                                               std::uint64_t seed,
                                               double base = 0.4,
                                               double advantage = 0.3,
                                               double jitter = 0.05);

// The same generator wrapped as a panel (constant min_beds per week).
PanelDataset synthetic_panel(int n, std::int64_t T, std::int64_t regime_length,
                             std::uint64_t seed, double min_beds = 10.0,
                             double base = 0.4, double advantage = 0.3,
                             double jitter = 0.05);

struct EvalOptions {
  std::vector<double> privacy_levels = {
      std::numeric_limits<double>::infinity(), 1.0, 0.5, 0.25};
  std::int64_t runs = 100;
  std::uint64_t seed = 0;
  // Per-week noise scale eta_t = Delta_t/mu instead of the uniform
  // conservative eta = max_t Delta_t/mu. Excluded from conformance runs.
  bool per_week_eta = false;
  int threads = 1;
};

struct EvalCell {
  double mean = 0.0;
  double ci_half = 0.0;  // Bonferroni-corrected 95% CI half-width
  std::vector<double> per_run;
};

struct EvalResult {
  std::vector<double> privacy_levels;
  std::vector<std::string> algorithms;  // column order
  std::vector<std::vector<EvalCell>> cells;  // [level][algorithm]
  double best_static_gain = 0.0;
  std::int64_t runs = 0;
  std::uint64_t seed = 0;
  double max_sensitivity = 0.0;
  // RW-Meta diagnostics per level: regret versus the per-run best learner
  // and the per-run Thm-style bound.
  std::vector<std::vector<double>> meta_regret_vs_best;
  std::vector<std::vector<double>> meta_bound;

  int algorithm_index(const std::string& name) const;
};

// Full evaluation: RW-Meta on the shared noisy stream, every learner
// standalone on that same stream, the naive budget-split baseline on
// per-learner streams, and the best static action reference. One noising
// per round per run, reused by all shared-stream consumers.
EvalResult run_eval(const PanelDataset& data, const LearnerSet& learners,
                    const EvalOptions& opts);

}  // namespace privex::eval

#endif  // PRIVEX_EVAL_HPP_
