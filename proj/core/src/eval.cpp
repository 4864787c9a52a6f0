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

#include "privex/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "privex/normal.hpp"
#include "privex/sim.hpp"

namespace privex::eval {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  std::size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& s, double* out) {
  std::size_t used = 0;
  try {
    *out = std::stod(s, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == s.size() && !s.empty();
}

}  // namespace

double PanelDataset::sensitivity_at(std::int64_t week) const {
  if (week < 0 || week >= weeks) {
    throw InvalidInputError("sensitivity_at: week out of range");
  }
  return kSqrt2 / min_beds[static_cast<std::size_t>(week)];
}

double PanelDataset::max_sensitivity() const {
  double s = 0.0;
  for (std::int64_t w = 0; w < weeks; ++w) {
    s = std::max(s, sensitivity_at(w));
  }
  return s;
}

IngestReport ingest_csv(const std::string& path, double min_cases_filter) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset: " + path);

  struct Row {
    std::int64_t week;
    std::string unit;
    double density;
    double beds;
  };
  std::vector<Row> rows;
  std::map<std::pair<std::int64_t, std::string>, std::pair<double, double>>
      seen;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(stripped);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 4) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": expected 4 columns, got "
          << fields.size();
      throw ParseError(msg.str());
    }
    double week_d;
    if (!parse_double(fields[0], &week_d)) {
      if (line_no == 1) continue;  // header row
      std::ostringstream msg;
      msg << path << ":" << line_no << ": unparseable week '" << fields[0]
          << "'";
      throw ParseError(msg.str());
    }
    double density, beds;
    if (!parse_double(fields[2], &density) || !parse_double(fields[3], &beds)) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": unparseable numeric field";
      throw ParseError(msg.str());
    }
    if (!(density >= 0.0) || !(density <= 1.0)) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": density " << density
          << " outside [0, 1]";
      throw ParseError(msg.str());
    }
    if (!(beds > 0.0)) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": total_beds must be > 0";
      throw ParseError(msg.str());
    }
    const Row row{static_cast<std::int64_t>(week_d), fields[1], density, beds};
    const auto key = std::make_pair(row.week, row.unit);
    const auto it = seen.find(key);
    if (it != seen.end()) {
      if (it->second != std::make_pair(density, beds)) {
        std::ostringstream msg;
        msg << path << ":" << line_no << ": conflicting duplicate for week "
            << row.week << ", unit '" << row.unit << "'";
        throw ParseError(msg.str());
      }
      continue;
    }
    seen.emplace(key, std::make_pair(density, beds));
    rows.push_back(row);
  }
  if (rows.empty()) throw ParseError(path + ": no data rows");

  // Drop units below the participation filter (total cases over the period).
  std::map<std::string, double> total_cases;
  for (const auto& r : rows) total_cases[r.unit] += r.density * r.beds;
  std::set<std::string> kept;
  std::vector<std::string> dropped;
  for (const auto& [unit, cases] : total_cases) {
    if (cases < min_cases_filter) {
      dropped.push_back(unit);
    } else {
      kept.insert(unit);
    }
  }
  if (kept.empty()) {
    throw InvalidInputError(path + ": no units survive the case filter");
  }

  std::set<std::int64_t> week_set;
  for (const auto& r : rows) {
    if (kept.count(r.unit)) week_set.insert(r.week);
  }
  std::map<std::int64_t, std::int64_t> week_index;
  std::int64_t wi = 0;
  for (std::int64_t w : week_set) week_index[w] = wi++;
  std::map<std::string, std::int64_t> unit_index;
  std::int64_t ui = 0;
  for (const auto& u : kept) unit_index[u] = ui++;

  PanelDataset data;
  data.weeks = wi;
  data.units = ui;
  data.unit_ids.assign(kept.begin(), kept.end());
  data.density = Eigen::MatrixXd::Zero(wi, ui);
  data.min_beds.assign(static_cast<std::size_t>(wi),
                       std::numeric_limits<double>::infinity());
  for (const auto& r : rows) {
    if (!kept.count(r.unit)) continue;
    const std::int64_t w = week_index[r.week];
    const std::int64_t u = unit_index[r.unit];
    data.density(w, u) = r.density;
    data.min_beds[static_cast<std::size_t>(w)] =
        std::min(data.min_beds[static_cast<std::size_t>(w)], r.beds);
  }
  for (std::int64_t w = 0; w < wi; ++w) {
    if (!std::isfinite(data.min_beds[static_cast<std::size_t>(w)])) {
      throw InvalidInputError(path + ": a week has no reporting units");
    }
  }
  return IngestReport{std::move(data), std::move(dropped)};
}

// -- learners -------------------------------------------------------------------

std::string LearnerSpec::id() const {
  switch (kind) {
    case LearnerKind::kFtplBaseline:
      return "ftpl";
    case LearnerKind::kConstantVertex:
      return "const_e" + std::to_string(vertex);
    case LearnerKind::kRollingRegression: {
      const char* reg_name = reg == Regularization::kWeak     ? "weak"
                             : reg == Regularization::kMedium ? "medium"
                                                              : "strong";
      return "rr_w" + std::to_string(window) + "_" + reg_name;
    }
  }
  return "unknown";
}

namespace {

Eigen::VectorXd vertex_of(int index, int n) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v[index] = 1.0;
  return v;
}

class RollingRegressionLearner : public Learner {
 public:
  RollingRegressionLearner(const LearnerSpec& spec)
      : id_(spec.id()), window_(spec.window) {
    const double factor = spec.reg == Regularization::kWeak     ? 0.1
                          : spec.reg == Regularization::kMedium ? 1.0
                                                                : 10.0;
    lambda_ = factor * static_cast<double>(spec.window);
  }

  const std::string& id() const override { return id_; }

  Eigen::VectorXd act(std::span<const NoisyGainVector> history,
                      int n) const override {
    const std::int64_t have = static_cast<std::int64_t>(history.size());
    if (have < 2) return vertex_of(0, n);  // cold start
    const std::int64_t w = std::min<std::int64_t>(window_, have);
    const auto rows = history.subspan(static_cast<std::size_t>(have - w));

    // Per expert: ridge fit of gain on time index x = 1..w (slope-only
    // penalty), forecast at x = w + 1.
    const double wd = static_cast<double>(w);
    const double x_bar = 0.5 * (wd + 1.0);
    const double sxx = wd * (wd * wd - 1.0) / 12.0;
    Eigen::VectorXd forecast(n);
    for (int j = 0; j < n; ++j) {
      double y_bar = 0.0;
      for (std::int64_t i = 0; i < w; ++i) {
        y_bar += rows[static_cast<std::size_t>(i)]
                     .values[static_cast<std::size_t>(j)];
      }
      y_bar /= wd;
      double sxy = 0.0;
      for (std::int64_t i = 0; i < w; ++i) {
        const double x = static_cast<double>(i + 1);
        sxy += (x - x_bar) * (rows[static_cast<std::size_t>(i)]
                                  .values[static_cast<std::size_t>(j)] -
                              y_bar);
      }
      const double slope = sxy / (sxx + lambda_);
      forecast[j] = y_bar + slope * (wd + 1.0 - x_bar);
    }
    return vertex_of(
        argmax_tiebreak(std::span<const double>(forecast.data(), n)), n);
  }

 private:
  std::string id_;
  std::int64_t window_;
  double lambda_;
};

// RW-FTPL over the shared noisy stream: follow the leader of the cumulative
// noisy sum. The stream noise is the perturbation, so the learner itself is
// deterministic.
class FtplBaselineLearner : public Learner {
 public:
  FtplBaselineLearner() : id_("ftpl") {}
  const std::string& id() const override { return id_; }

  Eigen::VectorXd act(std::span<const NoisyGainVector> history,
                      int n) const override {
    Eigen::VectorXd total = Eigen::VectorXd::Zero(n);
    for (const auto& g : history) {
      for (int j = 0; j < n; ++j) total[j] += g.values[static_cast<std::size_t>(j)];
    }
    return vertex_of(argmax_tiebreak(std::span<const double>(total.data(), n)),
                     n);
  }

 private:
  std::string id_;
};

class ConstantVertexLearner : public Learner {
 public:
  explicit ConstantVertexLearner(int vertex)
      : id_("const_e" + std::to_string(vertex)), vertex_(vertex) {}
  const std::string& id() const override { return id_; }

  Eigen::VectorXd act(std::span<const NoisyGainVector>, int n) const override {
    if (vertex_ >= n) {
      throw InvalidInputError("constant-vertex learner index out of range");
    }
    return vertex_of(vertex_, n);
  }

 private:
  std::string id_;
  int vertex_;
};

}  // namespace

std::shared_ptr<const Learner> make_learner(const LearnerSpec& spec) {
  switch (spec.kind) {
    case LearnerKind::kRollingRegression:
      if (spec.window < 2) {
        throw InvalidInputError("rolling regression window must be >= 2");
      }
      return std::make_shared<RollingRegressionLearner>(spec);
    case LearnerKind::kFtplBaseline:
      return std::make_shared<FtplBaselineLearner>();
    case LearnerKind::kConstantVertex:
      if (spec.vertex < 0) {
        throw InvalidInputError("constant-vertex index must be >= 0");
      }
      return std::make_shared<ConstantVertexLearner>(spec.vertex);
  }
  throw InvalidInputError("unknown learner kind");
}

std::vector<LearnerSpec> default_learner_specs() {
  std::vector<LearnerSpec> specs;
  for (int window : {8, 16, 32, 64}) {
    for (Regularization reg : {Regularization::kWeak, Regularization::kMedium,
                               Regularization::kStrong}) {
      specs.push_back({LearnerKind::kRollingRegression, window, reg, 0});
    }
  }
  specs.push_back({LearnerKind::kFtplBaseline, 0, Regularization::kMedium, 0});
  return specs;
}

LearnerSet make_learners(const std::vector<LearnerSpec>& specs) {
  LearnerSet learners;
  learners.reserve(specs.size());
  for (const auto& spec : specs) learners.push_back(make_learner(spec));
  return learners;
}

LearnerSet default_learner_zoo() { return make_learners(default_learner_specs()); }

double naive_budget_split(int m, double mu) {
  if (m < 1) throw InvalidInputError("naive_budget_split: m >= 1");
  if (!(mu > 0.0)) {
    if (std::isinf(mu)) return mu;
    throw InvalidInputError("naive_budget_split: mu > 0");
  }
  return mu / std::sqrt(static_cast<double>(m));
}

std::vector<GainVector> synthetic_drift_stream(int n, std::int64_t T,
                                               std::int64_t regime_length,
                                               std::uint64_t seed, double base,
                                               double advantage,
                                               double jitter) {
  if (n < 2) throw InvalidInputError("synthetic_drift_stream: n >= 2");
  if (T < 1) throw InvalidInputError("synthetic_drift_stream: T >= 1");
  if (regime_length < 1) {
    throw InvalidInputError("synthetic_drift_stream: regime_length >= 1");
  }
  if (!(base >= 0.0) || !(advantage >= 0.0) || !(jitter >= 0.0) ||
      base + advantage + jitter > 1.0) {
    throw InvalidInputError(
        "synthetic_drift_stream: need base + advantage + jitter <= 1");
  }
  std::vector<GainVector> rows;
  rows.reserve(static_cast<std::size_t>(T));
  for (std::int64_t t = 1; t <= T; ++t) {
    const int best = static_cast<int>(((t - 1) / regime_length) % n);
    CounterRng rng(RoundSeed{seed, static_cast<std::uint64_t>(t), "drift"});
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      v[static_cast<std::size_t>(i)] =
          base + (i == best ? advantage : 0.0) + jitter * rng.next_unit();
    }
    rows.push_back(GainVector{std::move(v)});
  }
  return rows;
}

PanelDataset synthetic_panel(int n, std::int64_t T, std::int64_t regime_length,
                             std::uint64_t seed, double min_beds, double base,
                             double advantage, double jitter) {
  if (!(min_beds > 0.0)) throw InvalidInputError("synthetic_panel: min_beds > 0");
  const auto rows =
      synthetic_drift_stream(n, T, regime_length, seed, base, advantage, jitter);
  PanelDataset data;
  data.weeks = T;
  data.units = n;
  data.unit_ids.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) data.unit_ids.push_back("synthetic_" + std::to_string(i));
  data.density.resize(T, n);
  for (std::int64_t t = 0; t < T; ++t) {
    for (int i = 0; i < n; ++i) {
      data.density(t, i) =
          rows[static_cast<std::size_t>(t)].values[static_cast<std::size_t>(i)];
    }
  }
  data.min_beds.assign(static_cast<std::size_t>(T), min_beds);
  return data;
}

// -- run_eval --------------------------------------------------------------------

int EvalResult::algorithm_index(const std::string& name) const {
  for (std::size_t i = 0; i < algorithms.size(); ++i) {
    if (algorithms[i] == name) return static_cast<int>(i);
  }
  throw InvalidInputError("EvalResult: unknown algorithm " + name);
}

namespace {

struct NaiveSplitRun {
  double gain = 0.0;
};

// Naive budget split: every learner reads its own stream noised at level
// mu/sqrt(m) (scale Delta*sqrt(m)/mu) and the selector follows the leader
// of the per-learner cumulative noisy-gain estimates. The stream noise is
// the selector's perturbation, mirroring how the shared-stream algorithms
// work; no extra selection budget is spent.
NaiveSplitRun run_naive_split(const PanelDataset& data,
                              const LearnerSet& learners, double eta_m,
                              std::uint64_t run_seed) {
  const std::int64_t T = data.weeks;
  const int n = static_cast<int>(data.units);
  const int m = static_cast<int>(learners.size());
  std::vector<std::vector<NoisyGainVector>> histories(
      static_cast<std::size_t>(m));
  std::vector<double> estimate(static_cast<std::size_t>(m), 0.0);
  NaiveSplitRun out;
  GainVector g;
  g.values.resize(static_cast<std::size_t>(n));
  for (std::int64_t t = 1; t <= T; ++t) {
    for (int j = 0; j < n; ++j) {
      g.values[static_cast<std::size_t>(j)] = data.density(t - 1, j);
    }
    const int chosen = argmax_tiebreak(estimate);
    const Eigen::VectorXd action =
        learners[static_cast<std::size_t>(chosen)]->act(
            histories[static_cast<std::size_t>(chosen)], n);
    for (int j = 0; j < n; ++j) {
      out.gain += action[j] * g.values[static_cast<std::size_t>(j)];
    }
    for (int i = 0; i < m; ++i) {
      NoisyGainVector noisy;
      if (eta_m == 0.0) {
        noisy = NoisyGainVector{g.values, 0.0};
      } else {
        noisy = gaussian_perturb(
            g, eta_m,
            RoundSeed{run_seed, static_cast<std::uint64_t>(t),
                      std::string("split_gain_") + std::to_string(i)});
      }
      const Eigen::VectorXd xi =
          learners[static_cast<std::size_t>(i)]->act(
              histories[static_cast<std::size_t>(i)], n);
      double inner = 0.0;
      for (int j = 0; j < n; ++j) {
        inner += xi[j] * noisy.values[static_cast<std::size_t>(j)];
      }
      estimate[static_cast<std::size_t>(i)] += inner;
      histories[static_cast<std::size_t>(i)].push_back(std::move(noisy));
    }
  }
  return out;
}

void parallel_runs(std::int64_t runs, int threads,
                   const std::function<void(std::int64_t)>& body) {
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(runs)));
  if (workers == 1) {
    for (std::int64_t r = 0; r < runs; ++r) body(r);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::int64_t r = w; r < runs; r += workers) body(r);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

EvalResult run_eval(const PanelDataset& data, const LearnerSet& learners,
                    const EvalOptions& opts) {
  if (data.weeks < 1 || data.units < 2) {
    throw InvalidInputError("run_eval: dataset needs >= 1 week, >= 2 units");
  }
  if (learners.empty()) throw InvalidInputError("run_eval: no learners");
  if (opts.privacy_levels.empty()) {
    throw InvalidInputError("run_eval: no privacy levels");
  }
  for (double mu : opts.privacy_levels) {
    if (!(mu > 0.0)) {
      throw InvalidInputError("run_eval: privacy level must be > 0");
    }
  }
  if (opts.runs < 1) throw InvalidInputError("run_eval: runs >= 1");

  const std::int64_t T = data.weeks;
  const int n = static_cast<int>(data.units);
  const int m = static_cast<int>(learners.size());
  const double delta_max = data.max_sensitivity();

  // Raw stream + best static reference.
  std::vector<GainVector> rows;
  rows.reserve(static_cast<std::size_t>(T));
  for (std::int64_t t = 0; t < T; ++t) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = data.density(t, j);
    rows.push_back(GainVector{std::move(v)});
  }
  const auto stream = std::make_shared<FixedStream>(std::move(rows));
  Eigen::VectorXd column_sums = data.density.colwise().sum();
  const double best_static = column_sums.maxCoeff();

  EvalResult result;
  result.privacy_levels = opts.privacy_levels;
  result.algorithms.push_back("rw_meta");
  for (const auto& learner : learners) result.algorithms.push_back(learner->id());
  result.algorithms.push_back("naive_split");
  result.algorithms.push_back("best_static");
  result.best_static_gain = best_static;
  result.runs = opts.runs;
  result.seed = opts.seed;
  result.max_sensitivity = delta_max;

  const std::size_t levels = opts.privacy_levels.size();
  const std::size_t algos = result.algorithms.size();
  // Bonferroni across every stochastic mean in the table.
  const std::int64_t comparisons =
      static_cast<std::int64_t>(levels) * static_cast<std::int64_t>(m + 2);
  const double z =
      norm_ppf(1.0 - 0.05 / (2.0 * static_cast<double>(comparisons)));

  result.cells.assign(levels, std::vector<EvalCell>(algos));
  result.meta_regret_vs_best.assign(levels, {});
  result.meta_bound.assign(levels, {});
  for (std::size_t li = 0; li < levels; ++li) {
    for (std::size_t ai = 0; ai + 1 < algos; ++ai) {
      result.cells[li][ai].per_run.assign(
          static_cast<std::size_t>(opts.runs), 0.0);
    }
    result.meta_regret_vs_best[li].assign(static_cast<std::size_t>(opts.runs),
                                          0.0);
    result.meta_bound[li].assign(static_cast<std::size_t>(opts.runs), 0.0);
  }

  for (std::size_t li = 0; li < levels; ++li) {
    const double mu = opts.privacy_levels[li];
    const bool noiseless = std::isinf(mu);
    const double eta = noiseless ? 0.0 : delta_max / mu;
    const double eta_m =
        noiseless ? 0.0
                  : delta_max * std::sqrt(static_cast<double>(m)) / mu;
    const std::string run_label = "eval_l" + std::to_string(li);

    parallel_runs(opts.runs, opts.threads, [&](std::int64_t r) {
      const std::uint64_t run_seed =
          derive_seed(opts.seed, static_cast<std::uint64_t>(r), run_label);

      // One noising per round, shared by RW-Meta and all learner columns.
      const sim::NoisyProvider provider = [&](std::int64_t t) {
        GainVector g = stream->at(t);
        double eta_t = eta;
        if (opts.per_week_eta && !noiseless) {
          eta_t = data.sensitivity_at(t - 1) / mu;
        }
        if (eta_t == 0.0) return NoisyGainVector{std::move(g.values), 0.0};
        return gaussian_perturb(
            g, eta_t,
            RoundSeed{run_seed, static_cast<std::uint64_t>(t), "gain"});
      };
      const sim::MetaRun meta = sim::run_meta_with_provider(
          *stream, T, learners, provider, eta, run_seed);

      result.cells[li][0].per_run[static_cast<std::size_t>(r)] =
          meta.algo_gain;
      for (int i = 0; i < m; ++i) {
        result.cells[li][static_cast<std::size_t>(i) + 1]
            .per_run[static_cast<std::size_t>(r)] =
            meta.learner_gain[static_cast<std::size_t>(i)];
      }
      const double best_learner = *std::max_element(meta.learner_gain.begin(),
                                                    meta.learner_gain.end());
      result.meta_regret_vs_best[li][static_cast<std::size_t>(r)] =
          best_learner - meta.algo_gain;
      if (m >= 2) {
        result.meta_bound[li][static_cast<std::size_t>(r)] = meta_regret_bound(
            decorrelate(meta.final_state.sigma_mat), eta, T, m);
      }

      const NaiveSplitRun naive =
          run_naive_split(data, learners, eta_m, run_seed);
      result.cells[li][algos - 2].per_run[static_cast<std::size_t>(r)] =
          naive.gain;
    });

    for (std::size_t ai = 0; ai + 1 < algos; ++ai) {
      auto& cell = result.cells[li][ai];
      cell.mean = sim::mean_of(cell.per_run);
      cell.ci_half = z * sim::stderr_of(cell.per_run);
    }
    auto& ref = result.cells[li][algos - 1];
    ref.mean = best_static;
    ref.ci_half = 0.0;
  }
  return result;
}

}  // namespace privex::eval
