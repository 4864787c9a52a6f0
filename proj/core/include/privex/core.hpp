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

#ifndef PRIVEX_CORE_HPP_
#define PRIVEX_CORE_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "privex/errors.hpp"
#include "privex/rng.hpp"

namespace privex {

// One round's reward per expert, normalized to [0, 1]. This is the
// sensitive data; algorithms never read it directly.
struct GainVector {
  std::vector<double> values;

  int n() const { return static_cast<int>(values.size()); }

  // Validates entries in [0, 1] and n >= 2.
  static GainVector checked(std::vector<double> values);
};

// A gain vector after local Gaussian perturbation; the only data channel
// the algorithms may read.
struct NoisyGainVector {
  std::vector<double> values;
  double noise_scale = 0.0;

  int n() const { return static_cast<int>(values.size()); }
};

// Local Gaussian-DP calibration: mu-GDP holds when eta >= sensitivity / mu.
struct PrivacyParams {
  double mu = 1.0;
  double sensitivity = 1.0;
  double eta = 1.0;

  // Validates positivity and the local GDP constraint.
  static PrivacyParams checked(double mu, double sensitivity, double eta);
};

// Running sum of noisy gains (plus any initial perturbation).
struct CumulativeEstimate {
  std::vector<double> values;
  std::int64_t t = 0;

  int n() const { return static_cast<int>(values.size()); }
};

// Index of the largest entry; ties break to the lowest index, so the
// result is invariant under adding a constant to every entry.
int argmax_tiebreak(std::span<const double> v);

// Largest entry minus second-largest entry. Requires length >= 2.
double gap(std::span<const double> v);

// Adds i.i.d. N(0, eta^2) noise per coordinate. Deterministic given seed.
NoisyGainVector gaussian_perturb(const GainVector& g, double eta,
                                 const RoundSeed& seed);

// Noise scale for a target GDP level: sensitivity/mu, or
// max(sqrt(2), sensitivity/mu) when optimizing worst-case regret.
double default_eta(double mu, double sensitivity, bool worst_case);

// ---------------------------------------------------------------------------
// Gain streams
// ---------------------------------------------------------------------------

// Replayable source of gain vectors, indexed by 1-based round.
class GainStream {
 public:
  virtual ~GainStream() = default;
  virtual int n() const = 0;
  virtual GainVector at(std::int64_t round) const = 0;
};

// All-zero gains; the worst case for the privacy analysis.
class ZeroStream : public GainStream {
 public:
  explicit ZeroStream(int n);
  int n() const override { return n_; }
  GainVector at(std::int64_t round) const override;

 private:
  int n_;
};

// I.i.d. uniform [0, 1] entries, derived from (seed, round).
class UniformStream : public GainStream {
 public:
  UniformStream(int n, std::uint64_t seed);
  int n() const override { return n_; }
  GainVector at(std::int64_t round) const override;

 private:
  int n_;
  std::uint64_t seed_;
};

// In-memory stream over explicit rows; out-of-range rounds are an error.
class FixedStream : public GainStream {
 public:
  explicit FixedStream(std::vector<GainVector> rows);
  int n() const override { return n_; }
  std::int64_t rounds() const { return static_cast<std::int64_t>(rows_.size()); }
  GainVector at(std::int64_t round) const override;

 private:
  std::vector<GainVector> rows_;
  int n_;
};

// Gain-stream file format: headerless CSV, UTF-8, LF line endings; row t
// holds n comma-separated reals in [0, 1]. Ragged or out-of-range rows are
// rejected with a "path:line:" diagnostic.
std::vector<GainVector> load_gain_stream_csv(const std::string& path);
void save_gain_stream_csv(const std::string& path,
                          std::span<const GainVector> rows);

// Lazily perturbed view of a stream: round t is noised with
// (master_seed, t, stream_id) so replays and paired runs are exact.
class NoisyStream {
 public:
  NoisyStream(std::shared_ptr<const GainStream> stream, double eta,
              std::uint64_t master_seed, std::string stream_id = "gain");

  int n() const { return stream_->n(); }
  double eta() const { return eta_; }
  NoisyGainVector at(std::int64_t round) const;

 private:
  std::shared_ptr<const GainStream> stream_;
  double eta_;
  std::uint64_t master_seed_;
  std::string stream_id_;
};

}  // namespace privex

#endif  // PRIVEX_CORE_HPP_
