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

#include "privex/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

namespace privex {

GainVector GainVector::checked(std::vector<double> values) {
  if (values.size() < 2) {
    throw InvalidInputError("GainVector: expert count must be >= 2");
  }
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw InvalidInputError("GainVector: entries must lie in [0, 1]");
    }
  }
  return GainVector{std::move(values)};
}

PrivacyParams PrivacyParams::checked(double mu, double sensitivity,
                                     double eta) {
  if (!(mu > 0.0) || !(sensitivity > 0.0) || !(eta > 0.0)) {
    throw InvalidInputError("PrivacyParams: mu, sensitivity, eta must be > 0");
  }
  if (eta * mu < sensitivity * (1.0 - 1e-12)) {
    throw InvalidInputError(
        "PrivacyParams: eta < sensitivity/mu violates the local GDP bound");
  }
  return PrivacyParams{mu, sensitivity, eta};
}

int argmax_tiebreak(std::span<const double> v) {
  if (v.empty()) throw InvalidInputError("argmax_tiebreak: empty input");
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (!std::isfinite(v[i])) {
      throw InvalidInputError("argmax_tiebreak: non-finite entry");
    }
    if (v[i] > v[best]) best = i;
  }
  if (!std::isfinite(v[0])) {
    throw InvalidInputError("argmax_tiebreak: non-finite entry");
  }
  return best;
}

double gap(std::span<const double> v) {
  if (v.size() < 2) throw InvalidInputError("gap: need at least 2 entries");
  double top = -std::numeric_limits<double>::infinity();
  double second = top;
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidInputError("gap: non-finite entry");
    if (x > top) {
      second = top;
      top = x;
    } else if (x > second) {
      second = x;
    }
  }
  return top - second;
}

NoisyGainVector gaussian_perturb(const GainVector& g, double eta,
                                 const RoundSeed& seed) {
  if (!(eta > 0.0)) throw InvalidInputError("gaussian_perturb: eta must be > 0");
  CounterRng rng(seed);
  NoisyGainVector out;
  out.noise_scale = eta;
  out.values.resize(g.values.size());
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    out.values[i] = g.values[i] + eta * rng.next_normal();
  }
  return out;
}

double default_eta(double mu, double sensitivity, bool worst_case) {
  if (!(mu > 0.0) || !(sensitivity > 0.0)) {
    throw InvalidInputError("default_eta: mu and sensitivity must be > 0");
  }
  const double ratio = sensitivity / mu;
  return worst_case ? std::max(std::sqrt(2.0), ratio) : ratio;
}

// -- streams ----------------------------------------------------------------

ZeroStream::ZeroStream(int n) : n_(n) {
  if (n < 2) throw InvalidInputError("ZeroStream: n must be >= 2");
}

GainVector ZeroStream::at(std::int64_t) const {
  return GainVector{std::vector<double>(static_cast<std::size_t>(n_), 0.0)};
}

UniformStream::UniformStream(int n, std::uint64_t seed) : n_(n), seed_(seed) {
  if (n < 2) throw InvalidInputError("UniformStream: n must be >= 2");
}

GainVector UniformStream::at(std::int64_t round) const {
  CounterRng rng(RoundSeed{seed_, static_cast<std::uint64_t>(round),
                           "uniform_stream"});
  std::vector<double> v(static_cast<std::size_t>(n_));
  for (auto& x : v) x = rng.next_unit();
  return GainVector{std::move(v)};
}

FixedStream::FixedStream(std::vector<GainVector> rows)
    : rows_(std::move(rows)) {
  if (rows_.empty()) throw InvalidInputError("FixedStream: no rows");
  n_ = rows_.front().n();
  for (const auto& r : rows_) {
    if (r.n() != n_) throw InvalidInputError("FixedStream: ragged rows");
  }
}

GainVector FixedStream::at(std::int64_t round) const {
  if (round < 1 || round > rounds()) {
    std::ostringstream msg;
    msg << "FixedStream: round " << round << " outside [1, " << rounds()
        << "]";
    throw InvalidInputError(msg.str());
  }
  return rows_[static_cast<std::size_t>(round - 1)];
}

std::vector<GainVector> load_gain_stream_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open gain stream: " + path);
  std::vector<GainVector> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = line.find(',', pos);
      const std::string field =
          line.substr(pos, comma == std::string::npos ? std::string::npos
                                                      : comma - pos);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(field, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != field.size() || field.empty()) {
        std::ostringstream msg;
        msg << path << ":" << line_no << ": unparseable value '" << field
            << "'";
        throw ParseError(msg.str());
      }
      if (!(v >= 0.0) || !(v <= 1.0)) {
        std::ostringstream msg;
        msg << path << ":" << line_no << ": value " << v
            << " outside [0, 1]";
        throw ParseError(msg.str());
      }
      values.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (n == 0) {
      n = values.size();
      if (n < 2) {
        std::ostringstream msg;
        msg << path << ":" << line_no << ": need at least 2 columns";
        throw ParseError(msg.str());
      }
    } else if (values.size() != n) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": ragged row (" << values.size()
          << " columns, expected " << n << ")";
      throw ParseError(msg.str());
    }
    rows.push_back(GainVector{std::move(values)});
  }
  if (rows.empty()) throw ParseError(path + ": empty gain stream");
  return rows;
}

void save_gain_stream_csv(const std::string& path,
                          std::span<const GainVector> rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write gain stream: " + path);
  char buf[64];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row.values[i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

NoisyStream::NoisyStream(std::shared_ptr<const GainStream> stream, double eta,
                         std::uint64_t master_seed, std::string stream_id)
    : stream_(std::move(stream)),
      eta_(eta),
      master_seed_(master_seed),
      stream_id_(std::move(stream_id)) {
  if (!stream_) throw InvalidInputError("NoisyStream: null stream");
  if (eta_ < 0.0) throw InvalidInputError("NoisyStream: eta must be >= 0");
}

NoisyGainVector NoisyStream::at(std::int64_t round) const {
  GainVector g = stream_->at(round);
  if (eta_ == 0.0) {
    // mu = infinity: pass the data through unperturbed.
    return NoisyGainVector{std::move(g.values), 0.0};
  }
  return gaussian_perturb(
      g, eta_,
      RoundSeed{master_seed_, static_cast<std::uint64_t>(round), stream_id_});
}

}  // namespace privex
