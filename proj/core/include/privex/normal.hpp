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

#ifndef PRIVEX_NORMAL_HPP_
#define PRIVEX_NORMAL_HPP_

namespace privex {

// Standard normal density.
double norm_pdf(double x);

// Standard normal CDF, erfc-based so deep tails keep full relative accuracy.
double norm_cdf(double x);

// Inverse of norm_cdf on (0, 1). Endpoints map to -/+infinity.
double norm_ppf(double p);

// log(norm_cdf(x)); stable for x far into the left tail where norm_cdf
// underflows to zero.
double log_norm_cdf(double x);

}  // namespace privex

#endif  // PRIVEX_NORMAL_HPP_
