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

#include "privex/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "privex/errors.hpp"

namespace privex {

namespace {

// Kronrod-15 nodes on [0, 1] side (symmetric) and weights; Gauss-7 weights
// sit at the odd Kronrod nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
  double integral;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double result_gauss = fc * kWg[3];
  double result_kronrod = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    result_kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) {
      result_gauss += kWg[j / 2] * (f1 + f2);
    }
  }
  const double integral = result_kronrod * half;
  const double error =
      std::fabs((result_kronrod - result_gauss) * half) * 1.5;
  return {integral, error};
}

double integrate_rec(const std::function<double(double)>& f, double a,
                     double b, double tol, int depth, int max_depth) {
  const PanelResult r = gk15(f, a, b);
  if (r.error <= tol || r.error <= 1e-300) {
    return r.integral;
  }
  if (depth >= max_depth) {
    std::ostringstream msg;
    msg << "quadrature failed to converge on [" << a << ", " << b
        << "]: error estimate " << r.error << " > tolerance " << tol
        << " at depth " << depth;
    throw InternalError(msg.str());
  }
  const double mid = 0.5 * (a + b);
  return integrate_rec(f, a, mid, 0.5 * tol, depth + 1, max_depth) +
         integrate_rec(f, mid, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts) {
  if (!(a <= b)) throw InvalidInputError("integrate: requires a <= b");
  if (a == b) return 0.0;
  return integrate_rec(f, a, b, opts.abs_tol, 0, opts.max_depth);
}

}  // namespace privex
