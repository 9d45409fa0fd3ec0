// Copyright 2026 The satkey Authors
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

#include "satkey/numeric.hpp"

#include <cmath>

#include "satkey/errors.hpp"

namespace satkey {

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double loss_db_to_linear(double db) {
  if (db < 0.0) throw Error(ErrorCode::kInvalidArgument, "loss must be >= 0 dB");
  return std::pow(10.0, -db / 10.0);
}

// Peter Acklam's inverse normal CDF approximation (2003), |rel err| < 1.15e-9,
// then two Newton iterations using erfc for the residual.
double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw Error(ErrorCode::kDomain, "inverse_normal_cdf requires p in (0,1)");

  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  for (int i = 0; i < 2; ++i) {
    double cdf = 0.5 * std::erfc(-x / 1.4142135623730951);
    double pdf = std::exp(-0.5 * x * x) / 2.5066282746310002;
    if (pdf <= 0.0) break;
    x -= (cdf - p) / pdf;
  }
  return x;
}

double two_sided_quantile(double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw Error(ErrorCode::kDomain, "confidence epsilon must be in (0,1)");
  return inverse_normal_cdf(1.0 - eps / 2.0);
}

}  // namespace satkey
