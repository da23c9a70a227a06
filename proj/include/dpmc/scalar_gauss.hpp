//
// Copyright 2026 The dpmc Authors
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
//
// Scalar Gaussian primitives. Every calibration routine in this library sits
// on top of these three things: a CDF that keeps relative accuracy deep in
// the lower tail, an inverse CDF whose round trip through the CDF is exact to
// near machine precision, and a guarded bisection for monotone functions.

#ifndef DPMC_SCALAR_GAUSS_HPP_
#define DPMC_SCALAR_GAUSS_HPP_

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "dpmc/errors.hpp"

namespace dpmc {

// Probability value, validated to lie in [0, 1].
class Probability {
 public:
  explicit Probability(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw std::domain_error("Probability must lie in [0, 1]");
    }
  }
  double value() const { return value_; }

 private:
  double value_;
};

struct BracketedRoot {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// 2^-200 shrinks any representable starting bracket below any representable
// positive tolerance, so a run that exhausts the cap is a genuine failure.
inline constexpr int kMaxBisectionIterations = 200;

inline double std_normal_pdf(double x) {
  return std::numbers::inv_sqrtpi / std::numbers::sqrt2 *
         std::exp(-0.5 * x * x);
}

// Standard normal CDF. The erfc form keeps relative (not just absolute)
// accuracy for very negative arguments; calibration at delta near 1e-12
// probes the tail around -7 where an absolute-accuracy CDF would return
// garbage residuals.
inline Probability std_normal_cdf(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("std_normal_cdf: argument must be finite");
  }
  return Probability(0.5 * std::erfc(-x / std::numbers::sqrt2));
}

namespace detail {

// log(Phi(x)) for x <= -10, from the asymptotic Mills-ratio expansion
// Phi(-t) = pdf(t)/t * (1 - 1/t^2 + 3/t^4 - 15/t^6 + 105/t^8 - ...).
// Used only where Phi itself would underflow.
inline double log_std_normal_cdf_lower(double x) {
  const double t = -x;
  const double t2 = t * t;
  const double series = -1.0 / t2 + 3.0 / (t2 * t2) - 15.0 / (t2 * t2 * t2) +
                        105.0 / (t2 * t2 * t2 * t2);
  return -0.5 * t2 - std::log(t) - 0.5 * std::log(2.0 * std::numbers::pi) +
         std::log1p(series);
}

// Rational approximation coefficients for the inverse normal CDF
// (Acklam's algorithm; absolute error of the seed is about 1.15e-9).
inline constexpr double kInvCdfA[6] = {
    -3.969683028665376e+01, 2.209460984245205e+02,  -2.759285104469687e+02,
    1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
inline constexpr double kInvCdfB[5] = {
    -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
    6.680131188771972e+01,  -1.328068155288572e+01};
inline constexpr double kInvCdfC[6] = {
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
    -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
inline constexpr double kInvCdfD[4] = {
    7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
    3.754408661907416e+00};

inline double inv_cdf_rational_seed(double p) {
  constexpr double kLowBreak = 0.02425;
  if (p < kLowBreak) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((kInvCdfC[0] * q + kInvCdfC[1]) * q + kInvCdfC[2]) * q +
              kInvCdfC[3]) *
                 q +
             kInvCdfC[4]) *
                q +
            kInvCdfC[5]) /
           ((((kInvCdfD[0] * q + kInvCdfD[1]) * q + kInvCdfD[2]) * q +
             kInvCdfD[3]) *
                q +
            1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((kInvCdfA[0] * r + kInvCdfA[1]) * r + kInvCdfA[2]) * r +
            kInvCdfA[3]) *
               r +
           kInvCdfA[4]) *
              r +
          kInvCdfA[5]) *
         q /
         (((((kInvCdfB[0] * r + kInvCdfB[1]) * r + kInvCdfB[2]) * r +
            kInvCdfB[3]) *
               r +
            kInvCdfB[4]) *
              r +
          1.0);
}

}  // namespace detail

// Inverse standard normal CDF: rational seed refined by two Newton steps
// against std_normal_cdf, which makes the round trip through the forward CDF
// independent of the seed's quality. Arguments above one half are reflected
// to the lower tail first, so Phi_inv(1 - p) == -Phi_inv(p) holds exactly
// whenever 1 - p is exact.
inline double std_normal_cdf_inv(const Probability& p) {
  const double pv = p.value();
  if (!(pv > 0.0 && pv < 1.0)) {
    throw std::domain_error("std_normal_cdf_inv: argument must lie in (0, 1)");
  }
  if (pv > 0.5) {
    return -std_normal_cdf_inv(Probability(1.0 - pv));
  }
  double x = detail::inv_cdf_rational_seed(pv);
  for (int step = 0; step < 2; ++step) {
    const double err = std_normal_cdf(x).value() - pv;
    const double slope = std_normal_pdf(x);
    if (slope <= 0.0) break;
    x -= err / slope;
  }
  return x;
}

// Bisection for a nondecreasing function f with f(lo) <= target <= f(hi).
// Stops when the residual or the bracket width falls below tol; throws
// BracketError when the target is not bracketed and ConvergenceError at the
// iteration cap.
template <typename F>
BracketedRoot bisect_monotone(F&& f, double lo, double hi, double target,
                              double tol) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw std::domain_error("bisect_monotone: bracket must be finite with lo < hi");
  }
  if (!(tol > 0.0)) {
    throw std::domain_error("bisect_monotone: tolerance must be positive");
  }
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (!(f_lo <= target && target <= f_hi)) {
    throw BracketError("bisect_monotone: target not bracketed by [f(lo), f(hi)]");
  }
  for (int iter = 1; iter <= kMaxBisectionIterations; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    const double residual = f_mid - target;
    if (std::abs(residual) <= tol || (hi - lo) <= tol) {
      return BracketedRoot{mid, residual, iter};
    }
    if (f_mid < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw ConvergenceError("bisect_monotone: iteration cap exceeded");
}

namespace detail {

// Bisection driven to the floating-point resolution of the abscissa. The
// calibration solvers use this instead of a residual stop: near tiny targets
// the profile is so flat that a residual test would release the root orders
// of magnitude too early.
template <typename F>
double bisect_to_resolution(F&& f, double lo, double hi, double target) {
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((hi - lo) <=
        4.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)) {
      break;
    }
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

}  // namespace dpmc

#endif  // DPMC_SCALAR_GAUSS_HPP_
