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
// Mechanisms built on the calibration core: the iid matrix Gaussian
// perturbation, the matrix-variate Gaussian comparator bound (harmonic-number
// form), and the utility-weighted optimal covariance design.

#ifndef DPMC_MECHANISMS_HPP_
#define DPMC_MECHANISMS_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dpmc/calibration.hpp"
#include "dpmc/errors.hpp"
#include "dpmc/matnorm.hpp"

namespace dpmc {

// Query description: l2-sensitivity, output shape, budget, and how many
// times the mechanism composes.
struct MechanismSpec {
  MechanismSpec(double sensitivity_in, int rows_in, int cols_in,
                PrivacyBudget budget_in, int compositions_in = 1)
      : sensitivity(sensitivity_in),
        rows(rows_in),
        cols(cols_in),
        budget(budget_in),
        compositions(compositions_in) {
    if (!(std::isfinite(sensitivity) && sensitivity > 0.0)) {
      throw std::domain_error("MechanismSpec: sensitivity must be positive");
    }
    if (rows < 1 || cols < 1) {
      throw std::domain_error("MechanismSpec: dimensions must be >= 1");
    }
    if (compositions < 1) {
      throw std::domain_error("MechanismSpec: compositions must be >= 1");
    }
  }

  double sensitivity;
  int rows;
  int cols;
  PrivacyBudget budget;
  int compositions;
};

// Perturbed query output f(X) + sigma * N with sigma = s2 sqrt(T) / B. The
// noise scale does not depend on (rows, cols).
inline RealMatrix imgm_perturb(const RealMatrix& query_output,
                               const MechanismSpec& spec, CounterRng& rng) {
  if (query_output.rows() != spec.rows || query_output.cols() != spec.cols) {
    throw ShapeError("imgm_perturb: output shape does not match the mechanism spec");
  }
  const PrivacyBound bound =
      calibrate(spec.sensitivity, spec.budget, spec.compositions);
  return query_output +
         bound.sigma * sample_snd(spec.rows, spec.cols, rng);
}

// Generalized harmonic number H_{r,p} = sum_{i=1..r} i^-p, compensated
// summation so the 1e4-term sums used in comparisons keep full precision.
inline double harmonic(int count, double order) {
  if (count < 1) {
    throw std::domain_error("harmonic: count must be >= 1");
  }
  if (!(std::isfinite(order) && order >= 0.0)) {
    throw std::domain_error("harmonic: order must be finite and >= 0");
  }
  double sum = 0.0;
  double compensation = 0.0;
  for (int i = 1; i <= count; ++i) {
    const double term = std::pow(static_cast<double>(i), -order);
    const double y = term - compensation;
    const double t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// Parameters of the matrix-variate Gaussian comparator. gamma is the largest
// Frobenius norm any query output can reach; it can never be below half the
// sensitivity, and the clipped-query convention gamma = s2 is the default.
struct MvgParams {
  MvgParams(double sensitivity_in, double gamma_in, int rows_in, int cols_in,
            PrivacyBudget budget_in)
      : sensitivity(sensitivity_in),
        gamma(gamma_in),
        rows(rows_in),
        cols(cols_in),
        budget(budget_in) {
    if (!(std::isfinite(sensitivity) && sensitivity > 0.0)) {
      throw std::domain_error("MvgParams: sensitivity must be positive");
    }
    if (!(std::isfinite(gamma) && gamma > 0.0 && gamma >= 0.5 * sensitivity)) {
      throw std::domain_error("MvgParams: gamma must be positive and >= s2/2");
    }
    if (rows < 1 || cols < 1) {
      throw std::domain_error("MvgParams: dimensions must be >= 1");
    }
  }

  double sensitivity;
  double gamma;
  int rows;
  int cols;
  PrivacyBudget budget;
};

// Upper bound the comparator imposes on
// ||sigma(Sigma1^-1)||_2 * ||sigma(Sigma2^-1)||_2:
//
//   zeta   = 2 sqrt(-mn ln delta) - 2 ln delta + mn
//   alpha0 = (H_r + H_{r,1/2}) gamma^2 + 2 H_r gamma s2
//   beta0  = 2 (mn)^(1/4) H_r zeta s2
//   bound  = (-beta0 + sqrt(beta0^2 + 8 alpha0 eps))^2 / (4 alpha0^2)
//
// evaluated as 16 eps^2 / (beta0 + sqrt(beta0^2 + 8 alpha0 eps))^2, the
// algebraically identical form that does not cancel for small eps.
inline double mvg_singular_bound(const MvgParams& params) {
  const double mn = static_cast<double>(params.rows) * params.cols;
  const int r = std::min(params.rows, params.cols);
  const double h_r = harmonic(r, 1.0);
  const double h_r_half = harmonic(r, 0.5);
  const double s2 = params.sensitivity;
  const double gamma = params.gamma;
  const double eps = params.budget.epsilon;
  const double zeta = 2.0 * std::sqrt(-mn * std::log(params.budget.delta)) -
                      2.0 * std::log(params.budget.delta) + mn;
  const double alpha0 = (h_r + h_r_half) * gamma * gamma + 2.0 * h_r * gamma * s2;
  const double beta0 = 2.0 * std::pow(mn, 0.25) * h_r * zeta * s2;
  const double root = std::sqrt(beta0 * beta0 + 8.0 * alpha0 * eps);
  return 16.0 * eps * eps / ((beta0 + root) * (beta0 + root));
}

// Per-element noise standard deviation of the isotropic comparator design
// Sigma1 = s1^2 I, Sigma2 = s2^2 I at equality in the bound: the constraint
// reads sqrt(mn) / (s1^2 s2^2) <= bound, so s1 s2 = (mn)^(1/4) / sqrt(bound).
inline double mvg_iid_sigma(double bound, int rows, int cols) {
  if (!(std::isfinite(bound) && bound > 0.0)) {
    throw std::domain_error("mvg_iid_sigma: bound must be positive");
  }
  if (rows < 1 || cols < 1) {
    throw std::domain_error("mvg_iid_sigma: dimensions must be >= 1");
  }
  const double mn = static_cast<double>(rows) * cols;
  return std::pow(mn, 0.25) / std::sqrt(bound);
}

// Linear post-processing weights Y = W1 f(X) W2^T.
struct UtilitySubspace {
  UtilitySubspace(RealMatrix w1_in, RealMatrix w2_in)
      : w1(std::move(w1_in)), w2(std::move(w2_in)) {
    if (!w1.all_finite() || !w2.all_finite()) {
      throw std::domain_error("UtilitySubspace: weights must be finite");
    }
  }

  RealMatrix w1;
  RealMatrix w2;
};

struct DesignResult {
  CovariancePair cov;
  double objective = 0.0;        // E ||W1 U1 N U2^T W2^T||_F^2 of the design
  double minimum_formula = 0.0;  // (s2^2 T / B^2) sum sigma_i^2(W1) sum sigma_i^2(W2)
};

// Expected weighted noise energy E ||W1 U1 N U2^T W2^T||_F^2, which separates
// into ||W1 U1||_F^2 ||W2 U2||_F^2 because the entries of N are independent
// with unit variance.
inline double expected_error(const UtilitySubspace& sub, const CovariancePair& cov) {
  if (sub.w1.cols() != cov.u1().rows() || sub.w2.cols() != cov.u2().rows()) {
    throw ShapeError("expected_error: subspace and covariance do not conform");
  }
  const double left = frobenius_norm(sub.w1 * cov.u1());
  const double right = frobenius_norm(sub.w2 * cov.u2());
  return left * left * right * right;
}

// Error-minimizing covariance factors under the DP constraint. The optimum
// is flat spectra with sigma(U1) * sigma(U2) = s2 sqrt(T) / B; the split is
// chosen symmetric since the objective only sees the product, and the
// directional matrices are the identity because a flat spectrum makes the
// covariance a multiple of the identity in any basis. The reached minimum is
// (s2^2 T / B^2) * sum_i sigma_i^2(W1) * sum_i sigma_i^2(W2).
inline DesignResult optimal_design(const UtilitySubspace& sub,
                                   const MechanismSpec& spec) {
  if (sub.w1.cols() != spec.rows || sub.w2.cols() != spec.cols) {
    throw ShapeError("optimal_design: subspace does not match the mechanism spec shape");
  }
  const double w1_energy = frobenius_norm(sub.w1);  // sqrt(sum sigma_i^2)
  const double w2_energy = frobenius_norm(sub.w2);
  if (w1_energy == 0.0 || w2_energy == 0.0) {
    throw DegenerateSubspaceError("optimal_design: all-zero utility subspace");
  }
  const PrivacyBound bound =
      calibrate(spec.sensitivity, spec.budget, spec.compositions);
  const double product = bound.sigma;  // s2 sqrt(T) / B
  const double split = std::sqrt(product);
  const std::vector<double> d1(static_cast<std::size_t>(spec.rows), split);
  const std::vector<double> d2(static_cast<std::size_t>(spec.cols), split);
  CovariancePair cov = CovariancePair::from_factored(
      RealMatrix::identity(spec.rows), d1, RealMatrix::identity(spec.cols), d2);
  const double objective = expected_error(sub, cov);
  const double minimum_formula =
      product * product * (w1_energy * w1_energy) * (w2_energy * w2_energy);
  return DesignResult{std::move(cov), objective, minimum_formula};
}

}  // namespace dpmc

#endif  // DPMC_MECHANISMS_HPP_
