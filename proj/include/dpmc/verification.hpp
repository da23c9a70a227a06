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
// Executable checks for the calibration and design claims: exact privacy
// profiles of a concrete noise distribution, the necessary-and-sufficient DP
// condition on singular values, the weighted-norm inequality, Monte Carlo
// estimators, and a brute-force search over the design feasible set.

#ifndef DPMC_VERIFICATION_HPP_
#define DPMC_VERIFICATION_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dpmc/calibration.hpp"
#include "dpmc/errors.hpp"
#include "dpmc/matnorm.hpp"
#include "dpmc/mechanisms.hpp"

namespace dpmc {

// Privacy loss distribution parameters: the loss of one mechanism run is
// N(eta, 2 eta) with eta = ||U1^-1 Delta U2^-T||_F^2 / 2, and T independent
// runs compose to N(T eta, 2 T eta).
struct PrivacyLossParams {
  double eta = 0.0;
  int compositions = 1;
};

struct ProfilePoint {
  double epsilon;
  Probability delta_achieved;
};

inline PrivacyLossParams privacy_loss_params(const RealMatrix& delta,
                                             const CovariancePair& cov,
                                             int compositions = 1) {
  if (compositions < 1) {
    throw std::domain_error("privacy_loss_params: compositions must be >= 1");
  }
  const double norm = delta_prime_norm(delta, cov);
  return PrivacyLossParams{0.5 * norm * norm, compositions};
}

// Smallest delta for which the loss N(T eta, 2 T eta) satisfies the
// (epsilon, delta) tail condition: g(sqrt(2 T eta), epsilon), clamped to
// [0, 1] since cancellation can land a hair below zero.
inline ProfilePoint profile_delta(const PrivacyLossParams& params, double epsilon) {
  if (!(std::isfinite(epsilon) && epsilon >= 0.0)) {
    throw std::domain_error("profile_delta: epsilon must be finite and >= 0");
  }
  if (!(params.eta >= 0.0)) {
    throw std::domain_error("profile_delta: eta must be >= 0");
  }
  if (params.eta == 0.0) {
    return ProfilePoint{epsilon, Probability(0.0)};
  }
  const double x = std::sqrt(2.0 * params.compositions * params.eta);
  const double d = g_eval(x, epsilon);
  return ProfilePoint{epsilon, Probability(std::clamp(d, 0.0, 1.0))};
}

struct DpCheckResult {
  bool holds = false;
  double slack = 0.0;             // sigma_m(U1) sigma_n(U2) - s2 sqrt(T) / B
  double worst_case_delta = 0.0;  // profile at the adversarial rank-one Delta
};

inline constexpr double kDpSlackTolerance = 1e-12;

// Necessary-and-sufficient DP check: the composed mechanism is private iff
// sigma_m(U1) sigma_n(U2) >= s2 sqrt(T) / B. The certificate is cross-checked
// through the exact profile of the worst adjacent pair, a rank-one difference
// of norm s2 aligned with the smallest singular directions of both factors,
// which attains ||Delta'||_F = s2 / (sigma_m(U1) sigma_n(U2)).
inline DpCheckResult check_dp(const CovariancePair& cov, double sensitivity,
                              const PrivacyBudget& budget, int compositions = 1) {
  if (!(std::isfinite(sensitivity) && sensitivity > 0.0)) {
    throw std::domain_error("check_dp: sensitivity must be positive");
  }
  if (compositions < 1) {
    throw std::domain_error("check_dp: compositions must be >= 1");
  }
  const double product = cov.u1_spectrum().back() * cov.u2_spectrum().back();
  const double b = solve_bound_analytic(budget);
  const double required =
      sensitivity * std::sqrt(static_cast<double>(compositions)) / b;
  const double worst_norm = sensitivity / product;
  const PrivacyLossParams worst{0.5 * worst_norm * worst_norm, compositions};
  const double worst_delta =
      profile_delta(worst, budget.epsilon).delta_achieved.value();
  return DpCheckResult{product >= required - kDpSlackTolerance,
                       product - required, worst_delta};
}

struct SingularGap {
  double lhs = 0.0;  // ||A B C||_F^2
  double rhs = 0.0;  // sum_i sigma_i^2(A) sigma_i^2(B) sigma_i^2(C)
};

// Both sides of the weighted-norm inequality
// ||A B C||_F^2 <= sum_{i=1..r} sigma_i^2(A) sigma_i^2(B) sigma_i^2(C)
// for A (m x m), B (m x n), C (n x n), r = min(m, n).
inline SingularGap singular_inequality_gap(const RealMatrix& a,
                                           const RealMatrix& b,
                                           const RealMatrix& c) {
  if (a.rows() != a.cols() || c.rows() != c.cols() || b.rows() != a.rows() ||
      b.cols() != c.rows()) {
    throw ShapeError("singular_inequality_gap: shapes must be (m,m),(m,n),(n,n)");
  }
  const double norm = frobenius_norm(a * b * c);
  const std::vector<double> sa = svd(a).values;
  const std::vector<double> sb = svd(b).values;
  const std::vector<double> sc = svd(c).values;
  const std::size_t r = sb.size();  // min(m, n)
  double rhs = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    rhs += sa[i] * sa[i] * sb[i] * sb[i] * sc[i] * sc[i];
  }
  return SingularGap{norm * norm, rhs};
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Sample mean and standard error of ||W1 Z W2^T||_F^2 over matrix-normal
// draws Z ~ MN(0, Sigma1, Sigma2). Since the mean is zero this draws N
// directly and applies the precomposed maps W1 U1 and W2 U2.
inline MonteCarloEstimate monte_carlo_expected_error(const UtilitySubspace& sub,
                                                     const CovariancePair& cov,
                                                     int samples,
                                                     CounterRng& rng) {
  if (samples < 100) {
    throw std::domain_error("monte_carlo_expected_error: need >= 100 samples");
  }
  if (sub.w1.cols() != cov.u1().rows() || sub.w2.cols() != cov.u2().rows()) {
    throw ShapeError("monte_carlo_expected_error: shapes do not conform");
  }
  const RealMatrix left = sub.w1 * cov.u1();
  const RealMatrix right = sub.w2 * cov.u2();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const RealMatrix n = sample_snd(cov.u1().rows(), cov.u2().rows(), rng);
    const double value = frobenius_norm(left * n * transpose(right));
    const double energy = value * value;
    sum += energy;
    sum_sq += energy * energy;
  }
  const double mean = sum / samples;
  const double variance =
      std::max(0.0, (sum_sq - samples * mean * mean) / (samples - 1));
  return MonteCarloEstimate{mean, std::sqrt(variance / samples)};
}

// Brute-force minimizer of
//   (sum_i sigma_i^2(W1) s1_{m-i+1}^2) * (sum_i sigma_i^2(W2) s2_{n-i+1}^2)
// over ordered spectra with s1_{m-i+1} * s2_{n-i+1} >= s2 / B for i in [r].
// The U1 spectrum ranges over a log grid spanning [c/10, 10c] with c = s2/B;
// the U2 spectrum is then projected exactly onto the binding surface and the
// ordering cone, so the reported minimum touches the true constraint set
// rather than a gridded shell of it.
inline double design_grid_oracle(const UtilitySubspace& sub, double sensitivity,
                                 double bound_b, int grid_points) {
  const int m = sub.w1.cols();
  const int n = sub.w2.cols();
  if (m > 4 || n > 4) {
    throw ScaleError("design_grid_oracle: dimensions capped at 4");
  }
  if (grid_points < 8) {
    throw std::domain_error("design_grid_oracle: need >= 8 grid points");
  }
  if (!(sensitivity > 0.0 && bound_b > 0.0)) {
    throw std::domain_error("design_grid_oracle: s2 and B must be positive");
  }
  auto padded_spectrum = [](const RealMatrix& w, int len) {
    std::vector<double> s = svd(w).values;
    s.resize(static_cast<std::size_t>(len), 0.0);
    return s;
  };
  const std::vector<double> w1s = padded_spectrum(sub.w1, m);
  const std::vector<double> w2s = padded_spectrum(sub.w2, n);
  const int r = std::min(m, n);
  const double c = sensitivity / bound_b;

  std::vector<double> grid(static_cast<std::size_t>(grid_points));
  for (int k = 0; k < grid_points; ++k) {
    grid[static_cast<std::size_t>(k)] =
        (c / 10.0) * std::pow(100.0, static_cast<double>(k) / (grid_points - 1));
  }

  // u holds sigma(U1) descending; only the r smallest entries are
  // enumerated, the top m - r are forced equal to the largest of them.
  std::vector<int> idx(static_cast<std::size_t>(r), 0);
  std::vector<double> u(static_cast<std::size_t>(m), 0.0);
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  double best = std::numeric_limits<double>::infinity();

  const auto evaluate = [&]() {
    // idx[i-1] drives sigma_{m-i+1}(U1) for i = 1..r.
    for (int i = 1; i <= r; ++i) {
      u[static_cast<std::size_t>(m - i)] = grid[static_cast<std::size_t>(idx[static_cast<std::size_t>(i - 1)])];
    }
    for (int j = 0; j < m - r; ++j) {
      u[static_cast<std::size_t>(j)] = u[static_cast<std::size_t>(m - r)];
    }
    // Exact projection of sigma(U2): minimal spectrum meeting the products
    // and the ordering, built from the smallest entry upward.
    for (int i = 1; i <= n; ++i) {
      const double floor_product =
          i <= r ? c / u[static_cast<std::size_t>(m - i)] : 0.0;
      const double below =
          i == 1 ? 0.0 : v[static_cast<std::size_t>(n - i + 1)];
      v[static_cast<std::size_t>(n - i)] = std::max(floor_product, below);
    }
    double s1 = 0.0;
    for (int i = 0; i < m; ++i) {
      s1 += w1s[static_cast<std::size_t>(i)] * w1s[static_cast<std::size_t>(i)] *
            u[static_cast<std::size_t>(m - 1 - i)] * u[static_cast<std::size_t>(m - 1 - i)];
    }
    double s2sum = 0.0;
    for (int i = 0; i < n; ++i) {
      s2sum += w2s[static_cast<std::size_t>(i)] * w2s[static_cast<std::size_t>(i)] *
               v[static_cast<std::size_t>(n - 1 - i)] * v[static_cast<std::size_t>(n - 1 - i)];
    }
    best = std::min(best, s1 * s2sum);
  };

  // Enumerate non-decreasing index tuples idx[0] <= ... <= idx[r-1]:
  // idx[i-1] drives sigma_{m-i+1}(U1), and a descending spectrum lists its
  // r smallest entries in ascending order sigma_m <= ... <= sigma_{m-r+1}.
  while (true) {
    evaluate();
    int pos = r - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == grid_points - 1) {
      --pos;
    }
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int k = pos + 1; k < r; ++k) {
      idx[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(pos)];
    }
  }
  return best;
}

}  // namespace dpmc

#endif  // DPMC_VERIFICATION_HPP_
