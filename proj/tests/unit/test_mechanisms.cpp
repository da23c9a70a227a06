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

#include "dpmc/mechanisms.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "support/oracles.hpp"
#include "support/testutil.hpp"
#include "dpmc/verification.hpp"

using dpmc::CounterRng;
using dpmc::CovariancePair;
using dpmc::DesignResult;
using dpmc::MechanismSpec;
using dpmc::MvgParams;
using dpmc::PrivacyBudget;
using dpmc::RealMatrix;
using dpmc::UtilitySubspace;
using dpmc::expected_error;
using dpmc::harmonic;
using dpmc::imgm_perturb;
using dpmc::mvg_iid_sigma;
using dpmc::mvg_singular_bound;
using dpmc::optimal_design;

namespace {
// Frozen from direct long double evaluation of the printed comparator
// formula with H_2 = 3/2 and H_{2,1/2} = 1 + 1/sqrt(2).
constexpr double kMvgBound2x2 = 1.3471382353427997e-4;
constexpr double kBoundEps1Delta1em5 = 0.2680511232112942181;
}  // namespace

TEST_CASE("MechanismSpec validation") {
  const PrivacyBudget budget(1.0, 1e-5);
  CHECK_THROWS_AS(MechanismSpec(0.0, 2, 2, budget), std::domain_error);
  CHECK_THROWS_AS(MechanismSpec(1.0, 0, 2, budget), std::domain_error);
  CHECK_THROWS_AS(MechanismSpec(1.0, 2, 2, budget, 0), std::domain_error);
}

TEST_CASE("imgm_perturb is the query plus a scaled seeded stream") {
  const MechanismSpec spec(1.0, 3, 2, PrivacyBudget(1.0, 1e-5));
  const dpmc::PrivacyBound bound = dpmc::calibrate(1.0, spec.budget, 1);

  // Zero query: definitional decomposition is exact.
  CounterRng rng_a(17);
  CounterRng rng_b(17);
  const RealMatrix perturbed = imgm_perturb(RealMatrix(3, 2, 0.0), spec, rng_a);
  const RealMatrix stream = dpmc::sample_snd(3, 2, rng_b);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(perturbed(i, j) == bound.sigma * stream(i, j));

  // Nonzero query: same decomposition up to one rounding of the addition.
  std::mt19937_64 gen(41);
  const RealMatrix query = dpmc_test::random_matrix(gen, 3, 2, 5.0);
  CounterRng rng_c(17);
  const RealMatrix shifted = imgm_perturb(query, spec, rng_c);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(std::abs((shifted(i, j) - query(i, j)) - bound.sigma * stream(i, j)) <=
            1e-12);

  CHECK_THROWS_AS(imgm_perturb(RealMatrix(2, 2, 0.0), spec, rng_c),
                  dpmc::ShapeError);
}

TEST_CASE("imgm_perturb noise shrinks as delta approaches one") {
  const MechanismSpec spec(1.0, 2, 2, PrivacyBudget(1.0, 1.0 - 1e-9));
  CounterRng rng(3);
  RealMatrix query(2, 2, 0.0);
  query(0, 0) = 1.0;
  query(1, 1) = -2.0;
  const RealMatrix out = imgm_perturb(query, spec, rng);
  const double sigma = dpmc::calibrate(1.0, spec.budget, 1).sigma;
  CHECK(sigma < 0.09);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(std::abs(out(i, j) - query(i, j)) <= 6.0 * sigma);
}

TEST_CASE("imgm_perturb per-element deviation matches the calibrated scale") {
  const MechanismSpec spec(1.0, 10, 10, PrivacyBudget(1.0, 1e-5));
  CounterRng rng(8);
  const RealMatrix zero(10, 10, 0.0);
  double sum_sq = 0.0;
  const int reps = 1000;  // 1e5 elements in total
  for (int r = 0; r < reps; ++r) {
    const RealMatrix z = imgm_perturb(zero, spec, rng);
    for (double v : z.data()) sum_sq += v * v;
  }
  const double observed = std::sqrt(sum_sq / (reps * 100));
  const double want = 1.0 / kBoundEps1Delta1em5;
  CHECK(std::abs(observed - want) <= 0.01 * want);
}

TEST_CASE("noise scale is independent of the output dimensions") {
  const PrivacyBudget budget(0.5, 1e-6);
  const double sigma = dpmc::calibrate(1.0, budget, 1).sigma;
  for (int dim : {2, 64, 512}) {
    const MechanismSpec spec(1.0, dim, dim, budget);
    CounterRng rng(1);
    const RealMatrix out = imgm_perturb(RealMatrix(dim, dim, 0.0), spec, rng);
    CHECK(out.rows() == dim);
    // The scale used inside the mechanism is the dimension-free calibration.
    CHECK(dpmc::calibrate(spec.sensitivity, spec.budget, spec.compositions).sigma ==
          sigma);
  }
}

TEST_CASE("harmonic sums") {
  CHECK(harmonic(2, 1.0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(harmonic(2, 0.5) ==
        doctest::Approx(1.0 + 1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(harmonic(5, 0.0) == 5.0);
  CHECK(std::abs(harmonic(10000, 1.0) -
                 static_cast<double>(dpmc_oracles::harmonic_reverse_ld(10000, 1.0L))) <=
        1e-12);
  CHECK_THROWS_AS(harmonic(0, 1.0), std::domain_error);
  CHECK_THROWS_AS(harmonic(3, -1.0), std::domain_error);
}

TEST_CASE("mvg_singular_bound reduces to the one-term harmonic case") {
  const PrivacyBudget budget(1.0, 1e-5);
  const MvgParams params(1.0, 1.0, 1, 1, budget);
  // r = 1: H_1 = H_{1,1/2} = 1, so alpha0 = 2 gamma^2 + 2 gamma s2.
  const double alpha0 = 2.0 + 2.0;
  const double zeta = 2.0 * std::sqrt(-std::log(1e-5)) - 2.0 * std::log(1e-5) + 1.0;
  const double beta0 = 2.0 * zeta;
  const double root = std::sqrt(beta0 * beta0 + 8.0 * alpha0);
  const double want = 16.0 / ((beta0 + root) * (beta0 + root));
  CHECK(mvg_singular_bound(params) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("mvg_singular_bound frozen golden value") {
  const MvgParams params(1.0, 1.0, 2, 2, PrivacyBudget(1.0, 1e-5));
  CHECK(std::abs(mvg_singular_bound(params) - kMvgBound2x2) <=
        1e-12 * kMvgBound2x2 + 1e-18);
}

TEST_CASE("mvg_singular_bound strictly decreases when a dimension doubles") {
  double prev = std::numeric_limits<double>::infinity();
  for (int n : {2, 4, 8, 16, 32}) {
    const MvgParams params(1.0, 1.0, 4, n, PrivacyBudget(1.0, 1e-5));
    const double bound = mvg_singular_bound(params);
    CHECK(bound < prev);
    prev = bound;
  }
}

TEST_CASE("MvgParams validates gamma against the sensitivity") {
  const PrivacyBudget budget(1.0, 1e-5);
  CHECK_THROWS_AS(MvgParams(1.0, 0.4, 2, 2, budget), std::domain_error);
  CHECK_THROWS_AS(MvgParams(1.0, 0.0, 2, 2, budget), std::domain_error);
  CHECK(MvgParams(1.0, 0.5, 2, 2, budget).gamma == 0.5);
}

TEST_CASE("mvg_iid_sigma conversions") {
  CHECK(mvg_iid_sigma(1.0, 1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mvg_iid_sigma(4.0, 1, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(mvg_iid_sigma(0.0, 2, 2), std::domain_error);

  // Algebraic round trip through the golden 2x2 bound: feeding the sigma
  // back as an isotropic design reproduces the norm product at equality.
  const double sigma = mvg_iid_sigma(kMvgBound2x2, 2, 2);
  const double split = std::sqrt(sigma);  // s1 = s2 = sqrt(sigma)
  const double norm_product =
      (std::sqrt(2.0) / (split * split)) * (std::sqrt(2.0) / (split * split));
  CHECK(std::abs(norm_product - kMvgBound2x2) <= 1e-10);
}

TEST_CASE("mvg comparator degrades against the iid mechanism in high privacy") {
  // Per-element noise variance ratio versus the calibrated mechanism, at
  // m = n = 4, s2 = gamma = 1, delta = 1e-5.
  double prev_ratio = 0.0;
  for (double eps : {0.1, 0.01}) {
    const PrivacyBudget budget(eps, 1e-5);
    const MvgParams params(1.0, 1.0, 4, 4, budget);
    const double mvg_sigma = mvg_iid_sigma(mvg_singular_bound(params), 4, 4);
    const double imgm_sigma = dpmc::calibrate(1.0, budget, 1).sigma;
    const double variance_ratio =
        (mvg_sigma / imgm_sigma) * (mvg_sigma / imgm_sigma);
    CHECK(variance_ratio > 1e3);
    CHECK(variance_ratio > prev_ratio);
    prev_ratio = variance_ratio;
  }
}

TEST_CASE("expected_error identity and homogeneity") {
  const CovariancePair id(RealMatrix::identity(2), RealMatrix::identity(2));
  const UtilitySubspace sub(RealMatrix::identity(2), RealMatrix::identity(2));
  CHECK(expected_error(sub, id) == doctest::Approx(4.0).epsilon(1e-14));

  std::mt19937_64 gen(51);
  const UtilitySubspace random_sub(dpmc_test::random_matrix(gen, 3, 3),
                                   dpmc_test::random_matrix(gen, 2, 2));
  const CovariancePair cov = dpmc_test::random_covariance(gen, 3, 2);
  const CovariancePair scaled(3.0 * cov.u1(), cov.u2());
  CHECK(expected_error(random_sub, scaled) ==
        doctest::Approx(9.0 * expected_error(random_sub, cov)).epsilon(1e-12));

  CHECK_THROWS_AS(expected_error(random_sub, id), dpmc::ShapeError);
}

TEST_CASE("expected_error agrees with Monte Carlo") {
  std::mt19937_64 gen(52);
  const UtilitySubspace sub(dpmc_test::random_matrix(gen, 2, 3),
                            dpmc_test::random_matrix(gen, 2, 2));
  const CovariancePair cov = dpmc_test::random_covariance(gen, 3, 2);
  CounterRng rng(77);
  const dpmc::MonteCarloEstimate mc =
      dpmc::monte_carlo_expected_error(sub, cov, 20000, rng);
  CHECK(std::abs(mc.mean - expected_error(sub, cov)) <= 4.0 * mc.std_error);
}

TEST_CASE("optimal_design closed form on identity subspaces") {
  const PrivacyBudget budget(1.0, 1e-5);
  const MechanismSpec spec(1.0, 3, 2, budget);
  const UtilitySubspace sub(RealMatrix::identity(3), RealMatrix::identity(2));
  const DesignResult design = optimal_design(sub, spec);

  const double product = dpmc::calibrate(1.0, budget, 1).sigma;  // s2 / B
  CHECK(std::abs(design.minimum_formula - product * product * 6.0) <= 1e-12);
  CHECK(std::abs(design.objective - design.minimum_formula) <=
        1e-10 * design.minimum_formula);

  // Flat spectra splitting the product symmetrically.
  for (double v : design.cov.u1_spectrum())
    CHECK(v == doctest::Approx(std::sqrt(product)).epsilon(1e-12));
  for (double v : design.cov.u2_spectrum())
    CHECK(v == doctest::Approx(std::sqrt(product)).epsilon(1e-12));
  CHECK(std::abs(design.cov.u1_spectrum().back() * design.cov.u2_spectrum().back() -
                 product) <= 1e-10);
}

TEST_CASE("optimal_design scales quadratically and ignores subspace scaling in the factors") {
  std::mt19937_64 gen(53);
  const PrivacyBudget budget(0.5, 1e-4);
  const MechanismSpec spec(1.0, 3, 3, budget);
  const RealMatrix w1 = dpmc_test::random_matrix(gen, 2, 3);
  const RealMatrix w2 = dpmc_test::random_matrix(gen, 3, 3);
  const DesignResult base = optimal_design(UtilitySubspace(w1, w2), spec);
  const DesignResult scaled = optimal_design(UtilitySubspace(2.0 * w1, w2), spec);
  CHECK(scaled.objective == doctest::Approx(4.0 * base.objective).epsilon(1e-12));
  for (int i = 0; i < 3; ++i) {
    CHECK(scaled.cov.u1_spectrum()[static_cast<std::size_t>(i)] ==
          base.cov.u1_spectrum()[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("optimal_design rejects degenerate subspaces and wrong shapes") {
  const MechanismSpec spec(1.0, 2, 2, PrivacyBudget(1.0, 1e-5));
  CHECK_THROWS_AS(
      optimal_design(UtilitySubspace(RealMatrix(2, 2, 0.0), RealMatrix::identity(2)),
                     spec),
      dpmc::DegenerateSubspaceError);
  CHECK_THROWS_AS(
      optimal_design(UtilitySubspace(RealMatrix::identity(3), RealMatrix::identity(2)),
                     spec),
      dpmc::ShapeError);
}

TEST_CASE("optimal_design satisfies the DP condition with zero slack") {
  const PrivacyBudget budget(1.0, 1e-5);
  for (int t : {1, 4}) {
    const MechanismSpec spec(1.5, 3, 2, budget, t);
    const UtilitySubspace sub(RealMatrix::identity(3), RealMatrix::identity(2));
    const DesignResult design = optimal_design(sub, spec);
    const dpmc::DpCheckResult check =
        dpmc::check_dp(design.cov, spec.sensitivity, budget, t);
    CHECK(check.holds);
    CHECK(std::abs(check.slack) <= 1e-12);
    CHECK(std::abs(check.worst_case_delta - budget.delta) <= 1e-9);
  }
}
