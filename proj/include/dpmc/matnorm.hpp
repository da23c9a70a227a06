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
// Dense matrix kernel: small row-major matrices, a one-sided Jacobi SVD,
// matrix-normal sampling Z = M + U1 N U2^T, and the whitened-difference norm
// ||U1^-1 Delta U2^-T||_F that drives every privacy-profile computation.

#ifndef DPMC_MATNORM_HPP_
#define DPMC_MATNORM_HPP_

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dpmc/errors.hpp"
#include "dpmc/rng.hpp"

namespace dpmc {

// Dense real matrix, row-major.
class RealMatrix {
 public:
  RealMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) {
      throw std::domain_error("RealMatrix: dimensions must be >= 1");
    }
    data_.assign(static_cast<std::size_t>(rows) * cols, fill);
  }

  static RealMatrix identity(int n) {
    RealMatrix m(n, n, 0.0);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double operator()(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool all_finite() const {
    for (double v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
};

inline RealMatrix transpose(const RealMatrix& a) {
  RealMatrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matrix product: inner dimensions differ");
  }
  RealMatrix c(a.rows(), b.cols(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) {
        c(i, j) += aik * b(k, j);
      }
    }
  }
  return c;
}

inline RealMatrix operator*(double s, const RealMatrix& a) {
  RealMatrix c = a;
  for (double& v : c.data()) v *= s;
  return c;
}

inline RealMatrix operator+(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("matrix sum: shapes differ");
  }
  RealMatrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

inline RealMatrix operator-(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("matrix difference: shapes differ");
  }
  RealMatrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

inline double frobenius_norm(const RealMatrix& a) {
  double sum = 0.0;
  for (double v : a.data()) sum += v * v;
  return std::sqrt(sum);
}

// Singular values in non-increasing order, optionally with full orthogonal
// directional matrices so that a = left * diag(values) * right^T.
struct SingularSpectrum {
  std::vector<double> values;
  std::optional<RealMatrix> left;
  std::optional<RealMatrix> right;
};

namespace detail {

// Gram-Schmidt fill: replace flagged columns of q (m x m) with unit vectors
// orthogonal to all the others. Each slot takes the canonical basis vector
// with the largest residual against the current span; the residual norms
// square-sum to the complement dimension, so the best one is at least
// 1/sqrt(m). Orthogonalization is run twice per column.
inline void orthogonal_complete(RealMatrix& q, const std::vector<bool>& keep) {
  const int m = q.rows();
  std::vector<int> done;
  for (int j = 0; j < m; ++j) {
    if (keep[static_cast<std::size_t>(j)]) done.push_back(j);
  }
  std::vector<double> v(static_cast<std::size_t>(m), 0.0);
  std::vector<double> best(static_cast<std::size_t>(m), 0.0);
  for (int j = 0; j < m; ++j) {
    if (keep[static_cast<std::size_t>(j)]) continue;
    double best_norm = -1.0;
    for (int candidate = 0; candidate < m; ++candidate) {
      std::fill(v.begin(), v.end(), 0.0);
      v[static_cast<std::size_t>(candidate)] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (int k : done) {
          double dot = 0.0;
          for (int i = 0; i < m; ++i) dot += v[static_cast<std::size_t>(i)] * q(i, k);
          for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] -= dot * q(i, k);
        }
      }
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      if (norm > best_norm) {
        best_norm = norm;
        best = v;
      }
    }
    for (int i = 0; i < m; ++i) q(i, j) = best[static_cast<std::size_t>(i)] / best_norm;
    done.push_back(j);
  }
}

}  // namespace detail

// One-sided Jacobi SVD with full directional matrices. Adequate up to a few
// hundred rows/columns; everything in this library is far smaller.
inline SingularSpectrum svd(const RealMatrix& a) {
  if (!a.all_finite()) {
    throw std::domain_error("svd: matrix must be finite");
  }
  const bool flipped = a.rows() < a.cols();
  RealMatrix w = flipped ? transpose(a) : a;
  const int m = w.rows();
  const int n = w.cols();
  RealMatrix v = RealMatrix::identity(n);

  constexpr double kPairTolerance = 1e-15;
  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (int i = 0; i < m; ++i) {
          app += w(i, p) * w(i, p);
          aqq += w(i, q) * w(i, q);
          apq += w(i, p) * w(i, q);
        }
        if (std::abs(apq) <= kPairTolerance * std::sqrt(app * aqq)) continue;
        rotated = true;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double sign = zeta >= 0.0 ? 1.0 : -1.0;
        const double t = sign / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < m; ++i) {
          const double wp = w(i, p);
          const double wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
        }
        for (int i = 0; i < n; ++i) {
          const double vp = v(i, p);
          const double vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> values(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    double norm = 0.0;
    for (int i = 0; i < m; ++i) norm += w(i, j) * w(i, j);
    values[static_cast<std::size_t>(j)] = std::sqrt(norm);
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) order[static_cast<std::size_t>(j)] = j;
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return values[static_cast<std::size_t>(x)] > values[static_cast<std::size_t>(y)];
  });

  RealMatrix u_full(m, m, 0.0);
  RealMatrix v_full(n, n, 0.0);
  std::vector<double> sorted(static_cast<std::size_t>(n));
  std::vector<bool> u_filled(static_cast<std::size_t>(m), false);
  for (int j = 0; j < n; ++j) {
    const int src = order[static_cast<std::size_t>(j)];
    const double s = values[static_cast<std::size_t>(src)];
    sorted[static_cast<std::size_t>(j)] = s;
    for (int i = 0; i < n; ++i) v_full(i, j) = v(i, src);
    if (s > 0.0) {
      for (int i = 0; i < m; ++i) u_full(i, j) = w(i, src) / s;
      u_filled[static_cast<std::size_t>(j)] = true;
    }
  }
  detail::orthogonal_complete(u_full, u_filled);

  SingularSpectrum result;
  result.values = sorted;  // length min(rows, cols) of the input
  if (flipped) {
    result.left = std::move(v_full);
    result.right = std::move(u_full);
  } else {
    result.left = std::move(u_full);
    result.right = std::move(v_full);
  }
  return result;
}

namespace detail {

struct LuFactors {
  RealMatrix lu;
  std::vector<int> pivots;
};

inline LuFactors lu_factor(const RealMatrix& a) {
  const int n = a.rows();
  LuFactors f{a, std::vector<int>(static_cast<std::size_t>(n))};
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    double best = std::abs(f.lu(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double cand = std::abs(f.lu(i, k));
      if (cand > best) {
        best = cand;
        pivot = i;
      }
    }
    if (best == 0.0) {
      throw ConditioningError("lu_factor: factor matrix is singular");
    }
    f.pivots[static_cast<std::size_t>(k)] = pivot;
    if (pivot != k) {
      for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(pivot, j));
    }
    for (int i = k + 1; i < n; ++i) {
      f.lu(i, k) /= f.lu(k, k);
      const double lik = f.lu(i, k);
      if (lik == 0.0) continue;
      for (int j = k + 1; j < n; ++j) f.lu(i, j) -= lik * f.lu(k, j);
    }
  }
  return f;
}

// Solve a * x = rhs for all columns of rhs, in place. The stored multipliers
// refer to the fully pivoted row order, so every interchange is applied to
// the right-hand side before the triangular sweeps.
inline void lu_solve(const LuFactors& f, RealMatrix& rhs) {
  const int n = f.lu.rows();
  const int k = rhs.cols();
  for (int i = 0; i < n; ++i) {
    const int p = f.pivots[static_cast<std::size_t>(i)];
    if (p != i) {
      for (int j = 0; j < k; ++j) std::swap(rhs(i, j), rhs(p, j));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int r = i + 1; r < n; ++r) {
      const double l = f.lu(r, i);
      if (l == 0.0) continue;
      for (int j = 0; j < k; ++j) rhs(r, j) -= l * rhs(i, j);
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    const double d = f.lu(i, i);
    for (int j = 0; j < k; ++j) rhs(i, j) /= d;
    for (int r = 0; r < i; ++r) {
      const double u = f.lu(r, i);
      if (u == 0.0) continue;
      for (int j = 0; j < k; ++j) rhs(r, j) -= u * rhs(i, j);
    }
  }
}

inline bool nearly_orthogonal(const RealMatrix& q, double tol) {
  const int n = q.rows();
  if (q.cols() != n) return false;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double dot = 0.0;
      for (int k = 0; k < n; ++k) dot += q(k, i) * q(k, j);
      if (std::abs(dot - (i == j ? 1.0 : 0.0)) > tol) return false;
    }
  }
  return true;
}

}  // namespace detail

// Invertible factor pair (U1, U2) with Sigma_k = U_k U_k^T, carrying cached
// singular spectra. The factored constructor keeps the (direction, diagonal)
// form so whitening can divide by the diagonal instead of solving.
class CovariancePair {
 public:
  CovariancePair(const RealMatrix& u1, const RealMatrix& u2) : u1_(u1), u2_(u2) {
    if (u1.rows() != u1.cols() || u2.rows() != u2.cols()) {
      throw ShapeError("CovariancePair: factors must be square");
    }
    if (!u1.all_finite() || !u2.all_finite()) {
      throw std::domain_error("CovariancePair: factors must be finite");
    }
    spectrum1_ = svd(u1).values;
    spectrum2_ = svd(u2).values;
    if (spectrum1_.back() <= 0.0 || spectrum2_.back() <= 0.0) {
      throw ConditioningError("CovariancePair: factor matrix is singular");
    }
  }

  // Factors given as U_k = W_k * diag(d_k) with orthogonal W_k. The diagonal
  // order is preserved as given; cached spectra are the sorted magnitudes.
  static CovariancePair from_factored(const RealMatrix& w1,
                                      const std::vector<double>& d1,
                                      const RealMatrix& w2,
                                      const std::vector<double>& d2) {
    if (w1.rows() != w1.cols() || w2.rows() != w2.cols() ||
        static_cast<int>(d1.size()) != w1.cols() ||
        static_cast<int>(d2.size()) != w2.cols()) {
      throw ShapeError("CovariancePair: factored shapes do not conform");
    }
    if (!detail::nearly_orthogonal(w1, 1e-8) ||
        !detail::nearly_orthogonal(w2, 1e-8)) {
      throw std::domain_error("CovariancePair: directions must be orthogonal");
    }
    for (double d : d1) {
      if (!(d > 0.0)) throw ConditioningError("CovariancePair: nonpositive diagonal");
    }
    for (double d : d2) {
      if (!(d > 0.0)) throw ConditioningError("CovariancePair: nonpositive diagonal");
    }
    RealMatrix u1 = w1;
    for (int i = 0; i < u1.rows(); ++i)
      for (int j = 0; j < u1.cols(); ++j) u1(i, j) *= d1[static_cast<std::size_t>(j)];
    RealMatrix u2 = w2;
    for (int i = 0; i < u2.rows(); ++i)
      for (int j = 0; j < u2.cols(); ++j) u2(i, j) *= d2[static_cast<std::size_t>(j)];
    CovariancePair pair(std::move(u1), std::move(u2));
    pair.w1_ = w1;
    pair.w2_ = w2;
    pair.d1_ = d1;
    pair.d2_ = d2;
    // The spectra of W * diag(d) are exactly the sorted magnitudes of d.
    pair.spectrum1_ = d1;
    std::sort(pair.spectrum1_.begin(), pair.spectrum1_.end(), std::greater<double>());
    pair.spectrum2_ = d2;
    std::sort(pair.spectrum2_.begin(), pair.spectrum2_.end(), std::greater<double>());
    return pair;
  }

  const RealMatrix& u1() const { return u1_; }
  const RealMatrix& u2() const { return u2_; }
  // Non-increasing singular values of U1 / U2.
  const std::vector<double>& u1_spectrum() const { return spectrum1_; }
  const std::vector<double>& u2_spectrum() const { return spectrum2_; }
  bool factored() const { return w1_.has_value(); }
  const RealMatrix& w1() const { return *w1_; }
  const RealMatrix& w2() const { return *w2_; }
  const std::vector<double>& d1() const { return d1_; }
  const std::vector<double>& d2() const { return d2_; }

 private:
  RealMatrix u1_;
  RealMatrix u2_;
  std::vector<double> spectrum1_;
  std::vector<double> spectrum2_;
  std::optional<RealMatrix> w1_;
  std::optional<RealMatrix> w2_;
  std::vector<double> d1_;
  std::vector<double> d2_;
};

// Matrix of independent standard normal draws, filled row-major from rng.
inline RealMatrix sample_snd(int rows, int cols, CounterRng& rng) {
  RealMatrix z(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      z(i, j) = rng.next_gaussian();
    }
  }
  return z;
}

// Matrix-normal sample Z = M + U1 N U2^T with N elementwise standard normal.
inline RealMatrix sample_matrix_normal(const RealMatrix& mean,
                                       const CovariancePair& cov,
                                       CounterRng& rng) {
  if (cov.u1().rows() != mean.rows() || cov.u2().rows() != mean.cols()) {
    throw ShapeError("sample_matrix_normal: shapes do not conform");
  }
  const RealMatrix n = sample_snd(mean.rows(), mean.cols(), rng);
  return mean + cov.u1() * n * transpose(cov.u2());
}

// ||U1^-1 Delta U2^-T||_F. General factors go through pivoted triangular
// solves; factored pairs divide by the diagonal directly, which stays stable
// when the smallest singular values are tiny.
inline double delta_prime_norm(const RealMatrix& delta, const CovariancePair& cov) {
  if (cov.u1().rows() != delta.rows() || cov.u2().rows() != delta.cols()) {
    throw ShapeError("delta_prime_norm: shapes do not conform");
  }
  if (cov.factored()) {
    const RealMatrix t = transpose(cov.w1()) * delta * cov.w2();
    double sum = 0.0;
    for (int i = 0; i < t.rows(); ++i) {
      for (int j = 0; j < t.cols(); ++j) {
        const double w = t(i, j) / (cov.d1()[static_cast<std::size_t>(i)] *
                                    cov.d2()[static_cast<std::size_t>(j)]);
        sum += w * w;
      }
    }
    return std::sqrt(sum);
  }
  const detail::LuFactors f1 = detail::lu_factor(cov.u1());
  RealMatrix x = delta;
  detail::lu_solve(f1, x);  // x = U1^-1 Delta
  const detail::LuFactors f2 = detail::lu_factor(cov.u2());
  RealMatrix xt = transpose(x);
  detail::lu_solve(f2, xt);  // xt = U2^-1 (U1^-1 Delta)^T = (U1^-1 Delta U2^-T)^T
  return frobenius_norm(xt);
}

}  // namespace dpmc

#endif  // DPMC_MATNORM_HPP_
