#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

#include "logdiv/types.hpp"

namespace logdiv {

// Small dense rank-3 tensor T(i,j,k), k the "upper" index for Christoffel
// symbols Gamma_ij^k and the last index for lowered symbols Gamma_{ij,k}.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<size_t>(n) * n * n, 0.0) {}

  double& operator()(int i, int j, int k) {
    return data_[idx(i, j, k)];
  }
  double operator()(int i, int j, int k) const {
    return data_[idx(i, j, k)];
  }

  int dim() const { return n_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  size_t idx(int i, int j, int k) const {
    assert(i >= 0 && i < n_ && j >= 0 && j < n_ && k >= 0 && k < n_);
    return (static_cast<size_t>(i) * n_ + j) * n_ + k;
  }
  int n_ = 0;
  std::vector<double> data_;
};

// Rank-4 tensor R(i,j,k,l) with l the upper index: R_ijk^l.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n)
      : n_(n), data_(static_cast<size_t>(n) * n * n * n, 0.0) {}

  double& operator()(int i, int j, int k, int l) {
    return data_[idx(i, j, k, l)];
  }
  double operator()(int i, int j, int k, int l) const {
    return data_[idx(i, j, k, l)];
  }

  int dim() const { return n_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  size_t idx(int i, int j, int k, int l) const {
    assert(i >= 0 && i < n_ && j >= 0 && j < n_ && k >= 0 && k < n_ &&
           l >= 0 && l < n_);
    return ((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }
  int n_ = 0;
  std::vector<double> data_;
};

inline double max_abs_diff(const Tensor3& a, const Tensor3& b) {
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      for (int k = 0; k < a.dim(); ++k)
        m = std::max(m, std::abs(a(i, j, k) - b(i, j, k)));
  return m;
}

inline double max_abs_diff(const Tensor4& a, const Tensor4& b) {
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      for (int k = 0; k < a.dim(); ++k)
        for (int l = 0; l < a.dim(); ++l)
          m = std::max(m, std::abs(a(i, j, k, l) - b(i, j, k, l)));
  return m;
}

// Gamma_{ij,k} = sum_m Gamma_ij^m g_mk
inline Tensor3 lower_index(const Tensor3& gamma, const Matrix& g) {
  const int n = gamma.dim();
  Tensor3 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += gamma(i, j, m) * g(m, k);
        out(i, j, k) = s;
      }
  return out;
}

// Gamma_ij^k = g^{km} Gamma_{ij,m}, solved against the SPD metric.
inline Tensor3 raise_index(const Tensor3& gamma_lower, const Matrix& g) {
  const int n = gamma_lower.dim();
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError(
        "raise_index: metric is not positive definite");
  }
  Tensor3 out(n);
  Vector rhs(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (int m = 0; m < n; ++m) rhs(m) = gamma_lower(i, j, m);
      Vector x = llt.solve(rhs);
      for (int k = 0; k < n; ++k) out(i, j, k) = x(k);
    }
  return out;
}

}  // namespace logdiv
