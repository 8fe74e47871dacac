#pragma once

#include <functional>

#include "logdiv/tensor.hpp"
#include "logdiv/types.hpp"

// Central-difference oracles for scalar fields. Used as fallbacks when a
// user-supplied potential comes without analytic derivatives; downstream
// tolerances widen accordingly (see generator.hpp).
namespace logdiv::fd {

using ScalarFn = std::function<double(const Vector&)>;
using MatrixFn = std::function<Matrix(const Vector&)>;

inline Vector gradient(const ScalarFn& f, const Vector& x, double h) {
  const int n = static_cast<int>(x.size());
  Vector g(n);
  Vector p = x;
  for (int i = 0; i < n; ++i) {
    p(i) = x(i) + h;
    const double fp = f(p);
    p(i) = x(i) - h;
    const double fm = f(p);
    p(i) = x(i);
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline Matrix hessian(const ScalarFn& f, const Vector& x, double h) {
  const int n = static_cast<int>(x.size());
  Matrix H(n, n);
  const double f0 = f(x);
  Vector p = x;
  for (int i = 0; i < n; ++i) {
    p(i) = x(i) + h;
    const double fp = f(p);
    p(i) = x(i) - h;
    const double fm = f(p);
    p(i) = x(i);
    H(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Vector q = x;
      q(i) += h; q(j) += h;
      const double fpp = f(q);
      q(j) -= 2.0 * h;
      const double fpm = f(q);
      q(i) -= 2.0 * h;
      const double fmm = f(q);
      q(j) += 2.0 * h;
      const double fmp = f(q);
      H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    }
  }
  return H;
}

// Third derivative tensor from a Hessian oracle, symmetrized over the
// index placements (exact thirds of a potential are fully symmetric).
inline Tensor3 third_from_hessian(const MatrixFn& hess, const Vector& x,
                                  double h) {
  const int n = static_cast<int>(x.size());
  Tensor3 t(n);
  Vector p = x;
  for (int k = 0; k < n; ++k) {
    p(k) = x(k) + h;
    const Matrix Hp = hess(p);
    p(k) = x(k) - h;
    const Matrix Hm = hess(p);
    p(k) = x(k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        t(i, j, k) = (Hp(i, j) - Hm(i, j)) / (2.0 * h);
  }
  Tensor3 sym(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        sym(i, j, k) = (t(i, j, k) + t(i, k, j) + t(k, j, i)) / 3.0;
  return sym;
}

}  // namespace logdiv::fd
