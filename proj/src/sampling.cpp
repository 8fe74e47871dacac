#include "logdiv/sampling.hpp"

#include <cmath>

namespace logdiv {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller on (0,1] x [0,1)
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Vector sample_interior_point(const Domain& dom, Rng& rng, double margin) {
  const int n = dom.dimension;
  constexpr int kMaxTries = 100000;
  for (int tries = 0; tries < kMaxTries; ++tries) {
    Vector x(n);
    for (int i = 0; i < n; ++i) {
      x(i) = rng.uniform(dom.box_lo(i), dom.box_hi(i));
    }
    if (!dom.contains(x)) continue;
    if (margin > 0.0 && dom.boundary_distance &&
        dom.boundary_distance(x) < margin) {
      continue;
    }
    return x;
  }
  throw SolveError("sample_interior_point: rejection sampling failed");
}

Vector sample_unit_tangent(const Matrix& g, Rng& rng) {
  const int n = static_cast<int>(g.rows());
  Vector z(n);
  do {
    for (int i = 0; i < n; ++i) z(i) = rng.normal();
  } while (z.norm() < 1e-12);
  z.normalize();
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("sample_unit_tangent: metric not SPD");
  }
  // solve L^T v = z
  return llt.matrixU().solve(z);
}

Vector g_orthonormalize(const Matrix& g, const Vector& v, const Vector& w) {
  const double vv = v.dot(g * v);
  Vector u = w - (v.dot(g * w) / vv) * v;
  const double un = std::sqrt(u.dot(g * u));
  if (un < 1e-10) {
    throw DegeneratePlaneError("g_orthonormalize: vectors nearly parallel");
  }
  return u / un;
}

}  // namespace logdiv
