#include "logdiv/generator.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "logdiv/fd.hpp"

namespace logdiv {

double Generator::alpha_value() const {
  if (!alpha) {
    throw std::invalid_argument(
        "alpha_value: generator carries the Bregman tag");
  }
  return alpha->value();
}

Generator make_ball_log_generator(int n, double c, const Vector& m,
                                  Alpha alpha) {
  if (n < 2) {
    throw std::invalid_argument("make_ball_log_generator: need n >= 2, got " +
                                std::to_string(n));
  }
  if (!(c > 0.0)) {
    throw std::invalid_argument("make_ball_log_generator: need c > 0, got " +
                                std::to_string(c));
  }
  if (m.size() != n) {
    throw std::invalid_argument(
        "make_ball_log_generator: center has wrong dimension");
  }

  const double a = alpha.value();
  const double radius = std::sqrt(c);

  Domain dom;
  dom.dimension = n;
  dom.contains = [c, m](const Vector& x) { return (x - m).squaredNorm() < c; };
  dom.interior_margin = 0.1 * radius;
  dom.center = m;
  dom.box_lo = m.array() - radius;
  dom.box_hi = m.array() + radius;
  dom.boundary_distance = [radius, m](const Vector& x) {
    return radius - (x - m).norm();
  };

  Generator g;
  g.domain = std::move(dom);
  g.alpha = alpha;
  g.phi = [c, m, a](const Vector& x) {
    const double s = c - (x - m).squaredNorm();
    if (!(s > 0.0)) {
      throw OutOfDomainError("ball_log phi: point outside the ball");
    }
    return std::log(s) / a;
  };
  g.grad_phi = [c, m, a](const Vector& x) {
    const Vector d = x - m;
    const double s = c - d.squaredNorm();
    return Vector(-2.0 / (a * s) * d);
  };
  g.hess_phi = [c, m, a](const Vector& x) {
    const Vector d = x - m;
    const double s = c - d.squaredNorm();
    Matrix H = -4.0 / (a * s * s) * (d * d.transpose());
    H.diagonal().array() += -2.0 / (a * s);
    return H;
  };
  g.third_phi = [c, m, a, n](const Vector& x) {
    const Vector d = x - m;
    const double s = c - d.squaredNorm();
    const double s2 = s * s, s3 = s2 * s;
    Tensor3 t(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = -16.0 * d(i) * d(j) * d(k) / s3;
          if (i == j) v += -4.0 * d(k) / s2;
          if (i == k) v += -4.0 * d(j) / s2;
          if (j == k) v += -4.0 * d(i) / s2;
          t(i, j, k) = v / a;
        }
    return t;
  };
  return g;
}

Generator make_quadratic_bregman_generator(int n) {
  if (n < 2) {
    throw std::invalid_argument(
        "make_quadratic_bregman_generator: need n >= 2, got " +
        std::to_string(n));
  }

  constexpr double kBox = 10.0;  // sampling box for the unbounded domain

  Domain dom;
  dom.dimension = n;
  dom.contains = [](const Vector&) { return true; };
  dom.interior_margin = 0.0;
  dom.center = Vector::Zero(n);
  dom.box_lo = Vector::Constant(n, -kBox);
  dom.box_hi = Vector::Constant(n, kBox);

  Generator g;
  g.domain = std::move(dom);
  g.alpha = std::nullopt;
  g.phi = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  g.grad_phi = [](const Vector& x) { return x; };
  g.hess_phi = [n](const Vector&) { return Matrix(Matrix::Identity(n, n)); };
  g.third_phi = [n](const Vector&) { return Tensor3(n); };
  return g;
}

Generator make_custom_generator(Domain domain, std::optional<Alpha> alpha,
                                std::function<double(const Vector&)> phi,
                                std::function<Vector(const Vector&)> grad,
                                std::function<Matrix(const Vector&)> hess,
                                std::function<Tensor3(const Vector&)> third) {
  if (domain.dimension < 2) {
    throw std::invalid_argument("make_custom_generator: need n >= 2");
  }
  if (!phi) {
    throw std::invalid_argument("make_custom_generator: phi is required");
  }

  Generator g;
  g.domain = std::move(domain);
  g.alpha = alpha;
  g.phi = std::move(phi);
  if (grad) {
    g.grad_phi = std::move(grad);
  } else {
    g.grad_phi = [f = g.phi](const Vector& x) {
      return fd::gradient(f, x, 1e-6);
    };
  }
  if (hess) {
    g.hess_phi = std::move(hess);
  } else {
    g.hess_phi = [f = g.phi](const Vector& x) {
      return fd::hessian(f, x, 1e-4);
    };
  }
  if (third) {
    g.third_phi = std::move(third);
  } else {
    g.third_phi = [h = g.hess_phi](const Vector& x) {
      return fd::third_from_hessian(h, x, 1e-3);
    };
  }
  return g;
}

Matrix exp_phi_hessian(const Generator& g, const Vector& xi) {
  const double a = g.alpha_value();
  const double e = std::exp(a * g.phi(xi));
  const Vector dp = g.grad_phi(xi);
  Matrix H = g.hess_phi(xi);
  H += a * (dp * dp.transpose());
  return a * e * H;
}

double check_alpha_exp_concavity(const Generator& g, const PrimalPoint& p) {
  require_in_domain(g.domain, p.xi, "check_alpha_exp_concavity");
  const Matrix H = exp_phi_hessian(g, p.xi);
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  return es.eigenvalues().maxCoeff();
}

}  // namespace logdiv
