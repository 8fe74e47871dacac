#include "logdiv/divergence.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "logdiv/dual_geometry.hpp"

namespace logdiv {

namespace {

double clamp_value(double d) {
  return std::abs(d) < kDivergenceClamp ? 0.0 : d;
}

}  // namespace

double alpha_log1p(double alpha, double x) {
  const double arg = 1.0 + alpha * x;
  if (!(arg > 0.0)) {
    throw LogDomainError("alpha_log1p: argument 1 + alpha*x = " +
                         std::to_string(arg) + " is not positive");
  }
  return std::log1p(alpha * x) / alpha;
}

double alpha_expm1(double alpha, double x) {
  return std::expm1(alpha * x) / alpha;
}

double to_conformal_scale(const Alpha& alpha, double x) {
  if (x < 0.0) {
    throw std::invalid_argument("to_conformal_scale: negative input");
  }
  return alpha_expm1(alpha.value(), x);
}

double from_conformal_scale(const Alpha& alpha, double y) {
  if (y < 0.0) {
    throw std::invalid_argument("from_conformal_scale: negative input");
  }
  return alpha_log1p(alpha.value(), y);
}

double bregman(const Generator& g, const PrimalPoint& xi,
               const PrimalPoint& xi_prime) {
  if (!g.is_bregman()) {
    throw std::invalid_argument("bregman: generator is not Bregman-tagged");
  }
  require_in_domain(g.domain, xi.xi, "bregman");
  require_in_domain(g.domain, xi_prime.xi, "bregman");
  const double d = g.phi(xi.xi) - g.phi(xi_prime.xi) -
                   g.grad_phi(xi_prime.xi).dot(xi.xi - xi_prime.xi);
  return clamp_value(d);
}

double l_alpha(const Generator& g, const PrimalPoint& xi,
               const PrimalPoint& xi_prime) {
  const double a = g.alpha_value();
  require_in_domain(g.domain, xi.xi, "l_alpha");
  require_in_domain(g.domain, xi_prime.xi, "l_alpha");
  const double u = g.grad_phi(xi_prime.xi).dot(xi.xi - xi_prime.xi);
  const double d = alpha_log1p(a, u) - (g.phi(xi.xi) - g.phi(xi_prime.xi));
  return clamp_value(d);
}

ConformalPair make_conformal_pair(const Generator& g) {
  const double a = g.alpha_value();
  ConformalPair cp;
  cp.domain = g.domain;
  cp.alpha = g.alpha;

  const auto phi = g.phi;
  const auto grad = g.grad_phi;
  const auto hess = g.hess_phi;
  const auto third = g.third_phi;

  // phi_c = -e^{a phi}
  cp.phi_c = [phi, a](const Vector& x) { return -std::exp(a * phi(x)); };
  cp.grad_phi_c = [phi, grad, a](const Vector& x) {
    return Vector(-a * std::exp(a * phi(x)) * grad(x));
  };
  cp.hess_phi_c = [phi, grad, hess, a](const Vector& x) {
    const double e = std::exp(a * phi(x));
    const Vector dp = grad(x);
    Matrix H = hess(x);
    H += a * (dp * dp.transpose());
    return Matrix(-a * e * H);
  };
  cp.third_phi_c = [phi, grad, hess, third, a](const Vector& x) {
    const double e = std::exp(a * phi(x));
    const Vector dp = grad(x);
    const Matrix H = hess(x);
    const Tensor3 T = third(x);
    const int n = static_cast<int>(x.size());
    Tensor3 out(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double inner = a * dp(k) * (a * dp(i) * dp(j) + H(i, j)) +
                               a * (H(i, k) * dp(j) + dp(i) * H(j, k)) +
                               T(i, j, k);
          out(i, j, k) = -a * e * inner;
        }
    return out;
  };

  // kappa = (1/a) e^{-a phi}
  cp.kappa = [phi, a](const Vector& x) { return std::exp(-a * phi(x)) / a; };
  cp.grad_kappa = [phi, grad, a](const Vector& x) {
    return Vector(-std::exp(-a * phi(x)) * grad(x));
  };
  cp.hess_kappa = [phi, grad, hess, a](const Vector& x) {
    const double e = std::exp(-a * phi(x));
    const Vector dp = grad(x);
    Matrix H = hess(x);
    H -= a * (dp * dp.transpose());
    return Matrix(-e * H);
  };
  return cp;
}

ConformalPair bregman_as_conformal(const Generator& g) {
  if (!g.is_bregman()) {
    throw std::invalid_argument(
        "bregman_as_conformal: generator is not Bregman-tagged");
  }
  const int n = g.domain.dimension;
  ConformalPair cp;
  cp.domain = g.domain;
  cp.alpha = std::nullopt;
  cp.phi_c = g.phi;
  cp.grad_phi_c = g.grad_phi;
  cp.hess_phi_c = g.hess_phi;
  cp.third_phi_c = g.third_phi;
  cp.kappa = [](const Vector&) { return 1.0; };
  cp.grad_kappa = [n](const Vector&) { return Vector(Vector::Zero(n)); };
  cp.hess_kappa = [n](const Vector&) { return Matrix(Matrix::Zero(n, n)); };
  return cp;
}

double conformal(const ConformalPair& cp, const PrimalPoint& xi,
                 const PrimalPoint& xi_prime) {
  require_in_domain(cp.domain, xi.xi, "conformal");
  require_in_domain(cp.domain, xi_prime.xi, "conformal");
  const double b = cp.phi_c(xi.xi) - cp.phi_c(xi_prime.xi) -
                   cp.grad_phi_c(xi_prime.xi).dot(xi.xi - xi_prime.xi);
  return clamp_value(cp.kappa(xi.xi) * b);
}

double self_dual(const Generator& g, const PrimalPoint& xi_y,
                 const DualPoint& eta_x) {
  const double a = g.alpha_value();
  require_in_domain(g.domain, xi_y.xi, "self_dual");
  const double psi = conjugate_potential(g, eta_x);
  const double d =
      alpha_log1p(a, xi_y.xi.dot(eta_x.eta)) - g.phi(xi_y.xi) - psi;
  return clamp_value(d);
}

DivergenceFn divergence_fn(const Generator& g) {
  if (g.is_bregman()) {
    return [g](const Vector& x, const Vector& y) {
      return bregman(g, PrimalPoint{x}, PrimalPoint{y});
    };
  }
  return [g](const Vector& x, const Vector& y) {
    return l_alpha(g, PrimalPoint{x}, PrimalPoint{y});
  };
}

DivergenceFn divergence_fn(const ConformalPair& cp) {
  return [cp](const Vector& x, const Vector& y) {
    return conformal(cp, PrimalPoint{x}, PrimalPoint{y});
  };
}

}  // namespace logdiv
