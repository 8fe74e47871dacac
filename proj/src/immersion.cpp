#include "logdiv/immersion.hpp"

#include <cmath>
#include <stdexcept>

#include "logdiv/dualistic.hpp"

namespace logdiv {

namespace {

double require_alpha(const ConformalPair& cp, const char* what) {
  if (!cp.alpha) {
    throw std::invalid_argument(std::string(what) +
                                ": pair carries the Bregman tag");
  }
  return cp.alpha->value();
}

Vector lift(const Vector& xi, double last) {
  Vector out(xi.size() + 1);
  out.head(xi.size()) = xi;
  out(xi.size()) = last;
  return out;
}

}  // namespace

ImmersionFrame immerse(const ConformalPair& cp, const PrimalPoint& xi) {
  const double a = require_alpha(cp, "immerse");
  require_in_domain(cp.domain, xi.xi, "immerse");

  const double k = cp.kappa(xi.xi);
  const double pc = cp.phi_c(xi.xi);
  const Vector dpc = cp.grad_phi_c(xi.xi);

  ImmersionFrame frame;
  frame.f = k * lift(xi.xi, 1.0);
  frame.n_field = a * frame.f;
  frame.n_star = lift(-dpc, -pc + dpc.dot(xi.xi));
  frame.at = xi;
  return frame;
}

double realization_residual(const ConformalPair& cp, const PrimalPoint& xi,
                            double gamma_perturbation) {
  const double a = require_alpha(cp, "realization_residual");
  require_in_domain(cp.domain, xi.xi, "realization_residual");

  const int n = cp.domain.dimension;
  const double k = cp.kappa(xi.xi);
  const Vector dk = cp.grad_kappa(xi.xi);
  const Matrix d2k = cp.hess_kappa(xi.xi);

  const Vector lifted = lift(xi.xi, 1.0);
  const Vector f = k * lifted;

  // d_j f = dk_j (xi, 1) + kappa e_j,  d_k d_j f = d2k_kj (xi, 1)
  //         + dk_j e_k + dk_k e_j   (e_j the lifted basis vector)
  std::vector<Vector> df(n);
  for (int j = 0; j < n; ++j) {
    Vector e = Vector::Zero(n + 1);
    e(j) = 1.0;
    df[j] = dk(j) * lifted + k * e;
  }

  const DualisticCoefficients coeffs =
      conformal_structure_closed(cp, xi);

  double residual = 0.0;
  for (int kk = 0; kk < n; ++kk) {
    for (int j = 0; j < n; ++j) {
      Vector ek = Vector::Zero(n + 1);
      ek(kk) = 1.0;
      Vector ej = Vector::Zero(n + 1);
      ej(j) = 1.0;
      Vector d2f = d2k(kk, j) * lifted + dk(j) * ek + dk(kk) * ej;

      Vector rhs = coeffs.g(kk, j) * (a * f);
      for (int m = 0; m < n; ++m) {
        rhs += (coeffs.gamma(kk, j, m) + gamma_perturbation) * df[m];
      }
      residual = std::max(residual, (d2f - rhs).cwiseAbs().maxCoeff());
    }
  }
  return residual;
}

double geometric_divergence(const ConformalPair& cp, const PrimalPoint& xi,
                            const PrimalPoint& xi_prime) {
  require_alpha(cp, "geometric_divergence");
  const ImmersionFrame fp = immerse(cp, xi);
  const ImmersionFrame fq = immerse(cp, xi_prime);
  const double rho = (fp.f - fq.f).dot(fq.n_star);
  return std::abs(rho) < kDivergenceClamp ? 0.0 : rho;
}

ConormalCheck conormal_check(const ConformalPair& cp, const PrimalPoint& xi) {
  const ImmersionFrame frame = immerse(cp, xi);
  const int n = cp.domain.dimension;
  const double k = cp.kappa(xi.xi);
  const Vector dk = cp.grad_kappa(xi.xi);
  const Vector lifted = lift(xi.xi, 1.0);

  ConormalCheck check;
  check.pairing_error = std::abs(frame.n_star.dot(frame.n_field) - 1.0);

  Matrix span(n + 1, n + 1);
  for (int j = 0; j < n; ++j) {
    Vector e = Vector::Zero(n + 1);
    e(j) = 1.0;
    const Vector df = dk(j) * lifted + k * e;
    check.tangency_error =
        std::max(check.tangency_error, std::abs(frame.n_star.dot(df)));
    span.col(j) = df;
  }
  span.col(n) = frame.n_field;
  check.transversal_det = span.determinant();
  return check;
}

}  // namespace logdiv
