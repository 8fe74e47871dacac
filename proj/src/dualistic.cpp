#include "logdiv/dualistic.hpp"

#include <cmath>

#include "logdiv/divergence.hpp"

namespace logdiv {

namespace {

// g_ij = -d_i d_j' D at step h (no Richardson).
Matrix metric_fd_step(const DivergenceFn& D, const Vector& p, double h) {
  const int n = static_cast<int>(p.size());
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Vector xp = p, xm = p, yp = p, ym = p;
      xp(i) += h;
      xm(i) -= h;
      yp(j) += h;
      ym(j) -= h;
      const double v = D(xp, yp) - D(xp, ym) - D(xm, yp) + D(xm, ym);
      g(i, j) = -v / (4.0 * h * h);
    }
  }
  // exact symmetry for the downstream LLT
  return 0.5 * (g + g.transpose());
}

// T_{ij,k} = -d_i d_j d_k'' D, first two derivatives on the slot selected by
// `first_slot`, the single derivative on the other slot.
Tensor3 third_fd_step(const DivergenceFn& D, const Vector& p, double h,
                      bool first_slot) {
  const int n = static_cast<int>(p.size());
  auto F = [&](const Vector& a, const Vector& b) {
    return first_slot ? D(a, b) : D(b, a);
  };
  Tensor3 t(n);
  for (int k = 0; k < n; ++k) {
    Vector bp = p, bm = p;
    bp(k) += h;
    bm(k) -= h;
    auto G = [&](const Vector& a) { return (F(a, bp) - F(a, bm)) / (2.0 * h); };
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double d2;
        if (i == j) {
          Vector ap = p, am = p;
          ap(i) += h;
          am(i) -= h;
          d2 = (G(ap) - 2.0 * G(p) + G(am)) / (h * h);
        } else {
          Vector app = p, apm = p, amp = p, amm = p;
          app(i) += h; app(j) += h;
          apm(i) += h; apm(j) -= h;
          amp(i) -= h; amp(j) += h;
          amm(i) -= h; amm(j) -= h;
          d2 = (G(app) - G(apm) - G(amp) + G(amm)) / (4.0 * h * h);
        }
        t(i, j, k) = t(j, i, k) = -d2;
      }
    }
  }
  return t;
}

Matrix richardson(const Matrix& fine, const Matrix& coarse) {
  return (4.0 * fine - coarse) / 3.0;
}

Tensor3 richardson(const Tensor3& fine, const Tensor3& coarse) {
  const int n = fine.dim();
  Tensor3 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        out(i, j, k) = (4.0 * fine(i, j, k) - coarse(i, j, k)) / 3.0;
  return out;
}

}  // namespace

DualisticCoefficients induced_structure_fd(const DivergenceFn& D,
                                           const PrimalPoint& p,
                                           const FdSteps& steps) {
  const double h = steps.third;

  Matrix g = metric_fd_step(D, p.xi, h);
  Tensor3 gl = third_fd_step(D, p.xi, h, /*first_slot=*/true);
  Tensor3 gsl = third_fd_step(D, p.xi, h, /*first_slot=*/false);
  if (steps.richardson) {
    g = richardson(g, metric_fd_step(D, p.xi, 2.0 * h));
    gl = richardson(gl, third_fd_step(D, p.xi, 2.0 * h, true));
    gsl = richardson(gsl, third_fd_step(D, p.xi, 2.0 * h, false));
  }

  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError(
        "induced_structure_fd: metric is not positive definite "
        "(invalid divergence or step too large)");
  }

  DualisticCoefficients out;
  out.g = g;
  out.gamma_lower = gl;
  out.gamma_star_lower = gsl;
  out.gamma = raise_index(gl, g);
  out.gamma_star = raise_index(gsl, g);
  out.at = p;
  return out;
}

DualisticCoefficients conformal_structure_closed(const ConformalPair& cp,
                                                 const PrimalPoint& p) {
  require_in_domain(cp.domain, p.xi, "conformal_structure_closed");
  const int n = cp.domain.dimension;
  const double k = cp.kappa(p.xi);
  const Vector dk = cp.grad_kappa(p.xi);
  const Matrix hp = cp.hess_phi_c(p.xi);
  const Tensor3 tp = cp.third_phi_c(p.xi);

  DualisticCoefficients out;
  out.g = k * hp;

  Tensor3 gamma(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      gamma(i, j, j) += dk(i) / k;
      gamma(i, j, i) += dk(j) / k;
    }
  out.gamma = gamma;
  out.gamma_lower = lower_index(gamma, out.g);

  Tensor3 gsl(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m)
        gsl(i, j, m) = -dk(m) * hp(i, j) + k * tp(i, j, m);
  out.gamma_star_lower = gsl;
  out.gamma_star = raise_index(gsl, out.g);
  out.at = p;
  return out;
}

ChristoffelField primal_connection(const Generator& g) {
  if (g.is_bregman()) {
    const int n = g.domain.dimension;
    return [n](const Vector&) { return Tensor3(n); };
  }
  // Gamma_ij^k = tau_i delta_j^k + tau_j delta_i^k with tau = dlog kappa,
  // which composes to tau = -alpha * Dphi.
  const double a = g.alpha_value();
  const auto grad = g.grad_phi;
  const int n = g.domain.dimension;
  return [a, grad, n](const Vector& x) {
    const Vector tau = -a * grad(x);
    Tensor3 out(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        out(i, j, j) += tau(i);
        out(i, j, i) += tau(j);
      }
    return out;
  };
}

ChristoffelField dual_connection(const Generator& g) {
  const ConformalPair cp =
      g.is_bregman() ? bregman_as_conformal(g) : make_conformal_pair(g);
  return [cp](const Vector& x) {
    return conformal_structure_closed(cp, PrimalPoint{x}).gamma_star;
  };
}

CurvatureTensor curvature_from_connection(const ChristoffelField& field,
                                          const PrimalPoint& p, double h,
                                          bool use_richardson) {
  const Tensor3 at_p = field(p.xi);
  const int n = at_p.dim();

  // dGam[i] = d_i Gamma(.,.,.)
  std::vector<Tensor3> dgam(n, Tensor3(n));
  for (int i = 0; i < n; ++i) {
    auto diff = [&](double step) {
      Vector xp = p.xi, xm = p.xi;
      xp(i) += step;
      xm(i) -= step;
      const Tensor3 gp = field(xp), gm = field(xm);
      Tensor3 d(n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            d(a, b, c) = (gp(a, b, c) - gm(a, b, c)) / (2.0 * step);
      return d;
    };
    dgam[i] = diff(h);
    if (use_richardson) dgam[i] = richardson(dgam[i], diff(2.0 * h));
  }

  CurvatureTensor out;
  out.r = Tensor4(n);
  out.at = p;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = dgam[i](j, k, l) - dgam[j](i, k, l);
          for (int m = 0; m < n; ++m)
            v += at_p(i, m, l) * at_p(j, k, m) -
                 at_p(j, m, l) * at_p(i, k, m);
          out.r(i, j, k, l) = v;
        }
  return out;
}

CurvatureTensor curvature_fd(const DivergenceFn& D, const PrimalPoint& p,
                             const FdSteps& steps) {
  ChristoffelField field = [&D, &steps](const Vector& x) {
    return induced_structure_fd(D, PrimalPoint{x}, steps).gamma;
  };
  return curvature_from_connection(field, p, steps.fourth, steps.richardson);
}

CurvatureTensor curvature_closed(const ConformalPair& cp,
                                 const PrimalPoint& p) {
  require_in_domain(cp.domain, p.xi, "curvature_closed");
  const int n = cp.domain.dimension;
  const double k = cp.kappa(p.xi);
  const Vector dk = cp.grad_kappa(p.xi);
  const Matrix d2k = cp.hess_kappa(p.xi);

  // d_jk (1/kappa) = -d2k/k^2 + 2 dk dk^T / k^3
  Matrix inv_hess =
      -d2k / (k * k) + 2.0 / (k * k * k) * (dk * dk.transpose());

  CurvatureTensor out;
  out.r = Tensor4(n);
  out.at = p;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < n; ++c)
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          if (i == l) v += inv_hess(j, c);
          if (j == l) v -= inv_hess(i, c);
          out.r(i, j, c, l) = k * v;
        }
  return out;
}

double sectional_curvature(const DualisticCoefficients& coeffs,
                           const CurvatureTensor& curv, const Tangent& v,
                           const Tangent& w) {
  const Matrix& g = coeffs.g;
  const int n = static_cast<int>(g.rows());
  const double vv = v.v.dot(g * v.v);
  const double ww = w.v.dot(g * w.v);
  const double vw = v.v.dot(g * w.v);
  const double gram = vv * ww - vw * vw;
  if (gram < 1e-10) {
    throw DegeneratePlaneError(
        "sectional_curvature: Gram determinant below 1e-10");
  }
  // [R(w,v)v]^l = R_ijk^l w^i v^j v^k, paired with w under g.
  double num = 0.0;
  for (int l = 0; l < n; ++l) {
    double rl = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          rl += curv.r(i, j, k, l) * w.v(i) * v.v(j) * v.v(k);
    num += rl * g.row(l).dot(w.v);
  }
  return num / gram;
}

ConstantCurvatureReport constant_curvature_report(
    const ConformalPair& cp, double lambda, std::span<const Vector> samples) {
  const int n = cp.domain.dimension;
  const int m = static_cast<int>(samples.size());

  // residual of the affine model a + b . xi for 1/kappa - lambda*phi_c
  Matrix A(m, n + 1);
  Vector b(m);
  for (int r = 0; r < m; ++r) {
    A(r, 0) = 1.0;
    A.row(r).tail(n) = samples[r].transpose();
    b(r) = 1.0 / cp.kappa(samples[r]) - lambda * cp.phi_c(samples[r]);
  }
  ConstantCurvatureReport rep;
  if (m > 0) {
    Vector coef = A.colPivHouseholderQr().solve(b);
    rep.affine_fit_residual = (A * coef - b).cwiseAbs().maxCoeff();
  }

  // max-norm of d^2(1/kappa - lambda*phi_c) over the samples
  for (const Vector& x : samples) {
    const double k = cp.kappa(x);
    const Vector dk = cp.grad_kappa(x);
    const Matrix d2k = cp.hess_kappa(x);
    const Matrix second = -d2k / (k * k) +
                          2.0 / (k * k * k) * (dk * dk.transpose()) -
                          lambda * cp.hess_phi_c(x);
    rep.second_derivative_norm =
        std::max(rep.second_derivative_norm, second.cwiseAbs().maxCoeff());
  }
  return rep;
}

CollinearityReport collinearity_report(const std::vector<Vector>& points,
                                       const Vector& direction) {
  CollinearityReport rep;
  if (points.size() < 2) return rep;
  const Vector& start = points.front();
  const Vector dir = direction.normalized();
  for (size_t i = 1; i < points.size(); ++i) {
    const Vector d = points[i] - start;
    const Vector off = d - d.dot(dir) * dir;
    rep.max_offset = std::max(rep.max_offset, off.norm());
    rep.arc_length += (points[i] - points[i - 1]).norm();
  }
  rep.normalized = rep.arc_length > 0.0 ? rep.max_offset / rep.arc_length : 0.0;
  return rep;
}

}  // namespace logdiv
