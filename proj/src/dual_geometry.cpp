#include "logdiv/dual_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "logdiv/divergence.hpp"

namespace logdiv {

DualPoint to_dual(const Generator& g, const PrimalPoint& xi) {
  require_in_domain(g.domain, xi.xi, "to_dual");
  const Vector u = g.grad_phi(xi.xi);
  if (g.is_bregman()) {
    // classical gradient chart
    return DualPoint{u};
  }
  const double a = g.alpha_value();
  const double denom = 1.0 - a * u.dot(xi.xi);
  if (!(denom > 0.0)) {
    throw SolveError("to_dual: denominator 1 - alpha Dphi.xi = " +
                     std::to_string(denom) + " is not positive");
  }
  return DualPoint{u / denom};
}

Matrix eta_jacobian(const Generator& g, const Vector& xi) {
  const Matrix H = g.hess_phi(xi);
  if (g.is_bregman()) return H;
  const double a = g.alpha_value();
  const Vector u = g.grad_phi(xi);
  const double w = 1.0 - a * u.dot(xi);
  const int n = static_cast<int>(xi.size());
  // eta_i = u_i / w;  d_j w = -a (H_j . xi + u_j)
  Matrix J(n, n);
  for (int j = 0; j < n; ++j) {
    const double dw = -a * (H.col(j).dot(xi) + u(j));
    J.col(j) = H.col(j) / w - u * (dw / (w * w));
  }
  return J;
}

PrimalPoint from_dual(const Generator& g, const DualPoint& eta) {
  constexpr int kMaxIter = 50;
  constexpr double kTol = 1e-12;

  Vector x = g.domain.center;
  double err = (to_dual(g, PrimalPoint{x}).eta - eta.eta).norm();
  for (int it = 0; it < kMaxIter; ++it) {
    if (err < kTol) return PrimalPoint{x};
    const Vector residual = to_dual(g, PrimalPoint{x}).eta - eta.eta;
    const Matrix J = eta_jacobian(g, x);
    Eigen::PartialPivLU<Matrix> lu(J);
    const Vector step = lu.solve(residual);
    // damping: halve until the iterate stays inside and the residual drops
    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k) {
      const Vector cand = x - lambda * step;
      if (g.domain.contains(cand)) {
        const double cand_err =
            (to_dual(g, PrimalPoint{cand}).eta - eta.eta).norm();
        if (cand_err < err) {
          x = cand;
          err = cand_err;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
  }
  if (err < kTol) return PrimalPoint{x};
  throw SolveError("from_dual: Newton did not converge (residual " +
                   std::to_string(err) + ")");
}

double conjugate_potential(const Generator& g, const DualPoint& eta) {
  const PrimalPoint xi = from_dual(g, eta);
  if (g.is_bregman()) {
    return xi.xi.dot(eta.eta) - g.phi(xi.xi);  // Legendre transform
  }
  return alpha_log1p(g.alpha_value(), xi.xi.dot(eta.eta)) - g.phi(xi.xi);
}

Vector conjugate_gradient(const Generator& g, const DualPoint& eta) {
  const PrimalPoint xi = from_dual(g, eta);
  if (g.is_bregman()) return xi.xi;
  return xi.xi / (1.0 + g.alpha_value() * xi.xi.dot(eta.eta));
}

Matrix conjugate_hessian(const Generator& g, const DualPoint& eta) {
  const PrimalPoint xi = from_dual(g, eta);
  const Matrix J = eta_jacobian(g, xi.xi).inverse();  // d xi / d eta
  if (g.is_bregman()) return J;
  const double a = g.alpha_value();
  const double c = 1.0 + a * xi.xi.dot(eta.eta);
  const int n = static_cast<int>(eta.eta.size());
  // d_j [ xi_i / c ] = J_ij / c - xi_i (a (xi_j + eta . J_col_j)) / c^2
  Matrix H(n, n);
  for (int j = 0; j < n; ++j) {
    const double dc = a * (xi.xi(j) + eta.eta.dot(J.col(j)));
    H.col(j) = J.col(j) / c - xi.xi * (dc / (c * c));
  }
  return 0.5 * (H + H.transpose());
}

namespace {

struct OdeState {
  Vector x;
  Vector v;
};

OdeState geodesic_rhs(const ChristoffelField& field, const OdeState& s) {
  const Tensor3 gamma = field(s.x);
  const int n = static_cast<int>(s.x.size());
  Vector acc = Vector::Zero(n);
  for (int k = 0; k < n; ++k) {
    double a = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a += gamma(i, j, k) * s.v(i) * s.v(j);
    acc(k) = -a;
  }
  return OdeState{s.v, acc};
}

// One classical RK4 step of the geodesic system.
OdeState rk4_step(const ChristoffelField& field, const OdeState& s, double h) {
  const OdeState k1 = geodesic_rhs(field, s);
  const OdeState k2 =
      geodesic_rhs(field, {s.x + 0.5 * h * k1.x, s.v + 0.5 * h * k1.v});
  const OdeState k3 =
      geodesic_rhs(field, {s.x + 0.5 * h * k2.x, s.v + 0.5 * h * k2.v});
  const OdeState k4 = geodesic_rhs(field, {s.x + h * k3.x, s.v + h * k3.v});
  return OdeState{s.x + (h / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
                  s.v + (h / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
}

OdeState integrate(const ChristoffelField& field, const Domain& dom,
                   OdeState s, double t0, double t1, double max_step) {
  const double span = t1 - t0;
  if (span == 0.0) return s;
  const int substeps =
      std::max(1, static_cast<int>(std::ceil(std::abs(span) / max_step)));
  const double h = span / substeps;
  for (int i = 0; i < substeps; ++i) {
    s = rk4_step(field, s, h);
    if (!dom.contains(s.x)) {
      throw OutOfDomainError("exp_map: geodesic left the domain near t = " +
                             std::to_string(t0 + (i + 1) * h));
    }
  }
  return s;
}

ChristoffelField connection_for(GeodesicKind kind, const Generator& g) {
  return kind == GeodesicKind::primal ? primal_connection(g)
                                      : dual_connection(g);
}

}  // namespace

PrimalPoint exp_map(GeodesicKind kind, const Generator& g,
                    const PrimalPoint& q, const Tangent& v, double t,
                    double max_step) {
  require_in_domain(g.domain, q.xi, "exp_map");
  const ChristoffelField field = connection_for(kind, g);
  OdeState s{q.xi, v.v};
  s = integrate(field, g.domain, s, 0.0, t, max_step);
  return PrimalPoint{s.x};
}

GeodesicTrace trace_geodesic(GeodesicKind kind, const Generator& g,
                             const PrimalPoint& q, const Tangent& v,
                             std::span<const double> times, double max_step) {
  require_in_domain(g.domain, q.xi, "trace_geodesic");
  const ChristoffelField field = connection_for(kind, g);

  GeodesicTrace trace;
  trace.kind = kind;
  trace.start = q;
  trace.velocity = v;

  OdeState s{q.xi, v.v};
  double t_prev = 0.0;
  trace.times.assign(times.begin(), times.end());
  if (trace.times.empty() || trace.times.front() != 0.0) {
    trace.times.insert(trace.times.begin(), 0.0);
  }
  for (size_t i = 1; i < trace.times.size(); ++i) {
    if (!(trace.times[i] > trace.times[i - 1])) {
      throw std::invalid_argument(
          "trace_geodesic: times must be strictly increasing from 0");
    }
  }
  trace.points.reserve(trace.times.size());
  for (double t : trace.times) {
    s = integrate(field, g.domain, s, t_prev, t, max_step);
    t_prev = t;
    trace.points.push_back(s.x);
  }

  if (kind == GeodesicKind::dual) {
    trace.points_dual.reserve(trace.points.size());
    for (const Vector& x : trace.points) {
      trace.points_dual.push_back(to_dual(g, PrimalPoint{x}).eta);
    }
    const Vector eta0 = trace.points_dual.front();
    const Vector w_eta = eta_jacobian(g, q.xi) * v.v;
    const double denom = w_eta.squaredNorm();
    for (const Vector& e : trace.points_dual) {
      trace.s_of_t.push_back((e - eta0).dot(w_eta) / denom);
    }
  } else {
    const double denom = v.v.squaredNorm();
    for (const Vector& x : trace.points) {
      trace.s_of_t.push_back((x - q.xi).dot(v.v) / denom);
    }
  }
  return trace;
}

double pythagorean_defect(const Generator& g, const PrimalPoint& q,
                          const Tangent& v, const Tangent& w, double t1,
                          double t2) {
  const DivergenceFn D = divergence_fn(g);
  const PrimalPoint r = exp_map(GeodesicKind::primal, g, q, v, t1);
  const PrimalPoint p = exp_map(GeodesicKind::dual, g, q, w, t2);
  return D(r.xi, p.xi) - D(r.xi, q.xi) - D(q.xi, p.xi);
}

namespace {

std::vector<double> grid_times(double t_max, int steps) {
  std::vector<double> ts(steps);
  for (int i = 0; i < steps; ++i) ts[i] = t_max * (i + 1) / steps;
  return ts;
}

}  // namespace

ExpansionFit fit_defect_expansion(const Generator& g, const PrimalPoint& q,
                                  const Tangent& v, const Tangent& w,
                                  const ExpansionGrid& grid) {
  if (grid.steps < 8) {
    throw std::invalid_argument("fit_defect_expansion: need steps >= 8");
  }
  const DivergenceFn D = divergence_fn(g);
  const std::vector<double> ts = grid_times(grid.t_max, grid.steps);

  const GeodesicTrace r =
      trace_geodesic(GeodesicKind::primal, g, q, Tangent{v.v}, ts);
  const GeodesicTrace p =
      trace_geodesic(GeodesicKind::dual, g, q, Tangent{w.v}, ts);

  // D[. : q] and D[q : .] along the two legs, cached per grid line
  const int m = grid.steps;
  std::vector<double> d_rq(m), d_qp(m);
  for (int i = 0; i < m; ++i) {
    d_rq[i] = D(r.points[i + 1], q.xi);  // points[0] is q itself
    d_qp[i] = D(q.xi, p.points[i + 1]);
  }

  // monomials t1^j t2^k, j,k >= 1, j + k <= max degree
  std::vector<std::pair<int, int>> mono;
  for (int deg = 2; deg <= grid.max_total_degree; ++deg)
    for (int j = 1; j < deg; ++j) mono.emplace_back(j, deg - j);

  const int rows = m * m;
  const int cols = static_cast<int>(mono.size());
  Matrix A(rows, cols);
  Vector b(rows);
  int row = 0;
  for (int i = 0; i < m; ++i) {
    const double u1 = ts[i] / grid.t_max;
    for (int k = 0; k < m; ++k) {
      const double u2 = ts[k] / grid.t_max;
      const double H =
          D(r.points[i + 1], p.points[k + 1]) - d_rq[i] - d_qp[k];
      for (int c = 0; c < cols; ++c) {
        A(row, c) = std::pow(u1, mono[c].first) * std::pow(u2, mono[c].second);
      }
      b(row) = H;
      ++row;
    }
  }

  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector scaled = svd.solve(b);

  ExpansionFit fit;
  fit.condition = svd.singularValues()(0) /
                  svd.singularValues()(svd.singularValues().size() - 1);
  fit.residual = (A * scaled - b).cwiseAbs().maxCoeff();
  for (int c = 0; c < cols; ++c) {
    const double coeff =
        scaled(c) / std::pow(grid.t_max, mono[c].first + mono[c].second);
    if (mono[c] == std::pair{1, 1}) fit.c11 = coeff;
    if (mono[c] == std::pair{2, 1}) fit.c21 = coeff;
    if (mono[c] == std::pair{1, 2}) fit.c12 = coeff;
    if (mono[c] == std::pair{3, 1}) fit.c31 = coeff;
    if (mono[c] == std::pair{1, 3}) fit.c13 = coeff;
    if (mono[c] == std::pair{2, 2}) fit.c22 = coeff;
  }
  return fit;
}

double mixed_fourth_derivative(const Generator& g, const PrimalPoint& q,
                               const Tangent& v, const Tangent& w, double h) {
  if (!(h > 0.0) || h > 2e-2) {
    throw std::invalid_argument(
        "mixed_fourth_derivative: step must lie in (0, 2e-2]");
  }
  const DivergenceFn D = divergence_fn(g);

  // geodesic legs at t in {-h, 0, h}
  std::array<Vector, 3> rs, ps;
  for (int s = -1; s <= 1; ++s) {
    rs[s + 1] = exp_map(GeodesicKind::primal, g, q, v, s * h).xi;
    ps[s + 1] = exp_map(GeodesicKind::dual, g, q, w, s * h).xi;
  }
  const double c[3] = {1.0, -2.0, 1.0};
  double acc = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc += c[i] * c[j] * D(rs[i], ps[j]);
  return acc / (h * h * h * h);
}

double mixed_inner_product(const Generator& g, const PrimalPoint& q,
                           const Tangent& v_primal, const Tangent& w_dual) {
  require_in_domain(g.domain, q.xi, "mixed_inner_product");
  if (g.is_bregman()) {
    // g = D^2 phi and J = (D^2 phi)^{-1} cancel in the gradient chart
    return v_primal.v.dot(w_dual.v);
  }
  const double a = g.alpha_value();
  const Vector eta = to_dual(g, q).eta;
  const double c = 1.0 + a * q.xi.dot(eta);
  const double direct = v_primal.v.dot(w_dual.v) / c -
                        a * eta.dot(v_primal.v) * q.xi.dot(w_dual.v) / (c * c);
  return -direct;
}

TimeChangeFit fit_time_change(const GeodesicTrace& trace) {
  // drop the t = 0 sample; fit s(t) on t..t^7 (top degrees absorb
  // truncation so the cubic coefficients stay unbiased)
  constexpr int kDegree = 7;
  const int m = static_cast<int>(trace.times.size()) - 1;
  if (m < kDegree) {
    throw std::invalid_argument("fit_time_change: need more samples");
  }
  const double t_scale = trace.times.back();
  Matrix A(m, kDegree);
  Vector b(m);
  for (int i = 0; i < m; ++i) {
    const double u = trace.times[i + 1] / t_scale;
    double p = u;
    for (int c = 0; c < kDegree; ++c) {
      A(i, c) = p;
      p *= u;
    }
    b(i) = trace.s_of_t[i + 1];
  }
  const Vector coef = A.colPivHouseholderQr().solve(b);
  TimeChangeFit fit;
  fit.c1 = coef(0) / t_scale;
  fit.c2 = coef(1) / (t_scale * t_scale);
  fit.c3 = coef(2) / (t_scale * t_scale * t_scale);
  fit.residual = (A * coef - b).cwiseAbs().maxCoeff();
  return fit;
}

}  // namespace logdiv
