#pragma once

#include <span>
#include <vector>

#include "logdiv/dualistic.hpp"
#include "logdiv/generator.hpp"
#include "logdiv/types.hpp"

namespace logdiv {

// eta = Dphi(xi) / (1 - alpha Dphi(xi) . xi); plain eta = Dphi(xi) for
// Bregman tags. Throws SolveError when the denominator is not positive.
DualPoint to_dual(const Generator& g, const PrimalPoint& xi);

// Jacobian d eta / d xi, assembled from Dphi and D^2 phi.
Matrix eta_jacobian(const Generator& g, const Vector& xi);

// Inverts the eta-map by damped Newton with the analytic Jacobian, started
// from the domain center; tolerance 1e-12 on |eta(xi) - eta|, at most 50
// steps with backtracking that keeps iterates inside the domain.
PrimalPoint from_dual(const Generator& g, const DualPoint& eta);

// psi(eta) = (1/alpha) log(1 + alpha xi . eta) - phi(xi), xi the preimage;
// the Legendre transform xi . eta - phi(xi) for Bregman tags.
double conjugate_potential(const Generator& g, const DualPoint& eta);

// Dpsi(eta) = xi / (1 + alpha xi . eta)
Vector conjugate_gradient(const Generator& g, const DualPoint& eta);

// D^2 psi, via the inverse eta-map Jacobian.
Matrix conjugate_hessian(const Generator& g, const DualPoint& eta);

enum class GeodesicKind { primal, dual };

// Solution samples of the geodesic ODE in the primal chart. s_of_t holds
// the time change extracted against the straight-line chart image (primal
// traces against xi, dual traces against eta).
struct GeodesicTrace {
  GeodesicKind kind = GeodesicKind::primal;
  PrimalPoint start;
  Tangent velocity;  // primal-chart initial velocity
  std::vector<double> times;
  std::vector<Vector> points;       // primal-chart
  std::vector<Vector> points_dual;  // eta images (dual traces only)
  std::vector<double> s_of_t;
};

// Integrates gamma''^k + Gamma_ij^k gamma'^i gamma'^j = 0 (the dual kind
// uses Gamma*) by classical RK4 with fixed substeps of at most max_step,
// checking domain membership at every substep. v is given in the primal
// chart for both kinds.
PrimalPoint exp_map(GeodesicKind kind, const Generator& g,
                    const PrimalPoint& q, const Tangent& v, double t,
                    double max_step = 1e-3);

GeodesicTrace trace_geodesic(GeodesicKind kind, const Generator& g,
                             const PrimalPoint& q, const Tangent& v,
                             std::span<const double> times,
                             double max_step = 1e-3);

// H(t1, t2) = D[r(t1) : p(t2)] - D[r(t1) : q] - D[q : p(t2)], r the primal
// and p the dual geodesic from q with primal-chart velocities v and w.
// Vanishes identically when <v,w>_g = 0.
double pythagorean_defect(const Generator& g, const PrimalPoint& q,
                          const Tangent& v, const Tangent& w, double t1,
                          double t2);

// Least-squares fit of H over a (t1, t2) grid. The four asserted
// coefficients come with the absorbing monomials t1^2 t2 and t1 t2^2
// (reported, never asserted) plus higher-degree absorbers up to total
// degree max_total_degree that keep truncation bias out of the low-order
// coefficients.
struct ExpansionFit {
  double c11 = 0.0;
  double c31 = 0.0;
  double c13 = 0.0;
  double c22 = 0.0;
  double c21 = 0.0;
  double c12 = 0.0;
  double residual = 0.0;
  double condition = 0.0;
};

struct ExpansionGrid {
  double t_max = 0.05;
  int steps = 12;            // grid points per axis, >= 8
  int max_total_degree = 7;  // absorbing monomial cutoff
};

ExpansionFit fit_defect_expansion(const Generator& g, const PrimalPoint& q,
                                  const Tangent& v, const Tangent& w,
                                  const ExpansionGrid& grid = {});

// Central-difference estimate of d^4/dt1^2 dt2^2 of D[r(t1) : p(t2)] at 0.
double mixed_fourth_derivative(const Generator& g, const PrimalPoint& q,
                               const Tangent& v, const Tangent& w,
                               double h = 2e-2);

// Metric pairing g_q(v, J_q w) of a primal-chart tangent v with a
// dual-chart tangent w, J_q = d xi / d eta. Closed form
//   -( v.w / (1 + a xi.eta) - a (eta.v)(xi.w) / (1 + a xi.eta)^2 );
// the alpha-family eta chart reverses orientation relative to the
// classical gradient chart, hence the leading sign (Bregman tags pair as
// plain v.w). Avoids forming J_q explicitly.
double mixed_inner_product(const Generator& g, const PrimalPoint& q,
                           const Tangent& v_primal, const Tangent& w_dual);

// Cubic fit of the trace's time change s(t) (basis t..t^5; the two top
// degrees absorb truncation).
struct TimeChangeFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double residual = 0.0;
};
TimeChangeFit fit_time_change(const GeodesicTrace& trace);

}  // namespace logdiv
