#pragma once

#include "logdiv/divergence.hpp"
#include "logdiv/types.hpp"

namespace logdiv {

// Hypersurface frame in R^{n+1}:
//   f(xi)  = kappa(xi) (xi^1, ..., xi^n, 1)
//   n      = alpha f
//   n*     = (-d_1 phi_c, ..., -d_n phi_c, -phi_c + Dphi_c . xi)
// The conormal satisfies <n*, n> = 1 and <n*, d_i f> = 0 for every alpha;
// it is the unique solution of those conditions for this (f, n). Covectors
// are stored as plain vectors, the pairing is the dot product.
struct ImmersionFrame {
  Vector f;
  Vector n_field;
  Vector n_star;
  PrimalPoint at;
};

// Requires a pair built from an alpha-tagged generator.
ImmersionFrame immerse(const ConformalPair& cp, const PrimalPoint& xi);

// Max norm over (k, j) of  d_k d_j f - Gamma_kj^m d_m f - g_kj (alpha f)
// with analytic derivatives of f and the closed-form (g, Gamma). The
// optional perturbation is added to every Christoffel component as a
// sensitivity fault injection.
double realization_residual(const ConformalPair& cp, const PrimalPoint& xi,
                            double gamma_perturbation = 0.0);

// rho(xi, xi') = < f(xi) - f(xi'), n*(xi') >; equals the conformal
// divergence pointwise.
double geometric_divergence(const ConformalPair& cp, const PrimalPoint& xi,
                            const PrimalPoint& xi_prime);

// Residuals of the conormal conditions and the transversality determinant
// det[d_1 f, ..., d_n f, n] at a point.
struct ConormalCheck {
  double pairing_error = 0.0;    // |<n*, n> - 1|
  double tangency_error = 0.0;   // max_i |<n*, d_i f>|
  double transversal_det = 0.0;
};
ConormalCheck conormal_check(const ConformalPair& cp, const PrimalPoint& xi);

}  // namespace logdiv
