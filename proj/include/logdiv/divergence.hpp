#pragma once

#include <functional>
#include <optional>

#include "logdiv/generator.hpp"
#include "logdiv/tensor.hpp"
#include "logdiv/types.hpp"

namespace logdiv {

// Two-point scalar function; the uniform interface consumed by the
// finite-difference geometry engine.
using DivergenceFn = std::function<double(const Vector&, const Vector&)>;

// Divergence values whose magnitude falls below this are rounding noise of
// the identity case and are clamped to exactly zero.
inline constexpr double kDivergenceClamp = 1e-15;

// log(1 + a x)/a and expm1(a x)/a. alpha_log1p throws LogDomainError when
// 1 + a x <= 0.
double alpha_log1p(double alpha, double x);
double alpha_expm1(double alpha, double x);

// The strictly increasing value map linking the logarithmic divergence
// scale to the conformal one: x -> expm1(alpha x)/alpha. Fixes 0, has unit
// derivative at 0. Both directions reject negative input.
double to_conformal_scale(const Alpha& alpha, double x);
double from_conformal_scale(const Alpha& alpha, double y);

// B_phi[xi : xi'] = (phi(xi) - phi(xi')) - Dphi(xi') . (xi - xi')
// Requires a Bregman-tagged generator.
double bregman(const Generator& g, const PrimalPoint& xi,
               const PrimalPoint& xi_prime);

// L[xi : xi'] = (1/a) log(1 + a Dphi(xi') . (xi - xi')) - (phi(xi) - phi(xi'))
// Requires an alpha-tagged generator; a non-positive log argument is
// reported as LogDomainError, distinct from OutOfDomainError.
double l_alpha(const Generator& g, const PrimalPoint& xi,
               const PrimalPoint& xi_prime);

// Convex potential plus positive conformal factor, with the analytic
// derivative oracles the closed-form geometry needs. When built from an
// alpha-tagged generator, alpha is set and 1/kappa + alpha*phi_c == 0.
struct ConformalPair {
  Domain domain;
  std::optional<Alpha> alpha;

  std::function<double(const Vector&)> phi_c;
  std::function<Vector(const Vector&)> grad_phi_c;
  std::function<Matrix(const Vector&)> hess_phi_c;
  std::function<Tensor3(const Vector&)> third_phi_c;

  std::function<double(const Vector&)> kappa;
  std::function<Vector(const Vector&)> grad_kappa;
  std::function<Matrix(const Vector&)> hess_kappa;
};

// phi_c = -exp(alpha*phi) (convex), kappa = -1/(alpha*phi_c) > 0, with all
// derivatives composed from the generator's oracles. Rejects Bregman tags.
ConformalPair make_conformal_pair(const Generator& g);

// Views a Bregman-tagged generator as a conformal pair with kappa == 1.
ConformalPair bregman_as_conformal(const Generator& g);

// D_{phi,kappa}[xi : xi'] = kappa(xi) * B_{phi_c}[xi : xi']
double conformal(const ConformalPair& cp, const PrimalPoint& xi,
                 const PrimalPoint& xi_prime);

// (1/a) log(1 + a xi_y . eta_x) - phi(xi_y) - psi(eta_x); equals
// l_alpha(g, xi_y, xi_x) where xi_x is the primal preimage of eta_x.
double self_dual(const Generator& g, const PrimalPoint& xi_y,
                 const DualPoint& eta_x);

// The generator's own divergence as a plain two-point function
// (l_alpha for alpha tags, bregman otherwise).
DivergenceFn divergence_fn(const Generator& g);
DivergenceFn divergence_fn(const ConformalPair& cp);

}  // namespace logdiv
