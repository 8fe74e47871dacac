#pragma once

#include <functional>
#include <optional>

#include "logdiv/tensor.hpp"
#include "logdiv/types.hpp"

namespace logdiv {

// A potential with derivative oracles on an open convex domain. Two kinds:
//
//   * alpha-tagged: phi with exp(alpha*phi) concave (Hessian of
//     exp(alpha*phi) strictly negative definite on the domain),
//   * Bregman-tagged (alpha empty): phi convex with positive definite
//     Hessian.
//
// Generators are immutable after construction and all oracles are pure, so
// they are safe to share across threads.
struct Generator {
  Domain domain;
  std::optional<Alpha> alpha;  // empty => Bregman potential

  std::function<double(const Vector&)> phi;
  std::function<Vector(const Vector&)> grad_phi;
  std::function<Matrix(const Vector&)> hess_phi;
  std::function<Tensor3(const Vector&)> third_phi;

  bool is_bregman() const { return !alpha.has_value(); }
  double alpha_value() const;  // throws std::invalid_argument on Bregman tag
};

// phi(xi) = (1/alpha) log(c - |xi - m|^2) on the open ball |xi - m|^2 < c.
// exp(alpha*phi) = c - |xi - m|^2 has Hessian -2I everywhere. Rejects c <= 0
// and n < 2.
Generator make_ball_log_generator(int n, double c, const Vector& m,
                                  Alpha alpha);

// Convex reference potential phi(xi) = |xi|^2 / 2 on all of R^n (sampled
// from a large bounding box). Rejects n < 2.
Generator make_quadratic_bregman_generator(int n);

// Assembles a generator from user-supplied oracles. Missing derivative
// oracles are replaced by central-difference fallbacks of phi (grad step
// 1e-6, Hessian step 1e-4, thirds from the Hessian at 1e-3); results that
// feed curvature-level quantities then deserve tolerances widened by ~100x.
Generator make_custom_generator(Domain domain, std::optional<Alpha> alpha,
                                std::function<double(const Vector&)> phi,
                                std::function<Vector(const Vector&)> grad = {},
                                std::function<Matrix(const Vector&)> hess = {},
                                std::function<Tensor3(const Vector&)> third = {});

// Largest eigenvalue of the Hessian of exp(alpha*phi) at p; the generator
// is valid at p iff this is strictly negative. Rejects Bregman-tagged
// generators and points outside the domain.
double check_alpha_exp_concavity(const Generator& g, const PrimalPoint& p);

// Hessian of exp(alpha*phi):  D^2 e^{a phi} = a e^{a phi} (a Dphi Dphi^T + D^2 phi).
Matrix exp_phi_hessian(const Generator& g, const Vector& xi);

}  // namespace logdiv
