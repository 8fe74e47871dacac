#pragma once

#include <span>
#include <vector>

#include "logdiv/divergence.hpp"
#include "logdiv/tensor.hpp"
#include "logdiv/types.hpp"

namespace logdiv {

// Metric and both families of Christoffel symbols at a point. gamma holds
// Gamma_ij^k (upper k), gamma_lower holds Gamma_{ij,k}; same for the dual
// connection. Both are symmetric in (i,j).
struct DualisticCoefficients {
  Matrix g;
  Tensor3 gamma;
  Tensor3 gamma_star;
  Tensor3 gamma_lower;
  Tensor3 gamma_star_lower;
  PrimalPoint at;
};

struct CurvatureTensor {
  Tensor4 r;  // R_ijk^l, antisymmetric in (i,j)
  PrimalPoint at;
};

// Central-difference steps. `third` drives the mixed third derivatives of
// the divergence, `fourth` the outer derivative of the Christoffel field in
// the curvature path. One Richardson level, (4 A(h) - A(2h))/3, is applied
// to the second/third-derivative stencils.
struct FdSteps {
  double third = 1e-3;
  double fourth = 5e-3;
  bool richardson = true;
};

// Divergence-to-geometry construction, all derivatives on the diagonal:
//   g_ij        = -d_i d_j' D
//   Gamma_{ij,k} = -d_i d_j d_k' D
//   Gamma*_{ij,k} = -d_i' d_j' d_k D
// Lowered symbols are the stored primitives; upper symbols are solved
// against g. Throws NotPositiveDefiniteError when g fails its LLT, which
// signals an invalid divergence or an oversized step.
DualisticCoefficients induced_structure_fd(const DivergenceFn& D,
                                           const PrimalPoint& p,
                                           const FdSteps& steps = {});

// Closed forms for a conformal divergence:
//   g_ij       = kappa d_ij phi_c
//   Gamma_ij^k = (d_i kappa / kappa) delta_j^k + (d_j kappa / kappa) delta_i^k
//   Gamma*_{ij,k} = -d_k kappa d_ij phi_c + kappa d_ijk phi_c
// (the dual symbols follow from d_k g_ij = Gamma_{ki,j} + Gamma*_{kj,i}).
DualisticCoefficients conformal_structure_closed(const ConformalPair& cp,
                                                 const PrimalPoint& p);

// Christoffel field of the generator's own divergence (closed forms; the
// conformal route for alpha tags, the Bregman route otherwise).
using ChristoffelField = std::function<Tensor3(const Vector&)>;
ChristoffelField primal_connection(const Generator& g);
ChristoffelField dual_connection(const Generator& g);

// R_ijk^l = d_i Gamma_jk^l - d_j Gamma_ik^l
//           + Gamma_im^l Gamma_jk^m - Gamma_jm^l Gamma_ik^m
// with d by central differences of the field at step h.
CurvatureTensor curvature_from_connection(const ChristoffelField& field,
                                          const PrimalPoint& p, double h,
                                          bool richardson = false);

CurvatureTensor curvature_fd(const DivergenceFn& D, const PrimalPoint& p,
                             const FdSteps& steps = {});

// R_ijk^l = kappa (d_jk(1/kappa) delta_i^l - d_ik(1/kappa) delta_j^l)
CurvatureTensor curvature_closed(const ConformalPair& cp,
                                 const PrimalPoint& p);

// <R(w,v)v, w> / (|v|^2 |w|^2 - <v,w>^2), all products under g. Throws
// DegeneratePlaneError when the Gram determinant falls below 1e-10.
double sectional_curvature(const DualisticCoefficients& coeffs,
                           const CurvatureTensor& curv, const Tangent& v,
                           const Tangent& w);

// Least-squares affine fit of 1/kappa - lambda*phi_c over the samples, plus
// the max-norm of its second derivative (analytic). Both vanish exactly at
// the lambda of constant sectional curvature.
struct ConstantCurvatureReport {
  double affine_fit_residual = 0.0;
  double second_derivative_norm = 0.0;
};
ConstantCurvatureReport constant_curvature_report(
    const ConformalPair& cp, double lambda, std::span<const Vector> samples);

// Maximal distance of the points from the line through points.front() with
// the given direction, normalized by the polyline arc length.
struct CollinearityReport {
  double max_offset = 0.0;
  double arc_length = 0.0;
  double normalized = 0.0;
};
CollinearityReport collinearity_report(const std::vector<Vector>& points,
                                       const Vector& direction);

}  // namespace logdiv
