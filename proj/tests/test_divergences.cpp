#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "doctest.h"
#include "logdiv/divergence.hpp"
#include "logdiv/dual_geometry.hpp"
#include "logdiv/sampling.hpp"
#include "test_util.hpp"

using logdiv::Alpha;
using logdiv::ConformalPair;
using logdiv::DualPoint;
using logdiv::Generator;
using logdiv::Matrix;
using logdiv::PrimalPoint;
using logdiv::Rng;
using logdiv::Vector;

namespace {

Generator ball2(double alpha = 1.0) {
  return logdiv::make_ball_log_generator(2, 4.0, Vector::Zero(2),
                                         Alpha(alpha));
}

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

constexpr double kLog16Over15 = 0.06453852113757118;

}  // namespace

TEST_CASE("bregman frozen values") {
  const Generator q = logdiv::make_quadratic_bregman_generator(2);
  CHECK(logdiv::bregman(q, PrimalPoint{v2(1, 0)}, PrimalPoint{v2(0, 0)}) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(logdiv::bregman(q, PrimalPoint{v2(0.3, -0.7)},
                        PrimalPoint{v2(0.3, -0.7)}) == 0.0);
  CHECK(logdiv::bregman(q, PrimalPoint{v2(1, 2)}, PrimalPoint{v2(-1, 1)}) ==
        doctest::Approx(2.5).epsilon(1e-15));
  CHECK_THROWS_AS(logdiv::bregman(ball2(), PrimalPoint{v2(0, 0)},
                                  PrimalPoint{v2(0, 0)}),
                  std::invalid_argument);
}

TEST_CASE("l_alpha frozen values and asymmetry") {
  const Generator g = ball2();
  CHECK(logdiv::l_alpha(g, PrimalPoint{v2(0.3, 0.7)},
                        PrimalPoint{v2(0.3, 0.7)}) == 0.0);
  CHECK(logdiv::l_alpha(g, PrimalPoint{v2(0.5, 0)}, PrimalPoint{v2(0, 0)}) ==
        doctest::Approx(kLog16Over15).epsilon(1e-13));

  const double fwd =
      logdiv::l_alpha(g, PrimalPoint{v2(0.5, 0)}, PrimalPoint{v2(0, 0)});
  const double bwd =
      logdiv::l_alpha(g, PrimalPoint{v2(0, 0)}, PrimalPoint{v2(0.5, 0)});
  CHECK(fwd > 0.0);
  CHECK(bwd > 0.0);
  CHECK(fwd != bwd);

  CHECK_THROWS_AS(logdiv::l_alpha(g, PrimalPoint{v2(5, 0)},
                                  PrimalPoint{v2(0, 0)}),
                  logdiv::OutOfDomainError);
}

TEST_CASE("non-positive log argument is its own failure kind") {
  // invalid potential (e^{phi} convex), evaluated where the log argument
  // turns negative
  logdiv::Domain dom;
  dom.dimension = 2;
  dom.contains = [](const Vector&) { return true; };
  dom.center = Vector::Zero(2);
  dom.box_lo = Vector::Constant(2, -3.0);
  dom.box_hi = Vector::Constant(2, 3.0);
  const Generator bad = logdiv::make_custom_generator(
      dom, Alpha(1.0), [](const Vector& x) { return x.squaredNorm(); },
      [](const Vector& x) { return Vector(2.0 * x); },
      [](const Vector& x) {
        return Matrix(2.0 * Matrix::Identity(x.size(), x.size()));
      });
  CHECK_THROWS_AS(logdiv::l_alpha(bad, PrimalPoint{v2(1, 0)},
                                  PrimalPoint{v2(2, 0)}),
                  logdiv::LogDomainError);
}

TEST_CASE("conformal scale map") {
  const Alpha one(1.0);
  CHECK(logdiv::to_conformal_scale(one, 0.0) == 0.0);
  CHECK(logdiv::to_conformal_scale(one, std::log(16.0 / 15.0)) ==
        doctest::Approx(1.0 / 15.0).epsilon(1e-14));
  CHECK(logdiv::to_conformal_scale(Alpha(2.0), 0.5) ==
        doctest::Approx((std::exp(1.0) - 1.0) / 2.0).epsilon(1e-15));
  CHECK_THROWS_AS(logdiv::to_conformal_scale(one, -0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(logdiv::from_conformal_scale(one, -0.1),
                  std::invalid_argument);

  // unit derivative at zero
  const double d =
      logdiv::to_conformal_scale(Alpha(1.7), 1e-8) / 1e-8;
  CHECK(d == doctest::Approx(1.0).epsilon(1e-6));

  Rng rng(3);
  for (const double a : {0.5, 1.0, 2.0}) {
    for (int trial = 0; trial < 100; ++trial) {
      const double x = rng.uniform(0.0, 5.0);
      const double y = logdiv::to_conformal_scale(Alpha(a), x);
      CHECK(std::abs(logdiv::from_conformal_scale(Alpha(a), y) - x) < 1e-12);
    }
  }
}

TEST_CASE("conformal pair of the ball generator") {
  const Generator g = ball2();
  const ConformalPair cp = logdiv::make_conformal_pair(g);

  CHECK(cp.kappa(v2(0, 0)) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(cp.phi_c(v2(0.5, 0)) ==
        doctest::Approx(0.25 - 4.0).epsilon(1e-15));  // |xi|^2 - 4

  CHECK_THROWS_AS(
      logdiv::make_conformal_pair(logdiv::make_quadratic_bregman_generator(2)),
      std::invalid_argument);

  Rng rng(11);
  for (const double a : {1.0, 2.0}) {
    const Generator ga = ball2(a);
    const ConformalPair cpa = logdiv::make_conformal_pair(ga);
    for (int trial = 0; trial < 100; ++trial) {
      const Vector p = test_util::sample_point(ga, rng);
      // 1/kappa + alpha phi_c == 0 by construction
      CHECK(std::abs(1.0 / cpa.kappa(p) + a * cpa.phi_c(p)) < 1e-12);
    }
  }
}

TEST_CASE("conformal pair derivative composition") {
  const Generator g = ball2(2.0);
  const ConformalPair cp = logdiv::make_conformal_pair(g);
  Rng rng(12);
  for (int trial = 0; trial < 25; ++trial) {
    const Vector p = test_util::sample_point(g, rng);
    CHECK((cp.grad_phi_c(p) - test_util::oracle_grad(cp.phi_c, p, 1e-5))
              .norm() < 1e-6);
    CHECK((cp.hess_phi_c(p) - test_util::oracle_hess(cp.phi_c, p, 1e-4))
              .cwiseAbs()
              .maxCoeff() < 1e-5);
    CHECK((cp.grad_kappa(p) - test_util::oracle_grad(cp.kappa, p, 1e-5))
              .norm() < 1e-6);
    CHECK((cp.hess_kappa(p) - test_util::oracle_hess(cp.kappa, p, 1e-4))
              .cwiseAbs()
              .maxCoeff() < 1e-5);
    // the ball's convex potential is quadratic: thirds vanish
    CHECK(cp.third_phi_c(p).max_abs() < 1e-12);
  }
}

TEST_CASE("conformal divergence frozen values and swap cross-check") {
  const Generator g = ball2();
  const ConformalPair cp = logdiv::make_conformal_pair(g);
  CHECK(logdiv::conformal(cp, PrimalPoint{v2(0.5, 0)},
                          PrimalPoint{v2(0, 0)}) ==
        doctest::Approx(1.0 / 15.0).epsilon(1e-14));
  CHECK(logdiv::conformal(cp, PrimalPoint{v2(0.4, -0.2)},
                          PrimalPoint{v2(0.4, -0.2)}) == 0.0);

  // swapped arguments still satisfy the value-map identity
  const double swapped_l =
      logdiv::l_alpha(g, PrimalPoint{v2(0, 0)}, PrimalPoint{v2(0.5, 0)});
  CHECK(logdiv::conformal(cp, PrimalPoint{v2(0, 0)},
                          PrimalPoint{v2(0.5, 0)}) ==
        doctest::Approx(logdiv::to_conformal_scale(Alpha(1.0), swapped_l))
            .epsilon(1e-13));
}

TEST_CASE("value-map equivalence over random pairs") {
  Rng rng(21);
  for (const double a : {1.0, 2.0}) {
    const Generator g = ball2(a);
    const ConformalPair cp = logdiv::make_conformal_pair(g);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const Vector x = test_util::sample_point(g, rng);
      const Vector y = test_util::sample_point(g, rng);
      const double lhs = logdiv::to_conformal_scale(
          Alpha(a), logdiv::l_alpha(g, PrimalPoint{x}, PrimalPoint{y}));
      const double rhs = logdiv::conformal(cp, PrimalPoint{x}, PrimalPoint{y});
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("nonnegativity and identity of indiscernibles") {
  const Generator g = ball2();
  const ConformalPair cp = logdiv::make_conformal_pair(g);
  const Generator q = logdiv::make_quadratic_bregman_generator(2);
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Vector x = test_util::sample_point(g, rng);
    Vector y = test_util::sample_point(g, rng);
    if ((x - y).norm() < 1e-3) continue;
    const double dl = logdiv::l_alpha(g, PrimalPoint{x}, PrimalPoint{y});
    const double dc = logdiv::conformal(cp, PrimalPoint{x}, PrimalPoint{y});
    const double db = logdiv::bregman(q, PrimalPoint{x}, PrimalPoint{y});
    const double ds =
        logdiv::self_dual(g, PrimalPoint{x}, logdiv::to_dual(g, PrimalPoint{y}));
    for (const double d : {dl, dc, db, ds}) {
      CHECK(d >= 1e-10);
    }
  }
  // identity case is exactly zero after clamping
  const Vector p = v2(0.4, 0.6);
  CHECK(logdiv::l_alpha(g, PrimalPoint{p}, PrimalPoint{p}) == 0.0);
  CHECK(logdiv::conformal(cp, PrimalPoint{p}, PrimalPoint{p}) == 0.0);
  CHECK(logdiv::self_dual(g, PrimalPoint{p}, logdiv::to_dual(g, PrimalPoint{p})) == 0.0);
}

TEST_CASE("Bregman limit: gap halves when alpha halves") {
  const Generator breg = test_util::fixed_log_bregman(4.0);
  Rng rng(41);
  std::vector<std::pair<Vector, Vector>> pairs;
  for (int trial = 0; trial < 20; ++trial) {
    pairs.emplace_back(test_util::sample_point(breg, rng),
                       test_util::sample_point(breg, rng));
  }
  const double alphas[] = {1e-2, 5e-3, 2.5e-3};
  std::array<std::vector<double>, 3> gaps;
  for (int ai = 0; ai < 3; ++ai) {
    const Generator ga = test_util::fixed_log_generator(4.0, alphas[ai]);
    for (const auto& [x, y] : pairs) {
      const double la = logdiv::l_alpha(ga, PrimalPoint{x}, PrimalPoint{y});
      const double bb = logdiv::bregman(breg, PrimalPoint{x}, PrimalPoint{y});
      gaps[ai].push_back(std::abs(la - bb));
    }
  }
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (gaps[0][i] < 1e-10) continue;  // zero-gap pairs carry no signal
    const double r1 = gaps[1][i] / gaps[0][i];
    const double r2 = gaps[2][i] / gaps[1][i];
    CHECK(r1 == doctest::Approx(0.5).epsilon(0.2));
    CHECK(r2 == doctest::Approx(0.5).epsilon(0.2));
  }
}

TEST_CASE("self-dual representation") {
  const Generator g = ball2();
  // x at the center: eta = 0 and psi(0) = -phi(0) = -log 4
  CHECK(logdiv::self_dual(g, PrimalPoint{v2(0.5, 0)},
                          DualPoint{Vector::Zero(2)}) ==
        doctest::Approx(kLog16Over15).epsilon(1e-13));

  Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector y = test_util::sample_point(g, rng);
    const Vector x = test_util::sample_point(g, rng);
    const DualPoint eta_x = logdiv::to_dual(g, PrimalPoint{x});
    const double sd = logdiv::self_dual(g, PrimalPoint{y}, eta_x);
    const double la = logdiv::l_alpha(g, PrimalPoint{y}, PrimalPoint{x});
    CHECK(std::abs(sd - la) < 1e-10);
  }

  // eta far outside the image of the ball: the preimage solve must fail
  CHECK_THROWS_AS(logdiv::self_dual(g, PrimalPoint{v2(0.5, 0)},
                                    DualPoint{v2(-2.0, 0)}),
                  logdiv::SolveError);
}
