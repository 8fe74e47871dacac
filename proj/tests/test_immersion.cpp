#include <cmath>

#include "doctest.h"
#include "logdiv/divergence.hpp"
#include "logdiv/dualistic.hpp"
#include "logdiv/immersion.hpp"
#include "logdiv/sampling.hpp"
#include "test_util.hpp"

using logdiv::Alpha;
using logdiv::ConformalPair;
using logdiv::Generator;
using logdiv::ImmersionFrame;
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

Vector v3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("frame at the ball center") {
  const ConformalPair cp = logdiv::make_conformal_pair(ball2());
  const ImmersionFrame frame = logdiv::immerse(cp, PrimalPoint{v2(0, 0)});
  CHECK((frame.f - v3(0, 0, 0.25)).norm() < 1e-15);
  CHECK((frame.n_field - v3(0, 0, 0.25)).norm() < 1e-15);
  CHECK((frame.n_star - v3(0, 0, 4)).norm() < 1e-15);
  CHECK(frame.n_star.dot(frame.n_field) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("frame invariants across alphas") {
  Rng rng(107);
  for (const double a : {0.5, 1.0, 2.0}) {
    const Generator g = ball2(a);
    const ConformalPair cp = logdiv::make_conformal_pair(g);
    for (int trial = 0; trial < 100; ++trial) {
      const PrimalPoint xi{test_util::sample_point(g, rng)};
      const ImmersionFrame frame = logdiv::immerse(cp, xi);
      // transversal field is alpha times the immersion, componentwise
      CHECK((frame.n_field - a * frame.f).cwiseAbs().maxCoeff() == 0.0);

      const auto check = logdiv::conormal_check(cp, xi);
      CHECK(check.pairing_error < 1e-12);
      CHECK(check.tangency_error < 1e-10);
      CHECK(std::abs(check.transversal_det) > 1e-6);
    }
  }
}

TEST_CASE("realization identity and its sensitivity") {
  Rng rng(109);
  for (const double a : {1.0, 2.0}) {
    const Generator g = ball2(a);
    const ConformalPair cp = logdiv::make_conformal_pair(g);
    for (int trial = 0; trial < 50; ++trial) {
      const PrimalPoint xi{test_util::sample_point(g, rng)};
      CHECK(logdiv::realization_residual(cp, xi) < 1e-8);
    }
    // a perturbed connection must be flagged
    const PrimalPoint xi{v2(0.5, 0.2)};
    CHECK(logdiv::realization_residual(cp, xi, 0.1) > 1e-3);
  }

  const ConformalPair flat = logdiv::bregman_as_conformal(
      logdiv::make_quadratic_bregman_generator(2));
  CHECK_THROWS_AS(logdiv::realization_residual(flat, PrimalPoint{v2(0, 0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(logdiv::immerse(flat, PrimalPoint{v2(0, 0)}),
                  std::invalid_argument);
}

TEST_CASE("geometric divergence: frozen value and identity case") {
  const ConformalPair cp = logdiv::make_conformal_pair(ball2());
  CHECK(logdiv::geometric_divergence(cp, PrimalPoint{v2(0.5, 0)},
                                     PrimalPoint{v2(0, 0)}) ==
        doctest::Approx(1.0 / 15.0).epsilon(1e-14));
  CHECK(logdiv::geometric_divergence(cp, PrimalPoint{v2(0.3, 0.3)},
                                     PrimalPoint{v2(0.3, 0.3)}) == 0.0);
}

TEST_CASE("triple equivalence over random pairs") {
  Rng rng(113);
  for (const double a : {1.0, 2.0}) {
    const Generator g = ball2(a);
    const ConformalPair cp = logdiv::make_conformal_pair(g);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const Vector x = test_util::sample_point(g, rng);
      const Vector y = test_util::sample_point(g, rng);
      const double rho =
          logdiv::geometric_divergence(cp, PrimalPoint{x}, PrimalPoint{y});
      const double dc = logdiv::conformal(cp, PrimalPoint{x}, PrimalPoint{y});
      const double tl = logdiv::to_conformal_scale(
          Alpha(a), logdiv::l_alpha(g, PrimalPoint{x}, PrimalPoint{y}));
      worst = std::max({worst, std::abs(rho - dc), std::abs(rho - tl)});
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("geometric divergence induces the same FD structure") {
  const Generator g = ball2();
  const ConformalPair cp = logdiv::make_conformal_pair(g);
  const logdiv::DivergenceFn Drho = [&cp](const Vector& x, const Vector& y) {
    return logdiv::geometric_divergence(cp, PrimalPoint{x}, PrimalPoint{y});
  };
  const logdiv::DivergenceFn Dl = logdiv::divergence_fn(g);
  Rng rng(127);
  for (int trial = 0; trial < 10; ++trial) {
    const PrimalPoint p{test_util::sample_point(g, rng)};
    const auto a = logdiv::induced_structure_fd(Drho, p);
    const auto b = logdiv::induced_structure_fd(Dl, p);
    CHECK((a.g - b.g).cwiseAbs().maxCoeff() < 1e-5);
    CHECK(max_abs_diff(a.gamma_lower, b.gamma_lower) < 1e-5);
    CHECK(max_abs_diff(a.gamma_star_lower, b.gamma_star_lower) < 1e-5);
  }
}

TEST_CASE("immersion in three dimensions") {
  Vector m = Vector::Zero(3);
  const Generator g = logdiv::make_ball_log_generator(3, 2.0, m, Alpha(1.5));
  const ConformalPair cp = logdiv::make_conformal_pair(g);
  Rng rng(131);
  for (int trial = 0; trial < 20; ++trial) {
    const PrimalPoint xi{test_util::sample_point(g, rng)};
    const auto check = logdiv::conormal_check(cp, xi);
    CHECK(check.pairing_error < 1e-12);
    CHECK(check.tangency_error < 1e-10);
    CHECK(logdiv::realization_residual(cp, xi) < 1e-8);
  }
}
