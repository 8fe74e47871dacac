#pragma once

#include <cstdint>

#include "logdiv/types.hpp"

namespace logdiv {

// Deterministic generator with a fixed bit-level contract (splitmix64 core,
// 53-bit uniforms, Box-Muller normals). Unlike <random> distributions, the
// byte stream is identical across standard libraries and platforms, which
// the reproducibility contract of the experiment outputs relies on.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  double normal();

  // Independent stream for row-indexed draws.
  Rng fork(uint64_t salt) const {
    return Rng(state_ ^ (0x9e3779b97f4a7c15ull * (salt + 1)));
  }

 private:
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Uniform point of the domain with distance-to-boundary >= margin, by
// rejection from the sampling box. Throws SolveError when the acceptance
// rate collapses.
Vector sample_interior_point(const Domain& dom, Rng& rng, double margin);

// Uniform direction on the g-unit sphere: v = L^{-T} z with g = L L^T and
// z uniform on the Euclidean sphere.
Vector sample_unit_tangent(const Matrix& g, Rng& rng);

// Gram-Schmidt step returning the component of w g-orthogonal to v,
// normalized to g-unit length.
Vector g_orthonormalize(const Matrix& g, const Vector& v, const Vector& w);

}  // namespace logdiv
