#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>

namespace logdiv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// -------------------------------------------------------------------------
// Error kinds. Domain-of-definition failures of the logarithmic forms are
// reported separately from plain out-of-domain points so callers can tell
// "point not in Omega" apart from "log argument not positive".
// -------------------------------------------------------------------------

class OutOfDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LogDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegeneratePlaneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPositiveDefiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Strictly positive curvature parameter. The Bregman family is a separate
// constructor path, never alpha == 0.
class Alpha {
 public:
  explicit Alpha(double value) : value_(value) {
    if (!(value > 0.0)) {
      throw std::invalid_argument("Alpha must be positive, got " +
                                  std::to_string(value));
    }
  }
  double value() const { return value_; }

 private:
  double value_;
};

// Coordinate-tagged vectors. Components of a Tangent are in the primal
// chart at its base point unless a parameter name says otherwise.
struct PrimalPoint {
  Vector xi;
};

struct DualPoint {
  Vector eta;
};

struct Tangent {
  Vector v;
};

// Open convex domain, represented by a membership predicate plus the data
// samplers and solvers need (an interior anchor and a sampling box).
// Convexity is guaranteed per built-in domain, not checked generically.
struct Domain {
  int dimension = 0;
  std::function<bool(const Vector&)> contains;
  double interior_margin = 0.0;
  Vector center;
  Vector box_lo;
  Vector box_hi;
  // Distance to the boundary; empty for user domains that cannot provide it.
  std::function<double(const Vector&)> boundary_distance;
};

inline void require_in_domain(const Domain& d, const Vector& x,
                              const char* what) {
  if (x.size() != d.dimension) {
    throw OutOfDomainError(std::string(what) + ": point has dimension " +
                           std::to_string(x.size()) + ", domain has " +
                           std::to_string(d.dimension));
  }
  if (!d.contains || !d.contains(x)) {
    throw OutOfDomainError(std::string(what) + ": point outside the domain");
  }
}

}  // namespace logdiv
