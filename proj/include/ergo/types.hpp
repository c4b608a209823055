#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ergo {

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;

// Tolerances used by the invariant checks.  Exact identities on finite
// groups are asserted at kExactTol; quantities passing through 2^k-th
// roots get the looser kRootTol.
inline constexpr double kExactTol = 1e-12;
inline constexpr double kIneqTol = 1e-10;
inline constexpr double kRootTol = 1e-8;

// Thrown when an input file or constructed object violates one of the
// documented invariants.  The message names the failing invariant.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class EnumerationError : public std::runtime_error {
 public:
  explicit EnumerationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ergo
