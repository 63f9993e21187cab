#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace qframe {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Default tolerances. Everything in this library runs at desk scale
// (dimension d <= 16, frames with at most a few hundred elements), where
// double precision keeps conditioning benign and these absolute thresholds
// are comfortable.
namespace tol {
inline constexpr double hermiticity = 1e-12;  // max |M - M^dag| entry
inline constexpr double psd = 1e-10;          // eigenvalue floor for positivity
inline constexpr double trace = 1e-10;        // unit trace / completeness slack
inline constexpr double duality = 1e-10;      // reconstruction residual on basis probes
inline constexpr double spanning = 1e-12;     // relative eigenvalue floor for frame operators
inline constexpr double covariance = 1e-10;   // displacement-covariance residual
inline constexpr double purity = 1e-9;        // star-idempotence slack
inline constexpr double negative_entry = 1e-12;  // threshold for counting negative values
}  // namespace tol

// Invalid sizes, mismatched dimensions or labels, out-of-range indices.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input violates a contract: not positive, not normalized, incomplete POVM,
// non-dual pair, undefined normalization convention.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Family fails to span, or the frame operator is numerically singular.
struct NotAFrameError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical sanity assertion exceeded its tolerance.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qframe
