#pragma once

#include "qframe/operators.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace qframe {

// Frames over a finite label set Gamma.
//
// Conventions used throughout:
//   * Built-in phase-point families are generated from X^a Z^b P with an
//     integer phase exponent, so elements are Hermitian to machine precision.
//     Shift-clock commutation is X Z = omega^{-1} Z X (see generators()).
//   * The odd-prime family lives on Z_d x Z_d with elements
//     (1/d^2) X^{2q} Z^{2p} P exp(4 pi i q p / d); the doubled exponents need
//     2 to be invertible mod d, which is why d = 2 is rejected.
//   * The even-dimension family lives on Z_{2d} x Z_{2d} with elements
//     (1/4d^2) X^q Z^p P exp(i pi q p / d); 4d^2 points, linearly dependent.
//   * Integrals over Gamma are weighted sums: per-point measure weights
//     multiply, and two-point sums use the product weight w_a * w_b.

enum class FrameKind { wootters, leonhardt, custom };
enum class Convention { raw, state_normalized, standard };

// Which side of a dual pair a representation was computed through.
enum class Via { frame_F, dual_E };

std::string to_string(FrameKind k);
std::string to_string(Convention c);
FrameKind frame_kind_from_string(const std::string& s);
Convention convention_from_string(const std::string& s);

struct Frame {
  int dim = 0;
  std::vector<std::array<int, 2>> labels;  // phase-point labels (q, p)
  std::vector<CMat> elements;              // Hermitian d x d, one per label
  std::vector<double> weights;             // positive measure weights
  FrameKind kind = FrameKind::custom;
  Convention convention = Convention::raw;

  int size() const { return static_cast<int>(elements.size()); }

  // Content hash over dims, labels, weights and element entries (raw double
  // bits). Representations carry it so mixed-frame calls are caught.
  std::uint64_t fingerprint() const;
};

// Shape validation: counts match, n >= d^2, weights positive, elements
// Hermitian and d x d. Spanning is checked where the frame operator is
// actually inverted.
void check_frame_shape(const Frame& f, double herm_tol = tol::hermiticity);

// A real-valued function on the frame's label set, tagged with the
// fingerprint of the frame it was computed from.
struct RepFunction {
  std::uint64_t frame_fp = 0;
  std::vector<double> values;

  int size() const { return static_cast<int>(values.size()); }
};

// Linear map on Hermitian space, stored in herm_basis coordinates.
struct Superoperator {
  int dim = 0;
  RMat matrix;  // d^2 x d^2, real
};

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

struct DualityCheck {
  bool ok = false;
  double residual = 0.0;
};

struct CovarianceReport {
  bool covariant = false;
  double max_residual = 0.0;
};

struct PaperDualResult {
  Frame dual;
  double fitted_scale = 1.0;  // scalar applied to the closed-form family
  double residual = 0.0;      // duality residual after the fit
};

// Built-in frames (weights 1, convention raw).
Frame wootters_frame(int d);   // d an odd prime
Frame leonhardt_frame(int d);  // d even, >= 2

// Frame whose elements are the orthonormal Hermitian basis itself. Parseval:
// frame operator is the identity and the frame is its own dual.
Frame herm_basis_frame(int d);

// Closed-form duals for the two built-in families, rescaled by one fitted
// global scalar so duality actually holds; the scalar is reported rather
// than hard-coded. paper_dual builds the primal frame itself from (kind, d);
// paper_dual_for fits against a caller-supplied frame (any convention).
PaperDualResult paper_dual(FrameKind kind, int d);
PaperDualResult paper_dual_for(const Frame& f);

// S(A) = sum_a w_a <F(a), A> F(a) in herm_basis coordinates. Symmetric PSD.
Superoperator frame_operator(const Frame& f);

// Optimal frame constants: extreme eigenvalues of the frame operator.
FrameBounds frame_bounds(const Frame& f);

// Canonical dual E(a) = S^{-1} F(a), same labels and weights. Minimum-norm
// dual; coincides with the unique dual when |Gamma| = d^2.
Frame canonical_dual(const Frame& f);

// Checks A = sum_a w_a <F(a), A> E(a) on every herm_basis element; residual
// is the worst Hilbert-Schmidt error.
DualityCheck is_dual_pair(const Frame& f, const Frame& e,
                          double duality_tol = tol::duality);

// A verified dual pair. Constructing one runs is_dual_pair once so the
// probability calculi do not re-verify on every call.
struct DualPair {
  Frame frame;  // F, represents states
  Frame dual;   // E, reconstructs / represents effects
  double duality_residual = 0.0;
};
DualPair make_dual_pair(Frame f, Frame e, double duality_tol = tol::duality);

// A -> A(a) = <F(a), A>.
RepFunction represent(const Frame& f, const CMat& hermitian_op);

// <F(a), M> for arbitrary (not necessarily Hermitian) M; complex values.
CVec represent_complex(const Frame& f, const CMat& op);

// sum_a w_a rep(a) E(a). rep may come from the partner frame, so only the
// length is checked here.
CMat reconstruct(const Frame& e, const RepFunction& rep);

bool is_positive_frame(const Frame& f, double psd_tol = tol::psd);

// raw: unchanged. state_normalized: one global scalar on the elements so
// sum_a w_a F(a) = I. standard: rescale elements to unit trace (requires
// equal positive traces) and set the unique uniform weight making
// sum_a w_a F(a) = I.
Frame renormalize(const Frame& f, Convention convention);

// Checks that conjugation by every displacement X^a Z^b permutes the
// elements as a lattice translation of the labels. Labels must form a full
// square lattice Z_L x Z_L.
CovarianceReport covariance_check(const Frame& f,
                                  double cov_tol = tol::covariance);

// Random spanning family, Hermitian or (when positive) rank-1 PSD elements.
// Deterministic per seed; retries draws until the frame operator is well
// conditioned.
Frame random_frame(int d, int n, std::uint64_t seed, bool positive = false);

// The unique frame whose representation map realizes the given invertible
// linear map on Hermitian space: element i is the operator with coordinates
// equal to row i of the map.
Frame frame_of_linear_map(const Superoperator& s);

// n x d^2 matrix of herm_basis coordinates, one row per frame element.
RMat frame_coord_matrix(const Frame& f, const std::vector<CMat>& basis);

}  // namespace qframe
