#pragma once

#include "qframe/frame.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qframe {

// Choi matrix of the superoperator A -> sum_a w_a <F(a), A> E(a) and the
// partial-transpose witness behind the no-positive-dual theorem.
//
// Convention: the Choi matrix is built as sum_ij Phi(|i><j|) (x) |i><j|,
// so the SECOND tensor factor carries the index basis. Expanding gives
// J = sum_a w_a E(a) (x) F(a)^T; the transpose on the F factor is what makes
// J equal the identity-map Choi sum_ij |i><j| (x) |i><j| exactly when (F, E)
// is a dual pair. Some of the literature writes the untransposed product,
// which is the same matrix up to a partial transpose.

struct ChoiMatrix {
  int dim = 0;  // Hilbert space dimension d; the matrix is d^2 x d^2
  CMat matrix;

  explicit ChoiMatrix(int d, CMat m, double herm_tol = tol::hermiticity);
};

ChoiMatrix choi_of_pair(const Frame& f, const Frame& e);

// Transpose on the second tensor factor. Involutive.
ChoiMatrix partial_transpose(const ChoiMatrix& j);

// Smallest eigenvalue of the partial transpose. Separable operators stay
// PSD under partial transposition; the identity-map Choi drops to -1 (the
// swap operator's negative eigenvalue), certifying entanglement.
double min_eig_pt(const ChoiMatrix& j);

// Choi matrix of the identity superoperator, sum_ij |i><j| (x) |i><j|.
CMat identity_choi(int d);

struct WitnessReport {
  int dim = 0;
  std::uint64_t frame_seed = 0;  // filled by batch drivers; 0 when unknown
  double min_dual_eig = 0.0;     // min over elements of the canonical dual
  double min_dual_eig_scaled = 0.0;  // same, divided by the element's HS norm
  double choi_pt_min_eig = 0.0;  // of the (F, canonical dual) Choi; near -1
  bool no_positive_dual_witnessed = false;
};

std::string verdict_string(const WitnessReport& r);

// For a positive frame F: the canonical dual must contain an element with a
// negative eigenvalue (no positive dual exists), and the dual-pair Choi is
// the identity-map Choi, whose partial transpose is manifestly not PSD.
WitnessReport positive_dual_witness(const Frame& f, double psd_tol = tol::psd);

// Random members of the affine family of duals: canonical dual plus
// perturbations from the null space of the synthesis constraint, so every
// returned frame is itself a dual of f. Used to sweep for (nonexistent)
// positive duals beyond the canonical one.
std::vector<Frame> perturbed_duals(const Frame& f, const Frame& canonical,
                                   int count, std::uint64_t seed);

}  // namespace qframe
