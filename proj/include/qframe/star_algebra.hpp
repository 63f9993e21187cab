#pragma once

#include "qframe/frame.hpp"

#include <vector>

namespace qframe {

// Algebraic structure carried by representation space: the two-point inner
// product kernel Theta(a,b) = <E(a), E(b)> and the three-point product
// kernel f(a,b,g) = <F(a), E(b) E(g)>. Together they make the
// representation an isometric algebra isomorphism: frame_ip matches
// hs_inner of the reconstructed operators and the star product matches
// operator multiplication.

struct Kernel2 {
  std::uint64_t frame_fp = 0;  // fingerprint of the frame whose Gram this is
  RMat matrix;                 // n x n, symmetric PSD

  int size() const { return static_cast<int>(matrix.rows()); }
};

struct Kernel3 {
  std::uint64_t frame_fp = 0;  // F side
  std::uint64_t dual_fp = 0;   // E side
  int n = 0;
  std::vector<Complex> values;  // row-major (a, b, g)

  Complex at(int a, int b, int g) const {
    return values[(static_cast<std::size_t>(a) * n + b) * n + g];
  }
};

// Gram matrix of the frame's elements.
Kernel2 theta_kernel(const Frame& e);

// Full three-point tensor for a verified dual pair. Materialized only for
// n <= 256 label points (n^3 complex entries); beyond that use
// star_product_direct, which never forms the tensor.
Kernel3 star_kernel(const DualPair& pair);

// <A, B>_Theta = sum_{a,b} w_a w_b A(a) B(b) Theta(a,b).
double frame_ip(const RepFunction& a, const RepFunction& b, const Kernel2& theta,
                const std::vector<double>& weights);

// (A * B)(a) = sum_{b,g} w_b w_g A(b) B(g) f(a,b,g). Values are complex in
// general: the product of two Hermitian operators need not be Hermitian.
CVec star_product(const RepFunction& a, const RepFunction& b, const Kernel3& f,
                  const std::vector<double>& weights);
CVec star_product(const CVec& a, const CVec& b, const Kernel3& f,
                  const std::vector<double>& weights);

// On-the-fly star product for a dual pair, evaluated without materializing
// the three-point tensor.
CVec star_product_direct(const RepFunction& a, const RepFunction& b,
                         const DualPair& pair);

// rep * rep = rep within tolerance, plus unit weighted sum.
bool is_pure_state_rep(const RepFunction& rho, const Kernel3& f,
                       const std::vector<double>& weights,
                       double purity_tol = tol::purity,
                       double sum_tol = tol::trace);

// Representation of the identity operator: the two-sided unit of the star
// algebra.
RepFunction identity_element(const Frame& f);

// Internal validity conditions formulated entirely on representation space.
// Probes are the eigenprojectors of the candidate's reconstruction plus
// Haar-random pure states; the operator-level check remains the oracle.
bool validate_state_rep(const RepFunction& rho, const DualPair& pair,
                        const Kernel2& theta, int random_probes = 200,
                        std::uint64_t probe_seed = 7,
                        double psd_tol = tol::psd, double sum_tol = tol::trace);

bool validate_effect_rep(const std::vector<RepFunction>& effect_reps,
                         const DualPair& pair, const Kernel2& theta, Via via,
                         int random_probes = 200, std::uint64_t probe_seed = 7,
                         double psd_tol = tol::psd, double sum_tol = tol::trace);

}  // namespace qframe
