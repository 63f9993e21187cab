#pragma once

#include "qframe/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace qframe {

// Deterministic random source. mt19937_64 has a fully specified output
// stream and the uniform/gaussian transforms are coded here explicitly, so a
// fixed seed reproduces bit-identical draws across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  // uniform double in [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  Complex cgauss() { return Complex(gauss(), gauss()); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// A Hermitian operator. Construction checks max |M - M^dag| entrywise.
struct HermitianOp {
  CMat m;

  explicit HermitianOp(CMat mat, double herm_tol = tol::hermiticity);
  int dim() const { return static_cast<int>(m.rows()); }
};

// A density operator: PSD within tolerance and unit trace. The wrapper is the
// proof of validation; downstream code takes DensityOp, not bare matrices.
struct DensityOp {
  HermitianOp op;

  explicit DensityOp(HermitianOp h, double psd_tol = tol::psd,
                     double trace_tol = tol::trace);
  int dim() const { return op.dim(); }
};

// A POVM: positive effects summing to the identity.
struct Povm {
  std::vector<HermitianOp> effects;

  explicit Povm(std::vector<HermitianOp> e, double psd_tol = tol::psd,
                double sum_tol = tol::trace);
  int dim() const { return effects.front().dim(); }
  int outcomes() const { return static_cast<int>(effects.size()); }
};

struct Generators {
  CMat X;  // shift: X phi_k = phi_{k+1 mod d}
  CMat Z;  // clock: Z phi_k = omega^k phi_k, omega = exp(2 pi i / d)
  CMat P;  // parity: P phi_k = phi_{-k mod d}
};

// Generalized Pauli (Weyl) generators plus parity. With this ordering the
// commutation phase is X Z = omega^{-1} Z X, equivalently Z X = omega X Z;
// the sign is pinned by a test, not assumed.
Generators generators(int d);

// Hilbert-Schmidt inner product tr(AB) for Hermitian A, B. The imaginary
// part must vanish within tolerance; it is asserted and discarded.
double hs_inner(const CMat& a, const CMat& b);

// tr(AB) without the reality assertion, for products of Hermitian operators
// that need not be Hermitian themselves (star-product kernels).
Complex hs_pairing(const CMat& a, const CMat& b);

DensityOp validate_state(const HermitianOp& rho, double psd_tol = tol::psd,
                         double trace_tol = tol::trace);
Povm validate_povm(std::vector<HermitianOp> effects, double psd_tol = tol::psd,
                   double sum_tol = tol::trace);

// Born rule tr(M_k rho). Tiny negative round-off above -1e-12 is clamped to 0.
double born_rule(const DensityOp& rho, const Povm& m, int k);

// Orthonormal basis of the real space of Hermitian d x d matrices under
// hs_inner (generalized Gell-Mann construction): identity/sqrt(d) first, then
// the d-1 diagonal elements, then symmetric and antisymmetric off-diagonal
// pairs in row-major order. d^2 elements.
std::vector<CMat> herm_basis(int d);

// Coordinates of a Hermitian operator in an orthonormal Hermitian basis, and
// the inverse map.
RVec herm_coords(const std::vector<CMat>& basis, const CMat& a);
CMat from_herm_coords(const std::vector<CMat>& basis, const RVec& coords);

// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const CMat& h);

CMat random_hermitian(int d, Rng& rng);
CVec haar_vector(int d, Rng& rng);

// Deterministic test-fixture generators: same seed, same output.
DensityOp random_state(int d, std::uint64_t seed);
Povm random_povm(int d, int m, std::uint64_t seed);

}  // namespace qframe
