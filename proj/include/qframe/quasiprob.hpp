#pragma once

#include "qframe/star_algebra.hpp"

#include <string>
#include <vector>

namespace qframe {

// The two autonomous probability calculi. States are always represented
// through the frame F. Effects go through F (deformed route, probabilities
// need the Theta kernel) or through a dual E (plain law of total
// probability). Both routes reproduce the Born rule for any dual pair.

struct QuasiDensity {
  RepFunction rep;  // via F
};

struct CondQuasiProb {
  std::vector<RepFunction> reps;  // one per outcome
  Via via = Via::frame_F;

  int outcomes() const { return static_cast<int>(reps.size()); }
};

struct NegativityReport {
  double min_value = 0.0;
  double negative_mass = 0.0;  // weighted sum of negative parts
  int count_negative = 0;
};

QuasiDensity rep_state(const Frame& f, const DensityOp& rho);

// Represent every effect through the given frame; the tag records which side
// of a dual pair the caller used.
CondQuasiProb rep_effects(const Frame& f_or_e, const Povm& m, Via via);

// Push an effect representation from the F side to the E side through the
// Theta kernel: M~_k(a) = sum_b w_b M_k(b) Theta(a,b). For a dual pair this
// equals representing through E directly.
CondQuasiProb convert_effect_rep(const CondQuasiProb& via_f, const Kernel2& theta,
                                 const Frame& f);

// Pr(k) = sum_{a,b} w_a w_b rho(a) M_k(b) <E(a), E(b)>. Unclamped.
double deformed_prob(const QuasiDensity& rho, const CondQuasiProb& m,
                     const DualPair& pair, const Kernel2& theta, int k);
double deformed_prob(const QuasiDensity& rho, const CondQuasiProb& m,
                     const DualPair& pair, int k);

// Pr(k) = sum_a w_a rho(a) M~_k(a). Unclamped.
double total_prob(const QuasiDensity& rho, const CondQuasiProb& m,
                  const DualPair& pair, int k);

// The bare law of total probability on a weighted point set.
double law_of_total_probability(const std::vector<double>& weights,
                                const std::vector<double>& density,
                                const std::vector<double>& conditional);

NegativityReport negativity(const RepFunction& rep,
                            const std::vector<double>& weights,
                            double count_tol = tol::negative_entry);

// One classical-model violation: where and by how much.
struct ClassicalityViolation {
  enum class Kind { state_negative, effect_negative, effect_above_one, completeness };
  Kind kind;
  int object = 0;   // index into the states or povms list
  int outcome = -1; // effect index, -1 for states
  int point = 0;    // label index
  double value = 0.0;
};

std::string to_string(ClassicalityViolation::Kind k);

struct ClassicalityReport {
  bool classical_for_this_pair = false;
  std::vector<ClassicalityViolation> violations;
};

// Checks the classical-model conditions for this fixed pair: state
// representations non-negative, effect representations (through the dual)
// within [0,1] and summing to one pointwise. The law of total probability
// holds by construction in this calculus and is not re-checked.
ClassicalityReport classicality_check(const DualPair& pair,
                                      const std::vector<DensityOp>& states,
                                      const std::vector<Povm>& povms,
                                      double entry_tol = tol::psd,
                                      double completeness_tol = tol::trace);

}  // namespace qframe
