#include "qframe/quasiprob.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qframe {

namespace {

void require_rep_of(const RepFunction& rep, const Frame& f, const char* who) {
  if (rep.size() != f.size() || rep.frame_fp != f.fingerprint()) {
    throw DimensionError(std::string(who) +
                         ": representation does not belong to this frame");
  }
}

void require_outcome(const CondQuasiProb& m, int k, const char* who) {
  if (k < 0 || k >= m.outcomes()) {
    std::ostringstream os;
    os << who << ": outcome " << k << " out of range [0," << m.outcomes() << ")";
    throw DimensionError(os.str());
  }
}

}  // namespace

QuasiDensity rep_state(const Frame& f, const DensityOp& rho) {
  if (rho.dim() != f.dim) throw DimensionError("rep_state: dimension mismatch");
  return QuasiDensity{represent(f, rho.op.m)};
}

CondQuasiProb rep_effects(const Frame& f_or_e, const Povm& m, Via via) {
  if (m.dim() != f_or_e.dim) throw DimensionError("rep_effects: dimension mismatch");
  CondQuasiProb out;
  out.via = via;
  out.reps.reserve(m.effects.size());
  for (const auto& eff : m.effects) out.reps.push_back(represent(f_or_e, eff.m));
  return out;
}

CondQuasiProb convert_effect_rep(const CondQuasiProb& via_f, const Kernel2& theta,
                                 const Frame& f) {
  if (via_f.via != Via::frame_F) {
    throw ValidationError("convert_effect_rep: input must be represented through the frame");
  }
  const int n = f.size();
  if (theta.size() != n) {
    throw DimensionError("convert_effect_rep: kernel size does not match the frame");
  }
  CondQuasiProb out;
  out.via = Via::dual_E;
  for (const auto& rep : via_f.reps) {
    require_rep_of(rep, f, "convert_effect_rep");
    RepFunction converted;
    converted.frame_fp = theta.frame_fp;  // result lives on the dual side
    converted.values.resize(n);
    for (int a = 0; a < n; ++a) {
      double s = 0.0;
      for (int b = 0; b < n; ++b) {
        s += f.weights[b] * rep.values[b] * theta.matrix(a, b);
      }
      converted.values[a] = s;
    }
    out.reps.push_back(std::move(converted));
  }
  return out;
}

double deformed_prob(const QuasiDensity& rho, const CondQuasiProb& m,
                     const DualPair& pair, const Kernel2& theta, int k) {
  require_outcome(m, k, "deformed_prob");
  if (m.via != Via::frame_F) {
    throw ValidationError("deformed_prob: effects must be represented through the frame");
  }
  require_rep_of(rho.rep, pair.frame, "deformed_prob");
  require_rep_of(m.reps[k], pair.frame, "deformed_prob");
  if (theta.frame_fp != pair.dual.fingerprint()) {
    throw DimensionError("deformed_prob: kernel does not match the dual frame");
  }
  return frame_ip(rho.rep, m.reps[k], theta, pair.frame.weights);
}

double deformed_prob(const QuasiDensity& rho, const CondQuasiProb& m,
                     const DualPair& pair, int k) {
  return deformed_prob(rho, m, pair, theta_kernel(pair.dual), k);
}

double total_prob(const QuasiDensity& rho, const CondQuasiProb& m,
                  const DualPair& pair, int k) {
  require_outcome(m, k, "total_prob");
  if (m.via != Via::dual_E) {
    throw ValidationError("total_prob: effects must be represented through the dual");
  }
  require_rep_of(rho.rep, pair.frame, "total_prob");
  require_rep_of(m.reps[k], pair.dual, "total_prob");
  return law_of_total_probability(pair.frame.weights, rho.rep.values,
                                  m.reps[k].values);
}

double law_of_total_probability(const std::vector<double>& weights,
                                const std::vector<double>& density,
                                const std::vector<double>& conditional) {
  if (weights.size() != density.size() || weights.size() != conditional.size()) {
    throw DimensionError("law_of_total_probability: length mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    s += weights[i] * density[i] * conditional[i];
  }
  return s;
}

NegativityReport negativity(const RepFunction& rep,
                            const std::vector<double>& weights,
                            double count_tol) {
  if (weights.size() != rep.values.size()) {
    throw DimensionError("negativity: weights length mismatch");
  }
  NegativityReport out;
  out.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.values.size(); ++i) {
    const double v = rep.values[i];
    if (!std::isfinite(v)) throw ValidationError("negativity: non-finite entry");
    out.min_value = std::min(out.min_value, v);
    if (v < 0.0) out.negative_mass += weights[i] * (-v);
    if (v < -count_tol) ++out.count_negative;
  }
  if (rep.values.empty()) out.min_value = 0.0;
  return out;
}

std::string to_string(ClassicalityViolation::Kind k) {
  switch (k) {
    case ClassicalityViolation::Kind::state_negative: return "state_negative";
    case ClassicalityViolation::Kind::effect_negative: return "effect_negative";
    case ClassicalityViolation::Kind::effect_above_one: return "effect_above_one";
    case ClassicalityViolation::Kind::completeness: return "completeness";
  }
  return "unknown";
}

ClassicalityReport classicality_check(const DualPair& pair,
                                      const std::vector<DensityOp>& states,
                                      const std::vector<Povm>& povms,
                                      double entry_tol, double completeness_tol) {
  ClassicalityReport report;
  using Kind = ClassicalityViolation::Kind;

  for (std::size_t s = 0; s < states.size(); ++s) {
    const QuasiDensity qd = rep_state(pair.frame, states[s]);
    for (int a = 0; a < qd.rep.size(); ++a) {
      const double v = qd.rep.values[a];
      if (v < -entry_tol) {
        report.violations.push_back(
            {Kind::state_negative, static_cast<int>(s), -1, a, v});
      }
    }
  }

  for (std::size_t p = 0; p < povms.size(); ++p) {
    const CondQuasiProb reps = rep_effects(pair.dual, povms[p], Via::dual_E);
    const int n = pair.dual.size();
    for (int a = 0; a < n; ++a) {
      double sum = 0.0;
      for (int k = 0; k < reps.outcomes(); ++k) {
        const double v = reps.reps[k].values[a];
        sum += v;
        if (v < -entry_tol) {
          report.violations.push_back(
              {Kind::effect_negative, static_cast<int>(p), k, a, v});
        } else if (v > 1.0 + entry_tol) {
          report.violations.push_back(
              {Kind::effect_above_one, static_cast<int>(p), k, a, v});
        }
      }
      if (std::abs(sum - 1.0) > completeness_tol) {
        report.violations.push_back(
            {Kind::completeness, static_cast<int>(p), -1, a, sum});
      }
    }
  }

  report.classical_for_this_pair = report.violations.empty();
  return report;
}

}  // namespace qframe
