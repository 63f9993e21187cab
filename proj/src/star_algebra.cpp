#include "qframe/star_algebra.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace qframe {

namespace {

void require_rep_matches(const RepFunction& rep, const Frame& f, const char* who) {
  if (rep.size() != f.size() || rep.frame_fp != f.fingerprint()) {
    throw DimensionError(std::string(who) +
                         ": representation does not belong to this frame");
  }
}

CVec to_cvec(const RepFunction& r) {
  CVec v(r.size());
  for (int i = 0; i < r.size(); ++i) v(i) = r.values[i];
  return v;
}

// probe reps (via F) for the validity conditions: eigenprojectors of the
// reconstructed candidate plus Haar-random pure states
std::vector<RepFunction> pure_probes(const CMat& reconstructed,
                                     const DualPair& pair, int random_probes,
                                     std::uint64_t seed) {
  std::vector<RepFunction> probes;
  Eigen::SelfAdjointEigenSolver<CMat> es(reconstructed);
  for (int i = 0; i < es.eigenvectors().cols(); ++i) {
    const CVec v = es.eigenvectors().col(i);
    probes.push_back(represent(pair.frame, v * v.adjoint()));
  }
  Rng rng(seed);
  for (int i = 0; i < random_probes; ++i) {
    const CVec v = haar_vector(pair.frame.dim, rng);
    probes.push_back(represent(pair.frame, v * v.adjoint()));
  }
  if (probes.empty()) throw ValidationError("pure_probes: empty probe set");
  return probes;
}

double weighted_pointwise(const std::vector<double>& w, const RepFunction& a,
                          const RepFunction& b) {
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += w[i] * a.values[i] * b.values[i];
  return s;
}

}  // namespace

Kernel2 theta_kernel(const Frame& e) {
  check_frame_shape(e);
  const int n = e.size();
  RMat g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = hs_inner(e.elements[i], e.elements[j]);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return Kernel2{e.fingerprint(), std::move(g)};
}

Kernel3 star_kernel(const DualPair& pair) {
  const int n = pair.frame.size();
  if (n > 256) {
    std::ostringstream os;
    os << "star_kernel: " << n << " label points need " << (1.0 * n * n * n)
       << " complex entries; materialization is capped at n <= 256."
          " Use star_product_direct for on-the-fly evaluation.";
    throw DimensionError(os.str());
  }
  Kernel3 k;
  k.frame_fp = pair.frame.fingerprint();
  k.dual_fp = pair.dual.fingerprint();
  k.n = n;
  k.values.resize(static_cast<std::size_t>(n) * n * n);
  for (int b = 0; b < n; ++b) {
    for (int g = 0; g < n; ++g) {
      const CMat prod = pair.dual.elements[b] * pair.dual.elements[g];
      for (int a = 0; a < n; ++a) {
        k.values[(static_cast<std::size_t>(a) * n + b) * n + g] =
            hs_pairing(pair.frame.elements[a], prod);
      }
    }
  }
  return k;
}

double frame_ip(const RepFunction& a, const RepFunction& b, const Kernel2& theta,
                const std::vector<double>& weights) {
  const int n = theta.size();
  if (a.size() != n || b.size() != n || static_cast<int>(weights.size()) != n) {
    throw DimensionError("frame_ip: size mismatch with kernel");
  }
  if (a.frame_fp != b.frame_fp) {
    throw DimensionError("frame_ip: representations come from different frames");
  }
  RVec wa(n), wb(n);
  for (int i = 0; i < n; ++i) {
    wa(i) = weights[i] * a.values[i];
    wb(i) = weights[i] * b.values[i];
  }
  return wa.dot(theta.matrix * wb);
}

CVec star_product(const CVec& a, const CVec& b, const Kernel3& f,
                  const std::vector<double>& weights) {
  const int n = f.n;
  if (a.size() != n || b.size() != n || static_cast<int>(weights.size()) != n) {
    throw DimensionError("star_product: size mismatch with kernel");
  }
  CVec wa(n), wb(n);
  for (int i = 0; i < n; ++i) {
    wa(i) = weights[i] * a(i);
    wb(i) = weights[i] * b(i);
  }
  CVec out = CVec::Zero(n);
  for (int al = 0; al < n; ++al) {
    Complex s = 0.0;
    const std::size_t base = static_cast<std::size_t>(al) * n * n;
    for (int be = 0; be < n; ++be) {
      Complex inner = 0.0;
      const std::size_t row = base + static_cast<std::size_t>(be) * n;
      for (int ga = 0; ga < n; ++ga) inner += wb(ga) * f.values[row + ga];
      s += wa(be) * inner;
    }
    out(al) = s;
  }
  return out;
}

CVec star_product(const RepFunction& a, const RepFunction& b, const Kernel3& f,
                  const std::vector<double>& weights) {
  if (a.frame_fp != b.frame_fp) {
    throw DimensionError("star_product: representations come from different frames");
  }
  if (a.frame_fp != f.frame_fp) {
    throw DimensionError("star_product: representations do not match the kernel's frame");
  }
  return star_product(to_cvec(a), to_cvec(b), f, weights);
}

CVec star_product_direct(const RepFunction& a, const RepFunction& b,
                         const DualPair& pair) {
  require_rep_matches(a, pair.frame, "star_product_direct");
  require_rep_matches(b, pair.frame, "star_product_direct");
  const CMat ra = reconstruct(pair.dual, a);
  const CMat rb = reconstruct(pair.dual, b);
  return represent_complex(pair.frame, ra * rb);
}

bool is_pure_state_rep(const RepFunction& rho, const Kernel3& f,
                       const std::vector<double>& weights, double purity_tol,
                       double sum_tol) {
  if (rho.frame_fp != f.frame_fp) {
    throw DimensionError("is_pure_state_rep: representation does not match the kernel");
  }
  double total = 0.0;
  for (int i = 0; i < rho.size(); ++i) total += weights[i] * rho.values[i];
  if (std::abs(total - 1.0) > sum_tol) return false;
  const CVec sq = star_product(rho, rho, f, weights);
  double dev = 0.0;
  for (int i = 0; i < rho.size(); ++i) {
    dev = std::max(dev, std::abs(sq(i) - Complex(rho.values[i], 0.0)));
  }
  return dev <= purity_tol;
}

RepFunction identity_element(const Frame& f) {
  return represent(f, CMat::Identity(f.dim, f.dim));
}

bool validate_state_rep(const RepFunction& rho, const DualPair& pair,
                        const Kernel2& theta, int random_probes,
                        std::uint64_t probe_seed, double psd_tol,
                        double sum_tol) {
  require_rep_matches(rho, pair.frame, "validate_state_rep");
  if (theta.frame_fp != pair.dual.fingerprint()) {
    throw DimensionError("validate_state_rep: kernel does not match the dual frame");
  }
  double total = 0.0;
  for (int i = 0; i < rho.size(); ++i) {
    total += pair.frame.weights[i] * rho.values[i];
  }
  if (std::abs(total - 1.0) > sum_tol) return false;
  const CMat rec = reconstruct(pair.dual, rho);
  for (const auto& probe : pure_probes(rec, pair, random_probes, probe_seed)) {
    if (frame_ip(rho, probe, theta, pair.frame.weights) < -psd_tol) return false;
  }
  return true;
}

bool validate_effect_rep(const std::vector<RepFunction>& effect_reps,
                         const DualPair& pair, const Kernel2& theta, Via via,
                         int random_probes, std::uint64_t probe_seed,
                         double psd_tol, double sum_tol) {
  if (effect_reps.empty()) {
    throw DimensionError("validate_effect_rep: no effects given");
  }
  const Frame& rep_side = (via == Via::dual_E) ? pair.dual : pair.frame;
  const Frame& partner = (via == Via::dual_E) ? pair.frame : pair.dual;
  for (const auto& r : effect_reps) require_rep_matches(r, rep_side, "validate_effect_rep");
  if (via == Via::frame_F && theta.frame_fp != pair.dual.fingerprint()) {
    throw DimensionError("validate_effect_rep: kernel does not match the dual frame");
  }

  // completeness: the effects must sum to the identity element of the
  // algebra on their own side (the representation of the identity operator)
  const RepFunction unit = identity_element(rep_side);
  for (int i = 0; i < rep_side.size(); ++i) {
    double s = 0.0;
    for (const auto& r : effect_reps) s += r.values[i];
    if (std::abs(s - unit.values[i]) > sum_tol) return false;
  }

  for (const auto& r : effect_reps) {
    const CMat rec = reconstruct(partner, r);
    for (const auto& probe : pure_probes(rec, pair, random_probes, probe_seed)) {
      if (via == Via::dual_E) {
        // probes live on the F side; the pairing is the plain weighted
        // pointwise product
        if (weighted_pointwise(pair.frame.weights, r, probe) < -psd_tol) {
          return false;
        }
      } else {
        if (frame_ip(r, probe, theta, pair.frame.weights) < -psd_tol) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace qframe
