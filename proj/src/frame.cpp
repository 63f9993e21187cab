#include "qframe/frame.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <sstream>

namespace qframe {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

void fnv_double(std::uint64_t& h, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, sizeof bits);
  fnv_bytes(h, &bits, sizeof bits);
}

bool is_odd_prime(int d) {
  if (d < 3 || d % 2 == 0) return false;
  for (int k = 3; k * k <= d; k += 2)
    if (d % k == 0) return false;
  return true;
}

// element of the X^a Z^b P family with phase exp(i * pi * phase_num / phase_den):
// column k carries exp(2 pi i * (-b k) / d) at row (a - k) mod d, then the
// global phase. Integer exponent arithmetic keeps the entries exactly
// Hermitian where the algebra says they are.
CMat phase_point_core(int d, int a, int b, long phase_num, long phase_den) {
  CMat m = CMat::Zero(d, d);
  const long pd = phase_den;
  for (int k = 0; k < d; ++k) {
    const int row = ((a - k) % d + d) % d;
    // total phase exponent in units of pi / phase_den:
    //   2 pi (-b k) / d = pi * (-2 b k * phase_den / d) / phase_den
    // phase_den is chosen a multiple of d by the callers.
    const long clock = -2l * b * k * (pd / d);
    long num = (clock + phase_num) % (2 * pd);
    if (num < 0) num += 2 * pd;
    const double ang = M_PI * static_cast<double>(num) / static_cast<double>(pd);
    m(row, k) = Complex(std::cos(ang), std::sin(ang));
  }
  return m;
}


struct FrameOperatorEig {
  std::vector<CMat> basis;
  RMat coords;  // n x d^2
  RVec evals;
  RMat evecs;
};

FrameOperatorEig frame_operator_eig(const Frame& f) {
  FrameOperatorEig out;
  out.basis = herm_basis(f.dim);
  out.coords = frame_coord_matrix(f, out.basis);
  RVec w(f.size());
  for (int i = 0; i < f.size(); ++i) w(i) = f.weights[i];
  RMat s = out.coords.transpose() * w.asDiagonal() * out.coords;
  s = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<RMat> es(s);
  out.evals = es.eigenvalues();
  out.evecs = es.eigenvectors();
  return out;
}

void require_invertible(const FrameOperatorEig& eig, const char* who) {
  const double hi = eig.evals.maxCoeff();
  const double lo = eig.evals.minCoeff();
  if (!(hi > 0.0) || lo <= tol::spanning * hi) {
    std::ostringstream os;
    os << who << ": frame operator is singular (eigenvalue range [" << lo
       << ", " << hi << "]); the family does not span";
    throw NotAFrameError(os.str());
  }
}

void require_same_labels(const Frame& f, const Frame& e, const char* who) {
  if (f.dim != e.dim) {
    throw DimensionError(std::string(who) + ": dimension mismatch");
  }
  if (f.labels != e.labels) {
    throw DimensionError(std::string(who) + ": label sets differ");
  }
  if (f.size() != e.size()) {
    throw DimensionError(std::string(who) + ": element counts differ");
  }
  for (int i = 0; i < f.size(); ++i) {
    const double scale = std::max(1.0, std::abs(f.weights[i]));
    if (std::abs(f.weights[i] - e.weights[i]) > 1e-12 * scale) {
      throw DimensionError(std::string(who) + ": weights differ");
    }
  }
}

}  // namespace

std::string to_string(FrameKind k) {
  switch (k) {
    case FrameKind::wootters: return "wootters";
    case FrameKind::leonhardt: return "leonhardt";
    case FrameKind::custom: return "custom";
  }
  return "custom";
}

std::string to_string(Convention c) {
  switch (c) {
    case Convention::raw: return "raw";
    case Convention::state_normalized: return "state_normalized";
    case Convention::standard: return "standard";
  }
  return "raw";
}

FrameKind frame_kind_from_string(const std::string& s) {
  if (s == "wootters") return FrameKind::wootters;
  if (s == "leonhardt") return FrameKind::leonhardt;
  if (s == "custom") return FrameKind::custom;
  throw ValidationError("unknown frame kind: " + s);
}

Convention convention_from_string(const std::string& s) {
  if (s == "raw") return Convention::raw;
  if (s == "state_normalized") return Convention::state_normalized;
  if (s == "standard") return Convention::standard;
  throw ValidationError("unknown convention: " + s);
}

std::uint64_t Frame::fingerprint() const {
  std::uint64_t h = kFnvOffset;
  const std::int64_t meta[2] = {dim, static_cast<std::int64_t>(labels.size())};
  fnv_bytes(h, meta, sizeof meta);
  for (const auto& l : labels) fnv_bytes(h, l.data(), sizeof(int) * 2);
  for (double w : weights) fnv_double(h, w);
  for (const auto& el : elements) {
    for (int j = 0; j < el.cols(); ++j) {
      for (int i = 0; i < el.rows(); ++i) {
        fnv_double(h, el(i, j).real());
        fnv_double(h, el(i, j).imag());
      }
    }
  }
  return h;
}

void check_frame_shape(const Frame& f, double herm_tol) {
  if (f.dim < 2) throw DimensionError("Frame: dimension must be >= 2");
  const std::size_t n = f.elements.size();
  if (f.labels.size() != n || f.weights.size() != n) {
    throw DimensionError("Frame: labels, elements and weights must have equal length");
  }
  if (n < static_cast<std::size_t>(f.dim) * f.dim) {
    std::ostringstream os;
    os << "Frame: " << n << " elements cannot span Hermitian space of dimension "
       << f.dim * f.dim;
    throw DimensionError(os.str());
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (f.elements[i].rows() != f.dim || f.elements[i].cols() != f.dim) {
      throw DimensionError("Frame: element dimension mismatch");
    }
    const double dev =
        (f.elements[i] - f.elements[i].adjoint()).cwiseAbs().maxCoeff();
    if (dev > herm_tol) {
      std::ostringstream os;
      os << "Frame: element " << i << " deviates from Hermitian by " << dev;
      throw ValidationError(os.str());
    }
    if (!(f.weights[i] > 0.0)) {
      throw ValidationError("Frame: weights must be positive");
    }
  }
}

Frame wootters_frame(int d) {
  if (!is_odd_prime(d)) {
    std::ostringstream os;
    os << "wootters_frame: dimension " << d << " unsupported; requires an odd prime";
    if (d == 2) {
      os << " (at d=2 the doubled exponents 2q, 2p collapse mod 2 and the"
            " family degenerates to a non-spanning set)";
    }
    throw DimensionError(os.str());
  }
  Frame f;
  f.dim = d;
  f.kind = FrameKind::wootters;
  const double scale = 1.0 / (static_cast<double>(d) * d);
  for (int q = 0; q < d; ++q) {
    for (int p = 0; p < d; ++p) {
      // phase exp(4 pi i q p / d) = exp(i pi * (4 q p) / d), phase_den = d
      CMat el = phase_point_core(d, (2 * q) % d, (2 * p) % d, 4l * q * p, d);
      f.labels.push_back({q, p});
      f.elements.push_back(scale * el);
      f.weights.push_back(1.0);
    }
  }
  check_frame_shape(f);
  return f;
}

Frame leonhardt_frame(int d) {
  if (d < 2 || d % 2 != 0) {
    std::ostringstream os;
    os << "leonhardt_frame: dimension " << d << " unsupported; requires an even dimension";
    throw DimensionError(os.str());
  }
  Frame f;
  f.dim = d;
  f.kind = FrameKind::leonhardt;
  const int n = 2 * d;
  const double scale = 1.0 / (4.0 * d * d);
  for (int q = 0; q < n; ++q) {
    for (int p = 0; p < n; ++p) {
      // phase exp(i pi q p / d): phase_den = d, numerator q p
      CMat el = phase_point_core(d, q % d, p % d, 1l * q * p, d);
      f.labels.push_back({q, p});
      f.elements.push_back(scale * el);
      f.weights.push_back(1.0);
    }
  }
  check_frame_shape(f);
  return f;
}

Frame herm_basis_frame(int d) {
  Frame f;
  f.dim = d;
  f.kind = FrameKind::custom;
  auto basis = herm_basis(d);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    f.labels.push_back({static_cast<int>(i), 0});
    f.elements.push_back(basis[i]);
    f.weights.push_back(1.0);
  }
  return f;
}

PaperDualResult paper_dual(FrameKind kind, int d) {
  Frame f;
  switch (kind) {
    case FrameKind::wootters: f = wootters_frame(d); break;
    case FrameKind::leonhardt: f = leonhardt_frame(d); break;
    default:
      throw ValidationError("paper_dual: closed-form duals exist only for the built-in families");
  }
  return paper_dual_for(f);
}

PaperDualResult paper_dual_for(const Frame& f) {
  check_frame_shape(f);
  Frame e;
  e.dim = f.dim;
  e.labels = f.labels;
  e.weights = f.weights;
  e.kind = f.kind;
  e.convention = f.convention;
  const int d = f.dim;
  if (f.kind == FrameKind::wootters) {
    const double scale = 1.0 / d;
    for (const auto& l : f.labels) {
      const int q = l[0], p = l[1];
      e.elements.push_back(
          scale * phase_point_core(d, (2 * q) % d, (2 * p) % d, 4l * q * p, d));
    }
  } else if (f.kind == FrameKind::leonhardt) {
    const double scale = 1.0 / (2.0 * d);
    for (const auto& l : f.labels) {
      const int q = l[0], p = l[1];
      e.elements.push_back(scale *
                           phase_point_core(d, q % d, p % d, 1l * q * p, d));
    }
  } else {
    throw ValidationError("paper_dual_for: closed-form duals exist only for the built-in families");
  }

  // One global least-squares scalar c minimizing the duality residual of
  // (F, c * E) over the orthonormal Hermitian basis.
  auto basis = herm_basis(d);
  const RMat vf = frame_coord_matrix(f, basis);
  const RMat ve = frame_coord_matrix(e, basis);
  RVec w(f.size());
  for (int i = 0; i < f.size(); ++i) w(i) = f.weights[i];
  const RMat m = ve.transpose() * w.asDiagonal() * vf;  // coords of sum_a w <F_a,B_i> E_a
  const double denom = m.squaredNorm();
  if (!(denom > 0.0)) throw NotAFrameError("paper_dual_for: degenerate family");
  const double c = m.trace() / denom;  // argmin ||c M - I||_F

  PaperDualResult out;
  out.fitted_scale = c;
  for (auto& el : e.elements) el *= c;
  out.dual = std::move(e);
  out.residual = is_dual_pair(f, out.dual).residual;
  return out;
}

RMat frame_coord_matrix(const Frame& f, const std::vector<CMat>& basis) {
  RMat v(f.size(), static_cast<int>(basis.size()));
  for (int a = 0; a < f.size(); ++a) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      v(a, static_cast<int>(i)) = hs_inner(basis[i], f.elements[a]);
    }
  }
  return v;
}

Superoperator frame_operator(const Frame& f) {
  check_frame_shape(f);
  auto basis = herm_basis(f.dim);
  const RMat v = frame_coord_matrix(f, basis);
  RVec w(f.size());
  for (int i = 0; i < f.size(); ++i) w(i) = f.weights[i];
  RMat s = v.transpose() * w.asDiagonal() * v;
  s = 0.5 * (s + s.transpose());
  return Superoperator{f.dim, std::move(s)};
}

FrameBounds frame_bounds(const Frame& f) {
  check_frame_shape(f);
  const auto eig = frame_operator_eig(f);
  require_invertible(eig, "frame_bounds");
  return FrameBounds{eig.evals.minCoeff(), eig.evals.maxCoeff()};
}

Frame canonical_dual(const Frame& f) {
  check_frame_shape(f);
  const auto eig = frame_operator_eig(f);
  require_invertible(eig, "canonical_dual");
  // E coords = V S^{-1}, via the eigendecomposition of S
  const RMat sinv = eig.evecs * eig.evals.cwiseInverse().asDiagonal() *
                    eig.evecs.transpose();
  const RMat ecoords = eig.coords * sinv;
  Frame e;
  e.dim = f.dim;
  e.labels = f.labels;
  e.weights = f.weights;
  e.kind = f.kind;
  e.convention = f.convention;
  e.elements.reserve(f.size());
  for (int a = 0; a < f.size(); ++a) {
    e.elements.push_back(from_herm_coords(eig.basis, ecoords.row(a).transpose()));
  }
  return e;
}

DualityCheck is_dual_pair(const Frame& f, const Frame& e, double duality_tol) {
  check_frame_shape(f);
  check_frame_shape(e);
  require_same_labels(f, e, "is_dual_pair");
  auto basis = herm_basis(f.dim);
  const RMat vf = frame_coord_matrix(f, basis);
  const RMat ve = frame_coord_matrix(e, basis);
  RVec w(f.size());
  for (int i = 0; i < f.size(); ++i) w(i) = f.weights[i];
  // column i holds the coordinates of sum_a w_a <F(a), B_i> E(a)
  const RMat m = ve.transpose() * w.asDiagonal() * vf;
  const RMat r = m - RMat::Identity(m.rows(), m.cols());
  double worst = 0.0;
  for (int i = 0; i < r.cols(); ++i) worst = std::max(worst, r.col(i).norm());
  return DualityCheck{worst <= duality_tol, worst};
}

DualPair make_dual_pair(Frame f, Frame e, double duality_tol) {
  auto check = is_dual_pair(f, e, duality_tol);
  if (!check.ok) {
    std::ostringstream os;
    os << "make_dual_pair: frames are not dual (residual " << check.residual
       << " > " << duality_tol << ")";
    throw ValidationError(os.str());
  }
  return DualPair{std::move(f), std::move(e), check.residual};
}

RepFunction represent(const Frame& f, const CMat& hermitian_op) {
  if (hermitian_op.rows() != f.dim || hermitian_op.cols() != f.dim) {
    throw DimensionError("represent: operator dimension mismatch");
  }
  RepFunction rep;
  rep.frame_fp = f.fingerprint();
  rep.values.reserve(f.size());
  for (const auto& el : f.elements) {
    rep.values.push_back(hs_inner(el, hermitian_op));
  }
  return rep;
}

CVec represent_complex(const Frame& f, const CMat& op) {
  if (op.rows() != f.dim || op.cols() != f.dim) {
    throw DimensionError("represent_complex: operator dimension mismatch");
  }
  CVec v(f.size());
  for (int a = 0; a < f.size(); ++a) v(a) = hs_pairing(f.elements[a], op);
  return v;
}

CMat reconstruct(const Frame& e, const RepFunction& rep) {
  if (rep.size() != e.size()) {
    throw DimensionError("reconstruct: representation length does not match frame");
  }
  CMat a = CMat::Zero(e.dim, e.dim);
  for (int i = 0; i < e.size(); ++i) {
    a += e.weights[i] * rep.values[i] * e.elements[i];
  }
  return a;
}

bool is_positive_frame(const Frame& f, double psd_tol) {
  for (const auto& el : f.elements) {
    if (min_eigenvalue(el) < -psd_tol) return false;
  }
  return true;
}

Frame renormalize(const Frame& f, Convention convention) {
  check_frame_shape(f);
  if (convention == Convention::raw) {
    Frame out = f;
    out.convention = Convention::raw;
    return out;
  }
  const int d = f.dim;
  Frame out = f;
  out.convention = convention;
  if (convention == Convention::standard) {
    // all elements must share one positive trace
    std::vector<double> traces(f.size());
    for (int i = 0; i < f.size(); ++i) {
      const Complex t = f.elements[i].trace();
      if (std::abs(t.imag()) > tol::trace) {
        throw NumericalError("renormalize: element trace has an imaginary part");
      }
      traces[i] = t.real();
    }
    const double t0 = traces.front();
    for (double t : traces) {
      if (!(t > 0.0) || std::abs(t - t0) > tol::trace * std::max(1.0, std::abs(t0))) {
        throw ValidationError(
            "renormalize: standard convention needs equal positive element traces");
      }
    }
    for (auto& el : out.elements) el /= t0;
  }
  // find the uniform rescale making sum_a w_a F(a) = I
  CMat total = CMat::Zero(d, d);
  if (convention == Convention::standard) {
    for (const auto& el : out.elements) total += el;  // weights replaced below
  } else {
    for (int i = 0; i < f.size(); ++i) total += f.weights[i] * out.elements[i];
  }
  const Complex trc = total.trace();
  const double c = trc.real() / d;
  const double off = (total - c * CMat::Identity(d, d)).cwiseAbs().maxCoeff();
  if (std::abs(trc.imag()) > tol::trace ||
      off > tol::trace * std::max(1.0, std::abs(c)) || std::abs(c) < 1e-14) {
    throw ValidationError(
        "renormalize: sum of weighted elements is not proportional to the identity;"
        " convention undefined for this frame");
  }
  if (convention == Convention::standard) {
    std::fill(out.weights.begin(), out.weights.end(), 1.0 / c);
  } else {
    for (auto& el : out.elements) el /= c;
  }
  return out;
}

CovarianceReport covariance_check(const Frame& f, double cov_tol) {
  check_frame_shape(f);
  const int n = f.size();
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (side * side != n) {
    throw DimensionError("covariance_check: labels do not form a square lattice");
  }
  std::map<std::pair<int, int>, int> index;
  for (int i = 0; i < n; ++i) {
    const int q = ((f.labels[i][0] % side) + side) % side;
    const int p = ((f.labels[i][1] % side) + side) % side;
    index[{q, p}] = i;
  }
  if (static_cast<int>(index.size()) != n) {
    throw DimensionError("covariance_check: labels do not form a square lattice");
  }

  const auto gen = generators(f.dim);
  const int d = f.dim;
  CMat xa = CMat::Identity(d, d);
  double worst = 0.0;
  for (int a = 0; a < d; ++a) {
    CMat u = xa;
    for (int b = 0; b < d; ++b) {
      if (a != 0 || b != 0) {
        std::vector<CMat> image(n);
        for (int i = 0; i < n; ++i) image[i] = u * f.elements[i] * u.adjoint();

        // candidate translations are those matching the image of the first
        // lattice point; repeated elements (the even-dimension family has
        // them) can make several candidates tie, so each one is verified on
        // every element until one passes
        const int i0 = index.at({0, 0});
        std::vector<int> candidates;
        int nearest = 0;
        double nearest_dist = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
          const double dist = (image[i0] - f.elements[j]).norm();
          if (dist <= cov_tol) candidates.push_back(j);
          if (dist < nearest_dist) {
            nearest_dist = dist;
            nearest = j;
          }
        }
        if (candidates.empty()) candidates.push_back(nearest);

        double best_residual = std::numeric_limits<double>::infinity();
        bool found = false;
        for (int j : candidates) {
          const int s = ((f.labels[j][0] % side) + side) % side;
          const int t = ((f.labels[j][1] % side) + side) % side;
          double residual = 0.0;
          for (int i = 0; i < n; ++i) {
            const int q = ((f.labels[i][0] % side) + side) % side;
            const int p = ((f.labels[i][1] % side) + side) % side;
            const int dst = index.at({(q + s) % side, (p + t) % side});
            residual = std::max(residual, (image[i] - f.elements[dst]).norm());
          }
          best_residual = std::min(best_residual, residual);
          if (residual <= cov_tol) {
            found = true;
            break;
          }
        }
        if (!found) {
          return CovarianceReport{false, best_residual};
        }
        worst = std::max(worst, best_residual);
      }
      u = gen.Z * u;
    }
    xa = gen.X * xa;
  }
  return CovarianceReport{true, worst};
}

Frame random_frame(int d, int n, std::uint64_t seed, bool positive) {
  if (d < 2) throw DimensionError("random_frame: dimension must be >= 2");
  if (n < d * d) {
    std::ostringstream os;
    os << "random_frame: " << n << " elements cannot span Hermitian space of dimension "
       << d * d;
    throw DimensionError(os.str());
  }
  Rng rng(seed);
  constexpr int kMaxAttempts = 64;
  // keep the frame operator's condition number within the range the duality
  // tolerances were designed for
  constexpr double kMinRelativeEig = 1e-4;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Frame f;
    f.dim = d;
    f.kind = FrameKind::custom;
    for (int i = 0; i < n; ++i) {
      f.labels.push_back({i, 0});
      f.weights.push_back(1.0);
      if (positive) {
        CVec v(d);
        for (int j = 0; j < d; ++j) v(j) = rng.cgauss();
        CMat el = v * v.adjoint();
        f.elements.push_back(0.5 * (el + el.adjoint()));
      } else {
        f.elements.push_back(random_hermitian(d, rng));
      }
    }
    const auto eig = frame_operator_eig(f);
    const double hi = eig.evals.maxCoeff();
    const double lo = eig.evals.minCoeff();
    if (hi > 0.0 && lo > kMinRelativeEig * hi) return f;
  }
  throw NotAFrameError("random_frame: failed to draw a well-conditioned spanning family");
}

Frame frame_of_linear_map(const Superoperator& s) {
  const int d = s.dim;
  if (s.matrix.rows() != d * d || s.matrix.cols() != d * d) {
    throw DimensionError("frame_of_linear_map: matrix must be d^2 x d^2");
  }
  auto basis = herm_basis(d);
  Frame f;
  f.dim = d;
  f.kind = FrameKind::custom;
  for (int i = 0; i < d * d; ++i) {
    f.labels.push_back({i, 0});
    f.weights.push_back(1.0);
    f.elements.push_back(from_herm_coords(basis, s.matrix.row(i).transpose()));
  }
  check_frame_shape(f);
  return f;
}

}  // namespace qframe
