#include "qframe/operators.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace qframe {

namespace {

void require_square(const CMat& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    std::ostringstream os;
    os << who << ": matrix must be square, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

HermitianOp::HermitianOp(CMat mat, double herm_tol) : m(std::move(mat)) {
  require_square(m, "HermitianOp");
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > herm_tol) {
    std::ostringstream os;
    os << "HermitianOp: |M - M^dag| = " << dev << " exceeds " << herm_tol;
    throw ValidationError(os.str());
  }
}

DensityOp::DensityOp(HermitianOp h, double psd_tol, double trace_tol)
    : op(std::move(h)) {
  std::ostringstream os;
  bool bad = false;
  const double lo = min_eigenvalue(op.m);
  if (lo < -psd_tol) {
    os << "not positive: min eigenvalue " << lo;
    bad = true;
  }
  const double tr_dev = std::abs(op.m.trace().real() - 1.0);
  if (tr_dev > trace_tol || std::abs(op.m.trace().imag()) > trace_tol) {
    if (bad) os << "; ";
    os << "not normalized: trace deviates from 1 by " << tr_dev;
    bad = true;
  }
  if (bad) throw ValidationError("DensityOp: " + os.str());
}

Povm::Povm(std::vector<HermitianOp> e, double psd_tol, double sum_tol)
    : effects(std::move(e)) {
  if (effects.empty()) throw DimensionError("Povm: needs at least one effect");
  const int d = effects.front().dim();
  for (const auto& eff : effects) {
    if (eff.dim() != d) throw DimensionError("Povm: effects have mixed dimensions");
  }
  std::ostringstream os;
  bool bad = false;
  for (std::size_t k = 0; k < effects.size(); ++k) {
    const double lo = min_eigenvalue(effects[k].m);
    if (lo < -psd_tol) {
      if (bad) os << "; ";
      os << "effect " << k << " not positive (min eigenvalue " << lo << ")";
      bad = true;
    }
  }
  CMat sum = CMat::Zero(d, d);
  for (const auto& eff : effects) sum += eff.m;
  const double dev = (sum - CMat::Identity(d, d)).cwiseAbs().maxCoeff();
  if (dev > sum_tol) {
    if (bad) os << "; ";
    os << "incomplete: effects deviate from resolving the identity by " << dev;
    bad = true;
  }
  if (bad) throw ValidationError("Povm: " + os.str());
}

Generators generators(int d) {
  if (d < 2) throw DimensionError("generators: dimension must be >= 2");
  CMat x = CMat::Zero(d, d), z = CMat::Zero(d, d), p = CMat::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    x((k + 1) % d, k) = 1.0;
    const double ang = 2.0 * M_PI * k / d;
    z(k, k) = Complex(std::cos(ang), std::sin(ang));
    p((d - k) % d, k) = 1.0;
  }
  return {std::move(x), std::move(z), std::move(p)};
}

double hs_inner(const CMat& a, const CMat& b) {
  require_square(a, "hs_inner");
  require_square(b, "hs_inner");
  if (a.rows() != b.rows()) {
    std::ostringstream os;
    os << "hs_inner: dimension mismatch " << a.rows() << " vs " << b.rows();
    throw DimensionError(os.str());
  }
  const Complex t = hs_pairing(a, b);
  if (std::abs(t.imag()) > tol::hermiticity) {
    std::ostringstream os;
    os << "hs_inner: tr(AB) has imaginary part " << t.imag()
       << "; inputs are not Hermitian enough";
    throw NumericalError(os.str());
  }
  return t.real();
}

Complex hs_pairing(const CMat& a, const CMat& b) {
  // tr(AB) = sum_ij A_ij B_ji, summed without forming the product.
  return a.cwiseProduct(b.transpose()).sum();
}

DensityOp validate_state(const HermitianOp& rho, double psd_tol,
                         double trace_tol) {
  return DensityOp(rho, psd_tol, trace_tol);
}

Povm validate_povm(std::vector<HermitianOp> effects, double psd_tol,
                   double sum_tol) {
  return Povm(std::move(effects), psd_tol, sum_tol);
}

double born_rule(const DensityOp& rho, const Povm& m, int k) {
  if (k < 0 || k >= m.outcomes()) {
    std::ostringstream os;
    os << "born_rule: outcome " << k << " out of range [0," << m.outcomes() << ")";
    throw DimensionError(os.str());
  }
  if (rho.dim() != m.dim()) throw DimensionError("born_rule: dimension mismatch");
  const double p = hs_inner(m.effects[k].m, rho.op.m);
  if (p < 0.0 && p >= -1e-12) return 0.0;
  return p;
}

std::vector<CMat> herm_basis(int d) {
  if (d < 2) throw DimensionError("herm_basis: dimension must be >= 2");
  std::vector<CMat> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  basis.push_back(CMat::Identity(d, d) / std::sqrt(static_cast<double>(d)));
  for (int l = 1; l < d; ++l) {
    CMat b = CMat::Zero(d, d);
    const double s = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) b(j, j) = s;
    b(l, l) = -s * l;
    basis.push_back(std::move(b));
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      CMat sym = CMat::Zero(d, d);
      sym(j, k) = r;
      sym(k, j) = r;
      basis.push_back(std::move(sym));
      CMat asym = CMat::Zero(d, d);
      asym(j, k) = Complex(0.0, -r);
      asym(k, j) = Complex(0.0, r);
      basis.push_back(std::move(asym));
    }
  }
  return basis;
}

RVec herm_coords(const std::vector<CMat>& basis, const CMat& a) {
  RVec c(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) c(i) = hs_inner(basis[i], a);
  return c;
}

CMat from_herm_coords(const std::vector<CMat>& basis, const RVec& coords) {
  if (static_cast<std::size_t>(coords.size()) != basis.size()) {
    throw DimensionError("from_herm_coords: coordinate count mismatch");
  }
  CMat a = CMat::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t i = 0; i < basis.size(); ++i) a += coords(i) * basis[i];
  return a;
}

double min_eigenvalue(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

CMat random_hermitian(int d, Rng& rng) {
  CMat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.cgauss();
  return 0.5 * (g + g.adjoint());
}

CVec haar_vector(int d, Rng& rng) {
  CVec v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.cgauss();
  return v / v.norm();
}

DensityOp random_state(int d, std::uint64_t seed) {
  if (d < 2) throw DimensionError("random_state: dimension must be >= 2");
  Rng rng(seed);
  CMat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.cgauss();
  CMat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOp(HermitianOp(std::move(rho)));
}

Povm random_povm(int d, int m, std::uint64_t seed) {
  if (d < 2) throw DimensionError("random_povm: dimension must be >= 2");
  if (m < 2) throw DimensionError("random_povm: needs at least two outcomes");
  Rng rng(seed);
  std::vector<CMat> raw;
  raw.reserve(m);
  CMat sum = CMat::Zero(d, d);
  for (int k = 0; k < m; ++k) {
    CMat g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = rng.cgauss();
    raw.push_back(g * g.adjoint());
    sum += raw.back();
  }
  // symmetric normalization S^{-1/2} M S^{-1/2} keeps positivity and
  // restores completeness
  Eigen::SelfAdjointEigenSolver<CMat> es(sum);
  const CMat inv_sqrt = es.eigenvectors() *
                        es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                        es.eigenvectors().adjoint();
  std::vector<HermitianOp> effects;
  effects.reserve(m);
  for (auto& r : raw) {
    CMat e = inv_sqrt * r * inv_sqrt;
    effects.emplace_back(0.5 * (e + e.adjoint()));
  }
  return Povm(std::move(effects));
}

}  // namespace qframe
