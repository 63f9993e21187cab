#include "qframe/nogo.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>

namespace qframe {

namespace {

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

ChoiMatrix::ChoiMatrix(int d, CMat m, double herm_tol) : dim(d), matrix(std::move(m)) {
  if (dim < 2 || matrix.rows() != dim * dim || matrix.cols() != dim * dim) {
    throw DimensionError("ChoiMatrix: matrix must be d^2 x d^2 with d >= 2");
  }
  const double dev = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (dev > herm_tol) {
    std::ostringstream os;
    os << "ChoiMatrix: |J - J^dag| = " << dev << " exceeds " << herm_tol;
    throw ValidationError(os.str());
  }
}

ChoiMatrix choi_of_pair(const Frame& f, const Frame& e) {
  check_frame_shape(f);
  check_frame_shape(e);
  if (f.dim != e.dim || f.labels != e.labels) {
    throw DimensionError("choi_of_pair: frames must share dimension and labels");
  }
  const int d = f.dim;
  CMat j = CMat::Zero(d * d, d * d);
  for (int a = 0; a < f.size(); ++a) {
    j += f.weights[a] * kron(e.elements[a], f.elements[a].transpose());
  }
  j = 0.5 * (j + j.adjoint());
  return ChoiMatrix(d, std::move(j));
}

ChoiMatrix partial_transpose(const ChoiMatrix& j) {
  const int d = j.dim;
  CMat out(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c)
      for (int b = 0; b < d; ++b)
        for (int e = 0; e < d; ++e)
          out(a * d + c, b * d + e) = j.matrix(a * d + e, b * d + c);
  return ChoiMatrix(d, std::move(out));
}

double min_eig_pt(const ChoiMatrix& j) {
  return min_eigenvalue(partial_transpose(j).matrix);
}

CMat identity_choi(int d) {
  CMat j = CMat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) j(i * d + i, k * d + k) = 1.0;
  return j;
}

std::string verdict_string(const WitnessReport& r) {
  return r.no_positive_dual_witnessed ? "no_positive_dual_witnessed"
                                      : "inconclusive";
}

WitnessReport positive_dual_witness(const Frame& f, double psd_tol) {
  if (!is_positive_frame(f, psd_tol)) {
    throw ValidationError(
        "positive_dual_witness: frame has elements with negative eigenvalues;"
        " the witness applies to positive frames only");
  }
  const Frame dual = canonical_dual(f);
  WitnessReport report;
  report.dim = f.dim;
  report.min_dual_eig = std::numeric_limits<double>::infinity();
  report.min_dual_eig_scaled = std::numeric_limits<double>::infinity();
  for (const auto& el : dual.elements) {
    const double lo = min_eigenvalue(el);
    report.min_dual_eig = std::min(report.min_dual_eig, lo);
    const double norm = el.norm();
    if (norm > 0.0) {
      report.min_dual_eig_scaled = std::min(report.min_dual_eig_scaled, lo / norm);
    }
  }
  report.choi_pt_min_eig = min_eig_pt(choi_of_pair(f, dual));
  report.no_positive_dual_witnessed = report.min_dual_eig_scaled < -psd_tol;
  return report;
}

std::vector<Frame> perturbed_duals(const Frame& f, const Frame& canonical,
                                   int count, std::uint64_t seed) {
  check_frame_shape(f);
  check_frame_shape(canonical);
  const int n = f.size();
  const int dsq = f.dim * f.dim;
  const auto basis = herm_basis(f.dim);
  const RMat vf = frame_coord_matrix(f, basis);
  RVec w(n);
  for (int i = 0; i < n; ++i) w(i) = f.weights[i];
  RMat s = vf.transpose() * w.asDiagonal() * vf;
  s = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<RMat> es(s);
  if (es.eigenvalues().minCoeff() <= tol::spanning * es.eigenvalues().maxCoeff()) {
    throw NotAFrameError("perturbed_duals: frame operator is singular");
  }
  const RMat sinv = es.eigenvectors() *
                    es.eigenvalues().cwiseInverse().asDiagonal() *
                    es.eigenvectors().transpose();

  double typical = 0.0;
  for (const auto& el : canonical.elements) typical += el.norm();
  typical /= n;

  Rng rng(seed);
  std::vector<Frame> out;
  out.reserve(count);
  for (int t = 0; t < count; ++t) {
    // random coordinate block, projected onto the null space of V^T W so the
    // perturbed family still satisfies the reconstruction identity
    RMat delta(n, dsq);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < dsq; ++j) delta(i, j) = rng.gauss();
    const double raw_norm = delta.norm();
    delta -= vf * (sinv * (vf.transpose() * (w.asDiagonal() * delta)));

    double dnorm = 0.0;
    for (int i = 0; i < n; ++i) dnorm += delta.row(i).norm();
    dnorm /= n;
    // when n = d^2 the dual is unique and the projection annihilates delta;
    // only numerical dust survives and must not be rescaled back up
    const bool degenerate = delta.norm() <= 1e-10 * raw_norm;
    const double scale =
        degenerate ? 0.0 : (0.1 + 1.4 * rng.uniform()) * typical / dnorm;

    Frame e = canonical;
    for (int i = 0; i < n; ++i) {
      e.elements[i] += scale * from_herm_coords(basis, delta.row(i).transpose());
    }
    const auto check = is_dual_pair(f, e);
    if (!check.ok) {
      std::ostringstream os;
      os << "perturbed_duals: projected perturbation broke duality (residual "
         << check.residual << ")";
      throw NumericalError(os.str());
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace qframe
