#include "qstoch/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace qstoch {

namespace {

using EigenC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EigenR = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenC> view(const ComplexMatrix& a) {
  return {a.data().data(), static_cast<Eigen::Index>(a.rows()),
          static_cast<Eigen::Index>(a.cols())};
}
Eigen::Map<const EigenR> view(const RealMatrix& a) {
  return {a.data().data(), static_cast<Eigen::Index>(a.rows()),
          static_cast<Eigen::Index>(a.cols())};
}

template <class M>
auto copy_out(const M& src) {
  using Scalar = typename M::Scalar;
  Matrix<Scalar> out(static_cast<std::size_t>(src.rows()), static_cast<std::size_t>(src.cols()));
  for (Eigen::Index i = 0; i < src.rows(); ++i)
    for (Eigen::Index j = 0; j < src.cols(); ++j)
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = src(i, j);
  return out;
}

void require_square(std::size_t r, std::size_t c, const char* what) {
  if (r != c) throw DimensionError(std::string(what) + " requires a square matrix");
}

}  // namespace

cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || !a.is_square()) {
    throw DimensionError("hs_inner needs square operands of equal shape, got " + a.shape_string() +
                         " and " + b.shape_string());
  }
  return kernels::cdotc(a.data(), b.data());
}

cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw DimensionError("trace_product shape mismatch: " + a.shape_string() + " and " +
                         b.shape_string());
  }
  // tr(ab) = sum_ij a_ij b_ji
  const ComplexMatrix bt = b.transpose();
  return kernels::cdotu(a.data(), bt.data());
}

double hermiticity_defect(const ComplexMatrix& a) {
  require_square(a.rows(), a.cols(), "hermiticity_defect");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
  return m;
}

RealMatrix real_part(const ComplexMatrix& a) {
  RealMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) r.data()[i] = a.data()[i].real();
  return r;
}

ComplexMatrix to_complex(const RealMatrix& a) {
  ComplexMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i];
  return c;
}

std::vector<double> column_sums(const RealMatrix& m) {
  std::vector<double> s(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s[j] += m(i, j);
  return s;
}

ComplexMatrix HermitianDecomposition::reconstruct() const {
  ComplexMatrix scaled = eigenvectors;
  for (std::size_t i = 0; i < scaled.rows(); ++i)
    for (std::size_t j = 0; j < scaled.cols(); ++j) scaled(i, j) *= eigenvalues[j];
  return scaled * eigenvectors.adjoint();
}

HermitianDecomposition eig_hermitian(const ComplexMatrix& a) {
  require_square(a.rows(), a.cols(), "eig_hermitian");
  if (hermiticity_defect(a) > tol::kHermitian) {
    throw ValidationError("eig_hermitian: input is not Hermitian (defect " +
                          std::to_string(hermiticity_defect(a)) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(view(a), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw Error("eig_hermitian: solver did not converge");
  HermitianDecomposition d;
  d.eigenvalues.assign(solver.eigenvalues().data(),
                       solver.eigenvalues().data() + solver.eigenvalues().size());
  d.eigenvectors = copy_out(solver.eigenvectors());
  return d;
}

std::vector<double> eigenvalues_hermitian(const ComplexMatrix& a) {
  require_square(a.rows(), a.cols(), "eigenvalues_hermitian");
  if (hermiticity_defect(a) > tol::kHermitian) {
    throw ValidationError("eigenvalues_hermitian: input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(view(a), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("eigenvalues_hermitian: solver did not converge");
  return {solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size()};
}

RealMatrix pinv(const RealMatrix& a, double rel_tol) {
  require_square(a.rows(), a.cols(), "pinv");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(view(a), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = rel_tol * (s.size() ? s(0) : 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff && s(i) > 0.0) inv(i) = 1.0 / s(i);
  const Eigen::MatrixXd p = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  return copy_out(p);
}

ComplexMatrix sqrt_inv_psd(const ComplexMatrix& a) {
  const HermitianDecomposition d = eig_hermitian(a);
  if (d.eigenvalues.front() < tol::kPositive) {
    throw SingularityError("sqrt_inv_psd: smallest eigenvalue " +
                           std::to_string(d.eigenvalues.front()) + " is not positive");
  }
  HermitianDecomposition r = d;
  for (double& l : r.eigenvalues) l = 1.0 / std::sqrt(l);
  ComplexMatrix out = r.reconstruct();
  // Symmetrize away the rounding asymmetry of V D V^dagger.
  return (out + out.adjoint()) * cplx(0.5);
}

std::vector<double> singular_values(const RealMatrix& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(view(a));
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(view(a));
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::size_t numerical_rank(const ComplexMatrix& a, double abs_tol) {
  const auto s = singular_values(a);
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](double v) { return v > abs_tol; }));
}

std::size_t numerical_rank(const RealMatrix& a, double abs_tol) {
  const auto s = singular_values(a);
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](double v) { return v > abs_tol; }));
}

RealMatrix solve(const RealMatrix& a, const RealMatrix& b) {
  require_square(a.rows(), a.cols(), "solve");
  if (b.rows() != a.rows()) throw DimensionError("solve: right-hand side has wrong row count");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(view(a));
  if (!lu.isInvertible()) throw SingularityError("solve: matrix is singular");
  const Eigen::MatrixXd x = lu.solve(Eigen::MatrixXd(view(b)));
  return copy_out(x);
}

ComplexMatrix qr_haar_factor(const ComplexMatrix& a) {
  if (a.rows() < a.cols()) throw DimensionError("qr_haar_factor needs rows >= cols");
  const Eigen::MatrixXcd m = view(a);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  const Eigen::Index r = m.rows(), c = m.cols();
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(r, c);
  const Eigen::MatrixXcd rr = qr.matrixQR().topLeftCorner(c, c).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < c; ++j) {
    const cplx d = rr(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return copy_out(q);
}

}  // namespace qstoch
