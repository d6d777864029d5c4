#pragma once

#include <vector>

#include "qstoch/matrix.hpp"
#include "qstoch/tolerances.hpp"

namespace qstoch {

struct HermitianDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns, unitary

  /// V diag(lambda) V^dagger
  ComplexMatrix reconstruct() const;
};

/// Eigendecomposition of a Hermitian matrix. Throws ValidationError when
/// `a` deviates from Hermitian by more than tol::kHermitian.
HermitianDecomposition eig_hermitian(const ComplexMatrix& a);

/// Ascending eigenvalues only.
std::vector<double> eigenvalues_hermitian(const ComplexMatrix& a);

/// Moore-Penrose pseudo-inverse of a real square matrix. Singular values below
/// `rel_tol * sigma_max` are treated as zero.
RealMatrix pinv(const RealMatrix& a, double rel_tol = tol::kPinvRelative);

/// a^{-1/2} for Hermitian positive definite `a`. Throws SingularityError when an
/// eigenvalue falls below tol::kPositive.
ComplexMatrix sqrt_inv_psd(const ComplexMatrix& a);

/// Descending singular values.
std::vector<double> singular_values(const RealMatrix& a);
std::vector<double> singular_values(const ComplexMatrix& a);

/// Number of singular values strictly above `abs_tol`.
std::size_t numerical_rank(const ComplexMatrix& a, double abs_tol);
std::size_t numerical_rank(const RealMatrix& a, double abs_tol);

/// Solves a x = b for square invertible `a` (column-pivoted LU). Throws
/// SingularityError when `a` is numerically singular.
RealMatrix solve(const RealMatrix& a, const RealMatrix& b);

/// Q factor of a QR decomposition with the phases of diag(R) absorbed, so
/// that a Gaussian input yields a Haar-distributed isometry (rows >= cols).
ComplexMatrix qr_haar_factor(const ComplexMatrix& a);

}  // namespace qstoch
