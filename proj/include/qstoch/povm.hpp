#pragma once

// Quasi-POVMs and the catalog of families that induce representations.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qstoch/matrix.hpp"

namespace qstoch {

/// Constants of tr(E_i E_j) = alpha * delta_ij + beta.
struct SicConstants {
  double alpha = 0.0;
  double beta = 0.0;
};

struct PovmFlags {
  bool positive = false;
  bool informationally_complete = false;
  bool minimal = false;
  bool equal_trace = false;
  bool generalized_sic = false;
  std::optional<SicConstants> sic;  // set iff generalized_sic
};

/// Ordered family of Hermitian matrices summing to the identity. Flags, traces
/// and the Gram matrix are computed once at construction.
class QuasiPovm {
 public:
  /// Throws ValidationError unless every effect is Hermitian and they sum to I.
  QuasiPovm(std::size_t dim, std::vector<ComplexMatrix> effects);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return effects_.size(); }
  const std::vector<ComplexMatrix>& effects() const noexcept { return effects_; }
  const ComplexMatrix& effect(std::size_t i) const { return effects_.at(i); }
  const std::vector<double>& traces() const noexcept { return traces_; }
  const PovmFlags& flags() const noexcept { return flags_; }
  /// G_ij = tr(E_i E_j)
  const RealMatrix& gram() const noexcept { return gram_; }
  double gram_min_singular_value() const noexcept { return gram_min_sv_; }

  /// Content hash of (dim, effects); equal effect lists give equal ids.
  const std::string& id() const noexcept { return id_; }

  /// E_i / tr(E_i). Throws ValidationError when |tr E_i| <= tol::kZeroTrace.
  ComplexMatrix normalized_effect(std::size_t i) const;

 private:
  std::size_t dim_;
  std::vector<ComplexMatrix> effects_;
  std::vector<double> traces_;
  RealMatrix gram_;
  double gram_min_sv_ = 0.0;
  PovmFlags flags_;
  std::string id_;
};

/// Qubit SIC with Bloch vectors at the vertices of a regular tetrahedron.
QuasiPovm tetrahedron_povm();

/// Weyl-Heisenberg orbit (1/d)|psi_jk><psi_jk|, psi_jk = X^j Z^k psi, ordered by j*d + k.
/// Throws ConstructionError if the orbit is not a SIC (reports the worst overlap deviation).
QuasiPovm wh_sic(std::size_t dim, std::span<const cplx> fiducial);

/// Exact fiducials shipped for d = 2 (tetrahedron vertex) and d = 3 ((0, 1, -1)/sqrt 2).
std::vector<cplx> shipped_fiducial(std::size_t dim);

/// d^2 Haar-random rank-one projectors, symmetrized by S^{-1/2} (.) S^{-1/2}; resampled
/// until linearly independent. Throws GenerationError when the retry budget runs out.
QuasiPovm random_minimal_ic(std::size_t dim, std::uint64_t seed);

/// Effects w_i * I. Throws ValidationError if the weights do not sum to 1.
QuasiPovm trivial_quasi_povm(std::size_t dim, std::span<const double> weights);

/// Minimal IC quasi-POVM built on the generalized Gell-Mann basis {B_k}:
/// E_k = I/d^2 + B_k/2 for the d^2 - 1 traceless members, and
/// E_0 = I/d^2 - (1/2) sum_k B_k so the family sums to I. Not positive.
QuasiPovm hermitian_basis_quasi_povm(std::size_t dim);

/// Diagonal projectors |k><k| of M_K: the standard basis of C^K seen as a POVM.
QuasiPovm classical_povm(std::size_t outcomes);

/// The unique minimal IC-POVM {1} of M_1.
inline QuasiPovm unit_povm() { return classical_povm(1); }

/// {E_i (x) F_j} ordered i * |F| + j.
QuasiPovm product_povm(const QuasiPovm& a, const QuasiPovm& b);

/// Generalized Gell-Mann matrices: symmetric, antisymmetric, then diagonal; tr(B_j B_k) = 2 delta_jk.
std::vector<ComplexMatrix> gell_mann_basis(std::size_t dim);

/// alpha, beta from mean diagonal / mean off-diagonal of a square matrix when it
/// equals alpha I + beta J within `residual_tol`.
std::optional<SicConstants> fit_identity_plus_ones(const RealMatrix& m, double residual_tol);

}  // namespace qstoch
