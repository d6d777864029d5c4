#pragma once

// Quasi-stochastic representation of quantum theory induced by (quasi-)POVMs.
//
// Q sends a channel Phi: M_n -> M_m to the matrix
//     Q(Phi)(i|j) = tr(Phi(E_j / tr E_j) F_i)
// for a family {E_j} on the input and {F_i} on the output. Composition in the
// image category is the star product s * r = s T^{-1} r, where T is the
// transition matrix of the family on the intermediate system; F_T (right)
// and F'_T (left) move images into ordinary matrix-product composition.
//
// Every QRep carries the identifiers of its input/output families so that
// compositions over mismatched intermediate families are rejected.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qstoch/matrix.hpp"
#include "qstoch/povm.hpp"
#include "qstoch/quantum.hpp"

namespace qstoch {

/// T(i|j) = tr((E_j / tr E_j) E_i) for a quasi-POVM, with its (pseudo-)inverse
/// and structural diagnoses cached at construction.
class TransitionMatrix {
 public:
  /// Throws ValidationError if some |tr E_j| <= tol::kZeroTrace.
  explicit TransitionMatrix(const QuasiPovm& povm);

  std::size_t size() const noexcept { return matrix_.rows(); }
  const RealMatrix& matrix() const noexcept { return matrix_; }
  /// True inverse for minimal families, Moore-Penrose pseudo-inverse otherwise.
  const RealMatrix& inverse() const noexcept { return inverse_; }
  const std::string& source_povm_id() const noexcept { return source_id_; }

  bool invertible() const noexcept { return invertible_; }
  bool stochastic() const noexcept { return stochastic_; }
  bool doubly_stochastic() const noexcept { return doubly_stochastic_; }
  bool symmetric() const noexcept { return symmetric_; }
  /// (alpha, beta) when T = alpha I + beta J with alpha + size * beta = 1.
  const std::optional<SicConstants>& sic_form() const noexcept { return sic_form_; }

 private:
  RealMatrix matrix_;
  RealMatrix inverse_;
  std::string source_id_;
  bool invertible_ = false;
  bool stochastic_ = false;
  bool doubly_stochastic_ = false;
  bool symmetric_ = false;
  std::optional<SicConstants> sic_form_;
};

inline TransitionMatrix transition_matrix(const QuasiPovm& povm) { return TransitionMatrix(povm); }

/// Real vector whose entries sum to one (within tol::kColumnSum).
class QuasiProbVector {
 public:
  explicit QuasiProbVector(std::vector<double> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<double>& entries() const noexcept { return entries_; }
  double operator[](std::size_t i) const { return entries_.at(i); }
  RealMatrix as_column() const { return RealMatrix::column(entries_); }

 private:
  std::vector<double> entries_;
};

enum class RepKind { kState, kChannel, kMeasurement };

/// Which category the matrix lives in: QStoch_T (star composition), or QStoch
/// after F_T (right multiplication by T^{-1}) / F'_T (left multiplication).
enum class Frame { kStar, kRight, kLeft };

enum class Side { kRight, kLeft };

std::string_view to_string(RepKind k) noexcept;
std::string_view to_string(Frame f) noexcept;

class QRep {
 public:
  /// Validates column sums (quasi-stochastic) and cols == 1 for states.
  QRep(RealMatrix matrix, std::string in_povm_id, std::string out_povm_id, RepKind kind,
       Frame frame = Frame::kStar);

  std::size_t rows() const noexcept { return matrix_.rows(); }
  std::size_t cols() const noexcept { return matrix_.cols(); }
  const RealMatrix& matrix() const noexcept { return matrix_; }
  const std::string& in_povm_id() const noexcept { return in_id_; }
  const std::string& out_povm_id() const noexcept { return out_id_; }
  RepKind kind() const noexcept { return kind_; }
  Frame frame() const noexcept { return frame_; }

 private:
  RealMatrix matrix_;
  std::string in_id_;
  std::string out_id_;
  RepKind kind_;
  Frame frame_;
};

/// p(i) = tr(rho E_i)
QuasiProbVector represent_state(const QuasiPovm& povm, const State& rho);

/// The same vector as a morphism 1 -> n (input family is the unit POVM of M_1).
QRep represent_state_morphism(const QuasiPovm& povm, const State& rho);

enum class Reconstruction { kRequireMinimal, kGeneralizedInverse };

/// alpha = T^{-1} p: coefficients of rho in the normalized effects.
std::vector<double> expansion_coefficients(const TransitionMatrix& t, const QuasiProbVector& p);

/// rho = sum_i (T^{-1} p)_i E_i / tr E_i. Nonminimal families throw AmbiguityError
/// unless `mode` asks for the pseudo-inverse (kernel of T) reconstruction.
State reconstruct_state(const QuasiPovm& povm, const QuasiProbVector& p,
                        Reconstruction mode = Reconstruction::kRequireMinimal);

/// Q(Phi)(i|j) = tr(Phi(E_j / tr E_j) F_i). A 1-dimensional input family yields a state.
QRep represent_channel(const QuasiPovm& in_povm, const QuasiPovm& out_povm, const Channel& phi);

/// Q(A)(k|i) = tr(A_k E_i / tr E_i); the output family is classical_povm(K).
QRep represent_measurement(const QuasiPovm& povm, const Measurement& meas);

/// s * r = s T^{-1} r. Requires r.out == s.in == t.source (CompositionError otherwise).
QRep star_compose(const QRep& s, const QRep& r, const TransitionMatrix& t);

/// Right: r T_in^{-1} (t must be r's input family). Left: T_out^{-1} r (t must be
/// r's output family).
QRep to_qstoch(const QRep& r, const TransitionMatrix& t, Side side);

/// Ordinary matrix product s r of two images in the same (non-star) frame.
QRep qstoch_compose(const QRep& s, const QRep& r);

struct CoherenceMatrix {
  RealMatrix matrix;  // S(j | i1*N2 + i2)
  double condition = 0.0;
};

/// S(j | i1 i2) = tr((E_i1 / tr E_i1) (x) (E_i2 / tr E_i2) E_j^{12}).
/// All three families must be minimal and dims must multiply.
CoherenceMatrix tensor_coherence(const QuasiPovm& povm1, const QuasiPovm& povm2,
                                 const QuasiPovm& povm12);

/// A (x)' B = T_{m1 m2} (T_{m1}^{-1} (x) T_{m2}^{-1}) (A (x) B), the tensor product of QStoch_T.
RealMatrix tensor_prime(const RealMatrix& a, const RealMatrix& b, const TransitionMatrix& t_a_out,
                        const TransitionMatrix& t_b_out, const TransitionMatrix& t_ab_out);

struct NaturalIso {
  RealMatrix eta;      // S T_a^{-1}
  RealMatrix inverse;  // T_a S^{-1}
  RealMatrix change_of_basis;  // S(i|j) = tr((E^a_j / tr E^a_j) E^b_i)
};

/// Component of the natural isomorphism F_a Q_a => F_b Q_b at one dimension.
NaturalIso natural_iso(const QuasiPovm& povm_a, const QuasiPovm& povm_b);

/// (alpha, beta) iff T = alpha I + beta J within tol::kSicForm and alpha + size*beta = 1.
std::optional<SicConstants> check_dagger_form(const TransitionMatrix& t);
std::optional<SicConstants> check_dagger_form(const RealMatrix& t);

/// Sum of |x| over strictly negative entries.
double negativity(std::span<const double> values);
inline double negativity(const RealMatrix& m) { return negativity(m.data()); }

using StateMap = std::function<std::vector<double>(const State&)>;

/// Recovers the quasi-POVM {E_i} with map(rho)_i = tr(rho E_i) by probing an
/// informationally complete set of d^2 pure states. Throws ExtractionError when
/// spot checks show the map is not affine, or the recovered family does not
/// reproduce the map on fresh random states.
QuasiPovm extract_quasi_povm(std::size_t dim, const StateMap& state_map, std::size_t out_len,
                             std::uint64_t seed = 0);

/// The d^2 probe states used by extract_quasi_povm: |k><k|, then for j < k the
/// projectors onto (|j> + |k>)/sqrt 2 and (|j> + i|k>)/sqrt 2.
std::vector<State> extraction_probes(std::size_t dim);

}  // namespace qstoch
