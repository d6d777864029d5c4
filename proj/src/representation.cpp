#include "qstoch/representation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qstoch/linalg.hpp"
#include "qstoch/tolerances.hpp"

namespace qstoch {

namespace {

constexpr int kAffineSpotChecks = 3;
constexpr int kReproductionChecks = 5;

void require_ids(const std::string& expected, const std::string& got, const char* what) {
  if (expected != got) {
    throw CompositionError(std::string(what) + ": POVM family mismatch (" + expected + " vs " +
                           got + ")");
  }
}

RepKind composite_kind(const QRep& s, const QRep& r) {
  if (r.kind() == RepKind::kState) return RepKind::kState;
  if (s.kind() == RepKind::kMeasurement) return RepKind::kMeasurement;
  return RepKind::kChannel;
}

double max_row_sum_defect(const RealMatrix& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

double max_column_sum_defect(const RealMatrix& m) {
  double worst = 0.0;
  for (double s : column_sums(m)) worst = std::max(worst, std::abs(s - 1.0));
  return worst;
}

}  // namespace

// TransitionMatrix -------------------------------------------------------------

TransitionMatrix::TransitionMatrix(const QuasiPovm& povm) : source_id_(povm.id()) {
  const std::size_t n = povm.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(povm.traces()[j]) <= tol::kZeroTrace) {
      throw ValidationError("transition matrix undefined: effect " + std::to_string(j) +
                            " has zero trace");
    }
  }
  matrix_ = RealMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) matrix_(i, j) = povm.gram()(i, j) / povm.traces()[j];

  inverse_ = pinv(matrix_);
  const auto sv = singular_values(matrix_);
  invertible_ = sv.back() > tol::kPinvRelative * sv.front();

  const bool nonnegative =
      std::all_of(matrix_.data().begin(), matrix_.data().end(), [](double v) { return v >= 0.0; });
  stochastic_ = nonnegative && max_column_sum_defect(matrix_) <= tol::kColumnSum;
  doubly_stochastic_ = stochastic_ && max_row_sum_defect(matrix_) <= tol::kColumnSum;
  symmetric_ = max_abs_diff(matrix_, matrix_.transpose()) <= tol::kColumnSum;
  sic_form_ = check_dagger_form(matrix_);
}

// QuasiProbVector --------------------------------------------------------------

QuasiProbVector::QuasiProbVector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw DimensionError("empty quasi-probability vector");
  const double total = std::accumulate(entries_.begin(), entries_.end(), 0.0);
  if (!std::isfinite(total) || std::abs(total - 1.0) > tol::kColumnSum) {
    throw ValidationError("quasi-probability vector sums to " + std::to_string(total));
  }
}

// QRep -------------------------------------------------------------------------

std::string_view to_string(RepKind k) noexcept {
  switch (k) {
    case RepKind::kState:
      return "state";
    case RepKind::kChannel:
      return "channel";
    case RepKind::kMeasurement:
      return "measurement";
  }
  return "?";
}

std::string_view to_string(Frame f) noexcept {
  switch (f) {
    case Frame::kStar:
      return "star";
    case Frame::kRight:
      return "right";
    case Frame::kLeft:
      return "left";
  }
  return "?";
}

QRep::QRep(RealMatrix matrix, std::string in_povm_id, std::string out_povm_id, RepKind kind,
           Frame frame)
    : matrix_(std::move(matrix)),
      in_id_(std::move(in_povm_id)),
      out_id_(std::move(out_povm_id)),
      kind_(kind),
      frame_(frame) {
  if (matrix_.empty()) throw DimensionError("empty representation matrix");
  if (kind_ == RepKind::kState && matrix_.cols() != 1) {
    throw DimensionError("state representation must have exactly one column");
  }
  const double defect = max_column_sum_defect(matrix_);
  if (defect > tol::kColumnSum) {
    throw ValidationError("representation is not quasi-stochastic (column sum defect " +
                          std::to_string(defect) + ")");
  }
}

// Q on states, channels, measurements -------------------------------------------

QuasiProbVector represent_state(const QuasiPovm& povm, const State& rho) {
  if (rho.dim() != povm.dim()) {
    throw DimensionError("represent_state: state dimension " + std::to_string(rho.dim()) +
                         " != POVM dimension " + std::to_string(povm.dim()));
  }
  std::vector<double> p;
  p.reserve(povm.size());
  for (const auto& e : povm.effects()) p.push_back(trace_product(rho.matrix(), e).real());
  return QuasiProbVector(std::move(p));
}

QRep represent_state_morphism(const QuasiPovm& povm, const State& rho) {
  return QRep(represent_state(povm, rho).as_column(), unit_povm().id(), povm.id(), RepKind::kState);
}

std::vector<double> expansion_coefficients(const TransitionMatrix& t, const QuasiProbVector& p) {
  if (p.size() != t.size()) throw DimensionError("expansion_coefficients: length mismatch");
  const RealMatrix alpha = t.inverse() * p.as_column();
  return {alpha.data().begin(), alpha.data().end()};
}

State reconstruct_state(const QuasiPovm& povm, const QuasiProbVector& p, Reconstruction mode) {
  if (p.size() != povm.size()) {
    throw DimensionError("reconstruct_state: vector length " + std::to_string(p.size()) +
                         " != effect count " + std::to_string(povm.size()));
  }
  if (!povm.flags().minimal && mode == Reconstruction::kRequireMinimal) {
    throw AmbiguityError(
        "reconstruct_state: family is not minimal, the expansion is not unique "
        "(request the generalized-inverse reconstruction explicitly)");
  }
  const TransitionMatrix t(povm);
  const auto alpha = expansion_coefficients(t, p);
  ComplexMatrix rho(povm.dim(), povm.dim());
  for (std::size_t i = 0; i < povm.size(); ++i) rho += povm.normalized_effect(i) * cplx(alpha[i]);
  return State(std::move(rho));
}

QRep represent_channel(const QuasiPovm& in_povm, const QuasiPovm& out_povm, const Channel& phi) {
  if (phi.dim_in() != in_povm.dim() || phi.dim_out() != out_povm.dim()) {
    std::ostringstream os;
    os << "represent_channel: channel " << phi.dim_in() << "->" << phi.dim_out()
       << " does not match POVM dimensions " << in_povm.dim() << "->" << out_povm.dim();
    throw DimensionError(os.str());
  }
  RealMatrix q(out_povm.size(), in_povm.size());
  for (std::size_t j = 0; j < in_povm.size(); ++j) {
    const ComplexMatrix image = phi.apply(in_povm.normalized_effect(j));
    for (std::size_t i = 0; i < out_povm.size(); ++i)
      q(i, j) = trace_product(image, out_povm.effect(i)).real();
  }
  const RepKind kind = in_povm.dim() == 1 ? RepKind::kState : RepKind::kChannel;
  return QRep(std::move(q), in_povm.id(), out_povm.id(), kind);
}

QRep represent_measurement(const QuasiPovm& povm, const Measurement& meas) {
  if (meas.dim() != povm.dim()) {
    throw DimensionError("represent_measurement: measurement dimension " +
                         std::to_string(meas.dim()) + " != POVM dimension " +
                         std::to_string(povm.dim()));
  }
  RealMatrix q(meas.outcomes(), povm.size());
  for (std::size_t i = 0; i < povm.size(); ++i) {
    const ComplexMatrix e = povm.normalized_effect(i);
    for (std::size_t k = 0; k < meas.outcomes(); ++k)
      q(k, i) = trace_product(meas.effects()[k], e).real();
  }
  return QRep(std::move(q), povm.id(), classical_povm(meas.outcomes()).id(), RepKind::kMeasurement);
}

// Composition -------------------------------------------------------------------

QRep star_compose(const QRep& s, const QRep& r, const TransitionMatrix& t) {
  if (s.frame() != Frame::kStar || r.frame() != Frame::kStar) {
    throw CompositionError("star_compose: operands must be images of Q (star frame)");
  }
  require_ids(r.out_povm_id(), s.in_povm_id(), "star_compose");
  require_ids(s.in_povm_id(), t.source_povm_id(), "star_compose (transition matrix)");
  if (s.cols() != t.size() || r.rows() != t.size()) {
    throw DimensionError("star_compose: shapes do not chain through the transition matrix");
  }
  return QRep(s.matrix() * t.inverse() * r.matrix(), r.in_povm_id(), s.out_povm_id(),
              composite_kind(s, r));
}

QRep to_qstoch(const QRep& r, const TransitionMatrix& t, Side side) {
  if (r.frame() != Frame::kStar) throw CompositionError("to_qstoch: input is already in QStoch");
  if (side == Side::kRight) {
    require_ids(r.in_povm_id(), t.source_povm_id(), "to_qstoch(right)");
    if (r.cols() != t.size()) throw DimensionError("to_qstoch(right): shape mismatch");
    return QRep(r.matrix() * t.inverse(), r.in_povm_id(), r.out_povm_id(), r.kind(), Frame::kRight);
  }
  require_ids(r.out_povm_id(), t.source_povm_id(), "to_qstoch(left)");
  if (r.rows() != t.size()) throw DimensionError("to_qstoch(left): shape mismatch");
  return QRep(t.inverse() * r.matrix(), r.in_povm_id(), r.out_povm_id(), r.kind(), Frame::kLeft);
}

QRep qstoch_compose(const QRep& s, const QRep& r) {
  if (s.frame() == Frame::kStar || s.frame() != r.frame()) {
    throw CompositionError("qstoch_compose: operands must share a QStoch frame");
  }
  require_ids(r.out_povm_id(), s.in_povm_id(), "qstoch_compose");
  return QRep(s.matrix() * r.matrix(), r.in_povm_id(), s.out_povm_id(), composite_kind(s, r),
              s.frame());
}

// Monoidal structure ----------------------------------------------------------

CoherenceMatrix tensor_coherence(const QuasiPovm& povm1, const QuasiPovm& povm2,
                                 const QuasiPovm& povm12) {
  if (povm12.dim() != povm1.dim() * povm2.dim()) {
    throw DimensionError("tensor_coherence: composite dimension " + std::to_string(povm12.dim()) +
                         " != " + std::to_string(povm1.dim()) + " * " +
                         std::to_string(povm2.dim()));
  }
  if (!povm1.flags().minimal || !povm2.flags().minimal || !povm12.flags().minimal) {
    throw ValidationError("tensor_coherence: all three families must be minimal");
  }
  const std::size_t n1 = povm1.size(), n2 = povm2.size();
  RealMatrix s(povm12.size(), n1 * n2);
  std::vector<ComplexMatrix> second;
  for (std::size_t i2 = 0; i2 < n2; ++i2) second.push_back(povm2.normalized_effect(i2));
  for (std::size_t i1 = 0; i1 < n1; ++i1) {
    const ComplexMatrix first = povm1.normalized_effect(i1);
    for (std::size_t i2 = 0; i2 < n2; ++i2) {
      const ComplexMatrix product = kron(first, second[i2]);
      for (std::size_t j = 0; j < povm12.size(); ++j)
        s(j, i1 * n2 + i2) = trace_product(product, povm12.effect(j)).real();
    }
  }
  const auto sv = singular_values(s);
  const double cond = sv.back() > 0.0 ? sv.front() / sv.back() : INFINITY;
  return {std::move(s), cond};
}

RealMatrix tensor_prime(const RealMatrix& a, const RealMatrix& b, const TransitionMatrix& t_a_out,
                        const TransitionMatrix& t_b_out, const TransitionMatrix& t_ab_out) {
  if (a.rows() != t_a_out.size() || b.rows() != t_b_out.size() ||
      t_ab_out.size() != t_a_out.size() * t_b_out.size()) {
    throw DimensionError("tensor_prime: operand rows do not match the output families");
  }
  return t_ab_out.matrix() * kron(t_a_out.inverse(), t_b_out.inverse()) * kron(a, b);
}

NaturalIso natural_iso(const QuasiPovm& povm_a, const QuasiPovm& povm_b) {
  if (!povm_a.flags().minimal || !povm_b.flags().minimal) {
    throw ValidationError("natural_iso: both families must be minimal");
  }
  if (povm_a.dim() != povm_b.dim()) throw DimensionError("natural_iso: dimensions differ");
  const std::size_t n = povm_a.size();
  RealMatrix s(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const ComplexMatrix e = povm_a.normalized_effect(j);
    for (std::size_t i = 0; i < n; ++i) s(i, j) = trace_product(e, povm_b.effect(i)).real();
  }
  const TransitionMatrix ta(povm_a);
  NaturalIso iso;
  iso.eta = s * ta.inverse();
  iso.inverse = ta.matrix() * pinv(s);
  iso.change_of_basis = std::move(s);
  return iso;
}

// Dagger, negativity ------------------------------------------------------------

std::optional<SicConstants> check_dagger_form(const RealMatrix& t) {
  auto fit = fit_identity_plus_ones(t, tol::kSicForm);
  if (!fit) return std::nullopt;
  if (std::abs(fit->alpha + static_cast<double>(t.rows()) * fit->beta - 1.0) >= tol::kSicForm) {
    return std::nullopt;
  }
  return fit;
}

std::optional<SicConstants> check_dagger_form(const TransitionMatrix& t) {
  return check_dagger_form(t.matrix());
}

double negativity(std::span<const double> values) {
  double n = 0.0;
  for (double v : values)
    if (v < 0.0) n -= v;
  return n;
}

// Extraction --------------------------------------------------------------------

std::vector<State> extraction_probes(std::size_t dim) {
  std::vector<State> probes;
  for (std::size_t k = 0; k < dim; ++k) {
    std::vector<cplx> v(dim);
    v[k] = 1.0;
    probes.push_back(State::pure(v));
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t k = j + 1; k < dim; ++k) {
      std::vector<cplx> plus(dim), iplus(dim);
      plus[j] = r;
      plus[k] = r;
      iplus[j] = r;
      iplus[k] = cplx(0.0, r);
      probes.push_back(State::pure(plus));
      probes.push_back(State::pure(iplus));
    }
  return probes;
}

QuasiPovm extract_quasi_povm(std::size_t dim, const StateMap& state_map, std::size_t out_len,
                             std::uint64_t seed) {
  if (dim == 0 || out_len == 0) throw DimensionError("extract_quasi_povm: empty shape");
  auto evaluate = [&](const State& rho) {
    auto v = state_map(rho);
    if (v.size() != out_len) {
      throw ExtractionError("extract_quasi_povm: map returned " + std::to_string(v.size()) +
                            " entries, expected " + std::to_string(out_len));
    }
    return v;
  };

  // Convexity spot checks: map(t rho + (1-t) sigma) = t map(rho) + (1-t) map(sigma).
  for (int c = 0; c < kAffineSpotChecks; ++c) {
    const State rho = random_state(dim, derive_seed(seed, 2 * c));
    const State sigma = random_state(dim, derive_seed(seed, 2 * c + 1));
    const double t = 0.3 + 0.2 * c;
    const State mix(rho.matrix() * cplx(t) + sigma.matrix() * cplx(1.0 - t));
    const auto fr = evaluate(rho), fs = evaluate(sigma), fm = evaluate(mix);
    for (std::size_t i = 0; i < out_len; ++i) {
      if (std::abs(fm[i] - (t * fr[i] + (1.0 - t) * fs[i])) > tol::kAffine) {
        throw ExtractionError("extract_quasi_povm: map is not affine on density matrices");
      }
    }
  }

  // Probe values: diagonal entries from |k><k|, off-diagonals from the two
  // superpositions via <v|E|v> = (E_jj + E_kk)/2 + Re E_jk and (E_jj + E_kk)/2 - Im E_jk.
  const auto probes = extraction_probes(dim);
  std::vector<std::vector<double>> values;
  values.reserve(probes.size());
  for (const auto& p : probes) values.push_back(evaluate(p));

  std::vector<ComplexMatrix> effects(out_len, ComplexMatrix(dim, dim));
  for (std::size_t i = 0; i < out_len; ++i) {
    auto& e = effects[i];
    for (std::size_t k = 0; k < dim; ++k) e(k, k) = values[k][i];
    std::size_t slot = dim;
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t k = j + 1; k < dim; ++k) {
        const double avg = 0.5 * (e(j, j).real() + e(k, k).real());
        const double re = values[slot][i] - avg;
        const double im = avg - values[slot + 1][i];
        e(j, k) = cplx(re, im);
        e(k, j) = cplx(re, -im);
        slot += 2;
      }
  }

  ComplexMatrix sum(dim, dim);
  for (const auto& e : effects) sum += e;
  const ComplexMatrix residual = sum - ComplexMatrix::identity(dim);
  if (max_abs(residual) > tol::kAffine) {
    throw ExtractionError("extract_quasi_povm: recovered effects do not sum to the identity");
  }
  const ComplexMatrix share = residual / cplx(static_cast<double>(out_len));
  for (auto& e : effects) e -= share;
  QuasiPovm povm(dim, std::move(effects));

  for (int c = 0; c < kReproductionChecks; ++c) {
    const State rho = random_state(dim, derive_seed(seed, 1000 + c));
    const auto expected = evaluate(rho);
    for (std::size_t i = 0; i < out_len; ++i) {
      const double got = trace_product(rho.matrix(), povm.effect(i)).real();
      if (std::abs(got - expected[i]) > tol::kAffine) {
        throw ExtractionError("extract_quasi_povm: recovered family does not reproduce the map");
      }
    }
  }
  return povm;
}

}  // namespace qstoch
