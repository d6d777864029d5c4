#include "qstoch/povm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "qstoch/linalg.hpp"
#include "qstoch/quantum.hpp"
#include "qstoch/tolerances.hpp"

namespace qstoch {

namespace {

constexpr int kMinimalIcRetries = 16;

std::string content_id(std::size_t dim, const std::vector<ComplexMatrix>& effects) {
  // FNV-1a over dim, count and the IEEE bits of every entry (signed zeros folded).
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  auto mix_double = [&mix](double x) {
    x += 0.0;
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    mix(bits);
  };
  mix(dim);
  mix(effects.size());
  for (const auto& e : effects)
    for (const auto& v : e.data()) {
      mix_double(v.real());
      mix_double(v.imag());
    }
  std::ostringstream os;
  os << "povm-" << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace

std::optional<SicConstants> fit_identity_plus_ones(const RealMatrix& m, double residual_tol) {
  if (!m.is_square()) return std::nullopt;
  const std::size_t n = m.rows();
  double diag = 0.0, off = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) (i == j ? diag : off) += m(i, j);
  diag /= static_cast<double>(n);
  off = n > 1 ? off / static_cast<double>(n * (n - 1)) : 0.0;
  const SicConstants c{diag - off, off};
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double expected = (i == j ? c.alpha : 0.0) + c.beta;
      residual = std::max(residual, std::abs(m(i, j) - expected));
    }
  if (residual >= residual_tol) return std::nullopt;
  return c;
}

// QuasiPovm ------------------------------------------------------------------

QuasiPovm::QuasiPovm(std::size_t dim, std::vector<ComplexMatrix> effects)
    : dim_(dim), effects_(std::move(effects)) {
  if (dim_ == 0) throw DimensionError("quasi-POVM dimension must be positive");
  if (effects_.empty()) throw ValidationError("quasi-POVM has no effects");
  ComplexMatrix sum(dim_, dim_);
  bool positive = true;
  for (std::size_t k = 0; k < effects_.size(); ++k) {
    const auto& e = effects_[k];
    if (e.rows() != dim_ || e.cols() != dim_) {
      throw DimensionError("effect " + std::to_string(k) + " has shape " + e.shape_string() +
                           ", expected " + std::to_string(dim_) + "x" + std::to_string(dim_));
    }
    if (hermiticity_defect(e) > tol::kHermitian) {
      throw ValidationError("effect " + std::to_string(k) + " is not Hermitian");
    }
    if (positive && eigenvalues_hermitian(e).front() < -tol::kPositive) positive = false;
    traces_.push_back(e.trace().real());
    sum += e;
  }
  const double sum_defect = max_abs_diff(sum, ComplexMatrix::identity(dim_));
  if (sum_defect > tol::kPovmSum) {
    throw ValidationError("effects do not sum to the identity (defect " +
                          std::to_string(sum_defect) + ")");
  }

  const std::size_t n = effects_.size();
  gram_ = RealMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double g = trace_product(effects_[i], effects_[j]).real();
      gram_(i, j) = g;
      gram_(j, i) = g;
    }
  const auto sv = singular_values(gram_);
  gram_min_sv_ = sv.back();
  const auto rank = static_cast<std::size_t>(
      std::count_if(sv.begin(), sv.end(), [](double s) { return s > tol::kGramRank; }));

  flags_.positive = positive;
  flags_.informationally_complete = rank == dim_ * dim_;
  flags_.minimal = n == dim_ * dim_ && gram_min_sv_ > tol::kGramRank;
  const auto [tmin, tmax] = std::minmax_element(traces_.begin(), traces_.end());
  flags_.equal_trace = *tmax - *tmin <= tol::kEqualTrace;
  if (flags_.minimal) flags_.sic = fit_identity_plus_ones(gram_, tol::kSicForm);
  flags_.generalized_sic = flags_.sic.has_value();

  id_ = content_id(dim_, effects_);
}

ComplexMatrix QuasiPovm::normalized_effect(std::size_t i) const {
  const double t = traces_.at(i);
  if (std::abs(t) <= tol::kZeroTrace) {
    throw ValidationError("effect " + std::to_string(i) + " has zero trace and cannot be normalized");
  }
  return effects_[i] / cplx(t);
}

// Catalog --------------------------------------------------------------------

QuasiPovm tetrahedron_povm() {
  const double s = 1.0 / std::sqrt(3.0);
  const double bloch[4][3] = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  std::vector<ComplexMatrix> effects;
  for (const auto& a : bloch) {
    // (I + a . sigma) / 4
    effects.push_back(ComplexMatrix{{(1.0 + a[2]) / 4.0, cplx(a[0], -a[1]) / 4.0},
                                    {cplx(a[0], a[1]) / 4.0, (1.0 - a[2]) / 4.0}});
  }
  return QuasiPovm(2, std::move(effects));
}

std::vector<cplx> shipped_fiducial(std::size_t dim) {
  switch (dim) {
    case 2: {
      // Bloch vector (1, 1, 1)/sqrt 3: cos(theta) = 1/sqrt 3, azimuth pi/4.
      const double theta = std::acos(1.0 / std::sqrt(3.0));
      return {std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), std::atan(1.0))};
    }
    case 3: {
      const double r = 1.0 / std::sqrt(2.0);
      return {0.0, r, -r};
    }
    default:
      throw ConstructionError("no shipped SIC fiducial for dimension " + std::to_string(dim));
  }
}

QuasiPovm wh_sic(std::size_t dim, std::span<const cplx> fiducial) {
  if (dim == 0 || fiducial.size() != dim) {
    throw ConstructionError("fiducial length must equal the dimension");
  }
  double norm2 = 0.0;
  for (const auto& v : fiducial) norm2 += std::norm(v);
  if (std::abs(norm2 - 1.0) > tol::kSicOverlap) throw ConstructionError("fiducial is not normalized");

  const ComplexMatrix psi = ComplexMatrix::column(fiducial);
  std::vector<ComplexMatrix> orbit;
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t k = 0; k < dim; ++k) orbit.push_back(weyl_operator(dim, j, k) * psi);

  const double target = 1.0 / static_cast<double>(dim + 1);
  double worst = 0.0;
  for (std::size_t a = 0; a < orbit.size(); ++a)
    for (std::size_t b = a + 1; b < orbit.size(); ++b) {
      const double overlap = std::norm(kernels::cdotc(orbit[b].data(), orbit[a].data()));
      worst = std::max(worst, std::abs(overlap - target));
    }
  if (worst > tol::kSicOverlap) {
    std::ostringstream os;
    os << "fiducial does not generate a SIC in dimension " << dim
       << ": worst overlap deviation from 1/(d+1) is " << worst;
    throw ConstructionError(os.str());
  }

  std::vector<ComplexMatrix> effects;
  const cplx scale(1.0 / static_cast<double>(dim));
  for (const auto& v : orbit) effects.push_back(v * v.adjoint() * scale);
  return QuasiPovm(dim, std::move(effects));
}

QuasiPovm random_minimal_ic(std::size_t dim, std::uint64_t seed) {
  if (dim < 2) throw ConstructionError("random_minimal_ic needs dim >= 2");
  const std::size_t n = dim * dim;
  for (int attempt = 0; attempt < kMinimalIcRetries; ++attempt) {
    Rng rng(attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<ComplexMatrix> projectors;
    ComplexMatrix total(dim, dim);
    for (std::size_t i = 0; i < n; ++i) {
      const ComplexMatrix v = ComplexMatrix::column(haar_vector(dim, rng));
      projectors.push_back(v * v.adjoint());
      total += projectors.back();
    }
    total = (total + total.adjoint()) * cplx(0.5);
    ComplexMatrix s;
    try {
      s = sqrt_inv_psd(total);
    } catch (const SingularityError&) {
      continue;
    }
    std::vector<ComplexMatrix> effects;
    ComplexMatrix sum(dim, dim);
    for (const auto& p : projectors) {
      ComplexMatrix e = s * p * s;
      effects.push_back((e + e.adjoint()) * cplx(0.5));
      sum += effects.back();
    }
    // Fold the residual of sum E_i - I into the last effect so the identity holds to rounding.
    effects.back() -= (sum - ComplexMatrix::identity(dim));
    QuasiPovm povm(dim, std::move(effects));
    if (povm.flags().minimal) return povm;
  }
  throw GenerationError("random_minimal_ic: no linearly independent family after " +
                        std::to_string(kMinimalIcRetries) + " attempts");
}

QuasiPovm trivial_quasi_povm(std::size_t dim, std::span<const double> weights) {
  if (weights.empty()) throw ValidationError("trivial_quasi_povm: no weights");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > tol::kWeightSum) {
    throw ValidationError("trivial_quasi_povm: weights sum to " + std::to_string(total));
  }
  std::vector<ComplexMatrix> effects;
  for (double w : weights) effects.push_back(ComplexMatrix::identity(dim) * cplx(w));
  return QuasiPovm(dim, std::move(effects));
}

std::vector<ComplexMatrix> gell_mann_basis(std::size_t dim) {
  std::vector<ComplexMatrix> basis;
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t k = j + 1; k < dim; ++k) {
      ComplexMatrix m(dim, dim);
      m(j, k) = 1.0;
      m(k, j) = 1.0;
      basis.push_back(std::move(m));
    }
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t k = j + 1; k < dim; ++k) {
      ComplexMatrix m(dim, dim);
      m(j, k) = cplx(0.0, -1.0);
      m(k, j) = cplx(0.0, 1.0);
      basis.push_back(std::move(m));
    }
  for (std::size_t l = 1; l < dim; ++l) {
    ComplexMatrix m(dim, dim);
    const double c = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (std::size_t i = 0; i < l; ++i) m(i, i) = c;
    m(l, l) = -c * static_cast<double>(l);
    basis.push_back(std::move(m));
  }
  return basis;
}

QuasiPovm hermitian_basis_quasi_povm(std::size_t dim) {
  if (dim < 2) throw ConstructionError("hermitian_basis_quasi_povm needs dim >= 2");
  constexpr double c = 0.5;
  const auto basis = gell_mann_basis(dim);
  const ComplexMatrix base = ComplexMatrix::identity(dim) / cplx(static_cast<double>(dim * dim));
  ComplexMatrix first = base;
  std::vector<ComplexMatrix> effects{first};
  for (const auto& b : basis) {
    effects.push_back(base + b * cplx(c));
    effects.front() -= b * cplx(c);
  }
  return QuasiPovm(dim, std::move(effects));
}

QuasiPovm classical_povm(std::size_t outcomes) {
  if (outcomes == 0) throw DimensionError("classical_povm needs at least one outcome");
  std::vector<ComplexMatrix> effects;
  for (std::size_t k = 0; k < outcomes; ++k) {
    ComplexMatrix e(outcomes, outcomes);
    e(k, k) = 1.0;
    effects.push_back(std::move(e));
  }
  return QuasiPovm(outcomes, std::move(effects));
}

QuasiPovm product_povm(const QuasiPovm& a, const QuasiPovm& b) {
  std::vector<ComplexMatrix> effects;
  effects.reserve(a.size() * b.size());
  for (const auto& e : a.effects())
    for (const auto& f : b.effects()) effects.push_back(kron(e, f));
  return QuasiPovm(a.dim() * b.dim(), std::move(effects));
}

}  // namespace qstoch
