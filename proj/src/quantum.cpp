#include "qstoch/quantum.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qstoch/linalg.hpp"
#include "qstoch/tolerances.hpp"

namespace qstoch {

namespace {

ComplexMatrix sum_products(const std::vector<ComplexMatrix>& ops, bool dagger_first) {
  ComplexMatrix acc;
  for (const auto& k : ops) {
    ComplexMatrix term = dagger_first ? k.adjoint() * k : k * k.adjoint();
    if (acc.empty()) {
      acc = std::move(term);
    } else {
      acc += term;
    }
  }
  return acc;
}

void validate_effect_family(std::size_t dim, const std::vector<ComplexMatrix>& effects,
                            const char* what) {
  if (effects.empty()) throw ValidationError(std::string(what) + ": no effects");
  ComplexMatrix sum(dim, dim);
  for (std::size_t k = 0; k < effects.size(); ++k) {
    const auto& e = effects[k];
    if (e.rows() != dim || e.cols() != dim) {
      throw DimensionError(std::string(what) + ": effect " + std::to_string(k) + " has shape " +
                           e.shape_string());
    }
    if (hermiticity_defect(e) > tol::kHermitian) {
      throw ValidationError(std::string(what) + ": effect " + std::to_string(k) +
                            " is not Hermitian");
    }
    const auto ev = eigenvalues_hermitian(e);
    if (ev.front() < -tol::kPositive || ev.back() > 1.0 + tol::kPositive) {
      throw ValidationError(std::string(what) + ": effect " + std::to_string(k) +
                            " is not between 0 and I");
    }
    sum += e;
  }
  if (max_abs_diff(sum, ComplexMatrix::identity(dim)) > tol::kPovmSum) {
    throw ValidationError(std::string(what) + ": effects do not sum to the identity");
  }
}

}  // namespace

// State ----------------------------------------------------------------------

State::State(ComplexMatrix rho) : rho_(std::move(rho)) {
  if (rho_.empty() || !rho_.is_square()) throw DimensionError("state must be a square matrix");
  if (hermiticity_defect(rho_) > tol::kHermitian) throw ValidationError("state is not Hermitian");
  const cplx tr = rho_.trace();
  if (std::abs(tr - 1.0) > tol::kStateTrace) {
    throw ValidationError("state trace is " + std::to_string(tr.real()) + ", expected 1");
  }
  const auto ev = eigenvalues_hermitian(rho_);
  if (ev.front() < -tol::kPositive) {
    throw ValidationError("state has negative eigenvalue " + std::to_string(ev.front()));
  }
}

State State::pure(std::span<const cplx> psi) {
  if (psi.empty()) throw DimensionError("empty state vector");
  const std::size_t d = psi.size();
  ComplexMatrix rho(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
  return State(std::move(rho));
}

State State::maximally_mixed(std::size_t dim) {
  return State(ComplexMatrix::identity(dim) / cplx(static_cast<double>(dim)));
}

// Channel --------------------------------------------------------------------

Channel::Channel(std::size_t dim_in, std::size_t dim_out, std::vector<ComplexMatrix> kraus)
    : dim_in_(dim_in), dim_out_(dim_out), kraus_(std::move(kraus)) {
  if (dim_in_ == 0 || dim_out_ == 0) throw DimensionError("channel dimensions must be positive");
  if (kraus_.empty()) throw ValidationError("channel has no Kraus operators");
  for (std::size_t i = 0; i < kraus_.size(); ++i) {
    if (kraus_[i].rows() != dim_out_ || kraus_[i].cols() != dim_in_) {
      throw DimensionError("Kraus operator " + std::to_string(i) + " has shape " +
                           kraus_[i].shape_string() + ", expected " + std::to_string(dim_out_) +
                           "x" + std::to_string(dim_in_));
    }
  }
  const double tp = max_abs_diff(sum_products(kraus_, true), ComplexMatrix::identity(dim_in_));
  if (tp > tol::kTracePreserving) {
    throw ValidationError("channel is not trace preserving (defect " + std::to_string(tp) + ")");
  }
  const auto choi_ev = eigenvalues_hermitian(choi());
  if (choi_ev.front() < -tol::kPositive) {
    throw ValidationError("channel is not completely positive (Choi eigenvalue " +
                          std::to_string(choi_ev.front()) + ")");
  }
}

Channel Channel::identity(std::size_t dim) {
  return Channel(dim, dim, {ComplexMatrix::identity(dim)});
}

Channel Channel::unitary(const ComplexMatrix& u) {
  if (!u.is_square()) throw DimensionError("unitary must be square");
  return Channel(u.rows(), u.rows(), {u});
}

Channel Channel::depolarizing(std::size_t dim, double lambda) {
  const double d2 = static_cast<double>(dim * dim);
  const double w0 = lambda + (1.0 - lambda) / d2;
  const double w = (1.0 - lambda) / d2;
  if (w0 < 0.0 || w < 0.0) throw ValidationError("depolarizing parameter out of range");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(dim * dim);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t k = 0; k < dim; ++k) {
      const double weight = (j == 0 && k == 0) ? w0 : w;
      kraus.push_back(weyl_operator(dim, j, k) * cplx(std::sqrt(weight)));
    }
  return Channel(dim, dim, std::move(kraus));
}

Channel Channel::amplitude_damping(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw ValidationError("damping probability out of [0, 1]");
  ComplexMatrix k0{{1.0, 0.0}, {0.0, std::sqrt(1.0 - gamma)}};
  ComplexMatrix k1{{0.0, std::sqrt(gamma)}, {0.0, 0.0}};
  return Channel(2, 2, {k0, k1});
}

Channel Channel::from_state(const State& rho) {
  const auto dec = eig_hermitian(rho.matrix());
  const std::size_t n = rho.dim();
  std::vector<ComplexMatrix> kraus;
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = dec.eigenvalues[k];
    if (lambda <= 0.0) continue;
    ComplexMatrix col(n, 1);
    for (std::size_t i = 0; i < n; ++i) col(i, 0) = std::sqrt(lambda) * dec.eigenvectors(i, k);
    kraus.push_back(std::move(col));
  }
  return Channel(1, n, std::move(kraus));
}

Channel Channel::mixture(double t, const Channel& a, const Channel& b) {
  if (t < 0.0 || t > 1.0) throw ValidationError("mixture weight out of [0, 1]");
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out()) {
    throw DimensionError("mixture of channels with different dimensions");
  }
  std::vector<ComplexMatrix> kraus;
  for (const auto& k : a.kraus()) kraus.push_back(k * cplx(std::sqrt(t)));
  for (const auto& k : b.kraus()) kraus.push_back(k * cplx(std::sqrt(1.0 - t)));
  return Channel(a.dim_in(), a.dim_out(), std::move(kraus));
}

ComplexMatrix Channel::apply(const ComplexMatrix& a) const {
  if (a.rows() != dim_in_ || a.cols() != dim_in_) {
    throw DimensionError("channel input must be " + std::to_string(dim_in_) + "x" +
                         std::to_string(dim_in_) + ", got " + a.shape_string());
  }
  ComplexMatrix out(dim_out_, dim_out_);
  for (const auto& k : kraus_) out += k * a * k.adjoint();
  return out;
}

ComplexMatrix Channel::choi() const {
  const std::size_t n = dim_in_, m = dim_out_;
  ComplexMatrix c(n * m, n * m);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      ComplexMatrix unit(n, n);
      unit(a, b) = 1.0;
      const ComplexMatrix img = apply(unit);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) c(a * m + i, b * m + j) = img(i, j);
    }
  return c;
}

// Measurement ----------------------------------------------------------------

Measurement::Measurement(std::size_t dim, std::vector<ComplexMatrix> effects)
    : dim_(dim), effects_(std::move(effects)) {
  if (dim_ == 0) throw DimensionError("measurement dimension must be positive");
  validate_effect_family(dim_, effects_, "measurement");
}

Measurement Measurement::computational(std::size_t dim) {
  std::vector<ComplexMatrix> effects;
  for (std::size_t k = 0; k < dim; ++k) {
    ComplexMatrix e(dim, dim);
    e(k, k) = 1.0;
    effects.push_back(std::move(e));
  }
  return Measurement(dim, std::move(effects));
}

std::vector<double> Measurement::probabilities(const State& rho) const {
  if (rho.dim() != dim_) throw DimensionError("measurement and state dimensions differ");
  std::vector<double> p;
  p.reserve(effects_.size());
  for (const auto& a : effects_) p.push_back(trace_product(a, rho.matrix()).real());
  return p;
}

// Operations -----------------------------------------------------------------

State apply_channel(const Channel& phi, const State& rho) {
  if (rho.dim() != phi.dim_in()) {
    throw DimensionError("apply_channel: state dimension " + std::to_string(rho.dim()) +
                         " != channel input dimension " + std::to_string(phi.dim_in()));
  }
  return State(phi.apply(rho.matrix()));
}

Channel compose_channels(const Channel& psi, const Channel& phi) {
  if (phi.dim_out() != psi.dim_in()) {
    throw DimensionError("compose_channels: output dimension " + std::to_string(phi.dim_out()) +
                         " does not feed input dimension " + std::to_string(psi.dim_in()));
  }
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(psi.kraus().size() * phi.kraus().size());
  for (const auto& l : psi.kraus())
    for (const auto& k : phi.kraus()) kraus.push_back(l * k);
  return Channel(phi.dim_in(), psi.dim_out(), std::move(kraus));
}

Channel tensor_channels(const Channel& phi1, const Channel& phi2) {
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(phi1.kraus().size() * phi2.kraus().size());
  for (const auto& k : phi1.kraus())
    for (const auto& l : phi2.kraus()) kraus.push_back(kron(k, l));
  return Channel(phi1.dim_in() * phi2.dim_in(), phi1.dim_out() * phi2.dim_out(), std::move(kraus));
}

bool is_unital(const Channel& phi) {
  if (phi.dim_in() != phi.dim_out()) return false;
  return max_abs_diff(sum_products(phi.kraus(), false), ComplexMatrix::identity(phi.dim_out())) <=
         tol::kUnital;
}

Channel adjoint_channel(const Channel& phi) {
  if (phi.dim_in() != phi.dim_out()) {
    throw AdjointUndefinedError("adjoint is only defined for channels M_n -> M_n");
  }
  if (!is_unital(phi)) throw AdjointUndefinedError("adjoint is only defined for unital channels");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(phi.kraus().size());
  for (const auto& k : phi.kraus()) kraus.push_back(k.adjoint());
  return Channel(phi.dim_out(), phi.dim_in(), std::move(kraus));
}

State tensor_states(const State& a, const State& b) { return State(kron(a.matrix(), b.matrix())); }

ComplexMatrix weyl_operator(std::size_t dim, std::size_t j, std::size_t k) {
  ComplexMatrix w(dim, dim);
  const double two_pi = 2.0 * std::numbers::pi;
  // (X^j Z^k)|m> = omega^{k m} |m + j>
  for (std::size_t m = 0; m < dim; ++m) {
    const double phase = two_pi * static_cast<double>((k * m) % dim) / static_cast<double>(dim);
    w((m + j) % dim, m) = std::polar(1.0, phase);
  }
  return w;
}

// Random instances -----------------------------------------------------------

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) noexcept {
  // splitmix64 finalizer over master + golden-ratio-spaced counter
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (auto& v : g.data()) {
    const double re = normal(rng);
    const double im = normal(rng);
    v = cplx(re, im);
  }
  return g;
}

ComplexMatrix haar_unitary(std::size_t dim, Rng& rng) {
  return qr_haar_factor(gaussian_matrix(dim, dim, rng));
}

ComplexMatrix haar_unitary(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(dim, rng);
}

std::vector<cplx> haar_vector(std::size_t dim, Rng& rng) {
  const ComplexMatrix g = gaussian_matrix(dim, 1, rng);
  double norm = 0.0;
  for (const auto& v : g.data()) norm += std::norm(v);
  norm = std::sqrt(norm);
  std::vector<cplx> psi(g.data().begin(), g.data().end());
  for (auto& v : psi) v /= norm;
  return psi;
}

State random_state(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw DimensionError("random_state: dimension must be positive");
  Rng rng(seed);
  const ComplexMatrix g = gaussian_matrix(dim, dim, rng);
  ComplexMatrix rho = g * g.adjoint();
  // Exact Hermitian symmetry before normalizing.
  rho = (rho + rho.adjoint()) * cplx(0.5);
  const double tr = rho.trace().real();
  return State(rho / cplx(tr));
}

Channel random_channel(std::size_t dim_in, std::size_t dim_out, std::size_t kraus_count,
                       std::uint64_t seed) {
  if (kraus_count == 0) throw ValidationError("random_channel: kraus_count must be >= 1");
  if (dim_out * kraus_count < dim_in) {
    throw DimensionError("random_channel: dim_out * kraus_count must be >= dim_in");
  }
  Rng rng(seed);
  const ComplexMatrix v = qr_haar_factor(gaussian_matrix(dim_out * kraus_count, dim_in, rng));
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(kraus_count);
  for (std::size_t b = 0; b < kraus_count; ++b) {
    ComplexMatrix k(dim_out, dim_in);
    for (std::size_t i = 0; i < dim_out; ++i)
      for (std::size_t j = 0; j < dim_in; ++j) k(i, j) = v(b * dim_out + i, j);
    kraus.push_back(std::move(k));
  }
  return Channel(dim_in, dim_out, std::move(kraus));
}

Channel random_unital_channel(std::size_t dim, std::uint64_t seed, std::size_t unitaries) {
  if (unitaries == 0) throw ValidationError("random_unital_channel: need at least one unitary");
  Rng rng(seed);
  const cplx w(std::sqrt(1.0 / static_cast<double>(unitaries)));
  std::vector<ComplexMatrix> kraus;
  for (std::size_t i = 0; i < unitaries; ++i) kraus.push_back(haar_unitary(dim, rng) * w);
  return Channel(dim, dim, std::move(kraus));
}

Measurement random_measurement(std::size_t dim, std::size_t outcomes, std::uint64_t seed) {
  if (outcomes == 0) throw ValidationError("random_measurement: need at least one outcome");
  Rng rng(seed);
  std::vector<ComplexMatrix> raw;
  ComplexMatrix total(dim, dim);
  for (std::size_t k = 0; k < outcomes; ++k) {
    const ComplexMatrix g = gaussian_matrix(dim, dim, rng);
    raw.push_back(g * g.adjoint());
    total += raw.back();
  }
  total = (total + total.adjoint()) * cplx(0.5);
  const ComplexMatrix s = sqrt_inv_psd(total);
  std::vector<ComplexMatrix> effects;
  for (const auto& a : raw) {
    ComplexMatrix e = s * a * s;
    effects.push_back((e + e.adjoint()) * cplx(0.5));
  }
  return Measurement(dim, std::move(effects));
}

}  // namespace qstoch
