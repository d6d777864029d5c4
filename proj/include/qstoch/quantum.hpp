#pragma once

// Quantum side: density matrices, CPTP maps in Kraus form, and measurements.
//
// All three types validate on construction and are immutable afterwards.
// M_1 = C is represented by 1x1 matrices, so a state rho on M_n doubles as the
// channel 1 -> n with Kraus operators sqrt(lambda_k) |v_k> (see Channel::from_state).

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "qstoch/matrix.hpp"

namespace qstoch {

class State {
 public:
  /// Validates Hermiticity, positivity (eigenvalues >= -tol::kPositive) and unit trace.
  explicit State(ComplexMatrix rho);

  /// |psi><psi| for a normalized vector.
  static State pure(std::span<const cplx> psi);
  static State maximally_mixed(std::size_t dim);

  std::size_t dim() const noexcept { return rho_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return rho_; }

 private:
  ComplexMatrix rho_;
};

class Channel {
 public:
  /// Kraus operators are dim_out x dim_in. Validates trace preservation
  /// (sum K^dagger K = I within tol::kTracePreserving) and Choi positivity.
  Channel(std::size_t dim_in, std::size_t dim_out, std::vector<ComplexMatrix> kraus);

  static Channel identity(std::size_t dim);
  /// rho -> U rho U^dagger
  static Channel unitary(const ComplexMatrix& u);
  /// rho -> lambda rho + (1 - lambda) tr(rho) I/d, Kraus form over the clock-and-shift basis.
  /// Valid for -1/(d^2-1) <= lambda <= 1; lambda = 0 is the fully depolarizing channel.
  static Channel depolarizing(std::size_t dim, double lambda);
  /// Qubit amplitude damping with decay probability gamma.
  static Channel amplitude_damping(double gamma);
  /// The morphism 1 -> n that prepares `rho`.
  static Channel from_state(const State& rho);
  /// t * a + (1 - t) * b, realized by Kraus union with sqrt(t), sqrt(1 - t) weights.
  static Channel mixture(double t, const Channel& a, const Channel& b);

  std::size_t dim_in() const noexcept { return dim_in_; }
  std::size_t dim_out() const noexcept { return dim_out_; }
  const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }

  /// Linear action sum_i K_i a K_i^dagger on an arbitrary dim_in x dim_in matrix.
  ComplexMatrix apply(const ComplexMatrix& a) const;

  /// Choi matrix sum_ab |a><b| (x) Phi(|a><b|), (dim_in*dim_out)^2 square.
  ComplexMatrix choi() const;

 private:
  std::size_t dim_in_;
  std::size_t dim_out_;
  std::vector<ComplexMatrix> kraus_;
};

class Measurement {
 public:
  /// Validates 0 <= A_k <= I (within tol::kPositive) and sum A_k = I.
  Measurement(std::size_t dim, std::vector<ComplexMatrix> effects);

  /// Projective measurement in the computational basis.
  static Measurement computational(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t outcomes() const noexcept { return effects_.size(); }
  const std::vector<ComplexMatrix>& effects() const noexcept { return effects_; }

  /// Born probabilities tr(A_k rho).
  std::vector<double> probabilities(const State& rho) const;

 private:
  std::size_t dim_;
  std::vector<ComplexMatrix> effects_;
};

// Operations -----------------------------------------------------------------

State apply_channel(const Channel& phi, const State& rho);

/// psi o phi
Channel compose_channels(const Channel& psi, const Channel& phi);

Channel tensor_channels(const Channel& phi1, const Channel& phi2);

bool is_unital(const Channel& phi);

/// Hilbert-Schmidt dual {K_i^dagger}. Throws AdjointUndefinedError unless phi is
/// square and unital.
Channel adjoint_channel(const Channel& phi);

State tensor_states(const State& a, const State& b);

/// X^j Z^k with shift X|m> = |m+1 mod d> and clock Z|m> = omega^m |m>, omega = exp(2 pi i / d).
ComplexMatrix weyl_operator(std::size_t dim, std::size_t j, std::size_t k);

// Random instances. All generators are deterministic in `seed`.

using Rng = std::mt19937_64;

/// Counter-based derivation of independent per-trial seeds from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) noexcept;

ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);
ComplexMatrix haar_unitary(std::size_t dim, Rng& rng);
ComplexMatrix haar_unitary(std::size_t dim, std::uint64_t seed);
/// Haar-random pure state vector.
std::vector<cplx> haar_vector(std::size_t dim, Rng& rng);

/// GG^dagger / tr(GG^dagger) with complex Gaussian G.
State random_state(std::size_t dim, std::uint64_t seed);

/// Kraus operators are the dim_out-row blocks of a Haar isometry C^{dim_in} -> C^{dim_out * kraus_count}.
Channel random_channel(std::size_t dim_in, std::size_t dim_out, std::size_t kraus_count,
                       std::uint64_t seed);

/// Uniform mixture of `unitaries` Haar unitary conjugations (exactly unital).
Channel random_unital_channel(std::size_t dim, std::uint64_t seed, std::size_t unitaries = 3);

/// Random K-outcome POVM: symmetrized Gaussian rank-one effects.
Measurement random_measurement(std::size_t dim, std::size_t outcomes, std::uint64_t seed);

}  // namespace qstoch
