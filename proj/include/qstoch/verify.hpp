#pragma once

// Randomized, seeded property suites for the laws of the representation.
// Trial i draws its inputs from derive_seed(seed, i), so a sweep gives the same
// residual list whether it runs serially or across threads.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qstoch/povm.hpp"
#include "qstoch/representation.hpp"

namespace qstoch {

/// One quasi-POVM per Hilbert-space dimension.
using FamilyMap = std::map<std::size_t, QuasiPovm>;

struct SweepOptions {
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  unsigned threads = 1;  // 0 = hardware concurrency
};

struct LawReport {
  std::string law;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  double tolerance = 0.0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  bool passed = false;  // max_residual < tolerance
  std::vector<double> residuals;
  std::map<std::string, std::string> notes;
};

/// Adds random_minimal_ic(d, derive_seed(seed, d)) for every requested dimension
/// that `families` does not already cover.
FamilyMap complete_families(FamilyMap families, const std::vector<std::size_t>& dims,
                            std::uint64_t seed);

/// ||Q(Psi o Phi) - Q(Psi) * Q(Phi)||_max for random Phi: n -> m, Psi: m -> k.
/// Families must be minimal, or trivial (all effects multiples of I).
LawReport check_functoriality(const FamilyMap& families, std::size_t n, std::size_t m,
                              std::size_t k, const SweepOptions& opt);

/// Pair dims: state tensor law and channel naturality with the coherence matrices.
/// Triple dims: the coherence (associativity) equation plus the state law under
/// both bracketings. Every product dimension needs its own family.
LawReport check_monoidal(const FamilyMap& families, const std::vector<std::size_t>& dims,
                         const SweepOptions& opt);

/// ||eta_m (F_a Q_a)(Phi) - (F_b Q_b)(Phi) eta_n||_max for random Phi: n -> m.
LawReport check_naturality(const FamilyMap& family_a, const FamilyMap& family_b, std::size_t n,
                           std::size_t m, const SweepOptions& opt);

/// ||(F Q)(Phi^dagger) - ((F Q)(Phi))^T||_max over random unital channels on M_dim.
/// notes["sic_form"] records whether T has the alpha I + beta J shape.
LawReport check_dagger(const QuasiPovm& family, const SweepOptions& opt);

/// Numerical rank (singular values > tol::kOrbitRank) of the vectorized span of
/// {U L U^dagger : L in seeds} over `unitary_samples` Haar unitaries.
std::size_t orbit_span_rank(std::size_t dim, const std::vector<ComplexMatrix>& seeds,
                            std::size_t unitary_samples, std::uint64_t seed);

enum class Dichotomy { kTrivial, kFaithful, kDiagnostic };

std::string_view to_string(Dichotomy d) noexcept;

struct DichotomyVerdict {
  Dichotomy verdict = Dichotomy::kDiagnostic;
  double trivial_deviation = 0.0;  // max_i ||E_i - (tr E_i / d) I||_max
  std::size_t gram_rank = 0;
  std::string detail;
};

/// Trivial when every effect is a multiple of I, Faithful when the family is
/// informationally complete. Anything else cannot underlie a functorial
/// representation and is reported as a diagnostic.
DichotomyVerdict dichotomy_report(const QuasiPovm& family);

}  // namespace qstoch
