#pragma once

// Numerical thresholds shared across modules. All are absolute, measured in
// the max-entry norm, unless the name says otherwise. Matrices in scope have
// entries of order <= 1, so absolute thresholds are meaningful.

namespace qstoch::tol {

inline constexpr double kHermitian = 1e-10;      // |a - a^dagger|_max
inline constexpr double kPositive = 1e-10;       // smallest admissible eigenvalue is -kPositive
inline constexpr double kStateTrace = 1e-10;     // |tr(rho) - 1|
inline constexpr double kPovmSum = 1e-10;        // |sum E_i - I|_max
inline constexpr double kTracePreserving = 1e-9; // |sum K^dagger K - I|_max
inline constexpr double kUnital = 1e-9;          // |sum K K^dagger - I|_max
inline constexpr double kReconstruction = 1e-10; // eigendecomposition residual
inline constexpr double kPinvRelative = 1e-10;   // singular value cutoff relative to sigma_max
inline constexpr double kGramRank = 1e-8;        // singular values of the Gram matrix counted as nonzero
inline constexpr double kEqualTrace = 1e-10;
inline constexpr double kSicForm = 1e-9;         // residual gate for alpha*I + beta*J fits
inline constexpr double kColumnSum = 1e-10;      // quasi-stochastic column sums
inline constexpr double kZeroTrace = 1e-12;      // effects with |tr E| below this cannot be normalized
inline constexpr double kWeightSum = 1e-12;
inline constexpr double kSicOverlap = 1e-9;
inline constexpr double kTrivialEffect = 1e-9;   // |E - (tr E / n) I|_max for the dichotomy verdict
inline constexpr double kAffine = 1e-8;          // extraction convexity spot checks
inline constexpr double kOrbitRank = 1e-8;

}  // namespace qstoch::tol
