#pragma once

// Inner-loop kernels behind the dense matrix types.
//
// Every kernel has a portable scalar reference implementation and, on x86-64
// builds, an AVX2+FMA variant. The variant is picked once at startup from
// CPUID; `force_backend` overrides it (the equivalence tests use it to run
// both paths on the same inputs). Matrices are row-major and complex values
// are stored interleaved (re, im), i.e. as std::complex<double>.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace qstoch::kernels {

using cplx = std::complex<double>;

enum class Backend { kScalar, kAvx2 };

std::string_view backend_name(Backend b) noexcept;

/// True when the binary carries AVX2 kernels and the CPU supports AVX2 and FMA.
bool avx2_available() noexcept;

Backend active_backend() noexcept;

/// Select a backend explicitly. Throws std::invalid_argument if it is unavailable.
void force_backend(Backend b);

/// Restore the CPUID-based choice. QSTOCH_FORCE_SCALAR=1 in the environment pins scalar.
void reset_backend() noexcept;

// Dispatched entry points -------------------------------------------------

/// c (m x n) = a (m x k) * b (k x n)
void cgemm(std::size_t m, std::size_t k, std::size_t n, std::span<const cplx> a,
           std::span<const cplx> b, std::span<cplx> c);

/// c (m x n) = a (m x k) * b (k x n)
void dgemm(std::size_t m, std::size_t k, std::size_t n, std::span<const double> a,
           std::span<const double> b, std::span<double> c);

/// sum_i x_i * conj(y_i)
cplx cdotc(std::span<const cplx> x, std::span<const cplx> y);

/// sum_i x_i * y_i
cplx cdotu(std::span<const cplx> x, std::span<const cplx> y);

/// sum_i x_i * y_i
double ddot(std::span<const double> x, std::span<const double> y);

// Per-ISA implementations (raw pointers; callers guarantee sizes) ---------

namespace scalar {
void cgemm(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b, cplx* c);
void dgemm(std::size_t m, std::size_t k, std::size_t n, const double* a, const double* b,
           double* c);
cplx cdotc(std::size_t n, const cplx* x, const cplx* y);
cplx cdotu(std::size_t n, const cplx* x, const cplx* y);
double ddot(std::size_t n, const double* x, const double* y);
}  // namespace scalar

#if defined(QSTOCH_HAS_AVX2)
namespace avx2 {
void cgemm(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b, cplx* c);
void dgemm(std::size_t m, std::size_t k, std::size_t n, const double* a, const double* b,
           double* c);
cplx cdotc(std::size_t n, const cplx* x, const cplx* y);
cplx cdotu(std::size_t n, const cplx* x, const cplx* y);
double ddot(std::size_t n, const double* x, const double* y);
}  // namespace avx2
#endif

}  // namespace qstoch::kernels
