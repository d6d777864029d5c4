// AVX2 + FMA variants. Compiled with -mavx2 -mfma; only reached through the
// dispatcher after a CPUID check.

#include <immintrin.h>

#include <algorithm>

#include "qstoch/kernels.hpp"

namespace qstoch::kernels::avx2 {

namespace {

// std::complex<double> is layout-compatible with double[2].
inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Lanes (even, odd) summed separately over both 128-bit halves.
inline void hsum_pairs(__m256d v, double& even, double& odd) {
  const __m128d s = _mm_add_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
  even = _mm_cvtsd_f64(s);
  odd = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

}  // namespace

void cgemm(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  std::fill(c, c + m * n, cplx{});
  const std::size_t n2 = n & ~std::size_t{1};  // two complex values per register
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = as_doubles(c + i * n);
    for (std::size_t p = 0; p < k; ++p) {
      const double ar = a[i * k + p].real();
      const double ai = a[i * k + p].imag();
      if (ar == 0.0 && ai == 0.0) continue;
      const __m256d vr = _mm256_set1_pd(ar);
      const __m256d vi = _mm256_set1_pd(ai);
      const double* brow = as_doubles(b + p * n);
      std::size_t j = 0;
      for (; j < n2; j += 2) {
        const __m256d bv = _mm256_loadu_pd(brow + 2 * j);
        const __m256d bswap = _mm256_permute_pd(bv, 0b0101);
        // (ar*br - ai*bi, ar*bi + ai*br)
        const __m256d prod = _mm256_fmaddsub_pd(vr, bv, _mm256_mul_pd(vi, bswap));
        _mm256_storeu_pd(crow + 2 * j, _mm256_add_pd(_mm256_loadu_pd(crow + 2 * j), prod));
      }
      for (; j < n; ++j) {
        const double br = brow[2 * j];
        const double bi = brow[2 * j + 1];
        crow[2 * j] += ar * br - ai * bi;
        crow[2 * j + 1] += ar * bi + ai * br;
      }
    }
  }
}

void dgemm(std::size_t m, std::size_t k, std::size_t n, const double* a, const double* b,
           double* c) {
  std::fill(c, c + m * n, 0.0);
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      if (aip == 0.0) continue;
      const __m256d va = _mm256_set1_pd(aip);
      const double* brow = b + p * n;
      std::size_t j = 0;
      for (; j < n4; j += 4) {
        _mm256_storeu_pd(crow + j,
                         _mm256_fmadd_pd(va, _mm256_loadu_pd(brow + j), _mm256_loadu_pd(crow + j)));
      }
      for (; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

cplx cdotc(std::size_t n, const cplx* x, const cplx* y) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  __m256d direct = _mm256_setzero_pd();   // (xr*yr, xi*yi)
  __m256d crossed = _mm256_setzero_pd();  // (xr*yi, xi*yr)
  const std::size_t n2 = n & ~std::size_t{1};
  for (std::size_t i = 0; i < n2; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    direct = _mm256_fmadd_pd(xv, yv, direct);
    crossed = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), crossed);
  }
  double d_even, d_odd, c_even, c_odd;
  hsum_pairs(direct, d_even, d_odd);
  hsum_pairs(crossed, c_even, c_odd);
  double re = d_even + d_odd;
  double im = c_odd - c_even;
  for (std::size_t i = n2; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].imag() * y[i].real() - x[i].real() * y[i].imag();
  }
  return {re, im};
}

cplx cdotu(std::size_t n, const cplx* x, const cplx* y) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  __m256d direct = _mm256_setzero_pd();
  __m256d crossed = _mm256_setzero_pd();
  const std::size_t n2 = n & ~std::size_t{1};
  for (std::size_t i = 0; i < n2; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    direct = _mm256_fmadd_pd(xv, yv, direct);
    crossed = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), crossed);
  }
  double d_even, d_odd, c_even, c_odd;
  hsum_pairs(direct, d_even, d_odd);
  hsum_pairs(crossed, c_even, c_odd);
  double re = d_even - d_odd;
  double im = c_even + c_odd;
  for (std::size_t i = n2; i < n; ++i) {
    re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
  }
  return {re, im};
}

double ddot(std::size_t n, const double* x, const double* y) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  double s = hsum(acc);
  for (std::size_t i = n4; i < n; ++i) s += x[i] * y[i];
  return s;
}

}  // namespace qstoch::kernels::avx2
