#include "qstoch/kernels.hpp"

#include <algorithm>

namespace qstoch::kernels::scalar {

// Complex arithmetic is spelled out on (re, im) pairs: std::complex operator*
// carries NaN/Inf recovery branches that block vectorization and are not
// needed for finite inputs.

void cgemm(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  std::fill(c, c + m * n, cplx{});
  for (std::size_t i = 0; i < m; ++i) {
    cplx* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double ar = a[i * k + p].real();
      const double ai = a[i * k + p].imag();
      if (ar == 0.0 && ai == 0.0) continue;
      const cplx* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) {
        const double br = brow[j].real();
        const double bi = brow[j].imag();
        crow[j] = cplx(crow[j].real() + (ar * br - ai * bi), crow[j].imag() + (ar * bi + ai * br));
      }
    }
  }
}

void dgemm(std::size_t m, std::size_t k, std::size_t n, const double* a, const double* b,
           double* c) {
  std::fill(c, c + m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

cplx cdotc(std::size_t n, const cplx* x, const cplx* y) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].imag() * y[i].real() - x[i].real() * y[i].imag();
  }
  return {re, im};
}

cplx cdotu(std::size_t n, const cplx* x, const cplx* y) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
  }
  return {re, im};
}

double ddot(std::size_t n, const double* x, const double* y) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

}  // namespace qstoch::kernels::scalar
