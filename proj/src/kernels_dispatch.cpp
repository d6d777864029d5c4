#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "qstoch/kernels.hpp"

namespace qstoch::kernels {

namespace {

bool cpu_has_avx2_fma() noexcept {
#if defined(QSTOCH_HAS_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() noexcept {
  if (const char* env = std::getenv("QSTOCH_FORCE_SCALAR"); env && std::string(env) == "1") {
    return Backend::kScalar;
  }
  return cpu_has_avx2_fma() ? Backend::kAvx2 : Backend::kScalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{detect()};
  return b;
}

void check_size(std::size_t have, std::size_t need, const char* what) {
  if (have < need) {
    throw std::invalid_argument(std::string("kernel operand too small: ") + what);
  }
}

}  // namespace

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool avx2_available() noexcept { return cpu_has_avx2_fma(); }

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void force_backend(Backend b) {
  if (b == Backend::kAvx2 && !avx2_available()) {
    throw std::invalid_argument("AVX2 backend not available on this build or CPU");
  }
  current().store(b, std::memory_order_relaxed);
}

void reset_backend() noexcept { current().store(detect(), std::memory_order_relaxed); }

void cgemm(std::size_t m, std::size_t k, std::size_t n, std::span<const cplx> a,
           std::span<const cplx> b, std::span<cplx> c) {
  check_size(a.size(), m * k, "a");
  check_size(b.size(), k * n, "b");
  check_size(c.size(), m * n, "c");
#if defined(QSTOCH_HAS_AVX2)
  if (active_backend() == Backend::kAvx2) return avx2::cgemm(m, k, n, a.data(), b.data(), c.data());
#endif
  scalar::cgemm(m, k, n, a.data(), b.data(), c.data());
}

void dgemm(std::size_t m, std::size_t k, std::size_t n, std::span<const double> a,
           std::span<const double> b, std::span<double> c) {
  check_size(a.size(), m * k, "a");
  check_size(b.size(), k * n, "b");
  check_size(c.size(), m * n, "c");
#if defined(QSTOCH_HAS_AVX2)
  if (active_backend() == Backend::kAvx2) return avx2::dgemm(m, k, n, a.data(), b.data(), c.data());
#endif
  scalar::dgemm(m, k, n, a.data(), b.data(), c.data());
}

cplx cdotc(std::span<const cplx> x, std::span<const cplx> y) {
  check_size(y.size(), x.size(), "y");
#if defined(QSTOCH_HAS_AVX2)
  if (active_backend() == Backend::kAvx2) return avx2::cdotc(x.size(), x.data(), y.data());
#endif
  return scalar::cdotc(x.size(), x.data(), y.data());
}

cplx cdotu(std::span<const cplx> x, std::span<const cplx> y) {
  check_size(y.size(), x.size(), "y");
#if defined(QSTOCH_HAS_AVX2)
  if (active_backend() == Backend::kAvx2) return avx2::cdotu(x.size(), x.data(), y.data());
#endif
  return scalar::cdotu(x.size(), x.data(), y.data());
}

double ddot(std::span<const double> x, std::span<const double> y) {
  check_size(y.size(), x.size(), "y");
#if defined(QSTOCH_HAS_AVX2)
  if (active_backend() == Backend::kAvx2) return avx2::ddot(x.size(), x.data(), y.data());
#endif
  return scalar::ddot(x.size(), x.data(), y.data());
}

}  // namespace qstoch::kernels
