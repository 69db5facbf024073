#include "mipe/kernels.hpp"

#include <cassert>

#include "mipe/error.hpp"

namespace mipe::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

}  // namespace scalar

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

bool backend_available(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(__aarch64__) || defined(_M_ARM64)
      return true;
#else
      return false;
#endif
  }
  return false;
}

namespace {

Backend detect_best() {
  if (backend_available(Backend::Avx2)) return Backend::Avx2;
  if (backend_available(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

Backend g_backend = detect_best();

}  // namespace

Backend active_backend() { return g_backend; }

void set_backend(Backend b) {
  if (!backend_available(b)) {
    throw Error(std::string("kernel backend not available on this cpu: ") +
                backend_name(b));
  }
  g_backend = b;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  switch (g_backend) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::Avx2: return avx2::dot(a.data(), b.data(), a.size());
#endif
#if defined(__aarch64__) || defined(_M_ARM64)
    case Backend::Neon: return neon::dot(a.data(), b.data(), a.size());
#endif
    default: return scalar::dot(a.data(), b.data(), a.size());
  }
}

double sum(std::span<const double> a) {
  switch (g_backend) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::Avx2: return avx2::sum(a.data(), a.size());
#endif
#if defined(__aarch64__) || defined(_M_ARM64)
    case Backend::Neon: return neon::sum(a.data(), a.size());
#endif
    default: return scalar::sum(a.data(), a.size());
  }
}

}  // namespace mipe::kernels
