#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace mipe::kernels {

enum class Backend { Scalar, Avx2, Neon };

const char* backend_name(Backend b);

/// True when the backend can run on this CPU. Scalar is always available.
bool backend_available(Backend b);

/// Backend used by the dispatching entry points below. Defaults to the best
/// available one, detected once at startup.
Backend active_backend();

/// Overrides the dispatch target. Throws mipe::Error if the backend is not
/// available on this CPU.
void set_backend(Backend b);

/// Dot product of two equally sized vectors.
double dot(std::span<const double> a, std::span<const double> b);

/// Sum of all elements.
double sum(std::span<const double> a);

// Per-backend entry points. The non-scalar ones must only be called after
// checking backend_available(); they exist unconditionally so equivalence
// tests can compare implementations directly.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
}  // namespace neon
#endif

}  // namespace mipe::kernels
