#pragma once

#include <cstddef>
#include <span>
#include <string>

// Dense double-precision primitives behind the similarity, scoring and
// surrogate-fitting loops. A scalar reference implementation is always
// available; on x86-64 an AVX2/FMA variant and on aarch64 a NEON variant
// are compiled in and selected at runtime. The SIMD variants may differ
// from the scalar ones in the last few ulps (reassociated accumulation),
// never beyond that; the equivalence suite pins this down.

namespace limers::kernels {

enum class Backend { scalar, avx2, neon };

// Backend picked at startup from CPU capabilities, or forced through the
// LIMERS_KERNELS environment variable (scalar|avx2|neon|auto).
Backend active_backend();

// Forces a backend. Throws std::runtime_error if this build/CPU lacks it.
void set_backend(Backend b);

bool backend_supported(Backend b);

std::string backend_name(Backend b);

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);

// sum_i x[i]
double sum(const double* x, std::size_t n);

inline double dot(std::span<const double> a, std::span<const double> b) {
    return dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    axpy(alpha, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

inline double sum(std::span<const double> x) { return sum(x.data(), x.size()); }

namespace detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
double sum_scalar(const double* x, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
double sum_avx2(const double* x, std::size_t n);
#endif

#if defined(__aarch64__)
double dot_neon(const double* a, const double* b, std::size_t n);
void axpy_neon(double alpha, const double* x, double* y, std::size_t n);
double sum_neon(const double* x, std::size_t n);
#endif

}  // namespace detail

}  // namespace limers::kernels
