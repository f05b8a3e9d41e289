#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "limers/kernels.hpp"

namespace limers::kernels {

namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detect_backend() {
#if defined(__aarch64__)
    return Backend::neon;
#else
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
#endif
}

Backend backend_from_env(Backend fallback) {
    const char* env = std::getenv("LIMERS_KERNELS");
    if (!env) return fallback;
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && backend_supported(Backend::avx2)) return Backend::avx2;
    if (v == "neon" && backend_supported(Backend::neon)) return Backend::neon;
    return fallback;  // "auto" or unusable request
}

std::atomic<Backend> g_backend{backend_from_env(detect_backend())};

}  // namespace

bool backend_supported(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return cpu_has_avx2();
#else
            return false;
#endif
        case Backend::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (!backend_supported(b))
        throw std::runtime_error("kernel backend not supported on this CPU/build: " + backend_name(b));
    g_backend.store(b, std::memory_order_relaxed);
}

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "?";
}

double dot(const double* a, const double* b, std::size_t n) {
    switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2: return detail::dot_avx2(a, b, n);
#endif
#if defined(__aarch64__)
        case Backend::neon: return detail::dot_neon(a, b, n);
#endif
        default: return detail::dot_scalar(a, b, n);
    }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2: detail::axpy_avx2(alpha, x, y, n); return;
#endif
#if defined(__aarch64__)
        case Backend::neon: detail::axpy_neon(alpha, x, y, n); return;
#endif
        default: detail::axpy_scalar(alpha, x, y, n); return;
    }
}

double sum(const double* x, std::size_t n) {
    switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2: return detail::sum_avx2(x, n);
#endif
#if defined(__aarch64__)
        case Backend::neon: return detail::sum_neon(x, n);
#endif
        default: return detail::sum_scalar(x, n);
    }
}

}  // namespace limers::kernels
