#include "bugnet/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace bugnet::kernels {

// ============================================================================
// Scalar reference kernels
// ============================================================================

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

double max_value_scalar(const double* a, std::size_t n) {
    double m = a[0];
    for (std::size_t i = 1; i < n; ++i) {
        if (a[i] > m) m = a[i];
    }
    return m;
}

void divide_inplace_scalar(double* a, double divisor, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) a[i] /= divisor;
}

void sqdist_accumulate_scalar(double* acc, const double* xs, double center, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double d = xs[i] - center;
        acc[i] += d * d;
    }
}

double max_abs_residual_scalar(const double* y, const double* v, double lambda, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::fabs(y[i] - lambda * v[i]);
        if (r > m) m = r;
    }
    return m;
}

const Ops kScalarOps = {
    "scalar",
    dot_scalar,
    sum_scalar,
    max_value_scalar,
    divide_inplace_scalar,
    sqdist_accumulate_scalar,
    max_abs_residual_scalar,
};

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

// ============================================================================
// Runtime dispatch
// ============================================================================

namespace {

const Ops* pick_default() {
    const char* env = std::getenv("BUGNET_KERNELS");
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0) return &kScalarOps;
        if (std::strcmp(env, "avx2") == 0 && avx2_ops() != nullptr) return avx2_ops();
    }
    if (const Ops* avx2 = avx2_ops()) return avx2;
    return &kScalarOps;
}

std::atomic<const Ops*> g_active{nullptr};

}  // namespace

const Ops& active() {
    const Ops* ops = g_active.load(std::memory_order_acquire);
    if (ops == nullptr) {
        ops = pick_default();
        g_active.store(ops, std::memory_order_release);
    }
    return *ops;
}

bool select(Impl impl) {
    switch (impl) {
        case Impl::Auto:
            g_active.store(pick_default(), std::memory_order_release);
            return true;
        case Impl::Scalar:
            g_active.store(&kScalarOps, std::memory_order_release);
            return true;
        case Impl::Avx2:
            if (const Ops* avx2 = avx2_ops()) {
                g_active.store(avx2, std::memory_order_release);
                return true;
            }
            return false;
    }
    return false;
}

}  // namespace bugnet::kernels
