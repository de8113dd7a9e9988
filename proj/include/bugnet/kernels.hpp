#pragma once

#include <cstddef>

namespace bugnet::kernels {

/// Dense double-array primitives behind the numeric hot loops (power
/// iteration, SVM kernel rows). Each operation has a scalar reference
/// implementation and, on x86-64 with AVX2+FMA, a vector variant selected
/// once at startup. Variants may differ from the reference in the last bits
/// (reassociated reductions, FMA contraction); the test suite bounds that
/// difference.
struct Ops {
    const char* name;

    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum)(const double* a, std::size_t n);
    /// Maximum element; n must be >= 1.
    double (*max_value)(const double* a, std::size_t n);
    /// True division (not reciprocal multiply): a[i]/divisor == 1.0 exactly
    /// when a[i] == divisor, which max-normalization relies on.
    void (*divide_inplace)(double* a, double divisor, std::size_t n);
    /// acc[i] += (xs[i] - center)^2 for each i.
    void (*sqdist_accumulate)(double* acc, const double* xs, double center, std::size_t n);
    /// max_i |y[i] - lambda * v[i]|.
    double (*max_abs_residual)(const double* y, const double* v, double lambda, std::size_t n);
};

enum class Impl { Auto, Scalar, Avx2 };

const Ops& scalar_ops();

/// nullptr when the binary or CPU lacks AVX2+FMA support.
const Ops* avx2_ops();

/// Currently selected implementation. Defaults to the best available; the
/// BUGNET_KERNELS environment variable ("scalar" or "avx2") overrides.
const Ops& active();

/// Forces a specific implementation (Impl::Auto restores default selection).
/// Returns false if the requested variant is unavailable.
bool select(Impl impl);

}  // namespace bugnet::kernels
