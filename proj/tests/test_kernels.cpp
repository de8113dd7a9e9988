#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "bugnet/kernels.hpp"
#include "bugnet/rng.hpp"

using namespace bugnet;

namespace {

std::vector<double> random_array(Rng& rng, std::size_t n, double lo = -5.0, double hi = 5.0) {
    std::vector<double> out(n);
    for (double& x : out) x = lo + (hi - lo) * rng.unit();
    return out;
}

bool close(double a, double b, double tol = 1e-12) {
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= tol * scale;
}

}  // namespace

TEST_CASE("scalar kernels compute the obvious answers") {
    const auto& ops = kernels::scalar_ops();
    const double a[] = {1.0, 2.0, 3.0};
    const double b[] = {4.0, 5.0, 6.0};
    CHECK(ops.dot(a, b, 3) == 32.0);
    CHECK(ops.sum(a, 3) == 6.0);
    CHECK(ops.max_value(a, 3) == 3.0);

    double v[] = {2.0, 4.0, 8.0};
    ops.divide_inplace(v, 2.0, 3);
    CHECK(v[0] == 1.0);
    CHECK(v[2] == 4.0);

    double w[] = {0.3, 0.1, 0.3};
    ops.divide_inplace(w, 0.3, 3);
    CHECK(w[0] == 1.0);  // x/x is exactly 1
    CHECK(w[2] == 1.0);

    double acc[] = {1.0, 0.0, 0.0};
    ops.sqdist_accumulate(acc, a, 2.0, 3);
    CHECK(acc[0] == 2.0);  // 1 + (1-2)^2
    CHECK(acc[1] == 0.0);
    CHECK(acc[2] == 1.0);

    const double y[] = {2.0, 4.1, 6.0};
    CHECK(close(ops.max_abs_residual(y, a, 2.0, 3), 0.1, 1e-9));
}

TEST_CASE("vector variants agree with the scalar reference") {
    const kernels::Ops* avx2 = kernels::avx2_ops();
    if (avx2 == nullptr) {
        MESSAGE("AVX2 unavailable on this host; dispatch falls back to scalar");
        CHECK(std::strcmp(kernels::active().name, "scalar") == 0);
        return;
    }
    const auto& ref = kernels::scalar_ops();
    Rng rng(123);
    // sizes straddling the vector width, including remainders and empties
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 63u, 64u, 100u,
                          1000u, 1021u}) {
        const auto a = random_array(rng, n);
        const auto b = random_array(rng, n);
        CHECK(close(avx2->dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n)));
        CHECK(close(avx2->sum(a.data(), n), ref.sum(a.data(), n)));
        if (n > 0) {
            CHECK(avx2->max_value(a.data(), n) == ref.max_value(a.data(), n));
        }

        auto v1 = a, v2 = a;
        avx2->divide_inplace(v1.data(), 0.37, n);
        ref.divide_inplace(v2.data(), 0.37, n);
        CHECK(v1 == v2);  // IEEE division: bit-identical

        auto acc1 = random_array(rng, n, 0.0, 1.0);
        auto acc2 = acc1;
        avx2->sqdist_accumulate(acc1.data(), b.data(), 1.25, n);
        ref.sqdist_accumulate(acc2.data(), b.data(), 1.25, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(acc1[i], acc2[i]));

        CHECK(close(avx2->max_abs_residual(a.data(), b.data(), 0.9, n),
                    ref.max_abs_residual(a.data(), b.data(), 0.9, n)));
    }
}

TEST_CASE("kernel selection can be forced and restored") {
    CHECK(kernels::select(kernels::Impl::Scalar));
    CHECK(std::strcmp(kernels::active().name, "scalar") == 0);
    CHECK(kernels::select(kernels::Impl::Auto));
    if (kernels::avx2_ops() != nullptr) {
        CHECK(kernels::select(kernels::Impl::Avx2));
        CHECK(std::strcmp(kernels::active().name, "avx2") == 0);
        CHECK(kernels::select(kernels::Impl::Auto));
    } else {
        CHECK_FALSE(kernels::select(kernels::Impl::Avx2));
    }
}
