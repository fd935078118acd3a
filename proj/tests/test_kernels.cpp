#include <doctest.h>

#include "deltaiss/kernels.hpp"
#include "deltaiss/rng.hpp"

#include <array>
#include <cmath>
#include <vector>

using namespace deltaiss;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

// Every SIMD backend available on this machine, plus scalar.
std::vector<kernels::Backend> available_backends() {
    std::vector<kernels::Backend> out{kernels::Backend::Scalar};
    for (auto b : {kernels::Backend::Avx2, kernels::Backend::Neon})
        if (kernels::backend_available(b)) out.push_back(b);
    return out;
}

struct BackendGuard {
    ~BackendGuard() { kernels::reset_backend(); }
};

} // namespace

TEST_CASE("kernel backends agree on dot and axpy across sizes") {
    BackendGuard guard;
    auto rng = seeded_stream(101, 0);
    // Sizes straddling the vector width, including ragged tails.
    for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 33, 100, 1000}) {
        const auto a = random_vec(rng, n);
        const auto b = random_vec(rng, n);

        kernels::force_backend(kernels::Backend::Scalar);
        const double dot_ref = kernels::dot(a.data(), b.data(), n);
        std::vector<double> axpy_ref = b;
        kernels::axpy(1.7, a.data(), axpy_ref.data(), n);

        for (auto backend : available_backends()) {
            kernels::force_backend(backend);
            const double dot_simd = kernels::dot(a.data(), b.data(), n);
            CHECK(std::abs(dot_simd - dot_ref) <=
                  1e-12 * std::max(1.0, std::abs(dot_ref)) + 1e-13 * static_cast<double>(n));

            std::vector<double> axpy_simd = b;
            kernels::axpy(1.7, a.data(), axpy_simd.data(), n);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(std::abs(axpy_simd[i] - axpy_ref[i]) <=
                      1e-14 * std::abs(axpy_ref[i]) + 1e-15);
        }
    }
}

TEST_CASE("kernel backends agree on matvec and matmul") {
    BackendGuard guard;
    auto rng = seeded_stream(102, 0);
    for (auto [m, k, n] : std::vector<std::array<std::size_t, 3>>{
             {1, 1, 1}, {2, 3, 4}, {5, 5, 5}, {7, 11, 3}, {16, 16, 16}, {17, 9, 21}, {30, 50, 30}}) {
        const auto a = random_vec(rng, m * k);
        const auto b = random_vec(rng, k * n);
        const auto x = random_vec(rng, k);

        kernels::force_backend(kernels::Backend::Scalar);
        std::vector<double> y_ref(m), c_ref(m * n);
        kernels::matvec(a.data(), m, k, x.data(), y_ref.data());
        kernels::matmul(a.data(), m, k, b.data(), n, c_ref.data());

        for (auto backend : available_backends()) {
            kernels::force_backend(backend);
            std::vector<double> y(m), c(m * n);
            kernels::matvec(a.data(), m, k, x.data(), y.data());
            kernels::matmul(a.data(), m, k, b.data(), n, c.data());
            for (std::size_t i = 0; i < m; ++i)
                CHECK(std::abs(y[i] - y_ref[i]) <= 1e-12 * std::max(1.0, std::abs(y_ref[i])));
            for (std::size_t i = 0; i < m * n; ++i)
                CHECK(std::abs(c[i] - c_ref[i]) <= 1e-12 * std::max(1.0, std::abs(c_ref[i])));
        }
    }
}

TEST_CASE("matvec_add accumulates on top of existing values") {
    BackendGuard guard;
    auto rng = seeded_stream(103, 0);
    const std::size_t m = 9, k = 13;
    const auto a = random_vec(rng, m * k);
    const auto x = random_vec(rng, k);
    for (auto backend : available_backends()) {
        kernels::force_backend(backend);
        std::vector<double> y(m, 0.5), expected(m);
        kernels::matvec(a.data(), m, k, x.data(), expected.data());
        kernels::matvec_add(a.data(), m, k, x.data(), y.data());
        for (std::size_t i = 0; i < m; ++i)
            CHECK(y[i] == doctest::Approx(expected[i] + 0.5).epsilon(1e-13));
    }
}

TEST_CASE("backend forcing and detection") {
    BackendGuard guard;
    kernels::force_backend(kernels::Backend::Scalar);
    CHECK(kernels::active_backend() == kernels::Backend::Scalar);
    CHECK(kernels::backend_available(kernels::Backend::Scalar));
    kernels::reset_backend();
    CHECK(kernels::backend_available(kernels::active_backend()));
}
