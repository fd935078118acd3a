#include <doctest.h>

#include "deltaiss/eig.hpp"
#include "deltaiss/error.hpp"
#include "deltaiss/models.hpp"
#include "deltaiss/rng.hpp"
#include "reference_systems.hpp"

#include <algorithm>
#include <cmath>

using namespace deltaiss;

namespace {

SymmetricMatrix random_symmetric(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    SymmetricMatrix s(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) s.at(i, j) = dist(rng);
    return s;
}

DenseMatrix random_dense(std::mt19937_64& rng, std::size_t r, std::size_t c, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    DenseMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
    return m;
}

double reconstruction_error(const SymmetricMatrix& s, const SymEig& eig) {
    const std::size_t n = s.n();
    DenseMatrix scaled(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            scaled(i, j) = eig.eigenvectors(i, j) * eig.eigenvalues[j];
    const DenseMatrix rebuilt = scaled * eig.eigenvectors.transposed();
    return (rebuilt - s.to_dense()).frobenius_norm();
}

} // namespace

TEST_CASE("sym_eig on fixed cases") {
    SUBCASE("identity") {
        const auto eig = sym_eig(SymmetricMatrix::identity(3));
        for (double v : eig.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("diagonal, sorted ascending") {
        const auto eig = sym_eig(SymmetricMatrix::diagonal({2.0, -1.0}));
        CHECK(eig.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(eig.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("symmetry-forced pair") {
        SymmetricMatrix s(2);
        s.at(1, 0) = 1.0;
        const auto eig = sym_eig(s);
        CHECK(eig.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(eig.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("non-finite input rejected") {
        SymmetricMatrix s(2);
        s.at(0, 0) = std::nan("");
        CHECK_THROWS_AS(sym_eig(s), Error);
    }
}

TEST_CASE("sym_eig reconstruction and orthonormality on random matrices") {
    auto rng = seeded_stream(1, 0);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng() % 49); // up to 50
        const SymmetricMatrix s = random_symmetric(rng, n, 3.0);
        const auto eig = sym_eig(s);

        CHECK(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
        CHECK(reconstruction_error(s, eig) <= 1e-10 * std::max(1.0, s.frobenius_norm()));

        const DenseMatrix gram = eig.eigenvectors.transposed() * eig.eigenvectors;
        CHECK(gram.max_abs_diff(DenseMatrix::identity(n)) < 1e-12);
    }
}

TEST_CASE("spectral_norm fixed values") {
    SUBCASE("identity has norm one") {
        CHECK(spectral_norm(DenseMatrix::identity(5)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("effective recurrent matrix of the reference network") {
        const auto esn = testref::esn_counterexample();
        CHECK(spectral_norm(esn.effective_recurrent()) ==
              doctest::Approx(1.1413).epsilon(1e-3));
    }
    SUBCASE("norm product of the reference regression model") {
        const auto nx = testref::nnarx_counterexample();
        CHECK(spectral_norm(nx.w_0) * spectral_norm(nx.w_phi) ==
              doctest::Approx(0.8801).epsilon(1e-3));
    }
    SUBCASE("transpose invariance") {
        auto rng = seeded_stream(2, 0);
        for (int trial = 0; trial < 20; ++trial) {
            const DenseMatrix m = random_dense(rng, 3 + rng() % 8, 3 + rng() % 8, 2.0);
            const double a = spectral_norm(m);
            const double b = spectral_norm(m.transposed());
            CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, a));
        }
    }
}

TEST_CASE("spectral_radius fixed values and norm bound") {
    SUBCASE("nilpotent") {
        CHECK(spectral_radius(DenseMatrix{{0.0, 1.0}, {0.0, 0.0}}) ==
              doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("identity") {
        CHECK(spectral_radius(DenseMatrix::identity(4)) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("comparison matrix of the diagonal-class reference system") {
        const auto hu = testref::hu_counterexample();
        CHECK(spectral_radius(hu.comparison_matrix()) == doctest::Approx(1.225).epsilon(5e-3));
    }
    SUBCASE("non-square rejected") {
        CHECK_THROWS_AS(spectral_radius(DenseMatrix(2, 3)), Error);
    }
    SUBCASE("radius never exceeds the spectral norm") {
        auto rng = seeded_stream(3, 0);
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t n = 2 + rng() % 7;
            const DenseMatrix m = random_dense(rng, n, n, 2.0);
            CHECK(spectral_radius(m) <= spectral_norm(m) * (1.0 + 1e-9) + 1e-12);
        }
    }
}

TEST_CASE("is_positive_definite basics and Cholesky oracle") {
    SUBCASE("identity") {
        const auto report = is_positive_definite(SymmetricMatrix::identity(2));
        CHECK(report.positive_definite);
        CHECK(report.lambda_min == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("indefinite diagonal") {
        const auto report = is_positive_definite(SymmetricMatrix::diagonal({1.0, -1.0}));
        CHECK_FALSE(report.positive_definite);
        CHECK(report.lambda_min == doctest::Approx(-1.0).epsilon(1e-14));
    }
    SUBCASE("published reservoir witness is positive definite") {
        CHECK(is_positive_definite(testref::esn_counterexample_p()).positive_definite);
    }
    SUBCASE("agreement with Cholesky on 1000 random matrices") {
        auto rng = seeded_stream(4, 0);
        int disagreements = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t n = 1 + rng() % 8;
            SymmetricMatrix s = random_symmetric(rng, n, 1.5);
            // Shift some of them into solidly definite territory.
            if (trial % 3 == 0)
                for (std::size_t i = 0; i < n; ++i) s.at(i, i) += 2.0 * static_cast<double>(n);
            const auto report = is_positive_definite(s);
            if (std::abs(report.lambda_min) < 1e-10) continue; // borderline either way
            DenseMatrix l;
            if (cholesky(s, l) != report.positive_definite) ++disagreements;
        }
        CHECK(disagreements == 0);
    }
}

TEST_CASE("spd_inverse and solve_linear") {
    auto rng = seeded_stream(5, 0);
    SUBCASE("spd inverse round-trips") {
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t n = 2 + rng() % 6;
            SymmetricMatrix s = random_symmetric(rng, n, 1.0);
            for (std::size_t i = 0; i < n; ++i) s.at(i, i) += 3.0 * static_cast<double>(n);
            const SymmetricMatrix inv = spd_inverse(s);
            CHECK((s.to_dense() * inv.to_dense()).max_abs_diff(DenseMatrix::identity(n)) < 1e-10);
        }
    }
    SUBCASE("general solve round-trips") {
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t n = 2 + rng() % 6;
            DenseMatrix a = random_dense(rng, n, n, 1.0);
            for (std::size_t i = 0; i < n; ++i) a(i, i) += 4.0;
            const DenseMatrix b = random_dense(rng, n, 3, 1.0);
            const DenseMatrix x = solve_linear(a, b);
            CHECK((a * x).max_abs_diff(b) < 1e-10);
        }
    }
    SUBCASE("singular matrix rejected") {
        CHECK_THROWS_AS(solve_linear(DenseMatrix(2, 2), DenseMatrix::identity(2)), Error);
    }
}
