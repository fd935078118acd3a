#include <doctest.h>

#include "deltaiss/certify.hpp"
#include "deltaiss/error.hpp"
#include "deltaiss/rng.hpp"
#include "random_families.hpp"
#include "reference_systems.hpp"

#include <cmath>

using namespace deltaiss;
using models::Activation;

namespace {

models::GenericRnn zero_dynamics(std::size_t n) {
    models::GenericRnn m;
    m.a = DenseMatrix(n, n);
    m.b = DenseMatrix(n, 1);
    m.c = DenseMatrix(1, n);
    m.d = DenseMatrix(1, 1);
    m.activations.assign(n, Activation::tanh());
    return m;
}

} // namespace

TEST_CASE("certify_theorem2 on the three reference systems") {
    SUBCASE("reservoir network") {
        const auto model = models::esn_to_generic(testref::esn_counterexample());
        const auto outcome = certify::certify_theorem2(model);
        REQUIRE(outcome.certified());
        const auto v = certify::validate_certificate(model, outcome.certificate->p);
        CHECK(v.pass);
        // The published diagonal witness also validates, with its known gap.
        const auto vp = certify::validate_certificate(model, testref::esn_counterexample_p());
        CHECK(vp.pass);
        CHECK(vp.lyapunov_gap == doctest::Approx(-0.3197).epsilon(5e-3 / 0.3197));
    }
    SUBCASE("regression model") {
        const auto model = models::nnarx_to_generic(testref::nnarx_counterexample());
        const auto outcome = certify::certify_theorem2(model);
        REQUIRE(outcome.certified());
        const auto vp = certify::validate_certificate(model, testref::nnarx_counterexample_p());
        CHECK(vp.pass);
        CHECK(vp.lyapunov_gap == doctest::Approx(-0.239).epsilon(5e-3 / 0.239));
    }
    SUBCASE("diagonal-gain class") {
        const auto model = models::hu_to_generic(testref::hu_counterexample());
        const auto outcome = certify::certify_theorem2(model);
        REQUIRE(outcome.certified());
        const auto vp = certify::validate_certificate(model, testref::hu_counterexample_p());
        CHECK(vp.pass);
        CHECK(vp.lyapunov_gap == doctest::Approx(-0.1135).epsilon(5e-3 / 0.1135));
    }
}

TEST_CASE("certify_theorem2 edge cases") {
    SUBCASE("zero dynamics: identity is an acceptable witness") {
        const auto model = zero_dynamics(3);
        const auto outcome = certify::certify_theorem2(model);
        REQUIRE(outcome.certified());
        CHECK(certify::validate_certificate(model, SymmetricMatrix::identity(3)).pass);
    }
    SUBCASE("scalar expansion cannot be certified") {
        models::GenericRnn m;
        m.a = DenseMatrix{{1.5}};
        m.b = DenseMatrix{{1.0}};
        m.c = DenseMatrix{{1.0}};
        m.d = DenseMatrix(1, 1);
        m.activations = {Activation::tanh()};
        const auto outcome = certify::certify_theorem2(m);
        CHECK_FALSE(outcome.certified());
        CHECK(outcome.detail.find("condition not established") != std::string::npos);
    }
}

TEST_CASE("baseline condition reports") {
    SUBCASE("reservoir norm condition fails on the reference system") {
        const auto report = certify::check_esn_norm(testref::esn_counterexample());
        CHECK(report.applicable);
        CHECK_FALSE(report.holds);
        CHECK(report.statistic == doctest::Approx(1.1413).epsilon(1e-3));
        CHECK(report.threshold == 1.0);
    }
    SUBCASE("reservoir norm condition holds for a small-gain network") {
        models::Esn esn;
        esn.w_x = DenseMatrix::identity(2).scaled(0.5);
        esn.w_u = DenseMatrix(2, 1);
        esn.w_y = DenseMatrix(2, 1);
        esn.w_out1 = DenseMatrix(1, 2);
        esn.w_out2 = DenseMatrix(1, 1);
        const auto report = certify::check_esn_norm(esn);
        CHECK(report.holds);
        CHECK(report.statistic == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("halving the effective matrix halves the statistic") {
        auto esn = testref::esn_counterexample();
        // Scale the whole effective matrix by 1/2 through W_x.
        const DenseMatrix target = esn.effective_recurrent().scaled(0.5);
        esn.w_x = target - esn.w_y * esn.w_out1;
        const auto report = certify::check_esn_norm(esn);
        CHECK(report.statistic == doctest::Approx(0.5707).epsilon(2e-3));
        CHECK(report.holds);
    }
    SUBCASE("regression norm product fails on the reference system") {
        const auto report = certify::check_nnarx_norm(testref::nnarx_counterexample());
        CHECK_FALSE(report.holds);
        CHECK(report.statistic == doctest::Approx(0.8801).epsilon(1e-3));
        CHECK(report.threshold == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("zero regressor weights trivially satisfy the product bound") {
        auto nx = testref::nnarx_counterexample();
        nx.w_phi = DenseMatrix(1, 4);
        const auto report = certify::check_nnarx_norm(nx);
        CHECK(report.holds);
        CHECK(report.statistic == 0.0);
    }
    SUBCASE("single-lag product just below one holds") {
        models::ShallowNnarx nx;
        nx.w_0 = DenseMatrix{{0.99}};
        nx.b_0 = DenseMatrix(1, 1);
        nx.w_phi = DenseMatrix{{1.0, 0.0}};
        nx.w_u = DenseMatrix(1, 1);
        nx.b = DenseMatrix(1, 1);
        nx.lag_count = 1;
        const auto report = certify::check_nnarx_norm(nx);
        CHECK(report.holds);
        CHECK(report.statistic == doctest::Approx(0.99).epsilon(1e-12));
    }
    SUBCASE("comparison-radius condition fails on the reference system") {
        const auto report = certify::check_hu(testref::hu_counterexample());
        CHECK_FALSE(report.holds);
        CHECK(report.statistic == doctest::Approx(1.225).epsilon(5e-3 / 1.225));
    }
    SUBCASE("zero recurrence and pure diagonal decay hold") {
        models::HuRnn hu;
        hu.a_hat = DenseMatrix(2, 2);
        hu.e_diag = {0.0, 0.0};
        hu.o_diag = {1.0, 1.0};
        hu.s = {0.0, 0.0};
        hu.activations = {Activation::tanh(), Activation::tanh()};
        CHECK(certify::check_hu(hu).statistic == 0.0);

        hu.e_diag = {0.5, 0.5};
        hu.o_diag = {0.0, 0.0};
        hu.a_hat = DenseMatrix{{3.0, -1.0}, {2.0, 0.5}};
        hu.activations = {Activation::identity(), Activation::identity()};
        const auto report = certify::check_hu(hu);
        CHECK(report.statistic == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(report.holds);
    }
}

TEST_CASE("validate_certificate") {
    const auto model = models::esn_to_generic(testref::esn_counterexample());
    SUBCASE("pattern violation fails even with good eigenvalues") {
        SymmetricMatrix p = testref::esn_counterexample_p();
        p.at(1, 0) = 0.1; // row 0 is a nonlinear coordinate: must stay zero
        const auto v = certify::validate_certificate(model, p);
        CHECK_FALSE(v.pass);
        CHECK(v.pattern_violations == 1);
    }
    SUBCASE("identity on zero dynamics passes") {
        const auto zero = zero_dynamics(2);
        CHECK(certify::validate_certificate(zero, SymmetricMatrix::identity(2)).pass);
    }
    SUBCASE("dimension mismatch throws") {
        CHECK_THROWS_AS(certify::validate_certificate(model, SymmetricMatrix::identity(2)), Error);
    }
}

TEST_CASE("empirical probe on a certified model") {
    const auto model = models::esn_to_generic(testref::esn_counterexample());
    const auto outcome = certify::certify_theorem2(model);
    REQUIRE(outcome.certified());

    certify::ProbeOptions options;
    options.trials = 100;
    options.horizon = 200;
    options.input_magnitude = 1.0;
    options.seed = 7;
    const auto report = certify::empirical_probe(model, options, &*outcome.certificate);

    CHECK(report.max_terminal_divergence < 1e-6);
    CHECK(report.steps_sampled >= 1000);
    CHECK(report.v_increase_events == 0);
}

TEST_CASE("probe is deterministic in the seed") {
    const auto model = models::esn_to_generic(testref::esn_counterexample());
    certify::ProbeOptions options;
    options.trials = 5;
    options.horizon = 50;
    options.seed = 11;
    const auto a = certify::empirical_probe(model, options);
    const auto b = certify::empirical_probe(model, options);
    CHECK(a.max_terminal_divergence == b.max_terminal_divergence);
}

TEST_CASE("baseline-satisfying families always certify (subset relations)") {
    SUBCASE("reservoir family") {
        auto rng = seeded_stream(41, 0);
        std::uniform_real_distribution<double> unit(0.2, 1.0);
        int certified = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const auto esn = testref::random_esn_with_norm(rng, 0.95 * unit(rng));
            const auto model = models::esn_to_generic(esn);
            if (certify::certify_theorem2(model).certified()) ++certified;
        }
        CHECK(certified == 100);
    }
    SUBCASE("regression family") {
        auto rng = seeded_stream(42, 0);
        std::uniform_real_distribution<double> unit(0.2, 1.0);
        int certified = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t lags = 1 + trial % 3;
            const auto nx = testref::random_nnarx_with_product(rng, 0.95 * unit(rng), lags);
            const auto model = models::nnarx_to_generic(nx);
            if (certify::certify_theorem2(model).certified()) ++certified;
        }
        CHECK(certified == 100);
    }
    SUBCASE("diagonal-gain family") {
        auto rng = seeded_stream(43, 0);
        std::uniform_real_distribution<double> unit(0.2, 1.0);
        int certified = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const auto hu = testref::random_hu_with_radius(rng, 0.95 * unit(rng));
            const auto model = models::hu_to_generic(hu);
            if (certify::certify_theorem2(model).certified()) ++certified;
        }
        CHECK(certified == 100);
    }
}

TEST_CASE("the reference systems beat their baselines (strictly less conservative)") {
    CHECK_FALSE(certify::check_esn_norm(testref::esn_counterexample()).holds);
    CHECK(certify::certify_theorem2(models::esn_to_generic(testref::esn_counterexample()))
              .certified());

    CHECK_FALSE(certify::check_nnarx_norm(testref::nnarx_counterexample()).holds);
    CHECK(certify::certify_theorem2(models::nnarx_to_generic(testref::nnarx_counterexample()))
              .certified());

    CHECK_FALSE(certify::check_hu(testref::hu_counterexample()).holds);
    CHECK(certify::certify_theorem2(models::hu_to_generic(testref::hu_counterexample()))
              .certified());
}
