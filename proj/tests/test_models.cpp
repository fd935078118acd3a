#include <doctest.h>

#include "deltaiss/error.hpp"
#include "deltaiss/models.hpp"
#include "deltaiss/rng.hpp"
#include "deltaiss/sim.hpp"
#include "reference_systems.hpp"

#include <cmath>

using namespace deltaiss;
using models::Activation;

namespace {

DenseMatrix random_dense(std::mt19937_64& rng, std::size_t r, std::size_t c, double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    DenseMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
    return m;
}

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

// Direct recursion of the reservoir equations, no lifting.
DenseMatrix esn_oracle_outputs(const models::Esn& esn, const std::vector<double>& chi0,
                               const std::vector<double>& z0, const DenseMatrix& inputs) {
    const std::size_t nu = esn.reservoir_dim();
    const std::size_t m = esn.input_dim();
    const std::size_t l = esn.output_dim();
    const auto acts = esn.reservoir_activations();
    std::vector<double> chi = chi0;
    std::vector<double> z = z0; // u(k-1)
    DenseMatrix outputs(inputs.rows(), l);
    for (std::size_t k = 0; k < inputs.rows(); ++k) {
        std::vector<double> y(l, 0.0);
        for (std::size_t i = 0; i < l; ++i) {
            for (std::size_t j = 0; j < nu; ++j) y[i] += esn.w_out1(i, j) * chi[j];
            for (std::size_t j = 0; j < m; ++j) y[i] += esn.w_out2(i, j) * z[j];
            outputs(k, i) = y[i];
        }
        std::vector<double> pre(nu, 0.0);
        for (std::size_t i = 0; i < nu; ++i) {
            for (std::size_t j = 0; j < nu; ++j) pre[i] += esn.w_x(i, j) * chi[j];
            for (std::size_t j = 0; j < m; ++j) pre[i] += esn.w_u(i, j) * inputs(k, j);
            for (std::size_t j = 0; j < l; ++j) pre[i] += esn.w_y(i, j) * y[j];
        }
        for (std::size_t i = 0; i < nu; ++i) chi[i] = acts[i].eval(pre[i]);
        for (std::size_t j = 0; j < m; ++j) z[j] = inputs(k, j);
    }
    return outputs;
}

// Direct recursion maintaining the regressor window explicitly.
DenseMatrix nnarx_oracle_outputs(const models::ShallowNnarx& nx, std::vector<double> reg,
                                 std::vector<double> hidden, const DenseMatrix& inputs) {
    const std::size_t m = nx.input_dim();
    const std::size_t l = nx.output_dim();
    const std::size_t nu = nx.hidden_dim();
    DenseMatrix outputs(inputs.rows(), l);
    for (std::size_t k = 0; k < inputs.rows(); ++k) {
        std::vector<double> y(l, 0.0);
        for (std::size_t i = 0; i < l; ++i) {
            y[i] = nx.b_0(i, 0);
            for (std::size_t j = 0; j < nu; ++j) y[i] += nx.w_0(i, j) * hidden[j];
            outputs(k, i) = y[i];
        }
        // Full regressor [register; y(k)].
        std::vector<double> phi = reg;
        phi.insert(phi.end(), y.begin(), y.end());
        std::vector<double> pre(nu, 0.0);
        for (std::size_t i = 0; i < nu; ++i) {
            pre[i] = nx.b(i, 0);
            for (std::size_t j = 0; j < phi.size(); ++j) pre[i] += nx.w_phi(i, j) * phi[j];
            for (std::size_t j = 0; j < m; ++j) pre[i] += nx.w_u(i, j) * inputs(k, j);
        }
        for (std::size_t i = 0; i < nu; ++i) hidden[i] = nx.hidden_activation.eval(pre[i]);
        // Slide the window: drop the oldest (l+m) samples, append y(k), u(k).
        if (nx.lag_count >= 2) {
            reg.erase(reg.begin(), reg.begin() + static_cast<long>(l + m));
            reg.insert(reg.end(), y.begin(), y.end());
        } else {
            reg.clear();
        }
        for (std::size_t j = 0; j < m; ++j) reg.push_back(inputs(k, j));
    }
    return outputs;
}

DenseMatrix hu_oracle_states(const models::HuRnn& hu, std::vector<double> x, std::size_t horizon) {
    const std::size_t n = hu.dim();
    DenseMatrix states(horizon + 1, n);
    for (std::size_t i = 0; i < n; ++i) states(0, i) = x[i];
    for (std::size_t k = 0; k < horizon; ++k) {
        std::vector<double> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            double pre = hu.s[i];
            for (std::size_t j = 0; j < n; ++j) pre += hu.a_hat(i, j) * x[j];
            next[i] = hu.e_diag[i] * x[i] + hu.o_diag[i] * hu.activations[i].eval(pre);
        }
        x = next;
        for (std::size_t i = 0; i < n; ++i) states(k + 1, i) = x[i];
    }
    return states;
}

models::Esn random_esn(std::mt19937_64& rng, std::size_t nu, std::size_t m, std::size_t l) {
    models::Esn esn;
    const double s = 0.8 / std::sqrt(static_cast<double>(nu));
    esn.w_x = random_dense(rng, nu, nu, s);
    esn.w_u = random_dense(rng, nu, m, 0.5);
    esn.w_y = random_dense(rng, nu, l, 0.5);
    esn.w_out1 = random_dense(rng, l, nu, 0.5);
    esn.w_out2 = random_dense(rng, l, m, 0.5);
    esn.reservoir_activation = Activation::tanh();
    return esn;
}

models::ShallowNnarx random_nnarx(std::mt19937_64& rng, std::size_t nu, std::size_t m,
                                  std::size_t l, std::size_t lags) {
    models::ShallowNnarx nx;
    nx.w_0 = random_dense(rng, l, nu, 0.6);
    nx.b_0 = random_dense(rng, l, 1, 0.3);
    nx.w_phi = random_dense(rng, nu, (l + m) * lags, 0.4);
    nx.w_u = random_dense(rng, nu, m, 0.5);
    nx.b = random_dense(rng, nu, 1, 0.3);
    nx.lag_count = lags;
    nx.hidden_activation = Activation::tanh();
    return nx;
}

} // namespace

TEST_CASE("lipschitz_weights") {
    models::GenericRnn model;
    model.a = DenseMatrix::identity(2);
    model.b = DenseMatrix(2, 1);
    model.c = DenseMatrix(1, 2);
    model.d = DenseMatrix(1, 1);

    SUBCASE("all identity") {
        model.activations = {Activation::identity(), Activation::identity()};
        const auto lw = models::lipschitz_weights(model);
        CHECK(lw.nonlinear.empty());
        CHECK(lw.w.max_abs_diff(DenseMatrix::identity(2)) == 0.0);
    }
    SUBCASE("all tanh") {
        model.activations = {Activation::tanh(), Activation::tanh()};
        const auto lw = models::lipschitz_weights(model);
        CHECK(lw.nonlinear == std::vector<std::size_t>{0, 1});
        CHECK(lw.w.max_abs_diff(DenseMatrix::identity(2)) == 0.0);
    }
    SUBCASE("sigmoid and identity") {
        model.activations = {Activation::sigmoid(), Activation::identity()};
        const auto lw = models::lipschitz_weights(model);
        CHECK(lw.nonlinear == std::vector<std::size_t>{0});
        CHECK(lw.w(0, 0) == 0.25);
        CHECK(lw.w(1, 1) == 1.0);
    }
}

TEST_CASE("esn_to_generic structure") {
    SUBCASE("reference system blocks") {
        const auto esn = testref::esn_counterexample();
        const auto g = models::esn_to_generic(esn);
        REQUIRE(g.state_dim() == 3);
        CHECK(g.a.block(0, 0, 2, 2).max_abs_diff(esn.effective_recurrent()) < 1e-15);
        CHECK(g.a(0, 2) == doctest::Approx(-0.2919 * -0.1768).epsilon(1e-12));
        CHECK(g.a(1, 2) == doctest::Approx(0.3018 * -0.1768).epsilon(1e-12));
        CHECK(g.a(2, 0) == 0.0);
        CHECK(g.a(2, 1) == 0.0);
        CHECK(g.a(2, 2) == 0.0);
        CHECK(g.d.max_abs() == 0.0);
        CHECK(g.activations[0].kind == Activation::Kind::Tanh);
        CHECK(g.activations[2].kind == Activation::Kind::Identity);
    }
    SUBCASE("all-zero network") {
        models::Esn esn;
        esn.w_x = DenseMatrix(2, 2);
        esn.w_u = DenseMatrix(2, 1);
        esn.w_y = DenseMatrix(2, 1);
        esn.w_out1 = DenseMatrix(1, 2);
        esn.w_out2 = DenseMatrix(1, 1);
        const auto g = models::esn_to_generic(esn);
        CHECK(g.a.max_abs() == 0.0);
        CHECK(g.b(2, 0) == 1.0);
        CHECK(g.c.max_abs() == 0.0);
    }
    SUBCASE("readout row equals [W_out1 W_out2]") {
        auto rng = seeded_stream(21, 0);
        const auto esn = random_esn(rng, 4, 2, 2);
        const auto g = models::esn_to_generic(esn);
        CHECK(g.c.block(0, 0, 2, 4).max_abs_diff(esn.w_out1) == 0.0);
        CHECK(g.c.block(0, 4, 2, 2).max_abs_diff(esn.w_out2) == 0.0);
    }
}

TEST_CASE("nnarx_to_generic structure") {
    SUBCASE("reference system: four states, hidden row") {
        const auto nx = testref::nnarx_counterexample();
        const auto g = models::nnarx_to_generic(nx);
        REQUIRE(g.state_dim() == 4);
        const DenseMatrix atil = models::a_tilde(g);
        CHECK(atil(3, 0) == doctest::Approx(-0.2130));
        CHECK(atil(3, 1) == doctest::Approx(-0.8657));
        CHECK(atil(3, 2) == doctest::Approx(-1.0431));
        CHECK(atil(3, 3) == doctest::Approx(-0.2701 * 0.6293));
        // Shift row and delayed-output row.
        CHECK(g.a(0, 2) == 1.0);
        CHECK(g.a(1, 3) == doctest::Approx(0.6293));
    }
    SUBCASE("zero weights make the output constant after the first step") {
        auto rng = seeded_stream(22, 0);
        auto nx = random_nnarx(rng, 2, 1, 1, 2);
        nx.w_phi = DenseMatrix(2, 4);
        nx.w_u = DenseMatrix(2, 1);
        const auto g = models::nnarx_to_generic(nx);
        // Hidden rows of A lose all state coupling.
        CHECK(g.a.block(3, 0, 2, 5).max_abs() == 0.0);

        DenseMatrix inputs(6, 2);
        for (std::size_t k = 0; k < 6; ++k) {
            inputs(k, 0) = 0.3 * static_cast<double>(k);
            inputs(k, 1) = 1.0;
        }
        const auto traj = sim::simulate(g, std::vector<double>(5, 0.0), inputs);
        for (std::size_t k = 2; k < 6; ++k)
            CHECK(traj.outputs(k, 0) == doctest::Approx(traj.outputs(1, 0)).epsilon(1e-14));
    }
    SUBCASE("direct recursion matches the lifted model for 50 steps") {
        auto rng = seeded_stream(23, 0);
        const auto nx = random_nnarx(rng, 2, 1, 1, 2);
        const auto g = models::nnarx_to_generic(nx);
        const std::size_t reg = g.state_dim() - 2;

        DenseMatrix raw_inputs(50, 1);
        for (std::size_t k = 0; k < 50; ++k) raw_inputs(k, 0) = std::sin(0.37 * k);
        DenseMatrix ext_inputs(50, 2);
        for (std::size_t k = 0; k < 50; ++k) {
            ext_inputs(k, 0) = raw_inputs(k, 0);
            ext_inputs(k, 1) = 1.0; // the constant channel is the caller's job
        }
        const auto reg0 = random_vec(rng, reg, 0.5);
        const auto hid0 = random_vec(rng, 2, 0.5);
        std::vector<double> x0 = reg0;
        x0.insert(x0.end(), hid0.begin(), hid0.end());

        const auto traj = sim::simulate(g, x0, ext_inputs);
        const auto oracle = nnarx_oracle_outputs(nx, reg0, hid0, raw_inputs);
        CHECK(traj.outputs.max_abs_diff(oracle) < 1e-12);
    }
}

TEST_CASE("hu_to_generic structure and guards") {
    SUBCASE("reference system embeds with A = A_hat") {
        const auto hu = testref::hu_counterexample();
        const auto g = models::hu_to_generic(hu);
        CHECK(g.a.max_abs_diff(hu.a_hat) == 0.0);
        CHECK(g.c.max_abs_diff(DenseMatrix::identity(2)) == 0.0);
    }
    SUBCASE("zero recurrence gives zero A") {
        models::HuRnn hu;
        hu.e_diag = {0.0};
        hu.o_diag = {1.0};
        hu.a_hat = DenseMatrix(1, 1);
        hu.s = {0.4};
        hu.activations = {Activation::tanh()};
        CHECK(models::hu_to_generic(hu).a.max_abs() == 0.0);
    }
    SUBCASE("nonzero E is unsupported") {
        auto hu = testref::hu_counterexample();
        hu.e_diag[0] = 0.2;
        CHECK_THROWS_AS(models::hu_to_generic(hu), Error);
    }
    SUBCASE("o != 1 on a nonlinear coordinate is unsupported") {
        auto hu = testref::hu_counterexample();
        hu.o_diag[1] = 0.7;
        CHECK_THROWS_AS(models::hu_to_generic(hu), Error);
    }
    SUBCASE("direct recursion matches the lifted model") {
        auto rng = seeded_stream(24, 0);
        models::HuRnn hu;
        hu.a_hat = random_dense(rng, 3, 3, 0.7);
        hu.e_diag = {0.0, 0.0, 0.0};
        hu.o_diag = {1.0, 1.0, 0.5}; // scaling allowed on the identity coordinate
        hu.s = random_vec(rng, 3, 0.5);
        hu.activations = {Activation::tanh(), Activation::tanh(), Activation::identity()};
        const auto g = models::hu_to_generic(hu);

        DenseMatrix ones(50, 1);
        for (std::size_t k = 0; k < 50; ++k) ones(k, 0) = 1.0;
        const auto x0 = random_vec(rng, 3, 0.8);
        const auto traj = sim::simulate(g, x0, ones);
        const auto oracle = hu_oracle_states(hu, x0, 50);
        CHECK(traj.states.max_abs_diff(oracle) < 1e-12);
    }
}

TEST_CASE("validate reports structural issues") {
    models::GenericRnn model;
    model.a = DenseMatrix::identity(2);
    model.b = DenseMatrix(2, 1);
    model.c = DenseMatrix(1, 2);
    model.d = DenseMatrix(1, 1);
    model.activations = {Activation::tanh(), Activation::identity()};
    CHECK(models::validate(model).empty());

    SUBCASE("zero Lipschitz constant") {
        model.activations[0].lipschitz = 0.0;
        CHECK(models::validate(model).size() == 1);
    }
    SUBCASE("wrong B rows") {
        model.b = DenseMatrix(3, 1);
        CHECK(models::validate(model).size() == 1);
    }
    SUBCASE("non-finite entry") {
        model.a(0, 1) = std::nan("");
        CHECK(models::validate(model).size() == 1);
    }
}

TEST_CASE("conversion fidelity across 50 random instances per class") {
    auto rng = seeded_stream(25, 0);
    const std::size_t horizon = 100;

    for (int trial = 0; trial < 50; ++trial) {
        // Reservoir network.
        {
            const std::size_t nu = 2 + rng() % 4, m = 1 + rng() % 2, l = 1 + rng() % 2;
            const auto esn = random_esn(rng, nu, m, l);
            const auto g = models::esn_to_generic(esn);
            DenseMatrix inputs(horizon, m);
            for (std::size_t k = 0; k < horizon; ++k)
                for (std::size_t j = 0; j < m; ++j) inputs(k, j) = std::sin(0.2 * k + j);
            const auto chi0 = random_vec(rng, nu, 0.8);
            const auto z0 = random_vec(rng, m, 0.8);
            std::vector<double> x0 = chi0;
            x0.insert(x0.end(), z0.begin(), z0.end());
            const auto traj = sim::simulate(g, x0, inputs);
            const auto oracle = esn_oracle_outputs(esn, chi0, z0, inputs);
            CHECK(traj.outputs.max_abs_diff(oracle) < 1e-12);
        }
        // Regression model.
        {
            const std::size_t nu = 1 + rng() % 3, m = 1 + rng() % 2, l = 1 + rng() % 2;
            const std::size_t lags = 1 + rng() % 3;
            const auto nx = random_nnarx(rng, nu, m, l, lags);
            const auto g = models::nnarx_to_generic(nx);
            const std::size_t reg = g.state_dim() - nu;
            DenseMatrix ext(horizon, m + 1);
            for (std::size_t k = 0; k < horizon; ++k) {
                for (std::size_t j = 0; j < m; ++j) ext(k, j) = std::cos(0.15 * k + j);
                ext(k, m) = 1.0;
            }
            const auto reg0 = random_vec(rng, reg, 0.5);
            const auto hid0 = random_vec(rng, nu, 0.5);
            std::vector<double> x0 = reg0;
            x0.insert(x0.end(), hid0.begin(), hid0.end());
            const auto traj = sim::simulate(g, x0, ext);
            const auto oracle = nnarx_oracle_outputs(nx, reg0, hid0, ext.block(0, 0, horizon, m));
            CHECK(traj.outputs.max_abs_diff(oracle) < 1e-12);
        }
        // Diagonal-gain class.
        {
            const std::size_t n = 2 + rng() % 4;
            models::HuRnn hu;
            hu.a_hat = random_dense(rng, n, n, 0.6);
            hu.e_diag.assign(n, 0.0);
            hu.o_diag.assign(n, 1.0);
            hu.s = random_vec(rng, n, 0.5);
            hu.activations.assign(n, Activation::tanh());
            const auto g = models::hu_to_generic(hu);
            DenseMatrix ones(horizon, 1);
            for (std::size_t k = 0; k < horizon; ++k) ones(k, 0) = 1.0;
            const auto x0 = random_vec(rng, n, 0.8);
            const auto traj = sim::simulate(g, x0, ones);
            const auto oracle = hu_oracle_states(hu, x0, horizon);
            CHECK(traj.states.max_abs_diff(oracle) < 1e-12);
        }
    }
}
