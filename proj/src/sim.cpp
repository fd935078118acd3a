#include "deltaiss/sim.hpp"

#include "deltaiss/error.hpp"
#include "deltaiss/kernels.hpp"
#include "deltaiss/rng.hpp"

#include <algorithm>
#include <cmath>

namespace deltaiss::sim {

namespace {

void step_state(const models::GenericRnn& model, const double* x, const double* u,
                double* pre, double* next, std::size_t step) {
    const std::size_t n = model.state_dim();
    kernels::matvec(model.a.data(), n, n, x, pre);
    kernels::matvec_add(model.b.data(), n, model.input_dim(), u, pre);
    for (std::size_t i = 0; i < n; ++i) {
        next[i] = model.activations[i].eval(pre[i]);
        if (!std::isfinite(next[i]))
            fail(ErrorKind::Diverged,
                 "simulation diverged at step " + std::to_string(step));
    }
}

} // namespace

Trajectory simulate(const models::GenericRnn& model, const std::vector<double>& x0,
                    const DenseMatrix& inputs) {
    const std::size_t n = model.state_dim();
    const std::size_t m = model.input_dim();
    const std::size_t l = model.output_dim();
    if (x0.size() != n)
        fail(ErrorKind::Dimension, "simulate: initial state dimension mismatch");
    if (inputs.cols() != m)
        fail(ErrorKind::Dimension, "simulate: input dimension mismatch");
    if (model.activations.size() != n)
        fail(ErrorKind::Dimension, "simulate: activation count mismatch");

    const std::size_t horizon = inputs.rows();
    Trajectory t;
    t.inputs = inputs;
    t.states = DenseMatrix(horizon + 1, n);
    t.outputs = DenseMatrix(horizon, l);

    std::vector<double> x = x0;
    std::vector<double> pre(n), next(n), y(l);
    for (std::size_t i = 0; i < n; ++i) t.states(0, i) = x[i];

    for (std::size_t k = 0; k < horizon; ++k) {
        const double* u = inputs.row_ptr(k);
        kernels::matvec(model.c.data(), l, n, x.data(), y.data());
        kernels::matvec_add(model.d.data(), l, m, u, y.data());
        for (std::size_t i = 0; i < l; ++i) t.outputs(k, i) = y[i];

        step_state(model, x.data(), u, pre.data(), next.data(), k);
        x = next;
        for (std::size_t i = 0; i < n; ++i) t.states(k + 1, i) = x[i];
    }
    return t;
}

double DivergenceSeries::max() const {
    double m = 0.0;
    for (double d : distances) m = std::max(m, d);
    return m;
}

DivergenceSeries simulate_pair(const models::GenericRnn& model,
                               const std::vector<double>& x01, const std::vector<double>& x02,
                               const DenseMatrix& u1, const DenseMatrix& u2) {
    if (u1.rows() != u2.rows())
        fail(ErrorKind::Dimension, "simulate_pair: input sequences must have equal length");
    const Trajectory t1 = simulate(model, x01, u1);
    const Trajectory t2 = simulate(model, x02, u2);
    const std::size_t n = model.state_dim();
    DivergenceSeries series;
    series.distances.resize(t1.states.rows());
    for (std::size_t k = 0; k < t1.states.rows(); ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = t1.states(k, i) - t2.states(k, i);
            s += d * d;
        }
        series.distances[k] = std::sqrt(s);
    }
    return series;
}

std::vector<double> mprs(double low, double high, int levels, int hold_steps, int length,
                         std::uint64_t seed) {
    if (!(low < high))
        fail(ErrorKind::InvalidInput, "mprs: low must be below high");
    if (levels < 2)
        fail(ErrorKind::InvalidInput, "mprs: need at least two levels");
    if (hold_steps < 1)
        fail(ErrorKind::InvalidInput, "mprs: hold_steps must be positive");

    std::mt19937_64 rng(splitmix64(seed));
    std::uniform_int_distribution<int> pick(0, levels - 1);
    const double step = (high - low) / static_cast<double>(levels - 1);

    std::vector<double> signal(static_cast<std::size_t>(std::max(length, 0)));
    double level = 0.0;
    for (std::size_t k = 0; k < signal.size(); ++k) {
        if (k % static_cast<std::size_t>(hold_steps) == 0)
            level = low + step * pick(rng);
        signal[k] = level;
    }
    return signal;
}

namespace {

// Householder QR least squares: minimizes ||A x - b|| column-wise for every
// right-hand side. Reports rank deficiency through the R diagonal.
DenseMatrix qr_least_squares(DenseMatrix a, DenseMatrix b, bool& rank_deficient) {
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    rank_deficient = false;
    double max_diag = 0.0;

    for (std::size_t k = 0; k < cols; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < rows; ++i) norm += a(i, k) * a(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) { rank_deficient = true; continue; }
        const double alpha = a(k, k) > 0.0 ? -norm : norm;
        std::vector<double> v(rows - k);
        v[0] = a(k, k) - alpha;
        for (std::size_t i = k + 1; i < rows; ++i) v[i - k] = a(i, k);
        const double vn2 = kernels::dot(v.data(), v.data(), v.size());
        a(k, k) = alpha;
        for (std::size_t i = k + 1; i < rows; ++i) a(i, k) = 0.0;
        if (vn2 == 0.0) continue;
        for (std::size_t j = k + 1; j < cols; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < rows; ++i) dot += v[i - k] * a(i, j);
            const double f = 2.0 * dot / vn2;
            for (std::size_t i = k; i < rows; ++i) a(i, j) -= f * v[i - k];
        }
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < rows; ++i) dot += v[i - k] * b(i, j);
            const double f = 2.0 * dot / vn2;
            for (std::size_t i = k; i < rows; ++i) b(i, j) -= f * v[i - k];
        }
        max_diag = std::max(max_diag, std::abs(alpha));
    }

    for (std::size_t k = 0; k < cols; ++k)
        if (std::abs(a(k, k)) <= 1e-12 * std::max(1.0, max_diag)) rank_deficient = true;
    if (rank_deficient) return DenseMatrix();

    DenseMatrix x(cols, b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t ii = cols; ii-- > 0;) {
            double sum = b(ii, j);
            for (std::size_t p = ii + 1; p < cols; ++p) sum -= a(ii, p) * x(p, j);
            x(ii, j) = sum / a(ii, ii);
        }
    }
    return x;
}

} // namespace

ReadoutFit train_esn_readout(const models::Esn& reservoir, const Dataset& data, int washout,
                             double ridge) {
    const std::size_t nu = reservoir.reservoir_dim();
    const std::size_t m = reservoir.input_dim();
    const std::size_t l = reservoir.output_dim();
    const std::size_t samples = data.inputs.rows();
    if (data.outputs.rows() != samples)
        fail(ErrorKind::Dimension, "train_esn_readout: input/output length mismatch");
    if (data.inputs.cols() != m || data.outputs.cols() != l)
        fail(ErrorKind::Dimension, "train_esn_readout: dataset width mismatch");
    if (washout < 1 || static_cast<std::size_t>(washout) >= samples)
        fail(ErrorKind::InvalidInput, "train_esn_readout: washout must be in [1, length)");

    // Teacher-forced reservoir run: the measured output drives W_y.
    DenseMatrix chi(samples + 1, nu);
    std::vector<double> x(nu, 0.0), pre(nu);
    for (std::size_t k = 0; k < samples; ++k) {
        kernels::matvec(reservoir.w_x.data(), nu, nu, x.data(), pre.data());
        kernels::matvec_add(reservoir.w_u.data(), nu, m, data.inputs.row_ptr(k), pre.data());
        kernels::matvec_add(reservoir.w_y.data(), nu, l, data.outputs.row_ptr(k), pre.data());
        for (std::size_t i = 0; i < nu; ++i) {
            x[i] = reservoir.reservoir_activation.eval(pre[i]);
            chi(k + 1, i) = x[i];
        }
    }

    // Regression rows k = washout .. samples-1:
    //   y(k) = W_out1 chi(k) + W_out2 u(k-1).
    const std::size_t rows = samples - static_cast<std::size_t>(washout);
    const std::size_t unknowns = nu + m;
    DenseMatrix reg(rows, unknowns);
    DenseMatrix target(rows, l);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t k = r + static_cast<std::size_t>(washout);
        for (std::size_t i = 0; i < nu; ++i) reg(r, i) = chi(k, i);
        for (std::size_t i = 0; i < m; ++i) reg(r, nu + i) = data.inputs(k - 1, i);
        for (std::size_t i = 0; i < l; ++i) target(r, i) = data.outputs(k, i);
    }

    ReadoutFit fit;
    double lambda = ridge;
    DenseMatrix solution;
    for (int attempt = 0; attempt < 2; ++attempt) {
        DenseMatrix a = reg;
        DenseMatrix b = target;
        if (lambda > 0.0) { // ridge rows sqrt(lambda) I appended below the regressor
            DenseMatrix a2(rows + unknowns, unknowns);
            DenseMatrix b2(rows + unknowns, l);
            a2.set_block(0, 0, a);
            b2.set_block(0, 0, b);
            const double sq = std::sqrt(lambda);
            for (std::size_t i = 0; i < unknowns; ++i) a2(rows + i, i) = sq;
            a = a2;
            b = b2;
        }
        bool deficient = false;
        solution = qr_least_squares(std::move(a), std::move(b), deficient);
        if (!deficient) break;
        fit.rank_deficient = true;
        lambda = std::max(lambda, 1e-8);
    }
    if (solution.empty())
        fail(ErrorKind::Singular, "train_esn_readout: regression remained rank deficient");

    fit.ridge_used = lambda;
    fit.w_out1 = DenseMatrix(l, nu);
    fit.w_out2 = DenseMatrix(l, m);
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < nu; ++j) fit.w_out1(i, j) = solution(j, i);
        for (std::size_t j = 0; j < m; ++j) fit.w_out2(i, j) = solution(nu + j, i);
    }
    return fit;
}

double fit_percent(const DenseMatrix& y_true, const DenseMatrix& y_model) {
    if (y_true.rows() != y_model.rows() || y_true.cols() != y_model.cols())
        fail(ErrorKind::Dimension, "fit_percent: sequence shape mismatch");
    const std::size_t rows = y_true.rows();
    const std::size_t cols = y_true.cols();
    if (rows == 0)
        fail(ErrorKind::InvalidInput, "fit_percent: empty sequences");

    std::vector<double> mean(cols, 0.0);
    for (std::size_t k = 0; k < rows; ++k)
        for (std::size_t i = 0; i < cols; ++i) mean[i] += y_true(k, i);
    for (double& v : mean) v /= static_cast<double>(rows);

    double err = 0.0, spread = 0.0;
    for (std::size_t k = 0; k < rows; ++k) {
        for (std::size_t i = 0; i < cols; ++i) {
            const double e = y_true(k, i) - y_model(k, i);
            const double s = y_true(k, i) - mean[i];
            err += e * e;
            spread += s * s;
        }
    }
    if (spread <= 0.0)
        fail(ErrorKind::InvalidInput, "fit_percent: reference sequence is constant");
    return 100.0 * (1.0 - std::sqrt(err) / std::sqrt(spread));
}

std::vector<double> observer_run(const models::GenericRnn& model, const DenseMatrix& l_gain,
                                 const std::vector<double>& x0, const std::vector<double>& xhat0,
                                 const DenseMatrix& inputs) {
    const std::size_t n = model.state_dim();
    const std::size_t m = model.input_dim();
    const std::size_t l = model.output_dim();
    if (l_gain.rows() != n || l_gain.cols() != l)
        fail(ErrorKind::Dimension, "observer_run: gain shape mismatch");
    if (x0.size() != n || xhat0.size() != n)
        fail(ErrorKind::Dimension, "observer_run: state dimension mismatch");
    if (inputs.cols() != m)
        fail(ErrorKind::Dimension, "observer_run: input dimension mismatch");

    std::vector<double> x = x0, xh = xhat0;
    std::vector<double> pre(n), preh(n), y(l), yh(l), innov(l);
    std::vector<double> errors;
    errors.reserve(inputs.rows() + 1);

    auto error_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = x[i] - xh[i];
            s += d * d;
        }
        return std::sqrt(s);
    };
    errors.push_back(error_norm());

    for (std::size_t k = 0; k < inputs.rows(); ++k) {
        const double* u = inputs.row_ptr(k);
        kernels::matvec(model.c.data(), l, n, x.data(), y.data());
        kernels::matvec_add(model.d.data(), l, m, u, y.data());
        kernels::matvec(model.c.data(), l, n, xh.data(), yh.data());
        kernels::matvec_add(model.d.data(), l, m, u, yh.data());
        for (std::size_t i = 0; i < l; ++i) innov[i] = y[i] - yh[i];

        kernels::matvec(model.a.data(), n, n, x.data(), pre.data());
        kernels::matvec_add(model.b.data(), n, m, u, pre.data());
        kernels::matvec(model.a.data(), n, n, xh.data(), preh.data());
        kernels::matvec_add(model.b.data(), n, m, u, preh.data());
        kernels::matvec_add(l_gain.data(), n, l, innov.data(), preh.data());

        for (std::size_t i = 0; i < n; ++i) {
            x[i] = model.activations[i].eval(pre[i]);
            xh[i] = model.activations[i].eval(preh[i]);
            if (!std::isfinite(x[i]) || !std::isfinite(xh[i]))
                fail(ErrorKind::Diverged, "observer_run diverged at step " + std::to_string(k));
        }
        errors.push_back(error_norm());
    }
    return errors;
}

} // namespace deltaiss::sim
