#include "deltaiss/models.hpp"

#include "deltaiss/error.hpp"

#include <cmath>

namespace deltaiss::models {

Activation Activation::identity() { return {Kind::Identity, 1.0, false, nullptr}; }
Activation Activation::tanh() { return {Kind::Tanh, 1.0, true, nullptr}; }
Activation Activation::sigmoid() { return {Kind::Sigmoid, 0.25, true, nullptr}; }
Activation Activation::relu() { return {Kind::Relu, 1.0, false, nullptr}; }

Activation Activation::custom(double lipschitz, bool bounded, std::function<double(double)> eval) {
    if (!(lipschitz > 0.0))
        fail(ErrorKind::InvalidInput, "custom activation needs a positive Lipschitz constant");
    if (!eval)
        fail(ErrorKind::InvalidInput, "custom activation needs an evaluator");
    return {Kind::Custom, lipschitz, bounded, std::move(eval)};
}

Activation Activation::with_lipschitz(Kind kind, double lipschitz) {
    Activation a;
    switch (kind) {
    case Kind::Identity: return identity();
    case Kind::Tanh: a = tanh(); break;
    case Kind::Sigmoid: a = sigmoid(); break;
    case Kind::Relu: a = relu(); break;
    case Kind::Custom:
        fail(ErrorKind::InvalidInput, "use Activation::custom for custom activations");
    }
    a.lipschitz = lipschitz;
    return a;
}

double Activation::eval(double x) const {
    switch (kind) {
    case Kind::Identity: return x;
    case Kind::Tanh: return std::tanh(x);
    case Kind::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Kind::Relu: return x > 0.0 ? x : 0.0;
    case Kind::Custom: return custom_eval(x);
    }
    return x;
}

std::string to_string(Activation::Kind kind) {
    switch (kind) {
    case Activation::Kind::Identity: return "identity";
    case Activation::Kind::Tanh: return "tanh";
    case Activation::Kind::Sigmoid: return "sigmoid";
    case Activation::Kind::Relu: return "relu";
    case Activation::Kind::Custom: return "custom";
    }
    return "unknown";
}

DenseMatrix Esn::effective_recurrent() const { return w_x + w_y * w_out1; }

std::vector<Activation> Esn::reservoir_activations() const {
    if (!coordinate_activations.empty()) {
        if (coordinate_activations.size() != reservoir_dim())
            fail(ErrorKind::Dimension, "per-coordinate activation count must match the reservoir");
        return coordinate_activations;
    }
    return std::vector<Activation>(reservoir_dim(), reservoir_activation);
}

DenseMatrix ShallowNnarx::w_phi1() const {
    if (lag_count < 2)
        fail(ErrorKind::Unsupported, "W_phi partition is defined for N >= 2");
    return w_phi.block(0, 0, w_phi.rows(), output_dim() + input_dim());
}

DenseMatrix ShallowNnarx::w_phi2() const {
    if (lag_count < 2)
        fail(ErrorKind::Unsupported, "W_phi partition is defined for N >= 2");
    const std::size_t lm = output_dim() + input_dim();
    return w_phi.block(0, lm, w_phi.rows(), w_phi.cols() - lm - output_dim());
}

DenseMatrix ShallowNnarx::w_phi3() const {
    if (lag_count < 2)
        fail(ErrorKind::Unsupported, "W_phi partition is defined for N >= 2");
    return w_phi.block(0, w_phi.cols() - output_dim(), w_phi.rows(), output_dim());
}

DenseMatrix HuRnn::comparison_matrix() const {
    const std::size_t n = dim();
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double li = activations[i].is_identity() ? 1.0 : activations[i].lipschitz;
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = li * std::abs(o_diag[i]) * std::abs(a_hat(i, j));
        m(i, i) += std::abs(e_diag[i]);
    }
    return m;
}

LipschitzWeights lipschitz_weights(const GenericRnn& model) {
    const std::size_t n = model.state_dim();
    if (model.activations.size() != n)
        fail(ErrorKind::Dimension, "activation count must match the state dimension");
    LipschitzWeights out;
    out.w = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (model.activations[i].is_identity()) {
            out.w(i, i) = 1.0;
        } else {
            out.w(i, i) = model.activations[i].lipschitz;
            out.nonlinear.push_back(i);
        }
    }
    return out;
}

DenseMatrix a_tilde(const GenericRnn& model) {
    const auto lw = lipschitz_weights(model);
    DenseMatrix at = model.a;
    for (std::size_t i = 0; i < at.rows(); ++i) {
        const double li = lw.w(i, i);
        for (std::size_t j = 0; j < at.cols(); ++j) at(i, j) *= li;
    }
    return at;
}

GenericRnn esn_to_generic(const Esn& esn) {
    const std::size_t nu = esn.reservoir_dim();
    const std::size_t m = esn.input_dim();
    const std::size_t l = esn.output_dim();
    if (esn.w_x.cols() != nu || esn.w_u.rows() != nu || esn.w_y.rows() != nu ||
        esn.w_out1.rows() != l || esn.w_out1.cols() != nu ||
        esn.w_out2.rows() != l || esn.w_out2.cols() != m)
        fail(ErrorKind::Dimension, "esn_to_generic: inconsistent ESN matrix shapes");

    const std::size_t n = nu + m;
    GenericRnn g;
    g.a = DenseMatrix(n, n);
    g.a.set_block(0, 0, esn.effective_recurrent());
    g.a.set_block(0, nu, esn.w_y * esn.w_out2);
    g.b = DenseMatrix(n, m);
    g.b.set_block(0, 0, esn.w_u);
    g.b.set_block(nu, 0, DenseMatrix::identity(m));
    g.c = DenseMatrix(l, n);
    g.c.set_block(0, 0, esn.w_out1);
    g.c.set_block(0, nu, esn.w_out2);
    g.d = DenseMatrix(l, m);
    g.activations = esn.reservoir_activations();
    for (std::size_t i = 0; i < m; ++i) g.activations.push_back(Activation::identity());
    return g;
}

GenericRnn nnarx_to_generic(const ShallowNnarx& nnarx) {
    const std::size_t nu = nnarx.hidden_dim();
    const std::size_t m = nnarx.input_dim();
    const std::size_t l = nnarx.output_dim();
    const std::size_t lags = nnarx.lag_count;
    if (lags < 1)
        fail(ErrorKind::InvalidInput, "nnarx_to_generic: need at least one lag");
    if (nnarx.w_phi.rows() != nu || nnarx.w_phi.cols() != (l + m) * lags ||
        nnarx.w_u.rows() != nu || nnarx.b.rows() != nu || nnarx.b.cols() != 1 ||
        nnarx.b_0.rows() != l || nnarx.b_0.cols() != 1)
        fail(ErrorKind::Dimension, "nnarx_to_generic: inconsistent NNARX matrix shapes");

    // State: shift register [u(k-N), y(k-N+1), u(k-N+1), ..., y(k-1), u(k-1)]
    // followed by the hidden layer. Input is extended with a constant 1.
    const std::size_t reg = (l + m) * lags - l; // shift-register length
    const std::size_t n = reg + nu;
    // Rows that shift straight down; for N = 1 the register is just u(k-1),
    // with no shifted or delayed-output slots.
    const std::size_t shift = lags >= 2 ? reg - l - m : 0;

    GenericRnn g;
    g.a = DenseMatrix(n, n);
    g.b = DenseMatrix(n, m + 1);
    // Plain shift: entry i of the new register equals entry i + (l+m) of the old.
    for (std::size_t i = 0; i < shift; ++i) g.a(i, l + m + i) = 1.0;
    if (lags >= 2) {
        // y(k) = W_0 v(k) + b_0 enters the register...
        for (std::size_t i = 0; i < l; ++i) {
            for (std::size_t j = 0; j < nu; ++j) g.a(shift + i, reg + j) = nnarx.w_0(i, j);
            g.b(shift + i, m) = nnarx.b_0(i, 0);
        }
    }
    // ...and u(k) fills the final slots.
    for (std::size_t i = 0; i < m; ++i) g.b(reg - m + i, i) = 1.0;

    // Hidden layer: v(k+1) = zeta(W_phi [register; y(k)] + W_u u(k) + b)
    // with y(k) substituted by W_0 v(k) + b_0.
    const DenseMatrix w_phi_reg = nnarx.w_phi.block(0, 0, nu, reg);
    const DenseMatrix w_phi_y = nnarx.w_phi.block(0, reg, nu, l);
    g.a.set_block(reg, 0, w_phi_reg);
    g.a.set_block(reg, reg, w_phi_y * nnarx.w_0);
    g.b.set_block(reg, 0, nnarx.w_u);
    g.b.set_block(reg, m, nnarx.b + w_phi_y * nnarx.b_0);

    g.c = DenseMatrix(l, n);
    g.c.set_block(0, reg, nnarx.w_0);
    g.d = DenseMatrix(l, m + 1);
    g.d.set_block(0, m, nnarx.b_0);

    g.activations.assign(reg, Activation::identity());
    for (std::size_t i = 0; i < nu; ++i) g.activations.push_back(nnarx.hidden_activation);
    return g;
}

GenericRnn hu_to_generic(const HuRnn& hu) {
    const std::size_t n = hu.dim();
    if (hu.e_diag.size() != n || hu.o_diag.size() != n || hu.s.size() != n ||
        hu.activations.size() != n || hu.a_hat.cols() != n)
        fail(ErrorKind::Dimension, "hu_to_generic: inconsistent dimensions");
    for (std::size_t i = 0; i < n; ++i) {
        if (hu.e_diag[i] != 0.0)
            fail(ErrorKind::Unsupported, "hu_to_generic: requires E = 0");
        if (!hu.activations[i].is_identity() && hu.o_diag[i] != 1.0)
            fail(ErrorKind::Unsupported, "hu_to_generic: requires o_i = 1 on nonlinear coordinates");
    }

    GenericRnn g;
    g.a = DenseMatrix(n, n);
    g.b = DenseMatrix(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double oi = hu.o_diag[i];
        for (std::size_t j = 0; j < n; ++j) g.a(i, j) = oi * hu.a_hat(i, j);
        g.b(i, 0) = oi * hu.s[i]; // constant-one input channel carries s
    }
    g.c = DenseMatrix::identity(n);
    g.d = DenseMatrix(n, 1);
    g.activations = hu.activations;
    return g;
}

std::vector<std::string> validate(const GenericRnn& model) {
    std::vector<std::string> issues;
    const std::size_t n = model.a.rows();
    if (model.a.cols() != n)
        issues.push_back("A is not square");
    if (model.b.rows() != n)
        issues.push_back("B row count does not match the state dimension");
    if (model.c.cols() != n)
        issues.push_back("C column count does not match the state dimension");
    if (model.d.rows() != model.c.rows())
        issues.push_back("D row count does not match the output dimension");
    if (model.d.cols() != model.b.cols())
        issues.push_back("D column count does not match the input dimension");
    if (model.activations.size() != n)
        issues.push_back("activation count does not match the state dimension");
    if (!model.a.is_finite() || !model.b.is_finite() || !model.c.is_finite() || !model.d.is_finite())
        issues.push_back("non-finite matrix entry");
    for (std::size_t i = 0; i < model.activations.size(); ++i) {
        const auto& act = model.activations[i];
        if (!(act.lipschitz > 0.0))
            issues.push_back("nonpositive Lipschitz constant at coordinate " + std::to_string(i));
        if (act.kind == Activation::Kind::Custom && !act.custom_eval)
            issues.push_back("custom activation without evaluator at coordinate " + std::to_string(i));
    }
    return issues;
}

} // namespace deltaiss::models
