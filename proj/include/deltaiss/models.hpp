#pragma once

#include "deltaiss/matrix.hpp"

#include <functional>
#include <string>
#include <vector>

namespace deltaiss::models {

/// Per-coordinate state nonlinearity: what it computes plus the two facts the
/// stability machinery needs about it (Lipschitz constant, boundedness).
struct Activation {
    enum class Kind { Identity, Tanh, Sigmoid, Relu, Custom };

    Kind kind = Kind::Identity;
    double lipschitz = 1.0;
    bool bounded = false;
    std::function<double(double)> custom_eval; // Custom only

    static Activation identity();
    static Activation tanh();
    static Activation sigmoid();
    static Activation relu();
    static Activation custom(double lipschitz, bool bounded, std::function<double(double)> eval);
    /// Tanh/Sigmoid/Relu with an overridden Lipschitz constant (e.g. scaled
    /// variants); Identity is always (1, unbounded).
    static Activation with_lipschitz(Kind kind, double lipschitz);

    double eval(double x) const;
    bool is_identity() const { return kind == Kind::Identity; }
};

std::string to_string(Activation::Kind kind);

/// The canonical system x(k+1) = f(A x(k) + B u(k)), y(k) = C x(k) + D u(k)
/// with f applied coordinate-wise. Every other architecture in this library
/// converts into this class.
struct GenericRnn {
    DenseMatrix a; // n x n
    DenseMatrix b; // n x m
    DenseMatrix c; // l x n
    DenseMatrix d; // l x m
    std::vector<Activation> activations; // n entries, coordinate i of f

    std::size_t state_dim() const { return a.rows(); }
    std::size_t input_dim() const { return b.cols(); }
    std::size_t output_dim() const { return c.rows(); }
};

/// Echo state network: fixed random reservoir, trained linear readout.
/// State update chi+ = zeta(W_x chi + W_u u + W_y y), output
/// y = W_out1 chi + W_out2 u(k-1).
struct Esn {
    DenseMatrix w_x;    // nu x nu
    DenseMatrix w_u;    // nu x m
    DenseMatrix w_y;    // nu x l
    DenseMatrix w_out1; // l x nu
    DenseMatrix w_out2; // l x m
    Activation reservoir_activation = Activation::tanh();
    // Optional per-coordinate override for mixed reservoirs; empty means the
    // uniform reservoir_activation applies everywhere.
    std::vector<Activation> coordinate_activations;

    std::size_t reservoir_dim() const { return w_x.rows(); }
    std::size_t input_dim() const { return w_u.cols(); }
    std::size_t output_dim() const { return w_y.cols(); }
    /// Effective recurrent matrix W_x + W_y W_out1.
    DenseMatrix effective_recurrent() const;
    /// Materialized per-coordinate activations (nu entries).
    std::vector<Activation> reservoir_activations() const;
};

/// Shallow (1-layer) NNARX: y(k+1) = W_0 zeta(W_phi phi(k) + W_u u(k) + b) + b_0
/// over the regressor phi of the last N input/output samples. W_phi is stored
/// whole (nu x (l+m)N); the W_phi1/W_phi2/W_phi3 partition of width
/// (l+m), (l+m)N-2l-m, l is only meaningful for N >= 2.
struct ShallowNnarx {
    DenseMatrix w_0;   // l x nu
    DenseMatrix b_0;   // l x 1
    DenseMatrix w_phi; // nu x (l+m)N
    DenseMatrix w_u;   // nu x m
    DenseMatrix b;     // nu x 1
    std::size_t lag_count = 1; // N
    Activation hidden_activation = Activation::tanh();

    std::size_t hidden_dim() const { return w_0.cols(); }
    std::size_t input_dim() const { return w_u.cols(); }
    std::size_t output_dim() const { return w_0.rows(); }

    DenseMatrix w_phi1() const; // nu x (l+m), N >= 2
    DenseMatrix w_phi2() const; // nu x tau,   N >= 2
    DenseMatrix w_phi3() const; // nu x l,     N >= 2
};

/// RNN class x(k+1) = E x(k) + O f(A_hat x(k) + s) with diagonal E, O and a
/// constant input vector s.
struct HuRnn {
    std::vector<double> e_diag;
    std::vector<double> o_diag;
    DenseMatrix a_hat;
    std::vector<double> s;
    std::vector<Activation> activations;

    std::size_t dim() const { return a_hat.rows(); }
    /// Comparison matrix |E| + W |O| |A_hat|.
    DenseMatrix comparison_matrix() const;
};

struct LipschitzWeights {
    DenseMatrix w;                       // diagonal n x n
    std::vector<std::size_t> nonlinear;  // the index set L
};

/// W = diag(L_p1, ..., L_pn) with 1 on identity coordinates, plus the set of
/// non-identity coordinates.
LipschitzWeights lipschitz_weights(const GenericRnn& model);

DenseMatrix a_tilde(const GenericRnn& model); // W A

/// Lifts the ESN to the canonical class by appending the delayed input as
/// extra state coordinates.
GenericRnn esn_to_generic(const Esn& esn);

/// Lifts the NNARX to the canonical class with a shift register of past
/// inputs/outputs plus the hidden layer. The lifted input is [u(k); 1]: the
/// caller must append the constant 1 channel when simulating.
GenericRnn nnarx_to_generic(const ShallowNnarx& nnarx);

/// Embeds the Hu class (E = 0, o_i = 1 on nonlinear coordinates) with the
/// constant input s carried through a single constant-one input channel.
GenericRnn hu_to_generic(const HuRnn& hu);

/// Structural diagnostics: dimension mismatches, non-finite entries,
/// nonpositive Lipschitz constants. Empty means well-formed.
std::vector<std::string> validate(const GenericRnn& model);

} // namespace deltaiss::models
