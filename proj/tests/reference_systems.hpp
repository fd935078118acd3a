#pragma once

// Small reference systems shared across the test suites, with the published
// values their checks pin down.

#include "deltaiss/matrix.hpp"
#include "deltaiss/models.hpp"

namespace testref {

using deltaiss::DenseMatrix;
using deltaiss::SymmetricMatrix;
namespace models = deltaiss::models;

// SISO echo state network with two reservoir states whose effective
// recurrent matrix has norm 1.1413 yet admits a structured Lyapunov witness
// P = diag(2.1444, 0.7221, 1.0254) with gap -0.3197.
inline models::Esn esn_counterexample() {
    models::Esn esn;
    esn.w_x = DenseMatrix{{0.8257, -0.4711}, {-1.0149, 0.137}};
    esn.w_y = DenseMatrix{{-0.2919}, {0.3018}};
    esn.w_u = DenseMatrix{{0.4}, {-0.3}}; // input weights: any finite values
    esn.w_out1 = DenseMatrix{{0.3999, -0.93}};
    esn.w_out2 = DenseMatrix{{-0.1768}};
    esn.reservoir_activation = models::Activation::tanh();
    return esn;
}

inline SymmetricMatrix esn_counterexample_p() {
    return SymmetricMatrix::diagonal({2.1444, 0.7221, 1.0254});
}

// Shallow NNARX (one output, one input, two lags, one neuron) with norm
// product 0.8801 above the 1/sqrt(2) threshold; its published 4x4 witness
// has gap -0.239.
inline models::ShallowNnarx nnarx_counterexample() {
    models::ShallowNnarx nx;
    nx.w_0 = DenseMatrix{{0.6293}};
    nx.b_0 = DenseMatrix(1, 1);
    nx.w_phi = DenseMatrix{{-0.2130, -0.8657, -1.0431, -0.2701}};
    nx.w_u = DenseMatrix(1, 1);
    nx.b = DenseMatrix(1, 1);
    nx.lag_count = 2;
    nx.hidden_activation = models::Activation::tanh();
    return nx;
}

inline SymmetricMatrix nnarx_counterexample_p() {
    SymmetricMatrix p(4);
    p.at(0, 0) = 0.8278;
    p.at(1, 0) = 0.0095;
    p.at(1, 1) = 1.2258;
    p.at(2, 0) = 0.1847;
    p.at(2, 1) = 0.7531;
    p.at(2, 2) = 2.5870;
    p.at(3, 3) = 0.8723;
    return p;
}

// Two-state system in the diagonal-E/O class whose comparison matrix has
// Perron root 1.225; diag(1.2122, 1.2657) certifies it with gap -0.1135.
inline models::HuRnn hu_counterexample() {
    models::HuRnn hu;
    hu.e_diag = {0.0, 0.0};
    hu.o_diag = {1.0, 1.0};
    hu.a_hat = DenseMatrix{{0.4178, -0.8544}, {0.8199, 0.3573}};
    hu.s = {0.0, 0.0};
    hu.activations = {models::Activation::tanh(), models::Activation::tanh()};
    return hu;
}

inline SymmetricMatrix hu_counterexample_p() {
    return SymmetricMatrix::diagonal({1.2122, 1.2657});
}

// Two-state SISO plant (tanh on the first state, second linear and unstable)
// used by the integrator synthesis checks, with the published feasible pair
// (P, H) of its design inequality and the gains they induce.
inline models::GenericRnn integrator_example_plant() {
    models::GenericRnn plant;
    plant.a = DenseMatrix{{-0.4686, 1.0984}, {0.0, 1.15}};
    plant.b = DenseMatrix{{0.7015}, {-2.0518}};
    plant.c = DenseMatrix{{-0.3538, -0.8236}};
    plant.d = DenseMatrix(1, 1);
    plant.activations = {models::Activation::tanh(), models::Activation::identity()};
    return plant;
}

inline SymmetricMatrix integrator_example_p() {
    SymmetricMatrix p(3);
    p.at(0, 0) = 2.1317;
    p.at(1, 1) = 0.588;
    p.at(2, 1) = -0.5283;
    p.at(2, 2) = 1.3569;
    return p;
}

inline DenseMatrix integrator_example_h() {
    return DenseMatrix{{0.1694, 0.2875, -0.1088}};
}

inline DenseMatrix integrator_example_k() { return DenseMatrix{{0.0196, 0.5016}}; }

inline double integrator_example_m() { return 0.1694; }

} // namespace testref
