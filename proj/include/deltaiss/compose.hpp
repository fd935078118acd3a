#pragma once

#include "deltaiss/matrix.hpp"
#include "deltaiss/models.hpp"
#include "deltaiss/sdp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace deltaiss::compose {

using models::Activation;
using models::GenericRnn;

/// Series chain: the output of each system feeds the next one's input.
/// Implemented by iterated pairwise composition; simulating the composite
/// matches chaining the subsystem simulations.
GenericRnn series(const std::vector<GenericRnn>& systems);

/// Negative feedback loop (input r, error e = r - y_plant drives the
/// controller, controller output drives the plant). The plant must be
/// strictly proper; `allow_proper_plant` instead accepts a proper plant
/// with a strictly proper controller.
GenericRnn feedback(const GenericRnn& controller, const GenericRnn& plant,
                    bool allow_proper_plant = false);

/// Closed loop with discrete integrator eta+ = eta + e, output v = M(eta+e):
/// the common reduced form every integral-action scheme lands in.
///   chi+  = f_chi(A_chi chi + A_eta eta + B_chi r)
///   eta+  = -C_chi chi + eta + r
///   y     =  C_chi chi
struct SisIntSystem {
    DenseMatrix a_chi; // n_chi x n_chi
    DenseMatrix a_eta; // n_chi x l
    DenseMatrix b_chi; // n_chi x l
    DenseMatrix c_chi; // l x n_chi
    std::vector<Activation> chi_activations;

    std::size_t chi_dim() const { return a_chi.rows(); }
    std::size_t output_dim() const { return c_chi.rows(); }
};

/// Integrator scheme (a): static state feedback u = K x + v.
SisIntSystem integrator_state_feedback(const GenericRnn& plant, const DenseMatrix& k_gain,
                                       const DenseMatrix& m_gain);
/// Integrator scheme (b): integrator in series ahead of a dynamic controller.
SisIntSystem integrator_series_controller(const GenericRnn& controller, const GenericRnn& plant,
                                          const DenseMatrix& m_gain);
/// Integrator scheme (c): integrator in parallel with a dynamic controller.
SisIntSystem integrator_parallel_controller(const GenericRnn& controller, const GenericRnn& plant,
                                            const DenseMatrix& m_gain);

/// Stacks the integrator state onto chi; integrator coordinates get
/// identity activations.
GenericRnn lift_sisint(const SisIntSystem& s);

/// Structural obstruction test: output row i is bounded when every state it
/// reads has a bounded activation. Any bounded row makes integral-action
/// synthesis impossible and must abort it.
struct BoundedOutputReport {
    std::vector<std::size_t> bounded_rows;
    bool possibly_unbounded() const { return bounded_rows.empty(); }
};

BoundedOutputReport bounded_output_precheck(const SisIntSystem& s);

enum class GainSide { Right, Left }; // A = F + G J  vs  A = F + J G

/// Named block of the recovered gain matrix J E^-1 (or of J itself when the
/// architecture has no E): rows [row_begin, row_end), columns
/// [col_begin, col_end).
struct GainSlot {
    std::string name;
    std::size_t row_begin = 0;
    std::size_t row_end = 0;
    std::size_t col_begin = 0;
    std::size_t col_end = 0;
};

/// Closed-loop architecture whose gain J is synthesized by LMI:
/// A = F + GJ or A = F + JG plus the structural constraints the design
/// variables must satisfy.
struct GainFactorization {
    GainSide side = GainSide::Right;
    DenseMatrix f;
    DenseMatrix g;
    std::size_t j_rows = 0, j_cols = 0;
    std::vector<std::uint8_t> j_mask; // forced-zero structure (1 = free); empty = all free
    std::vector<std::uint8_t> h_mask; // same convention for the LMI variable H
    sdp::SparsityPattern p_pattern;
    std::optional<DenseMatrix> e;     // gain recovery: raw gains = J E^-1
    std::vector<GainSlot> slots;

    // Closed loop around A: activations always exact; b/c/d are exact when
    // the architecture's input path does not depend on J (state feedback,
    // ESN output feedback) and are the J = 0 instantiation otherwise.
    std::vector<Activation> activations;
    DenseMatrix b, c, d;

    // Present on integral-action architectures; drives the bounded-output
    // precheck before any synthesis.
    std::optional<SisIntSystem> integral_structure;

    DenseMatrix reconstruct_a(const DenseMatrix& j) const;
    GenericRnn closed_loop(const DenseMatrix& j) const;
    std::size_t state_dim() const { return f.rows(); }
};

/// Static state feedback u = K x + u0 on a canonical plant: F = A, G = B,
/// J = K free.
GainFactorization factorize_state_feedback(const GenericRnn& plant);

/// Echo-state output-feedback controller with fixed random reservoir; only
/// the readout row of J is free.
struct EsnControllerSkeleton {
    DenseMatrix w_x; // n_c x n_c
    DenseMatrix w_e; // n_c x l_s (error input weights)
    DenseMatrix w_y; // n_c x l_c (output feedback weights)
    Activation activation = Activation::tanh();
};

GainFactorization factorize_esn_output_feedback(const EsnControllerSkeleton& controller,
                                                const GenericRnn& plant);

/// Shallow NNARX output-feedback controller with W_0 fixed and zero biases;
/// the unknowns [W_u W_phi] enter on the left (A = F + JG).
struct NnarxControllerSkeleton {
    DenseMatrix w_0;            // l_c x nu_c
    std::size_t lag_count = 1;  // N_c
    Activation activation = Activation::tanh();
};

GainFactorization factorize_nnarx_output_feedback(const NnarxControllerSkeleton& controller,
                                                  const GenericRnn& plant);

/// State feedback plus explicit integrator; J = [K - M C, M] and
/// [K M] = J E^-1.
GainFactorization factorize_integrator_state_feedback(const GenericRnn& plant);

/// Integrator in series with a non-strictly-proper ESN controller reading
/// [v; x_plant]; the plant is itself an ESN with readout W_out1 and the
/// controller readout is recovered as [W_out1c W_out2c] = J E^-1.
struct EsnIntegratorSkeleton {
    DenseMatrix w_x;    // n_c x n_c
    DenseMatrix w_u_v;  // n_c x 1   (integrator-channel input weights)
    DenseMatrix w_u_x;  // n_c x n_s (plant-state input weights)
    DenseMatrix w_y;    // n_c x 1
    Activation activation = Activation::tanh();
};

GainFactorization factorize_esn_integrator(const EsnIntegratorSkeleton& controller,
                                           const models::Esn& plant);

/// Rebuilds the full closed loop of the ESN-with-integrator architecture
/// from recovered controller readouts (the input path depends on them).
GenericRnn esn_integrator_loop(const EsnIntegratorSkeleton& controller, const models::Esn& plant,
                               const DenseMatrix& w_out1c, const DenseMatrix& w_out2c);

} // namespace deltaiss::compose
