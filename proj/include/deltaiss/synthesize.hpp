#pragma once

#include "deltaiss/certify.hpp"
#include "deltaiss/compose.hpp"
#include "deltaiss/matrix.hpp"

#include <map>
#include <string>

namespace deltaiss::synth {

struct SynthesisResult {
    enum class Status { Synthesized, BudgetExhausted, StructuralObstruction };

    Status status = Status::BudgetExhausted;
    DenseMatrix j;              // structured gain (exact zeros on forced slots)
    SymmetricMatrix p_solver;   // the LMI variable P
    certify::Certificate certificate; // closed-loop witness (P^-1 right side, P left side)
    std::vector<std::size_t> obstruction_rows;
    int iterations = 0;
    std::string detail;

    bool synthesized() const { return status == Status::Synthesized; }
};

/// Schur-complement synthesis for A = F + GJ: solve for (P, H) in
///   [ P              (Ftil P + Gtil H)^T ]
///   [ Ftil P + Gtil H          P         ]  > 0
/// under the architecture's structural constraints, then J = H P^-1. The
/// closed loop is certified with P^-1. Integral-action architectures run the
/// bounded-output precheck first and refuse on obstruction.
SynthesisResult design_right(const compose::GainFactorization& fac, double margin = 1e-6,
                             int budget = 500);

/// Schur-complement synthesis for A = F + JG: solve for (P, H) in
///   [ P - Ftil^T P Ftil - G^T H^T Ftil - Ftil^T H G    G^T H^T ]
///   [ H G                                                  P   ]  > 0
/// then J = W^-1 P^-1 H; the closed loop is certified with P itself.
/// Requires every Lipschitz constant positive.
SynthesisResult design_left(const compose::GainFactorization& fac, double margin = 1e-6,
                            int budget = 500);

/// Raw gain recovery J E^-1 (throws Error(Singular) when E is singular).
DenseMatrix recover_gains(const DenseMatrix& j, const DenseMatrix& e);

/// Architecture-aware recovery: applies E when present and slices the
/// declared gain slots.
std::map<std::string, DenseMatrix> recover_gains(const compose::GainFactorization& fac,
                                                 const DenseMatrix& j);

/// The LMI problem design_right / design_left solve, exposed for witness
/// checking (variables "P" and "H").
sdp::AffineLmiProblem synthesis_problem(const compose::GainFactorization& fac, double margin);

struct ObserverResult {
    enum class Status { Synthesized, NotSynthesized };

    Status status = Status::NotSynthesized;
    DenseMatrix l;               // observer gain
    double norm_a_lc = 0.0;      // ||A - LC|| at the returned gain
    double contraction = 0.0;    // lambda_max(W) * ||A - LC||
    int iterations = 0;

    bool synthesized() const { return status == Status::Synthesized; }
};

/// Output-injection gain via the norm-minimization LMI
///   minimize s  s.t.  [ s I, (A - LC)^T; A - LC, s I ] > 0,
/// accepted iff lambda_max(W) * ||A - LC|| < 1 (the contraction factor).
ObserverResult design_observer(const DenseMatrix& a, const DenseMatrix& c,
                               const DenseMatrix& w_diag, int budget = 500);

/// Convenience overload taking W from the model's activations.
ObserverResult design_observer(const models::GenericRnn& model, int budget = 500);

} // namespace deltaiss::synth
