#pragma once

#include "deltaiss/matrix.hpp"
#include "deltaiss/models.hpp"
#include "deltaiss/sdp.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace deltaiss::certify {

/// Incremental-stability witness for a canonical model: a positive definite
/// P with zero off-diagonals on nonlinear rows/columns and a negative
/// Lyapunov gap max_eig(Atil^T P Atil - P).
struct Certificate {
    SymmetricMatrix p;
    double margin = 0.0;
    double lyapunov_gap = 0.0;
};

struct CertifyOutcome {
    enum class Status { Certified, NotCertified };
    Status status = Status::NotCertified;
    std::optional<Certificate> certificate;
    int iterations = 0;
    std::string detail; // "condition not established ..." on NotCertified

    bool certified() const { return status == Status::Certified; }
};

/// The structured Lyapunov feasibility problem for a canonical model:
/// find P > 0 with the required zero pattern and Atil^T P Atil - P < 0,
/// both with margin `epsilon`, normalized by trace(P) = n.
sdp::AffineLmiProblem lyapunov_problem(const models::GenericRnn& model, double epsilon);

/// Pattern forced on P by the model's nonlinear coordinates.
sdp::SparsityPattern p_pattern(const models::GenericRnn& model);

/// Searches for a certificate. NotCertified only means the search gave up
/// within the budget; the condition is sufficient, not necessary.
CertifyOutcome certify_theorem2(const models::GenericRnn& model, double epsilon = 1e-6,
                                int budget = 500);

/// One baseline sufficient condition evaluated on a model: holds iff
/// statistic < threshold. `applicable` is false when the condition's own
/// hypothesis fails (the numbers are still reported).
struct ConditionReport {
    std::string condition;
    bool applicable = true;
    bool holds = false;
    double statistic = 0.0;
    double threshold = 0.0;
};

/// ||W_x + W_y W_out1|| < 1 (requires reservoir Lipschitz <= 1).
ConditionReport check_esn_norm(const models::Esn& esn);

/// ||W_0|| ||W_phi|| < 1 / (L_p sqrt(N)).
ConditionReport check_nnarx_norm(const models::ShallowNnarx& nnarx);

/// Spectral radius of the comparison matrix |E| + W|O||A_hat| < 1; the
/// Perron-root test is equivalent to the diagonal-P inequality for this
/// nonnegative matrix.
ConditionReport check_hu(const models::HuRnn& hu);

struct CertificateValidation {
    bool pass = false;
    int pattern_violations = 0;
    double lambda_min_p = 0.0;
    double lyapunov_gap = 0.0; // max_eig(Atil^T P Atil - P)
    bool margin_met = false;   // clears `epsilon` up to the validation slack
};

/// Re-derives every certificate condition from scratch: exact zero pattern,
/// P positive definite, Lyapunov gap negative.
CertificateValidation validate_certificate(const models::GenericRnn& model,
                                           const SymmetricMatrix& p, double epsilon = 0.0);

struct ProbeOptions {
    int trials = 100;
    int horizon = 200;
    double input_magnitude = 1.0;
    std::uint64_t seed = 0;
};

/// Empirical trajectory-pair probe: random distinct initial states, shared
/// random inputs. With a certificate, also counts steps where the quadratic
/// form V = dx^T P dx fails to decrease while dx != 0.
struct ProbeReport {
    int trials = 0;
    double max_terminal_divergence = 0.0;
    long v_increase_events = 0;  // only meaningful when a certificate was given
    long steps_sampled = 0;      // steps with dx != 0 that were V-checked
};

ProbeReport empirical_probe(const models::GenericRnn& model, const ProbeOptions& options,
                            const Certificate* certificate = nullptr);

} // namespace deltaiss::certify
