#include "deltaiss/certify.hpp"

#include "deltaiss/eig.hpp"
#include "deltaiss/error.hpp"
#include "deltaiss/kernels.hpp"
#include "deltaiss/rng.hpp"
#include "deltaiss/sim.hpp"

#include <algorithm>
#include <cmath>

namespace deltaiss::certify {

sdp::SparsityPattern p_pattern(const models::GenericRnn& model) {
    const auto lw = models::lipschitz_weights(model);
    std::vector<bool> zero_rows(model.state_dim(), false);
    for (std::size_t i : lw.nonlinear) zero_rows[i] = true;
    return sdp::SparsityPattern::with_zero_rows(model.state_dim(), zero_rows);
}

sdp::AffineLmiProblem lyapunov_problem(const models::GenericRnn& model, double epsilon) {
    const std::size_t n = model.state_dim();
    const DenseMatrix atil = models::a_tilde(model);

    sdp::AffineLmiProblem problem;
    problem.margin = epsilon;
    problem.variables.push_back(sdp::VariableSpec::symmetric("P", p_pattern(model)));
    problem.normalization = sdp::TraceNormalization{"P", static_cast<double>(n)};
    problem.constraints.push_back({"P_positive", n, sdp::LmiConstraint::Sense::PositiveDefinite,
                                   [](const sdp::Assignment& a) { return a.at("P"); }});
    problem.constraints.push_back(
        {"lyapunov_decrease", n, sdp::LmiConstraint::Sense::NegativeDefinite,
         [atil](const sdp::Assignment& a) {
             const DenseMatrix& p = a.at("P");
             return atil.transposed() * p * atil - p;
         }});
    return problem;
}

CertifyOutcome certify_theorem2(const models::GenericRnn& model, double epsilon, int budget) {
    const auto issues = models::validate(model);
    if (!issues.empty())
        fail(ErrorKind::InvalidInput, "certify_theorem2: invalid model: " + issues.front());

    const sdp::AffineLmiProblem problem = lyapunov_problem(model, epsilon);
    const sdp::FeasibilityResult result = sdp::solve(problem, budget);

    CertifyOutcome outcome;
    outcome.iterations = result.iterations;
    if (!result.feasible()) {
        outcome.status = CertifyOutcome::Status::NotCertified;
        outcome.detail = "condition not established (feasibility budget exhausted after " +
                         std::to_string(result.iterations) + " iterations); this is not a disproof";
        return outcome;
    }

    Certificate cert;
    cert.p = SymmetricMatrix::from_dense(result.assignment.at("P"), 1e-9);
    cert.margin = epsilon;
    const CertificateValidation validation = validate_certificate(model, cert.p, epsilon);
    cert.lyapunov_gap = validation.lyapunov_gap;
    if (!validation.pass) {
        outcome.status = CertifyOutcome::Status::NotCertified;
        outcome.detail = "condition not established (solver point failed re-validation)";
        return outcome;
    }
    outcome.status = CertifyOutcome::Status::Certified;
    outcome.certificate = std::move(cert);
    return outcome;
}

ConditionReport check_esn_norm(const models::Esn& esn) {
    ConditionReport report;
    report.condition = "esn_effective_norm";
    report.statistic = spectral_norm(esn.effective_recurrent());
    report.threshold = 1.0;
    report.holds = report.statistic < report.threshold;
    report.applicable = esn.reservoir_activation.lipschitz <= 1.0;
    return report;
}

ConditionReport check_nnarx_norm(const models::ShallowNnarx& nnarx) {
    ConditionReport report;
    report.condition = "nnarx_norm_product";
    report.statistic = spectral_norm(nnarx.w_0) * spectral_norm(nnarx.w_phi);
    report.threshold = 1.0 / (nnarx.hidden_activation.lipschitz *
                              std::sqrt(static_cast<double>(nnarx.lag_count)));
    report.holds = report.statistic < report.threshold;
    return report;
}

ConditionReport check_hu(const models::HuRnn& hu) {
    ConditionReport report;
    report.condition = "hu_comparison_radius";
    report.statistic = spectral_radius(hu.comparison_matrix());
    report.threshold = 1.0;
    report.holds = report.statistic < report.threshold;
    return report;
}

CertificateValidation validate_certificate(const models::GenericRnn& model,
                                           const SymmetricMatrix& p, double epsilon) {
    const std::size_t n = model.state_dim();
    if (p.n() != n)
        fail(ErrorKind::Dimension, "validate_certificate: P dimension mismatch");

    CertificateValidation v;
    const sdp::SparsityPattern pattern = p_pattern(model);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (!pattern.is_free(i, j) && p.at(i, j) != 0.0) ++v.pattern_violations;

    v.lambda_min_p = sym_eig(p).eigenvalues.front();

    const DenseMatrix atil = models::a_tilde(model);
    const DenseMatrix pd = p.to_dense();
    const DenseMatrix gap_matrix = atil.transposed() * pd * atil - pd;
    v.lyapunov_gap = sym_eig(SymmetricMatrix::from_dense(gap_matrix, 1e-7)).eigenvalues.back();

    v.pass = v.pattern_violations == 0 && v.lambda_min_p > 0.0 && v.lyapunov_gap < 0.0;
    v.margin_met = v.pattern_violations == 0 &&
                   v.lambda_min_p > epsilon - sdp::kValidationTol &&
                   v.lyapunov_gap < -(epsilon - sdp::kValidationTol);
    return v;
}

ProbeReport empirical_probe(const models::GenericRnn& model, const ProbeOptions& options,
                            const Certificate* certificate) {
    if (options.trials < 1 || options.horizon < 1)
        fail(ErrorKind::InvalidInput, "empirical_probe: trials and horizon must be positive");
    const std::size_t n = model.state_dim();
    const std::size_t m = model.input_dim();
    if (certificate && certificate->p.n() != n)
        fail(ErrorKind::Dimension, "empirical_probe: certificate dimension mismatch");

    const DenseMatrix p_dense = certificate ? certificate->p.to_dense() : DenseMatrix();
    auto quad_v = [&](const std::vector<double>& dx) {
        std::vector<double> pdx(n, 0.0);
        kernels::matvec(p_dense.data(), n, n, dx.data(), pdx.data());
        return kernels::dot(dx.data(), pdx.data(), n);
    };

    ProbeReport report;
    report.trials = options.trials;

    for (int trial = 0; trial < options.trials; ++trial) {
        // Independent per-trial stream: results do not depend on trial order.
        std::mt19937_64 rng = seeded_stream(options.seed, static_cast<std::uint64_t>(trial));
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::uniform_real_distribution<double> input(-options.input_magnitude,
                                                     options.input_magnitude);

        std::vector<double> x1(n), x2(n);
        do {
            for (std::size_t i = 0; i < n; ++i) {
                x1[i] = unit(rng);
                x2[i] = unit(rng);
            }
        } while (x1 == x2);

        DenseMatrix inputs(options.horizon, m);
        for (std::size_t k = 0; k < inputs.rows(); ++k)
            for (std::size_t i = 0; i < m; ++i) inputs(k, i) = input(rng);

        const sim::Trajectory t1 = sim::simulate(model, x1, inputs);
        const sim::Trajectory t2 = sim::simulate(model, x2, inputs);

        std::vector<double> dx(n);
        double v_prev = 0.0;
        bool dx_prev_nonzero = false;
        for (std::size_t k = 0; k < t1.states.rows(); ++k) {
            bool nonzero = false;
            for (std::size_t i = 0; i < n; ++i) {
                dx[i] = t1.states(k, i) - t2.states(k, i);
                nonzero = nonzero || dx[i] != 0.0;
            }
            if (certificate) {
                const double v = quad_v(dx);
                if (k > 0 && dx_prev_nonzero) {
                    ++report.steps_sampled;
                    if (v >= v_prev) ++report.v_increase_events;
                }
                v_prev = v;
                dx_prev_nonzero = nonzero;
            }
            if (k + 1 == t1.states.rows()) {
                const double dist = std::sqrt(kernels::dot(dx.data(), dx.data(), n));
                report.max_terminal_divergence = std::max(report.max_terminal_divergence, dist);
            }
        }
    }
    return report;
}

} // namespace deltaiss::certify
