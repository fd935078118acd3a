#include "deltaiss/synthesize.hpp"

#include "deltaiss/eig.hpp"
#include "deltaiss/error.hpp"

#include <algorithm>
#include <cmath>

namespace deltaiss::synth {

namespace {

DenseMatrix lipschitz_diag(const std::vector<models::Activation>& activations) {
    DenseMatrix w(activations.size(), activations.size());
    for (std::size_t i = 0; i < activations.size(); ++i)
        w(i, i) = activations[i].is_identity() ? 1.0 : activations[i].lipschitz;
    return w;
}

DenseMatrix masked(DenseMatrix m, const std::vector<std::uint8_t>& mask) {
    if (mask.empty()) return m;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!mask[i * m.cols() + j]) m(i, j) = 0.0;
    return m;
}

SynthesisResult obstruction_result(const compose::BoundedOutputReport& precheck) {
    SynthesisResult r;
    r.status = SynthesisResult::Status::StructuralObstruction;
    r.obstruction_rows = precheck.bounded_rows;
    r.detail = "integral action on a structurally bounded output row cannot be incrementally "
               "stabilized; synthesis refused before solving";
    return r;
}

} // namespace

sdp::AffineLmiProblem synthesis_problem(const compose::GainFactorization& fac, double margin) {
    const std::size_t n = fac.state_dim();
    const DenseMatrix w = lipschitz_diag(fac.activations);
    const DenseMatrix ftil = w * fac.f;

    sdp::AffineLmiProblem problem;
    problem.margin = margin;
    problem.variables.push_back(sdp::VariableSpec::symmetric("P", fac.p_pattern));
    problem.normalization = sdp::TraceNormalization{"P", static_cast<double>(n)};

    if (fac.side == compose::GainSide::Right) {
        const DenseMatrix gtil = w * fac.g;
        problem.variables.push_back(
            sdp::VariableSpec::rectangular("H", fac.j_rows, fac.j_cols, fac.h_mask));
        problem.constraints.push_back(
            {"schur_block", 2 * n, sdp::LmiConstraint::Sense::PositiveDefinite,
             [ftil, gtil, n](const sdp::Assignment& a) {
                 const DenseMatrix& p = a.at("P");
                 const DenseMatrix x = ftil * p + gtil * a.at("H");
                 DenseMatrix block(2 * n, 2 * n);
                 block.set_block(0, 0, p);
                 block.set_block(0, n, x.transposed());
                 block.set_block(n, 0, x);
                 block.set_block(n, n, p);
                 return block;
             }});
    } else {
        const DenseMatrix g = fac.g;
        problem.variables.push_back(
            sdp::VariableSpec::rectangular("H", fac.j_rows, fac.j_cols, fac.h_mask));
        problem.constraints.push_back(
            {"schur_block", 2 * n, sdp::LmiConstraint::Sense::PositiveDefinite,
             [ftil, g, n](const sdp::Assignment& a) {
                 const DenseMatrix& p = a.at("P");
                 const DenseMatrix& h = a.at("H");
                 const DenseMatrix hg = h * g;
                 const DenseMatrix cross = g.transposed() * h.transposed() * ftil;
                 DenseMatrix top = p - ftil.transposed() * p * ftil - cross - cross.transposed();
                 DenseMatrix block(2 * n, 2 * n);
                 block.set_block(0, 0, top);
                 block.set_block(0, n, hg.transposed());
                 block.set_block(n, 0, hg);
                 block.set_block(n, n, p);
                 return block;
             }});
    }
    return problem;
}

namespace {

SynthesisResult run_design(const compose::GainFactorization& fac, double margin, int budget) {
    if (fac.integral_structure) {
        const auto precheck = compose::bounded_output_precheck(*fac.integral_structure);
        if (!precheck.possibly_unbounded()) return obstruction_result(precheck);
    }
    for (const auto& act : fac.activations)
        if (!(act.lipschitz > 0.0))
            fail(ErrorKind::InvalidInput, "synthesis requires positive Lipschitz constants");

    const sdp::AffineLmiProblem problem = synthesis_problem(fac, margin);
    const sdp::FeasibilityResult solved = sdp::solve(problem, budget);

    SynthesisResult result;
    result.iterations = solved.iterations;
    if (!solved.feasible()) {
        result.status = SynthesisResult::Status::BudgetExhausted;
        result.detail = "no feasible (P, H) found within the budget; not a proof of infeasibility";
        return result;
    }

    const SymmetricMatrix p = SymmetricMatrix::from_dense(solved.assignment.at("P"), 1e-9);
    const DenseMatrix& h = solved.assignment.at("H");

    DenseMatrix j;
    SymmetricMatrix cert_p;
    if (fac.side == compose::GainSide::Right) {
        // J = H P^-1; the proof certifies the loop with P^-1.
        cert_p = spd_inverse(p, 1e-12);
        j = masked(h * cert_p.to_dense(), fac.j_mask);
    } else {
        // J = W^-1 P^-1 H; the loop is certified with P itself.
        cert_p = p;
        const DenseMatrix w = lipschitz_diag(fac.activations);
        DenseMatrix winv(w.rows(), w.cols());
        for (std::size_t i = 0; i < w.rows(); ++i) winv(i, i) = 1.0 / w(i, i);
        j = masked(winv * spd_inverse(p, 1e-12).to_dense() * h, fac.j_mask);
    }

    const models::GenericRnn loop = fac.closed_loop(j);
    const certify::CertificateValidation validation =
        certify::validate_certificate(loop, cert_p, margin);
    if (!validation.pass) {
        result.status = SynthesisResult::Status::BudgetExhausted;
        result.detail = "solver point failed closed-loop re-validation";
        return result;
    }

    result.status = SynthesisResult::Status::Synthesized;
    result.j = std::move(j);
    result.p_solver = p;
    result.certificate = {cert_p, margin, validation.lyapunov_gap};
    return result;
}

} // namespace

SynthesisResult design_right(const compose::GainFactorization& fac, double margin, int budget) {
    if (fac.side != compose::GainSide::Right)
        fail(ErrorKind::InvalidInput, "design_right needs a right-side factorization");
    return run_design(fac, margin, budget);
}

SynthesisResult design_left(const compose::GainFactorization& fac, double margin, int budget) {
    if (fac.side != compose::GainSide::Left)
        fail(ErrorKind::InvalidInput, "design_left needs a left-side factorization");
    return run_design(fac, margin, budget);
}

DenseMatrix recover_gains(const DenseMatrix& j, const DenseMatrix& e) {
    if (!e.is_square() || e.rows() != j.cols())
        fail(ErrorKind::Dimension, "recover_gains: E must be square with J's column count");
    // J E^-1 via E^T X^T = J^T.
    return solve_linear(e.transposed(), j.transposed()).transposed();
}

std::map<std::string, DenseMatrix> recover_gains(const compose::GainFactorization& fac,
                                                 const DenseMatrix& j) {
    const DenseMatrix raw = fac.e ? recover_gains(j, *fac.e) : j;
    std::map<std::string, DenseMatrix> gains;
    for (const auto& slot : fac.slots)
        gains[slot.name] = raw.block(slot.row_begin, slot.col_begin, slot.row_end - slot.row_begin,
                                     slot.col_end - slot.col_begin);
    return gains;
}

ObserverResult design_observer(const DenseMatrix& a, const DenseMatrix& c,
                               const DenseMatrix& w_diag, int budget) {
    if (!a.is_square() || c.cols() != a.rows())
        fail(ErrorKind::Dimension, "design_observer: (A, C) dimensions inconsistent");
    if (w_diag.rows() != a.rows() || w_diag.cols() != a.rows())
        fail(ErrorKind::Dimension, "design_observer: W dimension mismatch");
    const std::size_t n = a.rows();
    const std::size_t l = c.rows();
    double wmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) wmax = std::max(wmax, w_diag(i, i));
    if (!(wmax > 0.0))
        fail(ErrorKind::InvalidInput, "design_observer: W must have positive entries");

    sdp::AffineLmiProblem problem;
    problem.margin = 0.0;
    problem.variables.push_back(sdp::VariableSpec::rectangular("L", n, l));
    problem.variables.push_back(sdp::VariableSpec::scalar("s"));
    problem.constraints.push_back(
        {"norm_bound", 2 * n, sdp::LmiConstraint::Sense::PositiveDefinite,
         [a, c, n](const sdp::Assignment& assign) {
             const DenseMatrix residual = a - assign.at("L") * c;
             const double s = assign.at("s")(0, 0);
             DenseMatrix block(2 * n, 2 * n);
             for (std::size_t i = 0; i < 2 * n; ++i) block(i, i) = s;
             block.set_block(0, n, residual.transposed());
             block.set_block(n, 0, residual);
             return block;
         }});

    sdp::Assignment initial;
    initial["L"] = DenseMatrix(n, l);
    DenseMatrix s0(1, 1);
    s0(0, 0) = spectral_norm(a) + 1.0;
    initial["s"] = s0;

    const sdp::MinimizeResult solved = sdp::minimize_scalar(problem, "s", initial, budget);

    ObserverResult result;
    result.iterations = solved.iterations;
    result.l = solved.assignment.at("L");
    result.norm_a_lc = spectral_norm(a - result.l * c);
    result.contraction = wmax * result.norm_a_lc;
    result.status = result.contraction < 1.0 ? ObserverResult::Status::Synthesized
                                             : ObserverResult::Status::NotSynthesized;
    return result;
}

ObserverResult design_observer(const models::GenericRnn& model, int budget) {
    const auto lw = models::lipschitz_weights(model);
    return design_observer(model.a, model.c, lw.w, budget);
}

} // namespace deltaiss::synth
