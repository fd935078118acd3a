#include "deltaiss/sdp.hpp"

#include "deltaiss/eig.hpp"
#include "deltaiss/error.hpp"
#include "deltaiss/kernels.hpp"
#include "deltaiss/rng.hpp"

#include <algorithm>
#include <cmath>

namespace deltaiss::sdp {

SparsityPattern SparsityPattern::diagonal(std::size_t n) { return {n, {}}; }

SparsityPattern SparsityPattern::full(std::size_t n) {
    SparsityPattern p{n, {}};
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) p.off_diagonal.emplace_back(i, j);
    return p;
}

SparsityPattern SparsityPattern::with_zero_rows(std::size_t n, const std::vector<bool>& zero_rows) {
    if (zero_rows.size() != n)
        fail(ErrorKind::Dimension, "with_zero_rows: flag count must equal the dimension");
    SparsityPattern p{n, {}};
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (!zero_rows[i] && !zero_rows[j]) p.off_diagonal.emplace_back(i, j);
    return p;
}

bool SparsityPattern::is_free(std::size_t i, std::size_t j) const {
    if (i == j) return true;
    const auto lo = std::min(i, j);
    const auto hi = std::max(i, j);
    for (const auto& [a, b] : off_diagonal)
        if (a == hi && b == lo) return true;
    return false;
}

VariableSpec VariableSpec::symmetric(std::string name, SparsityPattern pattern) {
    VariableSpec v;
    v.name = std::move(name);
    v.kind = Kind::Symmetric;
    v.pattern = std::move(pattern);
    return v;
}

VariableSpec VariableSpec::rectangular(std::string name, std::size_t rows, std::size_t cols) {
    VariableSpec v;
    v.name = std::move(name);
    v.kind = Kind::Rectangular;
    v.rows = rows;
    v.cols = cols;
    return v;
}

VariableSpec VariableSpec::rectangular(std::string name, std::size_t rows, std::size_t cols,
                                       std::vector<std::uint8_t> free_mask) {
    if (!free_mask.empty() && free_mask.size() != rows * cols)
        fail(ErrorKind::Dimension, "rectangular variable mask size mismatch");
    VariableSpec v = rectangular(std::move(name), rows, cols);
    v.free_mask = std::move(free_mask);
    return v;
}

VariableSpec VariableSpec::scalar(std::string name) { return rectangular(std::move(name), 1, 1); }

std::size_t VariableSpec::unknown_count() const {
    if (kind == Kind::Symmetric) return pattern.unknown_count();
    if (free_mask.empty()) return rows * cols;
    std::size_t c = 0;
    for (auto f : free_mask) c += f ? 1 : 0;
    return c;
}

namespace {

// ------------------------------------------------------------------ layout

struct EntryRef {
    std::size_t variable; // index into problem.variables
    std::size_t i, j;     // matrix position (i >= j for symmetric off-diagonals)
};

struct Layout {
    std::vector<EntryRef> entries; // unknown index -> location
    std::vector<std::size_t> var_offset;
    std::size_t count = 0;
};

Layout build_layout(const AffineLmiProblem& problem) {
    Layout layout;
    for (std::size_t v = 0; v < problem.variables.size(); ++v) {
        const auto& var = problem.variables[v];
        layout.var_offset.push_back(layout.entries.size());
        if (var.kind == VariableSpec::Kind::Symmetric) {
            for (std::size_t i = 0; i < var.pattern.n; ++i)
                layout.entries.push_back({v, i, i});
            for (const auto& [i, j] : var.pattern.off_diagonal) {
                if (i <= j || i >= var.pattern.n)
                    fail(ErrorKind::InvalidInput, "malformed sparsity pattern in variable " + var.name);
                layout.entries.push_back({v, i, j});
            }
        } else {
            for (std::size_t i = 0; i < var.rows; ++i)
                for (std::size_t j = 0; j < var.cols; ++j)
                    if (var.free_mask.empty() || var.free_mask[i * var.cols + j])
                        layout.entries.push_back({v, i, j});
        }
    }
    layout.count = layout.entries.size();
    return layout;
}

Assignment zero_assignment(const AffineLmiProblem& problem) {
    Assignment a;
    for (const auto& var : problem.variables) {
        if (var.kind == VariableSpec::Kind::Symmetric)
            a[var.name] = DenseMatrix(var.pattern.n, var.pattern.n);
        else
            a[var.name] = DenseMatrix(var.rows, var.cols);
    }
    return a;
}

void write_entry(Assignment& a, const AffineLmiProblem& problem, const EntryRef& e, double value) {
    const auto& var = problem.variables[e.variable];
    DenseMatrix& m = a[var.name];
    m(e.i, e.j) = value;
    if (var.kind == VariableSpec::Kind::Symmetric) m(e.j, e.i) = value;
}

Assignment unpack(const AffineLmiProblem& problem, const Layout& layout,
                  const std::vector<double>& z) {
    Assignment a = zero_assignment(problem);
    for (std::size_t k = 0; k < layout.count; ++k) write_entry(a, problem, layout.entries[k], z[k]);
    return a;
}

// ------------------------------------------------------------------ compile

struct CompiledConstraint {
    std::string name;
    std::size_t dim = 0;
    DenseMatrix base;                                        // oriented constant term
    std::vector<std::pair<std::size_t, DenseMatrix>> terms;  // unknown index -> coefficient matrix
};

DenseMatrix oriented_eval(const LmiConstraint& c, const Assignment& a) {
    DenseMatrix m = c.map(a);
    if (m.rows() != c.dim || m.cols() != c.dim)
        fail(ErrorKind::Dimension, "constraint " + c.name + " produced a wrong-sized matrix");
    const double scale = std::max(1.0, m.max_abs());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            if (std::abs(m(i, j) - m(j, i)) > 1e-9 * scale)
                fail(ErrorKind::InvalidInput, "constraint " + c.name + " is not symmetric");
            const double v = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = m(j, i) = v;
        }
    if (c.sense == LmiConstraint::Sense::NegativeDefinite) m = -m;
    return m;
}

std::vector<CompiledConstraint> compile(const AffineLmiProblem& problem, const Layout& layout) {
    std::vector<CompiledConstraint> out;
    const Assignment zero = zero_assignment(problem);

    // Affinity probe point with deterministic pseudo-random entries.
    std::vector<double> probe(layout.count);
    for (std::size_t k = 0; k < layout.count; ++k)
        probe[k] = static_cast<double>(splitmix64(k + 17) >> 11) / 9007199254740992.0 - 0.5;
    const Assignment probe_a = unpack(problem, layout, probe);

    for (const auto& c : problem.constraints) {
        CompiledConstraint cc;
        cc.name = c.name;
        cc.dim = c.dim;
        cc.base = oriented_eval(c, zero);

        DenseMatrix predicted = cc.base;
        for (std::size_t k = 0; k < layout.count; ++k) {
            Assignment unit = zero;
            write_entry(unit, problem, layout.entries[k], 1.0);
            DenseMatrix g = oriented_eval(c, unit) - cc.base;
            if (g.max_abs() > 0.0) {
                for (std::size_t t = 0; t < g.entries().size(); ++t)
                    predicted.data()[t] += probe[k] * g.data()[t];
                cc.terms.emplace_back(k, std::move(g));
            }
        }
        const DenseMatrix actual = oriented_eval(c, probe_a);
        const double scale = std::max(1.0, actual.max_abs());
        if (predicted.max_abs_diff(actual) > 1e-7 * scale)
            fail(ErrorKind::InvalidInput,
                 "constraint " + c.name + " is not affine in the declared variables");
        out.push_back(std::move(cc));
    }
    return out;
}

DenseMatrix constraint_value(const CompiledConstraint& c, const std::vector<double>& z,
                             double slack) {
    DenseMatrix s = c.base;
    for (const auto& [k, g] : c.terms)
        kernels::axpy(z[k], g.data(), s.data(), g.entries().size());
    if (slack != 0.0)
        for (std::size_t i = 0; i < c.dim; ++i) s(i, i) -= slack;
    return s;
}

// ------------------------------------------------------------------ barrier

// Triangular helpers over the Cholesky factor L of S: G_hat = L^-1 G L^-T
// is symmetric, tr(S^-1 G) = tr(G_hat), and the barrier Hessian entries are
// Frobenius inner products <G_hat_k, G_hat_j>.
DenseMatrix whiten(const DenseMatrix& l, const DenseMatrix& g) {
    const std::size_t n = l.rows();
    DenseMatrix x = g; // X = L^-1 G, forward substitution on each column
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            double sum = x(i, col);
            for (std::size_t p = 0; p < i; ++p) sum -= l(i, p) * x(p, col);
            x(i, col) = sum / l(i, i);
        }
    }
    DenseMatrix xt = x.transposed(); // G_hat = (L^-1 X^T)^T
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            double sum = xt(i, col);
            for (std::size_t p = 0; p < i; ++p) sum -= l(i, p) * xt(p, col);
            xt(i, col) = sum / l(i, i);
        }
    }
    return xt.transposed();
}

struct BarrierState {
    std::vector<double> w;      // unknowns (z plus optional slack)
    double objective = 0.0;     // c^T w
    double barrier_value = 0.0; // -sum logdet
    std::vector<DenseMatrix> factors;
    bool interior = false;
};

class BarrierSolver {
public:
    BarrierSolver(std::vector<CompiledConstraint> constraints, std::size_t unknowns,
                  bool with_slack, std::vector<double> objective,
                  std::vector<double> equality_row, double equality_rhs)
        : constraints_(std::move(constraints)), n_unknowns_(unknowns), with_slack_(with_slack),
          c_(std::move(objective)), eq_row_(std::move(equality_row)), eq_rhs_(equality_rhs) {
        total_dim_ = 0;
        for (const auto& c : constraints_) total_dim_ += c.dim;
    }

    std::size_t dim() const { return n_unknowns_ + (with_slack_ ? 1 : 0); }
    double slack_of(const std::vector<double>& w) const { return with_slack_ ? w.back() : 0.0; }

    bool evaluate(const std::vector<double>& w, BarrierState& st) const {
        st.w = w;
        st.factors.resize(constraints_.size());
        st.barrier_value = 0.0;
        st.objective = kernels::dot(c_.data(), w.data(), w.size());
        const double slack = slack_of(w);
        for (std::size_t ci = 0; ci < constraints_.size(); ++ci) {
            const DenseMatrix s = constraint_value(constraints_[ci], w, slack);
            SymmetricMatrix sym(s.rows());
            for (std::size_t i = 0; i < s.rows(); ++i)
                for (std::size_t j = 0; j <= i; ++j) sym.at(i, j) = s(i, j);
            if (!cholesky(sym, st.factors[ci])) { st.interior = false; return false; }
            st.barrier_value -= cholesky_logdet(st.factors[ci]);
        }
        st.interior = true;
        return true;
    }

    // One centering stage at fixed mu. Returns false once the iteration
    // budget is exhausted.
    bool center(BarrierState& st, double mu, int& iterations, int budget,
                const std::function<bool(const BarrierState&)>& stop_early) {
        const std::size_t nw = dim();
        const bool has_eq = !eq_row_.empty();
        const std::size_t sys = nw + (has_eq ? 1 : 0);

        for (int inner = 0; inner < 64; ++inner) {
            if (iterations >= budget) return false;
            ++iterations;

            // Gradient and Hessian of mu*f0 + barrier at the current point.
            std::vector<double> grad(nw, 0.0);
            for (std::size_t k = 0; k < nw; ++k) grad[k] = -mu * c_[k];
            DenseMatrix hess(nw, nw);

            for (std::size_t ci = 0; ci < constraints_.size(); ++ci) {
                const auto& cons = constraints_[ci];
                const DenseMatrix& l = st.factors[ci];
                std::vector<std::pair<std::size_t, DenseMatrix>> whitened;
                whitened.reserve(cons.terms.size() + 1);
                for (const auto& [k, g] : cons.terms)
                    whitened.emplace_back(k, whiten(l, g));
                if (with_slack_) {
                    DenseMatrix gm = DenseMatrix::identity(cons.dim).scaled(-1.0);
                    whitened.emplace_back(nw - 1, whiten(l, gm));
                }
                for (const auto& [k, gh] : whitened) {
                    double tr = 0.0;
                    for (std::size_t i = 0; i < cons.dim; ++i) tr += gh(i, i);
                    grad[k] -= tr;
                }
                for (std::size_t a = 0; a < whitened.size(); ++a) {
                    for (std::size_t b = a; b < whitened.size(); ++b) {
                        const double h = kernels::dot(whitened[a].second.data(),
                                                      whitened[b].second.data(),
                                                      cons.dim * cons.dim);
                        hess(whitened[a].first, whitened[b].first) += h;
                        if (whitened[a].first != whitened[b].first)
                            hess(whitened[b].first, whitened[a].first) += h;
                    }
                }
            }

            double diag_max = 0.0;
            for (std::size_t k = 0; k < nw; ++k) diag_max = std::max(diag_max, hess(k, k));
            const double reg = 1e-12 * std::max(1.0, diag_max);
            for (std::size_t k = 0; k < nw; ++k) hess(k, k) += reg;

            // Newton step; the optional trace normalization enters as a KKT row.
            DenseMatrix kkt(sys, sys);
            DenseMatrix rhs(sys, 1);
            kkt.set_block(0, 0, hess);
            for (std::size_t k = 0; k < nw; ++k) rhs(k, 0) = -grad[k];
            if (has_eq) {
                double drift = eq_rhs_;
                for (std::size_t k = 0; k < eq_row_.size(); ++k) {
                    kkt(k, nw) = eq_row_[k];
                    kkt(nw, k) = eq_row_[k];
                    drift -= eq_row_[k] * st.w[k];
                }
                rhs(nw, 0) = drift;
            }
            DenseMatrix sol = solve_linear(kkt, rhs);
            std::vector<double> step(nw);
            for (std::size_t k = 0; k < nw; ++k) step[k] = sol(k, 0);

            double descent = 0.0;
            for (std::size_t k = 0; k < nw; ++k) descent += grad[k] * step[k];
            const double decrement = -descent;

            // Backtracking line search on mu*f0 + barrier.
            const double f_cur = -mu * st.objective + st.barrier_value;
            double alpha = 1.0;
            BarrierState trial;
            bool accepted = false;
            for (int ls = 0; ls < 60; ++ls) {
                std::vector<double> wt(nw);
                for (std::size_t k = 0; k < nw; ++k) wt[k] = st.w[k] + alpha * step[k];
                if (evaluate(wt, trial)) {
                    const double f_new = -mu * trial.objective + trial.barrier_value;
                    if (f_new <= f_cur + 0.25 * alpha * descent) { accepted = true; break; }
                }
                alpha *= 0.5;
            }
            if (!accepted) return true; // stuck: centering cannot improve further
            st = trial;

            if (stop_early && stop_early(st)) return true;
            if (decrement * 0.5 <= 1e-10) return true;
        }
        return true;
    }

    double total_dim() const { return static_cast<double>(total_dim_); }

private:
    std::vector<CompiledConstraint> constraints_;
    std::size_t n_unknowns_;
    bool with_slack_;
    std::vector<double> c_;
    std::vector<double> eq_row_;
    double eq_rhs_ = 0.0;
    std::size_t total_dim_ = 0;
};

std::vector<double> pack_initial(const AffineLmiProblem& problem, const Layout& layout) {
    std::vector<double> z(layout.count, 0.0);
    for (std::size_t k = 0; k < layout.count; ++k) {
        const auto& e = layout.entries[k];
        const auto& var = problem.variables[e.variable];
        if (var.kind == VariableSpec::Kind::Symmetric && e.i == e.j) z[k] = 1.0;
    }
    if (problem.normalization) {
        const auto& norm = *problem.normalization;
        bool found = false;
        for (std::size_t v = 0; v < problem.variables.size(); ++v) {
            const auto& var = problem.variables[v];
            if (var.name != norm.variable) continue;
            if (var.kind != VariableSpec::Kind::Symmetric)
                fail(ErrorKind::InvalidInput, "trace normalization needs a symmetric variable");
            const double scale = norm.target / static_cast<double>(var.pattern.n);
            if (!(scale > 0.0))
                fail(ErrorKind::InvalidInput, "trace normalization target must be positive");
            for (std::size_t k = 0; k < layout.count; ++k) {
                const auto& e = layout.entries[k];
                if (e.variable == v && e.i == e.j) z[k] = scale;
            }
            found = true;
        }
        if (!found)
            fail(ErrorKind::InvalidInput, "trace normalization references unknown variable");
    }
    return z;
}

std::vector<double> equality_row(const AffineLmiProblem& problem, const Layout& layout,
                                 std::size_t padded_size) {
    std::vector<double> row;
    if (!problem.normalization) return row;
    row.assign(padded_size, 0.0);
    for (std::size_t k = 0; k < layout.count; ++k) {
        const auto& e = layout.entries[k];
        if (problem.variables[e.variable].name == problem.normalization->variable && e.i == e.j)
            row[k] = 1.0;
    }
    return row;
}

std::vector<double> oriented_residuals(const AffineLmiProblem& problem, const Assignment& a) {
    std::vector<double> residuals;
    residuals.reserve(problem.constraints.size());
    for (const auto& c : problem.constraints) {
        const DenseMatrix s = oriented_eval(c, a);
        const SymEig eig = sym_eig(SymmetricMatrix::from_dense(s, 1e-7));
        residuals.push_back(eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front());
    }
    return residuals;
}

} // namespace

Assignment initial_assignment(const AffineLmiProblem& problem) {
    const Layout layout = build_layout(problem);
    return unpack(problem, layout, pack_initial(problem, layout));
}

FeasibilityResult solve(const AffineLmiProblem& problem, int budget) {
    if (budget < 1)
        fail(ErrorKind::InvalidInput, "solve: budget must be at least 1");
    if (problem.constraints.empty() || problem.variables.empty())
        fail(ErrorKind::InvalidInput, "solve: problem needs variables and constraints");
    if (!(problem.margin >= 0.0))
        fail(ErrorKind::InvalidInput, "solve: margin must be nonnegative");

    const Layout layout = build_layout(problem);
    std::vector<CompiledConstraint> compiled = compile(problem, layout);

    std::vector<double> z0 = pack_initial(problem, layout);

    // Initial slack strictly below the smallest eigenvalue across constraints.
    double min_eig = 0.0;
    {
        const Assignment a0 = unpack(problem, layout, z0);
        bool first = true;
        for (const auto& c : problem.constraints) {
            const DenseMatrix s = oriented_eval(c, a0);
            const SymEig eig = sym_eig(SymmetricMatrix::from_dense(s, 1e-7));
            const double lmin = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
            min_eig = first ? lmin : std::min(min_eig, lmin);
            first = false;
        }
    }
    const double t0 = min_eig - std::max(1.0, 0.1 * std::abs(min_eig));

    const std::size_t nw = layout.count + 1;
    std::vector<double> c_vec(nw, 0.0);
    c_vec.back() = 1.0; // maximize the slack
    BarrierSolver solver(std::move(compiled), layout.count, true, c_vec,
                         equality_row(problem, layout, nw), // padded row; slack has weight 0
                         problem.normalization ? problem.normalization->target : 0.0);

    std::vector<double> w0 = z0;
    w0.push_back(t0);
    BarrierState st;
    if (!solver.evaluate(w0, st))
        fail(ErrorKind::InvalidInput, "solve: failed to construct an interior starting point");

    const double exit_slack = problem.margin + std::max(1e-9, 0.05 * problem.margin);
    auto reached = [&](const BarrierState& s) { return s.w.back() > exit_slack; };

    int iterations = 0;
    double mu = 1.0;
    bool within_budget = true;
    for (int outer = 0; outer < 64 && within_budget; ++outer) {
        within_budget = solver.center(st, mu, iterations, budget, reached);
        if (reached(st)) break;
        if (solver.total_dim() / mu < 1e-9) break; // converged: optimum below the margin
        mu *= 10.0;
    }

    FeasibilityResult result;
    result.iterations = iterations;
    std::vector<double> z(st.w.begin(), st.w.begin() + layout.count);
    result.assignment = unpack(problem, layout, z);
    result.residuals = oriented_residuals(problem, result.assignment);
    result.min_residual = result.residuals.empty()
                              ? 0.0
                              : *std::min_element(result.residuals.begin(), result.residuals.end());
    result.status = (reached(st) && result.min_residual > problem.margin - kValidationTol)
                        ? SolveStatus::Feasible
                        : SolveStatus::BudgetExhausted;
    return result;
}

CheckReport check(const AffineLmiProblem& problem, const Assignment& assignment) {
    CheckReport report;
    for (const auto& var : problem.variables) {
        const auto it = assignment.find(var.name);
        if (it == assignment.end())
            fail(ErrorKind::InvalidInput, "check: assignment is missing variable " + var.name);
        const DenseMatrix& m = it->second;
        if (var.kind == VariableSpec::Kind::Symmetric) {
            if (m.rows() != var.pattern.n || m.cols() != var.pattern.n)
                fail(ErrorKind::Dimension, "check: wrong shape for variable " + var.name);
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < i; ++j)
                    if (!var.pattern.is_free(i, j) && (m(i, j) != 0.0 || m(j, i) != 0.0))
                        ++report.pattern_violations;
        } else {
            if (m.rows() != var.rows || m.cols() != var.cols)
                fail(ErrorKind::Dimension, "check: wrong shape for variable " + var.name);
            if (!var.free_mask.empty())
                for (std::size_t i = 0; i < var.rows; ++i)
                    for (std::size_t j = 0; j < var.cols; ++j)
                        if (!var.free_mask[i * var.cols + j] && m(i, j) != 0.0)
                            ++report.pattern_violations;
        }
    }
    report.residuals = oriented_residuals(problem, assignment);
    report.min_residual = report.residuals.empty()
                              ? 0.0
                              : *std::min_element(report.residuals.begin(), report.residuals.end());
    report.pass = report.pattern_violations == 0 &&
                  report.min_residual > problem.margin - kValidationTol;
    return report;
}

MinimizeResult minimize_scalar(const AffineLmiProblem& problem, const std::string& objective_var,
                               const Assignment& initial, int budget) {
    const Layout layout = build_layout(problem);
    std::vector<CompiledConstraint> compiled = compile(problem, layout);

    // Objective vector: minimize the named scalar = maximize its negative.
    std::vector<double> c_vec(layout.count, 0.0);
    std::size_t obj_index = layout.count;
    for (std::size_t k = 0; k < layout.count; ++k) {
        const auto& e = layout.entries[k];
        const auto& var = problem.variables[e.variable];
        if (var.name == objective_var) {
            if (var.rows != 1 || var.cols != 1 || var.kind != VariableSpec::Kind::Rectangular)
                fail(ErrorKind::InvalidInput, "minimize_scalar: objective must be a 1x1 variable");
            obj_index = k;
            c_vec[k] = -1.0;
        }
    }
    if (obj_index == layout.count)
        fail(ErrorKind::InvalidInput, "minimize_scalar: objective variable not found");

    // Pack the caller's starting point.
    std::vector<double> w0(layout.count, 0.0);
    for (std::size_t k = 0; k < layout.count; ++k) {
        const auto& e = layout.entries[k];
        const auto it = initial.find(problem.variables[e.variable].name);
        if (it == initial.end())
            fail(ErrorKind::InvalidInput, "minimize_scalar: initial point is missing a variable");
        w0[k] = it->second(e.i, e.j);
    }

    BarrierSolver solver(std::move(compiled), layout.count, false, c_vec,
                         equality_row(problem, layout, layout.count),
                         problem.normalization ? problem.normalization->target : 0.0);
    BarrierState st;
    if (!solver.evaluate(w0, st))
        fail(ErrorKind::InvalidInput, "minimize_scalar: initial point is not strictly feasible");

    int iterations = 0;
    double mu = 1.0;
    bool converged = false;
    bool within_budget = true;
    for (int outer = 0; outer < 64 && within_budget; ++outer) {
        within_budget = solver.center(st, mu, iterations, budget, nullptr);
        const double objective = st.w[obj_index];
        if (solver.total_dim() / mu < 1e-8 * std::max(1.0, std::abs(objective))) {
            converged = true;
            break;
        }
        mu *= 10.0;
    }

    MinimizeResult result;
    result.assignment = unpack(problem, layout, st.w);
    result.objective = st.w[obj_index];
    result.iterations = iterations;
    result.converged = converged;
    return result;
}

} // namespace deltaiss::sdp
