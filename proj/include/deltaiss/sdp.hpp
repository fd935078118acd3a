#pragma once

#include "deltaiss/matrix.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace deltaiss::sdp {

/// Which entries of a symmetric matrix variable are free. Stored as
/// lower-triangle index pairs; diagonal entries are always free and do not
/// need to be listed. The implied full matrix is symmetric by construction.
struct SparsityPattern {
    std::size_t n = 0;
    std::vector<std::pair<std::size_t, std::size_t>> off_diagonal; // i > j

    static SparsityPattern diagonal(std::size_t n);
    static SparsityPattern full(std::size_t n);
    /// Free off-diagonals only between coordinates not in `zero_rows`; the
    /// structure required when those rows/columns must vanish off-diagonal.
    static SparsityPattern with_zero_rows(std::size_t n, const std::vector<bool>& zero_rows);

    bool is_free(std::size_t i, std::size_t j) const;
    std::size_t unknown_count() const { return n + off_diagonal.size(); }
};

/// A matrix unknown of an LMI problem: either a patterned symmetric matrix
/// or a general rectangular matrix with an optional forced-zero mask.
struct VariableSpec {
    enum class Kind { Symmetric, Rectangular };

    std::string name;
    Kind kind = Kind::Symmetric;
    SparsityPattern pattern;                   // Symmetric
    std::size_t rows = 0, cols = 0;            // Rectangular
    std::vector<std::uint8_t> free_mask;       // Rectangular; empty = all free

    static VariableSpec symmetric(std::string name, SparsityPattern pattern);
    static VariableSpec rectangular(std::string name, std::size_t rows, std::size_t cols);
    static VariableSpec rectangular(std::string name, std::size_t rows, std::size_t cols,
                                    std::vector<std::uint8_t> free_mask);
    static VariableSpec scalar(std::string name);

    std::size_t unknown_count() const;
};

/// Variable values by name; symmetric variables are materialized as full
/// square matrices.
using Assignment = std::map<std::string, DenseMatrix>;

/// One affine matrix-inequality constraint. `map` must be affine in the
/// declared variables; the solver verifies this when compiling the problem.
/// PositiveDefinite means map(z) >= margin*I, NegativeDefinite means
/// map(z) <= -margin*I.
struct LmiConstraint {
    enum class Sense { PositiveDefinite, NegativeDefinite };

    std::string name;
    std::size_t dim = 0;
    Sense sense = Sense::PositiveDefinite;
    std::function<DenseMatrix(const Assignment&)> map;
};

/// trace(variable) = target, used to pin the scale of homogeneous problems.
struct TraceNormalization {
    std::string variable;
    double target = 1.0;
};

struct AffineLmiProblem {
    std::vector<VariableSpec> variables;
    std::vector<LmiConstraint> constraints;
    std::optional<TraceNormalization> normalization;
    double margin = 1e-6;
};

enum class SolveStatus { Feasible, BudgetExhausted };

struct FeasibilityResult {
    SolveStatus status = SolveStatus::BudgetExhausted;
    Assignment assignment;          // best point found (also on BudgetExhausted)
    std::vector<double> residuals;  // per-constraint smallest eigenvalue (oriented)
    double min_residual = 0.0;
    int iterations = 0;             // Newton iterations spent

    bool feasible() const { return status == SolveStatus::Feasible; }
};

/// Validation slack: a Feasible result must keep every residual above
/// margin - kValidationTol.
inline constexpr double kValidationTol = 1e-8;

/// Log-barrier interior-point search for a strictly feasible point:
/// maximize t subject to constraint_i(z) >= t*I, stopping once t clears the
/// margin. Deterministic for a given problem and budget. BudgetExhausted
/// means "no feasible point found", never a proof of infeasibility.
FeasibilityResult solve(const AffineLmiProblem& problem, int budget = 500);

struct CheckReport {
    std::vector<double> residuals; // per-constraint smallest eigenvalue (oriented)
    double min_residual = 0.0;
    int pattern_violations = 0;    // nonzero entries outside the declared structure
    bool pass = false;             // no violations and residuals > margin - kValidationTol
};

/// Exact evaluation of every constraint at the given assignment.
CheckReport check(const AffineLmiProblem& problem, const Assignment& assignment);

struct MinimizeResult {
    Assignment assignment;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Minimizes the value of a declared scalar (1x1) variable subject to
/// constraint_i(z) > 0, starting from a strictly feasible `initial` point.
MinimizeResult minimize_scalar(const AffineLmiProblem& problem, const std::string& objective_var,
                               const Assignment& initial, int budget = 500);

/// Identity-on-the-pattern starting point (rectangular variables start at 0);
/// also the solver's own initialization.
Assignment initial_assignment(const AffineLmiProblem& problem);

} // namespace deltaiss::sdp
