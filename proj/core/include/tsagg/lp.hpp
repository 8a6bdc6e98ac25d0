#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tsagg {

inline constexpr double kTolFeasibility = 1e-9;
inline constexpr double kTolActive = 1e-7;
inline constexpr double kTolDuality = 1e-8;

enum class RowKind { less_equal, greater_equal, equal };

/// min cost'x  s.t.  matrix.row(i) x (<=|>=|=) rhs(i),  x >= 0.
///
/// Duals follow the sensitivity convention: dual(i) is the change of the
/// optimal objective per unit increase of rhs(i). Hence dual <= 0 on `<=`
/// rows, dual >= 0 on `>=` rows, free on `=` rows, and rhs'dual equals
/// cost'x at optimality.
struct LpStandardForm {
    Eigen::VectorXd cost;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
    std::vector<RowKind> row_kind;

    std::size_t rows() const { return static_cast<std::size_t>(matrix.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(matrix.cols()); }

    /// Throws ValidationError on inconsistent dimensions or non-finite data.
    void validate() const;

    bool operator==(const LpStandardForm& other) const;
};

enum class LpStatus { optimal, infeasible, unbounded };

std::string to_string(LpStatus status);

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Eigen::VectorXd primal;
    Eigen::VectorXd dual;
    double objective = 0.0;

    /// Basic columns at termination in the solver's internal numbering
    /// (structural columns first, then one slack per inequality row).
    std::vector<std::size_t> basis;
    /// Some basic variable sits at zero: the vertex is primal degenerate.
    bool degenerate = false;
    int iterations = 0;

    /// Infeasible only: the first row whose artificial variable could not be
    /// driven to zero, and the phase-one multipliers (a Farkas certificate in
    /// original row orientation).
    std::optional<std::size_t> infeasible_row;
    Eigen::VectorXd farkas;

    /// Unbounded only: a direction d >= 0 with cost'd < 0 along which the
    /// feasible set is unbounded.
    Eigen::VectorXd ray;
};

struct SimplexOptions {
    /// 0 selects 50 * (rows + columns) + 1000.
    int max_iterations = 0;
    /// Consecutive degenerate pivots before switching to Bland's rule.
    int stall_limit = 50;
    int refactor_period = 64;
};

/// Dense revised simplex: Devex pricing, Bland's rule once the objective
/// stalls. Deterministic for identical input. Throws SolverError if the
/// iteration guard trips.
LpSolution solve_lp(const LpStandardForm& lp, const SimplexOptions& options = {});

/// Sorted row indices that hold with equality at the solution. Indices in
/// [rows, rows + cols) encode an active lower bound x_j >= 0 as rows + j.
struct ActiveSet {
    std::vector<std::size_t> indices;

    bool contains(std::size_t index) const;
    bool operator==(const ActiveSet&) const = default;
    auto operator<=>(const ActiveSet&) const = default;

    /// Compact text key, e.g. "0;3;17".
    std::string key() const;
};

struct ActiveSetHash {
    std::size_t operator()(const ActiveSet& set) const noexcept;
};

ActiveSet extract_active_set(const LpStandardForm& lp, const LpSolution& solution,
                             double tol_active = kTolActive);

/// Primal objective equals dual objective within tol * max(1, |objective|),
/// duals carry the right signs, reduced costs are non-negative and
/// complementary slackness holds row- and column-wise.
bool verify_strong_duality(const LpStandardForm& lp, const LpSolution& solution,
                           double tol = kTolDuality);

/// Largest violation of primal feasibility (rows and x >= 0), unscaled.
double primal_infeasibility(const LpStandardForm& lp, const Eigen::VectorXd& x);

}  // namespace tsagg
