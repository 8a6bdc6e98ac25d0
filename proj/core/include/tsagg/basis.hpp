#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tsagg/lp.hpp"

namespace tsagg {

/// Solved timestep: its right-hand side, the optimal solution and the tight
/// rows at that solution.
struct TimestepResult {
    Eigen::VectorXd rhs;
    LpSolution solution;
    ActiveSet active;
};

/// Qualitative readout of a basis: congested corridors, generators at full
/// load, price-setting generator(s) and nodal prices.
struct BasisDescriptor {
    std::vector<std::string> congested;
    std::vector<std::string> full_load;
    std::vector<std::string> marginal;
    std::vector<double> lmp;  // per node, network order
    std::string report_node;
    double report_lmp = 0.0;
};

struct BasisGroup {
    std::size_t id = 0;  // zero-based; printed as id + 1
    ActiveSet active_set;
    std::vector<std::size_t> members;  // zero-based timesteps, ascending
    std::size_t weight = 0;
    Eigen::VectorXd centroid;

    /// Per-timestep optimal dual of the first member, and the aggregated
    /// dual W * y.
    Eigen::VectorXd member_dual;
    Eigen::VectorXd dual_rep;

    /// Filled from the aggregated solve: primal of this block and its
    /// objective contribution W * c'x.
    Eigen::VectorXd primal_rep;
    double aggregated_ov = 0.0;

    /// Tight rows exceed the vertex dimension at some member, or members
    /// returned different duals.
    bool degenerate = false;
    double dual_spread = 0.0;
    /// A tight inequality row or a variable at zero has zero reduced cost,
    /// so the optimal primal of the members is not unique.
    bool alternative_optima = false;

    BasisDescriptor descriptor;

    std::size_t label() const { return id + 1; }
    /// b̄' ȳ, the dual-side objective contribution.
    double dual_ov() const { return centroid.dot(dual_rep); }
};

struct DegeneracyRecord {
    std::size_t basis = 0;
    std::size_t timestep = 0;
    std::string reason;
};

struct BasisSet {
    std::vector<BasisGroup> groups;
    std::size_t horizon = 0;
    /// Shared cost, matrix and row kinds; rhs left empty.
    LpStandardForm lp_template;
    /// basis_of[t] is the group id of timestep t.
    std::vector<std::size_t> basis_of;
    std::vector<DegeneracyRecord> degeneracy;

    std::size_t size() const { return groups.size(); }
    /// Members disjoint and covering 0..horizon-1, active sets distinct,
    /// weights and centroids consistent. Throws ContractError.
    void validate() const;
};

/// Groups timesteps by their tight-row set. Groups are numbered by their
/// smallest member timestep. Throws ContractError on a non-optimal member or
/// on inconsistent dimensions.
BasisSet group_bases(const LpStandardForm& lp_template, std::span<const TimestepResult> per_timestep);

/// Block-diagonal LP: block b has cost weights[b] * c, matrix A and rhs rhs[b].
LpStandardForm build_block_lp(const LpStandardForm& lp_template, std::span<const double> weights,
                              std::span<const Eigen::VectorXd> rhs);

/// One block per basis with cost c * W_i and rhs b̄_i.
LpStandardForm build_aggregated_lp(const BasisSet& bs);

/// Per-block primal, dual and objective contribution of a block LP solution.
struct BlockSolution {
    std::vector<Eigen::VectorXd> primal;
    std::vector<Eigen::VectorXd> dual;
    std::vector<double> objective;
};

BlockSolution split_block_solution(const LpStandardForm& lp_template, std::span<const double> weights,
                                   const LpSolution& solution);

/// Solves the aggregated LP and stores primal_rep and aggregated_ov on every
/// group. Returns the block solution. Throws SolverError if not optimal.
BlockSolution solve_aggregated(BasisSet& bs);

struct ExactnessTolerances {
    double objective = 1e-9;  // relative
    double primal = 1e-8;     // scaled by max(1, |x|)
    double dual = 1e-8;       // scaled by max(1, |y|)
};

struct ExactnessReport {
    double full_ov = 0.0;
    double aggregated_ov = 0.0;
    double objective_residual = 0.0;  // relative
    std::vector<double> primal_residual;  // per basis
    std::vector<double> dual_residual;    // per basis
    double max_primal_residual = 0.0;
    double max_dual_residual = 0.0;  // over non-degenerate bases
    std::vector<std::size_t> degenerate_bases;  // either flag set
    std::vector<std::size_t> alternative_optima_bases;
    std::size_t degenerate_timesteps = 0;
    bool pass = false;
};

/// Compares the full per-timestep solutions with the aggregated solution.
/// Dual residuals of degenerate bases and primal residuals of bases with
/// alternative optima are reported but do not fail the check, since those
/// solutions are not unique. max_primal_residual covers the other bases.
ExactnessReport check_exactness(std::span<const TimestepResult> full, const BasisSet& bs,
                                const BlockSolution& aggregated, const ExactnessTolerances& tol = {});

}  // namespace tsagg
