#include "tsagg/basis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "tsagg/error.hpp"

namespace tsagg {

void BasisSet::validate() const {
    if (groups.size() > horizon) throw ContractError("basis set: more bases than timesteps");
    std::vector<char> seen(horizon, 0);
    std::unordered_map<ActiveSet, std::size_t, ActiveSetHash> keys;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto& g = groups[i];
        if (g.id != i) throw ContractError("basis set: group " + std::to_string(i) + " has id " + std::to_string(g.id));
        if (g.members.empty() || g.weight != g.members.size()) {
            throw ContractError("basis set: basis " + std::to_string(g.label()) + " weight does not match its members");
        }
        for (std::size_t t : g.members) {
            if (t >= horizon || seen[t]) {
                throw ContractError("basis set: timestep " + std::to_string(t) + " missing or assigned twice");
            }
            seen[t] = 1;
        }
        if (!keys.emplace(g.active_set, i).second) {
            throw ContractError("basis set: bases share an active set");
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        throw ContractError("basis set: members do not cover the horizon");
    }
}

namespace {

// Some nonbasic direction has zero reduced cost: a tight inequality row with
// zero dual, or a variable at zero whose reduced cost vanishes.
bool has_alternative_optima(const LpStandardForm& lp, const TimestepResult& r) {
    const Eigen::VectorXd& y = r.solution.dual;
    const double tol = 1e-9 * std::max(1.0, y.cwiseAbs().maxCoeff());
    const std::size_t m = lp.rows();
    for (std::size_t i : r.active.indices) {
        if (i < m) {
            if (lp.row_kind[i] != RowKind::equal && std::abs(y(static_cast<Eigen::Index>(i))) <= tol) return true;
        } else {
            const auto j = static_cast<Eigen::Index>(i - m);
            if (std::abs(lp.cost(j) - lp.matrix.col(j).dot(y)) <= tol) return true;
        }
    }
    return false;
}

}  // namespace

BasisSet group_bases(const LpStandardForm& lp_template, std::span<const TimestepResult> per_timestep) {
    BasisSet bs;
    bs.horizon = per_timestep.size();
    bs.lp_template = lp_template;
    bs.lp_template.rhs = Eigen::VectorXd();
    bs.basis_of.assign(per_timestep.size(), 0);

    const auto rows = static_cast<Eigen::Index>(lp_template.rows());
    std::unordered_map<ActiveSet, std::size_t, ActiveSetHash> index;
    std::vector<Eigen::VectorXd> sums;

    for (std::size_t t = 0; t < per_timestep.size(); ++t) {
        const TimestepResult& r = per_timestep[t];
        if (r.solution.status != LpStatus::optimal) {
            throw ContractError("group_bases: timestep " + std::to_string(t + 1) + " is " + to_string(r.solution.status));
        }
        if (r.rhs.size() != rows || r.solution.dual.size() != rows) {
            throw ContractError("group_bases: timestep " + std::to_string(t + 1) + " does not match the LP template");
        }
        auto [it, inserted] = index.emplace(r.active, bs.groups.size());
        if (inserted) {
            BasisGroup g;
            g.id = bs.groups.size();
            g.active_set = r.active;
            g.member_dual = r.solution.dual;
            bs.groups.push_back(std::move(g));
            sums.push_back(Eigen::VectorXd::Zero(rows));
        }
        BasisGroup& g = bs.groups[it->second];
        g.members.push_back(t);
        sums[g.id] += r.rhs;
        bs.basis_of[t] = g.id;

        if (inserted && has_alternative_optima(lp_template, r)) {
            g.alternative_optima = true;
            bs.degeneracy.push_back({g.id, t, "alternative optima"});
        }
        if (r.active.indices.size() > lp_template.cols()) {
            g.degenerate = true;
            if (inserted) bs.degeneracy.push_back({g.id, t, "tight rows exceed vertex dimension"});
        }
        const double spread = (r.solution.dual - g.member_dual).cwiseAbs().maxCoeff();
        const double scale = std::max(1.0, g.member_dual.cwiseAbs().maxCoeff());
        if (spread > g.dual_spread) g.dual_spread = spread;
        if (spread > 1e-7 * scale) {
            if (!g.degenerate || bs.degeneracy.empty() || bs.degeneracy.back().basis != g.id) {
                bs.degeneracy.push_back({g.id, t, "member duals differ"});
            }
            g.degenerate = true;
        }
    }

    for (auto& g : bs.groups) {
        g.weight = g.members.size();
        g.centroid = sums[g.id] / static_cast<double>(g.weight);
        g.dual_rep = static_cast<double>(g.weight) * g.member_dual;
    }
    return bs;
}

LpStandardForm build_block_lp(const LpStandardForm& lp_template, std::span<const double> weights,
                              std::span<const Eigen::VectorXd> rhs) {
    if (weights.size() != rhs.size()) throw ContractError("build_block_lp: weights and rhs differ in length");
    const auto m = static_cast<Eigen::Index>(lp_template.rows());
    const auto n = static_cast<Eigen::Index>(lp_template.cols());
    const auto blocks = static_cast<Eigen::Index>(weights.size());

    LpStandardForm lp;
    lp.cost = Eigen::VectorXd::Zero(n * blocks);
    lp.matrix = Eigen::MatrixXd::Zero(m * blocks, n * blocks);
    lp.rhs = Eigen::VectorXd::Zero(m * blocks);
    lp.row_kind.reserve(static_cast<std::size_t>(m * blocks));
    for (Eigen::Index b = 0; b < blocks; ++b) {
        const auto& block_rhs = rhs[static_cast<std::size_t>(b)];
        if (block_rhs.size() != m) throw ContractError("build_block_lp: rhs block has wrong length");
        lp.cost.segment(b * n, n) = weights[static_cast<std::size_t>(b)] * lp_template.cost;
        lp.matrix.block(b * m, b * n, m, n) = lp_template.matrix;
        lp.rhs.segment(b * m, m) = block_rhs;
        lp.row_kind.insert(lp.row_kind.end(), lp_template.row_kind.begin(), lp_template.row_kind.end());
    }
    return lp;
}

LpStandardForm build_aggregated_lp(const BasisSet& bs) {
    std::vector<double> weights;
    std::vector<Eigen::VectorXd> rhs;
    for (const auto& g : bs.groups) {
        weights.push_back(static_cast<double>(g.weight));
        rhs.push_back(g.centroid);
    }
    return build_block_lp(bs.lp_template, weights, rhs);
}

BlockSolution split_block_solution(const LpStandardForm& lp_template, std::span<const double> weights,
                                   const LpSolution& solution) {
    if (solution.status != LpStatus::optimal) {
        throw SolverError("block LP is " + to_string(solution.status));
    }
    const auto m = static_cast<Eigen::Index>(lp_template.rows());
    const auto n = static_cast<Eigen::Index>(lp_template.cols());
    BlockSolution out;
    for (std::size_t b = 0; b < weights.size(); ++b) {
        const auto i = static_cast<Eigen::Index>(b);
        Eigen::VectorXd x = solution.primal.segment(i * n, n);
        out.objective.push_back(weights[b] * lp_template.cost.dot(x));
        out.primal.push_back(std::move(x));
        out.dual.push_back(solution.dual.segment(i * m, m));
    }
    return out;
}

BlockSolution solve_aggregated(BasisSet& bs) {
    const LpStandardForm lp = build_aggregated_lp(bs);
    const LpSolution sol = solve_lp(lp);
    std::vector<double> weights;
    for (const auto& g : bs.groups) weights.push_back(static_cast<double>(g.weight));
    BlockSolution blocks = split_block_solution(bs.lp_template, weights, sol);
    for (auto& g : bs.groups) {
        g.primal_rep = blocks.primal[g.id];
        g.aggregated_ov = blocks.objective[g.id];
    }
    return blocks;
}

ExactnessReport check_exactness(std::span<const TimestepResult> full, const BasisSet& bs,
                                const BlockSolution& aggregated, const ExactnessTolerances& tol) {
    if (full.size() != bs.horizon) throw ContractError("check_exactness: horizon mismatch");
    if (aggregated.primal.size() != bs.groups.size() || aggregated.dual.size() != bs.groups.size()) {
        throw ContractError("check_exactness: aggregated solution has the wrong number of blocks");
    }
    ExactnessReport rep;
    for (const auto& r : full) rep.full_ov += r.solution.objective;
    for (double ov : aggregated.objective) rep.aggregated_ov += ov;
    rep.objective_residual = std::abs(rep.full_ov - rep.aggregated_ov) / std::max(1.0, std::abs(rep.full_ov));

    for (const auto& g : bs.groups) {
        const Eigen::VectorXd& xbar = aggregated.primal[g.id];
        if (xbar.size() != full[g.members.front()].solution.primal.size()) {
            throw ContractError("check_exactness: primal dimension mismatch");
        }
        Eigen::VectorXd avg = Eigen::VectorXd::Zero(xbar.size());
        for (std::size_t t : g.members) avg += full[t].solution.primal;
        avg /= static_cast<double>(g.weight);
        const double primal_res = (avg - xbar).cwiseAbs().maxCoeff() / std::max(1.0, xbar.cwiseAbs().maxCoeff());

        const Eigen::VectorXd& ybar = aggregated.dual[g.id];
        double dual_res = 0.0;
        for (std::size_t t : g.members) {
            const Eigen::VectorXd scaled = static_cast<double>(g.weight) * full[t].solution.dual;
            dual_res = std::max(dual_res, (ybar - scaled).cwiseAbs().maxCoeff() / std::max(1.0, ybar.cwiseAbs().maxCoeff()));
        }
        rep.primal_residual.push_back(primal_res);
        rep.dual_residual.push_back(dual_res);
        if (g.alternative_optima) {
            rep.alternative_optima_bases.push_back(g.id);
        } else {
            rep.max_primal_residual = std::max(rep.max_primal_residual, primal_res);
        }
        if (g.degenerate || g.alternative_optima) rep.degenerate_bases.push_back(g.id);
        if (!g.degenerate) rep.max_dual_residual = std::max(rep.max_dual_residual, dual_res);
    }
    for (const auto& r : full) {
        if (r.active.indices.size() > bs.lp_template.cols()) ++rep.degenerate_timesteps;
    }
    rep.pass = rep.objective_residual <= tol.objective && rep.max_primal_residual <= tol.primal &&
               rep.max_dual_residual <= tol.dual;
    return rep;
}

}  // namespace tsagg
