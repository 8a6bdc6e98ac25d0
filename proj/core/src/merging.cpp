#include "tsagg/merging.hpp"

#include <algorithm>
#include <cmath>

#include "tsagg/error.hpp"

namespace tsagg {

namespace {

void check_ids(std::size_t n, std::span<const std::size_t> ids) {
    if (ids.empty()) throw ContractError("cluster is empty");
    for (std::size_t id : ids) {
        if (id >= n) throw ContractError("cluster references unknown basis " + std::to_string(id + 1));
    }
}

}  // namespace

WeightedCentroid merged_centroid(const BasisSet& bs, std::span<const std::size_t> ids) {
    check_ids(bs.size(), ids);
    if (ids.size() == 1) {
        const auto& g = bs.groups[ids.front()];
        return {static_cast<double>(g.weight), g.centroid};
    }
    WeightedCentroid out;
    out.centroid = Eigen::VectorXd::Zero(bs.groups[ids.front()].centroid.size());
    for (std::size_t id : ids) {
        const auto& g = bs.groups[id];
        out.weight += static_cast<double>(g.weight);
        out.centroid += static_cast<double>(g.weight) * g.centroid;
    }
    out.centroid /= out.weight;
    return out;
}

ComModel::ComModel(const BasisSet& bs) {
    const auto n = static_cast<Eigen::Index>(bs.size());
    cross_.resize(n, n);
    for (const auto& gi : bs.groups) {
        if (gi.dual_rep.size() != gi.centroid.size()) {
            throw ContractError("basis " + std::to_string(gi.label()) + " has no dual representative");
        }
        weight_.push_back(static_cast<double>(gi.weight));
        for (const auto& gh : bs.groups) {
            cross_(static_cast<Eigen::Index>(gi.id), static_cast<Eigen::Index>(gh.id)) = gi.centroid.dot(gh.dual_rep);
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) total_ov_ += cross_(i, i);
}

double ComModel::candidate_com(std::span<const std::size_t> cluster, std::size_t host) const {
    check_ids(size(), cluster);
    if (host >= size()) throw ContractError("unknown host basis " + std::to_string(host + 1));
    const auto h = static_cast<Eigen::Index>(host);
    double com = 0.0;
    for (std::size_t id : cluster) {
        const auto i = static_cast<Eigen::Index>(id);
        com += cross_(i, i) - (weight_[id] / weight_[host]) * cross_(i, h);
    }
    return com;
}

HostChoice ComModel::host(std::span<const std::size_t> cluster, double tie_rel) const {
    check_ids(size(), cluster);
    if (cluster.size() == 1) return {cluster.front(), 0.0, {}};

    std::vector<double> com(size());
    double members_ov = 0.0;
    for (std::size_t id : cluster) members_ov += basis_ov(id);
    for (std::size_t h = 0; h < size(); ++h) com[h] = candidate_com(cluster, h);

    const double best = *std::min_element(com.begin(), com.end());
    const double tol = tie_rel * std::max(1.0, std::abs(members_ov));
    HostChoice choice;
    bool found = false;
    for (std::size_t h = 0; h < size(); ++h) {
        if (com[h] > best + tol) continue;
        if (!found) {
            choice.host = h;
            choice.com = com[h];
            found = true;
        } else {
            choice.tied.push_back(h);
        }
    }
    return choice;
}

double ComModel::cluster_ov(std::span<const std::size_t> cluster, std::size_t host) const {
    check_ids(size(), cluster);
    if (cluster.size() == 1 && cluster.front() == host) return basis_ov(host);
    const auto h = static_cast<Eigen::Index>(host);
    double ov = 0.0;
    for (std::size_t id : cluster) ov += (weight_[id] / weight_[host]) * cross_(static_cast<Eigen::Index>(id), h);
    return ov;
}

double candidate_com(const BasisSet& bs, std::span<const std::size_t> cluster, std::size_t host) {
    return ComModel(bs).candidate_com(cluster, host);
}

HostChoice host_basis(const BasisSet& bs, std::span<const std::size_t> cluster) {
    return ComModel(bs).host(cluster);
}

MergeEvaluation com_partition(const Partition& p, const BasisSet& bs) {
    return com_partition(p, bs, ComModel(bs));
}

MergeEvaluation com_partition(const Partition& p, const BasisSet& bs, const ComModel& model) {
    p.validate(bs.size());
    MergeEvaluation eval;
    eval.partition = p;
    eval.ov_I = model.total_ov();
    for (const auto& ids : p.clusters()) {
        ClusterEvaluation c;
        c.bases = ids;
        const WeightedCentroid wc = merged_centroid(bs, ids);
        c.weight = wc.weight;
        c.centroid = wc.centroid;
        const HostChoice hc = model.host(ids);
        c.host = hc.host;
        c.tied_hosts = hc.tied;
        c.ov = model.cluster_ov(ids, hc.host);
        for (std::size_t id : ids) c.members_ov += model.basis_ov(id);
        c.com = c.members_ov - c.ov;
        eval.ov_K += c.ov;
        eval.clusters.push_back(std::move(c));
    }
    eval.com = eval.ov_I - eval.ov_K;
    return eval;
}

LpStandardForm build_merged_lp(const Partition& p, const BasisSet& bs) {
    p.validate(bs.size());
    std::vector<double> weights;
    std::vector<Eigen::VectorXd> rhs;
    for (const auto& ids : p.clusters()) {
        WeightedCentroid wc = merged_centroid(bs, ids);
        weights.push_back(wc.weight);
        rhs.push_back(std::move(wc.centroid));
    }
    return build_block_lp(bs.lp_template, weights, rhs);
}

std::string to_string(HostOutcome outcome) {
    switch (outcome) {
        case HostOutcome::match: return "match";
        case HostOutcome::boundary: return "boundary";
        case HostOutcome::violation: return "violation";
    }
    return "unknown";
}

HostAudit audit_host(const BasisSet& bs, const ClusterEvaluation& cluster) {
    LpStandardForm lp = bs.lp_template;
    lp.rhs = cluster.centroid;
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) {
        throw SolverError("LP at merged centroid is " + to_string(sol.status));
    }
    const ActiveSet solved = extract_active_set(lp, sol);

    HostAudit audit;
    audit.predicted_host = cluster.host;
    for (const auto& g : bs.groups) {
        if (g.active_set == solved) audit.solved_basis = g.id;
    }
    const ActiveSet& predicted = bs.groups[cluster.host].active_set;
    if (audit.solved_basis == cluster.host) {
        audit.outcome = HostOutcome::match;
    } else if (std::includes(solved.indices.begin(), solved.indices.end(), predicted.indices.begin(),
                             predicted.indices.end())) {
        audit.outcome = HostOutcome::boundary;
    } else {
        audit.outcome = HostOutcome::violation;
    }
    return audit;
}

MergeVerification verify_merge(const MergeEvaluation& eval, const BasisSet& bs, bool audit_hosts, double tol) {
    MergeVerification v;
    for (const auto& g : bs.groups) {
        if (g.primal_rep.size() == 0) throw ContractError("verify_merge: aggregated LP has not been solved");
        v.ov_I += g.aggregated_ov;
    }
    const LpStandardForm lp = build_merged_lp(eval.partition, bs);
    const LpSolution sol = solve_lp(lp);
    std::vector<double> weights;
    for (const auto& c : eval.clusters) weights.push_back(c.weight);
    const BlockSolution blocks = split_block_solution(bs.lp_template, weights, sol);
    v.cluster_ov = blocks.objective;
    v.cluster_primal = blocks.primal;
    for (double ov : blocks.objective) v.ov_K += ov;

    v.residual = std::abs(eval.com - (v.ov_I - v.ov_K));
    v.relative_residual = v.residual / std::max(1.0, std::abs(v.ov_I));
    v.pass = v.relative_residual <= tol;
    if (audit_hosts) {
        for (const auto& c : eval.clusters) v.hosts.push_back(audit_host(bs, c));
    }
    return v;
}

}  // namespace tsagg
