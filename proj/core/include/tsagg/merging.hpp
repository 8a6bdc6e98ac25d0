#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tsagg/basis.hpp"
#include "tsagg/lp.hpp"
#include "tsagg/partition.hpp"

namespace tsagg {

inline constexpr double kHostTieTolerance = 1e-9;

struct WeightedCentroid {
    double weight = 0.0;
    Eigen::VectorXd centroid;
};

/// Weighted mean of the centroids of `ids`. A single id returns that
/// basis' own weight and centroid unchanged.
WeightedCentroid merged_centroid(const BasisSet& bs, std::span<const std::size_t> ids);

struct HostChoice {
    std::size_t host = 0;
    double com = 0.0;
    /// Other hosts whose CoM is within the tie tolerance of the chosen one.
    std::vector<std::size_t> tied;
};

/// Precomputed dual products b̄_i' ȳ_h for all basis pairs. Every CoM in
/// the library is evaluated through this table, without solving an LP.
class ComModel {
public:
    explicit ComModel(const BasisSet& bs);

    std::size_t size() const { return weight_.size(); }
    double weight(std::size_t i) const { return weight_[i]; }
    /// OV^i = b̄_i' ȳ_i.
    double basis_ov(std::size_t i) const { return cross_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)); }
    /// OV^I, summed in id order.
    double total_ov() const { return total_ov_; }

    /// sum_{i in cluster} b̄_i' (ȳ_i - (W_i / W_h) ȳ_h).
    double candidate_com(std::span<const std::size_t> cluster, std::size_t host) const;

    /// Host with the least CoM over all bases; ties go to the smaller id.
    /// A singleton cluster is hosted by its own basis with CoM 0.
    HostChoice host(std::span<const std::size_t> cluster, double tie_rel = kHostTieTolerance) const;

    /// OV^k = b̄_k' ȳ_k with ȳ_k = (W_k / W_h) ȳ_h.
    double cluster_ov(std::span<const std::size_t> cluster, std::size_t host) const;

private:
    std::vector<double> weight_;
    Eigen::MatrixXd cross_;  // (i, h) -> b̄_i' ȳ_h
    double total_ov_ = 0.0;
};

double candidate_com(const BasisSet& bs, std::span<const std::size_t> cluster, std::size_t host);
HostChoice host_basis(const BasisSet& bs, std::span<const std::size_t> cluster);

struct ClusterEvaluation {
    std::vector<std::size_t> bases;
    double weight = 0.0;
    Eigen::VectorXd centroid;
    std::size_t host = 0;
    std::vector<std::size_t> tied_hosts;
    double ov = 0.0;          // OV^k
    double members_ov = 0.0;  // sum of OV^i over member bases
    double com = 0.0;         // members_ov - ov
};

struct MergeEvaluation {
    Partition partition;
    double com = 0.0;
    double ov_I = 0.0;
    double ov_K = 0.0;
    std::vector<ClusterEvaluation> clusters;
};

/// CoM = OV^I - OV^K of a partition of the bases, from centroids and duals only.
MergeEvaluation com_partition(const Partition& p, const BasisSet& bs);
MergeEvaluation com_partition(const Partition& p, const BasisSet& bs, const ComModel& model);

/// One block per cluster with cost c * W_k and rhs b̄_k. For the identity
/// partition this is the aggregated LP.
LpStandardForm build_merged_lp(const Partition& p, const BasisSet& bs);

enum class HostOutcome { match, boundary, violation };
std::string to_string(HostOutcome outcome);

/// Host conjecture check for one cluster: the tight rows of the LP solved at
/// the merged centroid against the active set of the predicted host.
/// `boundary` means the centroid's tight set strictly contains the host's,
/// i.e. the centroid lies on the boundary of the host's region.
struct HostAudit {
    std::size_t predicted_host = 0;
    std::optional<std::size_t> solved_basis;
    HostOutcome outcome = HostOutcome::violation;
};

HostAudit audit_host(const BasisSet& bs, const ClusterEvaluation& cluster);

struct MergeVerification {
    double ov_I = 0.0;  // objective of the solved aggregated LP
    double ov_K = 0.0;  // objective of the solved merged LP
    std::vector<double> cluster_ov;
    std::vector<Eigen::VectorXd> cluster_primal;  // per-timestep-average x̄_k
    double residual = 0.0;           // |CoM - (OV^I - OV^K)|
    double relative_residual = 0.0;  // residual / max(1, OV^I)
    bool pass = false;
    std::vector<HostAudit> hosts;  // filled when hosts are audited
};

/// Re-solves the merged LP and compares with the analytical CoM. Requires
/// solve_aggregated() to have run on `bs`.
MergeVerification verify_merge(const MergeEvaluation& eval, const BasisSet& bs, bool audit_hosts,
                               double tol = 1e-8);

}  // namespace tsagg
