#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsagg/basis.hpp"
#include "tsagg/merging.hpp"
#include "tsagg/strategies.hpp"
#include "tsagg/transport.hpp"

namespace tsagg {

/// (sum ov_i - sum ov_k) / sum ov_i. Throws UndefinedMetricError when
/// sum ov_i is zero.
double error_ov(std::span<const double> ov_i, std::span<const double> ov_k);

/// Production totals below this magnitude count as zero.
inline constexpr double kZeroProduction = 1e-9;

/// (sum prod_i - sum prod_k) / sum prod_i over weight-expanded production
/// W * x̄_g. Returns 0 when the generator is idle in both models and
/// nullopt (not applicable) when only the merged model uses it.
std::optional<double> error_generator(std::span<const double> prod_i, std::span<const double> prod_k);

struct ErrorReport {
    Partition partition;
    double eps_ov = 0.0;
    std::vector<std::optional<double>> eps_gen;  // network generator order
    double com_abs = 0.0;
    double ov_I = 0.0;
    double ov_K = 0.0;
    std::vector<double> basis_ov;
    std::vector<double> cluster_ov;
    /// [basis or cluster][generator], weight-expanded.
    std::vector<std::vector<double>> basis_production;
    std::vector<std::vector<double>> cluster_production;
};

/// OV figures come from `eval` (analytical). Production comes from the
/// aggregated solve stored on `bs` and the re-solved merged LP in `v`.
ErrorReport error_report(const NetworkModel& net, const BasisSet& bs, const MergeEvaluation& eval,
                         const MergeVerification& v);

/// Descriptor of one basis from its active set and per-timestep duals. The
/// report node is the node with the largest centroid demand. Marginal
/// generators are those with interior output at nodes linked to the report
/// node by lines with interior flow; if there is none, generators there with
/// zero reduced cost. Several candidates are all listed.
BasisDescriptor describe_basis(const BasisGroup& bg, const NetworkModel& net);
void describe_bases(BasisSet& bs, const NetworkModel& net);

/// Two decimals, '.' separator, "-0.00" printed as "0.00".
std::string format_fixed2(double v);
/// Shortest text that parses back to the same double.
std::string format_exact(double v);

struct MergerRow {
    std::size_t k = 0;
    ErrorReport report;
};

void write_optimal_mergers_csv(const std::filesystem::path& path, const NetworkModel& net,
                               std::span<const MergerRow> rows);
/// Header "strategy,n,...,1" with n the largest base count among traces.
void write_counts_csv(const std::filesystem::path& path, std::span<const StrategyTrace> traces);
void write_bases_table_csv(const std::filesystem::path& path, const BasisSet& bs);
void write_points_csv(const std::filesystem::path& path, const NetworkModel& net,
                      std::span<const TimestepData> data, const BasisSet& bs);

}  // namespace tsagg
