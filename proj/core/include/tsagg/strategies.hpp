#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tsagg/basis.hpp"
#include "tsagg/merging.hpp"
#include "tsagg/partition.hpp"

namespace tsagg {

enum class Strategy { exhaustive, greedy, greedy_adjacent };

std::string to_string(Strategy s);
/// Accepts "exhaustive", "greedy", "greedy-adjacent" and "greedy_adjacent".
Strategy parse_strategy(std::string_view name);

/// Partition cost that is a sum of per-cluster values, with singletons
/// costing zero. Cluster values are cached by member set.
class ClusterAdditiveCost {
public:
    using ClusterValue = std::function<double(std::span<const std::size_t>)>;

    /// `scale` sets the magnitude used for tie tolerances.
    ClusterAdditiveCost(std::size_t n, double scale, ClusterValue value);

    /// Cluster value = CoM of that cluster under its host.
    static ClusterAdditiveCost from_basis_set(const BasisSet& bs);

    std::size_t size() const { return n_; }
    double scale() const { return scale_; }
    double cluster_value(std::span<const std::size_t> cluster) const;
    double operator()(const Partition& p) const;

private:
    std::size_t n_;
    double scale_;
    ClusterValue value_;
    mutable std::unordered_map<std::uint64_t, double> cache_;
};

struct StrategyLevel {
    std::size_t k = 0;
    Partition partition;
    double com = 0.0;
    std::uint64_t evaluated = 0;
    bool fallback = false;  // greedy_adjacent found no adjacent pair
    bool tie = false;       // another candidate matched the minimum
};

struct StrategyTrace {
    Strategy strategy = Strategy::greedy;
    std::size_t bases = 0;
    std::vector<StrategyLevel> levels;  // k = bases, bases-1, ..., target

    const StrategyLevel* level(std::size_t k) const;
};

struct StrategyOptions {
    std::size_t target_k = 1;
    std::size_t exhaustive_cap = 12;
    double tie_tolerance = 1e-12;  // relative to max(1, |scale|)
};

/// Unordered pairs of zero-based basis ids.
class AdjacencyList {
public:
    AdjacencyList() = default;
    explicit AdjacencyList(std::span<const std::pair<std::size_t, std::size_t>> pairs);

    /// Throws ContractError on a self pair.
    void add(std::size_t a, std::size_t b);
    bool contains(std::size_t a, std::size_t b) const;
    /// The ids induce a connected subgraph. A single id is connected.
    bool connected(std::span<const std::size_t> ids) const;

    const std::set<std::pair<std::size_t, std::size_t>>& pairs() const { return pairs_; }
    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }

    bool operator==(const AdjacencyList&) const = default;

private:
    std::set<std::pair<std::size_t, std::size_t>> pairs_;
};

enum class AdjacencyMode { input_space, active_set };

struct AdjacencyDetection {
    AdjacencyList adjacency;
    /// Input-space mode only: coordinates that vary across timesteps and
    /// the contact distance, both in range-normalized units.
    std::vector<std::size_t> coordinates;
    double delta = 0.0;
};

/// input_space: bases are adjacent when some of their member points are
/// within delta = 1.5 x the largest nearest-neighbour spacing.
/// active_set: adjacent when the active sets differ in exactly two rows.
AdjacencyDetection detect_adjacency(const BasisSet& bs, std::span<const Eigen::VectorXd> raw_points,
                                    AdjacencyMode mode);

StrategyTrace exhaustive_strategy(const ClusterAdditiveCost& cost, const StrategyOptions& opts = {});
StrategyTrace greedy_strategy(const ClusterAdditiveCost& cost, const StrategyOptions& opts = {});
StrategyTrace greedy_adjacent_strategy(const ClusterAdditiveCost& cost, const AdjacencyList& adj,
                                       const StrategyOptions& opts = {});

/// Throws LimitError when |bases| exceeds opts.exhaustive_cap.
StrategyTrace exhaustive_strategy(const BasisSet& bs, const StrategyOptions& opts = {});
StrategyTrace greedy_strategy(const BasisSet& bs, const StrategyOptions& opts = {});
StrategyTrace greedy_adjacent_strategy(const BasisSet& bs, const AdjacencyList& adj, const StrategyOptions& opts = {});

}  // namespace tsagg
