#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tsagg/strategies.hpp"
#include "tsagg/transport.hpp"

namespace tsagg::testing {

/// One node, G1 (cost 1, cap 5) and G2 (cost 10, cap 100).
NetworkModel toy_network();
std::vector<TimestepData> toy_data(const std::vector<double>& demands);

struct RandomInstance {
    NetworkModel network;
    std::vector<TimestepData> data;
};

/// 2-4 nodes, a spanning tree of corridors plus random extra ones (both
/// directions), random generators with some CF-driven, demand at every node
/// and an expensive unserved-energy unit at every node so every timestep is
/// feasible.
RandomInstance random_instance(std::uint64_t seed, std::size_t horizon = 100);

/// The 11 adjacent pairs of the eight canonical regimes, zero-based.
std::vector<std::pair<std::size_t, std::size_t>> reference_adjacency();

/// Cluster-additive cost on 8 elements whose greedy trajectory is {2,3}, {1,8}, {5,7}, {1,4,8}, {1,2,3,4,8}, {1,2,3,4,5,7,8}.
/// Cluster value is the sum of ultrametric distances over member pairs.
ClusterAdditiveCost reference_trajectory_cost();

/// Canonical regime number (1..8) of a case-study basis, read from its
/// congestion, full-load and marginal descriptor. 0 when none matches.
std::size_t reference_basis(const BasisDescriptor& d);

}  // namespace tsagg::testing
