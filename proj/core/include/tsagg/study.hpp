#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tsagg/basis.hpp"
#include "tsagg/transport.hpp"

namespace tsagg {

/// Solves every timestep LP on `threads` workers (0 = hardware concurrency)
/// and returns results in timestep order. Throws InfeasibleError naming the
/// first infeasible timestep.
std::vector<TimestepResult> solve_timesteps(const NetworkModel& net, std::span<const TimestepData> data,
                                            unsigned threads = 0);

/// Per-timestep solves, grouping, aggregated solve, descriptors and the
/// exactness check, in that order.
struct Study {
    std::vector<TimestepResult> timesteps;
    BasisSet bases;
    BlockSolution aggregated;
    ExactnessReport exactness;

    std::vector<Eigen::VectorXd> raw_points() const;
};

Study run_study(const NetworkModel& net, std::span<const TimestepData> data, unsigned threads = 0);

}  // namespace tsagg
