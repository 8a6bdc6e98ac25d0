#include "tsagg/study.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "tsagg/error.hpp"
#include "tsagg/metrics.hpp"

namespace tsagg {

std::vector<TimestepResult> solve_timesteps(const NetworkModel& net, std::span<const TimestepData> data,
                                            unsigned threads) {
    if (data.empty()) throw ContractError("solve_timesteps: no timesteps");
    LpStandardForm lp = build_lp_template(net);
    for (const auto& d : data) check_timestep(net, d);

    std::vector<TimestepResult> out(data.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex failure_mutex;
    std::size_t failed_at = data.size();
    std::exception_ptr failure;

    auto worker = [&] {
        LpStandardForm local = lp;
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= data.size() || stop.load()) return;
            try {
                local.rhs = timestep_rhs(net, data[t]);
                TimestepResult r;
                r.solution = solve_lp(local);
                if (r.solution.status == LpStatus::infeasible) {
                    throw InfeasibleError(t + 1, "timestep " + std::to_string(t + 1) + " is infeasible");
                }
                if (r.solution.status != LpStatus::optimal) {
                    throw SolverError("timestep " + std::to_string(t + 1) + " is " + to_string(r.solution.status));
                }
                r.active = extract_active_set(local, r.solution);
                r.rhs = std::move(local.rhs);
                out[t] = std::move(r);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (t < failed_at) {
                    failed_at = t;
                    failure = std::current_exception();
                }
                stop = true;
            }
        }
    };

    unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    n = static_cast<unsigned>(std::min<std::size_t>(n, data.size()));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<Eigen::VectorXd> Study::raw_points() const {
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(timesteps.size());
    for (const auto& r : timesteps) pts.push_back(r.rhs);
    return pts;
}

Study run_study(const NetworkModel& net, std::span<const TimestepData> data, unsigned threads) {
    Study s;
    s.timesteps = solve_timesteps(net, data, threads);
    s.bases = group_bases(build_lp_template(net), s.timesteps);
    s.aggregated = solve_aggregated(s.bases);
    describe_bases(s.bases, net);
    s.exactness = check_exactness(s.timesteps, s.bases, s.aggregated);
    return s;
}

}  // namespace tsagg
