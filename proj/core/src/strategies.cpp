#include "tsagg/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "tsagg/combinatorics.hpp"
#include "tsagg/error.hpp"

namespace tsagg {

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::exhaustive: return "exhaustive";
        case Strategy::greedy: return "greedy";
        case Strategy::greedy_adjacent: return "greedy-adjacent";
    }
    return "unknown";
}

Strategy parse_strategy(std::string_view name) {
    if (name == "exhaustive") return Strategy::exhaustive;
    if (name == "greedy") return Strategy::greedy;
    if (name == "greedy-adjacent" || name == "greedy_adjacent") return Strategy::greedy_adjacent;
    throw ValidationError("unknown strategy '" + std::string(name) + "'");
}

ClusterAdditiveCost::ClusterAdditiveCost(std::size_t n, double scale, ClusterValue value)
    : n_(n), scale_(scale), value_(std::move(value)) {}

ClusterAdditiveCost ClusterAdditiveCost::from_basis_set(const BasisSet& bs) {
    auto model = std::make_shared<const ComModel>(bs);
    return ClusterAdditiveCost(bs.size(), model->total_ov(), [model](std::span<const std::size_t> ids) {
        return model->host(ids).com;
    });
}

double ClusterAdditiveCost::cluster_value(std::span<const std::size_t> cluster) const {
    if (cluster.size() <= 1) return 0.0;
    if (n_ > 64) return value_(cluster);
    std::uint64_t mask = 0;
    for (std::size_t id : cluster) mask |= std::uint64_t{1} << id;
    auto it = cache_.find(mask);
    if (it != cache_.end()) return it->second;
    const double v = value_(cluster);
    cache_.emplace(mask, v);
    return v;
}

double ClusterAdditiveCost::operator()(const Partition& p) const {
    double total = 0.0;
    for (const auto& c : p.clusters()) total += cluster_value(c);
    return total;
}

const StrategyLevel* StrategyTrace::level(std::size_t k) const {
    for (const auto& l : levels) {
        if (l.k == k) return &l;
    }
    return nullptr;
}

AdjacencyList::AdjacencyList(std::span<const std::pair<std::size_t, std::size_t>> pairs) {
    for (const auto& [a, b] : pairs) add(a, b);
}

void AdjacencyList::add(std::size_t a, std::size_t b) {
    if (a == b) throw ContractError("adjacency: basis " + std::to_string(a + 1) + " paired with itself");
    pairs_.emplace(std::min(a, b), std::max(a, b));
}

bool AdjacencyList::contains(std::size_t a, std::size_t b) const {
    return pairs_.count({std::min(a, b), std::max(a, b)}) > 0;
}

bool AdjacencyList::connected(std::span<const std::size_t> ids) const {
    if (ids.empty()) return false;
    std::vector<char> reached(ids.size(), 0);
    std::vector<std::size_t> stack{0};
    reached[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v = 0; v < ids.size(); ++v) {
            if (!reached[v] && contains(ids[u], ids[v])) {
                reached[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == ids.size();
}

AdjacencyDetection detect_adjacency(const BasisSet& bs, std::span<const Eigen::VectorXd> raw_points,
                                    AdjacencyMode mode) {
    AdjacencyDetection out;
    const std::size_t n = bs.size();
    if (mode == AdjacencyMode::active_set) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const auto& a = bs.groups[i].active_set.indices;
                const auto& b = bs.groups[j].active_set.indices;
                std::vector<std::size_t> diff;
                std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
                if (diff.size() == 2) out.adjacency.add(i, j);
            }
        }
        return out;
    }

    if (raw_points.size() != bs.horizon) throw ContractError("detect_adjacency: point count differs from horizon");
    const std::size_t T = raw_points.size();
    if (T < 2) return out;
    const Eigen::Index dim = raw_points.front().size();

    std::vector<double> lo, span;
    for (Eigen::Index c = 0; c < dim; ++c) {
        double mn = raw_points[0](c), mx = raw_points[0](c);
        for (const auto& p : raw_points) {
            mn = std::min(mn, p(c));
            mx = std::max(mx, p(c));
        }
        if (mx - mn > 0.0) {
            out.coordinates.push_back(static_cast<std::size_t>(c));
            lo.push_back(mn);
            span.push_back(mx - mn);
        }
    }
    const std::size_t d = out.coordinates.size();
    if (d == 0) return out;

    std::vector<double> pts(T * d);
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t c = 0; c < d; ++c) {
            pts[t * d + c] = (raw_points[t](static_cast<Eigen::Index>(out.coordinates[c])) - lo[c]) / span[c];
        }
    }
    auto dist2 = [&](std::size_t a, std::size_t b) {
        double s = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            const double diff = pts[a * d + c] - pts[b * d + c];
            s += diff * diff;
        }
        return s;
    };

    std::vector<double> nearest(T, std::numeric_limits<double>::infinity());
    for (std::size_t a = 0; a < T; ++a) {
        for (std::size_t b = a + 1; b < T; ++b) {
            const double s = dist2(a, b);
            nearest[a] = std::min(nearest[a], s);
            nearest[b] = std::min(nearest[b], s);
        }
    }
    out.delta = 1.5 * std::sqrt(*std::max_element(nearest.begin(), nearest.end()));
    const double delta2 = out.delta * out.delta;

    for (std::size_t a = 0; a < T; ++a) {
        for (std::size_t b = a + 1; b < T; ++b) {
            const std::size_t ba = bs.basis_of[a], bb = bs.basis_of[b];
            if (ba != bb && !out.adjacency.contains(ba, bb) && dist2(a, b) <= delta2) out.adjacency.add(ba, bb);
        }
    }
    return out;
}

namespace {

std::size_t check_target(std::size_t n, const StrategyOptions& opts) {
    if (n == 0) throw ContractError("strategy: no bases to merge");
    if (opts.target_k < 1 || opts.target_k > n) {
        throw ContractError("strategy: target k = " + std::to_string(opts.target_k) + " outside [1, " +
                            std::to_string(n) + "]");
    }
    return opts.target_k;
}

void check_cap(std::size_t n, const StrategyOptions& opts) {
    if (n > opts.exhaustive_cap) {
        throw LimitError("exhaustive search refused: " + std::to_string(n) + " bases exceed the cap of " +
                         std::to_string(opts.exhaustive_cap));
    }
}

double tie_abs(const ClusterAdditiveCost& cost, const StrategyOptions& opts) {
    return opts.tie_tolerance * std::max(1.0, std::abs(cost.scale()));
}

StrategyTrace run_greedy(const ClusterAdditiveCost& cost, const AdjacencyList* adj, const StrategyOptions& opts) {
    const std::size_t n = cost.size();
    const std::size_t target = check_target(n, opts);
    const double tol = tie_abs(cost, opts);

    StrategyTrace trace;
    trace.strategy = adj ? Strategy::greedy_adjacent : Strategy::greedy;
    trace.bases = n;
    Partition current = Partition::identity(n);
    trace.levels.push_back({n, current, cost(current), 1, false, false});

    while (current.size() > target) {
        StrategyLevel level;
        level.k = current.size() - 1;
        std::optional<Partition> best;
        for (int pass = adj ? 0 : 1; pass < 2 && !best; ++pass) {
            if (pass == 1 && adj) level.fallback = true;
            const auto& cl = current.clusters();
            for (std::size_t a = 0; a < cl.size(); ++a) {
                for (std::size_t b = a + 1; b < cl.size(); ++b) {
                    if (pass == 0) {
                        std::vector<std::size_t> joined = cl[a];
                        joined.insert(joined.end(), cl[b].begin(), cl[b].end());
                        if (!adj->connected(joined)) continue;
                    }
                    Partition cand = current.merged(a, b);
                    const double c = cost(cand);
                    ++level.evaluated;
                    if (!best || c < level.com - tol) {
                        best = std::move(cand);
                        level.com = c;
                    } else if (c <= level.com + tol) {
                        level.tie = true;
                        if (cand.canonically_before(*best)) {
                            best = std::move(cand);
                            level.com = c;
                        }
                    }
                }
            }
        }
        current = *best;
        level.partition = current;
        trace.levels.push_back(std::move(level));
    }
    return trace;
}

}  // namespace

StrategyTrace exhaustive_strategy(const ClusterAdditiveCost& cost, const StrategyOptions& opts) {
    const std::size_t n = cost.size();
    check_cap(n, opts);
    const std::size_t target = check_target(n, opts);
    const double tol = tie_abs(cost, opts);

    StrategyTrace trace;
    trace.strategy = Strategy::exhaustive;
    trace.bases = n;
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t k = n; k >= target; --k) {
        StrategyLevel level;
        level.k = k;
        std::vector<std::size_t> best_rgs;
        PartitionEnumerator e(n, k);
        do {
            blocks.assign(k, {});
            for (std::size_t i = 0; i < n; ++i) blocks[e.rgs()[i]].push_back(i);
            double c = 0.0;
            for (const auto& b : blocks) c += cost.cluster_value(b);
            ++level.evaluated;
            if (best_rgs.empty() || c < level.com - tol) {
                best_rgs = e.rgs();
                level.com = c;
            } else if (c <= level.com + tol) {
                level.tie = true;  // enumeration order is canonical: keep the first
            }
        } while (e.next());
        level.partition = Partition::from_rgs(best_rgs);
        trace.levels.push_back(std::move(level));
        if (k == 1) break;
    }
    return trace;
}

StrategyTrace greedy_strategy(const ClusterAdditiveCost& cost, const StrategyOptions& opts) {
    return run_greedy(cost, nullptr, opts);
}

StrategyTrace greedy_adjacent_strategy(const ClusterAdditiveCost& cost, const AdjacencyList& adj,
                                       const StrategyOptions& opts) {
    return run_greedy(cost, &adj, opts);
}

StrategyTrace exhaustive_strategy(const BasisSet& bs, const StrategyOptions& opts) {
    check_cap(bs.size(), opts);
    return exhaustive_strategy(ClusterAdditiveCost::from_basis_set(bs), opts);
}

StrategyTrace greedy_strategy(const BasisSet& bs, const StrategyOptions& opts) {
    return greedy_strategy(ClusterAdditiveCost::from_basis_set(bs), opts);
}

StrategyTrace greedy_adjacent_strategy(const BasisSet& bs, const AdjacencyList& adj, const StrategyOptions& opts) {
    return greedy_adjacent_strategy(ClusterAdditiveCost::from_basis_set(bs), adj, opts);
}

}  // namespace tsagg
