#include "instances.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <random>
#include <set>

#include "tsagg/basis.hpp"

namespace tsagg::testing {

NetworkModel toy_network() {
    NetworkModel net;
    net.nodes = {"N1"};
    net.generators = {{"G1", "N1", 1.0, 5.0, false}, {"G2", "N1", 10.0, 100.0, false}};
    return net;
}

std::vector<TimestepData> toy_data(const std::vector<double>& demands) {
    std::vector<TimestepData> out;
    for (double d : demands) out.push_back({{d}, {1.0, 1.0}});
    return out;
}

RandomInstance random_instance(std::uint64_t seed, std::size_t horizon) {
    std::mt19937_64 rng(seed);
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

    RandomInstance inst;
    NetworkModel& net = inst.network;
    const std::size_t nodes = 2 + pick(3);
    for (std::size_t n = 0; n < nodes; ++n) net.nodes.push_back("N" + std::to_string(n + 1));

    std::set<std::pair<std::size_t, std::size_t>> corridors;
    for (std::size_t n = 1; n < nodes; ++n) corridors.emplace(pick(n), n);
    for (std::size_t extra = pick(nodes); extra > 0; --extra) {
        const std::size_t a = pick(nodes), b = pick(nodes);
        if (a != b) corridors.emplace(std::min(a, b), std::max(a, b));
    }
    std::size_t c = 0;
    for (const auto& [a, b] : corridors) {
        const double cap = std::round(uniform(10.0, 80.0));
        const double cost = std::round(uniform(1.0, 5.0)) / 10.0;
        const std::string name = "C" + std::to_string(++c);
        net.lines.push_back({name + "_f", net.nodes[a], net.nodes[b], cap, cost, name});
        net.lines.push_back({name + "_r", net.nodes[b], net.nodes[a], cap, cost, name});
    }

    const std::size_t gens = 1 + pick(nodes + 1);
    for (std::size_t g = 0; g < gens; ++g) {
        Generator gen;
        gen.id = "G" + std::to_string(g + 1);
        gen.node = net.nodes[pick(nodes)];
        gen.cost = std::round(uniform(1.0, 60.0) * 4.0) / 4.0 + 0.01 * static_cast<double>(g);
        gen.capacity = std::round(uniform(20.0, 120.0));
        gen.uses_cf_series = uniform(0.0, 1.0) < 0.5;
        net.generators.push_back(gen);
    }

    std::vector<std::size_t> demand_nodes(nodes);
    for (std::size_t n = 0; n < nodes; ++n) demand_nodes[n] = n;
    for (std::size_t n : demand_nodes) {
        net.generators.push_back({"NSP_" + net.nodes[n], net.nodes[n], 1000.0 + static_cast<double>(n), 500.0, false});
    }

    std::vector<double> base, swing;
    for (std::size_t k = 0; k < demand_nodes.size(); ++k) {
        base.push_back(uniform(10.0, 60.0));
        swing.push_back(uniform(10.0, 80.0));
    }
    for (std::size_t t = 0; t < horizon; ++t) {
        TimestepData d;
        d.demand.assign(nodes, 0.0);
        d.capacity_factor.assign(net.generators.size(), 1.0);
        for (std::size_t k = 0; k < demand_nodes.size(); ++k) {
            d.demand[demand_nodes[k]] = std::max(0.0, base[k] + swing[k] * uniform(0.0, 1.0));
        }
        for (std::size_t g = 0; g < net.generators.size(); ++g) {
            if (net.generators[g].uses_cf_series) d.capacity_factor[g] = uniform(0.0, 1.0);
        }
        inst.data.push_back(std::move(d));
    }
    return inst;
}

std::vector<std::pair<std::size_t, std::size_t>> reference_adjacency() {
    const std::vector<std::pair<std::size_t, std::size_t>> one_based = {
        {1, 2}, {1, 4}, {1, 5}, {1, 8}, {2, 3}, {2, 4}, {3, 8}, {4, 7}, {5, 6}, {5, 7}, {6, 8}};
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& [a, b] : one_based) out.emplace_back(a - 1, b - 1);
    return out;
}

ClusterAdditiveCost reference_trajectory_cost() {
    // Merge heights of the target dendrogram, zero-based elements.
    // Level 1: 1-2, 10: 0-7, 100: 4-6, 1e3: {0,7}-3, 1e4: {0,3,7}-{1,2},
    // 1e5: {0,1,2,3,7}-{4,6}, 1e6: everything-5.
    auto group_at = [](std::size_t e, int level) -> int {
        static const int table[8][7] = {
            // levels 0..6: element's group id after merges up to that level
            {0, 0, 0, 0, 0, 0, 0},  // e0
            {1, 1, 1, 1, 0, 0, 0},  // e1
            {1, 1, 1, 1, 0, 0, 0},  // e2
            {3, 3, 3, 0, 0, 0, 0},  // e3
            {4, 4, 4, 4, 4, 0, 0},  // e4
            {5, 5, 5, 5, 5, 5, 0},  // e5
            {6, 6, 4, 4, 4, 0, 0},  // e6
            {7, 0, 0, 0, 0, 0, 0},  // e7
        };
        return table[e][level];
    };
    // Heights indexed by level at which a pair first shares a group.
    static const double height[7] = {1.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6};
    auto distance = [&](std::size_t a, std::size_t b) {
        for (int level = 0; level < 7; ++level) {
            if (group_at(a, level) == group_at(b, level)) return height[level];
        }
        return height[6];
    };
    return ClusterAdditiveCost(8, 0.0, [distance](std::span<const std::size_t> ids) {
        double v = 0.0;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j) v += distance(ids[i], ids[j]);
        }
        return v;
    });
}

std::size_t reference_basis(const BasisDescriptor& d) {
    auto has = [](const std::vector<std::string>& v, const char* s) {
        return std::find(v.begin(), v.end(), s) != v.end();
    };
    const bool l1 = has(d.congested, "Line 1"), l2 = has(d.congested, "Line 2"), l3 = has(d.congested, "Line 3");
    const bool re_full = has(d.full_load, "Re"), th_full = has(d.full_load, "Th");
    const bool m_re = has(d.marginal, "Re"), m_th = has(d.marginal, "Th"), m_nsp = has(d.marginal, "NSP");
    if (d.marginal.size() != 1) return 0;
    if (!l1 && !l2 && l3 && re_full && !th_full && m_th) return 1;
    if (!l1 && !l2 && l3 && !re_full && !th_full && m_re) return 2;
    if (!l1 && !l2 && !l3 && !re_full && !th_full && m_re) return 3;
    if (!l1 && l2 && l3 && !re_full && !th_full && m_th) return 4;
    if (l1 && !l2 && l3 && re_full && !th_full && m_nsp) return 5;
    if (l1 && !l2 && !l3 && re_full && th_full && m_nsp) return 6;
    if (l1 && l2 && l3 && !re_full && !th_full && m_nsp) return 7;
    if (!l1 && !l2 && !l3 && re_full && !th_full && m_th) return 8;
    return 0;
}

}  // namespace tsagg::testing
