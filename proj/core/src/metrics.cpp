#include "tsagg/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "tsagg/error.hpp"

namespace tsagg {

double error_ov(std::span<const double> ov_i, std::span<const double> ov_k) {
    double sum_i = 0.0, sum_k = 0.0;
    for (double v : ov_i) sum_i += v;
    for (double v : ov_k) sum_k += v;
    if (sum_i == 0.0) throw UndefinedMetricError("objective error undefined: reference objective is zero");
    return (sum_i - sum_k) / sum_i;
}

std::optional<double> error_generator(std::span<const double> prod_i, std::span<const double> prod_k) {
    double sum_i = 0.0, sum_k = 0.0;
    for (double v : prod_i) sum_i += v;
    for (double v : prod_k) sum_k += v;
    if (std::abs(sum_i) <= kZeroProduction) {
        if (std::abs(sum_k) <= kZeroProduction) return 0.0;
        return std::nullopt;
    }
    return (sum_i - sum_k) / sum_i;
}

ErrorReport error_report(const NetworkModel& net, const BasisSet& bs, const MergeEvaluation& eval,
                         const MergeVerification& v) {
    if (v.cluster_primal.size() != eval.clusters.size()) {
        throw ContractError("error_report: verification does not match the evaluated partition");
    }
    const TransportLayout layout = layout_of(net);
    ErrorReport rep;
    rep.partition = eval.partition;
    rep.ov_I = eval.ov_I;
    rep.ov_K = eval.ov_K;
    rep.com_abs = std::abs(eval.com);

    for (const auto& g : bs.groups) {
        if (g.primal_rep.size() == 0) throw ContractError("error_report: aggregated LP has not been solved");
        rep.basis_ov.push_back(g.dual_ov());
        std::vector<double> prod;
        for (std::size_t gen = 0; gen < layout.generators; ++gen) {
            prod.push_back(static_cast<double>(g.weight) * g.primal_rep(static_cast<Eigen::Index>(layout.gen_var(gen))));
        }
        rep.basis_production.push_back(std::move(prod));
    }
    for (std::size_t k = 0; k < eval.clusters.size(); ++k) {
        rep.cluster_ov.push_back(eval.clusters[k].ov);
        std::vector<double> prod;
        for (std::size_t gen = 0; gen < layout.generators; ++gen) {
            prod.push_back(eval.clusters[k].weight * v.cluster_primal[k](static_cast<Eigen::Index>(layout.gen_var(gen))));
        }
        rep.cluster_production.push_back(std::move(prod));
    }
    rep.eps_ov = error_ov(rep.basis_ov, rep.cluster_ov);

    for (std::size_t gen = 0; gen < layout.generators; ++gen) {
        std::vector<double> pi, pk;
        for (const auto& p : rep.basis_production) pi.push_back(p[gen]);
        for (const auto& p : rep.cluster_production) pk.push_back(p[gen]);
        rep.eps_gen.push_back(error_generator(pi, pk));
    }
    return rep;
}

BasisDescriptor describe_basis(const BasisGroup& bg, const NetworkModel& net) {
    const TransportLayout layout = layout_of(net);
    if (bg.member_dual.size() != static_cast<Eigen::Index>(layout.rows()) ||
        bg.centroid.size() != static_cast<Eigen::Index>(layout.rows())) {
        throw ContractError("describe_basis: basis " + std::to_string(bg.label()) + " has no duals for this network");
    }
    const TransportDuals duals = unpack_duals(net, bg.member_dual);
    const ActiveSet& a = bg.active_set;

    BasisDescriptor d;
    d.lmp = duals.lmp;
    for (std::size_t l = 0; l < layout.lines; ++l) {
        if (!a.contains(layout.line_cap_row(l))) continue;
        const std::string& label = net.lines[l].label();
        if (std::find(d.congested.begin(), d.congested.end(), label) == d.congested.end()) d.congested.push_back(label);
    }
    std::size_t report = 0;
    for (std::size_t n = 1; n < layout.nodes; ++n) {
        const auto row = [&](std::size_t i) { return bg.centroid(static_cast<Eigen::Index>(layout.balance_row(i))); };
        if (row(n) > row(report)) report = n;
    }
    d.report_node = net.nodes[report];
    d.report_lmp = duals.lmp[report];

    // Nodes whose price is tied to the report node through lines carrying
    // an interior flow.
    std::vector<char> linked(layout.nodes, 0);
    linked[report] = 1;
    for (bool grew = true; grew;) {
        grew = false;
        for (std::size_t l = 0; l < layout.lines; ++l) {
            if (a.contains(layout.line_cap_row(l)) || a.contains(layout.lower_bound(layout.line_var(l)))) continue;
            const std::size_t u = net.node_index(net.lines[l].from), v = net.node_index(net.lines[l].to);
            if (linked[u] != linked[v]) {
                linked[u] = linked[v] = 1;
                grew = true;
            }
        }
    }

    std::vector<std::string> interior, zero_reduced_cost;
    for (std::size_t g = 0; g < layout.generators; ++g) {
        const Generator& gen = net.generators[g];
        const bool at_cap = a.contains(layout.gen_cap_row(g));
        const bool at_zero = a.contains(layout.lower_bound(layout.gen_var(g)));
        if (at_cap) d.full_load.push_back(gen.id);
        const std::size_t node = net.node_index(gen.node);
        if (!linked[node]) continue;
        if (!at_cap && !at_zero) interior.push_back(gen.id);
        if (std::abs(gen.cost - duals.lmp[node]) <= 1e-9 * std::max(1.0, std::abs(gen.cost))) {
            zero_reduced_cost.push_back(gen.id);
        }
    }
    d.marginal = interior.empty() ? std::move(zero_reduced_cost) : std::move(interior);
    return d;
}

void describe_bases(BasisSet& bs, const NetworkModel& net) {
    for (auto& g : bs.groups) g.descriptor = describe_basis(g, net);
}

std::string format_fixed2(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    if (ec != std::errc()) throw ContractError("format_fixed2: value out of range");
    std::string s(buf, end);
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string format_exact(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw ContractError("format_exact: value out of range");
    return std::string(buf, end);
}

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

std::string join(const std::vector<std::string>& items) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += ';';
        s += items[i];
    }
    return s;
}

std::string percent(const std::optional<double>& v) {
    return v ? format_fixed2(100.0 * *v) : "n/a";
}

}  // namespace

void write_optimal_mergers_csv(const std::filesystem::path& path, const NetworkModel& net,
                               std::span<const MergerRow> rows) {
    std::ofstream out = open_csv(path);
    out << "k,partition,eps_ov_pct";
    for (const auto& g : net.generators) out << ",eps_" << g.id << "_pct";
    out << '\n';
    for (const auto& row : rows) {
        out << row.k << ",\"" << row.report.partition.to_string() << "\"," << percent(row.report.eps_ov);
        for (const auto& e : row.report.eps_gen) out << ',' << percent(e);
        out << '\n';
    }
    finish(out, path);
}

void write_counts_csv(const std::filesystem::path& path, std::span<const StrategyTrace> traces) {
    std::size_t n = 0;
    for (const auto& t : traces) n = std::max(n, t.bases);
    std::ofstream out = open_csv(path);
    out << "strategy";
    for (std::size_t k = n; k >= 1; --k) out << ',' << k;
    out << '\n';
    for (const auto& t : traces) {
        out << to_string(t.strategy);
        for (std::size_t k = n; k >= 1; --k) {
            out << ',';
            if (const StrategyLevel* l = t.level(k)) out << l->evaluated;
        }
        out << '\n';
    }
    finish(out, path);
}

void write_bases_table_csv(const std::filesystem::path& path, const BasisSet& bs) {
    std::ofstream out = open_csv(path);
    out << "basis,weight,congestion,full_load,marginal,lmp_node,lmp,degenerate\n";
    for (const auto& g : bs.groups) {
        const BasisDescriptor& d = g.descriptor;
        out << g.label() << ',' << g.weight << ",\"" << join(d.congested) << "\",\"" << join(d.full_load) << "\",\""
            << join(d.marginal) << "\"," << d.report_node << ',' << format_fixed2(d.report_lmp) << ','
            << (g.degenerate ? "yes" : "no") << '\n';
    }
    finish(out, path);
}

void write_points_csv(const std::filesystem::path& path, const NetworkModel& net,
                      std::span<const TimestepData> data, const BasisSet& bs) {
    if (data.size() != bs.horizon) throw ContractError("write_points_csv: data and basis set differ in length");
    std::ofstream out = open_csv(path);
    out << 't';
    for (const auto& n : net.nodes) out << ",D_" << n;
    for (const auto& g : net.generators) {
        if (g.uses_cf_series) out << ",CF_" << g.id;
    }
    out << ",basis\n";
    for (std::size_t t = 0; t < data.size(); ++t) {
        out << t + 1;
        for (double d : data[t].demand) out << ',' << format_exact(d);
        for (std::size_t g = 0; g < net.generators.size(); ++g) {
            if (net.generators[g].uses_cf_series) out << ',' << format_exact(data[t].capacity_factor[g]);
        }
        out << ',' << bs.groups[bs.basis_of[t]].label() << '\n';
    }
    finish(out, path);
}

}  // namespace tsagg
