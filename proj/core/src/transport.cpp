#include "tsagg/transport.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "tsagg/error.hpp"

namespace tsagg {

bool operator==(const Generator& a, const Generator& b) {
    return a.id == b.id && a.node == b.node && a.cost == b.cost && a.capacity == b.capacity &&
           a.uses_cf_series == b.uses_cf_series;
}

bool operator==(const Line& a, const Line& b) {
    return a.id == b.id && a.from == b.from && a.to == b.to && a.capacity == b.capacity && a.cost == b.cost &&
           a.corridor == b.corridor;
}

bool NetworkModel::operator==(const NetworkModel& other) const {
    return nodes == other.nodes && generators == other.generators && lines == other.lines;
}

void NetworkModel::validate() const {
    std::vector<std::string> problems;
    std::set<std::string> node_ids;
    if (nodes.empty()) problems.emplace_back("nodes: list is empty");
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        if (!node_ids.insert(nodes[n]).second) problems.push_back("nodes[" + std::to_string(n) + "]: duplicate id '" + nodes[n] + "'");
    }

    if (generators.empty()) problems.emplace_back("generators: list is empty");
    std::set<std::string> gen_ids;
    for (std::size_t g = 0; g < generators.size(); ++g) {
        const auto& gen = generators[g];
        const std::string where = "generators[" + std::to_string(g) + "]";
        if (!gen_ids.insert(gen.id).second) problems.push_back(where + ".id: duplicate id '" + gen.id + "'");
        if (!node_ids.count(gen.node)) problems.push_back(where + ".node: unknown node '" + gen.node + "'");
        if (!(gen.capacity >= 0.0) || !std::isfinite(gen.capacity)) problems.push_back(where + ".capacity: must be finite and >= 0");
        if (!std::isfinite(gen.cost)) problems.push_back(where + ".cost: must be finite");
    }

    std::set<std::string> line_ids;
    for (std::size_t l = 0; l < lines.size(); ++l) {
        const auto& line = lines[l];
        const std::string where = "lines[" + std::to_string(l) + "]";
        if (!line_ids.insert(line.id).second) problems.push_back(where + ".id: duplicate id '" + line.id + "'");
        if (!node_ids.count(line.from)) problems.push_back(where + ".from: unknown node '" + line.from + "'");
        if (!node_ids.count(line.to)) problems.push_back(where + ".to: unknown node '" + line.to + "'");
        if (line.from == line.to) problems.push_back(where + ": from and to are the same node");
        if (!(line.capacity >= 0.0) || !std::isfinite(line.capacity)) problems.push_back(where + ".capacity: must be finite and >= 0");
        if (!std::isfinite(line.cost)) problems.push_back(where + ".cost: must be finite");
    }

    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "network: " << problems.size() << " problem(s)";
        for (const auto& p : problems) msg << "\n  " << p;
        throw ValidationError(msg.str());
    }
}

namespace {

template <typename Range, typename Key>
std::size_t find_index(const Range& range, const std::string& id, Key key, const char* what) {
    for (std::size_t i = 0; i < range.size(); ++i) {
        if (key(range[i]) == id) return i;
    }
    throw ValidationError(std::string("unknown ") + what + " '" + id + "'");
}

}  // namespace

std::size_t NetworkModel::node_index(const std::string& id) const {
    return find_index(nodes, id, [](const std::string& n) -> const std::string& { return n; }, "node");
}

std::size_t NetworkModel::generator_index(const std::string& id) const {
    return find_index(generators, id, [](const Generator& g) -> const std::string& { return g.id; }, "generator");
}

std::size_t NetworkModel::line_index(const std::string& id) const {
    return find_index(lines, id, [](const Line& l) -> const std::string& { return l.id; }, "line");
}

TimestepData make_timestep(const NetworkModel& net, const std::map<std::string, double>& demand,
                           const std::map<std::string, double>& capacity_factor) {
    TimestepData data;
    data.demand.assign(net.nodes.size(), 0.0);
    data.capacity_factor.assign(net.generators.size(), 1.0);
    for (const auto& [node, value] : demand) data.demand[net.node_index(node)] = value;
    for (const auto& [gen, value] : capacity_factor) {
        const std::size_t g = net.generator_index(gen);
        if (!net.generators[g].uses_cf_series && value != 1.0) {
            throw ValidationError("generator '" + gen + "' has no capacity-factor series; its CF is fixed to 1");
        }
        data.capacity_factor[g] = value;
    }
    check_timestep(net, data);
    return data;
}

void check_timestep(const NetworkModel& net, const TimestepData& data) {
    if (data.demand.size() != net.nodes.size()) {
        throw ContractError("timestep: " + std::to_string(data.demand.size()) + " demand values for " +
                            std::to_string(net.nodes.size()) + " nodes");
    }
    if (data.capacity_factor.size() != net.generators.size()) {
        throw ContractError("timestep: " + std::to_string(data.capacity_factor.size()) + " capacity factors for " +
                            std::to_string(net.generators.size()) + " generators");
    }
    for (std::size_t n = 0; n < data.demand.size(); ++n) {
        if (!(data.demand[n] >= 0.0) || !std::isfinite(data.demand[n])) {
            throw ContractError("timestep: demand at node '" + net.nodes[n] + "' must be finite and >= 0");
        }
    }
    for (std::size_t g = 0; g < data.capacity_factor.size(); ++g) {
        const double cf = data.capacity_factor[g];
        if (!(cf >= 0.0 && cf <= 1.0)) {
            throw ContractError("timestep: capacity factor of '" + net.generators[g].id + "' outside [0, 1]");
        }
        if (!net.generators[g].uses_cf_series && cf != 1.0) {
            throw ContractError("timestep: generator '" + net.generators[g].id + "' must have CF = 1");
        }
    }
}

TransportLayout layout_of(const NetworkModel& net) {
    return TransportLayout{net.generators.size(), net.lines.size(), net.nodes.size()};
}

std::string active_label(const NetworkModel& net, std::size_t index) {
    const TransportLayout lay = layout_of(net);
    if (index < lay.generators) return "cap:" + net.generators[index].id;
    if (index < lay.generators + lay.lines) return "line:" + net.lines[index - lay.generators].id;
    if (index < lay.rows()) return "balance:" + net.nodes[index - lay.generators - lay.lines];
    const std::size_t var = index - lay.rows();
    if (var < lay.generators) return "zero:" + net.generators[var].id;
    if (var < lay.cols()) return "zero:" + net.lines[var - lay.generators].id;
    throw ContractError("active index " + std::to_string(index) + " out of range");
}

LpStandardForm build_lp_template(const NetworkModel& net) {
    net.validate();
    const TransportLayout lay = layout_of(net);
    const auto rows = static_cast<Eigen::Index>(lay.rows());
    const auto cols = static_cast<Eigen::Index>(lay.cols());

    LpStandardForm lp;
    lp.cost = Eigen::VectorXd::Zero(cols);
    lp.matrix = Eigen::MatrixXd::Zero(rows, cols);
    lp.rhs = Eigen::VectorXd::Zero(rows);
    lp.row_kind.assign(lay.rows(), RowKind::less_equal);

    for (std::size_t g = 0; g < lay.generators; ++g) {
        const auto var = static_cast<Eigen::Index>(lay.gen_var(g));
        lp.cost(var) = net.generators[g].cost;
        lp.matrix(static_cast<Eigen::Index>(lay.gen_cap_row(g)), var) = 1.0;
        const std::size_t n = net.node_index(net.generators[g].node);
        lp.matrix(static_cast<Eigen::Index>(lay.balance_row(n)), var) += 1.0;
    }
    for (std::size_t l = 0; l < lay.lines; ++l) {
        const auto var = static_cast<Eigen::Index>(lay.line_var(l));
        lp.cost(var) = net.lines[l].cost;
        lp.matrix(static_cast<Eigen::Index>(lay.line_cap_row(l)), var) = 1.0;
        lp.matrix(static_cast<Eigen::Index>(lay.balance_row(net.node_index(net.lines[l].to))), var) += 1.0;
        lp.matrix(static_cast<Eigen::Index>(lay.balance_row(net.node_index(net.lines[l].from))), var) -= 1.0;
    }
    for (std::size_t n = 0; n < lay.nodes; ++n) lp.row_kind[lay.balance_row(n)] = RowKind::equal;
    return lp;
}

Eigen::VectorXd timestep_rhs(const NetworkModel& net, const TimestepData& data) {
    check_timestep(net, data);
    const TransportLayout lay = layout_of(net);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(lay.rows()));
    for (std::size_t g = 0; g < lay.generators; ++g) {
        rhs(static_cast<Eigen::Index>(lay.gen_cap_row(g))) = net.generators[g].capacity * data.capacity_factor[g];
    }
    for (std::size_t l = 0; l < lay.lines; ++l) {
        rhs(static_cast<Eigen::Index>(lay.line_cap_row(l))) = net.lines[l].capacity;
    }
    for (std::size_t n = 0; n < lay.nodes; ++n) {
        rhs(static_cast<Eigen::Index>(lay.balance_row(n))) = data.demand[n];
    }
    return rhs;
}

LpStandardForm build_timestep_lp(const NetworkModel& net, const TimestepData& data) {
    LpStandardForm lp = build_lp_template(net);
    lp.rhs = timestep_rhs(net, data);
    return lp;
}

TransportDuals unpack_duals(const NetworkModel& net, const Eigen::VectorXd& duals) {
    const TransportLayout lay = layout_of(net);
    if (static_cast<std::size_t>(duals.size()) != lay.rows()) {
        throw ContractError("duals: expected " + std::to_string(lay.rows()) + " entries, got " +
                            std::to_string(duals.size()));
    }
    TransportDuals out;
    for (std::size_t g = 0; g < lay.generators; ++g) out.gen_cap.push_back(duals(static_cast<Eigen::Index>(lay.gen_cap_row(g))));
    for (std::size_t l = 0; l < lay.lines; ++l) out.line_cap.push_back(duals(static_cast<Eigen::Index>(lay.line_cap_row(l))));
    for (std::size_t n = 0; n < lay.nodes; ++n) out.lmp.push_back(duals(static_cast<Eigen::Index>(lay.balance_row(n))));
    return out;
}

double dual_objective(const NetworkModel& net, const Eigen::VectorXd& duals, const TimestepData& data) {
    check_timestep(net, data);
    const TransportDuals d = unpack_duals(net, duals);
    double value = 0.0;
    for (std::size_t g = 0; g < net.generators.size(); ++g) {
        value += d.gen_cap[g] * net.generators[g].capacity * data.capacity_factor[g];
    }
    for (std::size_t l = 0; l < net.lines.size(); ++l) value += net.lines[l].capacity * d.line_cap[l];
    for (std::size_t n = 0; n < net.nodes.size(); ++n) value += d.lmp[n] * data.demand[n];
    return value;
}

}  // namespace tsagg
