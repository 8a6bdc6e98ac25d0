#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tsagg/lp.hpp"

namespace tsagg {

struct Generator {
    std::string id;
    std::string node;
    double cost = 0.0;      // money per MWh
    double capacity = 0.0;  // MW
    bool uses_cf_series = false;
};

/// One direction of a transport corridor. Both directions of a corridor are
/// listed as separate lines; `corridor` groups them for reporting.
struct Line {
    std::string id;
    std::string from;
    std::string to;
    double capacity = 0.0;  // MW
    double cost = 0.0;      // money per MWh transported
    std::string corridor;

    const std::string& label() const { return corridor.empty() ? id : corridor; }
};

struct NetworkModel {
    std::vector<std::string> nodes;
    std::vector<Generator> generators;
    std::vector<Line> lines;

    /// Collects every problem (dangling references, negative capacities,
    /// duplicate ids, empty generator list) and throws one ValidationError.
    void validate() const;

    std::size_t node_index(const std::string& id) const;
    std::size_t generator_index(const std::string& id) const;
    std::size_t line_index(const std::string& id) const;

    bool operator==(const NetworkModel&) const;
};

bool operator==(const Generator&, const Generator&);
bool operator==(const Line&, const Line&);

/// Input data of one timestep, aligned with the network's node and
/// generator order. Generators without a CF series carry capacity factor 1.
struct TimestepData {
    std::vector<double> demand;
    std::vector<double> capacity_factor;

    bool operator==(const TimestepData&) const = default;
};

/// Id-keyed construction; unknown ids are a ValidationError.
TimestepData make_timestep(const NetworkModel& net, const std::map<std::string, double>& demand,
                           const std::map<std::string, double>& capacity_factor = {});

/// Throws ContractError when `data` does not fit `net` or violates
/// 0 <= CF <= 1, demand >= 0.
void check_timestep(const NetworkModel& net, const TimestepData& data);

/// Variable and row numbering shared by every timestep LP.
///   variables: p_g (generators), then f_l (lines)
///   rows:      generator caps, line caps, nodal balances
struct TransportLayout {
    std::size_t generators = 0;
    std::size_t lines = 0;
    std::size_t nodes = 0;

    std::size_t gen_var(std::size_t g) const { return g; }
    std::size_t line_var(std::size_t l) const { return generators + l; }
    std::size_t gen_cap_row(std::size_t g) const { return g; }
    std::size_t line_cap_row(std::size_t l) const { return generators + l; }
    std::size_t balance_row(std::size_t n) const { return generators + lines + n; }
    std::size_t rows() const { return generators + lines + nodes; }
    std::size_t cols() const { return generators + lines; }
    /// ActiveSet index of the x_var >= 0 bound.
    std::size_t lower_bound(std::size_t var) const { return rows() + var; }
};

TransportLayout layout_of(const NetworkModel& net);

/// Readable name of an ActiveSet index: "cap:<gen>", "line:<line>",
/// "balance:<node>", "zero:<gen>" or "zero:<line>".
std::string active_label(const NetworkModel& net, std::size_t index);

/// Cost vector, constraint matrix and row kinds; identical for all timesteps.
LpStandardForm build_lp_template(const NetworkModel& net);

/// Right-hand side of one timestep: [Pcap_g * CF_g..., Fcap_l..., D_n...].
Eigen::VectorXd timestep_rhs(const NetworkModel& net, const TimestepData& data);

LpStandardForm build_timestep_lp(const NetworkModel& net, const TimestepData& data);

/// Duals of a timestep LP split by constraint family, in the sensitivity
/// sign convention: gen_cap <= 0, line_cap <= 0, lmp = nodal balance dual.
struct TransportDuals {
    std::vector<double> gen_cap;
    std::vector<double> line_cap;
    std::vector<double> lmp;
};

TransportDuals unpack_duals(const NetworkModel& net, const Eigen::VectorXd& duals);

/// sum_g mu_g Pcap_g CF_g + sum_l Fcap_l eta_l + sum_n lambda_n D_n.
/// Throws ContractError when `duals` does not have one entry per row.
double dual_objective(const NetworkModel& net, const Eigen::VectorXd& duals, const TimestepData& data);

}  // namespace tsagg
