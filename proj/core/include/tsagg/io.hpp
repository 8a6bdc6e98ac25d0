#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tsagg/transport.hpp"

namespace tsagg {

inline constexpr int kSchemaVersion = 1;

/// Network file (JSON):
///
///     {"schema_version": 1,
///      "nodes": ["N1", "N2"],
///      "generators": [{"id": "G1", "node": "N1", "cost": 1, "capacity": 5,
///                      "cf_series": false}],
///      "lines": [{"id": "L12", "from": "N1", "to": "N2", "capacity": 10,
///                 "cost": 0.1, "corridor": "Line 1"}]}
///
/// One entry per flow direction; "cf_series" and "corridor" are optional.
/// Schema problems are reported with their field path, all at once.
NetworkModel parse_network(const std::string& text, const std::string& source = "network");
NetworkModel load_network(const std::filesystem::path& path);
std::string network_to_json(const NetworkModel& net);
void save_network(const std::filesystem::path& path, const NetworkModel& net);

/// Time series file (CSV): header "t,D_<node>...,CF_<gen>..." with one D
/// column per node and one CF column per generator that uses a CF series.
/// t runs 1, 2, ... without gaps.
std::vector<TimestepData> parse_timeseries(std::istream& in, const NetworkModel& net,
                                           const std::string& source = "timeseries");
std::vector<TimestepData> load_timeseries(const std::filesystem::path& path, const NetworkModel& net);
/// Numbers are written in shortest round-trip form, so loading the file
/// reproduces `data` exactly.
void write_timeseries(std::ostream& out, const NetworkModel& net, std::span<const TimestepData> data);
void save_timeseries(const std::filesystem::path& path, const NetworkModel& net, std::span<const TimestepData> data);

struct CaseStudyConfig {
    std::size_t weeks = 52;
    std::uint64_t seed = 1;
    double demand_base = 45.0;       // MW
    double demand_amplitude = 70.0;  // MW, diurnal swing
    double demand_noise = 12.0;      // MW, standard deviation
    double weekend_factor = 0.92;
    double cf_alpha = 1.6;  // beta distribution shape
    double cf_beta = 2.2;
    double cf_min = 0.02;
    double cf_max = 0.98;

    std::size_t hours() const { return weeks * 168; }
};

/// Three nodes: N1 carries all demand and unserved energy (NSP), N2 a
/// renewable unit (Re) driven by the CF series, N3 a thermal unit (Th).
/// Three corridors, each modelled as two directed lines.
NetworkModel case_study_network();

struct CaseStudy {
    NetworkModel network;
    std::vector<TimestepData> data;
};

/// Hourly demand (diurnal shape, weekend dip, Gaussian noise, floored at
/// 1 MW) and beta-distributed capacity factors. Fully determined by the seed.
CaseStudy generate_case_study(const CaseStudyConfig& cfg);

}  // namespace tsagg
