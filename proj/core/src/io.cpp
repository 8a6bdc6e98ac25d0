#include "tsagg/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "tsagg/error.hpp"
#include "tsagg/metrics.hpp"

namespace tsagg {

namespace {

using nlohmann::json;

class SchemaReader {
public:
    explicit SchemaReader(std::string source) : source_(std::move(source)) {}

    std::string string_field(const json& obj, const std::string& where, const char* key) {
        if (!obj.contains(key)) {
            problems_.push_back(where + "." + key + ": missing");
            return {};
        }
        if (!obj[key].is_string()) {
            problems_.push_back(where + "." + key + ": must be a string");
            return {};
        }
        return obj[key].get<std::string>();
    }

    double number_field(const json& obj, const std::string& where, const char* key) {
        if (!obj.contains(key)) {
            problems_.push_back(where + "." + key + ": missing");
            return 0.0;
        }
        if (!obj[key].is_number()) {
            problems_.push_back(where + "." + key + ": must be a number");
            return 0.0;
        }
        return obj[key].get<double>();
    }

    const json* array_field(const json& obj, const char* key, bool required) {
        if (!obj.contains(key)) {
            if (required) problems_.push_back(std::string(key) + ": missing");
            return nullptr;
        }
        if (!obj[key].is_array()) {
            problems_.push_back(std::string(key) + ": must be an array");
            return nullptr;
        }
        return &obj[key];
    }

    void problem(std::string p) { problems_.push_back(std::move(p)); }

    void raise_if_any() const {
        if (problems_.empty()) return;
        std::ostringstream msg;
        msg << source_ << ": " << problems_.size() << " schema problem(s)";
        for (const auto& p : problems_) msg << "\n  " << p;
        throw ValidationError(msg.str());
    }

private:
    std::string source_;
    std::vector<std::string> problems_;
};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (ch != '\r') {
            cell += ch;
        }
    }
    cells.push_back(cell);
    for (auto& c : cells) {
        const auto b = c.find_first_not_of(" \t");
        const auto e = c.find_last_not_of(" \t");
        c = b == std::string::npos ? std::string() : c.substr(b, e - b + 1);
    }
    return cells;
}

bool parse_double(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

NetworkModel parse_network(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(source + ": not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ValidationError(source + ": top level must be an object");

    SchemaReader r(source);
    if (!doc.contains("schema_version")) {
        r.problem("schema_version: missing");
    } else if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != kSchemaVersion) {
        r.problem("schema_version: expected " + std::to_string(kSchemaVersion));
    }

    NetworkModel net;
    if (const json* nodes = r.array_field(doc, "nodes", true)) {
        for (std::size_t i = 0; i < nodes->size(); ++i) {
            if (!(*nodes)[i].is_string()) {
                r.problem("nodes[" + std::to_string(i) + "]: must be a string");
            } else {
                net.nodes.push_back((*nodes)[i].get<std::string>());
            }
        }
    }
    if (const json* gens = r.array_field(doc, "generators", true)) {
        for (std::size_t i = 0; i < gens->size(); ++i) {
            const std::string where = "generators[" + std::to_string(i) + "]";
            const json& g = (*gens)[i];
            if (!g.is_object()) {
                r.problem(where + ": must be an object");
                continue;
            }
            Generator gen;
            gen.id = r.string_field(g, where, "id");
            gen.node = r.string_field(g, where, "node");
            gen.cost = r.number_field(g, where, "cost");
            gen.capacity = r.number_field(g, where, "capacity");
            if (g.contains("cf_series")) {
                if (g["cf_series"].is_boolean()) {
                    gen.uses_cf_series = g["cf_series"].get<bool>();
                } else {
                    r.problem(where + ".cf_series: must be a boolean");
                }
            }
            net.generators.push_back(std::move(gen));
        }
    }
    if (const json* lines = r.array_field(doc, "lines", false)) {
        for (std::size_t i = 0; i < lines->size(); ++i) {
            const std::string where = "lines[" + std::to_string(i) + "]";
            const json& l = (*lines)[i];
            if (!l.is_object()) {
                r.problem(where + ": must be an object");
                continue;
            }
            Line line;
            line.id = r.string_field(l, where, "id");
            line.from = r.string_field(l, where, "from");
            line.to = r.string_field(l, where, "to");
            line.capacity = r.number_field(l, where, "capacity");
            line.cost = r.number_field(l, where, "cost");
            if (l.contains("corridor")) line.corridor = r.string_field(l, where, "corridor");
            net.lines.push_back(std::move(line));
        }
    }
    r.raise_if_any();
    try {
        net.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(source + ": " + e.what());
    }
    return net;
}

NetworkModel load_network(const std::filesystem::path& path) {
    return parse_network(read_file(path), path.string());
}

std::string network_to_json(const NetworkModel& net) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["nodes"] = net.nodes;
    doc["generators"] = json::array();
    for (const auto& g : net.generators) {
        doc["generators"].push_back(
            {{"id", g.id}, {"node", g.node}, {"cost", g.cost}, {"capacity", g.capacity}, {"cf_series", g.uses_cf_series}});
    }
    doc["lines"] = json::array();
    for (const auto& l : net.lines) {
        json entry = {{"id", l.id}, {"from", l.from}, {"to", l.to}, {"capacity", l.capacity}, {"cost", l.cost}};
        if (!l.corridor.empty()) entry["corridor"] = l.corridor;
        doc["lines"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

void save_network(const std::filesystem::path& path, const NetworkModel& net) {
    write_file(path, network_to_json(net));
}

std::vector<TimestepData> parse_timeseries(std::istream& in, const NetworkModel& net, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(source + ": file is empty");
    const std::vector<std::string> header = split_csv_line(line);
    if (header.empty() || header[0] != "t") throw ValidationError(source + ": first column must be 't'");

    // Column -> (is_demand, index)
    std::vector<std::pair<bool, std::size_t>> columns;
    std::vector<char> have_demand(net.nodes.size(), 0), have_cf(net.generators.size(), 0);
    for (std::size_t c = 1; c < header.size(); ++c) {
        const std::string& name = header[c];
        bool known = false;
        if (name.rfind("D_", 0) == 0) {
            for (std::size_t n = 0; n < net.nodes.size(); ++n) {
                if (net.nodes[n] == name.substr(2)) {
                    if (have_demand[n]) throw ValidationError(source + ": duplicate column '" + name + "'");
                    have_demand[n] = 1;
                    columns.emplace_back(true, n);
                    known = true;
                }
            }
        } else if (name.rfind("CF_", 0) == 0) {
            for (std::size_t g = 0; g < net.generators.size(); ++g) {
                if (net.generators[g].id == name.substr(3) && net.generators[g].uses_cf_series) {
                    if (have_cf[g]) throw ValidationError(source + ": duplicate column '" + name + "'");
                    have_cf[g] = 1;
                    columns.emplace_back(false, g);
                    known = true;
                }
            }
        }
        if (!known) throw ValidationError(source + ": unknown column '" + name + "'");
    }
    for (std::size_t n = 0; n < net.nodes.size(); ++n) {
        if (!have_demand[n]) throw ValidationError(source + ": missing column 'D_" + net.nodes[n] + "'");
    }
    for (std::size_t g = 0; g < net.generators.size(); ++g) {
        if (net.generators[g].uses_cf_series && !have_cf[g]) {
            throw ValidationError(source + ": missing column 'CF_" + net.generators[g].id + "'");
        }
    }

    std::vector<TimestepData> out;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++row;
        const std::string at = source + ": row " + std::to_string(row);
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw ValidationError(at + ": expected " + std::to_string(header.size()) + " fields, got " +
                                  std::to_string(cells.size()));
        }
        double t = 0.0;
        if (!parse_double(cells[0], t) || t != static_cast<double>(row)) {
            throw ValidationError(at + ": t = '" + cells[0] + "' breaks the sequence 1, 2, ... (expected " +
                                  std::to_string(row) + ")");
        }
        TimestepData data;
        data.demand.assign(net.nodes.size(), 0.0);
        data.capacity_factor.assign(net.generators.size(), 1.0);
        for (std::size_t c = 1; c < cells.size(); ++c) {
            double v = 0.0;
            if (!parse_double(cells[c], v)) {
                throw ValidationError(at + ": column '" + header[c] + "' is not a number: '" + cells[c] + "'");
            }
            const auto [is_demand, index] = columns[c - 1];
            if (is_demand) {
                if (v < 0.0) throw ValidationError(at + ": demand " + header[c] + " is negative");
                data.demand[index] = v;
            } else {
                if (v < 0.0 || v > 1.0) {
                    throw ValidationError(at + ": capacity factor " + header[c] + " = " + cells[c] + " outside [0, 1]");
                }
                data.capacity_factor[index] = v;
            }
        }
        out.push_back(std::move(data));
    }
    if (out.empty()) throw ValidationError(source + ": no data rows (at least one timestep is required)");
    return out;
}

std::vector<TimestepData> load_timeseries(const std::filesystem::path& path, const NetworkModel& net) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_timeseries(in, net, path.string());
}

void write_timeseries(std::ostream& out, const NetworkModel& net, std::span<const TimestepData> data) {
    out << 't';
    for (const auto& n : net.nodes) out << ",D_" << n;
    for (const auto& g : net.generators) {
        if (g.uses_cf_series) out << ",CF_" << g.id;
    }
    out << '\n';
    for (std::size_t t = 0; t < data.size(); ++t) {
        check_timestep(net, data[t]);
        out << t + 1;
        for (double d : data[t].demand) out << ',' << format_exact(d);
        for (std::size_t g = 0; g < net.generators.size(); ++g) {
            if (net.generators[g].uses_cf_series) out << ',' << format_exact(data[t].capacity_factor[g]);
        }
        out << '\n';
    }
}

void save_timeseries(const std::filesystem::path& path, const NetworkModel& net, std::span<const TimestepData> data) {
    std::ostringstream buf;
    write_timeseries(buf, net, data);
    write_file(path, buf.str());
}

NetworkModel case_study_network() {
    NetworkModel net;
    net.nodes = {"N1", "N2", "N3"};
    net.generators = {
        {"Re", "N2", 3.0, 100.0, true},
        {"Th", "N3", 24.0, 60.0, false},
        {"NSP", "N1", 5000.0, 1000.0, false},
    };
    net.lines = {
        {"L1_31", "N3", "N1", 60.0, 0.1, "Line 1"}, {"L1_13", "N1", "N3", 60.0, 0.1, "Line 1"},
        {"L2_23", "N2", "N3", 30.0, 0.1, "Line 2"}, {"L2_32", "N3", "N2", 30.0, 0.1, "Line 2"},
        {"L3_21", "N2", "N1", 40.0, 0.1, "Line 3"}, {"L3_12", "N1", "N2", 40.0, 0.1, "Line 3"},
    };
    return net;
}

CaseStudy generate_case_study(const CaseStudyConfig& cfg) {
    if (cfg.weeks == 0) throw ContractError("case study: weeks must be at least 1");
    if (!(cfg.cf_min >= 0.0 && cfg.cf_min <= cfg.cf_max && cfg.cf_max <= 1.0)) {
        throw ContractError("case study: capacity factor bounds must satisfy 0 <= min <= max <= 1");
    }
    if (!(cfg.cf_alpha > 0.0 && cfg.cf_beta > 0.0 && cfg.demand_noise >= 0.0)) {
        throw ContractError("case study: distribution parameters must be positive");
    }

    CaseStudy cs;
    cs.network = case_study_network();
    const std::size_t n1 = cs.network.node_index("N1");
    const std::size_t re = cs.network.generator_index("Re");

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> noise(0.0, cfg.demand_noise);
    std::gamma_distribution<double> ga(cfg.cf_alpha, 1.0), gb(cfg.cf_beta, 1.0);

    const std::size_t T = cfg.hours();
    cs.data.reserve(T);
    for (std::size_t t = 0; t < T; ++t) {
        const std::size_t hour = t % 24;
        const std::size_t day = (t / 24) % 7;
        const double s = std::sin(std::numbers::pi * (static_cast<double>(hour) - 6.0) / 12.0);
        double demand = cfg.demand_base + cfg.demand_amplitude * s * s;
        if (day >= 5) demand *= cfg.weekend_factor;
        demand = std::max(1.0, demand + (cfg.demand_noise > 0.0 ? noise(rng) : 0.0));

        const double x = ga(rng), y = gb(rng);
        const double cf = std::clamp(x / (x + y), cfg.cf_min, cfg.cf_max);

        TimestepData d;
        d.demand.assign(cs.network.nodes.size(), 0.0);
        d.capacity_factor.assign(cs.network.generators.size(), 1.0);
        d.demand[n1] = demand;
        d.capacity_factor[re] = cf;
        cs.data.push_back(std::move(d));
    }
    return cs;
}

}  // namespace tsagg
