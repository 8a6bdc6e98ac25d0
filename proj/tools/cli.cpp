#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsagg/io.hpp"
#include "tsagg/merging.hpp"
#include "tsagg/metrics.hpp"
#include "tsagg/strategies.hpp"
#include "tsagg/study.hpp"

namespace tsagg::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct InputArgs {
    std::string network;
    std::string timeseries;
    unsigned threads = 0;
    std::string out;
};

struct MergeArgs {
    std::string strategy = "greedy";
    std::size_t target_k = 1;
    bool verify_hosts = false;
    std::string adjacency = "input-space";
    std::string adjacency_file;
    std::size_t exhaustive_cap = 12;
};

void add_input_options(CLI::App* cmd, InputArgs& a) {
    cmd->add_option("--network", a.network, "Network JSON file")->required();
    cmd->add_option("--timeseries", a.timeseries, "Time series CSV file")->required();
    cmd->add_option("--threads", a.threads, "Worker threads for timestep solves (0 = all cores)");
    cmd->add_option("--out", a.out, "Output directory (default $TSAGG_OUT_DIR or ./out)");
}

fs::path prepare_out(const std::string& flag) {
    const fs::path dir = resolve_out_dir(flag);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

void write_json(const fs::path& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

json vector_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

json one_based(const std::vector<std::size_t>& ids) {
    json arr = json::array();
    for (std::size_t id : ids) arr.push_back(id + 1);
    return arr;
}

json run_length(const std::vector<std::size_t>& members) {
    json runs = json::array();
    for (std::size_t i = 0; i < members.size();) {
        std::size_t j = i + 1;
        while (j < members.size() && members[j] == members[j - 1] + 1) ++j;
        runs.push_back({members[i] + 1, j - i});
        i = j;
    }
    return runs;
}

json descriptor_json(const BasisDescriptor& d, const NetworkModel& net) {
    json lmp = json::object();
    for (std::size_t n = 0; n < net.nodes.size() && n < d.lmp.size(); ++n) lmp[net.nodes[n]] = d.lmp[n];
    return {{"congested", d.congested}, {"full_load", d.full_load}, {"marginal", d.marginal},
            {"lmp", lmp},              {"report_node", d.report_node}, {"report_lmp", d.report_lmp}};
}

json exactness_json(const ExactnessReport& r) {
    return {{"pass", r.pass},
            {"full_ov", r.full_ov},
            {"aggregated_ov", r.aggregated_ov},
            {"objective_residual", r.objective_residual},
            {"max_primal_residual", r.max_primal_residual},
            {"max_dual_residual", r.max_dual_residual},
            {"degenerate_bases", one_based(r.degenerate_bases)},
            {"alternative_optima_bases", one_based(r.alternative_optima_bases)},
            {"degenerate_timesteps", r.degenerate_timesteps}};
}

json bases_json(const Study& s, const NetworkModel& net) {
    json bases = json::array();
    for (const auto& g : s.bases.groups) {
        json rows = json::array();
        for (std::size_t idx : g.active_set.indices) rows.push_back(active_label(net, idx));
        bases.push_back({{"basis_id", g.label()},
                         {"active_rows", rows},
                         {"weight", g.weight},
                         {"centroid", vector_json(g.centroid)},
                         {"members_run_length_encoded", run_length(g.members)},
                         {"descriptor", descriptor_json(g.descriptor, net)},
                         {"degenerate", g.degenerate},
                         {"alternative_optima", g.alternative_optima},
                         {"aggregated_ov", g.aggregated_ov}});
    }
    json degeneracy = json::array();
    for (const auto& d : s.bases.degeneracy) {
        degeneracy.push_back({{"basis_id", d.basis + 1}, {"timestep", d.timestep + 1}, {"reason", d.reason}});
    }
    return {{"schema_version", kSchemaVersion}, {"horizon", s.bases.horizon}, {"exactness", exactness_json(s.exactness)},
            {"degeneracy", degeneracy},        {"bases", bases}};
}

json trace_json(const StrategyTrace& t) {
    json levels = json::array();
    for (const auto& l : t.levels) {
        levels.push_back({{"k", l.k},
                          {"partition", l.partition.to_string()},
                          {"com", l.com},
                          {"evaluated", l.evaluated},
                          {"fallback", l.fallback},
                          {"tie", l.tie}});
    }
    return {{"strategy", to_string(t.strategy)}, {"bases", t.bases}, {"levels", levels}};
}

json audit_json(const HostAudit& a) {
    return {{"predicted_host", a.predicted_host + 1},
            {"solved_basis", a.solved_basis ? json(*a.solved_basis + 1) : json(nullptr)},
            {"outcome", to_string(a.outcome)}};
}

json evaluation_json(const MergeEvaluation& e, const MergeVerification* v) {
    json clusters = json::array();
    for (std::size_t k = 0; k < e.clusters.size(); ++k) {
        const auto& c = e.clusters[k];
        json entry = {{"bases", one_based(c.bases)}, {"weight", c.weight},         {"host", c.host + 1},
                      {"tied_hosts", one_based(c.tied_hosts)}, {"ov", c.ov}, {"com", c.com}};
        if (v) {
            entry["resolved_ov"] = v->cluster_ov[k];
            if (!v->hosts.empty()) entry["host_audit"] = audit_json(v->hosts[k]);
        }
        clusters.push_back(std::move(entry));
    }
    json doc = {{"partition", e.partition.to_string()}, {"k", e.partition.size()}, {"com", e.com},
                {"ov_I", e.ov_I},                       {"ov_K", e.ov_K},          {"clusters", clusters}};
    if (v) {
        doc["verification"] = {{"resolved_ov_I", v->ov_I},
                               {"resolved_ov_K", v->ov_K},
                               {"residual", v->residual},
                               {"relative_residual", v->relative_residual},
                               {"pass", v->pass}};
    }
    return doc;
}

struct Inputs {
    NetworkModel net;
    std::vector<TimestepData> data;
};

Inputs load_inputs(const InputArgs& a) {
    Inputs in;
    in.net = load_network(a.network);
    in.data = load_timeseries(a.timeseries, in.net);
    return in;
}

AdjacencyList read_adjacency_file(const std::string& path, std::size_t bases) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": not valid JSON: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("pairs") || !doc["pairs"].is_array()) {
        throw ValidationError(path + ": expected an object with a 'pairs' array");
    }
    AdjacencyList adj;
    for (std::size_t i = 0; i < doc["pairs"].size(); ++i) {
        const json& p = doc["pairs"][i];
        const std::string where = path + ": pairs[" + std::to_string(i) + "]";
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_unsigned() || !p[1].is_number_unsigned()) {
            throw ValidationError(where + ": expected two basis ids");
        }
        const auto a = p[0].get<std::size_t>(), b = p[1].get<std::size_t>();
        if (a < 1 || b < 1 || a > bases || b > bases || a == b) {
            throw ValidationError(where + ": basis ids must be distinct and within 1.." + std::to_string(bases));
        }
        adj.add(a - 1, b - 1);
    }
    return adj;
}

json adjacency_json(const std::string& mode, const AdjacencyDetection& det) {
    json pairs = json::array();
    for (const auto& [a, b] : det.adjacency.pairs()) pairs.push_back({a + 1, b + 1});
    json doc = {{"schema_version", kSchemaVersion}, {"mode", mode}, {"pairs", pairs}};
    if (mode == "input-space") {
        doc["delta"] = det.delta;
        doc["coordinates"] = det.coordinates;
    }
    return doc;
}

AdjacencyDetection adjacency_for(const Study& s, const MergeArgs& m) {
    if (m.adjacency == "input-space") return detect_adjacency(s.bases, s.raw_points(), AdjacencyMode::input_space);
    if (m.adjacency == "active-set") return detect_adjacency(s.bases, s.raw_points(), AdjacencyMode::active_set);
    if (m.adjacency_file.empty()) throw ValidationError("--adjacency file requires --adjacency-file");
    AdjacencyDetection det;
    det.adjacency = read_adjacency_file(m.adjacency_file, s.bases.size());
    return det;
}

StrategyTrace run_strategy(Strategy strategy, const Study& s, const AdjacencyList* adj, const StrategyOptions& opts) {
    switch (strategy) {
        case Strategy::exhaustive: return exhaustive_strategy(s.bases, opts);
        case Strategy::greedy: return greedy_strategy(s.bases, opts);
        case Strategy::greedy_adjacent: return greedy_adjacent_strategy(s.bases, *adj, opts);
    }
    throw ContractError("unknown strategy");
}

struct LevelOutputs {
    json mergers = json::array();
    std::vector<MergerRow> rows;
};

LevelOutputs evaluate_levels(const StrategyTrace& trace, const Study& s, const NetworkModel& net, bool verify_hosts) {
    LevelOutputs out;
    const ComModel model(s.bases);
    for (const auto& level : trace.levels) {
        const MergeEvaluation eval = com_partition(level.partition, s.bases, model);
        const MergeVerification v = verify_merge(eval, s.bases, verify_hosts);
        out.mergers.push_back(evaluation_json(eval, verify_hosts ? &v : nullptr));
        out.rows.push_back({level.k, error_report(net, s.bases, eval, v)});
    }
    return out;
}

void print_levels(std::ostream& out, const StrategyTrace& trace, const std::vector<MergerRow>& rows) {
    out << to_string(trace.strategy) << ":\n";
    for (std::size_t i = 0; i < trace.levels.size(); ++i) {
        const auto& l = trace.levels[i];
        out << "  k=" << l.k << " evaluated=" << l.evaluated << " eps_ov=" << format_fixed2(100.0 * rows[i].report.eps_ov)
            << "% " << l.partition.to_string() << (l.fallback ? " (fallback)" : "") << '\n';
    }
}

void write_bases_outputs(const fs::path& dir, const Study& s, const Inputs& in) {
    write_json(dir / "bases.json", bases_json(s, in.net));
    write_bases_table_csv(dir / "bases_table.csv", s.bases);
    write_points_csv(dir / "points.csv", in.net, in.data, s.bases);
}

int cmd_gen_case(std::size_t weeks, std::uint64_t seed, const std::string& out_flag, std::ostream& out) {
    CaseStudyConfig cfg;
    cfg.weeks = weeks;
    cfg.seed = seed;
    const CaseStudy cs = generate_case_study(cfg);
    const fs::path dir = prepare_out(out_flag);
    save_network(dir / "network.json", cs.network);
    save_timeseries(dir / "timeseries.csv", cs.network, cs.data);
    out << "wrote " << cs.data.size() << " timesteps to " << (dir / "timeseries.csv").string() << '\n';
    return kOk;
}

int cmd_solve(const InputArgs& a, std::ostream& out) {
    const Inputs in = load_inputs(a);
    const std::vector<TimestepResult> results = solve_timesteps(in.net, in.data, a.threads);
    const fs::path dir = prepare_out(a.out);

    std::ofstream csv(dir / "timesteps.csv", std::ios::binary);
    if (!csv) throw IoError("cannot write " + (dir / "timesteps.csv").string());
    csv << "t,objective,active_rows\n";
    double total = 0.0;
    std::size_t degenerate = 0;
    const std::size_t cols = layout_of(in.net).cols();
    for (std::size_t t = 0; t < results.size(); ++t) {
        total += results[t].solution.objective;
        if (results[t].active.indices.size() > cols) ++degenerate;
        csv << t + 1 << ',' << format_exact(results[t].solution.objective) << ",\"";
        for (std::size_t i = 0; i < results[t].active.indices.size(); ++i) {
            csv << (i ? ";" : "") << active_label(in.net, results[t].active.indices[i]);
        }
        csv << "\"\n";
    }
    csv.flush();
    if (!csv) throw IoError("write failed: " + (dir / "timesteps.csv").string());

    write_json(dir / "solve.json", {{"schema_version", kSchemaVersion},
                                    {"horizon", results.size()},
                                    {"total_objective", total},
                                    {"degenerate_timesteps", degenerate}});
    out << "solved " << results.size() << " timesteps, total objective " << format_fixed2(total) << '\n';
    return kOk;
}

int cmd_bases(const InputArgs& a, std::ostream& out) {
    const Inputs in = load_inputs(a);
    const Study s = run_study(in.net, in.data, a.threads);
    const fs::path dir = prepare_out(a.out);
    write_bases_outputs(dir, s, in);
    out << s.bases.size() << " bases over " << s.bases.horizon << " timesteps; exactness "
        << (s.exactness.pass ? "pass" : "FAIL") << '\n';
    return kOk;
}

int cmd_merge(const InputArgs& a, const MergeArgs& m, std::ostream& out) {
    const Strategy strategy = parse_strategy(m.strategy);
    const Inputs in = load_inputs(a);
    const Study s = run_study(in.net, in.data, a.threads);

    StrategyOptions opts;
    opts.target_k = m.target_k;
    opts.exhaustive_cap = m.exhaustive_cap;
    std::optional<AdjacencyDetection> det;
    if (strategy == Strategy::greedy_adjacent) det = adjacency_for(s, m);
    const StrategyTrace trace = run_strategy(strategy, s, det ? &det->adjacency : nullptr, opts);
    const LevelOutputs levels = evaluate_levels(trace, s, in.net, m.verify_hosts);

    const fs::path dir = prepare_out(a.out);
    json trace_doc = trace_json(trace);
    trace_doc["schema_version"] = kSchemaVersion;
    write_json(dir / "strategy_trace.json", trace_doc);
    write_json(dir / "mergers.json", {{"schema_version", kSchemaVersion},
                                      {"verified_hosts", m.verify_hosts},
                                      {"partitions", levels.mergers}});
    write_counts_csv(dir / "counts.csv", std::vector<StrategyTrace>{trace});
    write_optimal_mergers_csv(dir / "optimal_mergers.csv", in.net, levels.rows);
    if (det) write_json(dir / "adjacency.json", adjacency_json(m.adjacency, *det));
    print_levels(out, trace, levels.rows);
    return kOk;
}

int cmd_report(const InputArgs& a, const MergeArgs& m, std::ostream& out) {
    const Inputs in = load_inputs(a);
    const Study s = run_study(in.net, in.data, a.threads);
    const fs::path dir = prepare_out(a.out);
    write_bases_outputs(dir, s, in);

    StrategyOptions opts;
    opts.exhaustive_cap = m.exhaustive_cap;
    const AdjacencyDetection det = adjacency_for(s, m);
    write_json(dir / "adjacency.json", adjacency_json(m.adjacency, det));

    std::vector<StrategyTrace> traces;
    json skipped = json::array();
    if (s.bases.size() <= opts.exhaustive_cap) {
        traces.push_back(exhaustive_strategy(s.bases, opts));
    } else {
        skipped.push_back({{"strategy", "exhaustive"},
                           {"reason", std::to_string(s.bases.size()) + " bases exceed the cap of " +
                                          std::to_string(opts.exhaustive_cap)}});
    }
    traces.push_back(greedy_strategy(s.bases, opts));
    traces.push_back(greedy_adjacent_strategy(s.bases, det.adjacency, opts));
    write_counts_csv(dir / "counts.csv", traces);

    json trace_docs = json::array();
    for (const auto& t : traces) trace_docs.push_back(trace_json(t));
    write_json(dir / "strategy_trace.json",
               {{"schema_version", kSchemaVersion}, {"traces", trace_docs}, {"skipped", skipped}});

    const LevelOutputs best = evaluate_levels(traces.front(), s, in.net, true);
    write_optimal_mergers_csv(dir / "optimal_mergers.csv", in.net, best.rows);
    write_json(dir / "mergers.json",
               {{"schema_version", kSchemaVersion}, {"verified_hosts", true}, {"partitions", best.mergers}});

    // Every pairwise merge: analytical against re-solved CoM, and the host audit.
    const ComModel model(s.bases);
    json pairs = json::array();
    double worst = 0.0;
    std::size_t violations = 0, boundary = 0;
    for (std::size_t i = 0; i < s.bases.size(); ++i) {
        for (std::size_t j = i + 1; j < s.bases.size(); ++j) {
            const Partition p = Partition::identity(s.bases.size()).merged(i, j);
            const MergeEvaluation eval = com_partition(p, s.bases, model);
            const MergeVerification v = verify_merge(eval, s.bases, true);
            const auto& c = *std::find_if(eval.clusters.begin(), eval.clusters.end(),
                                          [](const ClusterEvaluation& ce) { return ce.bases.size() == 2; });
            const std::size_t k = static_cast<std::size_t>(&c - eval.clusters.data());
            const HostAudit& h = v.hosts[k];
            worst = std::max(worst, v.relative_residual);
            if (h.outcome == HostOutcome::violation) ++violations;
            if (h.outcome == HostOutcome::boundary) ++boundary;
            pairs.push_back({{"bases", {i + 1, j + 1}},
                             {"com", eval.com},
                             {"resolved_com", v.ov_I - v.ov_K},
                             {"relative_residual", v.relative_residual},
                             {"host", c.host + 1},
                             {"tied_hosts", one_based(c.tied_hosts)},
                             {"host_audit", audit_json(h)}});
        }
    }
    write_json(dir / "pairwise.json", {{"schema_version", kSchemaVersion},
                                       {"max_relative_residual", worst},
                                       {"host_violations", violations},
                                       {"host_boundary", boundary},
                                       {"pairs", pairs}});

    json strategies = json::array();
    for (const auto& t : traces) {
        json counts = json::array();
        for (const auto& l : t.levels) counts.push_back(l.evaluated);
        strategies.push_back({{"strategy", to_string(t.strategy)}, {"evaluated", counts}});
    }
    write_json(dir / "report.json", {{"schema_version", kSchemaVersion},
                                     {"horizon", s.bases.horizon},
                                     {"bases", s.bases.size()},
                                     {"exactness", exactness_json(s.exactness)},
                                     {"pairwise", {{"count", pairs.size()},
                                                   {"max_relative_residual", worst},
                                                   {"host_violations", violations},
                                                   {"host_boundary", boundary}}},
                                     {"strategies", strategies}});

    out << s.bases.size() << " bases over " << s.bases.horizon << " timesteps; exactness "
        << (s.exactness.pass ? "pass" : "FAIL") << '\n';
    out << pairs.size() << " pairwise merges: max relative CoM residual " << worst << ", host violations "
        << violations << '\n';
    for (std::size_t i = 0; i < traces.size(); ++i) {
        if (i == 0) {
            print_levels(out, traces[0], best.rows);
        } else {
            out << to_string(traces[i].strategy) << " evaluated:";
            for (const auto& l : traces[i].levels) out << ' ' << l.evaluated;
            out << '\n';
        }
    }
    return kOk;
}

}  // namespace

int exit_code_for(const Error& e) {
    const std::string& c = e.category();
    if (c == "input" || c == "contract" || c == "metric") return kInput;
    if (c == "infeasible") return kInfeasible;
    if (c == "limit") return kLimit;
    if (c == "io") return kIo;
    return kInternal;
}

fs::path resolve_out_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("TSAGG_OUT_DIR"); env && *env) return env;
    return "out";
}

int run_pipeline(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time series aggregation by optimal bases and bases merging"};
    app.name("tsagg");
    app.require_subcommand(1);

    std::size_t weeks = 52;
    std::uint64_t seed = 1;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen-case", "Generate the synthetic three-node case study");
    gen->add_option("--weeks", weeks, "Number of weeks (168 hours each)")->check(CLI::PositiveNumber);
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("--out", gen_out, "Output directory (default $TSAGG_OUT_DIR or ./out)");

    InputArgs in;
    MergeArgs m;
    CLI::App* solve = app.add_subcommand("solve", "Solve every timestep LP");
    add_input_options(solve, in);
    CLI::App* bases = app.add_subcommand("bases", "Group timesteps into bases and check exactness");
    add_input_options(bases, in);

    CLI::App* merge = app.add_subcommand("merge", "Search bases mergers with one strategy");
    add_input_options(merge, in);
    merge->add_option("--strategy", m.strategy, "exhaustive | greedy | greedy-adjacent")
        ->check(CLI::IsMember({"exhaustive", "greedy", "greedy-adjacent"}));
    merge->add_option("--target-k", m.target_k, "Stop at this many clusters")->check(CLI::PositiveNumber);
    merge->add_flag("--verify-hosts", m.verify_hosts, "Audit hosts and append re-solve residuals");

    CLI::App* report = app.add_subcommand("report", "All strategies, tables and the pairwise audit");
    add_input_options(report, in);
    for (CLI::App* cmd : {merge, report}) {
        cmd->add_option("--adjacency", m.adjacency, "input-space | active-set | file")
            ->check(CLI::IsMember({"input-space", "active-set", "file"}));
        cmd->add_option("--adjacency-file", m.adjacency_file, "JSON file {\"pairs\": [[1, 2], ...]}");
        cmd->add_option("--exhaustive-cap", m.exhaustive_cap, "Largest basis count for exhaustive search");
    }

    std::vector<std::string> argv_store{"tsagg"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) return cmd_gen_case(weeks, seed, gen_out, out);
        if (*solve) return cmd_solve(in, out);
        if (*bases) return cmd_bases(in, out);
        if (*merge) return cmd_merge(in, m, out);
        if (*report) return cmd_report(in, m, out);
    } catch (const Error& e) {
        err << "tsagg: " << e.category() << " error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "tsagg: internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}

}  // namespace tsagg::cli
