#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "instances.hpp"
#include "tsagg/error.hpp"
#include "tsagg/io.hpp"
#include "tsagg/study.hpp"

using namespace tsagg;

namespace {

const std::filesystem::path kData = TSAGG_TEST_DATA_DIR;

std::string error_text(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("toy fixtures load") {
    const NetworkModel net = load_network(kData / "toy_network.json");
    CHECK(net == testing::toy_network());
    const auto data = load_timeseries(kData / "toy_timeseries.csv", net);
    CHECK(data == testing::toy_data({3.0, 4.0, 8.0, 12.0}));
}

TEST_CASE("case study template") {
    const NetworkModel net = case_study_network();
    CHECK(net.nodes.size() == 3);
    CHECK(net.generators.size() == 3);
    CHECK(net.lines.size() == 6);
    CHECK(parse_network(network_to_json(net)) == net);
}

TEST_CASE("network validation errors") {
    const std::string unknown = error_text([] { load_network(kData / "unknown_node.json"); });
    CHECK(unknown.find("N9") != std::string::npos);
    CHECK_THROWS_AS(load_network(kData / "unknown_node.json"), ValidationError);
    CHECK_THROWS_AS(parse_network(R"({"schema_version": 1, "nodes": ["N1"], "generators": [], "lines": []})"),
                    ValidationError);
    const std::string schema = error_text([] {
        parse_network(R"({"schema_version": 1, "nodes": ["N1"], "generators": [{"id": "G", "node": "N1", "cost": "x"}]})");
    });
    CHECK(schema.find("generators[0].cost") != std::string::npos);
    CHECK(schema.find("generators[0].capacity") != std::string::npos);
    CHECK_THROWS_AS(load_network(kData / "missing.json"), IoError);
}

TEST_CASE("time series errors") {
    const NetworkModel toy = load_network(kData / "toy_network.json");
    const NetworkModel cf = load_network(kData / "cf_network.json");
    const std::string out_of_range = error_text([&] { load_timeseries(kData / "cf_out_of_range.csv", cf); });
    CHECK(out_of_range.find("row 7") != std::string::npos);
    CHECK_THROWS_AS(load_timeseries(kData / "header_only.csv", toy), ValidationError);
    CHECK(error_text([&] { load_timeseries(kData / "missing_cf_column.csv", cf); }).find("CF_Re") != std::string::npos);
    CHECK(error_text([&] { load_timeseries(kData / "gap_in_t.csv", toy); }).find("row 2") != std::string::npos);
    CHECK_THROWS_AS(load_timeseries(kData / "missing.csv", toy), IoError);
}

TEST_CASE("case study generation") {
    const CaseStudy a = generate_case_study({});
    CHECK(a.data.size() == 8736);
    const CaseStudy b = generate_case_study({});
    CHECK(a.data == b.data);
    CaseStudyConfig other;
    other.seed = 2;
    CHECK(generate_case_study(other).data != a.data);

    std::stringstream first, second;
    write_timeseries(first, a.network, a.data);
    write_timeseries(second, b.network, b.data);
    CHECK(first.str() == second.str());
    CHECK(parse_timeseries(first, a.network) == a.data);

    for (const auto& t : a.data) {
        for (double cf : t.capacity_factor) CHECK((cf >= 0.0 && cf <= 1.0));
        for (double d : t.demand) CHECK(d >= 0.0);
    }
}

TEST_CASE("generated case study covers the three price regimes") {
    const CaseStudy cs = generate_case_study({.weeks = 8});
    const Study st = run_study(cs.network, cs.data, 0);
    CHECK(st.bases.size() >= 3);
    CHECK(st.bases.size() <= 20);
    std::set<std::string> marginal;
    for (const auto& g : st.bases.groups) marginal.insert(g.descriptor.marginal.begin(), g.descriptor.marginal.end());
    CHECK(marginal.count("Re") == 1);
    CHECK(marginal.count("Th") == 1);
    CHECK(marginal.count("NSP") == 1);
}

TEST_CASE("infeasible timestep names the hour") {
    NetworkModel net = testing::toy_network();
    const auto data = testing::toy_data({3.0, 200.0});
    try {
        solve_timesteps(net, data, 1);
        FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
        CHECK(e.timestep() == 2);
    }
}
