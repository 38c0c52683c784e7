// Golden-equivalence checks: every CLI subcommand must produce exactly what
// the corresponding library call produces on the same inputs.
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "suitkit/aggregate.hpp"
#include "suitkit/io.hpp"
#include "suitkit/measures.hpp"
#include "suitkit/model.hpp"
#include "suitkit/rescale.hpp"

namespace {

using namespace suitkit;
namespace fs = std::filesystem;

std::string g_cli;
fs::path g_fixtures;
fs::path g_tmp;
int g_failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++g_failures;
}

int run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string run_cli_stdout(const std::string& args) {
    const fs::path out = g_tmp / "stdout.txt";
    const std::string cmd =
        g_cli + " " + args + " > " + out.string() + " 2>/dev/null";
    if (std::system(cmd.c_str()) == -1) return {};
    std::ifstream in(out, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fixture(const std::string& name) {
    return (g_fixtures / name).string();
}

void test_distance_to_point() {
    const fs::path out = g_tmp / "cli_distance.geojson";
    const int code = run_cli("distance to-point --input " + fixture("zones.geojson") +
                             " --targets " + fixture("schools.geojson") +
                             " --metric euclidean --column d_school --output " +
                             out.string());
    check(code == 0, "distance to-point exits 0");

    FeatureLayer zones = read_geojson(fixture("zones.geojson"));
    const FeatureLayer schools = read_geojson(fixture("schools.geojson"));
    const MeasurementResult r = distance_to_point(zones, schools, Metric::euclidean);
    append_measurement(zones, r, "d_school");
    check(slurp(out) == to_geojson_string(zones),
          "distance to-point output equals the library result byte for byte");
}

void test_density_and_idw() {
    const fs::path out = g_tmp / "cli_density.geojson";
    int code = run_cli("density of-line --input " + fixture("zones.geojson") +
                       " --lines " + fixture("roads.geojson") +
                       " --cell-size 5 --column rd --output " + out.string());
    check(code == 0, "density of-line exits 0");
    FeatureLayer zones = read_geojson(fixture("zones.geojson"));
    const FeatureLayer roads = read_geojson(fixture("roads.geojson"));
    append_measurement(zones,
                       density_of_line(zones, roads, 5.0, LineDensityMode::cell_count),
                       "rd");
    check(slurp(out) == to_geojson_string(zones), "density of-line output matches");

    const fs::path idw_out = g_tmp / "cli_idw.geojson";
    code = run_cli("idw --input " + fixture("zones.geojson") + " --known " +
                   fixture("samples.geojson") +
                   " --value-column elev --power 2 --neighbors 8 --column elev" +
                   " --output " + idw_out.string());
    check(code == 0, "idw exits 0");
    FeatureLayer zones2 = read_geojson(fixture("zones.geojson"));
    const FeatureLayer samples = read_geojson(fixture("samples.geojson"));
    IdwConfig config;
    config.power = 2.0;
    config.n_neighbors = 8;
    append_measurement(zones2, idw_estimate(zones2, samples, "elev", config), "elev");
    check(slurp(idw_out) == to_geojson_string(zones2), "idw output matches");
}

void test_idw_cv() {
    const std::string got = run_cli_stdout("idw-cv --known " +
                                           fixture("samples.geojson") +
                                           " --value-column elev --powers 1,2,3");
    const FeatureLayer samples = read_geojson(fixture("samples.geojson"));
    const IdwCvResult want = idw_cv(samples, "elev", {1.0, 2.0, 3.0});
    const auto doc = nlohmann::json::parse(got);
    check(doc["best_power"].get<double>() == want.best_power,
          "idw-cv best power matches the library");
    bool table_ok = doc["rmse_per_power"].size() == want.rmse_per_power.size();
    for (std::size_t i = 0; table_ok && i < want.rmse_per_power.size(); ++i) {
        table_ok = doc["rmse_per_power"][i]["rmse"].get<double>() ==
                   want.rmse_per_power[i].second;
    }
    check(table_ok, "idw-cv RMSE table matches exactly");
}

void test_ahp_text() {
    const std::string got = run_cli_stdout("ahp --matrix [[1,5],[0.2,1]]");
    check(got == "weights 0.833333, 0.166667\nlambda_max 2.000000\nCR 0\n",
          "ahp prints the documented 2x2 weights and CR");
}

void test_random_ahp() {
    const std::string a = run_cli_stdout("random-ahp --n 4 --seed 7");
    const std::string b = run_cli_stdout("random-ahp --n 4 --seed 7");
    check(!a.empty() && a == b, "random-ahp is bit-identical per seed");
    const auto doc = nlohmann::json::parse(a);
    const RandomAhpResult want = random_ahp(4, 7);
    check(doc["weights"].get<std::vector<double>>() == want.priorities.weights,
          "random-ahp weights equal the library call");
    check(doc["consistency_ratio"].get<double>() < 0.1, "random-ahp CR below 0.1");
}

void test_rescale_reclassify_weighted_sum() {
    // Build a small chain with the CLI, mirror it with library calls.
    const fs::path step1 = g_tmp / "step1.geojson";
    const fs::path step2 = g_tmp / "step2.geojson";
    const fs::path step3 = g_tmp / "step3.geojson";
    int code = run_cli("distance to-point --input " + fixture("zones.geojson") +
                       " --targets " + fixture("schools.geojson") +
                       " --column d --output " + step1.string());
    code |= run_cli("rescale-linear --input " + step1.string() +
                    " --source-column d --scale-min 1 --scale-max 9 "
                    "--order inverse --column s1 --output " +
                    step2.string());
    code |= run_cli(
        "reclassify --input " + step2.string() +
        " --source-column d --table "
        "'{\"kind\":\"range\",\"entries\":[[0,60,9],[60,120,5],[120,10000,1]]}'"
        " --column s2 --output " +
        step3.string());
    check(code == 0, "rescale/reclassify chain exits 0");

    const fs::path final_out = g_tmp / "final.geojson";
    code = run_cli("weighted-sum --input " + step3.string() +
                   " --columns s1,s2 --weights 0.5,0.5 --column suit --output " +
                   final_out.string());
    check(code == 0, "weighted-sum exits 0");

    FeatureLayer zones = read_geojson(fixture("zones.geojson"));
    const FeatureLayer schools = read_geojson(fixture("schools.geojson"));
    const MeasurementResult d = distance_to_point(zones, schools, Metric::euclidean);
    append_measurement(zones, d, "d");
    MeasurementResult s1;
    s1.values = linear_rescale(d.values, {1, 9, LinearScale::Order::inverse}).values;
    s1.nodata.assign(d.values.size(), false);
    append_measurement(zones, s1, "s1");
    const auto table = ReclassifyTable::ranges(
        {{0, 60, 9}, {60, 120, 5}, {120, 10000, 1}});
    MeasurementResult s2;
    s2.values = reclassify(d.values, table);
    s2.nodata.assign(d.values.size(), false);
    append_measurement(zones, s2, "s2");
    MeasurementResult suit;
    suit.values = weighted_sum({s1.values, s2.values}, {0.5, 0.5});
    suit.nodata.assign(s1.values.size(), false);
    append_measurement(zones, suit, "suit");
    check(slurp(final_out) == to_geojson_string(zones),
          "weighted-sum chain equals the composed library calls");
}

void test_jenks() {
    const std::string got = run_cli_stdout("jenks --input " +
                                           fixture("samples.geojson") +
                                           " --column elev --classes 3");
    const FeatureLayer samples = read_geojson(fixture("samples.geojson"));
    std::vector<double> values;
    for (const Value& v : samples.attributes().column("elev")) {
        values.push_back(*as_number(v));
    }
    const ClassBreaks want = natural_breaks(values, 3);
    const auto doc = nlohmann::json::parse(got);
    check(doc["gvf"].get<double>() == want.gvf &&
              doc["breaks"].get<std::vector<double>>() == want.breaks,
          "jenks output equals the library result");
}

void test_run_threads_identical() {
    const fs::path out1 = g_tmp / "run_seq.geojson";
    const fs::path out4 = g_tmp / "run_par.geojson";
    const fs::path rep1 = g_tmp / "rep_seq.json";
    int code = run_cli("--threads 1 run --model " + fixture("model3.json") +
                       " --output " + out1.string() + " --report " + rep1.string());
    code |= run_cli("--threads 4 run --model " + fixture("model3.json") +
                    " --output " + out4.string());
    check(code == 0, "run exits 0 in sequential and parallel modes");
    check(slurp(out1) == slurp(out4),
          "--threads 1 output is byte-identical to the parallel run");

    const SuitabilityModel model = parse_model_file(fixture("model3.json"));
    const RunResult want = run_model(model, 1);
    check(slurp(out1) == to_geojson_string(want.layer),
          "run output equals the library run_model result");
    const auto rep = nlohmann::json::parse(slurp(rep1));
    check(rep["io"]["writes"].get<int>() == 1 &&
              rep["io"]["reads"].size() == 3,
          "run report counts one write and one read per dataset");
}

void test_bench_floor() {
    const std::string table =
        run_cli_stdout("bench --suite nn --sizes 10 --seed 3");
    check(table.find("\"assertion_applies\": false") != std::string::npos,
          "bench below the floor emits a table without asserting");
    const std::string again =
        run_cli_stdout("bench --suite nn --sizes 10 --seed 3");
    const auto a = nlohmann::json::parse(table);
    const auto b = nlohmann::json::parse(again);
    check(a["rows"][0]["data_checksum"] == b["rows"][0]["data_checksum"],
          "bench reuses identical synthetic data for a fixed seed");
}

void test_exit_codes() {
    check(run_cli("no-such-command") == 1, "unknown subcommand exits 1");
    check(run_cli("distance to-point --input nope.geojson --targets nope.geojson "
                  "--column c --output " +
                  (g_tmp / "x.geojson").string()) == 2,
          "missing dataset exits 2");
    check(run_cli("jenks --input " + fixture("samples.geojson") +
                  " --column elev --classes 99") == 2,
          "infeasible class count exits 2");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: cli_tests <suitkit-binary> <fixtures-dir>\n";
        return 2;
    }
    g_cli = argv[1];
    g_fixtures = argv[2];
    g_tmp = fs::temp_directory_path() /
            ("suitkit_cli_" + std::to_string(::getpid()));
    fs::create_directories(g_tmp);

    test_distance_to_point();
    test_density_and_idw();
    test_idw_cv();
    test_ahp_text();
    test_random_ahp();
    test_rescale_reclassify_weighted_sum();
    test_jenks();
    test_run_threads_identical();
    test_bench_floor();
    test_exit_codes();

    fs::remove_all(g_tmp);
    if (g_failures > 0) {
        std::printf("%d CLI check(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all CLI checks passed\n");
    return 0;
}
