// suitkit command line: one subcommand per library operation, `run` for whole
// suitability models, and `bench` for indexed-vs-brute-force timings.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "suitkit/aggregate.hpp"
#include "suitkit/bench.hpp"
#include "suitkit/io.hpp"
#include "suitkit/kdtree.hpp"
#include "suitkit/measures.hpp"
#include "suitkit/model.hpp"
#include "suitkit/rescale.hpp"

namespace {

using namespace suitkit;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

bool g_verbose = false;

void note(const std::string& message) {
    if (g_verbose) std::cerr << message << "\n";
}

// Inline JSON or @path indirection for matrix/table arguments.
json parse_json_argument(const std::string& text) {
    if (!text.empty() && text[0] == '@') {
        std::ifstream in(text.substr(1), std::ios::binary);
        if (!in) throw std::runtime_error("cannot open '" + text.substr(1) + "'");
        return json::parse(in);
    }
    return json::parse(text);
}

Metric metric_from(const std::string& name) {
    return name == "manhattan" ? Metric::manhattan : Metric::euclidean;
}

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(output_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + output_path + "'");
        out << text << "\n";
    }
}

struct LayerOpArgs {
    std::string input;
    std::string column;
    std::string output;
    bool overwrite = false;
    std::string rep_x, rep_y;

    RepPointConfig rep_config() const {
        RepPointConfig rep;
        if (!rep_x.empty()) rep.x_column = rep_x;
        if (!rep_y.empty()) rep.y_column = rep_y;
        return rep;
    }
};

void add_layer_op_flags(CLI::App* cmd, LayerOpArgs& args, bool with_rep = true) {
    cmd->add_option("--input", args.input, "source layer (GeoJSON)")->required();
    cmd->add_option("--column", args.column, "name of the result column")->required();
    cmd->add_option("--output", args.output, "output layer path (GeoJSON)")->required();
    cmd->add_flag("--overwrite-column", args.overwrite,
                  "replace the column if it already exists");
    if (with_rep) {
        cmd->add_option("--rep-x-column", args.rep_x,
                        "attribute column holding representative x");
        cmd->add_option("--rep-y-column", args.rep_y,
                        "attribute column holding representative y");
    }
}

void finish_layer_op(const LayerOpArgs& args, FeatureLayer layer,
                     const MeasurementResult& result) {
    for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
    append_measurement(layer, result, args.column, args.overwrite);
    write_geojson(layer, args.output);
    note("wrote " + args.output);
}

std::string format_weights(const std::vector<double>& weights) {
    std::string out;
    char buf[32];
    for (std::size_t i = 0; i < weights.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6f", weights[i]);
        if (i) out += ", ";
        out += buf;
    }
    return out;
}

ReclassifyTable table_from_json(const json& t) {
    std::optional<double> default_score;
    if (t.contains("default")) default_score = t["default"].get<double>();
    const std::string kind = t.value("kind", "range");
    if (kind == "categories") {
        std::map<std::string, double> entries;
        for (const auto& [key, val] : t.at("entries").items()) {
            entries[key] = val.get<double>();
        }
        return ReclassifyTable::categories(std::move(entries), default_score);
    }
    if (kind == "range") {
        std::vector<RangeEntry> entries;
        for (const auto& e : t.at("entries")) {
            entries.push_back(RangeEntry{e.at(0).get<double>(), e.at(1).get<double>(),
                                         e.at(2).get<double>()});
        }
        return ReclassifyTable::ranges(std::move(entries), default_score);
    }
    throw std::runtime_error("unknown reclassify kind '" + kind + "'");
}

std::vector<double> numeric_column(const FeatureLayer& layer, const std::string& name) {
    const auto& col = layer.attributes().column(name);
    std::vector<double> out;
    out.reserve(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) {
        const auto v = as_number(col[i]);
        if (!v) {
            throw std::runtime_error("column '" + name + "' is not numeric at row " +
                                     std::to_string(i));
        }
        out.push_back(*v);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vector land-use suitability analysis toolkit"};
    app.require_subcommand(1);
    app.add_flag("--verbose", g_verbose, "log progress to stderr");
    int threads = 0;
    app.add_option("--threads", threads,
                   "worker threads for model runs (1 forces sequential)");

    // ---- distance ----------------------------------------------------
    auto* distance = app.add_subcommand("distance", "nearest-target distances");
    distance->require_subcommand(1);

    LayerOpArgs dp_args;
    std::string dp_targets, dp_metric = "euclidean";
    auto* dist_point = distance->add_subcommand("to-point", "distance to point targets");
    add_layer_op_flags(dist_point, dp_args);
    dist_point->add_option("--targets", dp_targets, "target point layer")->required();
    dist_point->add_option("--metric", dp_metric)
        ->check(CLI::IsMember({"euclidean", "manhattan"}));

    LayerOpArgs dl_args;
    std::string dl_lines, dl_metric = "euclidean";
    double dl_cell_size = 0.0;
    auto* dist_line = distance->add_subcommand("to-line", "distance to line features");
    add_layer_op_flags(dist_line, dl_args);
    dist_line->add_option("--lines", dl_lines, "line layer")->required();
    dist_line->add_option("--cell-size", dl_cell_size, "rasterization cell size")
        ->required();
    dist_line->add_option("--metric", dl_metric)
        ->check(CLI::IsMember({"euclidean", "manhattan"}));

    // ---- density -----------------------------------------------------
    auto* density = app.add_subcommand("density", "target density per zone");
    density->require_subcommand(1);

    LayerOpArgs denp_args;
    std::string denp_targets, denp_value_column;
    auto* dens_point = density->add_subcommand("of-point", "point density in zones");
    add_layer_op_flags(dens_point, denp_args, /*with_rep=*/false);
    dens_point->add_option("--targets", denp_targets, "target point layer")->required();
    dens_point->add_option("--value-column", denp_value_column,
                           "optional per-target value column");

    LayerOpArgs denl_args;
    std::string denl_lines, denl_mode = "cell-count";
    double denl_cell_size = 0.0;
    auto* dens_line = density->add_subcommand("of-line", "line density in zones");
    add_layer_op_flags(dens_line, denl_args, /*with_rep=*/false);
    dens_line->add_option("--lines", denl_lines, "line layer")->required();
    dens_line->add_option("--cell-size", denl_cell_size, "rasterization cell size")
        ->required();
    dens_line->add_option("--mode", denl_mode)
        ->check(CLI::IsMember({"cell-count", "length-approx"}));

    // ---- idw -----------------------------------------------------------
    LayerOpArgs idw_args;
    std::string idw_known, idw_value_column, idw_neighbors = "12";
    double idw_power = 2.0;
    double idw_radius = 0.0;
    auto* idw_cmd = app.add_subcommand("idw", "inverse distance weighted estimate");
    add_layer_op_flags(idw_cmd, idw_args);
    idw_cmd->add_option("--known", idw_known, "known point layer")->required();
    idw_cmd->add_option("--value-column", idw_value_column)->required();
    idw_cmd->add_option("--power", idw_power, "power parameter u");
    idw_cmd->add_option("--neighbors", idw_neighbors,
                        "neighbor count or 'all' (default 12)");
    idw_cmd->add_option("--radius", idw_radius, "optional search radius");

    // ---- idw-cv ---------------------------------------------------------
    std::string cv_known, cv_value_column, cv_output;
    std::vector<double> cv_powers;
    std::string cv_neighbors = "12";
    auto* cv_cmd =
        app.add_subcommand("idw-cv", "cross-validate the IDW power parameter");
    cv_cmd->add_option("--known", cv_known, "known point layer")->required();
    cv_cmd->add_option("--value-column", cv_value_column)->required();
    cv_cmd->add_option("--powers", cv_powers, "candidate powers")->delimiter(',');
    cv_cmd->add_option("--neighbors", cv_neighbors, "neighbor count or 'all'");
    cv_cmd->add_option("--output", cv_output, "write the RMSE table here");

    // ---- reclassify ------------------------------------------------------
    LayerOpArgs rc_args;
    std::string rc_source_column, rc_table;
    auto* rc_cmd = app.add_subcommand("reclassify", "map values through a table");
    add_layer_op_flags(rc_cmd, rc_args, /*with_rep=*/false);
    rc_cmd->add_option("--source-column", rc_source_column, "column to reclassify")
        ->required();
    rc_cmd->add_option("--table", rc_table, "table JSON (inline or @file)")->required();

    // ---- jenks -----------------------------------------------------------
    std::string jk_input, jk_column, jk_assign_column, jk_layer_output, jk_output;
    int jk_classes = 0;
    auto* jk_cmd = app.add_subcommand("jenks", "natural-breaks classification");
    jk_cmd->add_option("--input", jk_input, "layer (GeoJSON)")->required();
    jk_cmd->add_option("--column", jk_column, "numeric column")->required();
    jk_cmd->add_option("--classes", jk_classes, "class count k")->required();
    jk_cmd->add_option("--assign-column", jk_assign_column,
                       "also write 1..k class assignments to this column");
    jk_cmd->add_option("--output-layer", jk_layer_output,
                       "layer output path (with --assign-column)");
    jk_cmd->add_option("--output", jk_output, "write the breaks report here");

    // ---- rescale-linear ----------------------------------------------------
    LayerOpArgs rl_args;
    std::string rl_source_column, rl_order = "regular";
    double rl_min = 1.0, rl_max = 9.0;
    auto* rl_cmd = app.add_subcommand("rescale-linear", "min-max rescale a column");
    add_layer_op_flags(rl_cmd, rl_args, /*with_rep=*/false);
    rl_cmd->add_option("--source-column", rl_source_column)->required();
    rl_cmd->add_option("--scale-min", rl_min, "scale lower bound a");
    rl_cmd->add_option("--scale-max", rl_max, "scale upper bound b");
    rl_cmd->add_option("--order", rl_order)
        ->check(CLI::IsMember({"regular", "inverse"}));

    // ---- ahp ----------------------------------------------------------------
    std::string ahp_matrix;
    auto* ahp_cmd =
        app.add_subcommand("ahp", "priority weights from a comparison matrix");
    ahp_cmd->add_option("--matrix", ahp_matrix, "row-major JSON (inline or @file)")
        ->required();

    // ---- random-ahp ----------------------------------------------------------
    std::size_t rahp_n = 0;
    std::uint64_t rahp_seed = 0;
    std::string rahp_output;
    auto* rahp_cmd = app.add_subcommand("random-ahp", "random consistent AHP weights");
    rahp_cmd->add_option("--n", rahp_n, "criterion count")->required();
    rahp_cmd->add_option("--seed", rahp_seed, "RNG seed");
    rahp_cmd->add_option("--output", rahp_output, "write the result here");

    // ---- weighted-sum ---------------------------------------------------------
    LayerOpArgs ws_args;
    std::vector<std::string> ws_columns;
    std::vector<double> ws_weights;
    bool ws_normalize = false;
    auto* ws_cmd = app.add_subcommand("weighted-sum", "weighted sum of score columns");
    add_layer_op_flags(ws_cmd, ws_args, /*with_rep=*/false);
    ws_cmd->add_option("--columns", ws_columns, "input columns")
        ->delimiter(',')
        ->required();
    ws_cmd->add_option("--weights", ws_weights, "one weight per column")
        ->delimiter(',')
        ->required();
    ws_cmd->add_flag("--normalize", ws_normalize, "rescale weights to unit sum");

    // ---- run ---------------------------------------------------------------
    std::string run_model_path, run_output, run_report;
    auto* run_cmd = app.add_subcommand("run", "execute a suitability model");
    run_cmd->add_option("--model", run_model_path, "model document (JSON)")->required();
    run_cmd->add_option("--output", run_output,
                        "output layer path (overrides the model's sink)");
    run_cmd->add_option("--report", run_report, "write the run report here");

    // ---- bench ----------------------------------------------------------------
    std::string bench_suite = "nn", bench_output;
    std::vector<std::size_t> bench_sizes;
    std::uint64_t bench_seed = 0;
    auto* bench_cmd =
        app.add_subcommand("bench", "indexed vs brute-force timing table");
    bench_cmd->add_option("--suite", bench_suite)
        ->check(CLI::IsMember({"nn", "idw", "density"}));
    bench_cmd->add_option("--sizes", bench_sizes, "ascending problem sizes")
        ->delimiter(',');
    bench_cmd->add_option("--seed", bench_seed, "synthetic data seed");
    bench_cmd->add_option("--output", bench_output, "write the timing table here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (dist_point->parsed()) {
            FeatureLayer layer = read_geojson(dp_args.input);
            const FeatureLayer targets = read_geojson(dp_targets);
            const MeasurementResult r = distance_to_point(
                layer, targets, metric_from(dp_metric), dp_args.rep_config());
            finish_layer_op(dp_args, std::move(layer), r);
        } else if (dist_line->parsed()) {
            FeatureLayer layer = read_geojson(dl_args.input);
            const FeatureLayer lines = read_geojson(dl_lines);
            const MeasurementResult r =
                distance_to_line(layer, lines, dl_cell_size, metric_from(dl_metric),
                                 dl_args.rep_config());
            finish_layer_op(dl_args, std::move(layer), r);
        } else if (dens_point->parsed()) {
            FeatureLayer layer = read_geojson(denp_args.input);
            const FeatureLayer targets = read_geojson(denp_targets);
            std::optional<std::string> value_column;
            if (!denp_value_column.empty()) value_column = denp_value_column;
            const MeasurementResult r = density_of_point(layer, targets, value_column);
            finish_layer_op(denp_args, std::move(layer), r);
        } else if (dens_line->parsed()) {
            FeatureLayer layer = read_geojson(denl_args.input);
            const FeatureLayer lines = read_geojson(denl_lines);
            const MeasurementResult r = density_of_line(
                layer, lines, denl_cell_size,
                denl_mode == "length-approx" ? LineDensityMode::length_approx
                                             : LineDensityMode::cell_count);
            finish_layer_op(denl_args, std::move(layer), r);
        } else if (idw_cmd->parsed()) {
            FeatureLayer layer = read_geojson(idw_args.input);
            const FeatureLayer known = read_geojson(idw_known);
            IdwConfig config;
            config.power = idw_power;
            if (idw_neighbors == "all") {
                config.n_neighbors.reset();
            } else {
                config.n_neighbors = std::stoul(idw_neighbors);
            }
            if (idw_radius > 0.0) config.search_radius = idw_radius;
            const MeasurementResult r = idw_estimate(layer, known, idw_value_column,
                                                     config, idw_args.rep_config());
            finish_layer_op(idw_args, std::move(layer), r);
        } else if (cv_cmd->parsed()) {
            const FeatureLayer known = read_geojson(cv_known);
            IdwConfig config;
            if (cv_neighbors == "all") {
                config.n_neighbors.reset();
            } else {
                config.n_neighbors = std::stoul(cv_neighbors);
            }
            const IdwCvResult r =
                cv_powers.empty()
                    ? idw_cv(known, cv_value_column, kDefaultIdwPowers, config)
                    : idw_cv(known, cv_value_column, cv_powers, config);
            json doc;
            doc["best_power"] = r.best_power;
            doc["skipped"] = r.skipped;
            doc["rmse_per_power"] = json::array();
            for (const auto& [u, rmse] : r.rmse_per_power) {
                doc["rmse_per_power"].push_back({{"power", u}, {"rmse", rmse}});
            }
            emit(doc.dump(2), cv_output);
        } else if (rc_cmd->parsed()) {
            FeatureLayer layer = read_geojson(rc_args.input);
            const ReclassifyTable table = table_from_json(parse_json_argument(rc_table));
            const auto& source = layer.attributes().column(rc_source_column);
            MeasurementResult r;
            r.values.reserve(source.size());
            r.nodata.assign(source.size(), false);
            for (std::size_t i = 0; i < source.size(); ++i) {
                if (is_null(source[i])) {
                    r.values.push_back(0.0);
                    r.nodata[i] = true;
                } else {
                    r.values.push_back(table.map_value(source[i]));
                }
            }
            finish_layer_op(rc_args, std::move(layer), r);
        } else if (jk_cmd->parsed()) {
            FeatureLayer layer = read_geojson(jk_input);
            const ClassBreaks breaks =
                natural_breaks(numeric_column(layer, jk_column), jk_classes);
            json doc;
            doc["k"] = breaks.k;
            doc["breaks"] = breaks.breaks;
            doc["gvf"] = breaks.gvf;
            doc["sdam"] = breaks.sdam;
            doc["sdcm"] = breaks.sdcm;
            emit(doc.dump(2), jk_output);
            if (!jk_assign_column.empty()) {
                if (jk_layer_output.empty()) {
                    throw std::runtime_error("--assign-column needs --output-layer");
                }
                std::vector<double> classes;
                classes.reserve(breaks.assignments.size());
                for (int c : breaks.assignments) classes.push_back(c);
                layer.attributes().add_numeric_column(jk_assign_column, classes, {});
                write_geojson(layer, jk_layer_output);
            }
        } else if (rl_cmd->parsed()) {
            FeatureLayer layer = read_geojson(rl_args.input);
            const LinearScale scale{rl_min, rl_max,
                                    rl_order == "inverse"
                                        ? LinearScale::Order::inverse
                                        : LinearScale::Order::regular};
            const LinearResult lr =
                linear_rescale(numeric_column(layer, rl_source_column), scale);
            MeasurementResult r;
            r.values = lr.values;
            r.nodata.assign(lr.values.size(), false);
            if (lr.constant_input) {
                r.warnings.push_back("constant input mapped to the scale midpoint");
            }
            finish_layer_op(rl_args, std::move(layer), r);
        } else if (ahp_cmd->parsed()) {
            const json m = parse_json_argument(ahp_matrix);
            std::vector<std::vector<double>> rows;
            for (const auto& row : m) rows.push_back(row.get<std::vector<double>>());
            const PriorityVector pv = ahp_weights(ComparisonMatrix(std::move(rows)));
            char buf[64];
            std::cout << "weights " << format_weights(pv.weights) << "\n";
            std::snprintf(buf, sizeof(buf), "lambda_max %.6f", pv.lambda_max);
            std::cout << buf << "\n";
            std::snprintf(buf, sizeof(buf), "CR %g", pv.consistency_ratio);
            std::cout << buf << "\n";
        } else if (rahp_cmd->parsed()) {
            const RandomAhpResult r = random_ahp(rahp_n, rahp_seed);
            json doc;
            doc["n"] = rahp_n;
            doc["seed"] = rahp_seed;
            doc["matrix"] = json::array();
            for (std::size_t i = 0; i < r.matrix.size(); ++i) {
                json row = json::array();
                for (std::size_t j = 0; j < r.matrix.size(); ++j) {
                    row.push_back(r.matrix.at(i, j));
                }
                doc["matrix"].push_back(std::move(row));
            }
            doc["weights"] = r.priorities.weights;
            doc["lambda_max"] = r.priorities.lambda_max;
            doc["consistency_ratio"] = r.priorities.consistency_ratio;
            emit(doc.dump(2), rahp_output);
        } else if (ws_cmd->parsed()) {
            FeatureLayer layer = read_geojson(ws_args.input);
            std::vector<std::vector<double>> columns;
            for (const std::string& name : ws_columns) {
                columns.push_back(numeric_column(layer, name));
            }
            MeasurementResult r;
            r.values = weighted_sum(columns, ws_weights, ws_normalize);
            r.nodata.assign(r.values.size(), false);
            finish_layer_op(ws_args, std::move(layer), r);
        } else if (run_cmd->parsed()) {
            const SuitabilityModel model = parse_model_file(run_model_path);
            RunResult result = run_model(model, threads);
            const std::string sink =
                !run_output.empty() ? run_output : model.output.path;
            if (sink.empty()) {
                throw std::runtime_error(
                    "no output sink: set output.path in the model or pass --output");
            }
            write_geojson(result.layer, sink);
            result.report.record_write(sink);
            note("wrote " + sink);
            if (!run_report.empty()) {
                emit(result.report.to_json(), run_report);
                note("wrote " + run_report);
            }
        } else if (bench_cmd->parsed()) {
            if (bench_sizes.empty()) bench_sizes = {1000, 10000, 100000};
            const BenchSuite suite = bench_suite_from_name(bench_suite);
            const auto rows = run_bench(suite, bench_sizes, bench_seed);
            emit(bench_table_json(suite, rows, bench_seed), bench_output);
            if (!bench_assertion_holds(rows)) {
                std::cerr << "bench assertion failed: indexed path not faster than "
                             "brute force at n="
                          << rows.back().n << "\n";
                return kExitData;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}
