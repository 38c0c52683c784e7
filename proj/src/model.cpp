#include "suitkit/model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "suitkit/io.hpp"

namespace suitkit {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string join_problems(const std::vector<std::string>& problems) {
    std::ostringstream out;
    out << "model validation failed:";
    for (const auto& p : problems) out << "\n  - " << p;
    return out.str();
}

}  // namespace

ModelParseError::ModelParseError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

namespace {

class ModelParser {
public:
    ModelParser(const std::string& text, const std::filesystem::path& base_dir)
        : base_dir_(base_dir) {
        try {
            doc_ = json::parse(text);
        } catch (const json::parse_error& e) {
            problems_.emplace_back(std::string("malformed JSON: ") + e.what());
        }
    }

    SuitabilityModel parse() {
        SuitabilityModel model;
        if (!problems_.empty()) throw ModelParseError(std::move(problems_));
        if (!doc_.is_object()) {
            fail("document must be a JSON object");
            throw ModelParseError(std::move(problems_));
        }
        if (!doc_.contains("version") || !doc_["version"].is_number_integer() ||
            doc_["version"].get<int>() != 1) {
            fail("missing or unsupported version (expected 1)");
        }
        model.units_path = resolve_dataset(doc_, "units", "units");
        parse_criteria(model);
        parse_aggregation(model);
        parse_output(model);
        if (!problems_.empty()) throw ModelParseError(std::move(problems_));
        return model;
    }

private:
    void fail(const std::string& message) { problems_.push_back(message); }

    std::string resolve_dataset(const json& obj, const std::string& key,
                                const std::string& where) {
        if (!obj.contains(key) || !obj[key].is_string()) {
            fail(where + ": missing dataset reference '" + key + "'");
            return {};
        }
        std::filesystem::path p(obj[key].get<std::string>());
        if (p.is_relative()) p = base_dir_ / p;
        if (!std::filesystem::exists(p)) {
            fail(where + ": dataset not found: " + p.string());
        }
        return p.string();
    }

    void parse_criteria(SuitabilityModel& model) {
        if (!doc_.contains("criteria") || !doc_["criteria"].is_array() ||
            doc_["criteria"].empty()) {
            fail("model needs at least one criterion");
            return;
        }
        for (const auto& c : doc_["criteria"]) {
            CriterionSpec spec;
            if (!c.is_object() || !c.contains("name") || !c["name"].is_string()) {
                fail("criterion missing a name");
                continue;
            }
            spec.name = c["name"].get<std::string>();
            const std::string where = "criterion '" + spec.name + "'";
            for (const auto& existing : model.criteria) {
                if (existing.name == spec.name) {
                    fail("duplicate criterion name '" + spec.name + "'");
                }
            }
            if (!c.contains("measure") || !c["measure"].is_object()) {
                fail(where + ": missing measure");
                continue;
            }
            if (!c.contains("transform") || !c["transform"].is_object()) {
                fail(where + ": missing transform");
                continue;
            }
            parse_measure(c["measure"], where, spec.measure);
            parse_transform(c["transform"], where, spec.transform);
            model.criteria.push_back(std::move(spec));
        }
    }

    Metric parse_metric(const json& m, const std::string& where) {
        const std::string name = m.value("metric", "euclidean");
        if (name == "euclidean") return Metric::euclidean;
        if (name == "manhattan") return Metric::manhattan;
        fail(where + ": unknown metric '" + name + "'");
        return Metric::euclidean;
    }

    void parse_rep_point(const json& m, const std::string& where, RepPointConfig& rep) {
        if (!m.contains("rep_point")) return;
        const json& r = m["rep_point"];
        if (!r.is_object() || !r.contains("x_column") || !r.contains("y_column")) {
            fail(where + ": rep_point needs x_column and y_column");
            return;
        }
        rep.x_column = r["x_column"].get<std::string>();
        rep.y_column = r["y_column"].get<std::string>();
    }

    double parse_cell_size(const json& m, const std::string& where) {
        if (!m.contains("cell_size") || !m["cell_size"].is_number()) {
            fail(where + ": missing cell_size");
            return 0.0;
        }
        const double c = m["cell_size"].get<double>();
        if (!(c > 0.0)) fail(where + ": cell_size must be positive");
        return c;
    }

    void parse_measure(const json& m, const std::string& where, MeasureSpec& spec) {
        const std::string op = m.value("op", "");
        if (op == "distance_to_point") {
            spec.op = MeasureOp::distance_to_point;
            spec.dataset = resolve_dataset(m, "targets", where);
            spec.metric = parse_metric(m, where);
            parse_rep_point(m, where, spec.rep_point);
        } else if (op == "distance_to_line") {
            spec.op = MeasureOp::distance_to_line;
            spec.dataset = resolve_dataset(m, "lines", where);
            spec.metric = parse_metric(m, where);
            spec.cell_size = parse_cell_size(m, where);
            parse_rep_point(m, where, spec.rep_point);
        } else if (op == "density_of_point") {
            spec.op = MeasureOp::density_of_point;
            spec.dataset = resolve_dataset(m, "targets", where);
            if (m.contains("value_column")) {
                spec.value_column = m["value_column"].get<std::string>();
            }
        } else if (op == "density_of_line") {
            spec.op = MeasureOp::density_of_line;
            spec.dataset = resolve_dataset(m, "lines", where);
            spec.cell_size = parse_cell_size(m, where);
            const std::string mode = m.value("mode", "cell-count");
            if (mode == "cell-count") {
                spec.mode = LineDensityMode::cell_count;
            } else if (mode == "length-approx") {
                spec.mode = LineDensityMode::length_approx;
            } else {
                fail(where + ": unknown density mode '" + mode + "'");
            }
        } else if (op == "idw") {
            spec.op = MeasureOp::idw;
            spec.dataset = resolve_dataset(m, "known", where);
            if (!m.contains("value_column") || !m["value_column"].is_string()) {
                fail(where + ": idw needs value_column");
            } else {
                spec.value_column = m["value_column"].get<std::string>();
            }
            spec.idw.power = m.value("power", 2.0);
            if (!(spec.idw.power > 0.0)) fail(where + ": power must be positive");
            if (m.contains("n_neighbors")) {
                const json& nn = m["n_neighbors"];
                if (nn.is_string() && nn.get<std::string>() == "all") {
                    spec.idw.n_neighbors.reset();
                } else if (nn.is_number_integer() && nn.get<int>() > 0) {
                    spec.idw.n_neighbors = static_cast<std::size_t>(nn.get<int>());
                } else {
                    fail(where + ": n_neighbors must be a positive integer or \"all\"");
                }
            }
            if (m.contains("search_radius")) {
                const double r = m["search_radius"].get<double>();
                if (!(r > 0.0)) {
                    fail(where + ": search_radius must be positive");
                } else {
                    spec.idw.search_radius = r;
                }
            }
            parse_rep_point(m, where, spec.rep_point);
        } else if (op.empty()) {
            fail(where + ": measure missing op");
        } else {
            fail(where + ": unknown operation '" + op + "'");
        }
    }

    void parse_transform(const json& t, const std::string& where, TransformSpec& spec) {
        const std::string op = t.value("op", "");
        if (op == "linear") {
            spec.op = TransformSpec::Op::linear;
            if (!t.contains("scale") || !t["scale"].is_array() ||
                t["scale"].size() != 2) {
                fail(where + ": linear transform needs scale [a, b]");
                return;
            }
            spec.scale.lower = t["scale"][0].get<double>();
            spec.scale.upper = t["scale"][1].get<double>();
            if (!(spec.scale.lower < spec.scale.upper)) {
                fail(where + ": scale requires a < b");
            }
            const std::string order = t.value("order", "regular");
            if (order == "regular") {
                spec.scale.order = LinearScale::Order::regular;
            } else if (order == "inverse") {
                spec.scale.order = LinearScale::Order::inverse;
            } else {
                fail(where + ": unknown order '" + order + "'");
            }
        } else if (op == "reclassify") {
            spec.op = TransformSpec::Op::reclassify;
            try {
                spec.table = parse_reclassify_table(t);
            } catch (const std::exception& e) {
                fail(where + ": " + e.what());
            }
        } else if (op == "natural_breaks") {
            spec.op = TransformSpec::Op::natural_breaks;
            spec.k = t.value("k", 0);
            if (spec.k < 2) fail(where + ": natural_breaks needs k >= 2");
            if (t.contains("scores")) {
                if (!t["scores"].is_array() ||
                    t["scores"].size() != static_cast<std::size_t>(spec.k)) {
                    fail(where + ": scores must list one value per class");
                } else {
                    for (const auto& s : t["scores"]) {
                        spec.class_scores.push_back(s.get<double>());
                    }
                }
            }
        } else if (op.empty()) {
            fail(where + ": transform missing op");
        } else {
            fail(where + ": unknown operation '" + op + "'");
        }
    }

    ReclassifyTable parse_reclassify_table(const json& t) {
        const std::string kind = t.value("kind", "range");
        std::optional<double> default_score;
        if (t.contains("default")) default_score = t["default"].get<double>();
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
                if (!e.is_array() || e.size() != 3) {
                    throw std::invalid_argument(
                        "range entries must be [low, high, score]");
                }
                entries.push_back(RangeEntry{e[0].get<double>(), e[1].get<double>(),
                                             e[2].get<double>()});
            }
            return ReclassifyTable::ranges(std::move(entries), default_score);
        }
        throw std::invalid_argument("unknown reclassify kind '" + kind + "'");
    }

    void parse_aggregation(SuitabilityModel& model) {
        if (!doc_.contains("aggregation") || !doc_["aggregation"].is_object()) {
            fail("missing aggregation");
            return;
        }
        const json& agg = doc_["aggregation"];
        AggregationSpec& spec = model.aggregation;
        if (agg.contains("weights")) {
            spec.kind = AggregationSpec::Kind::explicit_weights;
            for (const auto& w : agg["weights"]) {
                spec.weights.push_back(w.get<double>());
            }
            spec.normalize = agg.value("normalize", false);
            if (spec.weights.size() != model.criteria.size()) {
                fail("aggregation lists " + std::to_string(spec.weights.size()) +
                     " weights for " + std::to_string(model.criteria.size()) +
                     " criteria");
            }
            for (double w : spec.weights) {
                if (!(w >= 0.0)) fail("aggregation weights must be non-negative");
            }
        } else if (agg.contains("ahp")) {
            spec.kind = AggregationSpec::Kind::ahp_matrix;
            try {
                std::vector<std::vector<double>> rows;
                for (const auto& r : agg["ahp"]) {
                    rows.push_back(r.get<std::vector<double>>());
                }
                spec.matrix.emplace(std::move(rows));
                if (spec.matrix->size() != model.criteria.size()) {
                    fail("AHP matrix is " + std::to_string(spec.matrix->size()) +
                         "x" + std::to_string(spec.matrix->size()) + " but the model has " +
                         std::to_string(model.criteria.size()) + " criteria");
                }
            } catch (const ModelParseError&) {
                throw;
            } catch (const std::exception& e) {
                fail(std::string("aggregation: ") + e.what());
            }
        } else if (agg.contains("random_ahp_seed")) {
            spec.kind = AggregationSpec::Kind::random_seed;
            spec.seed = agg["random_ahp_seed"].get<std::uint64_t>();
            if (model.criteria.size() < 2) {
                fail("random AHP needs at least two criteria");
            }
        } else {
            fail("aggregation needs weights, ahp, or random_ahp_seed");
        }
    }

    void parse_output(SuitabilityModel& model) {
        if (!doc_.contains("output") || !doc_["output"].is_object()) {
            fail("missing output");
            return;
        }
        const json& out = doc_["output"];
        if (!out.contains("column") || !out["column"].is_string()) {
            fail("output needs a column name");
            return;
        }
        model.output.column = out["column"].get<std::string>();
        if (out.contains("path")) {
            std::filesystem::path p(out["path"].get<std::string>());
            if (p.is_relative()) p = base_dir_ / p;
            model.output.path = p.string();
        }
    }

    json doc_;
    std::filesystem::path base_dir_;
    std::vector<std::string> problems_;
};

}  // namespace

SuitabilityModel parse_model(const std::string& text,
                             const std::filesystem::path& base_dir) {
    return ModelParser(text, base_dir).parse();
}

SuitabilityModel parse_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open model '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str(), std::filesystem::path(path).parent_path());
}

namespace {

struct CriterionOutcome {
    std::vector<double> scores;   // transformed values, 0 where nodata
    std::vector<bool> nodata;
    StageReport stage;
};

// Measure one criterion against the unit layer, then map the measured values
// onto the suitability scale. Nodata rows are carried through untouched.
CriterionOutcome run_criterion(const CriterionSpec& spec, const FeatureLayer& units,
                               const FeatureLayer& dataset) {
    CriterionOutcome outcome;
    outcome.stage.criterion = spec.name;

    const auto measure_start = Clock::now();
    MeasurementResult measured;
    try {
        switch (spec.measure.op) {
            case MeasureOp::distance_to_point:
                measured = distance_to_point(units, dataset, spec.measure.metric,
                                             spec.measure.rep_point);
                break;
            case MeasureOp::distance_to_line:
                measured = distance_to_line(units, dataset, spec.measure.cell_size,
                                            spec.measure.metric, spec.measure.rep_point);
                break;
            case MeasureOp::density_of_point:
                measured = density_of_point(units, dataset, spec.measure.value_column);
                break;
            case MeasureOp::density_of_line:
                measured = density_of_line(units, dataset, spec.measure.cell_size,
                                           spec.measure.mode);
                break;
            case MeasureOp::idw:
                measured = idw_estimate(units, dataset, *spec.measure.value_column,
                                        spec.measure.idw, spec.measure.rep_point);
                break;
        }
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("measure stage: ") + e.what());
    }
    outcome.stage.measure_ms = ms_since(measure_start);
    outcome.stage.warnings = measured.warnings;

    const auto transform_start = Clock::now();
    outcome.nodata = measured.nodata;
    outcome.scores.assign(units.size(), 0.0);

    std::vector<double> dense;
    std::vector<std::size_t> dense_rows;
    dense.reserve(units.size());
    for (std::size_t i = 0; i < units.size(); ++i) {
        if (!measured.nodata[i]) {
            dense.push_back(measured.values[i]);
            dense_rows.push_back(i);
        }
    }

    std::vector<double> transformed;
    try {
        switch (spec.transform.op) {
            case TransformSpec::Op::linear: {
                LinearResult r = linear_rescale(dense, spec.transform.scale);
                if (r.constant_input) {
                    outcome.stage.warnings.push_back(
                        "constant measurement, every unit mapped to the scale midpoint");
                }
                transformed = std::move(r.values);
                break;
            }
            case TransformSpec::Op::reclassify:
                transformed = reclassify(dense, *spec.transform.table);
                break;
            case TransformSpec::Op::natural_breaks: {
                const ClassBreaks breaks = natural_breaks(dense, spec.transform.k);
                transformed.reserve(dense.size());
                for (int cls : breaks.assignments) {
                    transformed.push_back(
                        spec.transform.class_scores.empty()
                            ? static_cast<double>(cls)
                            : spec.transform
                                  .class_scores[static_cast<std::size_t>(cls) - 1]);
                }
                break;
            }
        }
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("transform stage: ") + e.what());
    }
    for (std::size_t d = 0; d < dense_rows.size(); ++d) {
        outcome.scores[dense_rows[d]] = transformed[d];
    }
    outcome.stage.transform_ms = ms_since(transform_start);
    outcome.stage.nodata = measured.nodata_count();
    return outcome;
}

}  // namespace

std::string RunReport::to_json() const {
    nlohmann::json doc;
    doc["rows"] = rows;
    doc["aggregation"] = aggregation;
    doc["weights"] = weights;
    if (aggregation != "explicit") {
        doc["lambda_max"] = lambda_max;
        doc["consistency_ratio"] = consistency_ratio;
    }
    doc["stages"] = nlohmann::json::array();
    for (const auto& stage : stages) {
        nlohmann::json s;
        s["criterion"] = stage.criterion;
        s["measure_ms"] = stage.measure_ms;
        s["transform_ms"] = stage.transform_ms;
        s["nodata"] = stage.nodata;
        s["warnings"] = stage.warnings;
        doc["stages"].push_back(std::move(s));
    }
    doc["output_nodata"] = output_nodata;
    doc["io"]["reads"] = dataset_reads;
    doc["io"]["writes"] = output_writes;
    doc["total_ms"] = total_ms;
    return doc.dump(2);
}

void RunReport::record_write(const std::string& path) {
    (void)path;
    ++output_writes;
}

RunResult run_model(const SuitabilityModel& model, int threads) {
    const auto total_start = Clock::now();
    RunReport report;

    // Every dataset is read exactly once and shared across criteria.
    std::map<std::string, FeatureLayer> datasets;
    auto load = [&](const std::string& path) -> const FeatureLayer& {
        auto it = datasets.find(path);
        if (it == datasets.end()) {
            it = datasets.emplace(path, read_geojson(path)).first;
            ++report.dataset_reads[path];
        }
        return it->second;
    };

    const FeatureLayer& units = load(model.units_path);
    report.rows = units.size();
    std::vector<const FeatureLayer*> criterion_data;
    criterion_data.reserve(model.criteria.size());
    for (const CriterionSpec& spec : model.criteria) {
        criterion_data.push_back(&load(spec.measure.dataset));
    }

    const std::size_t n_criteria = model.criteria.size();
    std::vector<CriterionOutcome> outcomes(n_criteria);
    int pool = threads > 0 ? threads
                           : static_cast<int>(std::thread::hardware_concurrency());
    if (pool < 1) pool = 1;

    auto run_one = [&](std::size_t c) {
        try {
            outcomes[c] = run_criterion(model.criteria[c], units, *criterion_data[c]);
        } catch (const std::exception& e) {
            throw std::runtime_error("criterion '" + model.criteria[c].name +
                                     "': " + e.what());
        }
    };

    if (pool == 1 || n_criteria == 1) {
        for (std::size_t c = 0; c < n_criteria; ++c) run_one(c);
    } else {
        std::vector<std::future<void>> futures;
        futures.reserve(n_criteria);
        for (std::size_t c = 0; c < n_criteria; ++c) {
            futures.push_back(std::async(std::launch::async, run_one, c));
        }
        for (auto& f : futures) f.get();  // rethrows the first failure
    }

    // Resolve aggregation weights.
    std::vector<double> weights;
    bool normalize = false;
    switch (model.aggregation.kind) {
        case AggregationSpec::Kind::explicit_weights:
            weights = model.aggregation.weights;
            normalize = model.aggregation.normalize;
            report.aggregation = "explicit";
            break;
        case AggregationSpec::Kind::ahp_matrix: {
            const PriorityVector pv = ahp_weights(*model.aggregation.matrix);
            weights = pv.weights;
            report.aggregation = "ahp";
            report.lambda_max = pv.lambda_max;
            report.consistency_ratio = pv.consistency_ratio;
            break;
        }
        case AggregationSpec::Kind::random_seed: {
            const RandomAhpResult r =
                random_ahp(model.criteria.size(), model.aggregation.seed);
            weights = r.priorities.weights;
            report.aggregation = "random_ahp";
            report.lambda_max = r.priorities.lambda_max;
            report.consistency_ratio = r.priorities.consistency_ratio;
            break;
        }
    }

    std::vector<std::vector<double>> columns;
    columns.reserve(n_criteria);
    for (auto& outcome : outcomes) {
        columns.push_back(std::move(outcome.scores));
        report.stages.push_back(std::move(outcome.stage));
    }
    std::vector<double> suitability = weighted_sum(columns, weights, normalize);
    report.weights = std::move(weights);

    std::vector<bool> nodata(units.size(), false);
    for (const auto& outcome : outcomes) {
        for (std::size_t i = 0; i < units.size(); ++i) {
            if (outcome.nodata[i]) nodata[i] = true;
        }
    }
    for (bool flag : nodata) {
        if (flag) ++report.output_nodata;
    }

    FeatureLayer out = units;
    out.attributes().add_numeric_column(model.output.column, suitability, nodata);
    report.total_ms = ms_since(total_start);
    return RunResult{std::move(out), std::move(report)};
}

}  // namespace suitkit
