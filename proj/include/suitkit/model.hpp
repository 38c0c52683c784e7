#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "suitkit/aggregate.hpp"
#include "suitkit/layer.hpp"
#include "suitkit/measures.hpp"
#include "suitkit/rescale.hpp"

namespace suitkit {

enum class MeasureOp {
    distance_to_point,
    distance_to_line,
    density_of_point,
    density_of_line,
    idw,
};

struct MeasureSpec {
    MeasureOp op = MeasureOp::distance_to_point;
    std::string dataset;  // resolved path of targets / lines / known points
    Metric metric = Metric::euclidean;
    double cell_size = 0.0;
    LineDensityMode mode = LineDensityMode::cell_count;
    std::optional<std::string> value_column;
    IdwConfig idw;
    RepPointConfig rep_point;
};

struct TransformSpec {
    enum class Op { linear, reclassify, natural_breaks };
    Op op = Op::linear;
    LinearScale scale;
    std::optional<ReclassifyTable> table;
    int k = 0;                          // natural-breaks class count
    std::vector<double> class_scores;   // optional, one per class
};

struct CriterionSpec {
    std::string name;
    MeasureSpec measure;
    TransformSpec transform;
};

struct AggregationSpec {
    enum class Kind { explicit_weights, ahp_matrix, random_seed };
    Kind kind = Kind::explicit_weights;
    std::vector<double> weights;
    bool normalize = false;
    std::optional<ComparisonMatrix> matrix;
    std::uint64_t seed = 0;
};

struct OutputSpec {
    std::string column = "suitability";
    std::string path;  // optional sink; empty means in-memory only
};

/// Declarative three-stage suitability model: measure each criterion against
/// the unit layer, transform onto the suitability scale, aggregate by weight.
struct SuitabilityModel {
    int version = 1;
    std::string units_path;
    std::vector<CriterionSpec> criteria;
    AggregationSpec aggregation;
    OutputSpec output;
};

/// Thrown by parse_model with every validation problem collected.
class ModelParseError : public std::runtime_error {
public:
    explicit ModelParseError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// Parses and fully validates a model document (JSON). Dataset paths are
/// resolved against base_dir; all problems are reported together.
SuitabilityModel parse_model(const std::string& text,
                             const std::filesystem::path& base_dir = ".");
SuitabilityModel parse_model_file(const std::string& path);

struct StageReport {
    std::string criterion;
    double measure_ms = 0.0;
    double transform_ms = 0.0;
    std::size_t nodata = 0;
    std::vector<std::string> warnings;
};

struct RunReport {
    std::size_t rows = 0;
    std::vector<double> weights;  // resolved aggregation weights
    std::string aggregation;      // "explicit" | "ahp" | "random_ahp"
    double lambda_max = 0.0;      // set for AHP-derived weights
    double consistency_ratio = 0.0;
    std::vector<StageReport> stages;
    std::size_t output_nodata = 0;
    std::map<std::string, std::size_t> dataset_reads;
    std::size_t output_writes = 0;
    double total_ms = 0.0;

    std::string to_json() const;
    void record_write(const std::string& path);
};

struct RunResult {
    FeatureLayer layer;
    RunReport report;
};

/// Runs the whole model in memory: the unit layer and every dataset are read
/// exactly once, criteria execute independently (in parallel when threads
/// allows), and the weighted sum lands in the output column. threads <= 0
/// uses the hardware default; 1 forces sequential execution.
RunResult run_model(const SuitabilityModel& model, int threads = 0);

}  // namespace suitkit
