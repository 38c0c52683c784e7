#pragma once

#include <optional>
#include <string>
#include <vector>

#include "suitkit/kdtree.hpp"
#include "suitkit/layer.hpp"

namespace suitkit {

/// Per-source values produced by a measurement operation.
struct MeasurementResult {
    std::vector<double> values;      // one per source feature
    std::vector<bool> nodata;        // true where no value could be computed
    std::string column_name;         // set by the caller when appending
    std::string units;
    std::vector<std::string> warnings;

    std::size_t nodata_count() const;
};

/// Appends a measurement as a layer column (nodata becomes null).
void append_measurement(FeatureLayer& layer, const MeasurementResult& result,
                        const std::string& column_name, bool overwrite = false);

/// How to reduce each source feature to the single point used in distance
/// and interpolation measurements: the geometric centroid by default, or a
/// pair of numeric attribute columns.
struct RepPointConfig {
    std::optional<std::string> x_column;
    std::optional<std::string> y_column;
};

std::vector<Point2> representative_points(const FeatureLayer& sources,
                                          const RepPointConfig& config = {});

/// Distance from every source's representative point to its nearest target.
MeasurementResult distance_to_point(const FeatureLayer& sources,
                                    const FeatureLayer& targets, Metric metric,
                                    const RepPointConfig& config = {});

/// Distance from every source's representative point to the nearest set cell
/// center of the rasterized line layer.
MeasurementResult distance_to_line(const FeatureLayer& sources,
                                   const FeatureLayer& lines, double cell_size,
                                   Metric metric, const RepPointConfig& config = {});

/// Count (or value sum) of targets inside each zone, divided by zone area.
MeasurementResult density_of_point(const FeatureLayer& zones,
                                   const FeatureLayer& targets,
                                   const std::optional<std::string>& value_column = {});

enum class LineDensityMode { cell_count, length_approx };

/// Rasterized line cells inside each zone divided by zone area; the
/// length_approx mode scales counts by the cell size.
MeasurementResult density_of_line(const FeatureLayer& zones, const FeatureLayer& lines,
                                  double cell_size,
                                  LineDensityMode mode = LineDensityMode::cell_count);

struct IdwConfig {
    double power = 2.0;
    /// Neighbors used per estimate; nullopt means all known points.
    std::optional<std::size_t> n_neighbors = kDefaultNeighbors;
    std::optional<double> search_radius;

    static constexpr std::size_t kDefaultNeighbors = 12;
};

/// Shepard inverse-distance estimate at each zone's representative point.
/// A zero distance returns that known value exactly (smallest index wins
/// among coincident points).
MeasurementResult idw_estimate(const FeatureLayer& zones, const FeatureLayer& known,
                               const std::string& value_column,
                               const IdwConfig& config = {},
                               const RepPointConfig& rep = {});

struct IdwCvResult {
    double best_power = 0.0;
    /// (power, leave-one-out RMSE) per candidate, in candidate order.
    std::vector<std::pair<double, double>> rmse_per_power;
    /// Points skipped because a coincident duplicate makes them degenerate.
    std::size_t skipped = 0;
};

inline const std::vector<double> kDefaultIdwPowers = {0.5, 1.0, 1.5, 2.0,
                                                      2.5, 3.0, 3.5, 4.0};

/// Leave-one-out cross validation of the IDW power parameter; the candidate
/// with the lowest RMSE wins, ties going to the smallest power.
IdwCvResult idw_cv(const FeatureLayer& known, const std::string& value_column,
                   const std::vector<double>& candidate_powers = kDefaultIdwPowers,
                   const IdwConfig& config = {});

}  // namespace suitkit
