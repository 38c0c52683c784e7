#include "suitkit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "suitkit/grid.hpp"

namespace suitkit {

std::size_t MeasurementResult::nodata_count() const {
    std::size_t count = 0;
    for (bool flag : nodata) {
        if (flag) ++count;
    }
    return count;
}

void append_measurement(FeatureLayer& layer, const MeasurementResult& result,
                        const std::string& column_name, bool overwrite) {
    if (result.values.size() != layer.size()) {
        throw std::invalid_argument("measurement length does not match layer size");
    }
    layer.attributes().add_numeric_column(column_name, result.values, result.nodata,
                                          overwrite);
}

namespace {

std::vector<Point2> representative_points_impl(const FeatureLayer& sources,
                                               const RepPointConfig& config,
                                               std::vector<std::string>* warnings) {
    std::vector<Point2> points;
    points.reserve(sources.size());
    if (config.x_column || config.y_column) {
        if (!config.x_column || !config.y_column) {
            throw std::invalid_argument(
                "representative point override needs both x and y columns");
        }
        const auto& xs = sources.attributes().column(*config.x_column);
        const auto& ys = sources.attributes().column(*config.y_column);
        for (std::size_t i = 0; i < sources.size(); ++i) {
            const auto x = as_number(xs[i]);
            const auto y = as_number(ys[i]);
            if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y)) {
                throw std::invalid_argument("representative point columns must be "
                                            "numeric and finite at row " +
                                            std::to_string(i));
            }
            points.push_back(Point2{*x, *y});
        }
        return points;
    }
    switch (sources.kind()) {
        case GeometryKind::point:
            points = sources.points();
            break;
        case GeometryKind::line:
            for (const auto& line : sources.lines()) {
                points.push_back(centroid(line).point);
            }
            break;
        case GeometryKind::polygon:
            for (std::size_t i = 0; i < sources.polygons().size(); ++i) {
                const CentroidResult c = centroid(sources.polygons()[i]);
                if (c.used_vertex_mean && warnings) {
                    warnings->push_back("feature " + std::to_string(i) +
                                        ": zero-area polygon, centroid fell back to "
                                        "vertex mean");
                }
                points.push_back(c.point);
            }
            break;
    }
    return points;
}

// Uniform spatial hash over target points. Bins hold ascending indices so a
// gathered candidate list visits targets in original order after one sort.
class PointBins {
public:
    explicit PointBins(const std::vector<Point2>& points) : points_(points) {
        if (points_.empty()) return;
        box_ = bbox_of(points_[0]);
        for (const Point2& p : points_) box_.expand(p);
        const auto n = points_.size();
        const int target = std::max(1, static_cast<int>(std::sqrt(
                                           static_cast<double>(n) / 4.0)));
        nx_ = box_.width() > 0.0 ? target : 1;
        ny_ = box_.height() > 0.0 ? target : 1;
        bins_.resize(static_cast<std::size_t>(nx_) * ny_);
        for (std::size_t i = 0; i < n; ++i) {
            bins_[bin_index(points_[i])].push_back(static_cast<std::uint32_t>(i));
        }
    }

    std::vector<std::uint32_t> gather(const BoundingBox& query) const {
        std::vector<std::uint32_t> out;
        if (points_.empty()) return out;
        const int cx0 = col_of(query.min_x), cx1 = col_of(query.max_x);
        const int cy0 = row_of(query.min_y), cy1 = row_of(query.max_y);
        for (int cy = cy0; cy <= cy1; ++cy) {
            for (int cx = cx0; cx <= cx1; ++cx) {
                const auto& bin = bins_[static_cast<std::size_t>(cy) * nx_ + cx];
                out.insert(out.end(), bin.begin(), bin.end());
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    int col_of(double x) const {
        if (box_.width() <= 0.0) return 0;
        const double f = (x - box_.min_x) / box_.width() * nx_;
        return std::clamp(static_cast<int>(std::floor(f)), 0, nx_ - 1);
    }
    int row_of(double y) const {
        if (box_.height() <= 0.0) return 0;
        const double f = (y - box_.min_y) / box_.height() * ny_;
        return std::clamp(static_cast<int>(std::floor(f)), 0, ny_ - 1);
    }
    std::size_t bin_index(const Point2& p) const {
        return static_cast<std::size_t>(row_of(p.y)) * nx_ + col_of(p.x);
    }

    const std::vector<Point2>& points_;
    BoundingBox box_{};
    int nx_ = 1;
    int ny_ = 1;
    std::vector<std::vector<std::uint32_t>> bins_;
};

}  // namespace

std::vector<Point2> representative_points(const FeatureLayer& sources,
                                          const RepPointConfig& config) {
    return representative_points_impl(sources, config, nullptr);
}

MeasurementResult distance_to_point(const FeatureLayer& sources,
                                    const FeatureLayer& targets, Metric metric,
                                    const RepPointConfig& config) {
    if (targets.empty()) {
        throw std::invalid_argument("no targets");
    }
    MeasurementResult result;
    result.units = "map units";
    const std::vector<Point2> reps =
        representative_points_impl(sources, config, &result.warnings);
    const KdTree tree(targets.points());
    result.values.reserve(reps.size());
    result.nodata.assign(reps.size(), false);
    for (const Point2& p : reps) {
        result.values.push_back(tree.nearest(p, metric).distance);
    }
    return result;
}

MeasurementResult distance_to_line(const FeatureLayer& sources,
                                   const FeatureLayer& lines, double cell_size,
                                   Metric metric, const RepPointConfig& config) {
    const Grid grid = rasterize_lines(lines, cell_size);
    MeasurementResult result;
    result.units = "map units";
    const std::vector<Point2> reps =
        representative_points_impl(sources, config, &result.warnings);
    const KdTree tree(grid.set_cell_centers());
    result.values.reserve(reps.size());
    result.nodata.assign(reps.size(), false);
    for (const Point2& p : reps) {
        result.values.push_back(tree.nearest(p, metric).distance);
    }
    return result;
}

MeasurementResult density_of_point(const FeatureLayer& zones,
                                   const FeatureLayer& targets,
                                   const std::optional<std::string>& value_column) {
    const auto& polys = zones.polygons();
    MeasurementResult result;
    result.units = "per square map unit";
    result.values.assign(polys.size(), 0.0);
    result.nodata.assign(polys.size(), false);

    std::vector<double> target_values;
    if (value_column) {
        const auto& col = targets.attributes().column(*value_column);
        target_values.resize(col.size());
        for (std::size_t j = 0; j < col.size(); ++j) {
            const auto v = as_number(col[j]);
            if (!v) {
                result.warnings.push_back("target " + std::to_string(j) +
                                          ": non-numeric value ignored");
                target_values[j] = 0.0;
            } else {
                target_values[j] = *v;
            }
        }
    }

    static const std::vector<Point2> kNoPoints;
    const std::vector<Point2>& pts = targets.empty() ? kNoPoints : targets.points();
    const PointBins bins(pts);

    for (std::size_t i = 0; i < polys.size(); ++i) {
        const double area = polys[i].area();
        if (!(area > 0.0)) {
            result.nodata[i] = true;
            result.warnings.push_back("zone " + std::to_string(i) +
                                      ": zero area, density undefined");
            continue;
        }
        double sum = 0.0;
        for (std::uint32_t j : bins.gather(bbox_of(polys[i]))) {
            if (contains(polys[i], pts[j])) {
                sum += value_column ? target_values[j] : 1.0;
            }
        }
        result.values[i] = sum / area;
    }
    return result;
}

MeasurementResult density_of_line(const FeatureLayer& zones, const FeatureLayer& lines,
                                  double cell_size, LineDensityMode mode) {
    const Grid grid = rasterize_lines(lines, cell_size);
    const auto& polys = zones.polygons();
    MeasurementResult result;
    result.units = mode == LineDensityMode::cell_count ? "cells per square map unit"
                                                       : "per map unit";
    result.values.assign(polys.size(), 0.0);
    result.nodata.assign(polys.size(), false);
    for (std::size_t i = 0; i < polys.size(); ++i) {
        const double area = polys[i].area();
        if (!(area > 0.0)) {
            result.nodata[i] = true;
            result.warnings.push_back("zone " + std::to_string(i) +
                                      ": zero area, density undefined");
            continue;
        }
        const double count = static_cast<double>(zonal_cell_count(grid, polys[i]));
        result.values[i] = mode == LineDensityMode::cell_count
                               ? count / area
                               : count * cell_size / area;
    }
    return result;
}

namespace {

struct KnownPoints {
    std::vector<Point2> points;
    std::vector<double> values;
};

KnownPoints usable_known_points(const FeatureLayer& known,
                                const std::string& value_column,
                                std::vector<std::string>& warnings) {
    const auto& col = known.attributes().column(value_column);
    KnownPoints out;
    out.points.reserve(known.size());
    out.values.reserve(known.size());
    for (std::size_t j = 0; j < known.size(); ++j) {
        const auto v = as_number(col[j]);
        if (!v || !std::isfinite(*v)) {
            warnings.push_back("known point " + std::to_string(j) +
                               ": missing value, excluded");
            continue;
        }
        out.points.push_back(known.points()[j]);
        out.values.push_back(*v);
    }
    return out;
}

// Shepard estimate over neighbors ordered by (distance, index). Weights are
// normalized by the nearest distance so large powers stay in range.
double shepard_estimate(const std::vector<NearestResult>& neighbors,
                        const std::vector<double>& values, double power) {
    if (neighbors.front().distance == 0.0) {
        return values[neighbors.front().index];
    }
    const double d_min = neighbors.front().distance;
    double numerator = 0.0;
    double denominator = 0.0;
    for (const NearestResult& nb : neighbors) {
        const double w = std::pow(nb.distance / d_min, -power);
        numerator += w * values[nb.index];
        denominator += w;
    }
    return numerator / denominator;
}

void validate_idw_config(const IdwConfig& config) {
    if (!(config.power > 0.0) || !std::isfinite(config.power)) {
        throw std::invalid_argument("IDW power must be positive");
    }
    if (config.n_neighbors && *config.n_neighbors == 0) {
        throw std::invalid_argument("IDW neighbor count must be positive");
    }
    if (config.search_radius && !(*config.search_radius > 0.0)) {
        throw std::invalid_argument("IDW search radius must be positive");
    }
}

}  // namespace

MeasurementResult idw_estimate(const FeatureLayer& zones, const FeatureLayer& known,
                               const std::string& value_column, const IdwConfig& config,
                               const RepPointConfig& rep) {
    validate_idw_config(config);
    MeasurementResult result;
    const KnownPoints kp = usable_known_points(known, value_column, result.warnings);
    if (kp.points.empty()) {
        throw std::invalid_argument("no usable known points");
    }
    const std::vector<Point2> reps =
        representative_points_impl(zones, rep, &result.warnings);
    const KdTree tree(kp.points);
    const std::size_t k = config.n_neighbors
                              ? std::min(*config.n_neighbors, kp.points.size())
                              : kp.points.size();

    result.values.assign(reps.size(), 0.0);
    result.nodata.assign(reps.size(), false);
    for (std::size_t i = 0; i < reps.size(); ++i) {
        std::vector<NearestResult> neighbors = tree.nearest_k(reps[i], k);
        if (config.search_radius) {
            std::erase_if(neighbors, [&](const NearestResult& nb) {
                return nb.distance > *config.search_radius;
            });
        }
        if (neighbors.empty()) {
            result.nodata[i] = true;
            result.warnings.push_back("zone " + std::to_string(i) +
                                      ": no known points within search radius");
            continue;
        }
        result.values[i] = shepard_estimate(neighbors, kp.values, config.power);
    }
    return result;
}

IdwCvResult idw_cv(const FeatureLayer& known, const std::string& value_column,
                   const std::vector<double>& candidate_powers,
                   const IdwConfig& config) {
    if (candidate_powers.empty()) {
        throw std::invalid_argument("idw_cv needs at least one candidate power");
    }
    for (double u : candidate_powers) {
        if (!(u > 0.0) || !std::isfinite(u)) {
            throw std::invalid_argument("candidate powers must be positive");
        }
    }
    std::vector<std::string> warnings;
    const KnownPoints kp = usable_known_points(known, value_column, warnings);
    const std::size_t n = kp.points.size();
    if (n < 3) {
        throw std::invalid_argument("idw_cv needs at least 3 known points");
    }

    const KdTree tree(kp.points);
    const std::size_t k =
        config.n_neighbors ? std::min(*config.n_neighbors, n - 1) : n - 1;

    // Neighbor lists are power-independent; compute them once per point.
    IdwCvResult result;
    std::vector<std::vector<NearestResult>> neighbor_lists(n);
    std::vector<bool> skipped(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<NearestResult> neighbors = tree.nearest_k(kp.points[i], k + 1);
        std::erase_if(neighbors,
                      [&](const NearestResult& nb) { return nb.index == i; });
        if (neighbors.size() > k) neighbors.resize(k);
        if (config.search_radius) {
            std::erase_if(neighbors, [&](const NearestResult& nb) {
                return nb.distance > *config.search_radius;
            });
        }
        if (neighbors.empty() || neighbors.front().distance == 0.0) {
            // A coincident duplicate would be predicted exactly by the d=0
            // branch for every power, telling us nothing about u.
            skipped[i] = true;
            ++result.skipped;
            continue;
        }
        neighbor_lists[i] = std::move(neighbors);
    }
    if (result.skipped == n) {
        throw std::invalid_argument("idw_cv: all points are coincident duplicates");
    }

    double best_rmse = std::numeric_limits<double>::infinity();
    for (double u : candidate_powers) {
        double sum_sq = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (skipped[i]) continue;
            const double prediction = shepard_estimate(neighbor_lists[i], kp.values, u);
            const double err = prediction - kp.values[i];
            sum_sq += err * err;
            ++count;
        }
        const double rmse = std::sqrt(sum_sq / static_cast<double>(count));
        result.rmse_per_power.emplace_back(u, rmse);
        if (rmse < best_rmse || (rmse == best_rmse && u < result.best_power)) {
            best_rmse = rmse;
            result.best_power = u;
        }
    }
    return result;
}

}  // namespace suitkit
