#include "suitkit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace suitkit {

Point2 cell_to_world(const AffineTransform& tf, int col, int row) {
    return Point2{tf.left + (col + 0.5) * tf.cell_size,
                  tf.top - (row + 0.5) * tf.cell_size};
}

CellIndex world_to_cell(const AffineTransform& tf, const Point2& pt) {
    return CellIndex{static_cast<int>(std::floor((pt.x - tf.left) / tf.cell_size)),
                     static_cast<int>(std::floor((tf.top - pt.y) / tf.cell_size))};
}

Grid::Grid(AffineTransform tf, int n_rows, int n_cols, double fill, double nodata)
    : tf_(tf), n_rows_(n_rows), n_cols_(n_cols), nodata_(nodata) {
    if (tf_.cell_size <= 0.0 || !std::isfinite(tf_.cell_size)) {
        throw std::invalid_argument("cell size must be positive");
    }
    if (n_rows_ < 1 || n_cols_ < 1) {
        throw std::invalid_argument("grid must have at least one row and column");
    }
    cells_.assign(static_cast<std::size_t>(n_rows_) * n_cols_, fill);
}

std::size_t Grid::set_cell_count() const {
    std::size_t count = 0;
    for (double v : cells_) {
        if (v != 0.0 && v != nodata_) ++count;
    }
    return count;
}

std::vector<Point2> Grid::set_cell_centers() const {
    std::vector<Point2> centers;
    centers.reserve(set_cell_count());
    for (int row = 0; row < n_rows_; ++row) {
        for (int col = 0; col < n_cols_; ++col) {
            const double v = at(col, row);
            if (v != 0.0 && v != nodata_) {
                centers.push_back(cell_to_world(tf_, col, row));
            }
        }
    }
    return centers;
}

bool segment_intersects_rect(const Point2& a, const Point2& b, double x0, double y0,
                             double x1, double y1) {
    if (std::max(a.x, b.x) < x0 || std::min(a.x, b.x) > x1) return false;
    if (std::max(a.y, b.y) < y0 || std::min(a.y, b.y) > y1) return false;
    // Separating-axis test on the segment normal: reject only when all four
    // corners lie strictly on one side of the segment's supporting line.
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double s1 = dx * (y0 - a.y) - dy * (x0 - a.x);
    const double s2 = dx * (y0 - a.y) - dy * (x1 - a.x);
    const double s3 = dx * (y1 - a.y) - dy * (x1 - a.x);
    const double s4 = dx * (y1 - a.y) - dy * (x0 - a.x);
    const bool any_not_above = s1 <= 0 || s2 <= 0 || s3 <= 0 || s4 <= 0;
    const bool any_not_below = s1 >= 0 || s2 >= 0 || s3 >= 0 || s4 >= 0;
    return any_not_above && any_not_below;
}

namespace {

// Marks every cell whose closed square the segment touches. Candidate cells
// come from a conservative column/row band around the segment; the exact
// rectangle test makes the final call.
void rasterize_segment(Grid& grid, const Point2& a, const Point2& b) {
    const AffineTransform& tf = grid.transform();
    const double c = tf.cell_size;

    const double seg_min_x = std::min(a.x, b.x);
    const double seg_max_x = std::max(a.x, b.x);
    int col_begin = static_cast<int>(std::floor((seg_min_x - tf.left) / c)) - 1;
    int col_end = static_cast<int>(std::floor((seg_max_x - tf.left) / c)) + 1;
    col_begin = std::max(col_begin, 0);
    col_end = std::min(col_end, grid.n_cols() - 1);

    const double dx = b.x - a.x;
    for (int col = col_begin; col <= col_end; ++col) {
        const double slab_x0 = tf.left + col * c;
        const double slab_x1 = slab_x0 + c;

        // y-range of the segment within this column's closed slab.
        double y_lo, y_hi;
        if (dx == 0.0) {
            y_lo = std::min(a.y, b.y);
            y_hi = std::max(a.y, b.y);
        } else {
            double t0 = (slab_x0 - a.x) / dx;
            double t1 = (slab_x1 - a.x) / dx;
            if (t0 > t1) std::swap(t0, t1);
            t0 = std::clamp(t0, 0.0, 1.0);
            t1 = std::clamp(t1, 0.0, 1.0);
            const double ya = a.y + t0 * (b.y - a.y);
            const double yb = a.y + t1 * (b.y - a.y);
            y_lo = std::min(ya, yb);
            y_hi = std::max(ya, yb);
        }

        int row_begin = static_cast<int>(std::floor((tf.top - y_hi) / c)) - 1;
        int row_end = static_cast<int>(std::floor((tf.top - y_lo) / c)) + 1;
        row_begin = std::max(row_begin, 0);
        row_end = std::min(row_end, grid.n_rows() - 1);

        for (int row = row_begin; row <= row_end; ++row) {
            if (grid.at(col, row) != 0.0) continue;
            const double cell_y1 = tf.top - row * c;
            const double cell_y0 = cell_y1 - c;
            if (segment_intersects_rect(a, b, slab_x0, cell_y0, slab_x1, cell_y1)) {
                grid.set(col, row, 1.0);
            }
        }
    }
}

}  // namespace

Grid rasterize_lines(const FeatureLayer& lines, double cell_size) {
    if (cell_size <= 0.0 || !std::isfinite(cell_size)) {
        throw std::invalid_argument("cell size must be positive");
    }
    if (lines.empty()) {
        throw std::invalid_argument("cannot rasterize an empty layer");
    }
    const BoundingBox box = bbox(lines);
    const int n_cols =
        std::max(1, static_cast<int>(std::ceil(box.width() / cell_size)));
    const int n_rows =
        std::max(1, static_cast<int>(std::ceil(box.height() / cell_size)));
    Grid grid(AffineTransform{cell_size, box.min_x, box.max_y}, n_rows, n_cols);

    for (const LineString& line : lines.lines()) {
        const auto& v = line.vertices();
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            rasterize_segment(grid, v[i], v[i + 1]);
        }
    }
    return grid;
}

std::size_t zonal_cell_count(const Grid& grid, const Polygon& zone) {
    const BoundingBox zone_box = bbox_of(zone);
    const AffineTransform& tf = grid.transform();
    const double c = tf.cell_size;

    // Restrict the scan to rows/cols whose centers can fall in the zone box.
    int col_begin = static_cast<int>(std::floor((zone_box.min_x - tf.left) / c)) - 1;
    int col_end = static_cast<int>(std::floor((zone_box.max_x - tf.left) / c)) + 1;
    int row_begin = static_cast<int>(std::floor((tf.top - zone_box.max_y) / c)) - 1;
    int row_end = static_cast<int>(std::floor((tf.top - zone_box.min_y) / c)) + 1;
    col_begin = std::max(col_begin, 0);
    col_end = std::min(col_end, grid.n_cols() - 1);
    row_begin = std::max(row_begin, 0);
    row_end = std::min(row_end, grid.n_rows() - 1);

    std::size_t count = 0;
    for (int row = row_begin; row <= row_end; ++row) {
        for (int col = col_begin; col <= col_end; ++col) {
            const double v = grid.at(col, row);
            if (v == 0.0 || v == grid.nodata()) continue;
            if (contains(zone, cell_to_world(tf, col, row))) ++count;
        }
    }
    return count;
}

}  // namespace suitkit
