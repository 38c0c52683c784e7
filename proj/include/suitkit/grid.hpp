#pragma once

#include <cstdint>
#include <vector>

#include "suitkit/geometry.hpp"
#include "suitkit/layer.hpp"

namespace suitkit {

/// World <-> grid mapping: cell (col, row) covers world
/// x in [left + col*c, left + (col+1)*c) and y in (top - (row+1)*c, top - row*c].
struct AffineTransform {
    double cell_size = 1.0;  // map units per cell, > 0
    double left = 0.0;       // west bound
    double top = 0.0;        // north bound
};

struct CellIndex {
    int col = 0;
    int row = 0;
    friend bool operator==(const CellIndex& a, const CellIndex& b) {
        return a.col == b.col && a.row == b.row;
    }
};

/// Center of cell (col, row) in world coordinates.
Point2 cell_to_world(const AffineTransform& tf, int col, int row);

/// Cell containing a world point (floor rule; may be out of grid bounds).
CellIndex world_to_cell(const AffineTransform& tf, const Point2& pt);

/// Row-major raster of doubles tied to an affine transform.
class Grid {
public:
    static constexpr double kDefaultNodata = -9999.0;

    Grid(AffineTransform tf, int n_rows, int n_cols, double fill = 0.0,
         double nodata = kDefaultNodata);

    const AffineTransform& transform() const { return tf_; }
    int n_rows() const { return n_rows_; }
    int n_cols() const { return n_cols_; }
    double nodata() const { return nodata_; }

    bool in_bounds(int col, int row) const {
        return col >= 0 && col < n_cols_ && row >= 0 && row < n_rows_;
    }
    double at(int col, int row) const {
        return cells_[static_cast<std::size_t>(row) * n_cols_ + col];
    }
    void set(int col, int row, double value) {
        cells_[static_cast<std::size_t>(row) * n_cols_ + col] = value;
    }

    const std::vector<double>& cells() const { return cells_; }
    std::size_t set_cell_count() const;

    /// Centers of all cells that are set (non-zero and not nodata), row-major.
    std::vector<Point2> set_cell_centers() const;

private:
    AffineTransform tf_;
    int n_rows_;
    int n_cols_;
    double nodata_;
    std::vector<double> cells_;
};

/// Supercover rasterization: the result is a binary grid over the padded
/// extent of the layer where a cell is 1 iff some segment intersects the
/// cell's closed square.
Grid rasterize_lines(const FeatureLayer& lines, double cell_size);

/// Number of set cells whose centers fall inside the zone (boundary counts).
std::size_t zonal_cell_count(const Grid& grid, const Polygon& zone);

/// Exact closed-rectangle / segment intersection test.
bool segment_intersects_rect(const Point2& a, const Point2& b, double x0, double y0,
                             double x1, double y1);

}  // namespace suitkit
