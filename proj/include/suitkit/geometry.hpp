#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace suitkit {

/// A point in planar map coordinates. Coordinates must be finite.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2& a, const Point2& b) {
        return a.x == b.x && a.y == b.y;
    }
};

bool is_finite(const Point2& p);

/// Axis-aligned bounding box.
struct BoundingBox {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
    void expand(const Point2& p);
    void expand(const BoundingBox& other);
    bool contains(const Point2& p) const {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }
};

BoundingBox bbox_of(const Point2& p);

/// An open polyline with at least two vertices. Consecutive vertices must
/// differ, so every segment has positive length.
class LineString {
public:
    explicit LineString(std::vector<Point2> vertices);

    const std::vector<Point2>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    double length() const;

private:
    std::vector<Point2> vertices_;
};

BoundingBox bbox_of(const LineString& line);

/// A polygon with one exterior ring and optional interior rings (holes).
/// Rings are closed (first vertex repeated last, >= 4 entries). Orientation
/// is normalized on construction: exterior counter-clockwise, holes
/// clockwise. The exterior ring is checked for proper self-intersections.
class Polygon {
public:
    explicit Polygon(std::vector<Point2> exterior,
                     std::vector<std::vector<Point2>> holes = {});

    const std::vector<Point2>& exterior() const { return exterior_; }
    const std::vector<std::vector<Point2>>& holes() const { return holes_; }

    /// Exterior area minus hole areas. Non-negative for valid rings.
    double area() const { return area_; }

private:
    std::vector<Point2> exterior_;
    std::vector<std::vector<Point2>> holes_;
    double area_ = 0.0;
};

BoundingBox bbox_of(const Polygon& poly);

/// Signed area of a closed ring (positive when counter-clockwise).
double ring_signed_area(const std::vector<Point2>& ring);

/// Distance from a point to a segment.
double point_segment_distance(const Point2& p, const Point2& a, const Point2& b);

struct CentroidResult {
    Point2 point;
    /// True when a zero-area polygon forced the vertex-mean fallback.
    bool used_vertex_mean = false;
};

CentroidResult centroid(const Point2& p);
CentroidResult centroid(const LineString& line);
CentroidResult centroid(const Polygon& poly);

/// Even-odd point-in-polygon test. Points on any ring boundary (within
/// 1e-12) count as contained; points inside a hole do not.
bool contains(const Polygon& poly, const Point2& pt);

}  // namespace suitkit
