#include "suitkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace suitkit {

namespace {

constexpr double kBoundaryEps = 1e-12;

void require_finite_ring(const std::vector<Point2>& ring, const char* what) {
    for (const Point2& p : ring) {
        if (!is_finite(p)) {
            throw std::invalid_argument(std::string(what) + " has non-finite vertex");
        }
    }
}

void validate_ring(const std::vector<Point2>& ring, const char* what) {
    if (ring.size() < 4) {
        throw std::invalid_argument(std::string(what) + " needs at least 4 vertices");
    }
    if (!(ring.front() == ring.back())) {
        throw std::invalid_argument(std::string(what) + " is not closed");
    }
    require_finite_ring(ring, what);
}

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Proper crossing: the segments intersect at a single interior point of both.
bool segments_cross_properly(const Point2& a, const Point2& b,
                             const Point2& c, const Point2& d) {
    const double d1 = cross(c, d, a);
    const double d2 = cross(c, d, b);
    const double d3 = cross(a, b, c);
    const double d4 = cross(a, b, d);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
           ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

// Checks non-adjacent edge pairs of a closed ring for proper crossings.
void validate_no_self_intersection(const std::vector<Point2>& ring, const char* what) {
    const std::size_t n = ring.size() - 1;  // edge count
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            if (segments_cross_properly(ring[i], ring[i + 1], ring[j], ring[j + 1])) {
                throw std::invalid_argument(std::string(what) + " is self-intersecting");
            }
        }
    }
}

// Area-weighted centroid contribution of one closed ring (signed).
struct RingMoments {
    double area = 0.0;
    double cx = 0.0;  // integral of x dA (times area normalization)
    double cy = 0.0;
};

RingMoments ring_moments(const std::vector<Point2>& ring) {
    RingMoments m;
    double a2 = 0.0, cx6 = 0.0, cy6 = 0.0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        const Point2& p = ring[i];
        const Point2& q = ring[i + 1];
        const double w = p.x * q.y - q.x * p.y;
        a2 += w;
        cx6 += (p.x + q.x) * w;
        cy6 += (p.y + q.y) * w;
    }
    m.area = 0.5 * a2;
    m.cx = cx6 / 6.0;
    m.cy = cy6 / 6.0;
    return m;
}

bool crossing_parity(const std::vector<Point2>& ring, const Point2& pt, bool parity) {
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        const Point2& a = ring[i];
        const Point2& b = ring[i + 1];
        if ((a.y > pt.y) != (b.y > pt.y)) {
            const double x_cross = a.x + (pt.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (pt.x < x_cross) parity = !parity;
        }
    }
    return parity;
}

bool near_ring_boundary(const std::vector<Point2>& ring, const Point2& pt) {
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        if (point_segment_distance(pt, ring[i], ring[i + 1]) <= kBoundaryEps) {
            return true;
        }
    }
    return false;
}

}  // namespace

bool is_finite(const Point2& p) {
    return std::isfinite(p.x) && std::isfinite(p.y);
}

void BoundingBox::expand(const Point2& p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
}

void BoundingBox::expand(const BoundingBox& o) {
    min_x = std::min(min_x, o.min_x);
    min_y = std::min(min_y, o.min_y);
    max_x = std::max(max_x, o.max_x);
    max_y = std::max(max_y, o.max_y);
}

BoundingBox bbox_of(const Point2& p) {
    return BoundingBox{p.x, p.y, p.x, p.y};
}

LineString::LineString(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 2) {
        throw std::invalid_argument("line needs at least 2 vertices");
    }
    for (const Point2& p : vertices_) {
        if (!is_finite(p)) throw std::invalid_argument("line has non-finite vertex");
    }
    for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
        if (vertices_[i] == vertices_[i + 1]) {
            throw std::invalid_argument("line has repeated consecutive vertex");
        }
    }
}

double LineString::length() const {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
        total += std::hypot(vertices_[i + 1].x - vertices_[i].x,
                            vertices_[i + 1].y - vertices_[i].y);
    }
    return total;
}

BoundingBox bbox_of(const LineString& line) {
    BoundingBox box = bbox_of(line.vertices().front());
    for (const Point2& p : line.vertices()) box.expand(p);
    return box;
}

Polygon::Polygon(std::vector<Point2> exterior, std::vector<std::vector<Point2>> holes)
    : exterior_(std::move(exterior)), holes_(std::move(holes)) {
    validate_ring(exterior_, "exterior ring");
    validate_no_self_intersection(exterior_, "exterior ring");
    if (ring_signed_area(exterior_) < 0) {
        std::reverse(exterior_.begin(), exterior_.end());
    }
    for (auto& hole : holes_) {
        validate_ring(hole, "hole ring");
        if (ring_signed_area(hole) > 0) {
            std::reverse(hole.begin(), hole.end());
        }
    }
    area_ = ring_signed_area(exterior_);
    for (const auto& hole : holes_) {
        area_ += ring_signed_area(hole);  // holes carry negative area
    }
}

BoundingBox bbox_of(const Polygon& poly) {
    BoundingBox box = bbox_of(poly.exterior().front());
    for (const Point2& p : poly.exterior()) box.expand(p);
    return box;
}

double ring_signed_area(const std::vector<Point2>& ring) {
    double a2 = 0.0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        a2 += ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
    }
    return 0.5 * a2;
}

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len_sq = dx * dx + dy * dy;
    if (len_sq == 0.0) return std::hypot(p.x - a.x, p.y - a.y);
    double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len_sq;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

CentroidResult centroid(const Point2& p) {
    return CentroidResult{p, false};
}

CentroidResult centroid(const LineString& line) {
    const auto& v = line.vertices();
    double total_len = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double len = std::hypot(v[i + 1].x - v[i].x, v[i + 1].y - v[i].y);
        total_len += len;
        sx += 0.5 * (v[i].x + v[i + 1].x) * len;
        sy += 0.5 * (v[i].y + v[i + 1].y) * len;
    }
    return CentroidResult{Point2{sx / total_len, sy / total_len}, false};
}

CentroidResult centroid(const Polygon& poly) {
    RingMoments total = ring_moments(poly.exterior());
    for (const auto& hole : poly.holes()) {
        const RingMoments hm = ring_moments(hole);
        total.area += hm.area;
        total.cx += hm.cx;
        total.cy += hm.cy;
    }
    if (std::abs(total.area) < std::numeric_limits<double>::min()) {
        // Degenerate: fall back to the mean of distinct exterior vertices.
        const auto& ring = poly.exterior();
        double sx = 0.0, sy = 0.0;
        const std::size_t n = ring.size() - 1;
        for (std::size_t i = 0; i < n; ++i) {
            sx += ring[i].x;
            sy += ring[i].y;
        }
        return CentroidResult{Point2{sx / static_cast<double>(n),
                                     sy / static_cast<double>(n)},
                              true};
    }
    return CentroidResult{Point2{total.cx / total.area, total.cy / total.area}, false};
}

bool contains(const Polygon& poly, const Point2& pt) {
    if (near_ring_boundary(poly.exterior(), pt)) return true;
    for (const auto& hole : poly.holes()) {
        if (near_ring_boundary(hole, pt)) return true;
    }
    bool inside = crossing_parity(poly.exterior(), pt, false);
    for (const auto& hole : poly.holes()) {
        inside = crossing_parity(hole, pt, inside);
    }
    return inside;
}

}  // namespace suitkit
