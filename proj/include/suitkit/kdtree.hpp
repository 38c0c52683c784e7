#pragma once

#include <cstdint>
#include <vector>

#include "suitkit/geometry.hpp"

namespace suitkit {

enum class Metric { euclidean, manhattan };

double metric_distance(const Point2& a, const Point2& b, Metric metric);

struct NearestResult {
    std::size_t index = 0;   // index into the original point sequence
    double distance = 0.0;
};

struct QueryStats {
    std::size_t nodes_visited = 0;
    std::size_t leaves_visited = 0;
};

/// Static 2-D KD-tree built with the sliding-midpoint rule: each node splits
/// the widest side of its cell at the midpoint, and when every point falls on
/// one side the plane slides to the nearest point coordinate so both children
/// stay non-empty. Queries answer exact nearest neighbors under the Euclidean
/// or Manhattan metric, breaking distance ties by smallest original index.
class KdTree {
public:
    static constexpr int kDefaultLeafSize = 16;

    struct Node {
        int axis = -1;          // -1 marks a leaf
        double split = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::int32_t begin = 0;  // leaf range into order()
        std::int32_t end = 0;
        bool is_leaf() const { return axis < 0; }
    };

    explicit KdTree(std::vector<Point2> points, int leaf_size = kDefaultLeafSize);

    NearestResult nearest(const Point2& query, Metric metric = Metric::euclidean) const;
    NearestResult nearest(const Point2& query, Metric metric, QueryStats& stats) const;

    /// The k nearest points ordered by (distance, original index).
    /// Returns fewer than k entries when the tree holds fewer points.
    std::vector<NearestResult> nearest_k(const Point2& query, std::size_t k,
                                         Metric metric = Metric::euclidean) const;

    std::size_t size() const { return points_.size(); }
    int leaf_size() const { return leaf_size_; }
    const std::vector<Point2>& points() const { return points_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<std::uint32_t>& order() const { return order_; }
    std::size_t leaf_count() const { return leaf_count_; }
    std::size_t depth() const { return depth_; }

private:
    std::int32_t build(std::int32_t begin, std::int32_t end, double min_x, double min_y,
                       double max_x, double max_y, std::size_t level);

    std::vector<Point2> points_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
    int leaf_size_;
    std::size_t leaf_count_ = 0;
    std::size_t depth_ = 0;
};

}  // namespace suitkit
