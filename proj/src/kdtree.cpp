#include "suitkit/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

namespace suitkit {

namespace {

inline double coord(const Point2& p, int axis) {
    return axis == 0 ? p.x : p.y;
}

inline double euclidean_sq(const Point2& a, const Point2& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double manhattan(const Point2& a, const Point2& b) {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

}  // namespace

double metric_distance(const Point2& a, const Point2& b, Metric metric) {
    return metric == Metric::euclidean ? std::sqrt(euclidean_sq(a, b))
                                       : manhattan(a, b);
}

KdTree::KdTree(std::vector<Point2> points, int leaf_size)
    : points_(std::move(points)), leaf_size_(leaf_size) {
    if (points_.empty()) {
        throw std::invalid_argument("cannot index empty set");
    }
    if (leaf_size_ < 1) {
        throw std::invalid_argument("leaf_size must be positive");
    }
    double min_x = points_[0].x, max_x = points_[0].x;
    double min_y = points_[0].y, max_y = points_[0].y;
    for (const Point2& p : points_) {
        if (!is_finite(p)) {
            throw std::invalid_argument("cannot index non-finite point");
        }
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    order_.resize(points_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) {
        order_[i] = static_cast<std::uint32_t>(i);
    }
    nodes_.reserve(2 * (points_.size() / static_cast<std::size_t>(leaf_size_) + 1));
    build(0, static_cast<std::int32_t>(points_.size()), min_x, min_y, max_x, max_y, 0);
}

std::int32_t KdTree::build(std::int32_t begin, std::int32_t end, double min_x,
                           double min_y, double max_x, double max_y,
                           std::size_t level) {
    depth_ = std::max(depth_, level);
    const std::int32_t node_index = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();

    const std::int32_t count = end - begin;
    if (count <= leaf_size_) {
        nodes_[node_index].begin = begin;
        nodes_[node_index].end = end;
        ++leaf_count_;
        return node_index;
    }

    const int axis = (max_x - min_x) >= (max_y - min_y) ? 0 : 1;
    const double cell_lo = axis == 0 ? min_x : min_y;
    const double cell_hi = axis == 0 ? max_x : max_y;
    double split = 0.5 * (cell_lo + cell_hi);

    auto* first = order_.data() + begin;
    auto* last = order_.data() + end;
    auto* mid = std::partition(first, last, [&](std::uint32_t idx) {
        return coord(points_[idx], axis) < split;
    });
    std::int32_t p = begin + static_cast<std::int32_t>(mid - first);

    if (p == begin || p == end) {
        // Trivial split: slide the plane to the nearest point coordinate.
        double lo = coord(points_[order_[begin]], axis);
        double hi = lo;
        double other_lo = coord(points_[order_[begin]], 1 - axis);
        double other_hi = other_lo;
        for (std::int32_t i = begin; i < end; ++i) {
            const double c = coord(points_[order_[i]], axis);
            lo = std::min(lo, c);
            hi = std::max(hi, c);
            const double o = coord(points_[order_[i]], 1 - axis);
            other_lo = std::min(other_lo, o);
            other_hi = std::max(other_hi, o);
        }
        if (lo == hi && other_lo == other_hi) {
            // All points identical: no split can separate them.
            nodes_[node_index].begin = begin;
            nodes_[node_index].end = end;
            ++leaf_count_;
            return node_index;
        }
        if (p == begin) {
            // Everything fell right; move one minimal point to the left side.
            split = lo;
            for (std::int32_t i = begin; i < end; ++i) {
                if (coord(points_[order_[i]], axis) == split) {
                    std::swap(order_[begin], order_[i]);
                    break;
                }
            }
            p = begin + 1;
        } else {
            // Everything fell left; move one maximal point to the right side.
            split = hi;
            for (std::int32_t i = begin; i < end; ++i) {
                if (coord(points_[order_[i]], axis) == split) {
                    std::swap(order_[end - 1], order_[i]);
                    break;
                }
            }
            p = end - 1;
        }
    }

    nodes_[node_index].axis = axis;
    nodes_[node_index].split = split;
    std::int32_t left, right;
    if (axis == 0) {
        left = build(begin, p, min_x, min_y, split, max_y, level + 1);
        right = build(p, end, split, min_y, max_x, max_y, level + 1);
    } else {
        left = build(begin, p, min_x, min_y, max_x, split, level + 1);
        right = build(p, end, min_x, split, max_x, max_y, level + 1);
    }
    nodes_[node_index].left = left;
    nodes_[node_index].right = right;
    return node_index;
}

namespace {

struct BestMatch {
    double value = std::numeric_limits<double>::infinity();  // squared for l2
    std::size_t index = std::numeric_limits<std::size_t>::max();
};

}  // namespace

NearestResult KdTree::nearest(const Point2& query, Metric metric) const {
    QueryStats stats;
    return nearest(query, metric, stats);
}

NearestResult KdTree::nearest(const Point2& query, Metric metric,
                              QueryStats& stats) const {
    if (!is_finite(query)) {
        throw std::invalid_argument("non-finite query point");
    }
    BestMatch best;
    // Explicit stack of node indices, visiting the near child first.
    std::vector<std::pair<std::int32_t, double>> stack;
    stack.reserve(64);
    stack.emplace_back(0, 0.0);
    while (!stack.empty()) {
        const auto [node_index, bound] = stack.back();
        stack.pop_back();
        if (bound > best.value) continue;
        const Node& node = nodes_[static_cast<std::size_t>(node_index)];
        ++stats.nodes_visited;
        if (node.is_leaf()) {
            ++stats.leaves_visited;
            for (std::int32_t i = node.begin; i < node.end; ++i) {
                const std::size_t idx = order_[static_cast<std::size_t>(i)];
                const double d = metric == Metric::euclidean
                                     ? euclidean_sq(points_[idx], query)
                                     : manhattan(points_[idx], query);
                if (d < best.value || (d == best.value && idx < best.index)) {
                    best.value = d;
                    best.index = idx;
                }
            }
            continue;
        }
        const double offset = coord(query, node.axis) - node.split;
        const double far_bound =
            metric == Metric::euclidean ? offset * offset : std::abs(offset);
        const std::int32_t near_child = offset < 0.0 ? node.left : node.right;
        const std::int32_t far_child = offset < 0.0 ? node.right : node.left;
        stack.emplace_back(far_child, far_bound);
        stack.emplace_back(near_child, bound);
    }
    const double distance =
        metric == Metric::euclidean ? std::sqrt(best.value) : best.value;
    return NearestResult{best.index, distance};
}

std::vector<NearestResult> KdTree::nearest_k(const Point2& query, std::size_t k,
                                             Metric metric) const {
    if (!is_finite(query)) {
        throw std::invalid_argument("non-finite query point");
    }
    std::vector<NearestResult> results;
    if (k == 0) return results;
    k = std::min(k, points_.size());

    // Max-heap on (distance, index); the top is the current worst keeper.
    std::priority_queue<std::pair<double, std::size_t>> heap;
    std::vector<std::pair<std::int32_t, double>> stack;
    stack.reserve(64);
    stack.emplace_back(0, 0.0);
    while (!stack.empty()) {
        const auto [node_index, bound] = stack.back();
        stack.pop_back();
        if (heap.size() == k && bound > heap.top().first) continue;
        const Node& node = nodes_[static_cast<std::size_t>(node_index)];
        if (node.is_leaf()) {
            for (std::int32_t i = node.begin; i < node.end; ++i) {
                const std::size_t idx = order_[static_cast<std::size_t>(i)];
                const double d = metric == Metric::euclidean
                                     ? euclidean_sq(points_[idx], query)
                                     : manhattan(points_[idx], query);
                if (heap.size() < k) {
                    heap.emplace(d, idx);
                } else if (std::make_pair(d, idx) < heap.top()) {
                    heap.pop();
                    heap.emplace(d, idx);
                }
            }
            continue;
        }
        const double offset = coord(query, node.axis) - node.split;
        const double far_bound =
            metric == Metric::euclidean ? offset * offset : std::abs(offset);
        const std::int32_t near_child = offset < 0.0 ? node.left : node.right;
        const std::int32_t far_child = offset < 0.0 ? node.right : node.left;
        stack.emplace_back(far_child, far_bound);
        stack.emplace_back(near_child, bound);
    }

    results.resize(heap.size());
    for (std::size_t i = heap.size(); i-- > 0;) {
        const auto [d, idx] = heap.top();
        heap.pop();
        results[i] = NearestResult{
            idx, metric == Metric::euclidean ? std::sqrt(d) : d};
    }
    return results;
}

}  // namespace suitkit
