#include "suitkit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <stdexcept>

#include "json.hpp"

#include "suitkit/grid.hpp"
#include "suitkit/kdtree.hpp"
#include "suitkit/layer.hpp"
#include "suitkit/measures.hpp"

namespace suitkit {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<Point2> uniform_points(std::size_t n, double extent, std::mt19937_64& rng) {
    std::vector<Point2> pts(n);
    for (auto& p : pts) {
        // 53-bit mantissa draw keeps the stream identical across platforms.
        const double ux = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double uy = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        p = Point2{ux * extent, uy * extent};
    }
    return pts;
}

std::uint64_t fnv_hash_points(const std::vector<Point2>& pts, std::uint64_t h) {
    for (const Point2& p : pts) {
        for (const double v : {p.x, p.y}) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, sizeof(bits));
            h = (h ^ bits) * 1099511628211ULL;
        }
    }
    return h;
}

// Runs fn at least once and repeats until ~50 ms passed, returning seconds
// per run. checksum defeats dead-code elimination.
template <typename F>
double time_run(F&& fn) {
    constexpr double kMinSeconds = 0.05;
    const auto start = Clock::now();
    int reps = 0;
    double elapsed = 0.0;
    do {
        fn();
        ++reps;
        elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    } while (elapsed < kMinSeconds && reps < 1000);
    return elapsed / reps;
}

volatile double g_sink = 0.0;

BenchRow bench_nn(std::size_t n, std::mt19937_64& rng) {
    const double extent = std::sqrt(static_cast<double>(n));
    const std::vector<Point2> targets = uniform_points(n, extent, rng);
    const std::vector<Point2> queries = uniform_points(n, extent, rng);

    BenchRow row;
    row.n = n;
    row.data_checksum =
        fnv_hash_points(queries, fnv_hash_points(targets, 1469598103934665603ULL));
    row.indexed_seconds = time_run([&]() {
        const KdTree tree(targets);
        double acc = 0.0;
        for (const Point2& q : queries) acc += tree.nearest(q).distance;
        g_sink = acc;
    });
    row.brute_seconds = time_run([&]() {
        double acc = 0.0;
        for (const Point2& q : queries) {
            double best = std::numeric_limits<double>::infinity();
            for (const Point2& t : targets) {
                const double dx = q.x - t.x, dy = q.y - t.y;
                best = std::min(best, dx * dx + dy * dy);
            }
            acc += std::sqrt(best);
        }
        g_sink = acc;
    });
    return row;
}

BenchRow bench_idw(std::size_t n, std::mt19937_64& rng) {
    const double extent = std::sqrt(static_cast<double>(n));
    const std::vector<Point2> known = uniform_points(n, extent, rng);
    const std::vector<Point2> queries = uniform_points(n, extent, rng);
    std::vector<double> values(n);
    for (auto& v : values) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 100.0;

    constexpr double kPower = 2.0;
    BenchRow row;
    row.n = n;
    row.data_checksum =
        fnv_hash_points(queries, fnv_hash_points(known, 1469598103934665603ULL));
    row.indexed_seconds = time_run([&]() {
        const KdTree tree(known);
        const std::size_t k = std::min<std::size_t>(IdwConfig::kDefaultNeighbors, n);
        double acc = 0.0;
        for (const Point2& q : queries) {
            const auto neighbors = tree.nearest_k(q, k);
            if (neighbors.front().distance == 0.0) {
                acc += values[neighbors.front().index];
                continue;
            }
            double num = 0.0, den = 0.0;
            for (const auto& nb : neighbors) {
                const double w = std::pow(nb.distance, -kPower);
                num += w * values[nb.index];
                den += w;
            }
            acc += num / den;
        }
        g_sink = acc;
    });
    row.brute_seconds = time_run([&]() {
        double acc = 0.0;
        for (const Point2& q : queries) {
            double num = 0.0, den = 0.0;
            bool exact = false;
            for (std::size_t j = 0; j < n; ++j) {
                const double d = std::hypot(q.x - known[j].x, q.y - known[j].y);
                if (d == 0.0) {
                    acc += values[j];
                    exact = true;
                    break;
                }
                const double w = std::pow(d, -kPower);
                num += w * values[j];
                den += w;
            }
            if (!exact) acc += num / den;
        }
        g_sink = acc;
    });
    return row;
}

BenchRow bench_density(std::size_t n, std::mt19937_64& rng) {
    const double extent = std::sqrt(static_cast<double>(n));
    const std::vector<Point2> target_points = uniform_points(n, extent, rng);
    const std::vector<Point2> centers = uniform_points(n, extent, rng);
    const double half = 0.75;  // zone half-side in map units

    std::vector<Polygon> zones;
    zones.reserve(n);
    for (const Point2& c : centers) {
        zones.emplace_back(std::vector<Point2>{{c.x - half, c.y - half},
                                               {c.x + half, c.y - half},
                                               {c.x + half, c.y + half},
                                               {c.x - half, c.y + half},
                                               {c.x - half, c.y - half}});
    }
    const FeatureLayer zone_layer = FeatureLayer::from_polygons(std::move(zones));
    const FeatureLayer targets = FeatureLayer::from_points(target_points);

    BenchRow row;
    row.n = n;
    row.data_checksum = fnv_hash_points(
        target_points, fnv_hash_points(centers, 1469598103934665603ULL));
    row.indexed_seconds = time_run([&]() {
        const MeasurementResult r = density_of_point(zone_layer, targets);
        double acc = 0.0;
        for (double v : r.values) acc += v;
        g_sink = acc;
    });
    row.brute_seconds = time_run([&]() {
        double acc = 0.0;
        for (const Polygon& zone : zone_layer.polygons()) {
            double count = 0.0;
            for (const Point2& t : target_points) {
                if (contains(zone, t)) count += 1.0;
            }
            acc += count / zone.area();
        }
        g_sink = acc;
    });
    return row;
}

}  // namespace

BenchSuite bench_suite_from_name(const std::string& name) {
    if (name == "nn") return BenchSuite::nn;
    if (name == "idw") return BenchSuite::idw;
    if (name == "density") return BenchSuite::density;
    throw std::invalid_argument("unknown bench suite '" + name + "'");
}

std::vector<BenchRow> run_bench(BenchSuite suite, const std::vector<std::size_t>& sizes,
                                std::uint64_t seed) {
    if (sizes.empty()) {
        throw std::invalid_argument("bench needs at least one size");
    }
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        if (sizes[i] <= sizes[i - 1]) {
            throw std::invalid_argument("bench sizes must be ascending");
        }
    }
    std::vector<BenchRow> rows;
    rows.reserve(sizes.size());
    for (std::size_t n : sizes) {
        // Fresh deterministic stream per size: runs with a shared prefix of
        // sizes see identical datasets.
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * n));
        switch (suite) {
            case BenchSuite::nn:
                rows.push_back(bench_nn(n, rng));
                break;
            case BenchSuite::idw:
                rows.push_back(bench_idw(n, rng));
                break;
            case BenchSuite::density:
                rows.push_back(bench_density(n, rng));
                break;
        }
    }
    return rows;
}

double loglog_slope(const std::vector<BenchRow>& rows, bool indexed) {
    if (rows.size() < 2) {
        throw std::invalid_argument("slope needs at least two sizes");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(rows.size());
    for (const BenchRow& row : rows) {
        const double x = std::log(static_cast<double>(row.n));
        const double y = std::log(indexed ? row.indexed_seconds : row.brute_seconds);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string bench_table_json(BenchSuite suite, const std::vector<BenchRow>& rows,
                             std::uint64_t seed) {
    nlohmann::json doc;
    switch (suite) {
        case BenchSuite::nn: doc["suite"] = "nn"; break;
        case BenchSuite::idw: doc["suite"] = "idw"; break;
        case BenchSuite::density: doc["suite"] = "density"; break;
    }
    doc["seed"] = seed;
    doc["rows"] = nlohmann::json::array();
    for (const BenchRow& row : rows) {
        doc["rows"].push_back({{"n", row.n},
                               {"indexed_seconds", row.indexed_seconds},
                               {"brute_seconds", row.brute_seconds},
                               {"ratio", row.ratio()},
                               {"data_checksum", row.data_checksum}});
    }
    if (rows.size() >= 2) {
        doc["indexed_loglog_slope"] = loglog_slope(rows, true);
        doc["brute_loglog_slope"] = loglog_slope(rows, false);
    }
    doc["assertion_applies"] = rows.back().n >= kBenchAssertFloor;
    doc["indexed_faster_at_largest"] = bench_assertion_holds(rows);
    return doc.dump(2);
}

bool bench_assertion_holds(const std::vector<BenchRow>& rows) {
    const BenchRow& last = rows.back();
    if (last.n < kBenchAssertFloor) return true;  // below the assertion floor
    return last.indexed_seconds < last.brute_seconds;
}

}  // namespace suitkit
