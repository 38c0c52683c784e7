// Acceptance suite: every check below guards a core contract of the toolkit
// at a pinned tolerance and prints one PASS/FAIL line. The process exits
// non-zero if any check fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "../unit/oracles.hpp"
#include "suitkit/aggregate.hpp"
#include "suitkit/bench.hpp"
#include "suitkit/grid.hpp"
#include "suitkit/io.hpp"
#include "suitkit/kdtree.hpp"
#include "suitkit/measures.hpp"
#include "suitkit/model.hpp"
#include "suitkit/rescale.hpp"

namespace {

using namespace suitkit;
using Clock = std::chrono::steady_clock;

const std::filesystem::path kFixtures = FIXTURE_DIR;

int g_failures = 0;

void report(int number, const char* title, bool ok, double seconds) {
    std::printf("[%s] criterion %2d: %s (%.2fs)\n", ok ? "PASS" : "FAIL", number,
                title, seconds);
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

template <typename F>
void criterion(int number, const char* title, F&& body) {
    const auto start = Clock::now();
    bool ok = false;
    try {
        ok = body();
    } catch (const std::exception& e) {
        std::printf("    exception: %s\n", e.what());
        ok = false;
    }
    const double seconds =
        std::chrono::duration<double>(Clock::now() - start).count();
    report(number, title, ok, seconds);
}

// 1. KD-tree vs brute force: exact index, distance within 1e-9, both
//    metrics, 1000x1000 across 20 seeds, under 10 seconds.
bool nn_oracle_equivalence(double* elapsed) {
    const auto start = Clock::now();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(1000 + seed);
        const auto targets = oracles::random_points(rng, 1000, 0, 10000);
        const auto sources = oracles::random_points(rng, 1000, 0, 10000);
        const KdTree tree(targets);
        for (const Metric metric : {Metric::euclidean, Metric::manhattan}) {
            for (const Point2& q : sources) {
                const auto got = tree.nearest(q, metric);
                const auto want = oracles::brute_nearest(targets, q, metric);
                if (got.index != want.index) return false;
                if (std::abs(got.distance - want.distance) > 1e-9) return false;
            }
        }
    }
    *elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    return *elapsed < 10.0;
}

// 2. Rasterized line distance stays within (sqrt(2)/2 + 1) * c of the exact
//    point-to-segment distance for 500 random sources.
bool line_distance_error_bound() {
    std::mt19937_64 rng(2222);
    std::vector<Point2> verts = oracles::random_points(rng, 12, 0, 1000);
    for (std::size_t v = 1; v < verts.size(); ++v) {
        if (verts[v] == verts[v - 1]) verts[v].x += 1.0;
    }
    const auto lines = FeatureLayer::from_lines({LineString(verts)});
    const BoundingBox box = bbox(lines);
    const double extent = std::max(box.width(), box.height());
    const double c = extent / 100.0;
    const auto sources =
        FeatureLayer::from_points(oracles::random_points(rng, 500, -100, 1100));
    const MeasurementResult got =
        distance_to_line(sources, lines, c, Metric::euclidean);
    const double bound = (std::sqrt(2.0) / 2.0 + 1.0) * c;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const double exact =
            oracles::exact_polyline_distance({verts}, sources.points()[i]);
        if (std::abs(got.values[i] - exact) > bound) return false;
    }
    return true;
}

// 3. IDW: worked example exact, convex-combination bound on 10,000 random
//    evaluations, and the d=0 branch returns the known value exactly.
bool idw_correctness() {
    AttributeTable t(2);
    t.add_column("z", {Value{10.0}, Value{40.0}});
    const auto known = FeatureLayer::from_points({{1, 0}, {0, 2}}, std::move(t));
    const auto origin = FeatureLayer::from_points({{0, 0}});
    IdwConfig u2;
    u2.power = 2.0;
    if (idw_estimate(origin, known, "z", u2).values[0] != 16.0) return false;

    const auto coincident = FeatureLayer::from_points({{0, 2}});
    if (idw_estimate(coincident, known, "z", u2).values[0] != 40.0) return false;

    std::mt19937_64 rng(333);
    const std::size_t n = 64;
    auto pts = oracles::random_points(rng, n, 0, 100);
    AttributeTable table(n);
    std::vector<Value> zs(n);
    std::vector<double> zvals(n);
    for (std::size_t j = 0; j < n; ++j) {
        zvals[j] = oracles::uniform(rng, -1000, 1000);
        zs[j] = zvals[j];
    }
    table.add_column("z", std::move(zs));
    const auto layer = FeatureLayer::from_points(pts, std::move(table));
    const auto queries =
        FeatureLayer::from_points(oracles::random_points(rng, 10000, 0, 100));
    IdwConfig config;
    config.power = oracles::uniform(rng, 0.5, 4.0);
    config.n_neighbors.reset();
    const MeasurementResult est = idw_estimate(queries, layer, "z", config);
    const double zmin = *std::min_element(zvals.begin(), zvals.end());
    const double zmax = *std::max_element(zvals.begin(), zvals.end());
    for (double v : est.values) {
        if (!(v >= zmin - 1e-9 && v <= zmax + 1e-9)) return false;
    }
    return true;
}

// 4. Jenks: DP optimum equals exhaustive enumeration for 200 random trials
//    with n <= 15, k <= 4; worked example GVF is 121.5/125.5; under 5 s.
bool jenks_exactness(double* elapsed) {
    const auto start = Clock::now();
    const ClassBreaks worked = natural_breaks({1, 2, 3, 10, 11, 12}, 2);
    if (std::abs(worked.gvf - 121.5 / 125.5) > 1e-12) return false;
    if (std::abs(worked.sdam - 125.5) > 1e-12) return false;
    if (std::abs(worked.sdcm - 4.0) > 1e-12) return false;

    std::mt19937_64 rng(444);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 5 + rng() % 11;  // 5..15
        const int k = 2 + int(rng() % 3);      // 2..4
        std::vector<double> values(n);
        for (auto& v : values) v = oracles::uniform(rng, -500, 500);
        const ClassBreaks got = natural_breaks(values, k);
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        const double want = oracles::enumerate_min_sdcm(sorted, k);
        const double scale = std::max(1.0, std::abs(want));
        if (std::abs(got.sdcm - want) > 1e-9 * scale) return false;
    }
    *elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    return *elapsed < 5.0;
}

// 5. Linear rescale identities on 1,000 random values: regular + inverse
//    equals a+b bit-exactly on the 1..9 scale, endpoints map to the scale
//    bounds, and the Pearson correlation with the input is +/-1 to 1e-12.
bool linear_rescale_identities() {
    std::mt19937_64 rng(555);
    std::vector<double> values(1000);
    for (auto& v : values) v = oracles::uniform(rng, -10000, 10000);
    const double a = 1.0, b = 9.0;
    const auto reg = linear_rescale(values, {a, b, LinearScale::Order::regular});
    const auto inv = linear_rescale(values, {a, b, LinearScale::Order::inverse});
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (reg.values[i] + inv.values[i] != a + b) return false;
    }
    const auto lo = std::min_element(values.begin(), values.end()) - values.begin();
    const auto hi = std::max_element(values.begin(), values.end()) - values.begin();
    if (reg.values[lo] != a || reg.values[hi] != b) return false;
    if (inv.values[lo] != b || inv.values[hi] != a) return false;

    auto pearson = [&](const std::vector<double>& y) {
        const double n = double(values.size());
        double mx = 0, my = 0;
        for (std::size_t j = 0; j < values.size(); ++j) {
            mx += values[j];
            my += y[j];
        }
        mx /= n;
        my /= n;
        double sxy = 0, sxx = 0, syy = 0;
        for (std::size_t j = 0; j < values.size(); ++j) {
            sxy += (values[j] - mx) * (y[j] - my);
            sxx += (values[j] - mx) * (values[j] - mx);
            syy += (y[j] - my) * (y[j] - my);
        }
        return sxy / std::sqrt(sxx * syy);
    };
    return std::abs(pearson(reg.values) - 1.0) <= 1e-12 &&
           std::abs(pearson(inv.values) + 1.0) <= 1e-12;
}

// 6. AHP: 1,000 consistent matrices recover their weights to 1e-6 with
//    CR < 1e-9; the circular judgment matrix is flagged; all-ones is uniform.
bool ahp_recovery() {
    std::mt19937_64 rng(666);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 3 + rng() % 7;  // 3..9
        std::vector<double> w(n);
        double total = 0.0;
        for (auto& v : w) {
            v = oracles::uniform(rng, 0.02, 1.0);
            total += v;
        }
        for (auto& v : w) v /= total;
        std::vector<std::vector<double>> entries(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) entries[i][j] = w[i] / w[j];
        }
        const PriorityVector pv = ahp_weights(ComparisonMatrix(std::move(entries)));
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(pv.weights[i] - w[i]) > 1e-6) return false;
        }
        if (!(pv.consistency_ratio < 1e-9)) return false;
    }

    const ComparisonMatrix circular(
        {{1, 7, 1.0 / 5.0}, {1.0 / 7.0, 1, 3}, {5, 1.0 / 3.0, 1}});
    if (!(consistency_ratio(circular) > 0.1)) return false;

    const ComparisonMatrix ones({{1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1},
                                 {1, 1, 1, 1}});
    const PriorityVector pv = ahp_weights(ones);
    for (double w : pv.weights) {
        if (std::abs(w - 0.25) > 1e-12) return false;
    }
    return pv.consistency_ratio == 0.0;
}

// 7. random_ahp: 1,000 samples per n in {3,4,5} all satisfy CR < 0.1 with
//    Saaty-scale entries and unit-sum weights; same seed, same bits.
bool random_ahp_properties() {
    for (const std::size_t n : {3, 4, 5}) {
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            const RandomAhpResult r = random_ahp(n, seed);
            if (!(r.priorities.consistency_ratio < 0.1)) return false;
            double sum = 0.0;
            for (double w : r.priorities.weights) sum += w;
            if (std::abs(sum - 1.0) > 1e-12) return false;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    const double v = r.matrix.at(i, j);
                    if (std::find(kSaatyScale.begin(), kSaatyScale.end(), v) ==
                        kSaatyScale.end()) {
                        return false;
                    }
                }
            }
        }
    }
    const RandomAhpResult a = random_ahp(4, 7);
    const RandomAhpResult b = random_ahp(4, 7);
    return a.matrix.entries() == b.matrix.entries() &&
           a.priorities.weights == b.priorities.weights;
}

// Manual three-stage composition mirroring one criterion of a model.
std::vector<double> compose_criterion(const CriterionSpec& spec,
                                      const FeatureLayer& units) {
    const FeatureLayer data = read_geojson(spec.measure.dataset);
    MeasurementResult measured;
    switch (spec.measure.op) {
        case MeasureOp::distance_to_point:
            measured = distance_to_point(units, data, spec.measure.metric,
                                         spec.measure.rep_point);
            break;
        case MeasureOp::distance_to_line:
            measured = distance_to_line(units, data, spec.measure.cell_size,
                                        spec.measure.metric, spec.measure.rep_point);
            break;
        case MeasureOp::density_of_point:
            measured = density_of_point(units, data, spec.measure.value_column);
            break;
        case MeasureOp::density_of_line:
            measured = density_of_line(units, data, spec.measure.cell_size,
                                       spec.measure.mode);
            break;
        case MeasureOp::idw:
            measured = idw_estimate(units, data, *spec.measure.value_column,
                                    spec.measure.idw, spec.measure.rep_point);
            break;
    }
    switch (spec.transform.op) {
        case TransformSpec::Op::linear:
            return linear_rescale(measured.values, spec.transform.scale).values;
        case TransformSpec::Op::reclassify:
            return reclassify(measured.values, *spec.transform.table);
        case TransformSpec::Op::natural_breaks: {
            const ClassBreaks breaks =
                natural_breaks(measured.values, spec.transform.k);
            std::vector<double> out;
            out.reserve(breaks.assignments.size());
            for (int cls : breaks.assignments) {
                out.push_back(spec.transform.class_scores.empty()
                                  ? double(cls)
                                  : spec.transform.class_scores[std::size_t(cls) - 1]);
            }
            return out;
        }
    }
    return {};
}

// 8. The three committed reference models produce output byte-identical to
//    manual stage-by-stage composition, reading each dataset exactly once.
bool pipeline_composition() {
    for (const char* name : {"model1.json", "model2.json", "model3.json"}) {
        const SuitabilityModel model = parse_model_file((kFixtures / name).string());
        const RunResult run = run_model(model, 1);

        for (const auto& [path, count] : run.report.dataset_reads) {
            if (count != 1) return false;
        }

        FeatureLayer units = read_geojson(model.units_path);
        std::vector<std::vector<double>> columns;
        for (const CriterionSpec& spec : model.criteria) {
            columns.push_back(compose_criterion(spec, units));
        }
        std::vector<double> weights;
        switch (model.aggregation.kind) {
            case AggregationSpec::Kind::explicit_weights:
                weights = model.aggregation.weights;
                break;
            case AggregationSpec::Kind::ahp_matrix:
                weights = ahp_weights(*model.aggregation.matrix).weights;
                break;
            case AggregationSpec::Kind::random_seed:
                weights = random_ahp(model.criteria.size(), model.aggregation.seed)
                              .priorities.weights;
                break;
        }
        const std::vector<double> suit =
            weighted_sum(columns, weights, model.aggregation.normalize);
        units.attributes().add_numeric_column(model.output.column, suit, {});
        if (to_geojson_string(run.layer) != to_geojson_string(units)) return false;
    }
    return true;
}

// 9. bench nn: indexed at least 5x faster than brute force at n=1e5, brute
//    slope ~2 and indexed sub-quadratic on the log-log fit; under 2 minutes.
bool performance_property(double* elapsed) {
    const auto start = Clock::now();
    const auto rows = run_bench(BenchSuite::nn, {1000, 10000, 100000}, 99);
    *elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    const BenchRow& last = rows.back();
    const double speedup = last.brute_seconds / last.indexed_seconds;
    const double brute_slope = loglog_slope(rows, false);
    const double indexed_slope = loglog_slope(rows, true);
    std::printf(
        "    bench nn: speedup at 1e5 = %.1fx, brute slope = %.2f, indexed "
        "slope = %.2f\n",
        speedup, brute_slope, indexed_slope);
    if (speedup < 5.0) return false;
    if (std::abs(brute_slope - 2.0) > 0.3) return false;
    if (indexed_slope > 2.0 - 0.3) return false;
    return *elapsed < 120.0;
}

// 10. GeoJSON round trip preserves a 155-feature layer; ASCII grid emission
//     carries the documented header for the c=100, l=5000, t=4500 transform.
bool format_fidelity() {
    std::mt19937_64 rng(1010);
    std::vector<Polygon> polys;
    AttributeTable table(155);
    std::vector<Value> ids, names, measures;
    for (int i = 0; i < 155; ++i) {
        polys.emplace_back(oracles::random_convex_ring(
            rng, oracles::uniform(rng, 0, 50000), oracles::uniform(rng, 0, 50000),
            oracles::uniform(rng, 10, 400)));
        ids.emplace_back(std::int64_t{100000 + i});
        names.emplace_back("block-group-" + std::to_string(i));
        measures.emplace_back(oracles::uniform(rng, 0, 1));
    }
    table.add_column("id", ids);
    table.add_column("name", names);
    table.add_column("measure", measures);
    const auto layer =
        FeatureLayer::from_polygons(std::move(polys), std::move(table), "EPSG:26917");

    const auto tmp = std::filesystem::temp_directory_path() /
                     "suitkit_acceptance_roundtrip.geojson";
    write_geojson(layer, tmp.string());
    const FeatureLayer back = read_geojson(tmp.string());
    std::filesystem::remove(tmp);

    if (back.size() != 155) return false;
    for (std::size_t i = 0; i < 155; ++i) {
        const auto& a = layer.polygons()[i].exterior();
        const auto& b = back.polygons()[i].exterior();
        if (a.size() != b.size()) return false;
        for (std::size_t v = 0; v < a.size(); ++v) {
            if (std::abs(a[v].x - b[v].x) > 1e-9) return false;
            if (std::abs(a[v].y - b[v].y) > 1e-9) return false;
        }
        if (!(back.attributes().column("id")[i] == layer.attributes().column("id")[i]))
            return false;
        if (!(back.attributes().column("name")[i] ==
              layer.attributes().column("name")[i]))
            return false;
    }

    Grid grid(AffineTransform{100, 5000, 4500}, 2, 2);
    grid.set(0, 0, 1.0);
    const std::string text = to_ascii_grid_string(grid);
    return text.find("xllcorner 5000\n") != std::string::npos &&
           text.find("yllcorner 4300\n") != std::string::npos &&
           text.find("cellsize 100\n") != std::string::npos;
}

}  // namespace

int main() {
    std::printf("suitkit acceptance suite\n");

    criterion(1, "nearest-neighbor oracle equivalence (20 seeds, both metrics)",
              [] {
                  double elapsed = 0.0;
                  return nn_oracle_equivalence(&elapsed);
              });
    criterion(2, "distance-to-line within (sqrt2/2 + 1)*c of exact geometry",
              [] { return line_distance_error_bound(); });
    criterion(3, "IDW worked example, zero-distance branch, convexity",
              [] { return idw_correctness(); });
    criterion(4, "natural breaks equal exhaustive enumeration", [] {
        double elapsed = 0.0;
        return jenks_exactness(&elapsed);
    });
    criterion(5, "linear rescale identities and correlation",
              [] { return linear_rescale_identities(); });
    criterion(6, "AHP weight recovery and consistency flags",
              [] { return ahp_recovery(); });
    criterion(7, "random AHP samples stay consistent and reproducible",
              [] { return random_ahp_properties(); });
    criterion(8, "pipeline runs equal manual composition with single reads",
              [] { return pipeline_composition(); });
    criterion(9, "indexed NN beats brute force 5x at 1e5 with sane scaling", [] {
        double elapsed = 0.0;
        return performance_property(&elapsed);
    });
    criterion(10, "GeoJSON round trip and ASCII grid header fidelity",
              [] { return format_fidelity(); });

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
