#include "suitkit/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace suitkit {

ReclassifyTable ReclassifyTable::categories(std::map<std::string, double> entries,
                                            std::optional<double> default_score) {
    if (entries.empty()) {
        throw std::invalid_argument("reclassify table has no entries");
    }
    ReclassifyTable table;
    table.kind_ = Kind::categorical;
    table.categories_ = std::move(entries);
    table.default_score_ = default_score;
    return table;
}

ReclassifyTable ReclassifyTable::ranges(std::vector<RangeEntry> entries,
                                        std::optional<double> default_score) {
    if (entries.empty()) {
        throw std::invalid_argument("reclassify table has no entries");
    }
    std::sort(entries.begin(), entries.end(),
              [](const RangeEntry& a, const RangeEntry& b) { return a.low < b.low; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!(entries[i].low < entries[i].high)) {
            throw std::invalid_argument("reclassify range must satisfy low < high");
        }
        if (i > 0 && entries[i].low < entries[i - 1].high) {
            throw std::invalid_argument("reclassify ranges overlap");
        }
    }
    ReclassifyTable table;
    table.kind_ = Kind::range;
    table.ranges_ = std::move(entries);
    table.default_score_ = default_score;
    return table;
}

double ReclassifyTable::map_value(const Value& value) const {
    if (kind_ == Kind::categorical) {
        auto it = categories_.find(value_to_string(value));
        if (it != categories_.end()) return it->second;
    } else if (auto num = as_number(value)) {
        // Entries are sorted and disjoint; find the first with high > value.
        auto it = std::upper_bound(
            ranges_.begin(), ranges_.end(), *num,
            [](double v, const RangeEntry& e) { return v < e.high; });
        if (it != ranges_.end() && *num >= it->low) return it->score;
    }
    if (default_score_) return *default_score_;
    throw std::invalid_argument("value '" + value_to_string(value) +
                                "' matched no reclassify entry");
}

std::vector<double> reclassify(const std::vector<Value>& values,
                               const ReclassifyTable& table) {
    std::vector<double> out;
    out.reserve(values.size());
    for (const Value& v : values) out.push_back(table.map_value(v));
    return out;
}

std::vector<double> reclassify(const std::vector<double>& values,
                               const ReclassifyTable& table) {
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(table.map_value(Value{v}));
    return out;
}

namespace {

double sum_squared_deviation(const std::vector<double>& sorted, std::size_t begin,
                             std::size_t end) {
    const auto count = static_cast<double>(end - begin);
    double mean = 0.0;
    for (std::size_t i = begin; i < end; ++i) mean += sorted[i];
    mean /= count;
    double sse = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const double d = sorted[i] - mean;
        sse += d * d;
    }
    return sse;
}

}  // namespace

ClassBreaks natural_breaks(const std::vector<double>& values, int k) {
    if (k < 2) {
        throw std::invalid_argument("natural breaks needs k >= 2");
    }
    const std::size_t n = values.size();
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("natural breaks input must be finite");
        }
    }

    std::vector<std::size_t> sorted_index(n);
    std::iota(sorted_index.begin(), sorted_index.end(), std::size_t{0});
    std::stable_sort(sorted_index.begin(), sorted_index.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = values[sorted_index[i]];

    std::size_t distinct = n == 0 ? 0 : 1;
    for (std::size_t i = 1; i < n; ++i) {
        if (sorted[i] != sorted[i - 1]) ++distinct;
    }
    if (distinct < static_cast<std::size_t>(k)) {
        throw std::invalid_argument("natural breaks needs at least k distinct values (" +
                                    std::to_string(distinct) + " < " +
                                    std::to_string(k) + ")");
    }

    // Prefix sums give O(1) within-class squared deviation for the DP.
    std::vector<double> s1(n + 1, 0.0), s2(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        s1[i + 1] = s1[i] + sorted[i];
        s2[i + 1] = s2[i] + sorted[i] * sorted[i];
    }
    auto sse = [&](std::size_t begin, std::size_t end) {
        const double sum = s1[end] - s1[begin];
        const auto count = static_cast<double>(end - begin);
        return std::max(0.0, (s2[end] - s2[begin]) - sum * sum / count);
    };

    const auto kk = static_cast<std::size_t>(k);
    constexpr double kInf = std::numeric_limits<double>::infinity();
    // cost[j] after pass m: best SDCM of splitting the first j values into m
    // classes; split[m][j]: start of the last class in that optimum.
    std::vector<double> cost(n + 1, kInf), next(n + 1, kInf);
    std::vector<std::vector<std::size_t>> split(kk + 1,
                                                std::vector<std::size_t>(n + 1, 0));
    for (std::size_t j = 1; j <= n; ++j) cost[j] = sse(0, j);
    for (std::size_t m = 2; m <= kk; ++m) {
        std::fill(next.begin(), next.end(), kInf);
        for (std::size_t j = m; j <= n; ++j) {
            for (std::size_t i = m - 1; i < j; ++i) {
                const double candidate = cost[i] + sse(i, j);
                if (candidate < next[j]) {
                    next[j] = candidate;
                    split[m][j] = i;
                }
            }
        }
        cost.swap(next);
    }

    // Recover class boundaries (start indices of each class).
    std::vector<std::size_t> starts(kk);
    std::size_t j = n;
    for (std::size_t m = kk; m >= 2; --m) {
        starts[m - 1] = split[m][j];
        j = starts[m - 1];
    }
    starts[0] = 0;

    ClassBreaks result;
    result.k = k;
    result.sdam = sum_squared_deviation(sorted, 0, n);
    result.sdcm = 0.0;
    for (std::size_t m = 0; m < kk; ++m) {
        const std::size_t begin = starts[m];
        const std::size_t end = m + 1 < kk ? starts[m + 1] : n;
        result.sdcm += sum_squared_deviation(sorted, begin, end);
    }
    result.gvf = result.sdam > 0.0 ? (result.sdam - result.sdcm) / result.sdam : 1.0;
    result.breaks.reserve(kk - 1);
    for (std::size_t m = 1; m < kk; ++m) {
        result.breaks.push_back(0.5 * (sorted[starts[m] - 1] + sorted[starts[m]]));
    }
    result.assignments.assign(n, 0);
    for (std::size_t m = 0; m < kk; ++m) {
        const std::size_t begin = starts[m];
        const std::size_t end = m + 1 < kk ? starts[m + 1] : n;
        for (std::size_t i = begin; i < end; ++i) {
            result.assignments[sorted_index[i]] = static_cast<int>(m + 1);
        }
    }
    return result;
}

std::vector<int> classify(const std::vector<double>& values,
                          const std::vector<double>& breaks) {
    std::vector<int> classes;
    classes.reserve(values.size());
    for (double v : values) {
        const auto it = std::upper_bound(breaks.begin(), breaks.end(), v);
        classes.push_back(static_cast<int>(it - breaks.begin()) + 1);
    }
    return classes;
}

LinearResult linear_rescale(const std::vector<double>& values,
                            const LinearScale& scale) {
    if (values.empty()) {
        throw std::invalid_argument("linear rescale needs at least one value");
    }
    if (!(scale.lower < scale.upper) || !std::isfinite(scale.lower) ||
        !std::isfinite(scale.upper)) {
        throw std::invalid_argument("scale bounds must be finite with lower < upper");
    }
    double x_min = values[0], x_max = values[0];
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("linear rescale input must be finite");
        }
        x_min = std::min(x_min, v);
        x_max = std::max(x_max, v);
    }

    LinearResult result;
    result.values.reserve(values.size());
    if (x_max == x_min) {
        result.constant_input = true;
        const double mid = 0.5 * (scale.lower + scale.upper);
        result.values.assign(values.size(), mid);
        return result;
    }
    const double span = scale.upper - scale.lower;
    const double denom = x_max - x_min;
    const double bounds_sum = scale.lower + scale.upper;
    for (double v : values) {
        const double regular = scale.lower + (v - x_min) / denom * span;
        result.values.push_back(scale.order == LinearScale::Order::regular
                                    ? regular
                                    : bounds_sum - regular);
    }
    return result;
}

}  // namespace suitkit
