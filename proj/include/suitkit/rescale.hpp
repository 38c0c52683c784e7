#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "suitkit/layer.hpp"

namespace suitkit {

struct RangeEntry {
    double low = 0.0;   // inclusive
    double high = 0.0;  // exclusive
    double score = 0.0;
};

/// Lookup table mapping raw values to suitability scores, either by unique
/// category or by half-open [low, high) ranges.
class ReclassifyTable {
public:
    enum class Kind { categorical, range };

    static ReclassifyTable categories(std::map<std::string, double> entries,
                                      std::optional<double> default_score = {});
    static ReclassifyTable ranges(std::vector<RangeEntry> entries,
                                  std::optional<double> default_score = {});

    Kind kind() const { return kind_; }
    const std::map<std::string, double>& category_entries() const { return categories_; }
    const std::vector<RangeEntry>& range_entries() const { return ranges_; }
    std::optional<double> default_score() const { return default_score_; }

    /// Maps one value; throws when unmatched and no default is set.
    double map_value(const Value& value) const;

private:
    ReclassifyTable() = default;
    Kind kind_ = Kind::categorical;
    std::map<std::string, double> categories_;
    std::vector<RangeEntry> ranges_;
    std::optional<double> default_score_;
};

std::vector<double> reclassify(const std::vector<Value>& values,
                               const ReclassifyTable& table);
std::vector<double> reclassify(const std::vector<double>& values,
                               const ReclassifyTable& table);

/// Jenks natural-breaks classification into k classes.
struct ClassBreaks {
    int k = 0;
    std::vector<double> breaks;  // k-1 ascending interior cuts
    double gvf = 0.0;            // (sdam - sdcm) / sdam
    double sdam = 0.0;
    double sdcm = 0.0;
    /// Class of each input value in original order, 1-based.
    std::vector<int> assignments;
};

/// Exact optimum over all contiguous k-partitions of the sorted values,
/// found by dynamic programming. Requires at least k distinct values.
ClassBreaks natural_breaks(const std::vector<double>& values, int k);

/// Classifies new values against existing breaks: class j when
/// breaks[j-2] <= value < breaks[j-1], 1-based.
std::vector<int> classify(const std::vector<double>& values,
                          const std::vector<double>& breaks);

struct LinearScale {
    double lower = 1.0;  // a
    double upper = 9.0;  // b, > a
    enum class Order { regular, inverse };
    Order order = Order::regular;
};

struct LinearResult {
    std::vector<double> values;
    /// Set when the input was constant and everything mapped to (a+b)/2.
    bool constant_input = false;
};

/// Min-max rescale of the values onto [a, b]; the inverse order reverses the
/// mapping so the smallest input lands on b.
LinearResult linear_rescale(const std::vector<double>& values, const LinearScale& scale);

}  // namespace suitkit
