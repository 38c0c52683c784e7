#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "suitkit/geometry.hpp"

namespace suitkit {

/// One attribute cell. std::monostate marks nodata/null.
using Value = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

bool is_null(const Value& v);
std::optional<double> as_number(const Value& v);
/// Canonical text form, used for join keys and categorical lookups.
std::string value_to_string(const Value& v);

/// Column-ordered attribute table. Column names are unique; every column
/// has exactly one entry per feature row.
class AttributeTable {
public:
    AttributeTable() = default;
    explicit AttributeTable(std::size_t rows) : rows_(rows), sized_(true) {}

    std::size_t rows() const { return rows_; }
    std::size_t column_count() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

    bool has_column(const std::string& name) const;
    const std::vector<Value>& column(const std::string& name) const;
    void add_column(const std::string& name, std::vector<Value> values,
                    bool overwrite = false);
    void add_numeric_column(const std::string& name, const std::vector<double>& values,
                            const std::vector<bool>& nodata_mask, bool overwrite = false);

private:
    std::size_t rows_ = 0;
    bool sized_ = false;  // row count pinned at construction
    std::vector<std::string> names_;
    std::vector<std::vector<Value>> columns_;
    std::unordered_map<std::string, std::size_t> index_;
};

enum class GeometryKind { point, line, polygon };

std::string to_string(GeometryKind kind);

/// Homogeneous collection of geometries plus an attribute table with one
/// row per geometry. Immutable geometry; columns may be appended.
class FeatureLayer {
public:
    static FeatureLayer from_points(std::vector<Point2> points,
                                    AttributeTable attributes = {},
                                    std::string crs_tag = {});
    static FeatureLayer from_lines(std::vector<LineString> lines,
                                   AttributeTable attributes = {},
                                   std::string crs_tag = {});
    static FeatureLayer from_polygons(std::vector<Polygon> polygons,
                                      AttributeTable attributes = {},
                                      std::string crs_tag = {});

    GeometryKind kind() const { return kind_; }
    std::size_t size() const;
    bool empty() const { return size() == 0; }

    const std::vector<Point2>& points() const;
    const std::vector<LineString>& lines() const;
    const std::vector<Polygon>& polygons() const;

    AttributeTable& attributes() { return attributes_; }
    const AttributeTable& attributes() const { return attributes_; }

    const std::string& crs_tag() const { return crs_tag_; }

private:
    FeatureLayer(GeometryKind kind, AttributeTable attributes, std::string crs_tag);

    GeometryKind kind_;
    std::vector<Point2> points_;
    std::vector<LineString> lines_;
    std::vector<Polygon> polygons_;
    AttributeTable attributes_;
    std::string crs_tag_;
};

/// Tight bounds over every vertex of every geometry in the layer.
BoundingBox bbox(const FeatureLayer& layer);

}  // namespace suitkit
