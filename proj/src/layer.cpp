#include "suitkit/layer.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace suitkit {

bool is_null(const Value& v) {
    return std::holds_alternative<std::monostate>(v);
}

std::optional<double> as_number(const Value& v) {
    if (const auto* d = std::get_if<double>(&v)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    if (const auto* b = std::get_if<bool>(&v)) return *b ? 1.0 : 0.0;
    return std::nullopt;
}

std::string value_to_string(const Value& v) {
    if (std::holds_alternative<std::monostate>(v)) return "";
    if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&v)) {
        char buf[32];
        auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), *d);
        return std::string(buf, end);
    }
    return std::get<std::string>(v);
}

bool AttributeTable::has_column(const std::string& name) const {
    return index_.count(name) != 0;
}

const std::vector<Value>& AttributeTable::column(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) {
        throw std::invalid_argument("no such column '" + name + "'");
    }
    return columns_[it->second];
}

void AttributeTable::add_column(const std::string& name, std::vector<Value> values,
                                bool overwrite) {
    if (!sized_ && names_.empty()) {
        rows_ = values.size();
        sized_ = true;
    }
    if (values.size() != rows_) {
        throw std::invalid_argument("column '" + name + "' has " +
                                    std::to_string(values.size()) + " rows, expected " +
                                    std::to_string(rows_));
    }
    auto it = index_.find(name);
    if (it != index_.end()) {
        if (!overwrite) {
            throw std::invalid_argument("column '" + name + "' already exists");
        }
        columns_[it->second] = std::move(values);
        return;
    }
    index_.emplace(name, names_.size());
    names_.push_back(name);
    columns_.push_back(std::move(values));
}

void AttributeTable::add_numeric_column(const std::string& name,
                                        const std::vector<double>& values,
                                        const std::vector<bool>& nodata_mask,
                                        bool overwrite) {
    std::vector<Value> col(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!nodata_mask.empty() && nodata_mask[i]) {
            col[i] = std::monostate{};
        } else {
            col[i] = values[i];
        }
    }
    add_column(name, std::move(col), overwrite);
}

std::string to_string(GeometryKind kind) {
    switch (kind) {
        case GeometryKind::point: return "point";
        case GeometryKind::line: return "line";
        case GeometryKind::polygon: return "polygon";
    }
    return "unknown";
}

FeatureLayer::FeatureLayer(GeometryKind kind, AttributeTable attributes,
                           std::string crs_tag)
    : kind_(kind), attributes_(std::move(attributes)), crs_tag_(std::move(crs_tag)) {}

namespace {

void check_row_count(const AttributeTable& table, std::size_t geoms) {
    if (table.column_count() > 0 && table.rows() != geoms) {
        throw std::invalid_argument("attribute rows (" + std::to_string(table.rows()) +
                                    ") do not match geometry count (" +
                                    std::to_string(geoms) + ")");
    }
}

}  // namespace

FeatureLayer FeatureLayer::from_points(std::vector<Point2> points,
                                       AttributeTable attributes, std::string crs_tag) {
    check_row_count(attributes, points.size());
    for (const Point2& p : points) {
        if (!is_finite(p)) throw std::invalid_argument("non-finite point coordinate");
    }
    FeatureLayer layer(GeometryKind::point, std::move(attributes), std::move(crs_tag));
    layer.points_ = std::move(points);
    if (layer.attributes_.column_count() == 0) {
        layer.attributes_ = AttributeTable(layer.points_.size());
    }
    return layer;
}

FeatureLayer FeatureLayer::from_lines(std::vector<LineString> lines,
                                      AttributeTable attributes, std::string crs_tag) {
    check_row_count(attributes, lines.size());
    FeatureLayer layer(GeometryKind::line, std::move(attributes), std::move(crs_tag));
    layer.lines_ = std::move(lines);
    if (layer.attributes_.column_count() == 0) {
        layer.attributes_ = AttributeTable(layer.lines_.size());
    }
    return layer;
}

FeatureLayer FeatureLayer::from_polygons(std::vector<Polygon> polygons,
                                         AttributeTable attributes, std::string crs_tag) {
    check_row_count(attributes, polygons.size());
    FeatureLayer layer(GeometryKind::polygon, std::move(attributes), std::move(crs_tag));
    layer.polygons_ = std::move(polygons);
    if (layer.attributes_.column_count() == 0) {
        layer.attributes_ = AttributeTable(layer.polygons_.size());
    }
    return layer;
}

std::size_t FeatureLayer::size() const {
    switch (kind_) {
        case GeometryKind::point: return points_.size();
        case GeometryKind::line: return lines_.size();
        case GeometryKind::polygon: return polygons_.size();
    }
    return 0;
}

const std::vector<Point2>& FeatureLayer::points() const {
    if (kind_ != GeometryKind::point) {
        throw std::logic_error("layer does not hold point geometries");
    }
    return points_;
}

const std::vector<LineString>& FeatureLayer::lines() const {
    if (kind_ != GeometryKind::line) {
        throw std::logic_error("layer does not hold line geometries");
    }
    return lines_;
}

const std::vector<Polygon>& FeatureLayer::polygons() const {
    if (kind_ != GeometryKind::polygon) {
        throw std::logic_error("layer does not hold polygon geometries");
    }
    return polygons_;
}

BoundingBox bbox(const FeatureLayer& layer) {
    if (layer.empty()) {
        throw std::invalid_argument("empty extent");
    }
    bool first = true;
    BoundingBox box{};
    auto absorb = [&](const BoundingBox& b) {
        if (first) {
            box = b;
            first = false;
        } else {
            box.expand(b);
        }
    };
    switch (layer.kind()) {
        case GeometryKind::point:
            for (const auto& p : layer.points()) absorb(bbox_of(p));
            break;
        case GeometryKind::line:
            for (const auto& l : layer.lines()) absorb(bbox_of(l));
            break;
        case GeometryKind::polygon:
            for (const auto& p : layer.polygons()) absorb(bbox_of(p));
            break;
    }
    return box;
}

}  // namespace suitkit
