#include "suitkit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace suitkit {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed for '" + path + "'");
    }
}

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

Point2 parse_position(const json& coords, const char* what) {
    if (!coords.is_array() || coords.size() < 2 || !coords[0].is_number() ||
        !coords[1].is_number()) {
        throw std::runtime_error(std::string(what) + ": expected numeric [x, y]");
    }
    const Point2 p{coords[0].get<double>(), coords[1].get<double>()};
    if (!is_finite(p)) {
        throw std::runtime_error(std::string(what) + ": non-finite coordinate");
    }
    return p;
}

std::vector<Point2> parse_ring(const json& arr, const char* what) {
    std::vector<Point2> ring;
    if (!arr.is_array()) {
        throw std::runtime_error(std::string(what) + ": expected coordinate array");
    }
    ring.reserve(arr.size());
    for (const auto& c : arr) ring.push_back(parse_position(c, what));
    return ring;
}

Value parse_property(const json& v, const std::string& key) {
    if (v.is_null()) return std::monostate{};
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_unsigned()) return static_cast<std::int64_t>(v.get<std::uint64_t>());
    if (v.is_number_float()) return v.get<double>();
    if (v.is_string()) return v.get<std::string>();
    throw std::runtime_error("property '" + key + "' has unsupported type (" +
                             std::string(v.type_name()) + ")");
}

json value_to_json(const Value& v) {
    if (std::holds_alternative<std::monostate>(v)) return nullptr;
    if (const auto* b = std::get_if<bool>(&v)) return *b;
    if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
    if (const auto* d = std::get_if<double>(&v)) return *d;
    return std::get<std::string>(v);
}

// Coordinates are emitted at nine decimal places.
double round_coordinate(double v) {
    if (std::abs(v) >= 1e15) return v;
    return std::round(v * 1e9) / 1e9;
}

struct ParsedGeometry {
    // Exactly one of these is filled per part.
    std::vector<Point2> points;
    std::vector<LineString> lines;
    std::vector<Polygon> polygons;
    GeometryKind kind = GeometryKind::point;
};

Polygon polygon_from_rings(const json& rings, const char* what) {
    if (!rings.is_array() || rings.empty()) {
        throw std::runtime_error(std::string(what) + ": polygon needs rings");
    }
    std::vector<Point2> exterior = parse_ring(rings[0], what);
    std::vector<std::vector<Point2>> holes;
    for (std::size_t r = 1; r < rings.size(); ++r) {
        holes.push_back(parse_ring(rings[r], what));
    }
    return Polygon(std::move(exterior), std::move(holes));
}

ParsedGeometry parse_geometry(const json& geom, bool explode_multi,
                              std::size_t feature_index) {
    if (!geom.is_object() || !geom.contains("type")) {
        throw std::runtime_error("feature " + std::to_string(feature_index) +
                                 ": missing geometry type");
    }
    const std::string type = geom.at("type").get<std::string>();
    const std::string what = "feature " + std::to_string(feature_index);
    ParsedGeometry out;
    const json& coords = geom.contains("coordinates") ? geom.at("coordinates") : json();
    if (type == "Point") {
        out.kind = GeometryKind::point;
        out.points.push_back(parse_position(coords, what.c_str()));
    } else if (type == "LineString") {
        out.kind = GeometryKind::line;
        out.lines.emplace_back(parse_ring(coords, what.c_str()));
    } else if (type == "Polygon") {
        out.kind = GeometryKind::polygon;
        out.polygons.push_back(polygon_from_rings(coords, what.c_str()));
    } else if (type == "MultiPoint" || type == "MultiLineString" ||
               type == "MultiPolygon") {
        if (!explode_multi) {
            throw std::runtime_error(what + ": " + type +
                                     " requires the explode option");
        }
        if (!coords.is_array()) {
            throw std::runtime_error(what + ": expected coordinate array");
        }
        if (type == "MultiPoint") {
            out.kind = GeometryKind::point;
            for (const auto& c : coords) {
                out.points.push_back(parse_position(c, what.c_str()));
            }
        } else if (type == "MultiLineString") {
            out.kind = GeometryKind::line;
            for (const auto& part : coords) {
                out.lines.emplace_back(parse_ring(part, what.c_str()));
            }
        } else {
            out.kind = GeometryKind::polygon;
            for (const auto& part : coords) {
                out.polygons.push_back(polygon_from_rings(part, what.c_str()));
            }
        }
    } else {
        throw std::runtime_error(what + ": unsupported geometry type '" + type + "'");
    }
    return out;
}

}  // namespace

FeatureLayer read_geojson_string(const std::string& text,
                                 const GeoJsonOptions& options) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("malformed GeoJSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") {
        throw std::runtime_error("expected a GeoJSON FeatureCollection");
    }

    std::string crs_tag;
    if (doc.contains("crs") && doc["crs"].is_object()) {
        const json& crs = doc["crs"];
        if (crs.contains("properties") && crs["properties"].contains("name")) {
            crs_tag = crs["properties"]["name"].get<std::string>();
        }
    }

    std::vector<Point2> points;
    std::vector<LineString> lines;
    std::vector<Polygon> polygons;
    std::optional<GeometryKind> kind;

    // Columns appear in first-seen order across features.
    std::vector<std::string> column_order;
    std::unordered_map<std::string, std::vector<Value>> columns;
    std::size_t row = 0;
    auto add_row = [&](const json& properties, std::size_t copies) {
        for (std::size_t c = 0; c < copies; ++c) {
            if (properties.is_object()) {
                for (const auto& [key, val] : properties.items()) {
                    auto [it, inserted] = columns.try_emplace(key);
                    if (inserted) {
                        column_order.push_back(key);
                        it->second.assign(row + c, std::monostate{});
                    }
                }
            }
            for (auto& [key, col] : columns) {
                if (properties.is_object() && properties.contains(key)) {
                    col.push_back(parse_property(properties.at(key), key));
                } else {
                    col.push_back(std::monostate{});
                }
            }
        }
        row += copies;
    };

    const json& features = doc.value("features", json::array());
    for (std::size_t i = 0; i < features.size(); ++i) {
        const json& feature = features[i];
        if (!feature.is_object() || !feature.contains("geometry")) {
            throw std::runtime_error("feature " + std::to_string(i) +
                                     ": missing geometry");
        }
        ParsedGeometry geom =
            parse_geometry(feature.at("geometry"), options.explode_multi, i);
        if (kind && *kind != geom.kind) {
            throw std::runtime_error("mixed geometry types (found " +
                                     to_string(geom.kind) + " after " +
                                     to_string(*kind) + ")");
        }
        kind = geom.kind;
        std::size_t parts = 0;
        switch (geom.kind) {
            case GeometryKind::point:
                parts = geom.points.size();
                points.insert(points.end(), geom.points.begin(), geom.points.end());
                break;
            case GeometryKind::line:
                parts = geom.lines.size();
                for (auto& l : geom.lines) lines.push_back(std::move(l));
                break;
            case GeometryKind::polygon:
                parts = geom.polygons.size();
                for (auto& p : geom.polygons) polygons.push_back(std::move(p));
                break;
        }
        add_row(feature.value("properties", json()), parts);
    }
    if (!kind) {
        throw std::runtime_error("FeatureCollection has no features");
    }

    AttributeTable table(row);
    for (const std::string& name : column_order) {
        table.add_column(name, std::move(columns[name]));
    }
    switch (*kind) {
        case GeometryKind::point:
            return FeatureLayer::from_points(std::move(points), std::move(table),
                                             std::move(crs_tag));
        case GeometryKind::line:
            return FeatureLayer::from_lines(std::move(lines), std::move(table),
                                            std::move(crs_tag));
        default:
            return FeatureLayer::from_polygons(std::move(polygons), std::move(table),
                                               std::move(crs_tag));
    }
}

FeatureLayer read_geojson(const std::string& path, const GeoJsonOptions& options) {
    try {
        return read_geojson_string(read_file(path), options);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

namespace {

json ring_to_json(const std::vector<Point2>& ring) {
    json arr = json::array();
    for (const Point2& p : ring) {
        arr.push_back({round_coordinate(p.x), round_coordinate(p.y)});
    }
    return arr;
}

}  // namespace

std::string to_geojson_string(const FeatureLayer& layer) {
    json features = json::array();
    const AttributeTable& table = layer.attributes();
    for (std::size_t i = 0; i < layer.size(); ++i) {
        json props = json::object();
        for (const std::string& name : table.names()) {
            props[name] = value_to_json(table.column(name)[i]);
        }
        json geometry;
        switch (layer.kind()) {
            case GeometryKind::point: {
                const Point2& p = layer.points()[i];
                geometry = {{"type", "Point"},
                            {"coordinates",
                             {round_coordinate(p.x), round_coordinate(p.y)}}};
                break;
            }
            case GeometryKind::line:
                geometry = {{"type", "LineString"},
                            {"coordinates", ring_to_json(layer.lines()[i].vertices())}};
                break;
            case GeometryKind::polygon: {
                const Polygon& poly = layer.polygons()[i];
                json rings = json::array();
                rings.push_back(ring_to_json(poly.exterior()));
                for (const auto& hole : poly.holes()) {
                    rings.push_back(ring_to_json(hole));
                }
                geometry = {{"type", "Polygon"}, {"coordinates", std::move(rings)}};
                break;
            }
        }
        features.push_back({{"type", "Feature"},
                            {"properties", std::move(props)},
                            {"geometry", std::move(geometry)}});
    }
    json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
    if (!layer.crs_tag().empty()) {
        doc["crs"] = {{"type", "name"},
                      {"properties", {{"name", layer.crs_tag()}}}};
    }
    return doc.dump();
}

void write_geojson(const FeatureLayer& layer, const std::string& path) {
    write_file(path, to_geojson_string(layer));
}

namespace {

struct CsvTable {
    std::vector<std::string> names;
    std::vector<std::vector<Value>> columns;
    std::size_t rows = 0;
};

Value parse_csv_cell(const std::string& text) {
    if (text.empty()) return std::monostate{};
    std::int64_t i = 0;
    auto [p1, ec1] = std::from_chars(text.data(), text.data() + text.size(), i);
    if (ec1 == std::errc() && p1 == text.data() + text.size()) return i;
    double d = 0.0;
    auto [p2, ec2] = std::from_chars(text.data(), text.data() + text.size(), d);
    if (ec2 == std::errc() && p2 == text.data() + text.size()) return d;
    return text;
}

// RFC 4180: comma-delimited, double quotes escape fields, "" escapes a quote.
std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                const std::string& path) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    auto end_field = [&]() {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&]() {
        end_field();
        records.push_back(std::move(record));
        record.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"' && field.empty() && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (ch == ',') {
            end_field();
        } else if (ch == '\r') {
            // swallowed; the newline ends the record
        } else if (ch == '\n') {
            end_record();
        } else {
            field.push_back(ch);
            field_started = true;
        }
    }
    if (in_quotes) {
        throw std::runtime_error(path + ": unterminated quoted field");
    }
    if (field_started || !record.empty()) {
        end_record();
    }
    return records;
}

CsvTable read_csv(const std::string& path) {
    const std::string text = read_file(path);
    const auto records = parse_csv(text, path);
    if (records.empty()) {
        throw std::runtime_error(path + ": missing header row");
    }
    CsvTable table;
    table.names = records[0];
    table.columns.resize(table.names.size());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.names.size()) {
            throw std::runtime_error(path + ": row " + std::to_string(r + 1) + " has " +
                                     std::to_string(records[r].size()) +
                                     " fields, expected " +
                                     std::to_string(table.names.size()));
        }
        for (std::size_t c = 0; c < table.names.size(); ++c) {
            table.columns[c].push_back(parse_csv_cell(records[r][c]));
        }
        ++table.rows;
    }
    return table;
}

}  // namespace

FeatureLayer read_csv_join(const FeatureLayer& layer, const std::string& csv_path,
                           const std::string& layer_key, const std::string& csv_key,
                           bool overwrite) {
    const CsvTable csv = read_csv(csv_path);
    const auto key_it = std::find(csv.names.begin(), csv.names.end(), csv_key);
    if (key_it == csv.names.end()) {
        throw std::invalid_argument(csv_path + ": no key column '" + csv_key + "'");
    }
    const std::size_t key_col = static_cast<std::size_t>(key_it - csv.names.begin());

    std::unordered_map<std::string, std::size_t> key_to_row;
    key_to_row.reserve(csv.rows);
    for (std::size_t r = 0; r < csv.rows; ++r) {
        const std::string key = value_to_string(csv.columns[key_col][r]);
        if (!key_to_row.emplace(key, r).second) {
            throw std::invalid_argument(csv_path + ": duplicate key '" + key + "'");
        }
    }

    const auto& layer_keys = layer.attributes().column(layer_key);
    FeatureLayer joined = layer;
    for (std::size_t c = 0; c < csv.names.size(); ++c) {
        if (c == key_col) continue;
        std::vector<Value> col(layer.size(), std::monostate{});
        for (std::size_t i = 0; i < layer.size(); ++i) {
            const auto it = key_to_row.find(value_to_string(layer_keys[i]));
            if (it != key_to_row.end()) {
                col[i] = csv.columns[c][it->second];
            }
        }
        joined.attributes().add_column(csv.names[c], std::move(col), overwrite);
    }
    return joined;
}

std::string to_ascii_grid_string(const Grid& grid) {
    std::ostringstream out;
    out << "ncols " << grid.n_cols() << "\n";
    out << "nrows " << grid.n_rows() << "\n";
    out << "xllcorner " << format_double(grid.transform().left) << "\n";
    out << "yllcorner "
        << format_double(grid.transform().top -
                         grid.n_rows() * grid.transform().cell_size)
        << "\n";
    out << "cellsize " << format_double(grid.transform().cell_size) << "\n";
    out << "NODATA_value " << format_double(grid.nodata()) << "\n";
    for (int row = 0; row < grid.n_rows(); ++row) {
        for (int col = 0; col < grid.n_cols(); ++col) {
            if (col > 0) out << ' ';
            out << format_double(grid.at(col, row));
        }
        out << "\n";
    }
    return out.str();
}

void write_ascii_grid(const Grid& grid, const std::string& path) {
    write_file(path, to_ascii_grid_string(grid));
}

}  // namespace suitkit
