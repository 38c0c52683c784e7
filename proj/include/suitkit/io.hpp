#pragma once

#include <string>

#include "suitkit/grid.hpp"
#include "suitkit/layer.hpp"

namespace suitkit {

struct GeoJsonOptions {
    /// Split Multi* geometries into one feature per part (properties are
    /// duplicated). When false, Multi* inputs are rejected.
    bool explode_multi = false;
};

FeatureLayer read_geojson(const std::string& path, const GeoJsonOptions& options = {});
FeatureLayer read_geojson_string(const std::string& text,
                                 const GeoJsonOptions& options = {});

void write_geojson(const FeatureLayer& layer, const std::string& path);
std::string to_geojson_string(const FeatureLayer& layer);

/// Left join of a CSV table onto the layer's attribute table. Layer rows keep
/// their order; unmatched rows receive nulls. CSV keys must be unique.
FeatureLayer read_csv_join(const FeatureLayer& layer, const std::string& csv_path,
                           const std::string& layer_key, const std::string& csv_key,
                           bool overwrite = false);

void write_ascii_grid(const Grid& grid, const std::string& path);
std::string to_ascii_grid_string(const Grid& grid);

}  // namespace suitkit
