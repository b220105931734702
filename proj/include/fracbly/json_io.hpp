#pragma once

#include <filesystem>

#include <json.hpp>

#include "fracbly/geometry.hpp"

namespace fracbly {

using Json = nlohmann::json;

// Domain descriptors:
//   {"kind": "box", "edges": [1, 1], "offset": [0, 0]}
//   {"kind": "disk", "radius": 1, "center": [0, 0]}
//   {"kind": "ball", "d": 3, "radius": 1, "center": [0, 0, 0]}
//   {"kind": "polygon", "vertices": [[0, 0], [1, 0], [0, 1]], "offset": [0, 0]}
// offset/center are optional and default to the origin.
Domain domain_from_json(const Json& j);
Json domain_to_json(const Domain& domain);

Json geometry_to_json(const GeometrySummary& g);
GeometrySummary geometry_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// "%.17g"
std::string format_double(double x);

}  // namespace fracbly
