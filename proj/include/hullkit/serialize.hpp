#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "hullkit/polytope.hpp"

namespace hullkit {

using Json = nlohmann::json;

// {"dim": n, "points": [[...], ...]}
Json to_json(const VRep& v);
// {"dim": n, "halfspaces": [{"normal": [...], "offset": r}, ...]}
Json to_json(const HRep& h);

// Throw SchemaError on missing or mistyped fields.
VRep vrep_from_json(const Json& j);
HRep hrep_from_json(const Json& j);

// IoError when the file cannot be opened; ParseError on malformed JSON.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

VRep load_vrep(const std::filesystem::path& path);
void save_vrep(const std::filesystem::path& path, const VRep& v);
HRep load_hrep(const std::filesystem::path& path);
void save_hrep(const std::filesystem::path& path, const HRep& h);

}  // namespace hullkit
