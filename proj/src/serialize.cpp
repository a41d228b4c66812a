#include "hullkit/serialize.hpp"

#include <fstream>

namespace hullkit {

namespace {

Vector vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + " must be an array");
  Vector v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw SchemaError(std::string(what) + " must contain numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw SchemaError("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("missing field \"") + key + "\"");
  return *it;
}

std::size_t dim_field(const Json& j) {
  const Json& d = field(j, "dim");
  if (!d.is_number_unsigned()) throw SchemaError("\"dim\" must be a non-negative integer");
  return d.get<std::size_t>();
}

// Wraps model validation errors so a bad file never surfaces as a half-built object.
template <class F>
auto validated(F&& build) {
  try {
    return build();
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(std::string("invalid content: ") + e.what());
  }
}

}  // namespace

Json to_json(const VRep& v) {
  Json pts = Json::array();
  for (const auto& p : v.points()) pts.push_back(p);
  return Json{{"dim", v.dim()}, {"points", std::move(pts)}};
}

Json to_json(const HRep& h) {
  Json hs = Json::array();
  for (const auto& hp : h.halfspaces()) hs.push_back(Json{{"normal", hp.normal}, {"offset", hp.offset}});
  return Json{{"dim", h.dim()}, {"halfspaces", std::move(hs)}};
}

VRep vrep_from_json(const Json& j) {
  const std::size_t dim = dim_field(j);
  const Json& pts = field(j, "points");
  if (!pts.is_array()) throw SchemaError("\"points\" must be an array");
  std::vector<Vector> points;
  points.reserve(pts.size());
  for (const auto& p : pts) points.push_back(vector_from_json(p, "point"));
  return validated([&] { return VRep(dim, std::move(points)); });
}

HRep hrep_from_json(const Json& j) {
  const std::size_t dim = dim_field(j);
  const Json& hs = field(j, "halfspaces");
  if (!hs.is_array()) throw SchemaError("\"halfspaces\" must be an array");
  std::vector<Hyperplane> out;
  out.reserve(hs.size());
  for (const auto& h : hs) {
    const Json& off = field(h, "offset");
    if (!off.is_number()) throw SchemaError("\"offset\" must be a number");
    out.push_back(Hyperplane{vector_from_json(field(h, "normal"), "normal"), off.get<double>()});
  }
  return validated([&] { return HRep(dim, std::move(out)); });
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

VRep load_vrep(const std::filesystem::path& path) { return vrep_from_json(read_json_file(path)); }
void save_vrep(const std::filesystem::path& path, const VRep& v) { write_json_file(path, to_json(v)); }
HRep load_hrep(const std::filesystem::path& path) { return hrep_from_json(read_json_file(path)); }
void save_hrep(const std::filesystem::path& path, const HRep& h) { write_json_file(path, to_json(h)); }

}  // namespace hullkit
