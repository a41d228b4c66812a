#include "hullkit/boundary_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "hullkit/hull_queries.hpp"
#include "hullkit/serialize.hpp"

namespace hullkit {

std::size_t Dataset::column_index(const std::string& name) const {
  const auto it = std::find(column_names.begin(), column_names.end(), name);
  if (it == column_names.end()) throw IndexError("no column named " + name);
  return static_cast<std::size_t>(it - column_names.begin());
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const std::vector<std::string>& op_point_names) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Dataset d;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (!have_header) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (cells[c].empty()) throw ParseError(lineno, c + 1, "empty column name");
        d.column_names.emplace_back(cells[c]);
      }
      have_header = true;
      continue;
    }
    if (cells.size() != d.column_names.size()) {
      throw ParseError(lineno, std::min(cells.size(), d.column_names.size()) + 1,
                       "expected " + std::to_string(d.column_names.size()) + " cells, found " +
                           std::to_string(cells.size()));
    }
    Vector row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto cell = cells[c];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError(lineno, c + 1, "not a number: \"" + std::string(cell) + "\"");
      }
      if (!std::isfinite(v)) throw ParseError(lineno, c + 1, "non-finite value");
      row[c] = v;
    }
    d.rows.push_back(std::move(row));
  }
  if (!have_header) throw ParseError("missing header");
  if (d.rows.empty()) throw ParseError("no data rows");
  for (const auto& name : op_point_names) {
    const auto it = std::find(d.column_names.begin(), d.column_names.end(), name);
    if (it != d.column_names.end()) d.op_point_columns.push_back(static_cast<std::size_t>(it - d.column_names.begin()));
  }
  return d;
}

void save_csv(const std::filesystem::path& path, const Dataset& d) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (std::size_t c = 0; c < d.column_names.size(); ++c) out << (c ? "," : "") << d.column_names[c];
  out << '\n';
  char buf[32];
  for (const auto& r : d.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      const auto res = std::to_chars(buf, buf + sizeof buf, r[c]);
      out << (c ? "," : "") << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<OpPointGroup> group_by_operating_point(const Dataset& d) {
  if (d.op_point_columns.empty()) throw DimensionError("group_by_operating_point: no operating-point columns");
  std::map<Vector, std::vector<Vector>> groups;
  for (const auto& r : d.rows) {
    Vector key;
    for (std::size_t c : d.op_point_columns) key.push_back(r.at(c));
    groups[key].push_back(r);
  }
  std::vector<OpPointGroup> out;
  for (auto& [k, rows] : groups) out.push_back({k, std::move(rows)});
  return out;
}

Vector BoundaryModel::normalize(std::span<const double> raw) const {
  if (raw.size() != normalization.size()) throw DimensionError("normalize: dimension mismatch");
  Vector x(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) x[i] = (raw[i] - normalization[i].offset) / normalization[i].scale;
  return x;
}

Vector BoundaryModel::denormalize(std::span<const double> x) const {
  if (x.size() != normalization.size()) throw DimensionError("denormalize: dimension mismatch");
  Vector raw(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) raw[i] = x[i] * normalization[i].scale + normalization[i].offset;
  return raw;
}

bool BoundaryModel::contains_raw(std::span<const double> raw) const { return contains(vrep, normalize(raw)).inside; }

BoundaryModel build_boundary_model(const std::vector<Vector>& rows, const std::vector<std::size_t>& input_columns,
                                   bool prune, bool normalize, std::string name, Vector op_point_key) {
  const std::size_t n = input_columns.size();
  if (n == 0) throw DimensionError("build_boundary_model: no input columns");
  std::set<Vector> unique;
  for (const auto& r : rows) {
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (input_columns[i] >= r.size()) throw IndexError("build_boundary_model: input column out of range");
      x[i] = r[input_columns[i]];
    }
    unique.insert(std::move(x));
  }
  if (unique.size() < n + 1) {
    throw TooFewPoints("build_boundary_model: " + std::to_string(unique.size()) + " unique points for dimension " +
                       std::to_string(n));
  }
  std::vector<ColumnScaling> scaling(n);
  if (normalize) {
    for (std::size_t i = 0; i < n; ++i) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& x : unique) {
        lo = std::min(lo, x[i]);
        hi = std::max(hi, x[i]);
      }
      if (!(hi > lo)) throw DegenerateError("build_boundary_model: column " + std::to_string(i) + " is constant");
      scaling[i] = {0.5 * (hi + lo), 0.5 * (hi - lo)};
    }
  }
  std::vector<Vector> pts;
  pts.reserve(unique.size());
  for (const auto& x : unique) {
    Vector p(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = (x[i] - scaling[i].offset) / scaling[i].scale;
      if (normalize) p[i] = std::clamp(p[i], -1.0, 1.0);
    }
    pts.push_back(std::move(p));
  }
  VRep v(n, std::move(pts));
  if (affine_rank(v.points()) < n) throw DegenerateError("build_boundary_model: inputs are not full-dimensional");
  if (prune) v = extreme_points(v);
  return BoundaryModel{std::move(name), input_columns, std::move(op_point_key), std::move(v), prune, std::nullopt,
                       std::move(scaling), {}, {}};
}

void attach_hrep(BoundaryModel& model, HRep h, std::uint64_t seed, std::size_t probes) {
  if (h.dim() != model.vrep.dim()) throw DimensionError("attach_hrep: dimension mismatch");
  std::mt19937_64 rng(seed);
  const auto& v = model.vrep;
  // Probes lie on rays from the centroid through random points, at 0.5x to 1.5x.
  Vector centroid(v.dim(), 0.0);
  for (const auto& p : v.points()) {
    for (std::size_t j = 0; j < v.dim(); ++j) centroid[j] += p[j] / static_cast<double>(v.size());
  }
  model.validation_queries.clear();
  model.validation_inside.clear();
  for (std::size_t q = 0; q < probes; ++q) {
    const auto& anchor = v[static_cast<std::size_t>(uniform01(rng) * static_cast<double>(v.size()))];
    const double stretch = 0.5 + uniform01(rng);
    Vector x(v.dim());
    for (std::size_t j = 0; j < v.dim(); ++j) x[j] = centroid[j] + stretch * (anchor[j] - centroid[j]);
    const bool in_v = contains(v, x).inside;
    if (hrep_contains(h, x) != in_v) throw Error("attach_hrep: H-rep disagrees with the V-rep on a probe point");
    model.validation_queries.push_back(std::move(x));
    model.validation_inside.push_back(in_v);
  }
  model.cached_hrep = std::move(h);
}

void save_model(const BoundaryModel& m, const std::filesystem::path& path) {
  Json norm = Json::array();
  for (const auto& s : m.normalization) norm.push_back(Json{{"offset", s.offset}, {"scale", s.scale}});
  Json j{{"schema_version", kModelSchemaVersion},
         {"name", m.name},
         {"input_columns", m.input_columns},
         {"op_point_key", m.op_point_key},
         {"pruned", m.pruned},
         {"normalization", std::move(norm)},
         {"vrep", to_json(m.vrep)},
         {"cached_hrep", m.cached_hrep ? to_json(*m.cached_hrep) : Json(nullptr)}};
  Json val = Json::array();
  for (std::size_t i = 0; i < m.validation_queries.size(); ++i) {
    val.push_back(Json{{"query", m.validation_queries[i]}, {"inside", static_cast<bool>(m.validation_inside[i])}});
  }
  j["validation"] = std::move(val);
  write_json_file(path, j);
}

namespace {

const Json& need(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("model file: missing field \"") + key + "\"");
  return *it;
}

template <class T>
T need_as(const Json& j, const char* key) {
  try {
    return need(j, key).get<T>();
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("model file: bad field \"") + key + "\": " + e.what());
  }
}

}  // namespace

BoundaryModel load_model(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  if (!j.is_object()) throw SchemaError("model file: top level must be an object");
  const int version = need_as<int>(j, "schema_version");
  if (version != kModelSchemaVersion) {
    throw SchemaError("model file: schema_version " + std::to_string(version) + " is not supported");
  }
  auto inputs = need_as<std::vector<std::size_t>>(j, "input_columns");
  VRep v = vrep_from_json(need(j, "vrep"));
  std::vector<ColumnScaling> scaling;
  const Json& norm = need(j, "normalization");
  if (!norm.is_array()) throw SchemaError("model file: normalization must be an array");
  for (const auto& s : norm) scaling.push_back({need_as<double>(s, "offset"), need_as<double>(s, "scale")});

  BoundaryModel m{need_as<std::string>(j, "name"), std::move(inputs), need_as<Vector>(j, "op_point_key"),
                  std::move(v), need_as<bool>(j, "pruned"), std::nullopt, std::move(scaling), {}, {}};
  if (m.vrep.dim() != m.input_columns.size() || m.normalization.size() != m.input_columns.size()) {
    throw SchemaError("model file: dimension mismatch between vrep, inputs and normalization");
  }
  for (const auto& s : m.normalization) {
    if (!(s.scale > 0.0) || !std::isfinite(s.offset)) throw SchemaError("model file: invalid normalization");
  }
  const bool normalized = std::any_of(m.normalization.begin(), m.normalization.end(),
                                      [](const ColumnScaling& s) { return s != ColumnScaling{}; });
  if (normalized) {
    for (std::size_t c = 0; c < m.vrep.dim(); ++c) {
      double lo = HUGE_VAL, hi = -HUGE_VAL;
      for (const auto& p : m.vrep.points()) {
        lo = std::min(lo, p[c]);
        hi = std::max(hi, p[c]);
      }
      if (std::abs(lo + 1.0) > kGeomEps || std::abs(hi - 1.0) > kGeomEps) {
        throw SchemaError("model file: normalized column does not span [-1, 1]");
      }
    }
  }
  if (const Json& h = need(j, "cached_hrep"); !h.is_null()) m.cached_hrep = hrep_from_json(h);
  const Json& val = need(j, "validation");
  if (!val.is_array()) throw SchemaError("model file: validation must be an array");
  for (const auto& e : val) {
    m.validation_queries.push_back(need_as<Vector>(e, "query"));
    m.validation_inside.push_back(need_as<bool>(e, "inside"));
  }
  if (m.cached_hrep) {
    for (std::size_t i = 0; i < m.validation_queries.size(); ++i) {
      const auto& q = m.validation_queries[i];
      if (q.size() != m.vrep.dim()) throw SchemaError("model file: validation query dimension mismatch");
      if (hrep_contains(*m.cached_hrep, q) != m.validation_inside[i] ||
          contains(m.vrep, q).inside != m.validation_inside[i]) {
        throw SchemaError("model file: cached H-rep disagrees with the V-rep on validation query " + std::to_string(i));
      }
    }
  }
  return m;
}

std::vector<std::string> engine_input_names(std::size_t n_inputs) {
  static const std::vector<std::string> all = {"MAINSOI", "FUELPRESS", "VGTPOS",   "EGRPOS",   "MAINFUEL",
                                               "EGRMF",   "AFR",       "VGTSPEED", "PEAKPRESS"};
  if (n_inputs != 4 && n_inputs != 7 && n_inputs != 9) {
    throw DimensionError("engine inputs must be 4, 7 or 9");
  }
  return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_inputs)};
}

double BsfcModel::eval(std::span<const double> x) const {
  double quad = 0.0, proj = 0.0;
  for (std::size_t j = 0; j < mid.size(); ++j) {
    const double d = (x[j] - mid[j]) / half[j] - center[j];
    quad += weights[j] * d * d;
    proj += coupling[j] * d;
  }
  return base + quad + proj * proj;
}

Vector BsfcModel::grad(std::span<const double> x) const {
  const std::size_t n = mid.size();
  Vector dz(n);
  double proj = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    dz[j] = (x[j] - mid[j]) / half[j] - center[j];
    proj += coupling[j] * dz[j];
  }
  Vector g(n);
  for (std::size_t j = 0; j < n; ++j) g[j] = (2.0 * weights[j] * dz[j] + 2.0 * proj * coupling[j]) / half[j];
  return g;
}

namespace {

struct SignalRange {
  double lo, hi;
};

// Physical ranges for MAINSOI..PEAKPRESS.
constexpr SignalRange kSignalRanges[] = {{-12.0, 6.0},   {40.0, 180.0},  {8.0, 22.0},           {0.0, 1.0},  {5.0, 70.0},
                                         {0.0, 0.45},    {14.5, 45.0},   {40000.0, 160000.0},   {6.0, 18.0}};

constexpr double kOpPoints[7][2] = {{1000, 60}, {1250, 120}, {1500, 180}, {1750, 240},
                                    {2000, 300}, {2250, 360}, {2500, 420}};
constexpr std::size_t kRowsPerOpPoint = 125;

}  // namespace

SynthEngine synth_engine(std::uint64_t seed, std::size_t n_inputs) {
  const auto names = engine_input_names(n_inputs);
  std::mt19937_64 rng(seed);
  auto u01 = [&] { return uniform01(rng); };
  auto gauss = [&] {
    const double u1 = 1.0 - u01();
    const double u2 = u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  };

  SynthEngine out;
  out.data.column_names = names;
  out.data.column_names.push_back("SPEED");
  out.data.column_names.push_back("BTQ");
  out.data.column_names.push_back("BSFC");
  out.data.op_point_columns = {n_inputs, n_inputs + 1};

  for (std::size_t p = 0; p < 7; ++p) {
    const double load = static_cast<double>(p) / 6.0;
    BsfcModel model;
    model.op_point_key = {kOpPoints[p][0], kOpPoints[p][1]};
    for (std::size_t j = 0; j < n_inputs; ++j) {
      const auto [lo, hi] = kSignalRanges[j];
      const double span = hi - lo;
      const double centre = lo + span * (0.25 + 0.5 * load + 0.1 * (u01() - 0.5));
      const double half = span * (0.12 + 0.08 * u01());
      model.mid.push_back(centre);
      model.half.push_back(half);
      model.center.push_back(-1.2 + 2.4 * u01());
      model.weights.push_back(4.0 + 16.0 * u01());
      model.coupling.push_back(1.5 * (u01() - 0.5));
    }
    model.base = 195.0 + 25.0 * u01() + 15.0 * (load - 0.5) * (load - 0.5);

    std::vector<Vector> inputs(kRowsPerOpPoint, Vector(n_inputs));
    double fmin = HUGE_VAL, fmax = -HUGE_VAL;
    Vector smooth(kRowsPerOpPoint);
    for (std::size_t r = 0; r < kRowsPerOpPoint; ++r) {
      Vector u(n_inputs);
      for (auto& e : u) e = u01();
      for (std::size_t j = 0; j < n_inputs; ++j) {
        // Mild correlation with the previous signal; z stays in [-1, 1].
        const double z = 2.0 * (0.8 * u[j] + 0.2 * u[(j + n_inputs - 1) % n_inputs]) - 1.0;
        inputs[r][j] = model.mid[j] + model.half[j] * z;
      }
      smooth[r] = model.eval(inputs[r]);
      fmin = std::min(fmin, smooth[r]);
      fmax = std::max(fmax, smooth[r]);
    }
    const double sigma = 0.01 * (fmax - fmin);
    for (std::size_t r = 0; r < kRowsPerOpPoint; ++r) {
      Vector row = inputs[r];
      row.push_back(kOpPoints[p][0]);
      row.push_back(kOpPoints[p][1]);
      row.push_back(smooth[r] + sigma * gauss());
      out.data.rows.push_back(std::move(row));
    }
    out.responses.push_back(std::move(model));
  }
  return out;
}

Dataset synth_engine_dataset(std::uint64_t seed, std::size_t n_inputs) { return synth_engine(seed, n_inputs).data; }

Objective bsfc_objective(const BsfcModel& bsfc, const BoundaryModel& model) {
  const std::size_t n = model.vrep.dim();
  if (bsfc.mid.size() != n) throw DimensionError("bsfc_objective: dimension mismatch");
  Objective f;
  f.dim = n;
  f.eval = [bsfc, scaling = model.normalization](std::span<const double> x) {
    Vector raw(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) raw[i] = x[i] * scaling[i].scale + scaling[i].offset;
    return bsfc.eval(raw);
  };
  f.grad = [bsfc, scaling = model.normalization](std::span<const double> x) {
    Vector raw(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) raw[i] = x[i] * scaling[i].scale + scaling[i].offset;
    Vector g = bsfc.grad(raw);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= scaling[i].scale;
    return g;
  };
  return f;
}

}  // namespace hullkit
