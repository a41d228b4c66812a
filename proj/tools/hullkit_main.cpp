// hullkit command-line front end.
//
// Exit codes: 0 success, 1 conversion timeout, 2 usage error, 3 I/O error.

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hullkit/bench.hpp"
#include "hullkit/boundary_io.hpp"
#include "hullkit/hull_queries.hpp"
#include "hullkit/serialize.hpp"

using namespace hullkit;
namespace fs = std::filesystem;

namespace {

constexpr int kExitTimeout = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : Error {
  using Error::Error;
};

Vector parse_coords(const std::string& text) {
  Vector out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      throw UsageError("bad coordinate \"" + cell + "\"");
    }
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (used != cell.size() || !std::isfinite(v)) throw UsageError("bad coordinate \"" + cell + "\"");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty coordinate list");
  return out;
}

fs::path sibling(const fs::path& p, const std::string& suffix) {
  fs::path out = p;
  out.replace_filename(p.stem().string() + suffix);
  return out;
}

void write_text(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw IoError("cannot write " + out);
  f << text;
  if (!f) throw IoError("write failed for " + out);
}

TableFormat parse_format(const std::string& s) { return s == "markdown" ? TableFormat::Markdown : TableFormat::Csv; }

VrepMethod parse_method(const std::string& s) { return s == "fw" ? VrepMethod::FrankWolfe : VrepMethod::ProjectedGradient; }

bool is_model_file(const Json& j) { return j.is_object() && j.contains("schema_version"); }

struct Common {
  std::uint64_t seed = 1;
  double timeout_s = 60.0;
  std::string format = "csv";
  std::string out;
  bool prune = false;
  bool no_normalize = false;
};

void add_seed(CLI::App* c, Common& o) { c->add_option("--seed", o.seed, "PRNG seed"); }
void add_timeout(CLI::App* c, Common& o) {
  c->add_option("--timeout-s", o.timeout_s, "Timeout in seconds")->check(CLI::PositiveNumber);
}
void add_table(CLI::App* c, Common& o) {
  c->add_option("--format", o.format, "Table format")->check(CLI::IsMember({"csv", "markdown"}));
  c->add_option("--out", o.out, "Write the table here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polytope representation toolkit: V/H conversion, LP membership, hull optimization"};
  app.require_subcommand(1);
  Common o;
  const unsigned threads = thread_cap_from_env();

  // gen
  auto* gen = app.add_subcommand("gen", "Generate point sets, reference polytopes or engine data");
  std::string gen_kind;
  std::size_t gen_m = 50, gen_n = 3, gen_inputs = 4;
  gen->add_option("kind", gen_kind, "random | cube | cross | engine")
      ->required()
      ->check(CLI::IsMember({"random", "cube", "cross", "engine"}));
  gen->add_option("--m", gen_m, "Number of points (random)")->check(CLI::PositiveNumber);
  gen->add_option("--n", gen_n, "Dimension")->check(CLI::Range(1, 20));
  gen->add_option("--inputs", gen_inputs, "Engine inputs (4, 7 or 9)")->check(CLI::IsMember({4, 7, 9}));
  add_seed(gen, o);
  gen->add_option("--out", o.out, "Output path");

  // convert
  auto* convert = app.add_subcommand("convert", "Convert a V-rep file to an H-rep file by facet enumeration");
  std::string convert_in;
  convert->add_option("vrep", convert_in, "V-rep JSON")->required();
  add_timeout(convert, o);
  convert->add_option("--out", o.out, "H-rep output (default <stem>.hrep.json)");

  // contains
  auto* cont = app.add_subcommand("contains", "LP membership of query points");
  std::string cont_in, cont_queries_file;
  std::vector<std::string> cont_queries;
  cont->add_option("hull", cont_in, "V-rep JSON or boundary-model JSON")->required();
  cont->add_option("--query", cont_queries, "Comma-separated coordinates (repeatable)");
  cont->add_option("--queries", cont_queries_file, "CSV of query points with a header row");

  // vertices
  auto* verts = app.add_subcommand("vertices", "Classify extreme points and write the pruned V-rep");
  std::string verts_in;
  verts->add_option("vrep", verts_in, "V-rep JSON")->required();
  verts->add_option("--out", o.out, "Pruned output (default <stem>.pruned.json)");

  // optimize
  auto* opt = app.add_subcommand("optimize", "Minimize a linear or squared-distance objective over a hull");
  std::string opt_in, opt_linear, opt_target, opt_method = "both";
  opt->add_option("vrep", opt_in, "V-rep JSON")->required();
  auto* lin = opt->add_option("--linear", opt_linear, "Cost vector c for f(x) = c.x");
  auto* tgt = opt->add_option("--target", opt_target, "Point t for f(x) = |x - t|^2");
  lin->excludes(tgt);
  opt->add_option("--method", opt_method, "pg | fw | hrep | both")->check(CLI::IsMember({"pg", "fw", "hrep", "both"}));
  add_timeout(opt, o);

  // model
  auto* model = app.add_subcommand("model", "Build per-operating-point boundary models from a CSV");
  std::string model_csv, model_dir = "models";
  std::vector<std::string> model_inputs;
  bool model_hrep = false;
  model->add_option("csv", model_csv, "Dataset CSV (SPEED and BTQ columns form the operating point)")->required();
  model->add_option("--inputs", model_inputs, "Input column names (default: all but SPEED, BTQ, BSFC)")->delimiter(',');
  model->add_option("--out-dir", model_dir, "Directory for the model files");
  model->add_flag("--prune", o.prune, "Keep only extreme points");
  model->add_flag("--no-normalize", o.no_normalize, "Store raw coordinates");
  model->add_flag("--hrep", model_hrep, "Also convert and cache the H-rep");
  add_timeout(model, o);

  // bench-conversion
  auto* bconv = app.add_subcommand("bench-conversion", "Time V-to-H conversion over an (m, n) grid");
  std::string bconv_grid = "50x2,50x3,50x4,100x4";
  std::size_t bconv_seeds = 3;
  bconv->add_option("--grid", bconv_grid, "Cells as MxN, comma separated");
  bconv->add_option("--seeds", bconv_seeds, "Seeds per cell")->check(CLI::PositiveNumber);
  add_seed(bconv, o);
  add_timeout(bconv, o);
  add_table(bconv, o);

  // bench-membership
  auto* bmem = app.add_subcommand("bench-membership", "Time LP membership over an (m, n) grid");
  std::string bmem_grid = "50x2,50x5,50x15,1000x9";
  std::size_t bmem_seeds = 3, bmem_queries = 20;
  bmem->add_option("--grid", bmem_grid, "Cells as MxN, comma separated");
  bmem->add_option("--seeds", bmem_seeds, "Seeds per cell")->check(CLI::PositiveNumber);
  bmem->add_option("--queries", bmem_queries, "Queries per seed")->check(CLI::PositiveNumber);
  add_seed(bmem, o);
  add_table(bmem, o);

  // bench-optimize
  auto* bopt = app.add_subcommand("bench-optimize", "Optimize synthetic BSFC over seven boundary models");
  std::size_t bopt_inputs = 4;
  std::string bopt_method = "pg";
  bopt->add_option("--inputs", bopt_inputs, "Engine inputs (4, 7 or 9)")->check(CLI::IsMember({4, 7, 9}));
  bopt->add_option("--method", bopt_method, "V-rep method: pg | fw")->check(CLI::IsMember({"pg", "fw"}));
  bopt->add_flag("--prune", o.prune, "Prune to extreme points first");
  bopt->add_flag("--no-normalize", o.no_normalize, "Skip [-1,1] normalization");
  add_seed(bopt, o);
  add_timeout(bopt, o);
  add_table(bopt, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      if (gen_kind == "random") {
        const std::string path = o.out.empty() ? "random.json" : o.out;
        save_vrep(path, random_point_set(gen_m, gen_n, o.seed));
        std::printf("random %zu %zu %llu %s\n", gen_m, gen_n, static_cast<unsigned long long>(o.seed), path.c_str());
      } else if (gen_kind == "engine") {
        const std::string path = o.out.empty() ? "engine.csv" : o.out;
        const Dataset d = synth_engine_dataset(o.seed, gen_inputs);
        save_csv(path, d);
        std::printf("engine %zu %zu %llu %s\n", d.rows.size(), gen_inputs, static_cast<unsigned long long>(o.seed),
                    path.c_str());
      } else {
        const auto ref = gen_kind == "cube" ? unit_cube(gen_n) : cross_polytope(gen_n);
        const fs::path path = o.out.empty() ? fs::path(gen_kind + std::to_string(gen_n) + ".json") : fs::path(o.out);
        const fs::path hpath = sibling(path, ".hrep.json");
        if (ref.vrep) {
          save_vrep(path, *ref.vrep);
          std::printf("%s %zu %zu - %s\n", gen_kind.c_str(), ref.vrep->size(), gen_n, path.string().c_str());
        }
        if (ref.hrep) {
          save_hrep(hpath, *ref.hrep);
          std::printf("%s-hrep %zu %zu - %s\n", gen_kind.c_str(), ref.hrep->size(), gen_n, hpath.string().c_str());
        }
      }
    } else if (*convert) {
      const VRep v = load_vrep(convert_in);
      ConversionOptions co;
      co.threads = threads;
      co.deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(o.timeout_s));
      try {
        const auto rep = vrep_to_hrep(v, co);
        const fs::path out = o.out.empty() ? sibling(convert_in, ".hrep.json") : fs::path(o.out);
        save_hrep(out, rep.hrep);
        std::printf("%zu facets from %zu points in %.6f s (%llu candidates) -> %s\n", rep.facet_count, v.size(),
                    rep.elapsed, static_cast<unsigned long long>(rep.candidates_examined), out.string().c_str());
      } catch (const TimeoutError&) {
        std::printf("timed out after %.3f s\n", o.timeout_s);
        return kExitTimeout;
      }
    } else if (*cont) {
      const Json j = read_json_file(cont_in);
      std::optional<BoundaryModel> bm;
      std::optional<VRep> v;
      if (is_model_file(j)) {
        bm = load_model(cont_in);
      } else {
        v = vrep_from_json(j);
      }
      std::vector<Vector> queries;
      for (const auto& q : cont_queries) queries.push_back(parse_coords(q));
      if (!cont_queries_file.empty()) {
        const Dataset d = load_csv(cont_queries_file, {});
        queries.insert(queries.end(), d.rows.begin(), d.rows.end());
      }
      if (queries.empty()) throw UsageError("no queries given (use --query or --queries)");
      const std::size_t dim = bm ? bm->input_columns.size() : v->dim();
      for (const auto& q : queries) {
        if (q.size() != dim) {
          throw DimensionError("query has " + std::to_string(q.size()) + " coordinates, hull has " + std::to_string(dim));
        }
      }
      for (const auto& q : queries) {
        const auto t0 = std::chrono::steady_clock::now();
        const bool in = bm ? bm->contains_raw(q) : contains(*v, q).inside;
        const double us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %.1f us\n", in ? "inside" : "outside", us);
      }
    } else if (*verts) {
      const VRep v = load_vrep(verts_in);
      const auto idx = extreme_indices(v, threads);
      std::vector<Vector> pts;
      std::printf("extreme:");
      for (auto i : idx) {
        std::printf(" %zu", i);
        pts.push_back(v[i]);
      }
      std::printf("\n%zu extreme of %zu\n", idx.size(), v.size());
      const fs::path out = o.out.empty() ? sibling(verts_in, ".pruned.json") : fs::path(o.out);
      save_vrep(out, VRep(v.dim(), pts));
      std::printf("pruned -> %s\n", out.string().c_str());
    } else if (*opt) {
      const VRep v = load_vrep(opt_in);
      if (opt_linear.empty() == opt_target.empty()) throw UsageError("give exactly one of --linear or --target");
      const Vector c = parse_coords(opt_linear.empty() ? opt_target : opt_linear);
      if (c.size() != v.dim()) throw DimensionError("objective dimension does not match the hull");
      Objective f;
      f.dim = v.dim();
      if (!opt_linear.empty()) {
        f.eval = [c](std::span<const double> x) { return dot(c, x); };
        f.grad = [c](std::span<const double>) { return c; };
      } else {
        f.eval = [c](std::span<const double> x) {
          double s = 0.0;
          for (std::size_t i = 0; i < c.size(); ++i) s += (x[i] - c[i]) * (x[i] - c[i]);
          return s;
        };
        f.grad = [c](std::span<const double> x) {
          Vector g(c.size());
          for (std::size_t i = 0; i < c.size(); ++i) g[i] = 2.0 * (x[i] - c[i]);
          return g;
        };
      }
      auto report = [](const char* label, const SolveResult& r) {
        std::printf("%s objective %.9g iterations %zu evals %zu time %.6f s converged %s minimizer", label, r.objective,
                    r.iterations, r.fun_evals, r.elapsed, r.converged ? "yes" : "no");
        for (double x : r.minimizer) std::printf(" %.9g", x);
        std::printf("\n");
      };
      if (opt_method == "pg" || opt_method == "both") report("vrep-pg", solve_vrep(f, {}, v, {}, VrepMethod::ProjectedGradient));
      if (opt_method == "fw" || opt_method == "both") report("vrep-fw", solve_vrep(f, {}, v, {}, VrepMethod::FrankWolfe));
      if (opt_method == "hrep" || opt_method == "both") {
        ConversionOptions co;
        co.threads = threads;
        co.deadline = std::chrono::steady_clock::now() +
                      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(o.timeout_s));
        try {
          const auto conv = vrep_to_hrep(v, co);
          std::printf("conversion %zu facets in %.6f s\n", conv.facet_count, conv.elapsed);
          report("hrep", solve_hrep(f, {}, conv.hrep, chebyshev_center(conv.hrep)));
        } catch (const TimeoutError&) {
          std::printf("conversion timed out after %.3f s\n", o.timeout_s);
          return kExitTimeout;
        }
      }
    } else if (*model) {
      const Dataset d = load_csv(model_csv);
      if (d.op_point_columns.empty()) throw UsageError("dataset has no SPEED/BTQ columns");
      std::vector<std::size_t> cols;
      if (model_inputs.empty()) {
        for (std::size_t c = 0; c < d.column_names.size(); ++c) {
          const auto& name = d.column_names[c];
          if (name != "SPEED" && name != "BTQ" && name != "BSFC") cols.push_back(c);
        }
      } else {
        for (const auto& name : model_inputs) {
          try {
            cols.push_back(d.column_index(name));
          } catch (const IndexError& e) {
            throw UsageError(e.what());
          }
        }
      }
      fs::create_directories(model_dir);
      const auto groups = group_by_operating_point(d);
      for (std::size_t g = 0; g < groups.size(); ++g) {
        const std::string name = "op" + std::to_string(g + 1);
        BoundaryModel bm = build_boundary_model(groups[g].rows, cols, o.prune, !o.no_normalize, name, groups[g].key);
        std::string note;
        if (model_hrep) {
          ConversionOptions co;
          co.threads = threads;
          co.deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(o.timeout_s));
          try {
            auto conv = vrep_to_hrep(bm.vrep, co);
            note = " hrep " + std::to_string(conv.facet_count);
            attach_hrep(bm, std::move(conv.hrep), o.seed);
          } catch (const TimeoutError&) {
            note = " hrep timed out";
          }
        }
        const fs::path path = fs::path(model_dir) / (name + ".json");
        save_model(bm, path);
        std::printf("%s points %zu dim %zu%s -> %s\n", name.c_str(), bm.vrep.size(), bm.vrep.dim(), note.c_str(),
                    path.string().c_str());
      }
    } else if (*bconv) {
      ConversionBenchConfig cfg;
      cfg.grid = parse_grid(bconv_grid);
      cfg.seeds = bconv_seeds;
      cfg.seed = o.seed;
      cfg.timeout_s = o.timeout_s;
      cfg.threads = threads;
      write_text(emit_table(bench_conversion(cfg), parse_format(o.format)), o.out);
    } else if (*bmem) {
      MembershipBenchConfig cfg;
      cfg.grid = parse_grid(bmem_grid);
      cfg.seeds = bmem_seeds;
      cfg.seed = o.seed;
      cfg.queries_per_cell = bmem_queries;
      write_text(emit_table(bench_membership(cfg), parse_format(o.format)), o.out);
    } else if (*bopt) {
      OptimizeBenchConfig cfg;
      cfg.n_inputs = bopt_inputs;
      cfg.seed = o.seed;
      cfg.timeout_s = o.timeout_s;
      cfg.prune = o.prune;
      cfg.normalize = !o.no_normalize;
      cfg.threads = threads;
      cfg.method = parse_method(bopt_method);
      write_text(emit_table(bench_optimize(cfg).rows, parse_format(o.format)), o.out);
    }
  } catch (const IoError& e) {
    std::fprintf(stderr, "hullkit: %s\n", e.what());
    return kExitIo;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "hullkit: %s\n", e.what());
    return kExitIo;
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "hullkit: %s\n", e.what());
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "hullkit: %s\n", e.what());
    return kExitIo;
  } catch (const Error& e) {
    // DimensionError, DegenerateError, TooFewPoints and friends: the input does not fit the command.
    std::fprintf(stderr, "hullkit: %s\n", e.what());
    return kExitUsage;
  }
  return 0;
}
