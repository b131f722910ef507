// ncvem: mesh generation, plate solves, convergence studies, patch tests and
// the Morley comparison, on top of the C interface.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ncvem/ncvem.h"

namespace fs = std::filesystem;

namespace {

// Exit status by failure category.
enum Exit : int {
  kOk = 0,
  kUsage = 2,  // bad flags or config values
  kMesh = 3,
  kAssembly = 4,
  kSolver = 5,
  kIo = 6,
  kValidation = 7,  // ran, but a requested check did not hold
  kInternal = 8,
};

int exit_code(ncvem_status s) {
  switch (s) {
    case NCVEM_OK: return kOk;
    case NCVEM_ERR_CONFIG: return kUsage;
    case NCVEM_ERR_MESH: return kMesh;
    case NCVEM_ERR_ASSEMBLY: return kAssembly;
    case NCVEM_ERR_SOLVER:
    case NCVEM_ERR_ZERO_NORM: return kSolver;
    case NCVEM_ERR_IO: return kIo;
    case NCVEM_ERR_INTERNAL: return kInternal;
  }
  return kInternal;
}

struct Failure {
  int code;
  std::string message;
};

void check(ncvem_status s, const std::string& context) {
  if (s != NCVEM_OK)
    throw Failure{exit_code(s), context + ": " + ncvem_status_name(s) + " error: " + ncvem_last_error()};
}

struct RunConfig {
  std::string family = "crisscross";
  int order = 2;
  int n = 0;
  int n_min = 0;
  int n_max = 3;
  double nu = 0.3;
  double rigidity = 1.0;
  std::uint64_t seed = 1;
  double notch = 0.0;  // 0: library default
  double box = -1.0;   // <0: library default
  int quad_degree = 0;
  double tolerance = 1e-8;
  std::string output;
  std::string output_dir;
  std::string matrix;
  bool quiet = false;
};

fs::path resolve_output(const RunConfig& cfg, const std::string& default_name) {
  fs::path path;
  if (!cfg.output.empty()) {
    path = cfg.output;
  } else {
    fs::path dir = cfg.output_dir;
    if (dir.empty()) {
      const char* env = std::getenv("NCVEM_OUTPUT_DIR");
      dir = env && *env ? env : ".";
    }
    path = dir / default_name;
  }
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw Failure{kIo, "cannot create directory " + path.parent_path().string() + ": " + ec.message()};
  return path;
}

ncvem_family family_of(const RunConfig& cfg) {
  ncvem_family f;
  check(ncvem_family_parse(cfg.family.c_str(), &f), "--family");
  return f;
}

ncvem_mesh_options mesh_options(const RunConfig& cfg) {
  ncvem_mesh_options o;
  ncvem_mesh_options_default(&o);
  o.seed = cfg.seed;
  if (cfg.notch > 0.0) o.notch_ratio = cfg.notch;
  if (cfg.box >= 0.0) o.box_fraction = cfg.box;
  return o;
}

ncvem_solve_options solve_options(const RunConfig& cfg) {
  ncvem_solve_options o;
  ncvem_solve_options_default(&o);
  o.order = cfg.order;
  o.material.rigidity = cfg.rigidity;
  o.material.poisson = cfg.nu;
  o.quadrature_degree = cfg.quad_degree;
  return o;
}

void validate_common(const RunConfig& cfg) {
  if (cfg.order < 2 || cfg.order > 5)
    throw Failure{kUsage, "--order must lie in [2, 5], got " + std::to_string(cfg.order)};
  if (!(cfg.nu >= 0.0 && cfg.nu < 0.5)) throw Failure{kUsage, "--nu must lie in [0, 0.5)"};
  if (!(cfg.rigidity > 0.0)) throw Failure{kUsage, "--D must be positive"};
  if (cfg.quad_degree < 0) throw Failure{kUsage, "--quad-degree must be non-negative"};
}

void validate_level(int n) {
  if (n < 0 || n > 8) throw Failure{kUsage, "--n must lie in [0, 8], got " + std::to_string(n)};
}

struct Mesh {
  ncvem_mesh* ptr = nullptr;
  ~Mesh() { ncvem_mesh_free(ptr); }
};

void build_mesh(const RunConfig& cfg, int n, Mesh& mesh) {
  const auto opts = mesh_options(cfg);
  check(ncvem_mesh_build(family_of(cfg), n, &opts, &mesh.ptr), cfg.family + " n=" + std::to_string(n));
}

std::string stem(const RunConfig& cfg, bool with_order, bool with_level) {
  std::string s = cfg.family;
  if (with_order) s += "_l" + std::to_string(cfg.order);
  if (with_level) s += "_n" + std::to_string(cfg.n);
  return s;
}

int run_mesh(const RunConfig& cfg) {
  validate_level(cfg.n);
  Mesh mesh;
  build_mesh(cfg, cfg.n, mesh);
  const fs::path path = resolve_output(cfg, "mesh_" + stem(cfg, false, true) + ".json");
  check(ncvem_mesh_write(mesh.ptr, path.c_str()), "writing " + path.string());
  ncvem_mesh_info info;
  check(ncvem_mesh_get_info(mesh.ptr, &info), "mesh info");
  if (!cfg.quiet)
    std::printf("%s n=%d: cells=%d edges=%d vertices=%d h=%.6f -> %s\n", cfg.family.c_str(), cfg.n,
                info.num_cells, info.num_edges, info.num_vertices, info.h, path.c_str());
  return kOk;
}

int run_solve(const RunConfig& cfg) {
  validate_common(cfg);
  validate_level(cfg.n);
  Mesh mesh;
  build_mesh(cfg, cfg.n, mesh);
  const auto opts = solve_options(cfg);
  ncvem_solution* sol = nullptr;
  check(ncvem_solve_bubble(mesh.ptr, &opts, &sol), "solve");
  struct Guard {
    ncvem_solution* s;
    ~Guard() { ncvem_solution_free(s); }
  } guard{sol};
  double err = 0.0, backward = 0.0;
  check(ncvem_solution_error2h(sol, &err), "error");
  check(ncvem_solution_backward_error(sol, &backward), "error");
  const fs::path path = resolve_output(cfg, "solve_" + stem(cfg, true, true) + ".txt");
  check(ncvem_solution_write(sol, path.c_str()), "writing " + path.string());
  if (!cfg.matrix.empty()) {
    RunConfig m = cfg;
    m.output = cfg.matrix;
    const fs::path mpath = resolve_output(m, "");
    check(ncvem_matrix_write(mesh.ptr, &opts, mpath.c_str()), "writing " + mpath.string());
  }
  if (!cfg.quiet)
    std::printf("%s n=%d order=%d: ndof=%zu error2h=%.6e backward_error=%.2e -> %s\n", cfg.family.c_str(), cfg.n,
                cfg.order, ncvem_solution_size(sol), err, backward, path.c_str());
  return kOk;
}

void print_progress(const ncvem_record* r, void*) {
  if (r->has_rate)
    std::printf("  n=%d h=%.6f ndof=%lld error2h=%.6e rate_h=%.3f rate_dof=%.3f\n", r->n, r->h, r->ndof,
                r->error2h, r->rate_h, r->rate_dof);
  else
    std::printf("  n=%d h=%.6f ndof=%lld error2h=%.6e\n", r->n, r->h, r->ndof, r->error2h);
  std::fflush(stdout);
}

int run_study(const RunConfig& cfg) {
  validate_common(cfg);
  if (cfg.n_min < 0 || cfg.n_max < cfg.n_min) throw Failure{kUsage, "need 0 <= --nmin <= --nmax"};
  ncvem_study_options opts;
  ncvem_study_options_default(&opts);
  opts.family = family_of(cfg);
  opts.mesh = mesh_options(cfg);
  opts.n_min = cfg.n_min;
  opts.n_max = cfg.n_max;
  opts.solve = solve_options(cfg);
  if (!cfg.quiet) {
    opts.progress = print_progress;
    std::printf("%s order=%d n=%d..%d\n", cfg.family.c_str(), cfg.order, cfg.n_min, cfg.n_max);
  }
  ncvem_study* study = nullptr;
  check(ncvem_study_run(&opts, &study), "study");
  struct Guard {
    ncvem_study* s;
    ~Guard() { ncvem_study_free(s); }
  } guard{study};
  const fs::path csv = resolve_output(cfg, "study_" + stem(cfg, true, false) + ".csv");
  fs::path plot = csv;
  plot.replace_extension(".dat");
  check(ncvem_study_write_csv(study, csv.c_str()), "writing " + csv.string());
  check(ncvem_study_write_plot(study, plot.c_str()), "writing " + plot.string());
  const size_t count = ncvem_study_size(study);
  if (!cfg.quiet && count >= 2) {
    double slope = 0.0;
    check(ncvem_study_slope(study, 0, count - 1, 0, &slope), "slope");
    std::printf("windowed h-slope %.3f (expected %d) -> %s\n", slope, cfg.order - 1, csv.c_str());
  }
  return kOk;
}

int run_patch(const RunConfig& cfg) {
  validate_common(cfg);
  validate_level(cfg.n);
  Mesh mesh;
  build_mesh(cfg, cfg.n, mesh);
  const auto opts = solve_options(cfg);
  std::vector<ncvem_patch_entry> entries(static_cast<size_t>((cfg.order + 1) * (cfg.order + 2) / 2));
  size_t count = 0;
  check(ncvem_patch_test(mesh.ptr, &opts, entries.data(), entries.size(), &count), "patch test");
  entries.resize(count);

  const fs::path path = resolve_output(cfg, "patch_" + stem(cfg, true, true) + ".txt");
  std::ofstream out(path);
  if (!out) throw Failure{kIo, "cannot open " + path.string() + " for writing"};
  double worst = 0.0;
  char line[160];
  out << "# mu nu error (2h error, or relative DOF error for linear monomials)\n";
  for (const auto& e : entries) {
    worst = std::max(worst, e.error);
    std::snprintf(line, sizeof line, "%d %d %.6e%s\n", e.mu, e.nu, e.error, e.has_error2h ? "" : " dof");
    out << line;
  }
  std::snprintf(line, sizeof line, "max %.6e\n", worst);
  out << line;
  out.close();
  if (!out) throw Failure{kIo, "failed writing " + path.string()};
  const bool ok = worst <= cfg.tolerance;
  if (!cfg.quiet)
    std::printf("%s n=%d order=%d: %zu monomials, max error %.3e (%s %.1e) -> %s\n", cfg.family.c_str(), cfg.n,
                cfg.order, count, worst, ok ? "<=" : ">", cfg.tolerance, path.c_str());
  return ok ? kOk : kValidation;
}

int run_morley(const RunConfig& cfg) {
  validate_common(cfg);
  validate_level(cfg.n);
  Mesh mesh;
  build_mesh(cfg, cfg.n, mesh);
  const auto opts = solve_options(cfg);
  ncvem_morley_report report;
  check(ncvem_morley_compare(mesh.ptr, &opts.material, &report), "morley comparison");
  const fs::path path = resolve_output(cfg, "morley_" + stem(cfg, false, true) + ".txt");
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Failure{kIo, "cannot open " + path.string() + " for writing"};
  std::fprintf(f, "dof_discrepancy %.6e\nstiffness_discrepancy %.6e\nvem_error2h %.12g\nmorley_error2h %.12g\n",
               report.dof_discrepancy, report.stiffness_discrepancy, report.vem_error2h, report.morley_error2h);
  if (std::fclose(f) != 0) throw Failure{kIo, "failed writing " + path.string()};
  const bool ok = report.dof_discrepancy <= 1e-9 && report.stiffness_discrepancy <= 1e-11;
  if (!cfg.quiet)
    std::printf("%s n=%d: max DOF discrepancy %.3e, stiffness %.3e -> %s\n", cfg.family.c_str(), cfg.n,
                report.dof_discrepancy, report.stiffness_discrepancy, path.c_str());
  return ok ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonconforming virtual elements for the clamped Kirchhoff plate"};
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "key=value file with the same keys as the long flags");

  RunConfig cfg;
  app.add_option("--family", cfg.family, "crisscross, hexagonal, octagonal or randomquad");
  app.add_option("--order", cfg.order, "polynomial order (2..5)");
  app.add_option("--n", cfg.n, "refinement level (0..8)");
  app.add_option("--nmin", cfg.n_min, "first study level");
  app.add_option("--nmax", cfg.n_max, "last study level");
  app.add_option("--nu", cfg.nu, "Poisson ratio in [0, 0.5)");
  app.add_option("--D", cfg.rigidity, "bending rigidity");
  app.add_option("--seed", cfg.seed, "seed of the randomized quadrilaterals");
  app.add_option("--notch", cfg.notch, "octagon notch ratio (default 0.37)");
  app.add_option("--box", cfg.box, "perturbation box fraction of randomquad (default 0.4)");
  app.add_option("--quad-degree", cfg.quad_degree, "quadrature degree for data (0: order + 8)");
  app.add_option("--tol", cfg.tolerance, "patch test tolerance");
  app.add_option("-o,--output", cfg.output, "output file");
  app.add_option("--output-dir", cfg.output_dir, "output directory (default $NCVEM_OUTPUT_DIR or .)");
  app.add_option("--matrix", cfg.matrix, "solve: also write the clamped stiffness matrix here");
  app.add_flag("-q,--quiet", cfg.quiet, "no console output");
  app.fallthrough();

  auto* mesh = app.add_subcommand("mesh", "write a mesh as JSON");
  auto* solve = app.add_subcommand("solve", "solve the clamped bubble problem and write the DOFs");
  auto* study = app.add_subcommand("study", "convergence study, CSV and plot data");
  auto* patch = app.add_subcommand("patch", "patch test over all monomials of degree <= order");
  auto* morley = app.add_subcommand("morley-compare", "order-2 VEM against the Morley element");
  for (auto* sub : {mesh, solve, study, patch, morley}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*mesh) return run_mesh(cfg);
    if (*solve) return run_solve(cfg);
    if (*study) return run_study(cfg);
    if (*patch) return run_patch(cfg);
    if (*morley) return run_morley(cfg);
  } catch (const Failure& f) {
    std::fprintf(stderr, "ncvem: %s\n", f.message.c_str());
    return f.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ncvem: internal error: %s\n", e.what());
    return kInternal;
  }
  return kInternal;
}
