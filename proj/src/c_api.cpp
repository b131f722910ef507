#include <algorithm>
#include <cstdio>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "ncvem/assembly.hpp"
#include "ncvem/error.hpp"
#include "ncvem/error_analysis.hpp"
#include "ncvem/mesh.hpp"
#include "ncvem/morley.hpp"
#include "ncvem/ncvem.h"

struct ncvem_mesh {
  std::shared_ptr<const ncvem::PolygonMesh> mesh;
};

struct ncvem_solution {
  ncvem::SolveResult result;
};

struct ncvem_study {
  std::vector<ncvem::ConvergenceRecord> records;
};

namespace {

thread_local std::string last_error;

ncvem_status status_of(ncvem::ErrorCategory category) {
  switch (category) {
    case ncvem::ErrorCategory::Config: return NCVEM_ERR_CONFIG;
    case ncvem::ErrorCategory::Mesh: return NCVEM_ERR_MESH;
    case ncvem::ErrorCategory::Assembly: return NCVEM_ERR_ASSEMBLY;
    case ncvem::ErrorCategory::Solver: return NCVEM_ERR_SOLVER;
    case ncvem::ErrorCategory::Io: return NCVEM_ERR_IO;
  }
  return NCVEM_ERR_INTERNAL;
}

ncvem_status fail(ncvem_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
ncvem_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return NCVEM_OK;
  } catch (const ncvem::ZeroReferenceNorm& e) {
    return fail(NCVEM_ERR_ZERO_NORM, e.what());
  } catch (const ncvem::Error& e) {
    return fail(status_of(e.category()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(NCVEM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NCVEM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(NCVEM_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw ncvem::ConfigError(message);
}

ncvem::MeshFamily to_family(ncvem_family family) {
  switch (family) {
    case NCVEM_CRISSCROSS: return ncvem::MeshFamily::CrissCross;
    case NCVEM_HEXAGONAL: return ncvem::MeshFamily::Hexagonal;
    case NCVEM_OCTAGONAL: return ncvem::MeshFamily::Octagonal;
    case NCVEM_RANDOMQUAD: return ncvem::MeshFamily::RandomQuad;
  }
  throw ncvem::ConfigError("unknown mesh family code " + std::to_string(static_cast<int>(family)));
}

ncvem::FamilyOptions to_family_options(const ncvem_mesh_options* options) {
  ncvem::FamilyOptions out;
  if (options) {
    out.seed = options->seed;
    out.notch_ratio = options->notch_ratio;
    out.box_fraction = options->box_fraction;
  }
  return out;
}

ncvem::Material to_material(const ncvem_material& m) {
  ncvem::Material out{m.rigidity, m.poisson};
  out.validate();
  return out;
}

ncvem::SolveOptions to_solve_options(const ncvem_solve_options* options) {
  ncvem_solve_options o;
  ncvem_solve_options_default(&o);
  if (options) o = *options;
  if (o.order < 2 || o.order > 5)
    throw ncvem::ConfigError("order must lie in [2, 5], got " + std::to_string(o.order));
  if (o.quadrature_degree < 0) throw ncvem::ConfigError("quadrature degree must be non-negative");
  ncvem::SolveOptions out;
  out.order = o.order;
  out.material = to_material(o.material);
  out.quadrature_degree = o.quadrature_degree;
  return out;
}

ncvem_record to_record(const ncvem::ConvergenceRecord& r) {
  ncvem_record out{};
  out.n = r.n;
  out.h = r.h;
  out.ndof = r.ndof;
  out.error2h = r.error2h;
  out.has_rate = r.rate_h.has_value() ? 1 : 0;
  out.rate_h = r.rate_h.value_or(0.0);
  out.rate_dof = r.rate_dof.value_or(0.0);
  return out;
}

}  // namespace

extern "C" {

const char* ncvem_version(void) { return "1.0.0"; }

const char* ncvem_last_error(void) { return last_error.c_str(); }

const char* ncvem_status_name(ncvem_status status) {
  switch (status) {
    case NCVEM_OK: return "ok";
    case NCVEM_ERR_CONFIG: return "config";
    case NCVEM_ERR_MESH: return "mesh";
    case NCVEM_ERR_ASSEMBLY: return "assembly";
    case NCVEM_ERR_SOLVER: return "solver";
    case NCVEM_ERR_IO: return "io";
    case NCVEM_ERR_ZERO_NORM: return "zero-norm";
    case NCVEM_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void ncvem_mesh_options_default(ncvem_mesh_options* options) {
  if (!options) return;
  const ncvem::FamilyOptions d;
  options->seed = d.seed;
  options->notch_ratio = d.notch_ratio;
  options->box_fraction = d.box_fraction;
}

void ncvem_material_default(ncvem_material* material) {
  if (!material) return;
  const ncvem::Material d;
  material->rigidity = d.rigidity;
  material->poisson = d.poisson;
}

void ncvem_solve_options_default(ncvem_solve_options* options) {
  if (!options) return;
  options->order = 2;
  ncvem_material_default(&options->material);
  options->quadrature_degree = 0;
}

void ncvem_study_options_default(ncvem_study_options* options) {
  if (!options) return;
  options->family = NCVEM_CRISSCROSS;
  ncvem_mesh_options_default(&options->mesh);
  options->n_min = 0;
  options->n_max = 3;
  ncvem_solve_options_default(&options->solve);
  options->progress = nullptr;
  options->progress_user = nullptr;
}

ncvem_status ncvem_family_parse(const char* name, ncvem_family* out) {
  return guarded([&] {
    require(name && out, "null argument");
    switch (ncvem::parse_family(name)) {
      case ncvem::MeshFamily::CrissCross: *out = NCVEM_CRISSCROSS; break;
      case ncvem::MeshFamily::Hexagonal: *out = NCVEM_HEXAGONAL; break;
      case ncvem::MeshFamily::Octagonal: *out = NCVEM_OCTAGONAL; break;
      case ncvem::MeshFamily::RandomQuad: *out = NCVEM_RANDOMQUAD; break;
    }
  });
}

const char* ncvem_family_name(ncvem_family family) {
  switch (family) {
    case NCVEM_CRISSCROSS: return "crisscross";
    case NCVEM_HEXAGONAL: return "hexagonal";
    case NCVEM_OCTAGONAL: return "octagonal";
    case NCVEM_RANDOMQUAD: return "randomquad";
  }
  return "unknown";
}

ncvem_status ncvem_mesh_build(ncvem_family family, int level, const ncvem_mesh_options* options,
                              ncvem_mesh** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = nullptr;
    auto mesh = std::make_shared<const ncvem::PolygonMesh>(
        ncvem::build_family(to_family(family), level, to_family_options(options)));
    *out = new ncvem_mesh{std::move(mesh)};
  });
}

ncvem_status ncvem_mesh_read(const char* path, ncvem_mesh** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    auto mesh = std::make_shared<const ncvem::PolygonMesh>(ncvem::read_mesh(path));
    *out = new ncvem_mesh{std::move(mesh)};
  });
}

ncvem_status ncvem_mesh_write(const ncvem_mesh* mesh, const char* path) {
  return guarded([&] {
    require(mesh && path, "null argument");
    ncvem::write_mesh(*mesh->mesh, path);
  });
}

void ncvem_mesh_free(ncvem_mesh* mesh) { delete mesh; }

ncvem_status ncvem_mesh_get_info(const ncvem_mesh* mesh, ncvem_mesh_info* out) {
  return guarded([&] {
    require(mesh && out, "null argument");
    const auto& m = *mesh->mesh;
    out->num_cells = m.num_cells();
    out->num_edges = m.num_edges();
    out->num_vertices = m.num_vertices();
    out->num_boundary_edges = m.num_boundary_edges();
    out->num_boundary_vertices = m.num_boundary_vertices();
    out->h = m.mesh_size();
  });
}

ncvem_status ncvem_mesh_get_regularity(const ncvem_mesh* mesh, ncvem_regularity* out) {
  return guarded([&] {
    require(mesh && out, "null argument");
    const auto report = ncvem::validate_regularity(*mesh->mesh);
    out->star_radius_ratio = report.min_star_radius_ratio;
    out->edge_ratio = report.min_edge_to_diameter_ratio;
    out->subtriangle_quality = report.min_subtriangle_quality;
  });
}

ncvem_status ncvem_dof_count(const ncvem_mesh* mesh, int order, long long* out) {
  return guarded([&] {
    require(mesh && out, "null argument");
    require(order >= 2 && order <= 5, "order must lie in [2, 5]");
    *out = ncvem::global_dof_map(*mesh->mesh, order).num_dofs;
  });
}

ncvem_status ncvem_solve_bubble(const ncvem_mesh* mesh, const ncvem_solve_options* options,
                                ncvem_solution** out) {
  return guarded([&] {
    require(mesh && out, "null argument");
    *out = nullptr;
    auto opts = to_solve_options(options);
    opts.boundary = ncvem::BoundaryData::Clamped;
    auto result = ncvem::solve_problem(mesh->mesh, ncvem::plate_bubble(), opts);
    *out = new ncvem_solution{std::move(result)};
  });
}

ncvem_status ncvem_solve_monomial(const ncvem_mesh* mesh, int mu, int nu, const ncvem_solve_options* options,
                                  ncvem_solution** out) {
  return guarded([&] {
    require(mesh && out, "null argument");
    require(mu >= 0 && nu >= 0, "monomial exponents must be non-negative");
    *out = nullptr;
    auto opts = to_solve_options(options);
    opts.boundary = ncvem::BoundaryData::FromSolution;
    auto result = ncvem::solve_problem(mesh->mesh, ncvem::monomial_solution(mu, nu), opts);
    *out = new ncvem_solution{std::move(result)};
  });
}

ncvem_status ncvem_solution_error2h(const ncvem_solution* solution, double* out) {
  return guarded([&] {
    require(solution && out, "null argument");
    if (!solution->result.error2h)
      throw ncvem::ZeroReferenceNorm("the exact solution has zero broken H2 seminorm");
    *out = *solution->result.error2h;
  });
}

ncvem_status ncvem_solution_dof_error(const ncvem_solution* solution, double* out) {
  return guarded([&] {
    require(solution && out, "null argument");
    *out = solution->result.dof_error;
  });
}

ncvem_status ncvem_solution_backward_error(const ncvem_solution* solution, double* out) {
  return guarded([&] {
    require(solution && out, "null argument");
    *out = solution->result.report.backward_error;
  });
}

size_t ncvem_solution_size(const ncvem_solution* solution) {
  return solution ? static_cast<size_t>(solution->result.dofs.size()) : 0;
}

ncvem_status ncvem_solution_dofs(const ncvem_solution* solution, double* buffer, size_t length) {
  return guarded([&] {
    require(solution && (buffer || length == 0), "null argument");
    const auto& x = solution->result.dofs;
    const size_t n = std::min(length, static_cast<size_t>(x.size()));
    for (size_t i = 0; i < n; ++i) buffer[i] = x[static_cast<Eigen::Index>(i)];
  });
}

ncvem_status ncvem_solution_write(const ncvem_solution* solution, const char* path) {
  return guarded([&] {
    require(solution && path, "null argument");
    std::FILE* f = std::fopen(path, "w");
    if (!f) throw ncvem::IoError(std::string("cannot open ") + path + " for writing");
    const auto& r = solution->result;
    std::fprintf(f, "# order %d ndof %lld\n", r.discretization->order(),
                 static_cast<long long>(r.dofs.size()));
    if (r.error2h) std::fprintf(f, "# error2h %.12g\n", *r.error2h);
    std::fprintf(f, "# dof_error %.12g\n", r.dof_error);
    std::fprintf(f, "# backward_error %.6g\n", r.report.backward_error);
    for (Eigen::Index i = 0; i < r.dofs.size(); ++i) std::fprintf(f, "%.17g\n", r.dofs[i]);
    const bool ok = std::ferror(f) == 0;
    if (std::fclose(f) != 0 || !ok) throw ncvem::IoError(std::string("failed writing ") + path);
  });
}

void ncvem_solution_free(ncvem_solution* solution) { delete solution; }

ncvem_status ncvem_matrix_write(const ncvem_mesh* mesh, const ncvem_solve_options* options, const char* path) {
  return guarded([&] {
    require(mesh && path, "null argument");
    const auto opts = to_solve_options(options);
    const ncvem::Discretization disc(mesh->mesh, opts.order, opts.material);
    const auto zero = [](ncvem::Point2) { return 0.0; };
    const auto system = ncvem::assemble_system(disc, zero, ncvem::BoundarySpec::clamped(),
                                               opts.effective_quadrature_degree());
    ncvem::write_matrix(system.matrix, path);
  });
}

ncvem_status ncvem_study_run(const ncvem_study_options* options, ncvem_study** out) {
  return guarded([&] {
    require(options && out, "null argument");
    *out = nullptr;
    ncvem::StudyOptions study;
    study.family = to_family(options->family);
    study.mesh = to_family_options(&options->mesh);
    study.n_min = options->n_min;
    study.n_max = options->n_max;
    study.solve = to_solve_options(&options->solve);
    if (options->progress) {
      const auto fn = options->progress;
      void* user = options->progress_user;
      study.progress = [fn, user](const ncvem::ConvergenceRecord& r) {
        const ncvem_record rec = to_record(r);
        fn(&rec, user);
      };
    }
    auto records = ncvem::convergence_study(study);
    *out = new ncvem_study{std::move(records)};
  });
}

size_t ncvem_study_size(const ncvem_study* study) { return study ? study->records.size() : 0; }

ncvem_status ncvem_study_record(const ncvem_study* study, size_t index, ncvem_record* out) {
  return guarded([&] {
    require(study && out, "null argument");
    require(index < study->records.size(), "record index out of range");
    *out = to_record(study->records[index]);
  });
}

ncvem_status ncvem_study_slope(const ncvem_study* study, size_t first, size_t last, int versus_dofs,
                               double* out) {
  return guarded([&] {
    require(study && out, "null argument");
    require(first < last && last < study->records.size(), "slope window out of range");
    *out = ncvem::windowed_slope(study->records, first, last, versus_dofs != 0);
  });
}

ncvem_status ncvem_study_write_csv(const ncvem_study* study, const char* path) {
  return guarded([&] {
    require(study && path, "null argument");
    ncvem::write_study_csv(study->records, path);
  });
}

ncvem_status ncvem_study_write_plot(const ncvem_study* study, const char* path) {
  return guarded([&] {
    require(study && path, "null argument");
    ncvem::write_plot_data(study->records, path);
  });
}

void ncvem_study_free(ncvem_study* study) { delete study; }

ncvem_status ncvem_patch_test(const ncvem_mesh* mesh, const ncvem_solve_options* options,
                              ncvem_patch_entry* entries, size_t capacity, size_t* count) {
  return guarded([&] {
    require(mesh && count && (entries || capacity == 0), "null argument");
    const auto opts = to_solve_options(options);
    const auto results = ncvem::patch_test(mesh->mesh, opts.order, opts.material, opts.quadrature_degree);
    *count = results.size();
    for (size_t i = 0; i < results.size() && i < capacity; ++i) {
      const auto& r = results[i];
      entries[i] = {r.mu, r.nu, r.error2h ? 1 : 0, r.error2h.value_or(0.0), r.dof_error, r.error()};
    }
  });
}

ncvem_status ncvem_morley_compare(const ncvem_mesh* mesh, const ncvem_material* material,
                                  ncvem_morley_report* out) {
  return guarded([&] {
    require(mesh && out, "null argument");
    ncvem_material m;
    ncvem_material_default(&m);
    if (material) m = *material;
    const auto c = ncvem::compare_with_vem(mesh->mesh, to_material(m));
    out->dof_discrepancy = c.dof_discrepancy;
    out->stiffness_discrepancy = c.stiffness_discrepancy;
    out->vem_error2h = c.vem_error2h;
    out->morley_error2h = c.morley_error2h;
  });
}

}  // extern "C"
