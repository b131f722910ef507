/* C interface of the ncvem plate solver. All functions return an
 * ncvem_status; on failure ncvem_last_error() describes the problem (the
 * message is per thread and stays valid until the next call on that thread).
 */
#ifndef NCVEM_H
#define NCVEM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NCVEM_API __declspec(dllexport)
#else
#define NCVEM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ncvem_status {
  NCVEM_OK = 0,
  NCVEM_ERR_CONFIG = 1,    /* invalid argument or option */
  NCVEM_ERR_MESH = 2,      /* invalid or degenerate mesh */
  NCVEM_ERR_ASSEMBLY = 3,  /* local projector could not be built */
  NCVEM_ERR_SOLVER = 4,    /* not positive definite, breakdown, residual */
  NCVEM_ERR_IO = 5,        /* file could not be read or written */
  NCVEM_ERR_ZERO_NORM = 6, /* relative error undefined: reference is piecewise linear */
  NCVEM_ERR_INTERNAL = 7
} ncvem_status;

typedef enum ncvem_family {
  NCVEM_CRISSCROSS = 0,
  NCVEM_HEXAGONAL = 1,
  NCVEM_OCTAGONAL = 2,
  NCVEM_RANDOMQUAD = 3
} ncvem_family;

typedef struct ncvem_mesh ncvem_mesh;
typedef struct ncvem_solution ncvem_solution;
typedef struct ncvem_study ncvem_study;

typedef struct ncvem_mesh_options {
  uint64_t seed;       /* randomized quadrilaterals */
  double notch_ratio;  /* octagons, in (0, 0.5) */
  double box_fraction; /* randomized quadrilaterals, in [0, 1) */
} ncvem_mesh_options;

typedef struct ncvem_material {
  double rigidity; /* D > 0 */
  double poisson;  /* 0 <= nu < 0.5 */
} ncvem_material;

typedef struct ncvem_solve_options {
  int order; /* 2..5 */
  ncvem_material material;
  int quadrature_degree; /* 0: order + 8 */
} ncvem_solve_options;

typedef struct ncvem_mesh_info {
  int num_cells;
  int num_edges;
  int num_vertices;
  int num_boundary_edges;
  int num_boundary_vertices;
  double h;
} ncvem_mesh_info;

typedef struct ncvem_regularity {
  double star_radius_ratio;
  double edge_ratio;
  double subtriangle_quality;
} ncvem_regularity;

typedef struct ncvem_record {
  int n;
  double h;
  long long ndof;
  double error2h;
  int has_rate; /* 0 for the first record */
  double rate_h;
  double rate_dof;
} ncvem_record;

typedef void (*ncvem_progress_fn)(const ncvem_record* record, void* user);

typedef struct ncvem_study_options {
  ncvem_family family;
  ncvem_mesh_options mesh;
  int n_min;
  int n_max;
  ncvem_solve_options solve;
  ncvem_progress_fn progress; /* may be NULL */
  void* progress_user;
} ncvem_study_options;

typedef struct ncvem_patch_entry {
  int mu;
  int nu;
  int has_error2h; /* 0 when x^mu y^nu is linear */
  double error2h;
  double dof_error;
  double error; /* error2h, or dof_error when undefined */
} ncvem_patch_entry;

typedef struct ncvem_morley_report {
  double dof_discrepancy;
  double stiffness_discrepancy;
  double vem_error2h;
  double morley_error2h;
} ncvem_morley_report;

NCVEM_API const char* ncvem_version(void);
NCVEM_API const char* ncvem_last_error(void);
NCVEM_API const char* ncvem_status_name(ncvem_status status);

NCVEM_API void ncvem_mesh_options_default(ncvem_mesh_options* options);
NCVEM_API void ncvem_material_default(ncvem_material* material);
NCVEM_API void ncvem_solve_options_default(ncvem_solve_options* options);
NCVEM_API void ncvem_study_options_default(ncvem_study_options* options);

NCVEM_API ncvem_status ncvem_family_parse(const char* name, ncvem_family* out);
NCVEM_API const char* ncvem_family_name(ncvem_family family);

/* Meshes of the unit square; level n uses a 5x5 grid for n = 0, else 10n x 10n. */
NCVEM_API ncvem_status ncvem_mesh_build(ncvem_family family, int level, const ncvem_mesh_options* options,
                                        ncvem_mesh** out);
NCVEM_API ncvem_status ncvem_mesh_read(const char* path, ncvem_mesh** out);
NCVEM_API ncvem_status ncvem_mesh_write(const ncvem_mesh* mesh, const char* path);
NCVEM_API void ncvem_mesh_free(ncvem_mesh* mesh);
NCVEM_API ncvem_status ncvem_mesh_get_info(const ncvem_mesh* mesh, ncvem_mesh_info* out);
NCVEM_API ncvem_status ncvem_mesh_get_regularity(const ncvem_mesh* mesh, ncvem_regularity* out);
NCVEM_API ncvem_status ncvem_dof_count(const ncvem_mesh* mesh, int order, long long* out);

/* Clamped plate with u = x^2 (1-x)^2 y^2 (1-y)^2. */
NCVEM_API ncvem_status ncvem_solve_bubble(const ncvem_mesh* mesh, const ncvem_solve_options* options,
                                          ncvem_solution** out);
/* u = x^mu y^nu with boundary DOFs set from u. */
NCVEM_API ncvem_status ncvem_solve_monomial(const ncvem_mesh* mesh, int mu, int nu,
                                            const ncvem_solve_options* options, ncvem_solution** out);
NCVEM_API ncvem_status ncvem_solution_error2h(const ncvem_solution* solution, double* out);
NCVEM_API ncvem_status ncvem_solution_dof_error(const ncvem_solution* solution, double* out);
NCVEM_API ncvem_status ncvem_solution_backward_error(const ncvem_solution* solution, double* out);
NCVEM_API size_t ncvem_solution_size(const ncvem_solution* solution);
/* Copies min(length, size) values. */
NCVEM_API ncvem_status ncvem_solution_dofs(const ncvem_solution* solution, double* buffer, size_t length);
NCVEM_API ncvem_status ncvem_solution_write(const ncvem_solution* solution, const char* path);
NCVEM_API void ncvem_solution_free(ncvem_solution* solution);

/* Reduced clamped stiffness matrix in coordinate text format. */
NCVEM_API ncvem_status ncvem_matrix_write(const ncvem_mesh* mesh, const ncvem_solve_options* options,
                                          const char* path);

NCVEM_API ncvem_status ncvem_study_run(const ncvem_study_options* options, ncvem_study** out);
NCVEM_API size_t ncvem_study_size(const ncvem_study* study);
NCVEM_API ncvem_status ncvem_study_record(const ncvem_study* study, size_t index, ncvem_record* out);
/* Least-squares slope over records [first, last]. */
NCVEM_API ncvem_status ncvem_study_slope(const ncvem_study* study, size_t first, size_t last, int versus_dofs,
                                         double* out);
NCVEM_API ncvem_status ncvem_study_write_csv(const ncvem_study* study, const char* path);
NCVEM_API ncvem_status ncvem_study_write_plot(const ncvem_study* study, const char* path);
NCVEM_API void ncvem_study_free(ncvem_study* study);

/* All monomials x^mu y^nu with mu + nu <= order; `count` receives the number
 * of entries ((order+1)(order+2)/2), at most `capacity` are written. */
NCVEM_API ncvem_status ncvem_patch_test(const ncvem_mesh* mesh, const ncvem_solve_options* options,
                                        ncvem_patch_entry* entries, size_t capacity, size_t* count);

/* Order-2 VEM against the Morley element on a triangular mesh. */
NCVEM_API ncvem_status ncvem_morley_compare(const ncvem_mesh* mesh, const ncvem_material* material,
                                            ncvem_morley_report* out);

#ifdef __cplusplus
}
#endif

#endif
