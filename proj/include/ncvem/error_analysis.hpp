#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ncvem/assembly.hpp"
#include "ncvem/mesh.hpp"

namespace ncvem {

/// Exact solution of a plate problem with closed-form derivatives.
struct ManufacturedSolution {
  std::string name;
  ScalarField value;
  GradientField gradient;
  ScalarField bilaplacian;

  SmoothField field() const { return {value, gradient}; }
  /// f = D bilap(u).
  ScalarField load(const Material& material) const;
};

/// u = x^2 (1-x)^2 y^2 (1-y)^2, clamped on the unit square.
ManufacturedSolution plate_bubble();

/// u = x^mu y^nu.
ManufacturedSolution monomial_solution(int mu, int nu);

/// Interpolated global DOF vector of a smooth field.
Eigen::VectorXd interpolate(const Discretization& disc, const SmoothField& field, int quadrature_degree);

/// Per-cell coefficients of the elliptic projection, in each cell's basis.
struct ProjectedField {
  int order = 0;
  std::vector<Eigen::VectorXd> coeffs;
};

ProjectedField project_discrete(const Discretization& disc, const Eigen::VectorXd& global_dofs);
ProjectedField project_exact(const Discretization& disc, const SmoothField& field, int quadrature_degree);

/// Broken H2 seminorm: sum over cells of int (p_xx^2 + p_xy^2 + p_yy^2).
double broken_h2_seminorm(const PolygonMesh& mesh, const ProjectedField& field);

/// |u - uh|_{2,h} / |u|_{2,h}; throws ZeroReferenceNorm when |u|_{2,h} = 0.
double error_2h(const PolygonMesh& mesh, const ProjectedField& u, const ProjectedField& uh);

enum class BoundaryData { Clamped, FromSolution };

struct SolveOptions {
  int order = 2;
  Material material;
  int quadrature_degree = 0;  // 0: order + 8
  BoundaryData boundary = BoundaryData::Clamped;

  int effective_quadrature_degree() const;
};

struct SolveResult {
  std::shared_ptr<const Discretization> discretization;
  Eigen::VectorXd dofs;
  Eigen::VectorXd exact_dofs;
  SolveReport report;
  std::optional<double> error2h;  // empty when the exact solution has zero 2h seminorm
  double dof_error = 0.0;         // max |dofs - exact_dofs| / max |exact_dofs|
};

SolveResult solve_problem(std::shared_ptr<const PolygonMesh> mesh, const ManufacturedSolution& solution,
                          const SolveOptions& options);
/// Same on an existing discretization (its order and material win over `options`).
SolveResult solve_problem(std::shared_ptr<const Discretization> disc, const ManufacturedSolution& solution,
                          const SolveOptions& options);

struct ConvergenceRecord {
  std::string family;
  int n = 0;
  double h = 0.0;
  long long ndof = 0;
  double error2h = 0.0;
  std::optional<double> rate_h;
  std::optional<double> rate_dof;
};

struct StudyOptions {
  MeshFamily family = MeshFamily::CrissCross;
  FamilyOptions mesh;
  int n_min = 0;
  int n_max = 3;
  SolveOptions solve;
  std::function<void(const ConvergenceRecord&)> progress;
};

/// Throws ConfigError for order outside [2, 5] or n outside [0, 8]
/// ([0, 4] for order 5); solver failures are rethrown with the run context.
std::vector<ConvergenceRecord> convergence_study(const StudyOptions& options);

/// Fills the consecutive-pair rates (first record has none).
void compute_rates(std::vector<ConvergenceRecord>& records);

/// Least-squares slope of log(error) against log(h), or of -log(error)
/// against log(ndof) when `versus_dofs`, over records [first, last].
double windowed_slope(const std::vector<ConvergenceRecord>& records, std::size_t first, std::size_t last,
                      bool versus_dofs = false);

std::string study_csv(const std::vector<ConvergenceRecord>& records);
void write_study_csv(const std::vector<ConvergenceRecord>& records, const std::filesystem::path& path);
/// Whitespace separated "h ndof error2h" rows for log-log plotting.
void write_plot_data(const std::vector<ConvergenceRecord>& records, const std::filesystem::path& path);

struct PatchResult {
  int mu = 0;
  int nu = 0;
  std::optional<double> error2h;
  double dof_error = 0.0;

  /// The 2h error, or the DOF error for linear monomials (zero reference norm).
  double error() const { return error2h ? *error2h : dof_error; }
};

/// Solves with strong Dirichlet data for every x^mu y^nu, mu + nu <= order.
std::vector<PatchResult> patch_test(std::shared_ptr<const PolygonMesh> mesh, int order,
                                    const Material& material, int quadrature_degree = 0);

}  // namespace ncvem
