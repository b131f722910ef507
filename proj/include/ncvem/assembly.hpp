#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "ncvem/mesh.hpp"
#include "ncvem/polybasis.hpp"
#include "ncvem/vem_local.hpp"

namespace ncvem {

/// Global numbering: vertex values first, then per edge its normal moments
/// followed by its value moments, then the cell moments cell by cell. Edge
/// moments use the global edge orientation (lower vertex id -> higher), so a
/// cell traversing an edge backwards sees its local moments with a sign.
struct GlobalDofMap {
  int order = 0;
  int num_dofs = 0;
  int edge_block = 0;  // dofs per edge
  int cell_block = 0;  // dofs per cell
  int edge_offset = 0;
  int cell_offset = 0;
  std::vector<std::vector<int>> cell_dofs;      // local -> global
  std::vector<std::vector<int8_t>> cell_signs;  // local = sign * global
  std::vector<uint8_t> constrained;             // fixed by the clamped boundary condition

  int vertex_dof(int v) const { return v; }
  int edge_normal_dof(int e, int k) const { return edge_offset + e * edge_block + k; }
  int edge_value_dof(int e, int k) const { return edge_offset + e * edge_block + (order - 1) + k; }
  int cell_dof(int c, int a) const { return cell_offset + c * cell_block + a; }
  int num_constrained() const;

  /// Local DOF vector of a cell from a global vector.
  Eigen::VectorXd gather(int cell, const Eigen::VectorXd& global) const;
};

GlobalDofMap global_dof_map(const PolygonMesh& mesh, int order);

/// N_V + (l-1) N_F + (l-2) N_F [l>=3] + (l-2)(l-3)/2 N_P [l>=4].
long long closed_form_dof_count(long long num_vertices, long long num_edges, long long num_cells,
                                int order);

/// A mesh with the per-cell kernels of one order and material, computed once.
class Discretization {
 public:
  /// Throws ProjectorError carrying the failing cell id.
  Discretization(std::shared_ptr<const PolygonMesh> mesh, int order, const Material& material);

  const PolygonMesh& mesh() const { return *mesh_; }
  std::shared_ptr<const PolygonMesh> mesh_ptr() const { return mesh_; }
  int order() const { return order_; }
  const Material& material() const { return material_; }
  const GlobalDofMap& dof_map() const { return map_; }
  const LocalKernels& kernels(int cell) const { return kernels_[cell]; }

 private:
  std::shared_ptr<const PolygonMesh> mesh_;
  int order_;
  Material material_;
  GlobalDofMap map_;
  std::vector<LocalKernels> kernels_;
};

struct BoundarySpec {
  enum class Mode {
    HomogeneousClamped,  // u = d_n u = 0 on the boundary
    StrongDirichlet,     // boundary DOFs taken from `field`
    Free,                // nothing eliminated (singular system; diagnostics only)
  };
  Mode mode = Mode::HomogeneousClamped;
  SmoothField field;

  static BoundarySpec clamped() { return {}; }
  static BoundarySpec dirichlet(SmoothField f) { return {Mode::StrongDirichlet, std::move(f)}; }
  static BoundarySpec unconstrained() { return {Mode::Free, {}}; }
};

/// Reduced system on the free DOFs. The matrix is stored in full and is
/// exactly symmetric.
struct SparseSystem {
  int num_dofs = 0;
  std::vector<int> free_dofs;         // reduced index -> global
  Eigen::VectorXd constrained_values; // global length, zero on free DOFs
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
};

SparseSystem assemble_system(const Discretization& disc, const ScalarField& load,
                             const BoundarySpec& bc, int quadrature_degree);

struct SolveReport {
  double relative_residual = 0.0;  // ||Ax - b|| / ||b||
  double backward_error = 0.0;     // ||Ax - b|| / (||A|| ||x|| + ||b||), max norms
  double min_pivot_ratio = 0.0;
};

/// Sparse LDL^T solve on the diagonally equilibrated system with iterative
/// refinement. Throws SolverError (NotPositiveDefinite, Breakdown, or Residual
/// when the backward error exceeds 1e-10). Returns the full global vector.
Eigen::VectorXd solve_spd(const SparseSystem& system, SolveReport* report = nullptr);

/// Coordinate text format: "rows cols nnz" header, then "row col value"
/// (0-based) with 17 significant digits.
void write_matrix(const Eigen::SparseMatrix<double>& matrix, const std::filesystem::path& path);

}  // namespace ncvem
