#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ncvem/geometry.hpp"
#include "ncvem/polybasis.hpp"

namespace ncvem {

using ScalarField = std::function<double(Point2)>;
using GradientField = std::function<Point2(Point2)>;

/// A smooth function together with its gradient (needed for the normal
/// derivative moments).
struct SmoothField {
  ScalarField value;
  GradientField gradient;
};

enum class DofKind : std::uint8_t {
  Vertex,      // v(vertex)
  EdgeNormal,  // int_e d_n v s~^k ds,        k <= order-2
  EdgeValue,   // |e|^-1 int_e v s~^k ds,     k <= order-3
  CellMoment,  // |K|^-1 int_K v m_a dx,      |a| <= order-4
};

struct DofInfo {
  DofKind kind;
  int entity;  // local vertex, local edge, or 0 for cell moments
  int moment;  // k for edge moments, monomial index for cell moments
};

/// Local degrees of freedom of a cell with `num_vertices` vertices (and as
/// many edges): all vertex values, then the normal-derivative moments edge by
/// edge, then the value moments edge by edge, then the cell moments.
class DofLayout {
 public:
  DofLayout(int num_vertices, int order);

  int order() const { return order_; }
  int num_vertices() const { return num_vertices_; }

  int normal_moments_per_edge() const { return order_ - 1; }
  int value_moments_per_edge() const { return order_ >= 3 ? order_ - 2 : 0; }
  int cell_moments() const { return poly_dim(order_ - 4); }

  int n_vertex() const { return num_vertices_; }
  int n_edge_normal() const { return num_vertices_ * normal_moments_per_edge(); }
  int n_edge_value() const { return num_vertices_ * value_moments_per_edge(); }
  int n_cell() const { return cell_moments(); }
  int size() const { return n_vertex() + n_edge_normal() + n_edge_value() + n_cell(); }

  int vertex_dof(int v) const { return v; }
  int edge_normal_dof(int e, int k) const { return n_vertex() + e * normal_moments_per_edge() + k; }
  int edge_value_dof(int e, int k) const {
    return n_vertex() + n_edge_normal() + e * value_moments_per_edge() + k;
  }
  int cell_dof(int a) const { return n_vertex() + n_edge_normal() + n_edge_value() + a; }

  const DofInfo& info(int dof) const { return info_[dof]; }

 private:
  int num_vertices_;
  int order_;
  std::vector<DofInfo> info_;
};

/// Throws ConfigError for order < 2.
DofLayout dof_layout(const CellGeometry& cell, int order);

/// Default quadrature degree for integrals of user-supplied functions.
inline int field_quadrature_degree(int order) { return order + 8; }

/// Degrees of freedom of a smooth function on the cell.
Eigen::VectorXd compute_dofs(const CellGeometry& cell, int order, const SmoothField& field,
                             int quadrature_degree);

/// DOF matrix of the scaled monomial basis: column a holds dofs(m_a).
Eigen::MatrixXd monomial_dof_matrix(const CellGeometry& cell, const ScaledMonomials& basis);

/// Per-cell matrices of the method.
struct LocalKernels {
  int order = 0;
  Eigen::MatrixXd G;               // a^K(m_a, m_b)
  Eigen::MatrixXd B;               // a^K(m_a, v) as a row functional on the DOFs
  Eigen::MatrixXd constraint;      // vertex-sum products of P1 against the basis
  Eigen::MatrixXd constraint_rhs;  // the same products against the DOFs
  Eigen::MatrixXd Pi;              // DOFs -> coefficients of the elliptic projection
  Eigen::MatrixXd dof_matrix;      // coefficients -> DOFs
  Eigen::MatrixXd consistency;     // Pi^T G Pi
  Eigen::MatrixXd stabilization;   // (I - Q)^T W (I - Q), Q = dof_matrix Pi, W_ii = max(D h^-2, consistency_ii)
  Eigen::MatrixXd stiffness;       // consistency + stabilization
  Eigen::MatrixXd mass;            // int_K m_a m_b for |a|, |b| <= order-2
  Eigen::MatrixXd moment_op;       // DOFs -> coefficients of the L2 projection onto P^(order-2)
};

/// The a^K(m_a, v) rows from the DOFs of v (integration by parts, boundary
/// terms from the plate operators).
Eigen::MatrixXd projector_rhs(const CellGeometry& cell, const ScaledMonomials& basis,
                              const Material& material);

/// Elliptic projector from the augmented (saddle-point) system.
/// Throws ProjectorError (cell id -1) when the system is singular.
LocalKernels elliptic_projector(const CellGeometry& cell, int order, const Material& material);

/// Adds the L2 moment operator onto P^(order-2) (enhancement).
void enhanced_l2_projector(const CellGeometry& cell, LocalKernels& kernels);

/// Consistency + stabilization stiffness.
void local_stiffness(const CellGeometry& cell, const Material& material, LocalKernels& kernels);

/// Everything above in one call.
LocalKernels compute_local_kernels(const CellGeometry& cell, int order, const Material& material);

/// Load vector: entry i = int_K f Pi^(order-2) phi_i dx.
Eigen::VectorXd local_load(const CellGeometry& cell, const LocalKernels& kernels,
                           const ScalarField& load, int quadrature_degree);

}  // namespace ncvem
