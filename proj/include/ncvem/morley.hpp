#pragma once

#include <array>
#include <memory>

#include <Eigen/Dense>

#include "ncvem/error_analysis.hpp"
#include "ncvem/geometry.hpp"
#include "ncvem/mesh.hpp"
#include "ncvem/polybasis.hpp"

namespace ncvem {

/// Classical Morley triangle: P2 with the three vertex values and the three
/// edge integrals of the outward normal derivative (edge k runs from vertex k
/// to vertex k+1). Built by inverting the 6x6 DOF matrix of the monomials
/// ((x - v0)/s)^a, s = longest edge.
class MorleyElement {
 public:
  /// Throws MeshError for a degenerate or clockwise triangle.
  MorleyElement(Point2 a, Point2 b, Point2 c);

  double area() const { return area_; }
  double scale() const { return scale_; }

  /// Morley DOFs of a P2 polynomial given by its coefficients.
  Eigen::Matrix<double, 6, 1> dofs_of(const Eigen::Matrix<double, 6, 1>& coeffs) const;
  /// Coefficients of the P2 function with the given DOFs.
  Eigen::Matrix<double, 6, 1> coefficients(const Eigen::Matrix<double, 6, 1>& dofs) const;

  /// Constant Hessian (xx, xy, yy) of the P2 function with the given DOFs.
  std::array<double, 3> hessian(const Eigen::Matrix<double, 6, 1>& dofs) const;

  Eigen::Matrix<double, 6, 6> stiffness(const Material& material) const;

  /// int_K phi_i for each basis function.
  Eigen::Matrix<double, 6, 1> basis_integrals() const;

  /// DOFs of a smooth field (normal derivative integrals by edge quadrature).
  Eigen::Matrix<double, 6, 1> interpolate(const SmoothField& field, int quadrature_degree) const;

 private:
  std::array<Point2, 3> v_;
  double scale_ = 1.0;
  double area_ = 0.0;
  Eigen::Matrix<double, 6, 6> dof_matrix_;
  Eigen::Matrix<double, 6, 6> inverse_;
};

struct MorleySolution {
  Eigen::VectorXd dofs;  // in the global numbering of global_dof_map(mesh, 2)
  std::optional<double> error2h;
};

/// Throws MeshError when a cell is not a triangle.
MorleySolution morley_solve(const PolygonMesh& mesh, const ManufacturedSolution& solution,
                            const Material& material, BoundaryData boundary, int quadrature_degree = 0);

struct MorleyComparison {
  double dof_discrepancy = 0.0;        // max |u_vem - u_morley| / max |u_morley|
  double stiffness_discrepancy = 0.0;  // max over cells of max entry difference / max entry
  double vem_error2h = 0.0;
  double morley_error2h = 0.0;
};

/// Order-2 VEM against the Morley element for the clamped bubble problem.
MorleyComparison compare_with_vem(std::shared_ptr<const PolygonMesh> mesh, const Material& material,
                                  int quadrature_degree = 0);

}  // namespace ncvem
