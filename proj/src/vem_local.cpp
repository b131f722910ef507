#include "ncvem/vem_local.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ncvem/error.hpp"
#include "ncvem/quadrature.hpp"

namespace ncvem {

DofLayout::DofLayout(int num_vertices, int order) : num_vertices_(num_vertices), order_(order) {
  if (order < 2) throw ConfigError("polynomial order must be at least 2, got " + std::to_string(order));
  if (num_vertices < 3) throw ConfigError("a cell needs at least three vertices");
  info_.reserve(size());
  for (int v = 0; v < num_vertices_; ++v) info_.push_back({DofKind::Vertex, v, 0});
  for (int e = 0; e < num_vertices_; ++e)
    for (int k = 0; k < normal_moments_per_edge(); ++k) info_.push_back({DofKind::EdgeNormal, e, k});
  for (int e = 0; e < num_vertices_; ++e)
    for (int k = 0; k < value_moments_per_edge(); ++k) info_.push_back({DofKind::EdgeValue, e, k});
  for (int a = 0; a < cell_moments(); ++a) info_.push_back({DofKind::CellMoment, 0, a});
}

DofLayout dof_layout(const CellGeometry& cell, int order) { return DofLayout(cell.num_vertices(), order); }

namespace {

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

Eigen::VectorXd compute_dofs(const CellGeometry& cell, int order, const SmoothField& field,
                             int quadrature_degree) {
  const DofLayout layout(cell.num_vertices(), order);
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(layout.size());

  for (int v = 0; v < cell.num_vertices(); ++v) dofs[layout.vertex_dof(v)] = field.value(cell.vertices[v]);

  for (int e = 0; e < cell.num_vertices(); ++e) {
    const EdgeGeometry& edge = cell.edges[e];
    const EdgeQuadrature q = edge_quadrature(edge.a, edge.b, quadrature_degree);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double dn = dot(field.gradient(q.points[i]), edge.normal);
      const double w = layout.value_moments_per_edge() > 0 ? field.value(q.points[i]) : 0.0;
      double sk = 1.0;
      for (int k = 0; k < layout.normal_moments_per_edge(); ++k, sk *= q.params[i]) {
        dofs[layout.edge_normal_dof(e, k)] += q.weights[i] * dn * sk;
        if (k < layout.value_moments_per_edge())
          dofs[layout.edge_value_dof(e, k)] += q.weights[i] * w * sk / edge.length;
      }
    }
  }

  if (layout.cell_moments() > 0) {
    const ScaledMonomials basis = cell_basis(cell, order - 4);
    const QuadratureRule q = polygon_quadrature(cell, quadrature_degree);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double w = q.weights[i] * field.value(q.points[i]) / cell.area;
      const Eigen::VectorXd m = basis.values(q.points[i]);
      for (int a = 0; a < layout.cell_moments(); ++a) dofs[layout.cell_dof(a)] += w * m[a];
    }
  }
  return dofs;
}

Eigen::MatrixXd monomial_dof_matrix(const CellGeometry& cell, const ScaledMonomials& basis) {
  const int order = basis.order();
  const DofLayout layout(cell.num_vertices(), order);
  const int np = basis.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(layout.size(), np);

  for (int v = 0; v < cell.num_vertices(); ++v) M.row(layout.vertex_dof(v)) = basis.values(cell.vertices[v]).transpose();

  for (int e = 0; e < cell.num_vertices(); ++e) {
    const EdgeGeometry& edge = cell.edges[e];
    const EdgeQuadrature q = edge_quadrature(edge.a, edge.b, 2 * order);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const Eigen::VectorXd val = basis.values(q.points[i]);
      const Eigen::VectorXd dn =
          edge.normal.x * basis.values(q.points[i], 1, 0) + edge.normal.y * basis.values(q.points[i], 0, 1);
      for (int k = 0; k < layout.normal_moments_per_edge(); ++k) {
        const double sk = ipow(q.params[i], k);
        M.row(layout.edge_normal_dof(e, k)) += (q.weights[i] * sk) * dn.transpose();
        if (k < layout.value_moments_per_edge())
          M.row(layout.edge_value_dof(e, k)) += (q.weights[i] * sk / edge.length) * val.transpose();
      }
    }
  }

  if (layout.cell_moments() > 0) {
    const QuadratureRule q = polygon_quadrature(cell, 2 * order);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const Eigen::VectorXd m = basis.values(q.points[i]);
      for (int a = 0; a < layout.cell_moments(); ++a)
        M.row(layout.cell_dof(a)) += (q.weights[i] * m[a] / cell.area) * m.transpose();
    }
  }
  return M;
}

Eigen::MatrixXd projector_rhs(const CellGeometry& cell, const ScaledMonomials& basis,
                              const Material& material) {
  const int order = basis.order();
  const DofLayout layout(cell.num_vertices(), order);
  const int np = basis.size();
  const int nv = cell.num_vertices();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(np, layout.size());

  for (int b = 0; b < np; ++b) {
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(np);
    unit[b] = 1.0;

    // D int_K bilap(m_b) v: bilap(m_b) lies in P^(order-4), read from the cell moments
    if (layout.cell_moments() > 0) {
      const Eigen::VectorXd bilap = basis.differentiate(unit, 4, 0) + 2.0 * basis.differentiate(unit, 2, 2) +
                                    basis.differentiate(unit, 0, 4);
      for (int a = 0; a < layout.cell_moments(); ++a)
        B(b, layout.cell_dof(a)) += material.rigidity * cell.area * bilap[a];
    }

    for (int e = 0; e < nv; ++e) {
      const EdgeGeometry& edge = cell.edges[e];
      const PlateEdgeTerms t = plate_edge_operators(basis, unit, edge, material);
      // int_e M_nn(m_b) d_n v ds
      for (int k = 0; k < layout.normal_moments_per_edge(); ++k)
        B(b, layout.edge_normal_dof(e, k)) += t.bending_moment.coeffs[k];
      // -int_e T(m_b) v ds
      for (int k = 0; k < layout.value_moments_per_edge(); ++k)
        B(b, layout.edge_value_dof(e, k)) -= t.shear.coeffs[k] * edge.length;
      // corner jumps of the twisting moment
      B(b, layout.vertex_dof(e)) += t.corner[0];
      B(b, layout.vertex_dof((e + 1) % nv)) += t.corner[1];
    }
  }
  return B;
}

LocalKernels elliptic_projector(const CellGeometry& cell, int order, const Material& material) {
  const ScaledMonomials basis = cell_basis(cell, order);
  const DofLayout layout(cell.num_vertices(), order);
  const int np = basis.size();
  const int nk = layout.size();
  const int nv = cell.num_vertices();

  LocalKernels k;
  k.order = order;
  k.G = bilinear_gram(basis, cell, material);
  k.B = projector_rhs(cell, basis, material);
  k.dof_matrix = monomial_dof_matrix(cell, basis);

  // vertex-sum inner product against 1, x, y
  k.constraint = Eigen::MatrixXd::Zero(3, np);
  k.constraint_rhs = Eigen::MatrixXd::Zero(3, nk);
  for (int v = 0; v < nv; ++v) {
    const Eigen::VectorXd m = basis.values(cell.vertices[v]);
    for (int i = 0; i < 3; ++i) {
      k.constraint.row(i) += m[i] * m.transpose();
      k.constraint_rhs(i, layout.vertex_dof(v)) += m[i];
    }
  }

  const double alpha = std::max(k.G.cwiseAbs().maxCoeff(), material.rigidity);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(np + 3, np + 3);
  A.topLeftCorner(np, np) = k.G;
  A.topRightCorner(np, 3) = alpha * k.constraint.transpose();
  A.bottomLeftCorner(3, np) = alpha * k.constraint;
  Eigen::MatrixXd rhs(np + 3, nk);
  rhs.topRows(np) = k.B;
  rhs.bottomRows(3) = alpha * k.constraint_rhs;

  // symmetric diagonal equilibration; at high order the monomial rows of G
  // span several magnitudes and the unscaled solve loses about a digit
  Eigen::VectorXd scale(np + 3);
  for (int i = 0; i < np + 3; ++i) scale[i] = 1.0 / std::sqrt(A.row(i).cwiseAbs().maxCoeff());
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(scale.asDiagonal() * A * scale.asDiagonal());
  if (!(lu.rcond() > 1e-14)) throw ProjectorError(-1, "singular projector system (degenerate cell)");
  const Eigen::MatrixXd sol = scale.asDiagonal() * lu.solve(scale.asDiagonal() * rhs);
  k.Pi = sol.topRows(np);
  return k;
}

void enhanced_l2_projector(const CellGeometry& cell, LocalKernels& k) {
  const int order = k.order;
  const ScaledMonomials basis = cell_basis(cell, order);
  const DofLayout layout(cell.num_vertices(), order);
  const int np = basis.size();
  const int n2 = poly_dim(order - 2);
  const int n4 = poly_dim(order - 4);

  // H(a, b) = int_K m_a m_b for |a| <= order-2, |b| <= order
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n2, np);
  const QuadratureRule q = polygon_quadrature(cell, 2 * order - 2);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const Eigen::VectorXd m = basis.values(q.points[i]);
    H.noalias() += q.weights[i] * m.head(n2) * m.transpose();
  }
  k.mass = H.leftCols(n2);
  k.mass = 0.5 * (k.mass + k.mass.transpose()).eval();

  // low moments are DOFs; the rest come from the elliptic projection
  Eigen::MatrixXd moments = H * k.Pi;
  for (int a = 0; a < n4; ++a) {
    moments.row(a).setZero();
    moments(a, layout.cell_dof(a)) = cell.area;
  }
  k.moment_op = k.mass.ldlt().solve(moments);
}

void local_stiffness(const CellGeometry& cell, const Material& material, LocalKernels& k) {
  const int nk = static_cast<int>(k.Pi.cols());
  k.consistency = k.Pi.transpose() * k.G * k.Pi;
  k.consistency = 0.5 * (k.consistency + k.consistency.transpose()).eval();

  // DOF product weighted by the consistency diagonal (never below the plain
  // D h^-2 weight), so that the small high-order edge moments are still
  // controlled on the projector complement
  const double h2 = cell.diameter * cell.diameter;
  Eigen::VectorXd weight(nk);
  for (int i = 0; i < nk; ++i) weight[i] = std::max(material.rigidity / h2, k.consistency(i, i));

  const Eigen::MatrixXd complement = Eigen::MatrixXd::Identity(nk, nk) - k.dof_matrix * k.Pi;
  k.stabilization = complement.transpose() * weight.asDiagonal() * complement;
  k.stabilization = 0.5 * (k.stabilization + k.stabilization.transpose()).eval();
  k.stiffness = k.consistency + k.stabilization;
}

LocalKernels compute_local_kernels(const CellGeometry& cell, int order, const Material& material) {
  LocalKernels k = elliptic_projector(cell, order, material);
  enhanced_l2_projector(cell, k);
  local_stiffness(cell, material, k);
  return k;
}

Eigen::VectorXd local_load(const CellGeometry& cell, const LocalKernels& k, const ScalarField& load,
                           int quadrature_degree) {
  const ScaledMonomials basis = cell_basis(cell, k.order - 2);
  Eigen::VectorXd fm = Eigen::VectorXd::Zero(basis.size());
  const QuadratureRule q = polygon_quadrature(cell, quadrature_degree);
  for (std::size_t i = 0; i < q.size(); ++i) fm += (q.weights[i] * load(q.points[i])) * basis.values(q.points[i]);
  return k.moment_op.transpose() * fm;
}

}  // namespace ncvem
