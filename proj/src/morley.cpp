#include "ncvem/morley.hpp"

#include <algorithm>
#include <cmath>

#include "ncvem/assembly.hpp"
#include "ncvem/error.hpp"
#include "ncvem/quadrature.hpp"

namespace ncvem {

namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;

// monomials 1, s, t, s^2, st, t^2 in s = (x - x0)/h, t = (y - y0)/h
Vec6 p2_values(Point2 p, Point2 origin, double h) {
  const double s = (p.x - origin.x) / h, t = (p.y - origin.y) / h;
  Vec6 m;
  m << 1.0, s, t, s * s, s * t, t * t;
  return m;
}

Vec6 p2_grad_dot(Point2 p, Point2 origin, double h, Point2 n) {
  const double s = (p.x - origin.x) / h, t = (p.y - origin.y) / h;
  Vec6 g;
  g << 0.0, n.x / h, n.y / h, 2.0 * s * n.x / h, (t * n.x + s * n.y) / h, 2.0 * t * n.y / h;
  return g;
}

}  // namespace

MorleyElement::MorleyElement(Point2 a, Point2 b, Point2 c) : v_{a, b, c} {
  area_ = 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
  scale_ = std::max({distance(a, b), distance(b, c), distance(c, a)});
  if (!(area_ > 1e-14 * scale_ * scale_)) throw MeshError("Morley element needs a counterclockwise, nondegenerate triangle");
  for (int i = 0; i < 3; ++i) {
    const Point2 p = v_[i], q = v_[(i + 1) % 3];
    const double len = distance(p, q);
    const Point2 n{(q.y - p.y) / len, -(q.x - p.x) / len};
    dof_matrix_.row(i) = p2_values(p, v_[0], scale_).transpose();
    // the normal derivative is linear along the edge: midpoint rule is exact
    dof_matrix_.row(3 + i) = len * p2_grad_dot(0.5 * (p + q), v_[0], scale_, n).transpose();
  }
  inverse_ = dof_matrix_.fullPivLu().inverse();
}

Vec6 MorleyElement::dofs_of(const Vec6& coeffs) const { return dof_matrix_ * coeffs; }

Vec6 MorleyElement::coefficients(const Vec6& dofs) const { return inverse_ * dofs; }

std::array<double, 3> MorleyElement::hessian(const Vec6& dofs) const {
  const Vec6 c = coefficients(dofs);
  const double h2 = scale_ * scale_;
  return {2.0 * c[3] / h2, c[4] / h2, 2.0 * c[5] / h2};
}

Eigen::Matrix<double, 6, 6> MorleyElement::stiffness(const Material& material) const {
  std::array<std::array<double, 3>, 6> H;
  for (int i = 0; i < 6; ++i) H[i] = hessian(Vec6::Unit(i));
  const double nu = material.poisson;
  Eigen::Matrix<double, 6, 6> K;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const double tr = (H[i][0] + H[i][2]) * (H[j][0] + H[j][2]);
      const double full = H[i][0] * H[j][0] + 2.0 * H[i][1] * H[j][1] + H[i][2] * H[j][2];
      K(i, j) = material.rigidity * area_ * (nu * tr + (1.0 - nu) * full);
    }
  }
  return 0.5 * (K + K.transpose());
}

Vec6 MorleyElement::basis_integrals() const {
  // edge-midpoint rule, exact on P2
  Vec6 mean = Vec6::Zero();
  for (int i = 0; i < 3; ++i) mean += p2_values(0.5 * (v_[i] + v_[(i + 1) % 3]), v_[0], scale_) / 3.0;
  return area_ * (inverse_.transpose() * mean);
}

Vec6 MorleyElement::interpolate(const SmoothField& field, int quadrature_degree) const {
  Vec6 d = Vec6::Zero();
  for (int i = 0; i < 3; ++i) {
    const Point2 p = v_[i], q = v_[(i + 1) % 3];
    const double len = distance(p, q);
    const Point2 n{(q.y - p.y) / len, -(q.x - p.x) / len};
    d[i] = field.value(p);
    const EdgeQuadrature eq = edge_quadrature(p, q, quadrature_degree);
    for (std::size_t k = 0; k < eq.size(); ++k) d[3 + i] += eq.weights[k] * dot(field.gradient(eq.points[k]), n);
  }
  return d;
}

namespace {

std::vector<MorleyElement> morley_elements(const PolygonMesh& mesh) {
  std::vector<MorleyElement> out;
  out.reserve(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cv = mesh.cells()[c].vertices;
    if (cv.size() != 3) throw MeshError("Morley solver needs a triangular mesh; cell " + std::to_string(c) +
                                        " has " + std::to_string(cv.size()) + " vertices");
    const auto& p = mesh.vertices();
    out.emplace_back(p[cv[0]], p[cv[1]], p[cv[2]]);
  }
  return out;
}

}  // namespace

MorleySolution morley_solve(const PolygonMesh& mesh, const ManufacturedSolution& solution,
                            const Material& material, BoundaryData boundary, int quadrature_degree) {
  material.validate();
  const int qd = quadrature_degree > 0 ? quadrature_degree : field_quadrature_degree(2);
  const std::vector<MorleyElement> elems = morley_elements(mesh);
  const GlobalDofMap map = global_dof_map(mesh, 2);
  const int n = map.num_dofs;
  const ScalarField f = solution.load(material);

  // exact DOFs: boundary data and interpolant for the error
  Eigen::VectorXd exact = Eigen::VectorXd::Zero(n);
  std::vector<Vec6> local_exact(elems.size());
  for (std::size_t c = 0; c < elems.size(); ++c) {
    local_exact[c] = elems[c].interpolate(solution.field(), qd);
    for (int i = 0; i < 6; ++i) exact[map.cell_dofs[c][i]] = map.cell_signs[c][i] * local_exact[c][i];
  }

  SparseSystem sys;
  sys.num_dofs = n;
  sys.constrained_values = Eigen::VectorXd::Zero(n);
  std::vector<int> reduced(n, -1);
  for (int g = 0; g < n; ++g) {
    if (map.constrained[g]) {
      if (boundary == BoundaryData::FromSolution) sys.constrained_values[g] = exact[g];
      continue;
    }
    reduced[g] = static_cast<int>(sys.free_dofs.size());
    sys.free_dofs.push_back(g);
  }
  const int nfree = static_cast<int>(sys.free_dofs.size());
  sys.rhs = Eigen::VectorXd::Zero(nfree);

  std::vector<Eigen::Triplet<double>> lower;
  for (std::size_t c = 0; c < elems.size(); ++c) {
    const auto& cv = mesh.cells()[c].vertices;
    const auto& p = mesh.vertices();
    const QuadratureRule q = triangle_quadrature(p[cv[0]], p[cv[1]], p[cv[2]], qd);
    double fint = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) fint += q.weights[k] * f(q.points[k]);
    const Vec6 load = (fint / elems[c].area()) * elems[c].basis_integrals();
    const Eigen::Matrix<double, 6, 6> K = elems[c].stiffness(material);
    for (int a = 0; a < 6; ++a) {
      const int ga = map.cell_dofs[c][a];
      const int ra = reduced[ga];
      if (ra < 0) continue;
      const double sa = map.cell_signs[c][a];
      sys.rhs[ra] += sa * load[a];
      for (int b = 0; b < 6; ++b) {
        const int gb = map.cell_dofs[c][b];
        const double kab = sa * map.cell_signs[c][b] * K(a, b);
        const int rb = reduced[gb];
        if (rb < 0)
          sys.rhs[ra] -= kab * sys.constrained_values[gb];
        else if (rb <= ra)
          lower.emplace_back(ra, rb, kab);
      }
    }
  }
  Eigen::SparseMatrix<double> L(nfree, nfree);
  L.setFromTriplets(lower.begin(), lower.end());
  Eigen::SparseMatrix<double> strict = L.triangularView<Eigen::StrictlyLower>();
  sys.matrix = L + Eigen::SparseMatrix<double>(strict.transpose());

  MorleySolution out;
  out.dofs = solve_spd(sys);

  double num = 0.0, den = 0.0, big = 0.0;
  for (std::size_t c = 0; c < elems.size(); ++c) {
    Vec6 uh;
    for (int i = 0; i < 6; ++i) uh[i] = map.cell_signs[c][i] * out.dofs[map.cell_dofs[c][i]];
    const auto hu = elems[c].hessian(local_exact[c]);
    const auto hd = elems[c].hessian(local_exact[c] - uh);
    den += elems[c].area() * (hu[0] * hu[0] + hu[1] * hu[1] + hu[2] * hu[2]);
    num += elems[c].area() * (hd[0] * hd[0] + hd[1] * hd[1] + hd[2] * hd[2]);
    const double m = elems[c].coefficients(local_exact[c]).cwiseAbs().maxCoeff() / (elems[c].scale() * elems[c].scale());
    big += elems[c].area() * m * m;
  }
  // a reference at round-off level means a piecewise linear solution
  if (den > 1e-20 * big) out.error2h = std::sqrt(num / den);
  return out;
}

MorleyComparison compare_with_vem(std::shared_ptr<const PolygonMesh> mesh, const Material& material,
                                  int quadrature_degree) {
  SolveOptions so;
  so.order = 2;
  so.material = material;
  so.quadrature_degree = quadrature_degree;
  const ManufacturedSolution u = plate_bubble();
  const SolveResult vem = solve_problem(mesh, u, so);
  const MorleySolution mor = morley_solve(*mesh, u, material, BoundaryData::Clamped, quadrature_degree);

  MorleyComparison cmp;
  const double scale = mor.dofs.cwiseAbs().maxCoeff();
  cmp.dof_discrepancy = (vem.dofs - mor.dofs).cwiseAbs().maxCoeff() / (scale > 0.0 ? scale : 1.0);
  const std::vector<MorleyElement> elems = morley_elements(*mesh);
  for (std::size_t c = 0; c < elems.size(); ++c) {
    const Eigen::Matrix<double, 6, 6> K = elems[c].stiffness(material);
    const Eigen::MatrixXd& Kv = vem.discretization->kernels(static_cast<int>(c)).stiffness;
    cmp.stiffness_discrepancy =
        std::max(cmp.stiffness_discrepancy, (Kv - K).cwiseAbs().maxCoeff() / K.cwiseAbs().maxCoeff());
  }
  cmp.vem_error2h = vem.error2h.value_or(0.0);
  cmp.morley_error2h = mor.error2h.value_or(0.0);
  return cmp;
}

}  // namespace ncvem
