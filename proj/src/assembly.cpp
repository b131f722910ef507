#include "ncvem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include <Eigen/SparseCholesky>

#include "ncvem/error.hpp"

namespace ncvem {

int GlobalDofMap::num_constrained() const {
  return static_cast<int>(std::count(constrained.begin(), constrained.end(), uint8_t{1}));
}

Eigen::VectorXd GlobalDofMap::gather(int cell, const Eigen::VectorXd& global) const {
  const auto& dofs = cell_dofs[cell];
  const auto& signs = cell_signs[cell];
  Eigen::VectorXd local(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) local[i] = signs[i] * global[dofs[i]];
  return local;
}

long long closed_form_dof_count(long long num_vertices, long long num_edges, long long num_cells,
                                int order) {
  long long n = num_vertices + (order - 1) * num_edges;
  if (order >= 3) n += (order - 2) * num_edges;
  if (order >= 4) n += (order - 2) * (order - 3) / 2 * num_cells;
  return n;
}

GlobalDofMap global_dof_map(const PolygonMesh& mesh, int order) {
  if (order < 2) throw ConfigError("polynomial order must be at least 2, got " + std::to_string(order));
  GlobalDofMap map;
  map.order = order;
  const int nvalue = order >= 3 ? order - 2 : 0;
  map.edge_block = (order - 1) + nvalue;
  map.cell_block = poly_dim(order - 4);
  map.edge_offset = mesh.num_vertices();
  map.cell_offset = map.edge_offset + map.edge_block * mesh.num_edges();
  map.num_dofs = map.cell_offset + map.cell_block * mesh.num_cells();

  map.constrained.assign(map.num_dofs, 0);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (mesh.is_boundary_vertex(v)) map.constrained[v] = 1;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edges()[e].boundary) continue;
    for (int k = 0; k < map.edge_block; ++k) map.constrained[map.edge_offset + e * map.edge_block + k] = 1;
  }

  map.cell_dofs.resize(mesh.num_cells());
  map.cell_signs.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const PolygonCell& cell = mesh.cells()[c];
    const DofLayout layout(static_cast<int>(cell.vertices.size()), order);
    auto& dofs = map.cell_dofs[c];
    auto& signs = map.cell_signs[c];
    dofs.assign(layout.size(), -1);
    signs.assign(layout.size(), 1);
    for (std::size_t v = 0; v < cell.vertices.size(); ++v) dofs[layout.vertex_dof(v)] = map.vertex_dof(cell.vertices[v]);
    for (std::size_t e = 0; e < cell.edges.size(); ++e) {
      const bool reversed = cell.edge_orientation[e] < 0;
      // reversal flips the normal and maps s~ to -s~
      for (int k = 0; k < layout.normal_moments_per_edge(); ++k) {
        const int i = layout.edge_normal_dof(e, k);
        dofs[i] = map.edge_normal_dof(cell.edges[e], k);
        signs[i] = reversed ? ((k % 2 == 0) ? -1 : 1) : 1;
      }
      for (int k = 0; k < layout.value_moments_per_edge(); ++k) {
        const int i = layout.edge_value_dof(e, k);
        dofs[i] = map.edge_value_dof(cell.edges[e], k);
        signs[i] = reversed ? ((k % 2 == 0) ? 1 : -1) : 1;
      }
    }
    for (int a = 0; a < layout.cell_moments(); ++a) dofs[layout.cell_dof(a)] = map.cell_dof(c, a);
  }
  return map;
}

Discretization::Discretization(std::shared_ptr<const PolygonMesh> mesh, int order, const Material& material)
    : mesh_(std::move(mesh)), order_(order), material_(material) {
  if (!mesh_) throw ConfigError("no mesh given");
  material_.validate();
  map_ = global_dof_map(*mesh_, order_);
  kernels_.reserve(mesh_->num_cells());
  for (int c = 0; c < mesh_->num_cells(); ++c) {
    try {
      kernels_.push_back(compute_local_kernels(mesh_->cell_geometry(c), order_, material_));
    } catch (const ProjectorError& e) {
      throw ProjectorError(c, "cell " + std::to_string(c) + ": " + e.what());
    }
  }
}

SparseSystem assemble_system(const Discretization& disc, const ScalarField& load, const BoundarySpec& bc,
                             int quadrature_degree) {
  const PolygonMesh& mesh = disc.mesh();
  const GlobalDofMap& map = disc.dof_map();
  const int n = map.num_dofs;

  SparseSystem sys;
  sys.num_dofs = n;
  sys.constrained_values = Eigen::VectorXd::Zero(n);

  std::vector<uint8_t> fixed(n, 0);
  if (bc.mode != BoundarySpec::Mode::Free) fixed = map.constrained;

  if (bc.mode == BoundarySpec::Mode::StrongDirichlet) {
    if (!bc.field.value || !bc.field.gradient)
      throw ConfigError("strong Dirichlet data needs both a value and a gradient callback");
    std::vector<uint8_t> done(n, 0);
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const auto& dofs = map.cell_dofs[c];
      const bool touches = std::any_of(dofs.begin(), dofs.end(), [&](int g) { return fixed[g] && !done[g]; });
      if (!touches) continue;
      const Eigen::VectorXd local = compute_dofs(mesh.cell_geometry(c), disc.order(), bc.field, quadrature_degree);
      for (std::size_t i = 0; i < dofs.size(); ++i) {
        const int g = dofs[i];
        if (!fixed[g] || done[g]) continue;
        sys.constrained_values[g] = map.cell_signs[c][i] * local[i];
        done[g] = 1;
      }
    }
  }

  std::vector<int> reduced(n, -1);
  for (int g = 0; g < n; ++g) {
    if (fixed[g]) continue;
    reduced[g] = static_cast<int>(sys.free_dofs.size());
    sys.free_dofs.push_back(g);
  }
  const int nfree = static_cast<int>(sys.free_dofs.size());
  sys.rhs = Eigen::VectorXd::Zero(nfree);

  std::vector<Eigen::Triplet<double>> lower;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalKernels& k = disc.kernels(c);
    const auto& dofs = map.cell_dofs[c];
    const auto& signs = map.cell_signs[c];
    const int nk = static_cast<int>(dofs.size());
    const Eigen::VectorXd f = load ? local_load(mesh.cell_geometry(c), k, load, quadrature_degree)
                                   : Eigen::VectorXd::Zero(nk);
    for (int a = 0; a < nk; ++a) {
      const int ra = reduced[dofs[a]];
      if (ra < 0) continue;
      sys.rhs[ra] += signs[a] * f[a];
      for (int b = 0; b < nk; ++b) {
        const double kab = signs[a] * signs[b] * k.stiffness(a, b);
        const int rb = reduced[dofs[b]];
        if (rb < 0) {
          sys.rhs[ra] -= kab * sys.constrained_values[dofs[b]];
        } else if (rb <= ra) {
          // lower triangle only; mirrored below so the matrix is exactly symmetric
          lower.emplace_back(ra, rb, kab);
        }
      }
    }
  }
  Eigen::SparseMatrix<double> L(nfree, nfree);
  L.setFromTriplets(lower.begin(), lower.end());
  Eigen::SparseMatrix<double> strict = L.triangularView<Eigen::StrictlyLower>();
  sys.matrix = L + Eigen::SparseMatrix<double>(strict.transpose());
  sys.matrix.makeCompressed();
  return sys;
}

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

Eigen::VectorXd solve_spd(const SparseSystem& sys, SolveReport* report) {
  Eigen::VectorXd x = sys.constrained_values;
  if (sys.free_dofs.empty()) return x;

  // symmetric diagonal equilibration: the DOF blocks have different units
  const Eigen::VectorXd diag = sys.matrix.diagonal();
  if (!(diag.minCoeff() > 0.0))
    throw SolverError(SolverError::Kind::NotPositiveDefinite, "system matrix has a non-positive diagonal entry");
  const Eigen::VectorXd scale = diag.cwiseSqrt().cwiseInverse();
  const Eigen::SparseMatrix<double> scaled = scale.asDiagonal() * sys.matrix * scale.asDiagonal();

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(scaled);
  if (ldlt.info() != Eigen::Success)
    throw SolverError(SolverError::Kind::Breakdown, "sparse LDL^T factorization failed");
  const Eigen::VectorXd d = ldlt.vectorD();
  const double ratio = d.minCoeff() / d.cwiseAbs().maxCoeff();
  if (report) report->min_pivot_ratio = ratio;
  if (!(ratio > 1e-13))
    throw SolverError(SolverError::Kind::NotPositiveDefinite,
                      "system matrix is not positive definite (smallest pivot ratio " + sci(ratio) + ")");

  // normwise backward error ||r|| / (||A|| ||u|| + ||b||) in the max norm;
  // ||r|| / ||b|| alone cannot reach round-off once cond(A) ~ h^-4 is large
  double anorm = 0.0;
  {
    Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(sys.matrix.rows());
    for (int j = 0; j < sys.matrix.outerSize(); ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, j); it; ++it) rowsum[it.row()] += std::abs(it.value());
    anorm = rowsum.maxCoeff();
  }
  const double bnorm = sys.rhs.cwiseAbs().maxCoeff();
  auto backward_error = [&](const Eigen::VectorXd& r, const Eigen::VectorXd& u) {
    const double denom = anorm * u.cwiseAbs().maxCoeff() + bnorm;
    return denom > 0.0 ? r.cwiseAbs().maxCoeff() / denom : 0.0;
  };

  Eigen::VectorXd u = Eigen::VectorXd::Zero(sys.rhs.size());
  Eigen::VectorXd r = sys.rhs;
  double err = bnorm > 0.0 ? 1.0 : 0.0;
  for (int step = 0; step < 3 && err > 1e-15; ++step) {
    const Eigen::VectorXd du = scale.cwiseProduct(ldlt.solve(scale.cwiseProduct(r)));
    if (ldlt.info() != Eigen::Success || !du.allFinite())
      throw SolverError(SolverError::Kind::Breakdown, "sparse LDL^T solve failed");
    u += du;
    r = sys.rhs - sys.matrix * u;
    err = backward_error(r, u);
  }
  if (report) {
    report->backward_error = err;
    report->relative_residual = sys.rhs.norm() > 0.0 ? r.norm() / sys.rhs.norm() : r.norm();
  }
  if (err > 1e-10) throw SolverError(SolverError::Kind::Residual, "backward error " + sci(err) + " above 1e-10");

  for (std::size_t i = 0; i < sys.free_dofs.size(); ++i) x[sys.free_dofs[i]] = u[i];
  return x;
}

void write_matrix(const Eigen::SparseMatrix<double>& matrix, const std::filesystem::path& path) {
  std::FILE* out = std::fopen(path.string().c_str(), "w");
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  std::fprintf(out, "%ld %ld %ld\n", static_cast<long>(matrix.rows()), static_cast<long>(matrix.cols()),
               static_cast<long>(matrix.nonZeros()));
  for (int j = 0; j < matrix.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, j); it; ++it)
      std::fprintf(out, "%ld %ld %.17g\n", static_cast<long>(it.row()), static_cast<long>(it.col()), it.value());
  if (std::fclose(out) != 0) throw IoError("failed writing " + path.string());
}

}  // namespace ncvem
