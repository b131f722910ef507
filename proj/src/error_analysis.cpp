#include "ncvem/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ncvem/error.hpp"
#include "ncvem/quadrature.hpp"

namespace ncvem {

ScalarField ManufacturedSolution::load(const Material& material) const {
  const double d = material.rigidity;
  return [d, f = bilaplacian](Point2 p) { return d * f(p); };
}

ManufacturedSolution plate_bubble() {
  // u = X(x) X(y), X(t) = t^2 (1 - t)^2
  auto X = [](double t) { return t * t * (1.0 - t) * (1.0 - t); };
  auto dX = [](double t) { return 2.0 * t - 6.0 * t * t + 4.0 * t * t * t; };
  auto d2X = [](double t) { return 2.0 - 12.0 * t + 12.0 * t * t; };
  ManufacturedSolution u;
  u.name = "bubble";
  u.value = [X](Point2 p) { return X(p.x) * X(p.y); };
  u.gradient = [X, dX](Point2 p) { return Point2{dX(p.x) * X(p.y), X(p.x) * dX(p.y)}; };
  u.bilaplacian = [X, d2X](Point2 p) { return 24.0 * X(p.y) + 2.0 * d2X(p.x) * d2X(p.y) + 24.0 * X(p.x); };
  return u;
}

namespace {

// d^k/dt^k t^m
double dpow(double t, int m, int k) {
  if (k > m) return 0.0;
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= m - i;
  return c * std::pow(t, m - k);
}

}  // namespace

ManufacturedSolution monomial_solution(int mu, int nu) {
  if (mu < 0 || nu < 0) throw ConfigError("monomial exponents must be non-negative");
  ManufacturedSolution u;
  u.name = "x^" + std::to_string(mu) + " y^" + std::to_string(nu);
  u.value = [=](Point2 p) { return dpow(p.x, mu, 0) * dpow(p.y, nu, 0); };
  u.gradient = [=](Point2 p) {
    return Point2{dpow(p.x, mu, 1) * dpow(p.y, nu, 0), dpow(p.x, mu, 0) * dpow(p.y, nu, 1)};
  };
  u.bilaplacian = [=](Point2 p) {
    return dpow(p.x, mu, 4) * dpow(p.y, nu, 0) + 2.0 * dpow(p.x, mu, 2) * dpow(p.y, nu, 2) +
           dpow(p.x, mu, 0) * dpow(p.y, nu, 4);
  };
  return u;
}

Eigen::VectorXd interpolate(const Discretization& disc, const SmoothField& field, int quadrature_degree) {
  const GlobalDofMap& map = disc.dof_map();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(map.num_dofs);
  std::vector<uint8_t> done(map.num_dofs, 0);
  for (int c = 0; c < disc.mesh().num_cells(); ++c) {
    const auto& dofs = map.cell_dofs[c];
    const Eigen::VectorXd local = compute_dofs(disc.mesh().cell_geometry(c), disc.order(), field, quadrature_degree);
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      if (done[dofs[i]]) continue;
      x[dofs[i]] = map.cell_signs[c][i] * local[i];
      done[dofs[i]] = 1;
    }
  }
  return x;
}

ProjectedField project_discrete(const Discretization& disc, const Eigen::VectorXd& global_dofs) {
  if (global_dofs.size() != disc.dof_map().num_dofs) throw ConfigError("DOF vector length does not match the mesh");
  ProjectedField out;
  out.order = disc.order();
  out.coeffs.reserve(disc.mesh().num_cells());
  for (int c = 0; c < disc.mesh().num_cells(); ++c)
    out.coeffs.push_back(disc.kernels(c).Pi * disc.dof_map().gather(c, global_dofs));
  return out;
}

ProjectedField project_exact(const Discretization& disc, const SmoothField& field, int quadrature_degree) {
  ProjectedField out;
  out.order = disc.order();
  out.coeffs.reserve(disc.mesh().num_cells());
  for (int c = 0; c < disc.mesh().num_cells(); ++c)
    out.coeffs.push_back(disc.kernels(c).Pi *
                         compute_dofs(disc.mesh().cell_geometry(c), disc.order(), field, quadrature_degree));
  return out;
}

namespace {

double cell_h2_seminorm_sq(const CellGeometry& cell, int order, const Eigen::VectorXd& coeffs) {
  if (order < 2) return 0.0;
  const ScaledMonomials basis = cell_basis(cell, order);
  const Eigen::VectorXd pxx = basis.differentiate(coeffs, 2, 0);
  const Eigen::VectorXd pxy = basis.differentiate(coeffs, 1, 1);
  const Eigen::VectorXd pyy = basis.differentiate(coeffs, 0, 2);
  const QuadratureRule q = polygon_quadrature(cell, 2 * order - 4);
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const Eigen::VectorXd m = basis.values(q.points[i]);
    const double a = pxx.dot(m), b = pxy.dot(m), c = pyy.dot(m);
    sum += q.weights[i] * (a * a + b * b + c * c);
  }
  return sum;
}

}  // namespace

double broken_h2_seminorm(const PolygonMesh& mesh, const ProjectedField& field) {
  if (static_cast<int>(field.coeffs.size()) != mesh.num_cells())
    throw ConfigError("projected field does not match the mesh");
  double sum = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) sum += cell_h2_seminorm_sq(mesh.cell_geometry(c), field.order, field.coeffs[c]);
  return std::sqrt(sum);
}

double error_2h(const PolygonMesh& mesh, const ProjectedField& u, const ProjectedField& uh) {
  if (u.order != uh.order || u.coeffs.size() != uh.coeffs.size())
    throw ConfigError("projected fields have different orders or cell counts");
  ProjectedField diff = u;
  for (std::size_t c = 0; c < diff.coeffs.size(); ++c) diff.coeffs[c] -= uh.coeffs[c];
  const double ref = broken_h2_seminorm(mesh, u);
  // size the Hessian would have if no cancellation happened; a reference
  // below round-off of that size is a piecewise linear field
  double scale = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry& g = mesh.cell_geometry(c);
    const double r = 0.5 * g.diameter;
    const double m = u.coeffs[c].cwiseAbs().maxCoeff() / (r * r);
    scale += g.area * m * m;
  }
  if (!(ref > 1e-10 * std::sqrt(scale))) throw ZeroReferenceNorm("reference field has zero broken H2 seminorm");
  return broken_h2_seminorm(mesh, diff) / ref;
}

int SolveOptions::effective_quadrature_degree() const {
  if (quadrature_degree < 0) throw ConfigError("quadrature degree must be non-negative");
  return quadrature_degree > 0 ? quadrature_degree : field_quadrature_degree(order);
}

SolveResult solve_problem(std::shared_ptr<const PolygonMesh> mesh, const ManufacturedSolution& solution,
                          const SolveOptions& options) {
  return solve_problem(std::make_shared<const Discretization>(std::move(mesh), options.order, options.material),
                       solution, options);
}

SolveResult solve_problem(std::shared_ptr<const Discretization> disc, const ManufacturedSolution& solution,
                          const SolveOptions& options) {
  const int qd = options.effective_quadrature_degree();
  const BoundarySpec bc = options.boundary == BoundaryData::Clamped ? BoundarySpec::clamped()
                                                                     : BoundarySpec::dirichlet(solution.field());
  const SparseSystem sys = assemble_system(*disc, solution.load(disc->material()), bc, qd);

  SolveResult r;
  r.discretization = disc;
  r.dofs = solve_spd(sys, &r.report);
  r.exact_dofs = interpolate(*disc, solution.field(), qd);
  const double scale = r.exact_dofs.cwiseAbs().maxCoeff();
  const double diff = (r.dofs - r.exact_dofs).cwiseAbs().maxCoeff();
  r.dof_error = scale > 0.0 ? diff / scale : diff;

  const ProjectedField pu = project_exact(*disc, solution.field(), qd);
  const ProjectedField puh = project_discrete(*disc, r.dofs);
  try {
    r.error2h = error_2h(disc->mesh(), pu, puh);
  } catch (const ZeroReferenceNorm&) {
    r.error2h.reset();
  }
  return r;
}

void compute_rates(std::vector<ConvergenceRecord>& records) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].rate_h.reset();
    records[i].rate_dof.reset();
    if (i == 0) continue;
    const ConvergenceRecord& a = records[i - 1];
    const ConvergenceRecord& b = records[i];
    const double le = std::log(a.error2h / b.error2h);
    records[i].rate_h = le / std::log(a.h / b.h);
    records[i].rate_dof = le / std::log(static_cast<double>(b.ndof) / static_cast<double>(a.ndof));
  }
}

double windowed_slope(const std::vector<ConvergenceRecord>& records, std::size_t first, std::size_t last,
                      bool versus_dofs) {
  if (last >= records.size() || last <= first) throw ConfigError("slope window needs at least two records");
  const std::size_t n = last - first + 1;
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ConvergenceRecord& r = records[first + i];
    A(i, 0) = versus_dofs ? -std::log(static_cast<double>(r.ndof)) : std::log(r.h);
    A(i, 1) = 1.0;
    b[i] = std::log(r.error2h);
  }
  return A.colPivHouseholderQr().solve(b)[0];
}

std::vector<ConvergenceRecord> convergence_study(const StudyOptions& options) {
  const int order = options.solve.order;
  if (order < 2 || order > 5) throw ConfigError("order must be in [2, 5], got " + std::to_string(order));
  const int n_limit = order == 5 ? 4 : 8;
  if (options.n_min < 0 || options.n_max > n_limit || options.n_min > options.n_max)
    throw ConfigError("mesh levels must satisfy 0 <= n_min <= n_max <= " + std::to_string(n_limit) +
                      " for order " + std::to_string(order));
  options.solve.material.validate();

  std::vector<ConvergenceRecord> records;
  const std::string family = family_name(options.family);
  for (int n = options.n_min; n <= options.n_max; ++n) {
    const std::string context = family + ", n=" + std::to_string(n) + ", order " + std::to_string(order) + ": ";
    try {
      auto mesh = std::make_shared<const PolygonMesh>(build_family(options.family, n, options.mesh));
      SolveOptions so = options.solve;
      so.boundary = BoundaryData::Clamped;
      const SolveResult r = solve_problem(mesh, plate_bubble(), so);
      ConvergenceRecord rec;
      rec.family = family;
      rec.n = n;
      rec.h = mesh->mesh_size();
      rec.ndof = r.discretization->dof_map().num_dofs;
      rec.error2h = r.error2h.value_or(0.0);
      records.push_back(rec);
      compute_rates(records);
      if (options.progress) options.progress(records.back());
    } catch (const Error& e) {
      throw Error(e.category(), context + e.what());
    }
  }
  return records;
}

namespace {

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string study_csv(const std::vector<ConvergenceRecord>& records) {
  std::ostringstream out;
  out << "family,n,h,ndof,error2h,rate_h,rate_dof\n";
  for (const auto& r : records) {
    out << r.family << ',' << r.n << ',' << fmt12(r.h) << ',' << r.ndof << ',' << fmt12(r.error2h) << ','
        << (r.rate_h ? fmt12(*r.rate_h) : "") << ',' << (r.rate_dof ? fmt12(*r.rate_dof) : "") << '\n';
  }
  return out.str();
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

void write_study_csv(const std::vector<ConvergenceRecord>& records, const std::filesystem::path& path) {
  write_text(path, study_csv(records));
}

void write_plot_data(const std::vector<ConvergenceRecord>& records, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "# h ndof error2h\n";
  for (const auto& r : records) out << fmt12(r.h) << ' ' << r.ndof << ' ' << fmt12(r.error2h) << '\n';
  write_text(path, out.str());
}

std::vector<PatchResult> patch_test(std::shared_ptr<const PolygonMesh> mesh, int order, const Material& material,
                                    int quadrature_degree) {
  SolveOptions so;
  so.order = order;
  so.material = material;
  so.quadrature_degree = quadrature_degree;
  so.boundary = BoundaryData::FromSolution;
  auto disc = std::make_shared<const Discretization>(std::move(mesh), order, material);
  std::vector<PatchResult> out;
  for (int d = 0; d <= order; ++d) {
    for (int mu = d; mu >= 0; --mu) {
      const SolveResult r = solve_problem(disc, monomial_solution(mu, d - mu), so);
      out.push_back({mu, d - mu, r.error2h, r.dof_error});
    }
  }
  return out;
}

}  // namespace ncvem
