// Acceptance gate: one PASS/FAIL line per criterion, details below each line.
//
// Usage: ncvem_acceptance [--known-failures FILE] [--verbose]
// Exit status is 0 when every failing sub-check is listed in FILE and every
// listed sub-check still fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ncvem/error.hpp"
#include "ncvem/error_analysis.hpp"
#include "ncvem/mesh.hpp"
#include "ncvem/morley.hpp"
#include "ncvem/quadrature.hpp"
#include "ncvem/vem_local.hpp"
#include "reference_tables.hpp"
#include "test_support.hpp"

using namespace ncvem;

namespace {

struct SubCheck {
  std::string id;
  bool pass;
  std::string detail;
};

struct Criterion {
  int number;
  std::string title;
  std::function<std::vector<SubCheck>()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const MeshFamily kFamilies[] = {MeshFamily::CrissCross, MeshFamily::Hexagonal, MeshFamily::Octagonal,
                                MeshFamily::RandomQuad};

const ncvem_tests::TableRow* table_of(MeshFamily f) {
  switch (f) {
    case MeshFamily::CrissCross: return ncvem_tests::kCrissCross;
    case MeshFamily::Hexagonal: return ncvem_tests::kHexagonal;
    case MeshFamily::Octagonal: return ncvem_tests::kOctagonal;
    case MeshFamily::RandomQuad: return ncvem_tests::kRandomQuad;
  }
  return nullptr;
}

std::shared_ptr<const PolygonMesh> share(PolygonMesh m) { return std::make_shared<const PolygonMesh>(std::move(m)); }

const Material kMat{1.0, 0.3};

// 1 and 2: counts straight from the tables
std::vector<SubCheck> dof_counts() {
  std::vector<SubCheck> out;
  for (auto f : kFamilies) {
    for (const auto& row : std::span(table_of(f), 9)) {
      const auto mesh = build_family(f, row.n);
      for (int order = 2; order <= 5; ++order) {
        const long long expected = row.ndof[order - 2];
        if (expected == 0) continue;
        const long long got = global_dof_map(mesh, order).num_dofs;
        out.push_back({fmt("1:%s:n%d:l%d", family_name(f).c_str(), row.n, order), got == expected,
                       fmt("%s n=%d l=%d: %lld (table %lld)", family_name(f).c_str(), row.n, order, got, expected)});
      }
    }
  }
  return out;
}

std::vector<SubCheck> topology() {
  std::vector<SubCheck> out;
  for (auto f : kFamilies) {
    for (const auto& row : std::span(table_of(f), 9)) {
      const auto m = build_family(f, row.n);
      const bool ok = m.num_cells() == row.cells && m.num_edges() == row.edges && m.num_vertices() == row.vertices;
      out.push_back({fmt("2:%s:n%d", family_name(f).c_str(), row.n), ok,
                     fmt("%s n=%d: (%d, %d, %d) table (%d, %d, %d), h=%.4g (table %.4g)", family_name(f).c_str(),
                         row.n, m.num_cells(), m.num_edges(), m.num_vertices(), row.cells, row.edges, row.vertices,
                         m.mesh_size(), row.h)});
    }
  }
  return out;
}

std::vector<SubCheck> patch_tests() {
  std::vector<SubCheck> out;
  for (auto f : kFamilies) {
    const auto mesh = share(build_family(f, 0));
    for (int order = 2; order <= 5; ++order) {
      double worst = 0.0;
      int wmu = 0, wnu = 0;
      for (const auto& r : patch_test(mesh, order, kMat)) {
        if (r.error() >= worst) {
          worst = r.error();
          wmu = r.mu;
          wnu = r.nu;
        }
      }
      out.push_back({fmt("3:%s:l%d", family_name(f).c_str(), order), worst <= 1e-8,
                     fmt("%s l=%d: max error %.2e (x^%d y^%d)", family_name(f).c_str(), order, worst, wmu, wnu)});
    }
  }
  return out;
}

std::vector<ConvergenceRecord> study(MeshFamily f, int order, int n_max) {
  StudyOptions s;
  s.family = f;
  s.n_max = n_max;
  s.solve.order = order;
  return convergence_study(s);
}

std::vector<SubCheck> rates() {
  std::vector<SubCheck> out;
  for (auto f : kFamilies) {
    const bool rough = f == MeshFamily::Hexagonal || f == MeshFamily::Octagonal;
    for (int order = 2; order <= 4; ++order) {
      const auto rec = study(f, order, 3);
      const double slope = windowed_slope(rec, 0, 3);
      const double lo = order - 1 - (rough ? 0.35 : 0.25), hi = order - 1 + (rough ? 0.45 : 0.35);
      std::string errs;
      for (const auto& r : rec) errs += fmt(" %.3e", r.error2h);
      out.push_back({fmt("4:%s:l%d", family_name(f).c_str(), order), slope >= lo && slope <= hi,
                     fmt("%s l=%d: slope %.3f in [%.2f, %.2f]; errors%s", family_name(f).c_str(), order, slope, lo,
                         hi, errs.c_str())});
    }
  }
  return out;
}

std::vector<SubCheck> morley() {
  std::vector<SubCheck> out;
  for (int n : {0, 1}) {
    const auto c = compare_with_vem(share(build_criss_cross(n)), kMat);
    out.push_back({fmt("5:n%d", n), c.dof_discrepancy <= 1e-9 && c.stiffness_discrepancy <= 1e-11,
                   fmt("criss-cross n=%d: DOF discrepancy %.2e, stiffness %.2e, errors %.6e / %.6e", n,
                       c.dof_discrepancy, c.stiffness_discrepancy, c.vem_error2h, c.morley_error2h)});
  }
  return out;
}

std::vector<SubCheck> properties() {
  std::vector<SubCheck> out;
  for (int order = 2; order <= 5; ++order) {
    ncvem::SplitMix64 rng(1000 + order);
    double pi_err = 0.0, psd = 0.0, ident = 0.0, quad = 0.0;
    int bad_kernel = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto poly = ncvem_tests::random_polygon(rng);
      const auto cell = CellGeometry::from_polygon(poly);
      const auto k = compute_local_kernels(cell, order, kMat);
      const int np = poly_dim(order);
      const auto basis = cell_basis(cell, order);

      // projector reproduction, from independently computed polynomial DOFs
      for (int a = 0; a < np; ++a) {
        const SmoothField m{[&, a](Point2 p) { return basis.value(a, p); },
                            [&, a](Point2 p) { return Point2{basis.derivative(a, p, 1, 0), basis.derivative(a, p, 0, 1)}; }};
        Eigen::VectorXd e = k.Pi * compute_dofs(cell, order, m, order + 8);
        e[a] -= 1.0;
        pi_err = std::max(pi_err, e.cwiseAbs().maxCoeff());
      }

      // kernel and positivity of the local stiffness
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k.stiffness);
      const auto& ev = eig.eigenvalues();
      const double knorm = ev.cwiseAbs().maxCoeff();
      int zeros = 0;
      for (int i = 0; i < ev.size(); ++i)
        if (std::abs(ev[i]) <= 1e-10 * knorm) ++zeros;
      if (zeros != 3) ++bad_kernel;
      psd = std::min(psd, ev.minCoeff() / knorm);

      // a(p, q) against the volume + boundary expansion for random p, q
      Eigen::VectorXd p(np), q(np);
      for (int i = 0; i < np; ++i) {
        p[i] = rng.uniform() - 0.5;
        q[i] = rng.uniform() - 0.5;
      }
      const double lhs = exact_bilinear_poly(basis, p, q, cell, kMat);
      const Eigen::VectorXd bilap =
          basis.differentiate(p, 4, 0) + 2.0 * basis.differentiate(p, 2, 2) + basis.differentiate(p, 0, 4);
      double rhs = 0.0;
      const auto vol = polygon_quadrature(cell, 2 * order);
      for (std::size_t i = 0; i < vol.size(); ++i)
        rhs += vol.weights[i] * kMat.rigidity * basis.evaluate(bilap, vol.points[i]) * basis.evaluate(q, vol.points[i]);
      for (const auto& e : cell.edges) {
        const auto t = plate_edge_operators(basis, p, e, kMat);
        const auto r = edge_quadrature(e.a, e.b, 2 * order);
        for (std::size_t i = 0; i < r.size(); ++i) {
          const Point2 x = r.points[i];
          const double dn = e.normal.x * basis.evaluate(q, x, 1, 0) + e.normal.y * basis.evaluate(q, x, 0, 1);
          rhs += r.weights[i] * (t.bending_moment(r.params[i]) * dn - t.shear(r.params[i]) * basis.evaluate(q, x));
        }
        rhs += t.corner[0] * basis.evaluate(q, e.a) + t.corner[1] * basis.evaluate(q, e.b);
      }
      const double scale = std::sqrt(exact_bilinear_poly(basis, p, p, cell, kMat) *
                                     exact_bilinear_poly(basis, q, q, cell, kMat));
      ident = std::max(ident, std::abs(lhs - rhs) / scale);

      // quadrature exactness on the scaled monomials up to degree 2l
      const auto rule = polygon_quadrature(cell, 2 * order);
      const double h = basis.scale();
      for (int d = 0; d <= 2 * order; ++d) {
        for (int a = 0; a <= d; ++a) {
          double s = 0.0;
          for (std::size_t i = 0; i < rule.size(); ++i)
            s += rule.weights[i] * std::pow((rule.points[i].x - cell.centroid.x) / h, a) *
                 std::pow((rule.points[i].y - cell.centroid.y) / h, d - a);
          const double exact = ncvem_tests::green_monomial_integral(poly, a, d - a, cell.centroid, h);
          quad = std::max(quad, std::abs(s - exact) / std::max(std::abs(exact), cell.area));
        }
      }
    }
    out.push_back({fmt("6:l%d:projector", order), pi_err <= 1e-12, fmt("l=%d: max |Pi dofs(m_a) - e_a| = %.2e", order, pi_err)});
    out.push_back({fmt("6:l%d:kernel", order), bad_kernel == 0 && psd >= -1e-10,
                   fmt("l=%d: %d cells with kernel dim != 3, min eigenvalue / |K| = %.2e", order, bad_kernel, psd)});
    out.push_back({fmt("6:l%d:identity", order), ident <= 1e-11,
                   fmt("l=%d: integration by parts identity, max relative gap %.2e", order, ident)});
    out.push_back({fmt("6:l%d:quadrature", order), quad <= 1e-13,
                   fmt("l=%d: quadrature exactness, max relative error %.2e", order, quad)});
  }
  return out;
}

std::vector<SubCheck> order_five() {
  std::vector<SubCheck> out;
  for (auto f : kFamilies) {
    const auto rec = study(f, 5, 2);
    const double slope = windowed_slope(rec, 0, 2);
    out.push_back({fmt("7:%s", family_name(f).c_str()), std::abs(slope - 4.0) <= 0.5,
                   fmt("%s l=5 n=0..2: slope %.3f (4 +- 0.5)", family_name(f).c_str(), slope)});
    // finer meshes: reported only
    std::string more;
    for (int n = 3; n <= 4; ++n) {
      try {
        StudyOptions s;
        s.family = f;
        s.n_min = n;
        s.n_max = n;
        s.solve.order = 5;
        const auto r = convergence_study(s);
        more += fmt(" n=%d: %.3e (rate %.2f)", n, r[0].error2h,
                    std::log(rec.back().error2h / r[0].error2h) / std::log(rec.back().h / r[0].h));
      } catch (const Error& e) {
        more += fmt(" n=%d: %s", n, e.what());
      }
    }
    out.push_back({fmt("7:%s:info", family_name(f).c_str()), true, fmt("  not gated:%s (rate vs n=2)", more.c_str())});
  }
  return out;
}

std::set<std::string> read_known(const char* path) {
  std::set<std::string> known;
  std::ifstream in(path);
  if (!in) {
    std::fprintf(stderr, "cannot read %s\n", path);
    std::exit(2);
  }
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line.erase(0, line.find_first_not_of(" \t"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (!line.empty()) known.insert(line);
  }
  return known;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> known;
  bool verbose = false;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--known-failures") && i + 1 < argc) known = read_known(argv[++i]);
    else if (!std::strcmp(argv[i], "--verbose")) verbose = true;
    else {
      std::fprintf(stderr, "usage: %s [--known-failures FILE] [--verbose]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "DOF counts match the reference tables", dof_counts},
      {2, "mesh topology matches the reference tables (n = 0..8)", topology},
      {3, "patch tests, all families, orders 2..5", patch_tests},
      {4, "windowed h-slopes over n = 0..3, orders 2..4", rates},
      {5, "Morley equivalence on criss-cross n = 0, 1", morley},
      {6, "projector, kernel, identity and quadrature properties on 100 random polygons per order", properties},
      {7, "order 5 rates over n = 0..2", order_five},
  };

  bool gate_ok = true;
  std::vector<std::string> surprises;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<SubCheck> checks;
    try {
      checks = c.run();
    } catch (const std::exception& e) {
      checks.push_back({fmt("%d:exception", c.number), false, std::string("exception: ") + e.what()});
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int failed = 0, known_failed = 0;
    for (const auto& s : checks) {
      if (s.pass) {
        if (known.count(s.id)) surprises.push_back(s.id);
        continue;
      }
      ++failed;
      if (known.count(s.id)) ++known_failed;
    }
    const std::size_t gated =
        std::count_if(checks.begin(), checks.end(), [](const SubCheck& s) { return s.id.find(":info") == std::string::npos; });
    std::printf("criterion %d: %s - %s (%zu/%zu sub-checks pass%s) [%.1fs]\n", c.number, failed ? "FAIL" : "PASS",
                c.title.c_str(), gated - failed, gated,
                known_failed ? fmt(", %d known failure%s", known_failed, known_failed > 1 ? "s" : "").c_str() : "",
                secs);
    for (const auto& s : checks) {
      if (!s.pass) std::printf("    FAIL %s%s\n", s.detail.c_str(), known.count(s.id) ? "  [known]" : "");
      else if (verbose || s.id.find(":info") != std::string::npos || checks.size() <= 16)
        std::printf("    %s%s\n", s.id.find(":info") != std::string::npos ? "" : "ok   ", s.detail.c_str());
      if (!s.pass && !known.count(s.id)) gate_ok = false;
    }
    std::fflush(stdout);
  }
  for (const auto& s : surprises) std::printf("listed known failure %s now passes; update known_failures.txt\n", s.c_str());
  if (!surprises.empty()) gate_ok = false;
  return gate_ok ? 0 : 1;
}
