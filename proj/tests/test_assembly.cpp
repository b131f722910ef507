#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "doctest.h"
#include "ncvem/assembly.hpp"
#include "ncvem/error.hpp"
#include "ncvem/mesh.hpp"
#include "ncvem/random.hpp"
#include "reference_tables.hpp"

using namespace ncvem;

namespace {

const Material kMat{1.0, 0.3};

std::shared_ptr<const PolygonMesh> share(PolygonMesh m) { return std::make_shared<const PolygonMesh>(std::move(m)); }

const ScalarField kZero = [](Point2) { return 0.0; };
const ScalarField kOne = [](Point2) { return 1.0; };

}  // namespace

TEST_SUITE("assembly") {
  TEST_CASE("global DOF counts") {
    CHECK(global_dof_map(build_criss_cross(0), 2).num_dofs == 221);
    CHECK(global_dof_map(build_nonconvex_octagonal(0), 5).num_dofs == 1011);
    const auto tri = derive_topology({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
    const auto map = global_dof_map(tri, 2);
    CHECK(map.num_dofs == 6);
    CHECK(map.num_constrained() == 6);

    for (auto family : {MeshFamily::CrissCross, MeshFamily::Hexagonal, MeshFamily::Octagonal, MeshFamily::RandomQuad}) {
      const auto m = build_family(family, 1);
      for (int order = 2; order <= 5; ++order)
        CHECK(global_dof_map(m, order).num_dofs ==
              closed_form_dof_count(m.num_vertices(), m.num_edges(), m.num_cells(), order));
    }
    CHECK_THROWS_AS(global_dof_map(tri, 1), ConfigError);
  }

  TEST_CASE("boundary classification by brute force") {
    const auto m = build_criss_cross(0);
    std::map<std::pair<int, int>, int> uses;
    for (const auto& c : m.cells())
      for (std::size_t k = 0; k < c.vertices.size(); ++k) {
        const int a = c.vertices[k], b = c.vertices[(k + 1) % c.vertices.size()];
        ++uses[{std::min(a, b), std::max(a, b)}];
      }
    std::set<int> bverts;
    int bedges = 0;
    for (const auto& [key, n] : uses)
      if (n == 1) {
        ++bedges;
        bverts.insert(key.first);
        bverts.insert(key.second);
      }
    for (int order = 2; order <= 5; ++order) {
      const auto map = global_dof_map(m, order);
      const int per_edge = (order - 1) + (order >= 3 ? order - 2 : 0);
      CHECK(map.num_constrained() == static_cast<int>(bverts.size()) + bedges * per_edge);
    }
    // 61 vertices + 160 edges, 20 + 20 of them on the boundary
    const Discretization disc(share(m), 2, kMat);
    const auto sys = assemble_system(disc, kZero, BoundarySpec::clamped(), 10);
    CHECK(sys.matrix.rows() == 221 - 40);
    const Eigen::MatrixXd A(sys.matrix);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }

  TEST_CASE("shared edge moments carry opposite normal signs") {
    const auto m = build_remapped_hexagonal(0);
    const auto map = global_dof_map(m, 5);
    std::map<int, std::vector<int>> signs;
    for (int c = 0; c < m.num_cells(); ++c)
      for (std::size_t i = 0; i < map.cell_dofs[c].size(); ++i) signs[map.cell_dofs[c][i]].push_back(map.cell_signs[c][i]);
    for (int e = 0; e < m.num_edges(); ++e) {
      if (m.edges()[e].boundary) continue;
      for (int k = 0; k <= 3; ++k) {
        const auto& s = signs[map.edge_normal_dof(e, k)];
        REQUIRE(s.size() == 2);
        // d_n flips between the two sides; s~^k flips for odd k
        CHECK(s[0] * s[1] == (k % 2 == 0 ? -1 : 1));
      }
      for (int k = 0; k <= 2; ++k) {
        const auto& s = signs[map.edge_value_dof(e, k)];
        REQUIRE(s.size() == 2);
        CHECK(s[0] * s[1] == (k % 2 == 0 ? 1 : -1));
      }
    }
  }

  TEST_CASE("assembled matrix is exactly symmetric and f = 0 gives u = 0") {
    for (int order = 2; order <= 5; ++order) {
      const Discretization disc(share(build_nonconvex_octagonal(0)), order, kMat);
      const auto sys = assemble_system(disc, kZero, BoundarySpec::clamped(), order + 8);
      const Eigen::SparseMatrix<double> diff = sys.matrix - Eigen::SparseMatrix<double>(sys.matrix.transpose());
      CHECK(diff.cwiseAbs().sum() == 0.0);
      const Eigen::VectorXd u = solve_spd(sys);
      CHECK(u.size() == disc.dof_map().num_dofs);
      CHECK(u.cwiseAbs().maxCoeff() == 0.0);
    }
  }

  TEST_CASE("solve recovers a known vector") {
    const Discretization disc(share(build_randomized_quadrilateral(1, 5)), 3, kMat);
    auto sys = assemble_system(disc, kOne, BoundarySpec::clamped(), 11);
    ncvem::SplitMix64 rng(2);
    Eigen::VectorXd x0(sys.matrix.rows());
    for (Eigen::Index i = 0; i < x0.size(); ++i) x0[i] = rng.uniform() - 0.5;
    sys.rhs = sys.matrix * x0;
    SolveReport report;
    const Eigen::VectorXd x = solve_spd(sys, &report);
    double err = 0.0;
    for (std::size_t i = 0; i < sys.free_dofs.size(); ++i)
      err = std::max(err, std::abs(x[sys.free_dofs[i]] - x0[static_cast<Eigen::Index>(i)]));
    CHECK(err <= 1e-8 * x0.cwiseAbs().maxCoeff());
    CHECK(report.relative_residual <= 1e-10);
    CHECK(report.min_pivot_ratio > 0.0);
  }

  TEST_CASE("system without boundary conditions is rejected") {
    const Discretization disc(share(build_criss_cross(0)), 2, kMat);
    const auto sys = assemble_system(disc, kOne, BoundarySpec::unconstrained(), 10);
    CHECK(sys.matrix.rows() == 221);
    try {
      solve_spd(sys);
      FAIL("singular system was solved");
    } catch (const SolverError& e) {
      CHECK(e.kind() == SolverError::Kind::NotPositiveDefinite);
    }
  }

  TEST_CASE("assembly does not depend on the cell order") {
    const auto a = build_remapped_hexagonal(0);
    std::vector<int> perm(a.num_cells());
    std::iota(perm.begin(), perm.end(), 0);
    ncvem::SplitMix64 rng(17);
    for (int i = a.num_cells() - 1; i > 0; --i) std::swap(perm[i], perm[rng.next() % (i + 1)]);
    std::vector<std::vector<int>> cells;
    for (int c : perm) cells.push_back(a.cells()[c].vertices);
    const auto b = derive_topology(a.vertices(), cells);

    const int order = 4;
    const Discretization da(share(a), order, kMat), db(share(b), order, kMat);
    const auto sa = assemble_system(da, kOne, BoundarySpec::unconstrained(), 12);
    const auto sb = assemble_system(db, kOne, BoundarySpec::unconstrained(), 12);

    // DOF of `a` -> DOF of `b`, matching edges by endpoints and cells by the permutation
    const auto& ma = da.dof_map();
    const auto& mb = db.dof_map();
    std::map<std::pair<int, int>, int> edge_b;
    for (int e = 0; e < b.num_edges(); ++e) edge_b[{b.edges()[e].vertices[0], b.edges()[e].vertices[1]}] = e;
    std::vector<int> cell_b(a.num_cells());
    for (int i = 0; i < a.num_cells(); ++i) cell_b[perm[i]] = i;
    std::vector<int> to_b(ma.num_dofs);
    for (int v = 0; v < a.num_vertices(); ++v) to_b[v] = v;
    for (int e = 0; e < a.num_edges(); ++e) {
      const int eb = edge_b.at({a.edges()[e].vertices[0], a.edges()[e].vertices[1]});
      for (int k = 0; k < ma.edge_block; ++k) to_b[ma.edge_offset + e * ma.edge_block + k] = mb.edge_offset + eb * mb.edge_block + k;
    }
    for (int c = 0; c < a.num_cells(); ++c)
      for (int k = 0; k < ma.cell_block; ++k) to_b[ma.cell_dof(c, k)] = mb.cell_dof(cell_b[c], k);

    const Eigen::MatrixXd A(sa.matrix), B(sb.matrix);
    const double scale = A.cwiseAbs().maxCoeff();
    double diff = 0.0, rdiff = 0.0;
    for (int i = 0; i < ma.num_dofs; ++i) {
      rdiff = std::max(rdiff, std::abs(sa.rhs[i] - sb.rhs[to_b[i]]));
      for (int j = 0; j < ma.num_dofs; ++j) diff = std::max(diff, std::abs(A(i, j) - B(to_b[i], to_b[j])));
    }
    CHECK(diff <= 1e-15 * scale * 8);
    CHECK(rdiff <= 1e-15 * 8);
  }

  TEST_CASE("projector failures name the cell") {
    // every cell of a valid mesh is fine; an order outside the table is a config error
    CHECK_THROWS_AS(Discretization(share(build_criss_cross(0)), 1, kMat), ConfigError);
  }

  TEST_CASE("matrix dump format") {
    Eigen::SparseMatrix<double> m(3, 3);
    m.insert(0, 0) = 1.0 / 3.0;
    m.insert(2, 1) = -2.5;
    m.makeCompressed();
    const auto path = std::filesystem::temp_directory_path() / "ncvem_matrix.txt";
    write_matrix(m, path);
    std::ifstream in(path);
    int rows, cols, nnz;
    in >> rows >> cols >> nnz;
    CHECK(rows == 3);
    CHECK(cols == 3);
    CHECK(nnz == 2);
    int r, c;
    double v;
    in >> r >> c >> v;
    CHECK(r == 0);
    CHECK(c == 0);
    CHECK(v == 1.0 / 3.0);  // 17 significant digits round-trip
    in >> r >> c >> v;
    CHECK(r == 2);
    CHECK(c == 1);
    CHECK(v == -2.5);
    in.close();
    std::filesystem::remove(path);
  }
}
