#include <cmath>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "ncvem/error.hpp"
#include "ncvem/morley.hpp"
#include "ncvem/vem_local.hpp"
#include "test_support.hpp"

using namespace ncvem;

namespace {

const Material kMat{1.0, 0.3};

std::shared_ptr<const PolygonMesh> share(PolygonMesh m) { return std::make_shared<const PolygonMesh>(std::move(m)); }

// Morley stiffness in plain monomials 1, x, y, x^2, xy, y^2: the basis comes
// from inverting the DOF matrix, the Hessians are constant.
Eigen::Matrix<double, 6, 6> oracle_stiffness(const std::array<Point2, 3>& v, const Material& m) {
  Eigen::Matrix<double, 6, 6> dofs;
  auto row = [](Point2 p) {
    Eigen::Matrix<double, 1, 6> r;
    r << 1, p.x, p.y, p.x * p.x, p.x * p.y, p.y * p.y;
    return r;
  };
  for (int i = 0; i < 3; ++i) dofs.row(i) = row(v[i]);
  for (int k = 0; k < 3; ++k) {
    const Point2 a = v[k], b = v[(k + 1) % 3];
    const Point2 mid = 0.5 * (a + b);
    const double len = distance(a, b);
    const Point2 n{(b.y - a.y) / len, -(b.x - a.x) / len};
    // |e| grad(p)(mid) . n, exact for the linear normal derivative
    Eigen::Matrix<double, 1, 6> r;
    r << 0, n.x, n.y, 2 * mid.x * n.x, mid.y * n.x + mid.x * n.y, 2 * mid.y * n.y;
    dofs.row(3 + k) = len * r;
  }
  const Eigen::Matrix<double, 6, 6> coeffs = dofs.inverse();  // column j: basis function j
  const double area = 0.5 * cross(v[1] - v[0], v[2] - v[0]);
  Eigen::Matrix<double, 6, 6> K;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const double xi = 2 * coeffs(3, i), ci = coeffs(4, i), yi = 2 * coeffs(5, i);
      const double xj = 2 * coeffs(3, j), cj = coeffs(4, j), yj = 2 * coeffs(5, j);
      K(i, j) = m.rigidity * area *
                (m.poisson * (xi + yi) * (xj + yj) + (1 - m.poisson) * (xi * xj + 2 * ci * cj + yi * yj));
    }
  }
  return K;
}

}  // namespace

TEST_SUITE("morley") {
  TEST_CASE("element basis has the delta property") {
    const MorleyElement el({0.1, 0.2}, {0.9, 0.35}, {0.4, 1.1});
    for (int i = 0; i < 6; ++i) {
      Eigen::Matrix<double, 6, 1> e = Eigen::Matrix<double, 6, 1>::Zero();
      e[i] = 1.0;
      CHECK((el.dofs_of(el.coefficients(e)) - e).cwiseAbs().maxCoeff() < 1e-13);
    }
    CHECK_THROWS_AS(MorleyElement({0, 0}, {0, 1}, {1, 0}), MeshError);
    CHECK_THROWS_AS(MorleyElement({0, 0}, {1, 0}, {2, 0}), MeshError);
  }

  TEST_CASE("reference triangle stiffness against the direct oracle") {
    const std::array<Point2, 3> v{Point2{0, 0}, Point2{1, 0}, Point2{0, 1}};
    const MorleyElement el(v[0], v[1], v[2]);
    const auto K = el.stiffness(kMat);
    const auto O = oracle_stiffness(v, kMat);
    CHECK(std::abs(K.trace() - O.trace()) <= 1e-12 * O.trace());
    CHECK((K - O).cwiseAbs().maxCoeff() <= 1e-12 * O.cwiseAbs().maxCoeff());
  }

  TEST_CASE("stiffness kills linear functions") {
    const MorleyElement el({0.1, 0.2}, {0.9, 0.35}, {0.4, 1.1});
    const SmoothField lin{[](Point2 p) { return 1.0 + 2.0 * p.x - 3.0 * p.y; }, [](Point2) { return Point2{2, -3}; }};
    const auto d = el.interpolate(lin, 4);
    CHECK((el.stiffness(kMat) * d).cwiseAbs().maxCoeff() < 1e-12 * el.stiffness(kMat).cwiseAbs().maxCoeff());
  }

  TEST_CASE("Morley and order-2 VEM coincide on triangles") {
    ncvem::SplitMix64 rng(19);
    for (int trial = 0; trial < 100; ++trial) {
      std::array<Point2, 3> v;
      for (auto& p : v) p = {rng.uniform(), rng.uniform()};
      if (cross(v[1] - v[0], v[2] - v[0]) < 0) std::swap(v[1], v[2]);
      if (std::abs(cross(v[1] - v[0], v[2] - v[0])) < 0.05) continue;  // keep reasonably shaped
      const auto cell = CellGeometry::from_polygon({v[0], v[1], v[2]});
      const auto k = compute_local_kernels(cell, 2, kMat);
      const auto M = MorleyElement(v[0], v[1], v[2]).stiffness(kMat);
      const double scale = M.cwiseAbs().maxCoeff();
      CHECK((k.stiffness - Eigen::MatrixXd(M)).cwiseAbs().maxCoeff() <= 1e-11 * scale);
      CHECK(k.stabilization.norm() <= 1e-12 * scale);
    }
  }

  TEST_CASE("solver") {
    CHECK_THROWS_AS(morley_solve(build_remapped_hexagonal(0), plate_bubble(), kMat, BoundaryData::Clamped), MeshError);

    const auto mesh = build_criss_cross(0);
    for (auto [mu, nu] : {std::pair{2, 0}, std::pair{1, 1}, std::pair{0, 2}}) {
      const auto s = morley_solve(mesh, monomial_solution(mu, nu), kMat, BoundaryData::FromSolution);
      REQUIRE(s.error2h);
      CHECK(*s.error2h <= 1e-10);
    }

    const auto cmp = compare_with_vem(share(build_criss_cross(0)), kMat);
    CHECK(cmp.dof_discrepancy <= 1e-9);
    CHECK(cmp.stiffness_discrepancy <= 1e-11);
    CHECK(cmp.vem_error2h == doctest::Approx(cmp.morley_error2h).epsilon(1e-9));
  }

  TEST_CASE("Morley convergence rate") {
    std::vector<ConvergenceRecord> rec;
    for (int n = 0; n <= 3; ++n) {
      const auto mesh = build_criss_cross(n);
      const auto s = morley_solve(mesh, plate_bubble(), kMat, BoundaryData::Clamped);
      REQUIRE(s.error2h);
      rec.push_back({"crisscross", n, mesh.mesh_size(), s.dofs.size(), *s.error2h, {}, {}});
    }
    const double slope = windowed_slope(rec, 0, 3);
    CHECK(slope >= 0.8);
    CHECK(slope <= 1.25);
  }
}
