#include "ncvem/polybasis.hpp"

#include <cmath>
#include <string>

#include "ncvem/error.hpp"
#include "ncvem/quadrature.hpp"

namespace ncvem {

Material Material::from_plate(double youngs_modulus, double thickness, double poisson) {
  Material m;
  m.poisson = poisson;
  m.rigidity = youngs_modulus * thickness * thickness * thickness / (12.0 * (1.0 - poisson * poisson));
  m.validate();
  return m;
}

void Material::validate() const {
  if (!(rigidity > 0.0) || !std::isfinite(rigidity))
    throw ConfigError("bending rigidity must be positive, got " + std::to_string(rigidity));
  if (!(poisson >= 0.0 && poisson < 0.5))
    throw ConfigError("Poisson ratio must lie in [0, 0.5), got " + std::to_string(poisson));
}

Exponent monomial_exponent(int index) {
  int d = 0;
  while (poly_dim(d) <= index) ++d;
  const int offset = index - poly_dim(d - 1);
  return {d - offset, offset};
}

namespace {

double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

// coefficients of (c0 + c1 s)^k for k = 0..order
std::vector<std::vector<double>> linear_powers(double c0, double c1, int order) {
  std::vector<std::vector<double>> pw(order + 1);
  pw[0] = {1.0};
  for (int k = 1; k <= order; ++k) pw[k] = poly_mul(pw[k - 1], {c0, c1});
  return pw;
}

}  // namespace

ScaledMonomials::ScaledMonomials(Point2 center, double scale, int order)
    : center_(center), scale_(scale), order_(order) {}

double ScaledMonomials::derivative(int index, Point2 p, int dx, int dy) const {
  const Exponent e = monomial_exponent(index);
  if (dx > e.x || dy > e.y) return 0.0;
  const double xi = (p.x - center_.x) / scale_;
  const double eta = (p.y - center_.y) / scale_;
  return falling(e.x, dx) * falling(e.y, dy) * ipow(xi, e.x - dx) * ipow(eta, e.y - dy) /
         ipow(scale_, dx + dy);
}

double ScaledMonomials::laplacian(int index, Point2 p) const {
  return derivative(index, p, 2, 0) + derivative(index, p, 0, 2);
}

double ScaledMonomials::bilaplacian(int index, Point2 p) const {
  return derivative(index, p, 4, 0) + 2.0 * derivative(index, p, 2, 2) + derivative(index, p, 0, 4);
}

Eigen::VectorXd ScaledMonomials::values(Point2 p, int dx, int dy) const {
  const double xi = (p.x - center_.x) / scale_;
  const double eta = (p.y - center_.y) / scale_;
  const double inv = 1.0 / ipow(scale_, dx + dy);
  Eigen::VectorXd v(size());
  for (int i = 0; i < size(); ++i) {
    const Exponent e = monomial_exponent(i);
    v[i] = (dx > e.x || dy > e.y)
               ? 0.0
               : falling(e.x, dx) * falling(e.y, dy) * ipow(xi, e.x - dx) * ipow(eta, e.y - dy) * inv;
  }
  return v;
}

Eigen::VectorXd ScaledMonomials::differentiate(const Eigen::VectorXd& coeffs, int dx, int dy) const {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(coeffs.size());
  const double inv = 1.0 / ipow(scale_, dx + dy);
  for (int i = 0; i < coeffs.size(); ++i) {
    const Exponent e = monomial_exponent(i);
    if (dx > e.x || dy > e.y || coeffs[i] == 0.0) continue;
    r[monomial_index(e.x - dx, e.y - dy)] += coeffs[i] * falling(e.x, dx) * falling(e.y, dy) * inv;
  }
  return r;
}

double ScaledMonomials::evaluate(const Eigen::VectorXd& coeffs, Point2 p, int dx, int dy) const {
  double s = 0.0;
  for (int i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0.0) s += coeffs[i] * derivative(i, p, dx, dy);
  return s;
}

int EdgePolynomial::degree() const {
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
    if (coeffs[k] != 0.0) return k;
  return -1;
}

double EdgePolynomial::operator()(double s) const {
  double r = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * s + *it;
  return r;
}

EdgePolynomial restrict_to_edge(const ScaledMonomials& basis, const Eigen::VectorXd& coeffs,
                                const EdgeGeometry& edge) {
  const int order = basis.order();
  const double h = basis.scale();
  const Point2 c = basis.center();
  const auto xp = linear_powers((edge.midpoint.x - c.x) / h, (edge.b.x - edge.a.x) / h, order);
  const auto yp = linear_powers((edge.midpoint.y - c.y) / h, (edge.b.y - edge.a.y) / h, order);

  EdgePolynomial r;
  r.coeffs.assign(order + 1, 0.0);
  for (int i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0.0) continue;
    const Exponent e = monomial_exponent(i);
    const std::vector<double> term = poly_mul(xp[e.x], yp[e.y]);
    for (std::size_t k = 0; k < term.size(); ++k) r.coeffs[k] += coeffs[i] * term[k];
  }
  return r;
}

PlateEdgeTerms plate_edge_operators(const ScaledMonomials& basis, const Eigen::VectorXd& coeffs,
                                    const EdgeGeometry& edge, const Material& material) {
  const double D = material.rigidity;
  const double nu = material.poisson;
  const double n1 = edge.normal.x, n2 = edge.normal.y;
  const double t1 = edge.tangent.x, t2 = edge.tangent.y;

  const Eigen::VectorXd pxx = basis.differentiate(coeffs, 2, 0);
  const Eigen::VectorXd pxy = basis.differentiate(coeffs, 1, 1);
  const Eigen::VectorXd pyy = basis.differentiate(coeffs, 0, 2);
  const Eigen::VectorXd lap = pxx + pyy;

  const Eigen::VectorXd p_nn = n1 * n1 * pxx + 2.0 * n1 * n2 * pxy + n2 * n2 * pyy;
  const Eigen::VectorXd moment = D * (nu * lap + (1.0 - nu) * p_nn);

  const Eigen::VectorXd pxxx = basis.differentiate(coeffs, 3, 0);
  const Eigen::VectorXd pxxy = basis.differentiate(coeffs, 2, 1);
  const Eigen::VectorXd pxyy = basis.differentiate(coeffs, 1, 2);
  const Eigen::VectorXd pyyy = basis.differentiate(coeffs, 0, 3);
  const Eigen::VectorXd p_ntt = n1 * t1 * t1 * pxxx + (2.0 * n1 * t1 * t2 + n2 * t1 * t1) * pxxy +
                                (n1 * t2 * t2 + 2.0 * n2 * t1 * t2) * pxyy + n2 * t2 * t2 * pyyy;
  const Eigen::VectorXd dn_lap = n1 * (pxxx + pxyy) + n2 * (pxxy + pyyy);
  const Eigen::VectorXd shear = D * (dn_lap + (1.0 - nu) * p_ntt);

  const Eigen::VectorXd p_nt = n1 * t1 * pxx + (n1 * t2 + n2 * t1) * pxy + n2 * t2 * pyy;

  PlateEdgeTerms out;
  out.bending_moment = restrict_to_edge(basis, moment, edge);
  out.shear = restrict_to_edge(basis, shear, edge);
  const double twist = (1.0 - nu) * D;
  out.corner = {-twist * basis.evaluate(p_nt, edge.a), twist * basis.evaluate(p_nt, edge.b)};
  return out;
}

namespace {

struct Hessians {
  Eigen::VectorXd xx, xy, yy;
};

Hessians basis_hessians(const ScaledMonomials& basis, Point2 p) {
  return {basis.values(p, 2, 0), basis.values(p, 1, 1), basis.values(p, 0, 2)};
}

}  // namespace

Eigen::MatrixXd bilinear_gram(const ScaledMonomials& basis, const CellGeometry& cell,
                              const Material& material) {
  const double D = material.rigidity;
  const double nu = material.poisson;
  const int n = basis.size();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  if (basis.order() < 2) return G;
  const QuadratureRule q = polygon_quadrature(cell, 2 * basis.order() - 4);
  for (std::size_t k = 0; k < q.size(); ++k) {
    const Hessians H = basis_hessians(basis, q.points[k]);
    const Eigen::VectorXd lap = H.xx + H.yy;
    const double w = q.weights[k] * D;
    G.noalias() += w * (nu * lap * lap.transpose() +
                        (1.0 - nu) * (H.xx * H.xx.transpose() + 2.0 * H.xy * H.xy.transpose() +
                                      H.yy * H.yy.transpose()));
  }
  return 0.5 * (G + G.transpose());
}

double exact_bilinear_poly(const ScaledMonomials& basis, const Eigen::VectorXd& p,
                           const Eigen::VectorXd& q, const CellGeometry& cell,
                           const Material& material) {
  const double D = material.rigidity;
  const double nu = material.poisson;
  if (basis.order() < 2) return 0.0;
  const QuadratureRule rule = polygon_quadrature(cell, 2 * basis.order() - 4);
  double s = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const Point2 x = rule.points[k];
    const double pxx = basis.evaluate(p, x, 2, 0), pxy = basis.evaluate(p, x, 1, 1),
                 pyy = basis.evaluate(p, x, 0, 2);
    const double qxx = basis.evaluate(q, x, 2, 0), qxy = basis.evaluate(q, x, 1, 1),
                 qyy = basis.evaluate(q, x, 0, 2);
    s += rule.weights[k] * (nu * (pxx + pyy) * (qxx + qyy) +
                            (1.0 - nu) * (pxx * qxx + 2.0 * pxy * qxy + pyy * qyy));
  }
  return D * s;
}

ScaledMonomials cell_basis(const CellGeometry& cell, int order) {
  return ScaledMonomials(cell.centroid, 0.5 * cell.diameter, order);
}

}  // namespace ncvem
