#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "ncvem/geometry.hpp"

namespace ncvem {

/// Plate material: bending rigidity D and Poisson ratio nu.
struct Material {
  double rigidity = 1.0;
  double poisson = 0.3;

  /// D = E t^3 / (12 (1 - nu^2)).
  static Material from_plate(double youngs_modulus, double thickness, double poisson);

  /// Throws ConfigError unless D > 0 and 0 <= nu < 0.5.
  void validate() const;
};

/// Number of bivariate monomials of total degree <= `degree` (0 for degree < 0).
constexpr int poly_dim(int degree) { return degree < 0 ? 0 : (degree + 1) * (degree + 2) / 2; }

struct Exponent {
  int x = 0;
  int y = 0;
  int degree() const { return x + y; }
};

/// Position of x^a y^b in the ordering used everywhere: by total degree, and
/// inside one degree by decreasing power of x (1, x, y, x^2, xy, y^2, ...).
constexpr int monomial_index(int a, int b) {
  const int d = a + b;
  return d * (d + 1) / 2 + (d - a);
}

Exponent monomial_exponent(int index);

/// Scaled monomials m_a(x) = ((x - center) / scale)^a of total degree <= order.
/// Polynomials are stored as coefficient vectors in this basis.
class ScaledMonomials {
 public:
  ScaledMonomials(Point2 center, double scale, int order);

  int order() const { return order_; }
  int size() const { return poly_dim(order_); }
  Point2 center() const { return center_; }
  double scale() const { return scale_; }

  double value(int index, Point2 p) const { return derivative(index, p, 0, 0); }

  /// d^(dx+dy) m_index / dx^dx dy^dy at p.
  double derivative(int index, Point2 p, int dx, int dy) const;

  double laplacian(int index, Point2 p) const;
  double bilaplacian(int index, Point2 p) const;

  /// All basis values (or one partial derivative of all of them) at p.
  Eigen::VectorXd values(Point2 p, int dx = 0, int dy = 0) const;

  /// Coefficients of a partial derivative of the polynomial `coeffs`, in the
  /// same basis (upper-degree entries come out as exact zeros).
  Eigen::VectorXd differentiate(const Eigen::VectorXd& coeffs, int dx, int dy) const;

  double evaluate(const Eigen::VectorXd& coeffs, Point2 p, int dx = 0, int dy = 0) const;

 private:
  Point2 center_;
  double scale_;
  int order_;
};

/// Polynomial on an edge in the scaled coordinate s~ in [-1/2, 1/2]:
/// sum_k coeffs[k] s~^k.
struct EdgePolynomial {
  std::vector<double> coeffs;

  /// Index of the highest nonzero coefficient, -1 for the zero polynomial.
  int degree() const;
  double operator()(double s) const;
};

/// Restriction of a cell polynomial to the segment a -> b, expanded exactly
/// (binomial expansion, no sampling) in the scaled edge coordinate.
EdgePolynomial restrict_to_edge(const ScaledMonomials& basis, const Eigen::VectorXd& coeffs,
                                const EdgeGeometry& edge);

/// Plate boundary quantities of a polynomial p along one cell edge:
///   bending moment  M_nn(p) = D (nu lap p + (1-nu) p_nn)
///   shear           T(p)    = D (d_n lap p + (1-nu) p_ntt)
///   corner terms    (1-nu) D p_nt times the endpoint sign (-1 at a, +1 at b)
struct PlateEdgeTerms {
  EdgePolynomial bending_moment;
  EdgePolynomial shear;
  std::array<double, 2> corner{0.0, 0.0};
};

PlateEdgeTerms plate_edge_operators(const ScaledMonomials& basis, const Eigen::VectorXd& coeffs,
                                    const EdgeGeometry& edge, const Material& material);

/// a^K(p, q) = D int_K (nu lap p lap q + (1-nu) p_ij q_ij) on polynomials,
/// integrated exactly.
double exact_bilinear_poly(const ScaledMonomials& basis, const Eigen::VectorXd& p,
                           const Eigen::VectorXd& q, const CellGeometry& cell,
                           const Material& material);

/// Matrix of a^K(m_a, m_b) for all basis pairs.
Eigen::MatrixXd bilinear_gram(const ScaledMonomials& basis, const CellGeometry& cell,
                              const Material& material);

/// Basis for the cell: centered at the centroid, scaled by half the diameter
/// (keeps every basis value of order one, which matters for order 5).
ScaledMonomials cell_basis(const CellGeometry& cell, int order);

}  // namespace ncvem
