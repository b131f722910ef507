#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace ncvem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

/// Signed shoelace area; positive for counterclockwise polygons.
double signed_area(std::span<const Point2> polygon);

/// True when no two non-adjacent edges of the closed polygon intersect.
bool is_simple_polygon(std::span<const Point2> polygon);

/// Geometry of one straight edge traversed from `a` to `b`.
struct EdgeGeometry {
  Point2 a;
  Point2 b;
  Point2 midpoint;
  double length = 0.0;
  Point2 tangent;  // (b - a) / length
  Point2 normal;   // tangent rotated by -90 degrees; outward for a ccw cell
};

EdgeGeometry make_edge_geometry(Point2 a, Point2 b);

/// Everything the local element kernels need to know about one polygon.
///
/// Edge k runs from vertex k to vertex k+1 (cyclically) in counterclockwise
/// order, so every `EdgeGeometry::normal` points out of the cell. The star
/// point is the cell centroid when the centroid lies in the polygon kernel,
/// otherwise the center of the largest disc inscribed in the kernel.
struct CellGeometry {
  std::vector<Point2> vertices;
  std::vector<EdgeGeometry> edges;
  double area = 0.0;
  Point2 centroid;
  double diameter = 0.0;
  Point2 star_point;
  double kernel_radius = 0.0;  // radius of the largest disc inside the kernel

  /// Throws MeshError for fewer than three vertices, non-positive area, a
  /// zero-length edge or an empty kernel.
  static CellGeometry from_polygon(std::vector<Point2> vertices);

  int num_vertices() const { return static_cast<int>(vertices.size()); }
};

/// Chebyshev center of the polygon kernel: the disc of maximal radius that is
/// contained in every inner half-plane of the polygon edges. Radius <= 0 means
/// the polygon is not star-shaped with respect to any disc.
struct KernelDisc {
  Point2 center;
  double radius = 0.0;
};

KernelDisc kernel_chebyshev_disc(std::span<const Point2> polygon);

/// Distance by which `p` lies inside every edge half-plane (negative if outside
/// at least one of them).
double kernel_margin(std::span<const Point2> polygon, Point2 p);

}  // namespace ncvem
