#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ncvem/geometry.hpp"

namespace ncvem {

struct Edge {
  std::array<int, 2> vertices{};  // global orientation: lower id -> higher id
  double length = 0.0;
  Point2 tangent;
  Point2 normal;                  // tangent rotated by -90 degrees
  std::array<int, 2> cells{-1, -1};
  bool boundary = false;
};

struct PolygonCell {
  std::vector<int> vertices;  // counterclockwise
  std::vector<int> edges;     // edge k joins vertices[k] and vertices[k+1]
  /// +1 if local edge k is traversed along the global edge orientation.
  std::vector<int8_t> edge_orientation;
  Point2 centroid;
  double area = 0.0;
  double diameter = 0.0;
  Point2 star_point;
};

/// Immutable polygonal mesh of a simply connected planar domain.
class PolygonMesh {
 public:
  PolygonMesh() = default;

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<PolygonCell>& cells() const { return cells_; }
  const std::vector<Edge>& edges() const { return edges_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  bool is_boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }
  int num_boundary_vertices() const;
  int num_boundary_edges() const;

  /// Maximum cell diameter.
  double mesh_size() const { return mesh_size_; }

  /// Geometry (edges, normals, star point) of one cell.
  const CellGeometry& cell_geometry(int cell) const { return geometry_[cell]; }

  /// V - E + F.
  int euler_characteristic() const { return num_vertices() - num_edges() + num_cells(); }

 private:
  friend PolygonMesh derive_topology(std::vector<Point2>, std::vector<std::vector<int>>);

  std::vector<Point2> vertices_;
  std::vector<PolygonCell> cells_;
  std::vector<Edge> edges_;
  std::vector<CellGeometry> geometry_;
  std::vector<uint8_t> boundary_vertex_;
  double mesh_size_ = 0.0;
};

/// Builds edges, orientation flags, adjacency and cell geometry from a vertex
/// array and counterclockwise cell lists. Throws MeshError on out-of-range or
/// repeated vertex indices, non-manifold edges, inconsistent orientation and
/// cells that are degenerate or not star-shaped.
PolygonMesh derive_topology(std::vector<Point2> vertices, std::vector<std::vector<int>> cells);

// Mesh families on the unit square. Level n uses a 5x5 base grid for n = 0
// and a 10n x 10n grid for n >= 1.

int grid_resolution(int level);

/// Square grid, each square split into four triangles through its center.
PolygonMesh criss_cross_mesh(int resolution);
PolygonMesh build_criss_cross(int level);

/// Barycentric dual of a smoothly remapped, diagonally split square grid.
PolygonMesh remapped_hexagonal_mesh(int resolution);
PolygonMesh build_remapped_hexagonal(int level);

/// Square grid with a node on every edge midpoint; interior midpoints are
/// pushed perpendicular to their edge by notch_ratio * spacing, alternating
/// direction between grid rows/columns, so every cell is a non-convex octagon.
/// With the default notch the cell diameter is about 1.46 * spacing, as in the
/// published mesh sizes.
inline constexpr double kDefaultNotchRatio = 0.37;
PolygonMesh nonconvex_octagonal_mesh(int resolution, double notch_ratio = kDefaultNotchRatio);
PolygonMesh build_nonconvex_octagonal(int level, double notch_ratio = kDefaultNotchRatio);

/// Square grid whose interior nodes are moved uniformly inside an axis-aligned
/// box of side box_fraction * spacing. Pure function of (resolution, seed).
/// The default 0.4 reproduces the published mesh sizes (0.8 gives cells about
/// 25% larger).
inline constexpr double kDefaultBoxFraction = 0.4;
PolygonMesh randomized_quadrilateral_mesh(int resolution, std::uint64_t seed,
                                          double box_fraction = kDefaultBoxFraction);
PolygonMesh build_randomized_quadrilateral(int level, std::uint64_t seed,
                                           double box_fraction = kDefaultBoxFraction);

enum class MeshFamily { CrissCross, Hexagonal, Octagonal, RandomQuad };

std::string family_name(MeshFamily family);
MeshFamily parse_family(const std::string& name);  // throws ConfigError

struct FamilyOptions {
  std::uint64_t seed = 1;
  double notch_ratio = kDefaultNotchRatio;
  double box_fraction = kDefaultBoxFraction;
};

PolygonMesh build_family(MeshFamily family, int level, const FamilyOptions& options = {});

/// Shape-regularity measures of a mesh.
struct RegularityReport {
  double min_star_radius_ratio = 1.0;      // kernel inradius / h_K
  double min_edge_to_diameter_ratio = 1.0; // |e| / h_K
  double min_subtriangle_quality = 0.0;    // smallest angle of the star-point fan (radians)
  double quality_floor = 0.0;

  bool passes(double rho0) const {
    return min_star_radius_ratio >= rho0 && min_edge_to_diameter_ratio >= rho0 &&
           min_subtriangle_quality > quality_floor;
  }
};

inline constexpr double kDefaultQualityFloor = 0.05;
RegularityReport validate_regularity(const PolygonMesh& mesh,
                                     double quality_floor = kDefaultQualityFloor);

// JSON mesh file: {"vertices": [[x, y], ...], "cells": [[i0, i1, ...], ...]}.
void write_mesh(const PolygonMesh& mesh, const std::filesystem::path& path);
std::string mesh_to_json(const PolygonMesh& mesh);
PolygonMesh read_mesh(const std::filesystem::path& path);
PolygonMesh mesh_from_json(const std::string& text);

}  // namespace ncvem
