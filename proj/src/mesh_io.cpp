#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ncvem/error.hpp"
#include "ncvem/mesh.hpp"

namespace ncvem {

namespace {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string mesh_to_json(const PolygonMesh& mesh) {
  std::string out = "{\"vertices\": [";
  const auto& vs = mesh.vertices();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ", ";
    out += "[" + format_real(vs[i].x) + ", " + format_real(vs[i].y) + "]";
  }
  out += "],\n \"cells\": [";
  const auto& cells = mesh.cells();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (c) out += ", ";
    out += "[";
    for (std::size_t k = 0; k < cells[c].vertices.size(); ++k) {
      if (k) out += ", ";
      out += std::to_string(cells[c].vertices[k]);
    }
    out += "]";
  }
  out += "]}\n";
  return out;
}

void write_mesh(const PolygonMesh& mesh, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << mesh_to_json(mesh);
  if (!os) throw IoError("failed writing '" + path.string() + "'");
}

PolygonMesh mesh_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(std::string("malformed mesh file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("cells") ||
      !doc["vertices"].is_array() || !doc["cells"].is_array())
    throw IoError("mesh file must be an object with 'vertices' and 'cells' arrays");

  std::vector<Point2> vertices;
  for (const auto& v : doc["vertices"]) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw IoError("every vertex must be an [x, y] pair of numbers");
    vertices.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  std::vector<std::vector<int>> cells;
  for (const auto& c : doc["cells"]) {
    if (!c.is_array()) throw IoError("every cell must be an array of vertex indices");
    std::vector<int> ids;
    for (const auto& i : c) {
      if (!i.is_number_integer()) throw IoError("cell entries must be integers");
      const auto id = i.get<long long>();
      if (id < 0 || id >= static_cast<long long>(vertices.size()))
        throw IoError("cell references vertex " + std::to_string(id) + " out of range");
      ids.push_back(static_cast<int>(id));
    }
    cells.push_back(std::move(ids));
  }
  if (cells.empty()) throw IoError("mesh file has an empty cell list");
  return derive_topology(std::move(vertices), std::move(cells));
}

PolygonMesh read_mesh(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return mesh_from_json(ss.str());
}

}  // namespace ncvem
