#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include "ifem/exceptions.hpp"
#include "ifem/mesh.hpp"

namespace ifem {

namespace {

const char* class_word(VertexClass c) {
  switch (c) {
    case VertexClass::Interior: return "interior";
    case VertexClass::Boundary: return "boundary";
    case VertexClass::OnInterface: return "interface";
    case VertexClass::BoundaryAndInterface: return "boundary+interface";
  }
  return "interior";
}

VertexClass parse_class(const std::string& w) {
  if (w == "interior") return VertexClass::Interior;
  if (w == "boundary") return VertexClass::Boundary;
  if (w == "interface") return VertexClass::OnInterface;
  if (w == "boundary+interface") return VertexClass::BoundaryAndInterface;
  throw InvalidArgument("unknown vertex class '" + w + "'");
}

}  // namespace

void write_mesh(std::ostream& os, const Mesh& mesh) {
  const auto old_prec = os.precision(17);
  os << "ifem-mesh v1\n";
  os << mesh.vertices.size() << '\n';
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    os << mesh.vertices[v].x << ' ' << mesh.vertices[v].y << ' ' << class_word(mesh.vertex_class[v])
       << '\n';
  }
  os << mesh.triangles.size() << '\n';
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    os << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << to_string(mesh.triangle_region[t])
       << '\n';
  }
  os.precision(old_prec);
}

Mesh read_mesh(std::istream& is) {
  std::string magic, version;
  is >> magic >> version;
  if (magic != "ifem-mesh" || version != "v1") throw InvalidArgument("not an ifem-mesh v1 stream");
  Mesh m;
  std::size_t nv = 0;
  is >> nv;
  m.vertices.resize(nv);
  m.vertex_class.resize(nv);
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (std::size_t v = 0; v < nv; ++v) {
    std::string w;
    is >> m.vertices[v].x >> m.vertices[v].y >> w;
    m.vertex_class[v] = parse_class(w);
    x0 = std::min(x0, m.vertices[v].x);
    y0 = std::min(y0, m.vertices[v].y);
    x1 = std::max(x1, m.vertices[v].x);
    y1 = std::max(y1, m.vertices[v].y);
  }
  m.domain = {x0, y0, x1, y1};
  std::size_t nt = 0;
  is >> nt;
  m.triangles.resize(nt);
  m.triangle_region.resize(nt);
  m.generation.assign(nt, 0);
  for (std::size_t t = 0; t < nt; ++t) {
    std::string r;
    is >> m.triangles[t][0] >> m.triangles[t][1] >> m.triangles[t][2] >> r;
    if (r != "minus" && r != "plus") throw InvalidArgument("unknown region '" + r + "'");
    m.triangle_region[t] = r == "minus" ? RegionTag::Minus : RegionTag::Plus;
    for (int v : m.triangles[t]) {
      if (v < 0 || static_cast<std::size_t>(v) >= nv) throw InvalidArgument("vertex index out of range");
    }
  }
  if (!is) throw InvalidArgument("truncated ifem-mesh stream");
  m.rebuild_topology();
  return m;
}

}  // namespace ifem
