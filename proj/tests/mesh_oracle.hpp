#pragma once
// Brute-force mesh checks written independently of the library's own
// check_invariants, for cross-validation in tests.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ifem/mesh.hpp"

namespace oracle {

inline std::vector<std::string> mesh_violations(const ifem::Mesh& m, const ifem::LevelSet& ls) {
  using namespace ifem;
  std::vector<std::string> bad;
  std::map<std::pair<int, int>, int> count;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto& tri = m.triangles[t];
    const Point2 a = m.vertices[tri[0]], b = m.vertices[tri[1]], c = m.vertices[tri[2]];
    if (!(cross(b - a, c - a) > 0.0)) bad.push_back("orientation " + std::to_string(t));
    for (int k = 0; k < 3; ++k) {
      int u = tri[k], v = tri[(k + 1) % 3];
      if (u > v) std::swap(u, v);
      ++count[{u, v}];
    }
    int sign = 0;
    for (int v : tri) {
      if (is_interface(m.vertex_class[v])) continue;
      const double phi = ls.value(m.vertices[v]);
      const int s = phi < 0.0 ? -1 : 1;
      if (phi == 0.0 || (sign != 0 && s != sign)) bad.push_back("fitted " + std::to_string(t));
      sign = s;
    }
    const RegionTag expect = sign < 0 ? RegionTag::Minus : RegionTag::Plus;
    if (sign != 0 && m.triangle_region[t] != expect) bad.push_back("region " + std::to_string(t));
  }
  const Rect& r = m.domain;
  const double eps = 1e-12 * std::max(r.width(), r.height());
  auto on_boundary = [&](Point2 p) {
    return std::abs(p.x - r.x0) <= eps || std::abs(p.x - r.x1) <= eps || std::abs(p.y - r.y0) <= eps ||
           std::abs(p.y - r.y1) <= eps;
  };
  for (const auto& [e, c] : count) {
    const bool bnd = on_boundary(m.vertices[e.first]) && on_boundary(m.vertices[e.second]) &&
                     (std::abs(m.vertices[e.first].x - m.vertices[e.second].x) <= eps ||
                      std::abs(m.vertices[e.first].y - m.vertices[e.second].y) <= eps);
    if (c > 2 || (c == 1 && !bnd)) bad.push_back("conformity " + std::to_string(e.first) + "-" + std::to_string(e.second));
  }
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    if (is_interface(m.vertex_class[v]) && std::abs(ls.value(m.vertices[v])) > ifem::kProjectionTol) {
      bad.push_back("interface tolerance " + std::to_string(v));
    }
  }
  const long euler = static_cast<long>(m.vertices.size()) - static_cast<long>(count.size()) +
                     static_cast<long>(m.triangles.size());
  if (euler != 1) bad.push_back("euler " + std::to_string(euler));
  return bad;
}

}  // namespace oracle
