#include "ifem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ifem/exceptions.hpp"

namespace ifem {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

bool on_rect_boundary(const Rect& r, Point2 p) {
  const double eps = 1e-13 * std::max(r.width(), r.height());
  return std::abs(p.x - r.x0) <= eps || std::abs(p.x - r.x1) <= eps ||
         std::abs(p.y - r.y0) <= eps || std::abs(p.y - r.y1) <= eps;
}

VertexClass make_class(bool boundary, bool interface) {
  if (boundary) return interface ? VertexClass::BoundaryAndInterface : VertexClass::Boundary;
  return interface ? VertexClass::OnInterface : VertexClass::Interior;
}

double tri_signed_area(Point2 a, Point2 b, Point2 c) { return 0.5 * cross(b - a, c - a); }

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

constexpr double kMinFlipAngle = 1.0;  // degrees

double min_angle_of(const std::array<Point2, 3>& c) {
  double worst = 180.0;
  for (int k = 0; k < 3; ++k) {
    const Point2 u = c[(k + 1) % 3] - c[k], w = c[(k + 2) % 3] - c[k];
    worst = std::min(worst, std::atan2(std::abs(cross(u, w)), dot(u, w)) * 180.0 / std::numbers::pi);
  }
  return worst;
}

struct Adjacent {
  std::array<int, 2> t{-1, -1};
  int count = 0;
};

Adjacent adjacent_triangles(const Mesh& m, int a, int b) {
  Adjacent adj;
  for (int t : m.triangles_of(a)) {
    const auto& tri = m.triangles[t];
    if ((tri[0] == b || tri[1] == b || tri[2] == b) && adj.count < 2) adj.t[adj.count++] = t;
  }
  return adj;
}

// "/" joins (i,j)-(i+1,j+1); "\" joins (i+1,j)-(i,j+1).
enum class Diagonal { Slash, Backslash };

Mesh build_grid(Rect domain, int n, const std::vector<Diagonal>& diag) {
  Mesh m;
  m.domain = domain;
  const int np = n + 1;
  m.vertices.reserve(static_cast<std::size_t>(np) * np);
  m.vertex_class.reserve(m.vertices.capacity());
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const double x = (i == n) ? domain.x1 : domain.x0 + domain.width() * i / n;
      const double y = (j == n) ? domain.y1 : domain.y0 + domain.height() * j / n;
      m.vertices.push_back({x, y});
      const bool bnd = i == 0 || j == 0 || i == n || j == n;
      m.vertex_class.push_back(bnd ? VertexClass::Boundary : VertexClass::Interior);
    }
  }
  auto id = [np](int i, int j) { return j * np + i; };
  m.triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int c00 = id(i, j), c10 = id(i + 1, j), c11 = id(i + 1, j + 1), c01 = id(i, j + 1);
      if (diag[j * n + i] == Diagonal::Slash) {
        m.triangles.push_back({c10, c11, c00});
        m.triangles.push_back({c01, c00, c11});
      } else {
        m.triangles.push_back({c00, c10, c01});
        m.triangles.push_back({c11, c01, c10});
      }
    }
  }
  m.triangle_region.assign(m.triangles.size(), RegionTag::Minus);
  m.generation.assign(m.triangles.size(), 0);
  return m;
}

// Root of phi along [pa, pb] given a strict sign change; returns t in (0, 1).
double cut_parameter(const LevelSet& ls, Point2 pa, Point2 pb, double fa) {
  double lo = 0.0, hi = 1.0;
  const int sa = sign_of(fa);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = ls.value(pa + mid * (pb - pa));
    if (sign_of(fm) == sa) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void Mesh::rebuild_topology() {
  edges.clear();
  triangle_edges.assign(triangles.size(), {-1, -1, -1});
  std::unordered_map<std::uint64_t, int> index;
  index.reserve(triangles.size() * 2);
  for (int t = 0; t < static_cast<int>(triangles.size()); ++t) {
    const auto& tri = triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[(k + 1) % 3], b = tri[(k + 2) % 3];
      auto [it, inserted] = index.try_emplace(edge_key(a, b), static_cast<int>(edges.size()));
      if (inserted) {
        edges.push_back({std::min(a, b), std::max(a, b), t, -1});
      } else {
        Edge& e = edges[it->second];
        if (e.right >= 0) {
          throw Error("non-manifold edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
        }
        e.right = t;
      }
      triangle_edges[t][k] = it->second;
    }
  }
  vt_offsets.assign(vertices.size() + 1, 0);
  for (const auto& tri : triangles) {
    for (int v : tri) ++vt_offsets[v + 1];
  }
  for (std::size_t v = 0; v < vertices.size(); ++v) vt_offsets[v + 1] += vt_offsets[v];
  vt_list.assign(vt_offsets.back(), -1);
  std::vector<int> fill(vt_offsets.begin(), vt_offsets.end() - 1);
  for (int t = 0; t < static_cast<int>(triangles.size()); ++t) {
    for (int v : triangles[t]) vt_list[fill[v]++] = t;
  }
}

double Mesh::signed_area(int t) const {
  const auto c = corners(t);
  return tri_signed_area(c[0], c[1], c[2]);
}

double Mesh::diameter(int t) const {
  const auto c = corners(t);
  return std::max({distance(c[0], c[1]), distance(c[1], c[2]), distance(c[2], c[0])});
}

Point2 Mesh::centroid(int t) const {
  const auto c = corners(t);
  return (1.0 / 3.0) * (c[0] + c[1] + c[2]);
}

RegionTag Mesh::vertex_region(int v) const {
  if (is_interface(vertex_class[v])) return RegionTag::Minus;
  const auto ts = triangles_of(v);
  return ts.empty() ? RegionTag::Minus : triangle_region[ts.front()];
}

bool Mesh::touches_region(int v, RegionTag r) const {
  for (int t : triangles_of(v)) {
    if (triangle_region[t] == r) return true;
  }
  return false;
}

Mesh build_uniform_mesh(Rect domain, int n_per_side) {
  if (n_per_side < 1) throw InvalidArgument("n_per_side must be positive");
  Mesh m = build_grid(domain, n_per_side,
                      std::vector<Diagonal>(static_cast<std::size_t>(n_per_side) * n_per_side,
                                            Diagonal::Slash));
  m.rebuild_topology();
  return m;
}

void classify(Mesh& mesh, const LevelSet& ls) {
  const std::size_t nv = mesh.vertices.size();
  std::vector<double> phi(nv);
  mesh.vertex_class.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    phi[v] = ls.value(mesh.vertices[v]);
    const bool iface = std::abs(phi[v]) <= kProjectionTol;
    mesh.vertex_class[v] = make_class(on_rect_boundary(mesh.domain, mesh.vertices[v]), iface);
  }
  mesh.triangle_region.resize(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    int sign = 0;
    for (int v : mesh.triangles[t]) {
      if (is_interface(mesh.vertex_class[v])) continue;
      const int s = sign_of(phi[v]);
      if (sign != 0 && s != sign) {
        throw AmbiguousElement("triangle " + std::to_string(t) +
                               " has off-interface vertices on both sides");
      }
      sign = s;
    }
    if (sign == 0) {
      sign = sign_of(ls.value(mesh.centroid(static_cast<int>(t))));
      if (sign == 0) {
        throw AmbiguousElement("triangle " + std::to_string(t) +
                               " has all vertices and its centroid on the interface");
      }
    }
    mesh.triangle_region[t] = sign < 0 ? RegionTag::Minus : RegionTag::Plus;
  }
}

Mesh build_fitted_mesh(const LevelSet& ls, Rect domain, int n_per_side, const BuildOptions& opts) {
  if (n_per_side < 4) throw InvalidArgument("n_per_side must be at least 4");
  const int n = n_per_side;
  const int np = n + 1;

  std::vector<Diagonal> diag(static_cast<std::size_t>(n) * n, Diagonal::Slash);
  {
    const Mesh grid = build_grid(domain, n, diag);
    std::vector<double> phi(grid.vertices.size());
    for (std::size_t v = 0; v < phi.size(); ++v) phi[v] = ls.value(grid.vertices[v]);
    auto cut = [&](int a, int b) {
      return std::abs(phi[a]) > kProjectionTol && std::abs(phi[b]) > kProjectionTol &&
             sign_of(phi[a]) != sign_of(phi[b]);
    };
    if (opts.adapt_diagonals) {
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          const int c00 = j * np + i, c10 = c00 + 1, c01 = c00 + np, c11 = c01 + 1;
          if (cut(c00, c11) && !cut(c10, c01)) diag[j * n + i] = Diagonal::Backslash;
        }
      }
    }
  }
  Mesh m = build_grid(domain, n, diag);
  m.rebuild_topology();

  const std::size_t nv = m.vertices.size();
  std::vector<double> phi(nv);
  std::vector<char> on_gamma(nv, 0);
  for (std::size_t v = 0; v < nv; ++v) {
    phi[v] = ls.value(m.vertices[v]);
    on_gamma[v] = std::abs(phi[v]) <= kProjectionTol;
  }

  struct Cut {
    int edge;
    double t;
    double snap_distance;
  };
  std::vector<Cut> cuts;
  for (int e = 0; e < static_cast<int>(m.edges.size()); ++e) {
    const Edge& ed = m.edges[e];
    if (on_gamma[ed.a] || on_gamma[ed.b] || sign_of(phi[ed.a]) == sign_of(phi[ed.b])) continue;
    const Point2 pa = m.vertices[ed.a], pb = m.vertices[ed.b];
    const double t = cut_parameter(ls, pa, pb, phi[ed.a]);
    cuts.push_back({e, t, std::min(t, 1.0 - t) * distance(pa, pb)});
  }
  std::stable_sort(cuts.begin(), cuts.end(),
                   [](const Cut& l, const Cut& r) { return l.snap_distance < r.snap_distance; });

  // Quality of vertex v moved to p: smallest angle over its triangles, or a
  // negative value when some triangle would lose too much area.
  auto snap_quality = [&](int v, Point2 p) {
    if (is_boundary(m.vertex_class[v])) return -1.0;
    double worst = 180.0;
    for (int t : m.triangles_of(v)) {
      const auto& tri = m.triangles[t];
      std::array<Point2, 3> c = m.corners(t);
      const double before = tri_signed_area(c[0], c[1], c[2]);
      for (int k = 0; k < 3; ++k) {
        if (tri[k] == v) c[k] = p;
      }
      if (tri_signed_area(c[0], c[1], c[2]) < opts.min_area_ratio * before) return -1.0;
      worst = std::min(worst, min_angle_of(c));
    }
    return worst;
  };

  std::vector<int> unresolved;
  for (const Cut& c : cuts) {
    const Edge& ed = m.edges[c.edge];
    if (on_gamma[ed.a] || on_gamma[ed.b]) continue;
    const Point2 p = project_to_interface(ls, m.vertices[ed.a] + c.t * (m.vertices[ed.b] - m.vertices[ed.a]));
    const int near = c.t <= 0.5 ? ed.a : ed.b;
    const int far = near == ed.a ? ed.b : ed.a;
    const double qn = snap_quality(near, p);
    const double qf = snap_quality(far, p);
    if (qn < 0.0 && qf < 0.0) {
      unresolved.push_back(c.edge);
      continue;
    }
    const int v = qn >= qf ? near : far;
    m.vertices[v] = p;
    phi[v] = ls.value(p);
    on_gamma[v] = 1;
  }

  // Remaining crossings: flip the edge when both opposite vertices already
  // lie on the interface, otherwise split it at the crossing.
  if (!unresolved.empty()) {
    std::vector<std::array<int, 2>> pending;
    for (int e : unresolved) pending.push_back({m.edges[e].a, m.edges[e].b});
    for (const auto& [a, b] : pending) {
      if (on_gamma[a] || on_gamma[b]) continue;
      m.rebuild_topology();
      const auto adj = adjacent_triangles(m, a, b);
      std::array<int, 2> opp{-1, -1};
      for (int k = 0; k < adj.count; ++k) {
        for (int w : m.triangles[adj.t[k]]) {
          if (w != a && w != b) opp[k] = w;
        }
      }
      if (adj.count == 2 && on_gamma[opp[0]] && on_gamma[opp[1]]) {
        // Triangle 0 holds (p, q) counterclockwise with opposite c = opp[0].
        const auto& t0 = m.triangles[adj.t[0]];
        int i = 0;
        while (t0[i] != a) ++i;
        const int p = t0[(i + 1) % 3] == b ? a : b;
        const int q = p == a ? b : a;
        const std::array<int, 3> n0{p, opp[1], opp[0]};
        const std::array<int, 3> n1{q, opp[0], opp[1]};
        auto corners = [&](const std::array<int, 3>& t) {
          return std::array<Point2, 3>{m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]};
        };
        const auto c0 = corners(n0), c1 = corners(n1);
        if (tri_signed_area(c0[0], c0[1], c0[2]) > 0.0 && tri_signed_area(c1[0], c1[1], c1[2]) > 0.0 &&
            std::min(min_angle_of(c0), min_angle_of(c1)) > kMinFlipAngle) {
          m.triangles[adj.t[0]] = n0;
          m.triangles[adj.t[1]] = n1;
          continue;
        }
      }
      const Point2 pa = m.vertices[a], pb = m.vertices[b];
      const Point2 x = project_to_interface(ls, pa + cut_parameter(ls, pa, pb, phi[a]) * (pb - pa));
      const int mid = static_cast<int>(m.vertices.size());
      m.vertices.push_back(x);
      m.vertex_class.push_back(VertexClass::Interior);
      phi.push_back(ls.value(x));
      on_gamma.push_back(1);
      for (int k = 0; k < adj.count; ++k) {
        const int t = adj.t[k];
        const auto tri = m.triangles[t];
        int i = 0;
        while (tri[i] != a && tri[i] != b) ++i;
        if (tri[(i + 1) % 3] != a && tri[(i + 1) % 3] != b) i = (i + 2) % 3;
        const int p = tri[i], q = tri[(i + 1) % 3], c = tri[(i + 2) % 3];
        m.triangles[t] = {mid, c, p};
        m.triangles.push_back({mid, q, c});
        m.triangle_region.push_back(m.triangle_region[t]);
        m.generation.push_back(m.generation[t] + 1);
        m.generation[t] += 1;
      }
    }
    m.rebuild_topology();
  }

  // Edges between off-interface vertices must not be crossed twice.
  for (const Edge& ed : m.edges) {
    if (on_gamma[ed.a] || on_gamma[ed.b]) continue;
    const Point2 pa = m.vertices[ed.a], pb = m.vertices[ed.b];
    const int s = sign_of(phi[ed.a]);
    for (int k = 1; k < 8; ++k) {
      const double f = ls.value(pa + (k / 8.0) * (pb - pa));
      if (std::abs(f) > kProjectionTol && sign_of(f) != s) {
        throw UnresolvedInterface("interface crosses the edge (" + std::to_string(ed.a) + ", " +
                                  std::to_string(ed.b) + ") without separating its endpoints");
      }
    }
  }

  classify(m, ls);
  for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
    if (!(m.signed_area(t) > 0.0)) {
      throw UnresolvedInterface("snapping inverted triangle " + std::to_string(t));
    }
  }
  m.rebuild_topology();
  return m;
}

namespace {

// Shared machinery for bisection and red refinement.
class Refiner {
 public:
  Refiner(const Mesh& in, const LevelSet& ls, std::vector<std::array<int, 2>>* parents)
      : out_(in), ls_(ls), parents_(parents) {
    for (int e = 0; e < static_cast<int>(in.edges.size()); ++e) {
      if (in.is_interface_edge(e)) interface_edges_.insert(edge_key(in.edges[e].a, in.edges[e].b));
    }
    if (parents_) parents_->clear();
  }

  Mesh& mesh() { return out_; }

  bool is_split(int a, int b) const { return midpoint_.contains(edge_key(a, b)); }

  // Both triangles on a non-interface edge carry region r.
  int midpoint(int a, int b, RegionTag r) {
    const std::uint64_t key = edge_key(a, b);
    if (auto it = midpoint_.find(key); it != midpoint_.end()) return it->second;
    const bool iface_edge = interface_edges_.contains(key);
    const Point2 p = iface_edge ? project_to_interface(ls_, 0.5 * (out_.vertices[a] + out_.vertices[b]))
                                : point_on_side(out_.vertices[a], out_.vertices[b], r == RegionTag::Minus ? -1 : 1);
    const bool on = iface_edge || std::abs(ls_.value(p)) <= kProjectionTol;
    const bool bnd = is_boundary(out_.vertex_class[a]) && is_boundary(out_.vertex_class[b]) &&
                     on_rect_boundary(out_.domain, p);
    const int m = static_cast<int>(out_.vertices.size());
    out_.vertices.push_back(p);
    out_.vertex_class.push_back(make_class(bnd, on));
    if (iface_edge) {
      interface_edges_.insert(edge_key(a, m));
      interface_edges_.insert(edge_key(m, b));
    }
    if (parents_) parents_->push_back({std::min(a, b), std::max(a, b)});
    midpoint_.emplace(key, m);
    return m;
  }

  // The edge midpoint, unless a curved interface bulges across the edge
  // there. Then the point halfway between the crossing nearest the midpoint
  // and the endpoint beyond it.
  Point2 point_on_side(Point2 pa, Point2 pb, int side) const {
    auto at = [&](double s) { return pa + s * (pb - pa); };
    auto good = [&](double s) { return side * ls_.value(at(s)) > 0.0; };
    if (good(0.5)) return at(0.5);
    constexpr double ds = 1.0 / 128.0;
    for (int j = 1; j < 64; ++j) {
      for (const double s : {0.5 - j * ds, 0.5 + j * ds}) {
        if (!good(s)) continue;
        double lo = s, hi = s < 0.5 ? s + ds : s - ds;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          (good(mid) ? lo : hi) = mid;
        }
        const double target = 0.5 * (lo + (s < 0.5 ? 0.0 : 1.0));
        return good(target) ? at(target) : at(s);
      }
    }
    return at(0.5);
  }

  // (v0, v1, v2) -> (m, v0, v1) in place and (m, v2, v0) appended.
  void bisect_triangle(int t) {
    const auto tri = out_.triangles[t];
    const RegionTag r = out_.triangle_region[t];
    const int m = midpoint(tri[1], tri[2], r);
    const int g = out_.generation[t] + 1;
    out_.triangles[t] = {m, tri[0], tri[1]};
    out_.generation[t] = g;
    out_.triangles.push_back({m, tri[2], tri[0]});
    out_.triangle_region.push_back(r);
    out_.generation.push_back(g);
  }

  void red_refine_triangle(int t) {
    const auto [v0, v1, v2] = out_.triangles[t];
    const RegionTag r = out_.triangle_region[t];
    const int m12 = midpoint(v1, v2, r), m20 = midpoint(v2, v0, r), m01 = midpoint(v0, v1, r);
    const int g = out_.generation[t] + 2;
    out_.triangles[t] = {v0, m01, m20};
    out_.generation[t] = g;
    for (const std::array<int, 3>& child :
         {std::array<int, 3>{m01, v1, m12}, std::array<int, 3>{m20, m12, v2},
          std::array<int, 3>{m12, m20, m01}}) {
      out_.triangles.push_back(child);
      out_.triangle_region.push_back(r);
      out_.generation.push_back(g);
    }
  }

  bool has_hanging_edge(int t) const {
    const auto& tri = out_.triangles[t];
    return is_split(tri[0], tri[1]) || is_split(tri[1], tri[2]) || is_split(tri[2], tri[0]);
  }

 private:
  Mesh out_;
  const LevelSet& ls_;
  std::vector<std::array<int, 2>>* parents_;
  std::unordered_set<std::uint64_t> interface_edges_;
  std::unordered_map<std::uint64_t, int> midpoint_;
};

// Scale-free shape measure; negative for clockwise triangles.
double shape_quality(Point2 a, Point2 b, Point2 c) {
  const double l2 = dot(b - a, b - a) + dot(c - b, c - b) + dot(a - c, a - c);
  return l2 > 0.0 ? tri_signed_area(a, b, c) / l2 : 0.0;
}

bool is_bad(const Mesh& m, int t) { return !(m.signed_area(t) > 0.0) || min_angle_of(m.corners(t)) < kMinFlipAngle; }

// A projected interface midpoint can pass a nearby new vertex when the
// interface bends strongly across one chord. Such vertices are moved by a
// compass search that maximizes the worst shape in their star, staying on
// their side of the interface.
void untangle(Mesh& m, const LevelSet& ls, int first_new) {
  for (int sweep = 0; sweep < 10; ++sweep) {
    std::vector<int> movable;
    for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
      if (!is_bad(m, t)) continue;
      for (int v : m.triangles[t]) {
        if (v >= first_new && m.vertex_class[v] == VertexClass::Interior) movable.push_back(v);
      }
    }
    if (movable.empty()) break;
    std::sort(movable.begin(), movable.end());
    movable.erase(std::unique(movable.begin(), movable.end()), movable.end());
    for (int v : movable) {
      const auto star = m.triangles_of(v);
      const int side = m.triangle_region[star.front()] == RegionTag::Minus ? -1 : 1;
      double h = std::numeric_limits<double>::infinity();
      for (int t : star) {
        for (int w : m.triangles[t]) {
          if (w != v) h = std::min(h, distance(m.vertices[v], m.vertices[w]));
        }
      }
      auto worst = [&](Point2 p) {
        m.vertices[v] = p;
        double q = std::numeric_limits<double>::infinity();
        for (int t : star) {
          const auto c = m.corners(t);
          q = std::min(q, shape_quality(c[0], c[1], c[2]));
        }
        return q;
      };
      // A chord midpoint can land just across a curved interface; such a
      // vertex may move but not further across.
      const double start_phi = side * ls.value(m.vertices[v]);
      auto allowed = [&](Point2 p) {
        const double phi = side * ls.value(p);
        return phi > 0.0 || (start_phi <= 0.0 && phi >= start_phi);
      };
      Point2 best = m.vertices[v];
      double best_q = worst(best);
      for (double step = 0.25 * h; step > 1e-4 * h;) {
        Point2 cand_best = best;
        double cand_q = best_q;
        for (int k = 0; k < 8; ++k) {
          const double a = k * std::numbers::pi / 4.0;
          const Point2 cand = best + step * Point2{std::cos(a), std::sin(a)};
          if (!allowed(cand)) continue;
          const double q = worst(cand);
          if (q > cand_q) {
            cand_best = cand;
            cand_q = q;
          }
        }
        if (cand_q > best_q) {
          best = cand_best;
          best_q = cand_q;
        } else {
          step *= 0.5;
        }
      }
      m.vertices[v] = best;
    }
  }
  for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
    if (!(m.signed_area(t) > 0.0)) {
      throw UnresolvedInterface("bisection inverted triangle " + std::to_string(t) +
                                " on a strongly curved interface; start from a finer mesh");
    }
  }
}

}  // namespace

Mesh bisect(const Mesh& mesh, std::span<const int> marked, const LevelSet& ls,
            std::vector<std::array<int, 2>>* new_vertex_parents) {
  Refiner ref(mesh, ls, new_vertex_parents);
  std::vector<int> order(marked.begin(), marked.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  const int nt0 = static_cast<int>(mesh.triangles.size());
  for (int t : order) {
    if (t < 0 || t >= nt0) throw InvalidArgument("marked triangle index out of range");
    ref.bisect_triangle(t);
  }
  // Closure: keep bisecting any triangle that still holds a split edge.
  bool changed = !order.empty();
  while (changed) {
    changed = false;
    for (int t = 0; t < static_cast<int>(ref.mesh().triangles.size()); ++t) {
      while (ref.has_hanging_edge(t)) {
        ref.bisect_triangle(t);
        changed = true;
      }
    }
  }
  Mesh out = std::move(ref.mesh());
  out.rebuild_topology();
  untangle(out, ls, static_cast<int>(mesh.vertices.size()));
  return out;
}

Mesh refine_uniform(const Mesh& mesh, const LevelSet& ls,
                    std::vector<std::array<int, 2>>* new_vertex_parents) {
  Refiner ref(mesh, ls, new_vertex_parents);
  const int nt = static_cast<int>(mesh.triangles.size());
  for (int t = 0; t < nt; ++t) ref.red_refine_triangle(t);
  Mesh out = std::move(ref.mesh());
  out.rebuild_topology();
  untangle(out, ls, static_cast<int>(mesh.vertices.size()));
  return out;
}

Patch layers(const Mesh& mesh, int z, int n, std::optional<RegionTag> restrict_to) {
  if (n < 0) throw InvalidArgument("layer count must be nonnegative");
  Patch p;
  p.center = z;
  p.layer_count = n;
  p.node_set = {z};
  std::vector<int> frontier{z};
  for (int k = 1; k <= n && !frontier.empty(); ++k) {
    std::vector<int> fresh;
    for (int u : frontier) {
      for (int t : mesh.triangles_of(u)) {
        if (restrict_to && mesh.triangle_region[t] != *restrict_to) continue;
        auto it = std::lower_bound(p.triangles.begin(), p.triangles.end(), t);
        if (it != p.triangles.end() && *it == t) continue;
        p.triangles.insert(it, t);
        for (int w : mesh.triangles[t]) {
          auto jt = std::lower_bound(p.node_set.begin(), p.node_set.end(), w);
          if (jt != p.node_set.end() && *jt == w) continue;
          p.node_set.insert(jt, w);
          fresh.push_back(w);
        }
      }
    }
    frontier = std::move(fresh);
  }
  return p;
}

MeshCheck check_invariants(const Mesh& mesh, const LevelSet& ls) {
  MeshCheck chk;
  auto fail = [&chk](std::string s) {
    if (chk.violations.size() < 50) chk.violations.push_back(std::move(s));
  };
  const int nv = static_cast<int>(mesh.vertices.size());
  const int nt = static_cast<int>(mesh.triangles.size());
  const int ne = static_cast<int>(mesh.edges.size());

  // Conformity: boundary edges lie on the domain boundary.
  for (const Edge& e : mesh.edges) {
    if (e.right >= 0) continue;
    const Point2 pa = mesh.vertices[e.a], pb = mesh.vertices[e.b];
    if (!on_rect_boundary(mesh.domain, pa) || !on_rect_boundary(mesh.domain, pb) ||
        !on_rect_boundary(mesh.domain, 0.5 * (pa + pb))) {
      fail("edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
           ") has one neighbour but is not on the domain boundary");
    }
  }
  if (nv - ne + nt != 1) {
    fail("Euler characteristic V - E + T = " + std::to_string(nv - ne + nt) + ", expected 1");
  }
  for (int t = 0; t < nt; ++t) {
    if (!(mesh.signed_area(t) > 0.0)) fail("triangle " + std::to_string(t) + " is not CCW");
  }

  std::vector<double> phi(nv);
  for (int v = 0; v < nv; ++v) {
    phi[v] = ls.value(mesh.vertices[v]);
    const bool iface = is_interface(mesh.vertex_class[v]);
    if (iface && !(std::abs(phi[v]) <= kProjectionTol)) {
      fail("interface vertex " + std::to_string(v) + " has |phi| = " + std::to_string(phi[v]));
    }
    if (is_boundary(mesh.vertex_class[v]) != on_rect_boundary(mesh.domain, mesh.vertices[v])) {
      fail("vertex " + std::to_string(v) + " boundary flag disagrees with its position");
    }
  }
  for (int t = 0; t < nt; ++t) {
    const int want = mesh.triangle_region[t] == RegionTag::Minus ? -1 : 1;
    for (int v : mesh.triangles[t]) {
      if (is_interface(mesh.vertex_class[v])) continue;
      if (sign_of(phi[v]) != want) {
        fail("triangle " + std::to_string(t) + " tagged " + to_string(mesh.triangle_region[t]) +
             " holds vertex " + std::to_string(v) + " of the other sign");
      }
    }
  }

  // Gamma_h: region-separating edges join interface vertices and form polylines.
  std::vector<int> degree(nv, 0);
  for (int e = 0; e < ne; ++e) {
    if (!mesh.is_interface_edge(e)) continue;
    const Edge& ed = mesh.edges[e];
    for (int v : {ed.a, ed.b}) {
      ++degree[v];
      if (!is_interface(mesh.vertex_class[v])) {
        fail("interface edge endpoint " + std::to_string(v) + " is not classed on the interface");
      }
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (degree[v] == 0 || is_boundary(mesh.vertex_class[v])) continue;
    if (degree[v] % 2 != 0) {
      fail("interface polyline has an open end at interior vertex " + std::to_string(v));
    }
  }
  return chk;
}

double min_angle_degrees(const Mesh& mesh) {
  double best = 180.0;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto c = mesh.corners(t);
    for (int k = 0; k < 3; ++k) {
      const Point2 u = c[(k + 1) % 3] - c[k], w = c[(k + 2) % 3] - c[k];
      const double ang = std::atan2(std::abs(cross(u, w)), dot(u, w));
      best = std::min(best, ang * 180.0 / std::numbers::pi);
    }
  }
  return best;
}

double max_diameter(const Mesh& mesh) {
  double d = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) d = std::max(d, mesh.diameter(t));
  return d;
}

double min_diameter(const Mesh& mesh) {
  double d = std::numeric_limits<double>::infinity();
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) d = std::min(d, mesh.diameter(t));
  return d;
}

std::size_t count_interface_vertices(const Mesh& mesh) {
  return static_cast<std::size_t>(std::count_if(mesh.vertex_class.begin(), mesh.vertex_class.end(),
                                                [](VertexClass c) { return is_interface(c); }));
}

}  // namespace ifem
