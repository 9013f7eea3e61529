#include "ifem/recovery.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <ostream>
#include <sstream>

#include "ifem/exceptions.hpp"
#include "ifem/parallel.hpp"

namespace ifem {

namespace {

struct ScaledDesign {
  Eigen::MatrixXd a;
  double scale = 1.0;
};

ScaledDesign design_matrix(std::span<const Point2> pts, Point2 center) {
  ScaledDesign d;
  double h = 0.0;
  for (const Point2& p : pts) h = std::max(h, distance(p, center));
  d.scale = h > 0.0 ? h : 1.0;
  d.a.resize(static_cast<Eigen::Index>(pts.size()), 6);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = (pts[i].x - center.x) / d.scale, y = (pts[i].y - center.y) / d.scale;
    d.a.row(static_cast<Eigen::Index>(i)) << 1.0, x, y, x * x, x * y, y * y;
  }
  return d;
}

using Svd = Eigen::JacobiSVD<Eigen::MatrixXd>;

double smallest_singular_value(const Svd& svd) {
  const auto& s = svd.singularValues();
  return s.size() < 6 ? 0.0 : s(5);
}

std::vector<Point2> positions(const Mesh& mesh, std::span<const int> nodes) {
  std::vector<Point2> p;
  p.reserve(nodes.size());
  for (int v : nodes) p.push_back(mesh.vertices[v]);
  return p;
}

bool unisolvent(const Mesh& mesh, std::span<const int> nodes, int z, double rank_tol) {
  if (nodes.size() < 6) return false;
  const auto d = design_matrix(positions(mesh, nodes), mesh.vertices[z]);
  const Svd svd(d.a);
  return smallest_singular_value(svd) >= rank_tol;
}

bool submesh_interior(const Mesh& mesh, int v, std::optional<RegionTag> r) {
  if (is_boundary(mesh.vertex_class[v])) return false;
  if (!r) return true;
  for (int t : mesh.triangles_of(v)) {
    if (mesh.triangle_region[t] != *r) return false;
  }
  return true;
}

std::string where(const Mesh& mesh, int z, std::optional<RegionTag> r) {
  std::ostringstream s;
  s.precision(17);
  s << "vertex " << z << " at (" << mesh.vertices[z].x << ", " << mesh.vertices[z].y << ")";
  if (r) s << " restricted to " << to_string(*r);
  return s.str();
}

SamplingPatch interior_patch(const Mesh& mesh, int z, std::optional<RegionTag> r, const RecoveryOptions& opts) {
  std::size_t previous = 0;
  for (int n = std::max(1, opts.min_layers); n <= opts.max_layers; ++n) {
    Patch p = layers(mesh, z, n, r);
    if (unisolvent(mesh, p.node_set, z, opts.rank_tol)) return {std::move(p.node_set), std::move(p.triangles)};
    if (p.node_set.size() == previous) break;
    previous = p.node_set.size();
  }
  throw PatchExhausted("no unisolvent patch for " + where(mesh, z, r));
}

template <class T>
void merge_sorted(std::vector<T>& into, const std::vector<T>& from) {
  std::vector<T> out;
  out.reserve(into.size() + from.size());
  std::set_union(into.begin(), into.end(), from.begin(), from.end(), std::back_inserter(out));
  into = std::move(out);
}

}  // namespace

double QuadraticFit::value(Point2 z) const {
  const double x = (z.x - center.x) / scale, y = (z.y - center.y) / scale;
  const auto& c = coefficients;
  return c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y;
}

QuadraticFit fit_quadratic(std::span<const std::pair<Point2, double>> samples, Point2 center, double rank_tol) {
  if (samples.size() < 6) throw RankDeficient("quadratic fit needs at least 6 samples");
  std::vector<Point2> pts;
  Eigen::VectorXd b(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    pts.push_back(samples[i].first);
    b(static_cast<Eigen::Index>(i)) = samples[i].second;
  }
  const auto d = design_matrix(pts, center);
  const Svd svd(d.a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  QuadraticFit fit;
  fit.center = center;
  fit.scale = d.scale;
  fit.min_singular_value = smallest_singular_value(svd);
  if (fit.min_singular_value < rank_tol) {
    std::ostringstream msg;
    msg << "sampling set is not unisolvent for quadratics (smallest singular value "
        << fit.min_singular_value << ")";
    throw RankDeficient(msg.str());
  }
  const Eigen::VectorXd c = svd.solve(b);
  for (int k = 0; k < 6; ++k) fit.coefficients[k] = c(k);
  return fit;
}

SamplingPatch sampling_patch(const Mesh& mesh, int z, std::optional<RegionTag> r, const RecoveryOptions& opts) {
  if (submesh_interior(mesh, z, r)) return interior_patch(mesh, z, r, opts);

  std::size_t previous = 0;
  for (int n0 = 1; n0 <= opts.max_layers; ++n0) {
    Patch p = layers(mesh, z, n0, r);
    std::vector<int> inner;
    for (int v : p.node_set) {
      if (v != z && submesh_interior(mesh, v, r)) inner.push_back(v);
    }
    if (!inner.empty()) {
      SamplingPatch k{std::move(p.node_set), std::move(p.triangles)};
      for (int v : inner) {
        const SamplingPatch kv = interior_patch(mesh, v, r, opts);
        merge_sorted(k.nodes, kv.nodes);
        merge_sorted(k.triangles, kv.triangles);
      }
      if (unisolvent(mesh, k.nodes, z, opts.rank_tol)) return k;
    }
    if (p.node_set.size() == previous) break;
    previous = p.node_set.size();
  }
  throw PatchExhausted("no unisolvent boundary patch for " + where(mesh, z, r));
}

Point2 StencilSet::apply(int v, std::span<const double> u) const {
  double gx = 0.0, gy = 0.0;
  for (int k = offsets[v]; k < offsets[v + 1]; ++k) {
    gx += wx[k] * u[nodes[k]];
    gy += wy[k] * u[nodes[k]];
  }
  return {gx, gy};
}

namespace {

struct LocalStencil {
  std::vector<int> nodes;
  std::vector<double> wx, wy;
  bool pure[2] = {false, false};  // unrestricted patch lies in one region
};

LocalStencil make_stencil(const Mesh& mesh, int z, std::optional<RegionTag> r, const RecoveryOptions& opts) {
  SamplingPatch k = sampling_patch(mesh, z, r, opts);
  const auto d = design_matrix(positions(mesh, k.nodes), mesh.vertices[z]);
  const Svd svd(d.a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (smallest_singular_value(svd) < opts.rank_tol) throw RankDeficient("rank-deficient patch at " + where(mesh, z, r));
  // Rows 1 and 2 of the pseudo-inverse V S^-1 U^T give the gradient weights.
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::MatrixXd& v = svd.matrixV();
  const Eigen::VectorXd& s = svd.singularValues();
  LocalStencil st;
  const std::size_t m = k.nodes.size();
  st.wx.assign(m, 0.0);
  st.wy.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double ax = 0.0, ay = 0.0;
    for (int l = 0; l < 6; ++l) {
      const double ul = u(static_cast<Eigen::Index>(j), l) / s(l);
      ax += v(1, l) * ul;
      ay += v(2, l) * ul;
    }
    st.wx[j] = ax / d.scale;
    st.wy[j] = ay / d.scale;
  }
  for (int side = 0; side < 2; ++side) {
    st.pure[side] = std::all_of(k.triangles.begin(), k.triangles.end(), [&](int t) {
      return mesh.triangle_region[t] == static_cast<RegionTag>(side);
    });
  }
  st.nodes = std::move(k.nodes);
  return st;
}

StencilSet flatten(const std::vector<LocalStencil>& local, const std::vector<char>& present) {
  StencilSet s;
  s.offsets.assign(local.size() + 1, 0);
  for (std::size_t v = 0; v < local.size(); ++v) {
    s.offsets[v + 1] = s.offsets[v] + (present[v] ? static_cast<int>(local[v].nodes.size()) : 0);
  }
  s.nodes.reserve(s.offsets.back());
  s.wx.reserve(s.offsets.back());
  s.wy.reserve(s.offsets.back());
  for (std::size_t v = 0; v < local.size(); ++v) {
    if (!present[v]) continue;
    s.nodes.insert(s.nodes.end(), local[v].nodes.begin(), local[v].nodes.end());
    s.wx.insert(s.wx.end(), local[v].wx.begin(), local[v].wx.end());
    s.wy.insert(s.wy.end(), local[v].wy.begin(), local[v].wy.end());
  }
  return s;
}

}  // namespace

RecoveryOperator build_recovery(const Mesh& mesh, const RecoveryOptions& opts) {
  const std::size_t nv = mesh.num_vertices();
  RecoveryOperator op;
  std::vector<LocalStencil> single(nv);
  parallel_for(nv, [&](std::size_t b, std::size_t e) {
    for (std::size_t v = b; v < e; ++v) single[v] = make_stencil(mesh, static_cast<int>(v), std::nullopt, opts);
  });
  op.single = flatten(single, std::vector<char>(nv, 1));

  for (int side = 0; side < 2; ++side) {
    const RegionTag r = static_cast<RegionTag>(side);
    std::vector<LocalStencil> local(nv);
    std::vector<char> present(nv, 0);
    std::vector<RecoveryCase>& cases = op.side_case[side];
    cases.assign(nv, RecoveryCase::Absent);
    parallel_for(nv, [&](std::size_t b, std::size_t e) {
      for (std::size_t v = b; v < e; ++v) {
        const int z = static_cast<int>(v);
        if (!mesh.touches_region(z, r)) continue;
        present[v] = 1;
        if (mesh.touches_region(z, other(r))) {
          cases[v] = RecoveryCase::Interface;
          local[v] = make_stencil(mesh, z, r, opts);
        } else if (single[v].pure[side]) {
          cases[v] = RecoveryCase::Far;
          local[v] = single[v];
        } else {
          cases[v] = RecoveryCase::Near;
          local[v] = make_stencil(mesh, z, r, opts);
        }
      }
    });
    op.side[side] = flatten(local, present);
  }
  return op;
}

std::size_t TwoValuedGradientField::count_in_both() const {
  std::size_t n = 0;
  for (std::size_t v = 0; v < present[0].size(); ++v) n += present[0][v] && present[1][v];
  return n;
}

Point2 ppr_node(const Mesh& mesh, std::span<const double> u, int z, std::optional<RegionTag> r,
                const RecoveryOptions& opts) {
  const SamplingPatch k = sampling_patch(mesh, z, r, opts);
  std::vector<std::pair<Point2, double>> samples;
  samples.reserve(k.nodes.size());
  for (int v : k.nodes) samples.emplace_back(mesh.vertices[v], u[v]);
  return fit_quadratic(samples, mesh.vertices[z], opts.rank_tol).gradient_at_center();
}

GradientField ppr_recover(const RecoveryOperator& op, std::span<const double> u) {
  GradientField g;
  const std::size_t nv = op.single.offsets.size() - 1;
  g.values.resize(nv);
  parallel_for(nv, [&](std::size_t b, std::size_t e) {
    for (std::size_t v = b; v < e; ++v) g.values[v] = op.single.apply(static_cast<int>(v), u);
  });
  return g;
}

GradientField ppr_recover(const Mesh& mesh, std::span<const double> u, const RecoveryOptions& opts) {
  return ppr_recover(build_recovery(mesh, opts), u);
}

TwoValuedGradientField ippr_recover(const RecoveryOperator& op, std::span<const double> u_minus,
                                    std::span<const double> u_plus) {
  TwoValuedGradientField g;
  const std::size_t nv = op.single.offsets.size() - 1;
  for (int side = 0; side < 2; ++side) {
    const StencilSet& s = op.side[side];
    const std::span<const double> u = side == 0 ? u_minus : u_plus;
    g.values[side].assign(nv, Point2{});
    g.present[side].assign(nv, 0);
    parallel_for(nv, [&](std::size_t b, std::size_t e) {
      for (std::size_t v = b; v < e; ++v) {
        if (!s.has(static_cast<int>(v))) continue;
        g.present[side][v] = 1;
        g.values[side][v] = s.apply(static_cast<int>(v), u);
      }
    });
  }
  return g;
}

TwoValuedGradientField ippr_recover(const Mesh& mesh, std::span<const double> u_minus,
                                    std::span<const double> u_plus, const RecoveryOptions& opts) {
  return ippr_recover(build_recovery(mesh, opts), u_minus, u_plus);
}

Point2 interpolate(const Mesh& mesh, const std::vector<Point2>& field, int t, const std::array<double, 3>& bary) {
  const auto& tri = mesh.triangles[t];
  return bary[0] * field[tri[0]] + bary[1] * field[tri[1]] + bary[2] * field[tri[2]];
}

void write_gradient(std::ostream& os, const GradientField& g) {
  const auto old = os.precision(17);
  os << "ifem-grad v1\nblock single " << g.values.size() << '\n';
  for (std::size_t v = 0; v < g.values.size(); ++v) os << v << ' ' << g.values[v].x << ' ' << g.values[v].y << '\n';
  os.precision(old);
}

void write_gradient(std::ostream& os, const TwoValuedGradientField& g) {
  const auto old = os.precision(17);
  os << "ifem-grad v1\n";
  for (int side = 0; side < 2; ++side) {
    const auto& present = g.present[side];
    const auto count = std::count(present.begin(), present.end(), 1);
    os << "block " << to_string(static_cast<RegionTag>(side)) << ' ' << count << '\n';
    for (std::size_t v = 0; v < present.size(); ++v) {
      if (present[v]) os << v << ' ' << g.values[side][v].x << ' ' << g.values[side][v].y << '\n';
    }
  }
  os.precision(old);
}

}  // namespace ifem
