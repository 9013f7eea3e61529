#include "ifem/fem.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <sstream>

#include "ifem/exceptions.hpp"
#include "ifem/parallel.hpp"
#include "ifem/quadrature.hpp"

namespace ifem {

std::array<Point2, 3> barycentric_gradients(const std::array<Point2, 3>& c) {
  const double two_area = cross(c[1] - c[0], c[2] - c[0]);
  std::array<Point2, 3> g;
  for (int i = 0; i < 3; ++i) {
    const Point2 pj = c[(i + 1) % 3], pk = c[(i + 2) % 3];
    g[i] = {(pj.y - pk.y) / two_area, (pk.x - pj.x) / two_area};
  }
  return g;
}

Matrix3 local_stiffness(const std::array<Point2, 3>& c, double beta) {
  const double area = 0.5 * cross(c[1] - c[0], c[2] - c[0]);
  const double h = std::max({distance(c[0], c[1]), distance(c[1], c[2]), distance(c[2], c[0])});
  if (!(area > 1e-14 * h * h)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "degenerate triangle (" << c[0].x << ", " << c[0].y << ") (" << c[1].x << ", " << c[1].y
        << ") (" << c[2].x << ", " << c[2].y << "), area " << area;
    throw DegenerateTriangle(msg.str());
  }
  const auto g = barycentric_gradients(c);
  Matrix3 k{};
  for (int i = 0; i < 3; ++i) {
    k[i][i] = beta * area * dot(g[i], g[i]);
    for (int j = i + 1; j < 3; ++j) k[i][j] = k[j][i] = beta * area * dot(g[i], g[j]);
  }
  return k;
}

void CsrMatrix::compute_row_sums() {
  row_sum.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    long double s = 0.0L;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k];
    row_sum[i] = static_cast<double>(s);
  }
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const bool diff_form = row_sum.size() == static_cast<std::size_t>(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double s = 0.0;
      if (diff_form) {
        const double xi = x[i];
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * (x[col[k]] - xi);
        s += row_sum[i] * xi;
      } else {
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
      }
      y[i] = s;
    }
  });
}

double CsrMatrix::at(int i, int j) const {
  const auto first = col.begin() + row_ptr[i], last = col.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? val[it - col.begin()] : 0.0;
}

bool CsrMatrix::is_symmetric() const {
  for (int i = 0; i < n; ++i) {
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const double mirror = at(col[k], i);
      if (std::bit_cast<std::uint64_t>(mirror) != std::bit_cast<std::uint64_t>(val[k])) return false;
    }
  }
  return true;
}

NodalField plus_lift(const Mesh& mesh, const LevelSetProblem& problem) {
  NodalField lift(mesh.num_vertices(), 0.0);
  if (!problem.has_value_jump()) return lift;
  for (std::size_t v = 0; v < lift.size(); ++v) {
    if (mesh.touches_region(static_cast<int>(v), RegionTag::Plus)) lift[v] = problem.lift(mesh.vertices[v]);
  }
  return lift;
}

namespace {

CsrMatrix sparsity_pattern(const Mesh& mesh) {
  const int nv = static_cast<int>(mesh.num_vertices());
  std::vector<std::vector<int>> adj(nv);
  for (int v = 0; v < nv; ++v) adj[v].push_back(v);
  for (const Edge& e : mesh.edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  CsrMatrix a;
  a.n = nv;
  a.row_ptr.assign(nv + 1, 0);
  for (int v = 0; v < nv; ++v) {
    std::sort(adj[v].begin(), adj[v].end());
    a.row_ptr[v + 1] = a.row_ptr[v] + static_cast<int>(adj[v].size());
  }
  a.col.reserve(a.row_ptr.back());
  for (const auto& row : adj) a.col.insert(a.col.end(), row.begin(), row.end());
  a.val.assign(a.col.size(), 0.0);
  return a;
}

int slot(const CsrMatrix& a, int i, int j) {
  for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
    if (a.col[k] == j) return k;
  }
  throw Error("sparsity pattern is missing an entry");
}

}  // namespace

SparseSystem assemble(const Mesh& mesh, const LevelSetProblem& problem, const AssemblyOptions& opts) {
  const int nv = static_cast<int>(mesh.num_vertices());
  const std::size_t nt = mesh.num_triangles();
  SparseSystem sys;
  sys.matrix = sparsity_pattern(mesh);
  sys.rhs.assign(nv, 0.0);

  const NodalField lift = plus_lift(mesh, problem);
  const TriangleRule& rule = triangle_rule_degree4();

  std::vector<Matrix3> k_local(nt);
  std::vector<std::array<double, 3>> f_local(nt);
  parallel_for(nt, [&](std::size_t b, std::size_t e) {
    for (std::size_t t = b; t < e; ++t) {
      const RegionTag r = mesh.triangle_region[t];
      const auto c = mesh.corners(static_cast<int>(t));
      k_local[t] = local_stiffness(c, problem.beta(r));
      const double area = mesh.signed_area(static_cast<int>(t));
      std::array<double, 3> f{0.0, 0.0, 0.0};
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const double fq = problem.f(map_bary(c, rule.bary[q]), r) * rule.weights[q] * area;
        for (int i = 0; i < 3; ++i) f[i] += fq * rule.bary[q][i];
      }
      if (r == RegionTag::Plus && problem.has_value_jump()) {
        const auto& tri = mesh.triangles[t];
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) f[i] -= k_local[t][i][j] * lift[tri[j]];
        }
      }
      f_local[t] = f;
    }
  });

  CsrMatrix& a = sys.matrix;
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      sys.rhs[tri[i]] += f_local[t][i];
      for (int j = 0; j < 3; ++j) a.val[slot(a, tri[i], tri[j])] += k_local[t][i][j];
    }
  }

  if (problem.has_flux_jump()) {
    const LineRule line = gauss_legendre(opts.line_points);
    for (int e = 0; e < static_cast<int>(mesh.edges.size()); ++e) {
      if (!mesh.is_interface_edge(e)) continue;
      const Edge& ed = mesh.edges[e];
      const Point2 pa = mesh.vertices[ed.a], pb = mesh.vertices[ed.b];
      const double len = distance(pa, pb);
      for (std::size_t q = 0; q < line.nodes.size(); ++q) {
        const double s = line.nodes[q];
        const Point2 on_gamma = project_to_interface(problem.ls, pa + s * (pb - pa));
        const double gq = problem.g(on_gamma) * line.weights[q] * len;
        sys.rhs[ed.a] -= gq * (1.0 - s);
        sys.rhs[ed.b] -= gq * s;
      }
    }
  }

  sys.dirichlet_mask.assign(nv, 0);
  sys.dirichlet_values.assign(nv, 0.0);
  for (int v = 0; v < nv; ++v) {
    if (!is_boundary(mesh.vertex_class[v])) continue;
    const RegionTag r = mesh.vertex_region(v);
    sys.dirichlet_mask[v] = 1;
    sys.dirichlet_values[v] = problem.u(mesh.vertices[v], r) - (r == RegionTag::Plus ? lift[v] : 0.0);
  }
  for (int i = 0; i < nv; ++i) {
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const int j = a.col[k];
      if (sys.dirichlet_mask[i]) {
        a.val[k] = (i == j) ? 1.0 : 0.0;
      } else if (sys.dirichlet_mask[j]) {
        sys.rhs[i] -= a.val[k] * sys.dirichlet_values[j];
        a.val[k] = 0.0;
      }
    }
    if (sys.dirichlet_mask[i]) sys.rhs[i] = sys.dirichlet_values[i];
  }
  a.compute_row_sums();
  return sys;
}

namespace {

double dot_product(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

}  // namespace

double relative_residual(const SparseSystem& sys, std::span<const double> x) {
  const double bnorm = std::sqrt(dot_product(sys.rhs, sys.rhs));
  std::vector<double> r(sys.rhs.size());
  sys.matrix.multiply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = sys.rhs[i] - r[i];
  const double rnorm = std::sqrt(dot_product(r, r));
  return bnorm > 0.0 ? rnorm / bnorm : rnorm;
}

NodalField solve(const SparseSystem& sys, const SolveOptions& opts, const NodalField* initial_guess,
                 SolveStats* stats) {
  const std::size_t n = sys.rhs.size();
  const CsrMatrix& a = sys.matrix;
  NodalField x(n, 0.0);
  if (initial_guess && initial_guess->size() == n) x = *initial_guess;
  for (std::size_t i = 0; i < n; ++i) {
    if (sys.dirichlet_mask[i]) x[i] = sys.dirichlet_values[i];
  }
  const double bnorm = std::sqrt(dot_product(sys.rhs, sys.rhs));
  SolveStats local;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    if (stats) *stats = local;
    return x;
  }
  std::vector<double> inv_diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a.at(static_cast<int>(i), static_cast<int>(i));
    inv_diag[i] = d != 0.0 ? 1.0 / d : 1.0;
  }
  const long cap = static_cast<long>(opts.max_iter_per_unknown) * static_cast<long>(std::max<std::size_t>(n, 1));
  std::vector<double> r(n), z(n), p(n), ap(n);
  long it = 0;
  const double target = opts.tol * bnorm;
  // Outer loop restarts from the true residual if recurrence drift hides it.
  for (int restart = 0; restart < 5; ++restart) {
    a.multiply(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = sys.rhs[i] - r[i];
    double rnorm = std::sqrt(dot_product(r, r));
    if (rnorm <= target) break;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] = inv_diag[i] * r[i];
    double rz = dot_product(r, z);
    while (rnorm > target) {
      if (it >= cap) {
        std::ostringstream msg;
        msg << "conjugate gradients reached the iteration cap " << cap << " with relative residual "
            << rnorm / bnorm;
        throw MaxIterations(msg.str());
      }
      a.multiply(p, ap);
      const double pap = dot_product(p, ap);
      if (!(pap > 0.0)) throw MaxIterations("conjugate gradients met a non-positive curvature direction");
      const double alpha = rz / pap;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
        z[i] = inv_diag[i] * r[i];
      }
      const double rz_new = dot_product(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
      rnorm = std::sqrt(dot_product(r, r));
      ++it;
    }
  }
  local.iterations = static_cast<int>(it);
  local.relative_residual = relative_residual(sys, x);
  if (local.relative_residual > opts.tol) {
    std::ostringstream msg;
    msg << "conjugate gradients stalled at relative residual " << local.relative_residual;
    throw MaxIterations(msg.str());
  }
  if (stats) *stats = local;
  return x;
}

Point2 FeSolution::element_gradient(const Mesh& mesh, int t) const {
  const auto g = barycentric_gradients(mesh.corners(t));
  const auto& vals = side(mesh.triangle_region[t]);
  const auto& tri = mesh.triangles[t];
  return vals[tri[0]] * g[0] + vals[tri[1]] * g[1] + vals[tri[2]] * g[2];
}

FeSolution make_solution(const Mesh& mesh, const LevelSetProblem& problem, NodalField w) {
  FeSolution s;
  const NodalField lift = plus_lift(mesh, problem);
  s.minus = w;
  s.plus = w;
  for (std::size_t v = 0; v < w.size(); ++v) s.plus[v] += lift[v];
  s.w = std::move(w);
  return s;
}

FeSolution solve_problem(const Mesh& mesh, const LevelSetProblem& problem, const SolveOptions& opts,
                         const NodalField* warm_start, const AssemblyOptions& assembly) {
  const SparseSystem sys = assemble(mesh, problem, assembly);
  SolveStats stats;
  NodalField w = solve(sys, opts, warm_start, &stats);
  FeSolution s = make_solution(mesh, problem, std::move(w));
  s.stats = stats;
  return s;
}

NodalField prolongate(const NodalField& coarse, std::span<const std::array<int, 2>> parents) {
  NodalField fine(coarse);
  fine.reserve(coarse.size() + parents.size());
  for (const auto& pr : parents) fine.push_back(0.5 * (fine[pr[0]] + fine[pr[1]]));
  return fine;
}

}  // namespace ifem
