#include "ifem/errors.hpp"

#include <cmath>
#include <limits>

#include "ifem/exceptions.hpp"
#include "ifem/parallel.hpp"

namespace ifem {

namespace {

RegionTag exact_side(const Mesh& mesh, const LevelSetProblem& p, int t, Point2 x, const ErrorOptions& opts) {
  if (!opts.region_by_phi) return mesh.triangle_region[t];
  const double phi = p.ls.value(x);
  if (phi == 0.0) return mesh.triangle_region[t];
  return phi < 0.0 ? RegionTag::Minus : RegionTag::Plus;
}

const TriangleRule& pick_rule(const ErrorOptions& opts) {
  return opts.rule ? *opts.rule : triangle_rule_degree4();
}

}  // namespace

double H1Error::full() const { return std::sqrt(l2 * l2 + semi * semi); }

H1Error h1_error(const Mesh& mesh, const FeSolution& uh, const LevelSetProblem& problem, const ErrorOptions& opts) {
  const TriangleRule& rule = pick_rule(opts);
  const std::size_t nt = mesh.num_triangles();
  // Three sums share one pass per triangle.
  std::vector<std::array<double, 3>> local(nt);
  parallel_for(nt, [&](std::size_t b, std::size_t e) {
    for (std::size_t t = b; t < e; ++t) {
      const int ti = static_cast<int>(t);
      const auto c = mesh.corners(ti);
      const double area = mesh.signed_area(ti);
      const auto& vals = uh.side(mesh.triangle_region[t]);
      const auto& tri = mesh.triangles[t];
      const Point2 gh = uh.element_gradient(mesh, ti);
      const double beta = problem.beta(mesh.triangle_region[t]);
      double l2 = 0.0, semi = 0.0;
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const auto& bq = rule.bary[q];
        const Point2 x = map_bary(c, bq);
        const RegionTag r = exact_side(mesh, problem, ti, x, opts);
        const double uhq = bq[0] * vals[tri[0]] + bq[1] * vals[tri[1]] + bq[2] * vals[tri[2]];
        const double du = problem.u(x, r) - uhq;
        const Point2 dg = problem.grad_u(x, r) - gh;
        l2 += rule.weights[q] * du * du;
        semi += rule.weights[q] * dot(dg, dg);
      }
      local[t] = {l2 * area, semi * area, beta * semi * area};
    }
  });
  H1Error out;
  double s[3] = {0.0, 0.0, 0.0};
  for (const auto& l : local) {
    for (int k = 0; k < 3; ++k) s[k] += l[k];
  }
  out.l2 = std::sqrt(s[0]);
  out.semi = std::sqrt(s[1]);
  out.energy = std::sqrt(s[2]);
  return out;
}

double supercloseness_error(const Mesh& mesh, const FeSolution& uh, const LevelSetProblem& problem) {
  const double sum = parallel_sum(mesh.num_triangles(), [&](std::size_t t) {
    const int ti = static_cast<int>(t);
    const auto c = mesh.corners(ti);
    const RegionTag r = mesh.triangle_region[t];
    const auto g = barycentric_gradients(c);
    Point2 gi{};
    for (int k = 0; k < 3; ++k) gi = gi + problem.u(c[k], r) * g[k];
    const Point2 d = gi - uh.element_gradient(mesh, ti);
    return mesh.signed_area(ti) * dot(d, d);
  });
  return std::sqrt(sum);
}

namespace {

template <class FieldOf>
RecoveredError recovered_impl(const Mesh& mesh, const LevelSetProblem& problem, const ErrorOptions& opts,
                              FieldOf field_of) {
  const TriangleRule& rule = pick_rule(opts);
  const std::size_t nt = mesh.num_triangles();
  std::vector<double> plain(nt), energy(nt);
  parallel_for(nt, [&](std::size_t b, std::size_t e) {
    for (std::size_t t = b; t < e; ++t) {
      const int ti = static_cast<int>(t);
      const auto c = mesh.corners(ti);
      const std::vector<Point2>& field = field_of(mesh.triangle_region[t]);
      double s = 0.0;
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const Point2 x = map_bary(c, rule.bary[q]);
        const Point2 d = problem.grad_u(x, exact_side(mesh, problem, ti, x, opts)) -
                         interpolate(mesh, field, ti, rule.bary[q]);
        s += rule.weights[q] * dot(d, d);
      }
      plain[t] = s * mesh.signed_area(ti);
      energy[t] = problem.beta(mesh.triangle_region[t]) * plain[t];
    }
  });
  double sp = 0.0, se = 0.0;
  for (std::size_t t = 0; t < nt; ++t) {
    sp += plain[t];
    se += energy[t];
  }
  return {std::sqrt(sp), std::sqrt(se)};
}

}  // namespace

RecoveredError recovered_error(const Mesh& mesh, const TwoValuedGradientField& g, const LevelSetProblem& problem,
                               const ErrorOptions& opts) {
  return recovered_impl(mesh, problem, opts, [&](RegionTag r) -> const std::vector<Point2>& { return g.side(r); });
}

RecoveredError ppr_error(const Mesh& mesh, const GradientField& g, const LevelSetProblem& problem,
                         const ErrorOptions& opts) {
  return recovered_impl(mesh, problem, opts, [&](RegionTag) -> const std::vector<Point2>& { return g.values; });
}

std::vector<double> convergence_order(std::span<const double> errors, std::span<const double> dof) {
  if (errors.size() != dof.size()) throw InvalidArgument("errors and dof differ in length");
  std::vector<double> out;
  for (std::size_t k = 1; k < errors.size(); ++k) {
    if (!(dof[k] > dof[k - 1])) throw InvalidArgument("dof must increase strictly");
    out.push_back(std::log(errors[k - 1] / errors[k]) / std::log(dof[k] / dof[k - 1]));
  }
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope needs two or more matching points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw DivisionByZero("slope of points with identical abscissae");
  return (n * sxy - sx * sy) / den;
}

}  // namespace ifem
