#include "ifem/experiments.hpp"

#include <algorithm>

#include "ifem/exceptions.hpp"

namespace ifem {

UniformOptions default_uniform_options(const std::string& problem_name) {
  UniformOptions o;
  if (problem_name == "ex52") {
    o.family = MeshFamily::Resnapped;
    o.coarse_n = 32;
    o.levels = 5;
  } else if (problem_name == "smoke") {
    o.coarse_n = 8;
    o.levels = 3;
  }
  return o;
}

int default_adaptive_n(const std::string& problem_name) { return problem_name == "ex53" ? 4 : 8; }

Mesh adaptive_initial_mesh(const LevelSetProblem& problem, int n_per_side) {
  return build_fitted_mesh(problem.ls, problem.domain, n_per_side);
}

UniformResult run_uniform(const LevelSetProblem& problem, const UniformOptions& opts,
                          const std::function<void(const LevelState&)>& observer) {
  if (opts.levels < 1) throw InvalidArgument("levels must be positive");
  UniformResult result;
  Mesh mesh = build_fitted_mesh(problem.ls, problem.domain, opts.coarse_n);
  NodalField warm;
  for (int level = 0; level < opts.levels; ++level) {
    if (level > 0) {
      if (opts.family == MeshFamily::Refined) {
        std::vector<std::array<int, 2>> parents;
        mesh = refine_uniform(mesh, problem.ls, &parents);
        warm = prolongate(warm, parents);
      } else {
        mesh = build_fitted_mesh(problem.ls, problem.domain, opts.coarse_n << level);
        warm.clear();
      }
    }
    result.min_angles.push_back(min_angle_degrees(mesh));
    result.invariants_ok.push_back(check_invariants(mesh, problem.ls).ok());
    const FeSolution uh = solve_problem(mesh, problem, opts.solve, warm.empty() ? nullptr : &warm);
    const Evaluation ev = evaluate(mesh, problem, uh, opts.recovery);
    result.records.push_back(ev.record);
    if (observer) observer(LevelState{level, mesh, uh, ev});
    warm = uh.w;
  }
  return result;
}

double fraction_near(const Mesh& mesh, const std::vector<Point2>& points, double radius) {
  if (mesh.num_triangles() == 0) return 0.0;
  std::size_t near = 0;
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const Point2 c = mesh.centroid(t);
    for (const Point2& p : points) {
      if (distance(c, p) < radius) {
        ++near;
        break;
      }
    }
  }
  return static_cast<double>(near) / static_cast<double>(mesh.num_triangles());
}

AdaptiveSummary summarize_adaptive(const AdaptiveResult& result, const LevelSetProblem& problem,
                                   double near_radius) {
  AdaptiveSummary s;
  const auto& recs = result.records;
  s.iterations = static_cast<int>(recs.size());
  if (recs.empty()) return s;
  std::vector<double> dof, energy, recovered, plain, eta;
  for (std::size_t k = recs.size() / 2; k < recs.size(); ++k) {
    dof.push_back(static_cast<double>(recs[k].dof));
    energy.push_back(recs[k].energy_error);
    recovered.push_back(recs[k].recovered_energy_error);
    plain.push_back(recs[k].Dre);
    eta.push_back(recs[k].eta);
  }
  if (dof.size() >= 2) {
    s.energy_slope = loglog_slope(dof, energy);
    s.recovered_slope = loglog_slope(dof, recovered);
    s.recovered_plain_slope = loglog_slope(dof, plain);
    s.eta_slope = loglog_slope(dof, eta);
  }
  s.final_kappa = recs.back().kappa;
  s.min_kappa = s.max_kappa = recs.front().kappa;
  for (const auto& r : recs) {
    s.min_kappa = std::min(s.min_kappa, r.kappa);
    s.max_kappa = std::max(s.max_kappa, r.kappa);
  }
  s.near_fraction = fraction_near(result.final_mesh, problem.singular_points, near_radius);
  s.h_min = min_diameter(result.final_mesh);
  s.h_max = max_diameter(result.final_mesh);
  return s;
}

}  // namespace ifem
