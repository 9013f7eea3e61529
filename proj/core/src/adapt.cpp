#include "ifem/adapt.hpp"

#include <algorithm>
#include <numeric>

#include "ifem/exceptions.hpp"

namespace ifem {

std::vector<int> dorfler_mark(std::span<const double> eta, double theta, bool bulk_on_squares) {
  if (!(theta > 0.0) || !(theta <= 1.0)) throw InvalidArgument("theta must lie in (0, 1]");
  std::vector<int> order(eta.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return eta[a] > eta[b]; });
  auto weight = [&](int t) { return bulk_on_squares ? eta[t] * eta[t] : eta[t]; };
  double total = 0.0;
  for (int t : order) total += weight(t);
  std::vector<int> marked;
  if (!(total > 0.0)) return marked;
  const double target = theta * total;
  double bulk = 0.0;
  for (int t : order) {
    if (bulk >= target) break;
    marked.push_back(t);
    bulk += weight(t);
  }
  return marked;
}

Evaluation evaluate(const Mesh& mesh, const LevelSetProblem& problem, const FeSolution& uh,
                    const RecoveryOptions& recovery) {
  Evaluation ev;
  const RecoveryOperator op = build_recovery(mesh, recovery);
  ev.gradient = ippr_recover(op, uh.minus, uh.plus);
  ev.ppr_gradient = ppr_recover(op, uh.w);
  ev.indicators = indicators(mesh, uh, ev.gradient, problem);

  ErrorRecord& rec = ev.record;
  rec.dof = mesh.num_vertices();
  const H1Error h1 = h1_error(mesh, uh, problem);
  rec.De = h1.full();
  rec.De_l2 = h1.l2;
  rec.De_semi = h1.semi;
  rec.energy_error = h1.energy;
  rec.Die = supercloseness_error(mesh, uh, problem);
  const RecoveredError re = recovered_error(mesh, ev.gradient, problem);
  rec.Dre = re.plain;
  rec.recovered_energy_error = re.energy;
  rec.Dpe = ppr_error(mesh, ev.ppr_gradient, problem).plain;
  rec.eta = ev.indicators.eta_global;
  rec.kappa = rec.energy_error > 0.0 ? effective_index(rec.eta, rec.energy_error) : 0.0;
  rec.cg_iterations = uh.stats.iterations;
  rec.cg_residual = uh.stats.relative_residual;
  return ev;
}

AdaptiveResult adaptive_loop(const LevelSetProblem& problem, Mesh initial, const AdaptiveOptions& opts,
                             const std::function<void(const IterationState&)>& observer) {
  AdaptiveResult result;
  Mesh mesh = std::move(initial);
  NodalField warm;
  for (int it = 0; it < opts.max_iterations; ++it) {
    FeSolution uh = solve_problem(mesh, problem, opts.solve, warm.empty() ? nullptr : &warm);
    Evaluation ev = evaluate(mesh, problem, uh, opts.recovery);
    result.records.push_back(ev.record);
    if (observer) observer(IterationState{it, mesh, uh, ev.gradient, ev.indicators, ev.record});

    const bool done = mesh.num_vertices() > opts.max_dof || it + 1 == opts.max_iterations;
    if (done) {
      result.final_mesh = std::move(mesh);
      result.final_solution = std::move(uh);
      result.final_indicators = std::move(ev.indicators);
      break;
    }
    const std::vector<int> marked = dorfler_mark(ev.indicators.eta, opts.theta, opts.bulk_on_squares);
    std::vector<std::array<int, 2>> parents;
    mesh = bisect(mesh, marked, problem.ls, &parents);
    warm = prolongate(uh.w, parents);
  }
  return result;
}

}  // namespace ifem
