#include "ifem/estimator.hpp"

#include <cmath>

#include "ifem/exceptions.hpp"
#include "ifem/parallel.hpp"
#include "ifem/quadrature.hpp"

namespace ifem {

IndicatorField indicators(const Mesh& mesh, const FeSolution& uh, const TwoValuedGradientField& g,
                          const LevelSetProblem& problem) {
  const TriangleRule& rule = triangle_rule_degree4();
  IndicatorField out;
  out.eta.assign(mesh.num_triangles(), 0.0);
  parallel_for(mesh.num_triangles(), [&](std::size_t b, std::size_t e) {
    for (std::size_t t = b; t < e; ++t) {
      const int ti = static_cast<int>(t);
      const RegionTag r = mesh.triangle_region[t];
      const Point2 gh = uh.element_gradient(mesh, ti);
      double s = 0.0;
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const Point2 d = interpolate(mesh, g.side(r), ti, rule.bary[q]) - gh;
        s += rule.weights[q] * dot(d, d);
      }
      out.eta[t] = std::sqrt(problem.beta(r) * s * mesh.signed_area(ti));
    }
  });
  double sum = 0.0;
  for (double e : out.eta) sum += e * e;
  out.eta_global = std::sqrt(sum);
  return out;
}

double effective_index(double eta_global, double true_energy_error) {
  if (!(true_energy_error > 0.0)) throw DivisionByZero("effective index needs a positive energy error");
  return eta_global / true_energy_error;
}

}  // namespace ifem
