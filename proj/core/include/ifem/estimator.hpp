#pragma once

#include <vector>

#include "ifem/fem.hpp"
#include "ifem/recovery.hpp"

namespace ifem {

struct IndicatorField {
  std::vector<double> eta;  // one per triangle
  double eta_global = 0.0;
};

/// eta_T = ||beta^{1/2}(G^I u_h - grad u_h)||_{0,T}, using the field of the
/// triangle's own side.
IndicatorField indicators(const Mesh& mesh, const FeSolution& uh, const TwoValuedGradientField& g,
                          const LevelSetProblem& problem);

/// eta / energy error. Throws DivisionByZero for a nonpositive error.
double effective_index(double eta_global, double true_energy_error);

}  // namespace ifem
