#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ifem/errors.hpp"
#include "ifem/estimator.hpp"
#include "ifem/fem.hpp"
#include "ifem/recovery.hpp"

namespace ifem {

/// Smallest prefix of triangles ordered by descending eta (ties by index)
/// whose bulk reaches theta times the total. With bulk_on_squares the bulk
/// is the sum of eta^2, otherwise the sum of eta.
std::vector<int> dorfler_mark(std::span<const double> eta, double theta, bool bulk_on_squares = true);

struct AdaptiveOptions {
  double theta = 0.2;
  bool bulk_on_squares = true;
  std::size_t max_dof = 50000;
  int max_iterations = 500;
  SolveOptions solve;
  RecoveryOptions recovery;
};

/// Everything known about one pass of the loop. References are valid only
/// during the observer call.
struct IterationState {
  int iteration = 0;
  const Mesh& mesh;
  const FeSolution& solution;
  const TwoValuedGradientField& gradient;
  const IndicatorField& indicators;
  const ErrorRecord& record;
};

struct AdaptiveResult {
  std::vector<ErrorRecord> records;
  Mesh final_mesh;
  FeSolution final_solution;
  IndicatorField final_indicators;
};

/// solve, recover, estimate, record; stop once the vertex count exceeds
/// max_dof; otherwise mark and bisect. CG is warm-started from the
/// previous solution.
AdaptiveResult adaptive_loop(const LevelSetProblem& problem, Mesh initial, const AdaptiveOptions& opts,
                             const std::function<void(const IterationState&)>& observer = {});

/// All error measures and the estimator for one solved mesh.
struct Evaluation {
  ErrorRecord record;
  TwoValuedGradientField gradient;
  GradientField ppr_gradient;
  IndicatorField indicators;
};
Evaluation evaluate(const Mesh& mesh, const LevelSetProblem& problem, const FeSolution& uh,
                    const RecoveryOptions& recovery = {});

}  // namespace ifem
