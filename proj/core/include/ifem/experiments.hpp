#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ifem/adapt.hpp"
#include "ifem/problems.hpp"

namespace ifem {

/// How the uniform sequence of meshes is produced.
enum class MeshFamily {
  Refined,    // one snapped coarse mesh, red-refined per level
  Resnapped,  // a fresh snapped mesh per level with n doubled
};

struct UniformOptions {
  int levels = 5;
  int coarse_n = 10;
  MeshFamily family = MeshFamily::Refined;
  SolveOptions solve;
  RecoveryOptions recovery;
};

/// Defaults matching each benchmark's mesh sequence.
UniformOptions default_uniform_options(const std::string& problem_name);

/// The fitted starting mesh of an adaptive run: a uniform grid of
/// n x n squares (4 for ex53, 8 for ex54) snapped to the interface.
Mesh adaptive_initial_mesh(const LevelSetProblem& problem, int n_per_side);
int default_adaptive_n(const std::string& problem_name);

struct LevelState {
  int level = 0;
  const Mesh& mesh;
  const FeSolution& solution;
  const Evaluation& evaluation;
};

struct UniformResult {
  std::vector<ErrorRecord> records;
  std::vector<double> min_angles;
  std::vector<bool> invariants_ok;
};

UniformResult run_uniform(const LevelSetProblem& problem, const UniformOptions& opts,
                          const std::function<void(const LevelState&)>& observer = {});

struct AdaptiveSummary {
  int iterations = 0;
  double energy_slope = 0.0;     // log energy error vs log dof, final half of the run
  double recovered_slope = 0.0;  // same for the beta-weighted recovered error
  double recovered_plain_slope = 0.0;
  double eta_slope = 0.0;
  double final_kappa = 0.0;
  double min_kappa = 0.0;
  double max_kappa = 0.0;
  double near_fraction = 0.0;  // final triangles with centroid within near_radius of a singular point
  double h_min = 0.0;
  double h_max = 0.0;
};

AdaptiveSummary summarize_adaptive(const AdaptiveResult& result, const LevelSetProblem& problem,
                                   double near_radius = 0.05);

/// Fraction of triangles whose centroid lies within `radius` of any point.
double fraction_near(const Mesh& mesh, const std::vector<Point2>& points, double radius);

}  // namespace ifem
