#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ifem/fem.hpp"
#include "ifem/quadrature.hpp"
#include "ifem/recovery.hpp"

namespace ifem {

struct ErrorOptions {
  /// Read the exact solution by the sign of phi at each quadrature point
  /// instead of by the triangle's tag.
  bool region_by_phi = false;
  /// Triangle rule; null selects the six-point degree-4 rule.
  const TriangleRule* rule = nullptr;
};

struct H1Error {
  double l2 = 0.0;      // ||u - u_h||_0
  double semi = 0.0;    // ||grad(u - u_h)||_0
  double energy = 0.0;  // ||beta^{1/2} grad(u - u_h)||_0
  double full() const;  // ||u - u_h||_1
};

H1Error h1_error(const Mesh& mesh, const FeSolution& uh, const LevelSetProblem& problem,
                 const ErrorOptions& opts = {});

/// ||grad u_I - grad u_h||_0, exact for piecewise constants.
double supercloseness_error(const Mesh& mesh, const FeSolution& uh, const LevelSetProblem& problem);

struct RecoveredError {
  double plain = 0.0;   // ||grad u - G u_h||_0
  double energy = 0.0;  // ||beta^{1/2}(grad u - G u_h)||_0
};

RecoveredError recovered_error(const Mesh& mesh, const TwoValuedGradientField& g, const LevelSetProblem& problem,
                               const ErrorOptions& opts = {});
RecoveredError ppr_error(const Mesh& mesh, const GradientField& g, const LevelSetProblem& problem,
                         const ErrorOptions& opts = {});

/// order_k = log(e_{k-1}/e_k) / log(dof_k/dof_{k-1}); result has one entry
/// fewer than the input.
std::vector<double> convergence_order(std::span<const double> errors, std::span<const double> dof);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

struct ErrorRecord {
  std::size_t dof = 0;
  double De = 0.0;
  double De_l2 = 0.0;
  double De_semi = 0.0;
  double Die = 0.0;
  double Dre = 0.0;
  double Dpe = 0.0;
  double energy_error = 0.0;
  double recovered_energy_error = 0.0;
  double eta = 0.0;
  double kappa = 0.0;
  int cg_iterations = 0;
  double cg_residual = 0.0;
};

}  // namespace ifem
