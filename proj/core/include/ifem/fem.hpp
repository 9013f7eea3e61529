#pragma once

#include <array>
#include <span>
#include <vector>

#include "ifem/mesh.hpp"
#include "ifem/problems.hpp"

namespace ifem {

using NodalField = std::vector<double>;
using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Gradients of the three barycentric functions (constant on the triangle).
std::array<Point2, 3> barycentric_gradients(const std::array<Point2, 3>& tri);

/// beta * grad(lambda_i) . grad(lambda_j) * |T|. Throws DegenerateTriangle
/// when the area is at most 1e-14 h_T^2.
Matrix3 local_stiffness(const std::array<Point2, 3>& tri, double beta);

/// Square matrix in compressed row storage, columns sorted within each row.
struct CsrMatrix {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;
  /// Optional row sums. When present, multiply() works on differences
  /// x_j - x_i, which keeps residuals of near-constant fields accurate
  /// under large coefficients.
  std::vector<double> row_sum;

  void compute_row_sums();
  void multiply(std::span<const double> x, std::span<double> y) const;
  double at(int i, int j) const;
  /// A_ij == A_ji bitwise for every stored entry.
  bool is_symmetric() const;
};

struct SparseSystem {
  CsrMatrix matrix;
  NodalField rhs;
  std::vector<char> dirichlet_mask;
  NodalField dirichlet_values;
};

struct AssemblyOptions {
  int line_points = 2;  // Gauss points per interface edge
};

/// Stiffness with beta_h per triangle tag, volume load by the degree-4 rule,
/// minus the interface flux term on Gamma_h (g evaluated at projected
/// points). When the problem carries a value jump, the unknown is the
/// continuous part w of u_h = w + I_h(lift) on plus triangles. Dirichlet
/// data are imposed by symmetric elimination with identity rows.
SparseSystem assemble(const Mesh& mesh, const LevelSetProblem& problem, const AssemblyOptions& opts = {});

/// Interpolant of the lift on plus-side vertices (zero elsewhere and when
/// the problem has no value jump).
NodalField plus_lift(const Mesh& mesh, const LevelSetProblem& problem);

struct SolveOptions {
  double tol = 1e-10;          // relative residual
  int max_iter_per_unknown = 20;
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients. Throws MaxIterations.
NodalField solve(const SparseSystem& sys, const SolveOptions& opts = {},
                 const NodalField* initial_guess = nullptr, SolveStats* stats = nullptr);

/// ||A x - b|| / ||b|| (0 when b = 0).
double relative_residual(const SparseSystem& sys, std::span<const double> x);

/// Discrete solution with its two nodal traces. On minus triangles u_h uses
/// `minus`, on plus triangles `plus`; the two differ only by the lift.
struct FeSolution {
  NodalField w;
  NodalField minus;
  NodalField plus;
  SolveStats stats;

  const NodalField& side(RegionTag r) const { return r == RegionTag::Minus ? minus : plus; }
  Point2 element_gradient(const Mesh& mesh, int t) const;
};

FeSolution make_solution(const Mesh& mesh, const LevelSetProblem& problem, NodalField w);

/// Assemble and solve. warm_start (length = vertex count) seeds CG.
FeSolution solve_problem(const Mesh& mesh, const LevelSetProblem& problem,
                         const SolveOptions& opts = {}, const NodalField* warm_start = nullptr,
                         const AssemblyOptions& assembly = {});

/// Extend a nodal field to a refined mesh: old vertices keep their value,
/// each new vertex takes the mean of its parent edge.
NodalField prolongate(const NodalField& coarse, std::span<const std::array<int, 2>> parents);

}  // namespace ifem
