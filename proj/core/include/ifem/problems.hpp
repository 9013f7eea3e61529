#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ifem/geometry.hpp"

namespace ifem {

/// One benchmark: interface, piecewise data and the exact solution.
///
/// Scalar fields take the side explicitly, so the same point can be read
/// through either branch. The value jump u+ - u- (when nonzero) is carried by
/// `lift`, a smooth extension defined near the interface and used only on
/// the plus side.
struct LevelSetProblem {
  std::string name;
  Rect domain;
  LevelSet ls;
  double beta_minus = 1.0;
  double beta_plus = 1.0;
  std::function<double(Point2, RegionTag)> f;
  std::function<double(Point2)> g;  // flux jump beta+ du+/dn - beta- du-/dn; empty means zero
  std::function<double(Point2, RegionTag)> u;
  std::function<Point2(Point2, RegionTag)> grad_u;
  std::function<double(Point2)> lift;  // u+ - u- extended off the interface; empty means zero
  std::vector<Point2> singular_points;
  Point2 minus_witness;
  Point2 plus_witness;

  double beta(RegionTag r) const { return r == RegionTag::Minus ? beta_minus : beta_plus; }
  bool has_flux_jump() const { return static_cast<bool>(g); }
  bool has_value_jump() const { return static_cast<bool>(lift); }
};

/// Circle r0 = 1/2 on (-1,1)^2 with u = r^3/beta inside and a matching constant outside.
LevelSetProblem example_51(double beta_minus, double beta_plus);

/// Flower interface on (-1,1)^2 with beta- = 1, beta+ = 10. By default the
/// exponential branch e^{r^2} lives inside the flower and the logarithmic
/// branch 0.1 r^4 - 0.01 ln(2r) outside; swap_branches exchanges them.
LevelSetProblem example_52(bool swap_branches = false);

/// Quadrant interface on (-1/2,1/2)^2: minus side {x > 0, y > 0} with
/// coefficient beta_minus, plus side the other three quadrants with 1.
LevelSetProblem example_53(double beta_minus);

/// Kellogg checkerboard on (-1/2,1/2)^2: plus side (quadrants 1, 3) has
/// beta = R, minus side (quadrants 2, 4) has beta = 1.
LevelSetProblem example_54();

/// Smooth u = sin(pi x) sin(pi y) + x with constant beta across a circle.
LevelSetProblem smooth_problem(double beta = 1.0);

/// Globally linear u = a + b x + c y, constant beta, circle interface.
LevelSetProblem linear_problem(double a, double b, double c, double beta = 1.0);

struct Example53Exponent {
  double mu;
  double nu;
};
/// mu = (4/pi) atan(sqrt((3 + b)/(1 + 3b))), nu = -b sin(mu pi/4)/sin(3 mu pi/4).
Example53Exponent example53_exponent(double beta_minus);
/// The same without the arctangent: mu = (4/pi) sqrt((3 + b)/(1 + 3b)).
Example53Exponent example53_exponent_no_atan(double beta_minus);

/// Kellogg constants.
struct KelloggConstants {
  static constexpr double epsilon = 0.1;
  static constexpr double nu = 0.78539816339744830962;  // pi/4
  // Root of the Kellogg interface conditions for these epsilon, nu and R;
  // the often-quoted -14.9225565104455152 transposes two digits.
  static constexpr double xi = -14.92256510455152;
  static constexpr double R = 161.4476387975881;
};

/// Unit normal from minus to plus, grad(phi)/|grad(phi)|.
Point2 interface_normal(const LevelSet& ls, Point2 p);

/// beta+ du+/dn - beta- du-/dn from the exact solution at a point of the interface.
double exact_flux_jump(const LevelSetProblem& p, Point2 z);

/// Look up a problem by CLI name (ex51, ex52, ex53, ex54, smoke).
struct ProblemParams {
  double beta_minus = 1.0;
  double beta_plus = 10.0;
  bool swap_branches = false;
};
LevelSetProblem make_problem(const std::string& name, const ProblemParams& params);

}  // namespace ifem
