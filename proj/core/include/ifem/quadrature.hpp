#pragma once

#include <array>
#include <vector>

#include "ifem/geometry.hpp"

namespace ifem {

/// Quadrature on the reference triangle (0,0),(1,0),(0,1) in barycentric
/// form; weights sum to 1 so that sum w_i f(x_i) * |T| integrates over T.
struct TriangleRule {
  std::vector<std::array<double, 3>> bary;
  std::vector<double> weights;
};

/// Six-point rule, exact for polynomials of degree 4.
const TriangleRule& triangle_rule_degree4();

/// Collapsed Gauss-Legendre product rule with m points per direction;
/// exact for degree 2m - 2. Used as a higher-order reference.
TriangleRule triangle_rule_collapsed(int m);

/// Gauss-Legendre nodes and weights on [0, 1].
struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
LineRule gauss_legendre(int n);

inline Point2 map_bary(const std::array<Point2, 3>& c, const std::array<double, 3>& b) {
  return {b[0] * c[0].x + b[1] * c[1].x + b[2] * c[2].x, b[0] * c[0].y + b[1] * c[1].y + b[2] * c[2].y};
}

}  // namespace ifem
