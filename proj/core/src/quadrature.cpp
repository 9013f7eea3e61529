#include "ifem/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "ifem/exceptions.hpp"

namespace ifem {

const TriangleRule& triangle_rule_degree4() {
  static const TriangleRule rule = [] {
    constexpr double a = 0.445948490915965, wa = 0.223381589678011;
    constexpr double b = 0.091576213509771, wb = 0.109951743655322;
    TriangleRule r;
    r.bary = {{a, a, 1 - 2 * a}, {a, 1 - 2 * a, a}, {1 - 2 * a, a, a},
              {b, b, 1 - 2 * b}, {b, 1 - 2 * b, b}, {1 - 2 * b, b, b}};
    r.weights = {wa, wa, wa, wb, wb, wb};
    return r;
  }();
  return rule;
}

LineRule gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre rule needs at least one point");
  LineRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = 0.5 * (1.0 - x);
    r.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

TriangleRule triangle_rule_collapsed(int m) {
  const LineRule g = gauss_legendre(m);
  TriangleRule r;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      // (u, v) in the unit square -> (s, t) = (u, v(1 - u)), Jacobian (1 - u).
      const double u = g.nodes[i], v = g.nodes[j];
      const double s = u, t = v * (1.0 - u);
      r.bary.push_back({1.0 - s - t, s, t});
      r.weights.push_back(2.0 * g.weights[i] * g.weights[j] * (1.0 - u));
    }
  }
  return r;
}

}  // namespace ifem
