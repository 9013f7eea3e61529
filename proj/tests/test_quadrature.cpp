#include <gtest/gtest.h>

#include <cmath>

#include "ifem/quadrature.hpp"

using namespace ifem;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Integral of x^a y^b over the reference triangle, divided by its area 1/2.
double monomial_mean(int a, int b) { return 2.0 * factorial(a) * factorial(b) / factorial(a + b + 2); }

double apply(const TriangleRule& r, int a, int b) {
  double s = 0.0;
  for (std::size_t q = 0; q < r.weights.size(); ++q) {
    const double x = r.bary[q][1], y = r.bary[q][2];
    s += r.weights[q] * std::pow(x, a) * std::pow(y, b);
  }
  return s;
}

}  // namespace

TEST(TriangleRule, DegreeFourIsExact) {
  const TriangleRule& r = triangle_rule_degree4();
  ASSERT_EQ(r.weights.size(), 6u);
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; a + b <= 4; ++b) EXPECT_NEAR(apply(r, a, b), monomial_mean(a, b), 1e-15) << a << "," << b;
  }
}

TEST(TriangleRule, CollapsedRuleExactness) {
  for (int m : {2, 4, 6}) {
    const TriangleRule r = triangle_rule_collapsed(m);
    double w = 0.0;
    for (double x : r.weights) w += x;
    EXPECT_NEAR(w, 1.0, 1e-14);
    for (int a = 0; a <= 2 * m - 2; ++a) {
      for (int b = 0; a + b <= 2 * m - 2; ++b) EXPECT_NEAR(apply(r, a, b), monomial_mean(a, b), 1e-14);
    }
  }
}

TEST(GaussLegendre, PolynomialExactness) {
  for (int n = 1; n <= 8; ++n) {
    const LineRule g = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
      EXPECT_NEAR(s, 1.0 / (k + 1), 1e-14) << "n=" << n << " k=" << k;
    }
  }
}
