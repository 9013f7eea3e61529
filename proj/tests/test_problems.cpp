#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ifem/exceptions.hpp"
#include "ifem/problems.hpp"

using namespace ifem;

namespace {

constexpr double kPi = std::numbers::pi;

RegionTag side_of(const LevelSetProblem& p, Point2 z) {
  return p.ls.value(z) < 0.0 ? RegionTag::Minus : RegionTag::Plus;
}

double near_singular(const LevelSetProblem& p, Point2 z) {
  double d = 1e300;
  for (Point2 s : p.singular_points) d = std::min(d, distance(s, z));
  return d;
}

Point2 random_point(const LevelSetProblem& p, std::mt19937& rng) {
  std::uniform_real_distribution<double> ux(p.domain.x0, p.domain.x1), uy(p.domain.y0, p.domain.y1);
  return {ux(rng), uy(rng)};
}

// One-sided fifth-order derivative of s -> u(z + s d) at s = 0.
double one_sided(const LevelSetProblem& p, Point2 z, Point2 d, RegionTag r, double h) {
  const double c[5] = {-25, 48, -36, 16, -3};
  double s = 0.0;
  for (int k = 0; k < 5; ++k) s += c[k] * p.u(z + (k * h) * d, r);
  return s / (12 * h);
}

// -beta (u_xx + u_yy) by fourth-order central differences, and the sum of
// |u_xx| + |u_yy| as a magnitude scale.
std::pair<double, double> fd_operator(const LevelSetProblem& p, Point2 z, RegionTag r, double h) {
  auto second = [&](Point2 d) {
    const double c[5] = {-1, 16, -30, 16, -1};
    double s = 0.0;
    for (int k = -2; k <= 2; ++k) s += c[k + 2] * p.u(z + (k * h) * d, r);
    return s / (12 * h * h);
  };
  const double uxx = second({1, 0}), uyy = second({0, 1});
  return {-p.beta(r) * (uxx + uyy), p.beta(r) * (std::abs(uxx) + std::abs(uyy))};
}

std::vector<LevelSetProblem> benchmarks() {
  return {example_51(1.0, 10.0), example_51(1e6, 1.0), example_52(), example_53(1000.0), example_53(10000.0),
          example_54()};
}

}  // namespace

TEST(Problems, WitnessSigns) {
  for (const auto& p : benchmarks()) {
    EXPECT_LT(p.ls.value(p.minus_witness), 0.0) << p.name;
    EXPECT_GT(p.ls.value(p.plus_witness), 0.0) << p.name;
  }
}

TEST(Problems, ValueJumpAtInterfacePoints) {
  std::mt19937 rng(3);
  for (const auto& p : benchmarks()) {
    int checked = 0;
    while (checked < 100) {
      const Point2 z = project_to_interface(p.ls, random_point(p, rng));
      if (near_singular(p, z) < 0.05 || z.x <= p.domain.x0 || z.x >= p.domain.x1 || z.y <= p.domain.y0 ||
          z.y >= p.domain.y1) {
        continue;
      }
      const double jump = p.u(z, RegionTag::Plus) - p.u(z, RegionTag::Minus);
      const double expected = p.has_value_jump() ? p.lift(z) : 0.0;
      EXPECT_NEAR(jump, expected, 1e-10 * (1 + std::abs(p.u(z, RegionTag::Minus)))) << p.name;
      ++checked;
    }
  }
}

TEST(Problems, FluxJumpAgainstFiniteDifferences) {
  std::mt19937 rng(5);
  for (const auto& p : benchmarks()) {
    int checked = 0;
    while (checked < 100) {
      const Point2 z = project_to_interface(p.ls, random_point(p, rng));
      if (near_singular(p, z) < 0.1 || z.x <= p.domain.x0 + 0.01 || z.x >= p.domain.x1 - 0.01 ||
          z.y <= p.domain.y0 + 0.01 || z.y >= p.domain.y1 - 0.01) {
        continue;
      }
      const Point2 n = interface_normal(p.ls, z);
      const double h = 1e-4;
      const double dplus = one_sided(p, z, n, RegionTag::Plus, h);
      const double dminus = -one_sided(p, z, -1.0 * n, RegionTag::Minus, h);
      const double fd = p.beta_plus * dplus - p.beta_minus * dminus;
      const double g = p.has_flux_jump() ? p.g(z) : 0.0;
      const double scale = 1 + p.beta_plus * std::abs(dplus) + p.beta_minus * std::abs(dminus);
      EXPECT_NEAR(fd, g, 1e-8 * scale) << p.name << " at (" << z.x << ", " << z.y << ")";
      EXPECT_NEAR(exact_flux_jump(p, z), g, 1e-9 * scale) << p.name;
      ++checked;
    }
  }
}

TEST(Problems, PdeResidualAgainstFiniteDifferences) {
  std::mt19937 rng(9);
  for (const auto& p : benchmarks()) {
    int checked = 0;
    while (checked < 100) {
      const Point2 z = random_point(p, rng);
      if (std::abs(p.ls.value(z)) < 0.02 || near_singular(p, z) < 0.05) continue;
      const RegionTag r = side_of(p, z);
      const auto [op, scale] = fd_operator(p, z, r, 1e-3);
      EXPECT_NEAR(op, p.f(z, r), 1e-6 * (scale + std::abs(p.f(z, r)) + 1e-3)) << p.name;
      ++checked;
    }
  }
}

TEST(Problems, GradientAgainstFiniteDifferences) {
  std::mt19937 rng(13);
  for (const auto& p : benchmarks()) {
    for (int k = 0; k < 100;) {
      const Point2 z = random_point(p, rng);
      if (std::abs(p.ls.value(z)) < 0.02 || near_singular(p, z) < 0.05) continue;
      const RegionTag r = side_of(p, z);
      const double h = 1e-6;
      const Point2 fd{(p.u({z.x + h, z.y}, r) - p.u({z.x - h, z.y}, r)) / (2 * h),
                      (p.u({z.x, z.y + h}, r) - p.u({z.x, z.y - h}, r)) / (2 * h)};
      const Point2 g = p.grad_u(z, r);
      EXPECT_NEAR(g.x, fd.x, 1e-6 * (1 + norm(g))) << p.name;
      EXPECT_NEAR(g.y, fd.y, 1e-6 * (1 + norm(g))) << p.name;
      ++k;
    }
  }
}

TEST(Example51, ContinuityAndRadialGradient) {
  const LevelSetProblem p = example_51(1.0, 10.0);
  for (double th = 0; th < 2 * kPi; th += 0.37) {
    const Point2 z{0.5 * std::cos(th), 0.5 * std::sin(th)};
    EXPECT_NEAR(p.u(z, RegionTag::Minus), p.u(z, RegionTag::Plus), 1e-15);
  }
  const Point2 g = p.grad_u({0.25, 0.0}, RegionTag::Minus);
  EXPECT_NEAR(g.x, 3 * 0.25 * 0.25, 1e-15);
  EXPECT_NEAR(g.y, 0.0, 1e-15);
  EXPECT_NEAR(p.f({0.25, 0.0}, RegionTag::Minus), -9 * 0.25, 1e-14);
  EXPECT_NEAR(p.f({0.8, 0.0}, RegionTag::Plus), -9 * 0.8, 1e-14);
  EXPECT_THROW(example_51(0.0, 1.0), InvalidArgument);
}

TEST(Example52, FluxJumpAtThetaZero) {
  const LevelSetProblem p = example_52();
  const Point2 z{0.5, 0.0};
  EXPECT_NEAR(p.ls.value(z), 0.0, 1e-15);
  const Point2 n = interface_normal(p.ls, z);
  const double h = 1e-4;
  const double fd = p.beta_plus * one_sided(p, z, n, RegionTag::Plus, h) -
                    p.beta_minus * -one_sided(p, z, -1.0 * n, RegionTag::Minus, h);
  EXPECT_NEAR(p.g(z), fd, 1e-8 * (1 + std::abs(fd)));
}

TEST(Example52, ExponentialBranchLoad) {
  const LevelSetProblem p = example_52();
  const Point2 z{0.1, 0.2};
  const double r2 = 0.05;
  EXPECT_NEAR(p.u(z, RegionTag::Minus), std::exp(r2), 1e-15);
  EXPECT_NEAR(p.f(z, RegionTag::Minus), -p.beta_minus * (4 * r2 + 4) * std::exp(r2), 1e-13);
  const Point2 w{0.7, 0.6};
  const double r = norm(w);
  EXPECT_NEAR(p.u(w, RegionTag::Plus), 0.1 * std::pow(r, 4) - 0.01 * std::log(2 * r), 1e-15);
}

TEST(Example53, ArctanExponentSatisfiesInterfaceConditions) {
  // Branch formulas in polar form, both exponent variants.
  auto residuals = [](double b, Example53Exponent e) {
    const double mu = e.mu, nu = e.nu;
    auto um = [&](double th) { return std::cos(mu * (th - kPi / 4)); };
    auto up = [&](double th) { return nu * std::cos(mu * (th - 5 * kPi / 4)); };
    auto dum = [&](double th) { return -mu * std::sin(mu * (th - kPi / 4)); };
    auto dup = [&](double th) { return -nu * mu * std::sin(mu * (th - 5 * kPi / 4)); };
    double worst = 0.0;
    // theta = pi/2 and theta = 0 (= 2 pi on the plus branch).
    worst = std::max(worst, std::abs(um(kPi / 2) - up(kPi / 2)));
    worst = std::max(worst, std::abs(um(0.0) - up(2 * kPi)));
    worst = std::max(worst, std::abs(b * dum(kPi / 2) - dup(kPi / 2)));
    worst = std::max(worst, std::abs(b * dum(0.0) - dup(2 * kPi)));
    return worst;
  };
  for (double b : {10.0, 1000.0, 10000.0}) {
    EXPECT_LT(residuals(b, example53_exponent(b)), 1e-10) << b;
    EXPECT_GT(residuals(b, example53_exponent_no_atan(b)), 1e-3) << b;
  }
}

TEST(Example53, ContinuityForLargeJump) {
  const LevelSetProblem p = example_53(10000.0);
  for (double r : {0.01, 0.1, 0.4}) {
    const Point2 z{0.0, r};
    EXPECT_NEAR(p.u(z, RegionTag::Minus), p.u(z, RegionTag::Plus), 1e-12);
    const Point2 w{r, 0.0};
    EXPECT_NEAR(p.u(w, RegionTag::Minus), p.u(w, RegionTag::Plus), 1e-12);
  }
}

TEST(Example53, UnitCoefficientIsLinear) {
  const auto e = example53_exponent(1.0);
  EXPECT_NEAR(e.mu, 1.0, 1e-15);
  EXPECT_NEAR(e.nu, -std::sin(kPi / 4) / std::sin(3 * kPi / 4), 1e-15);
  const LevelSetProblem p = example_53(1.0);
  for (Point2 z : {Point2{0.2, 0.3}, Point2{-0.2, 0.1}, Point2{-0.3, -0.4}, Point2{0.1, -0.2}}) {
    EXPECT_NEAR(p.u(z, side_of(p, z)), (z.x + z.y) / std::sqrt(2.0), 1e-14);
  }
}

TEST(Example53, GradientBlowsUpAtOrigin) {
  const LevelSetProblem p = example_53(1000.0);
  ASSERT_LT(example53_exponent(1000.0).mu, 1.0);
  double prev = 0.0;
  for (double r : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double g = norm(p.grad_u({r / 2, r / 3}, RegionTag::Minus));
    EXPECT_GT(g, prev);
    prev = g;
  }
}

TEST(Example54, Constants) {
  const LevelSetProblem p = example_54();
  EXPECT_EQ(KelloggConstants::epsilon, 0.1);
  // xi solves 1/R = -tan(nu eps) cot(xi eps) on the principal branch, and the
  // other two Kellogg conditions then hold.
  const double e = KelloggConstants::epsilon, nu = KelloggConstants::nu, R = KelloggConstants::R;
  const double xi = std::atan(-R * std::tan(nu * e)) / e;
  EXPECT_NEAR(KelloggConstants::xi, xi, 1e-13);
  EXPECT_NEAR(-std::tan((kPi / 2 - xi) * e) / std::tan(nu * e), R, 1e-9 * R);
  EXPECT_NEAR(-std::tan(xi * e) / std::tan((kPi / 2 - nu) * e), R, 1e-9 * R);
  EXPECT_EQ(KelloggConstants::R, 161.4476387975881);
  EXPECT_NEAR(KelloggConstants::nu, kPi / 4, 1e-16);
  EXPECT_EQ(p.beta_plus, KelloggConstants::R);
  EXPECT_EQ(p.beta_minus, 1.0);
  EXPECT_EQ(p.beta(side_of(p, {0.2, 0.2})), KelloggConstants::R);
  EXPECT_EQ(p.beta(side_of(p, {-0.2, -0.2})), KelloggConstants::R);
  EXPECT_EQ(p.beta(side_of(p, {-0.2, 0.2})), 1.0);
}

TEST(Example54, BranchContinuity) {
  const LevelSetProblem p = example_54();
  for (double th : {kPi / 2, kPi, 3 * kPi / 2, 0.0}) {
    const double r = 0.3;
    const Point2 a{r * std::cos(th - 1e-9), r * std::sin(th - 1e-9)};
    const Point2 b{r * std::cos(th + 1e-9), r * std::sin(th + 1e-9)};
    EXPECT_NEAR(p.u(a, side_of(p, a)), p.u(b, side_of(p, b)), 1e-8) << th;
  }
}

TEST(Example54, AnnulusEnergyDecay) {
  // Energy of u on annuli r in [2^{-k-1}, 2^{-k}] decays like 2^{-2 eps k}.
  const LevelSetProblem p = example_54();
  auto energy = [&](double r0, double r1) {
    const int nr = 64, nt = 512;
    double s = 0.0;
    for (int i = 0; i < nr; ++i) {
      const double r = r0 + (r1 - r0) * (i + 0.5) / nr;
      for (int j = 0; j < nt; ++j) {
        const double th = 2 * kPi * (j + 0.5) / nt;
        const Point2 z{r * std::cos(th), r * std::sin(th)};
        const Point2 g = p.grad_u(z, side_of(p, z));
        s += dot(g, g) * r;
      }
    }
    return s * (r1 - r0) / nr * 2 * kPi / nt;
  };
  const double expected = std::pow(2.0, -2 * KelloggConstants::epsilon);
  for (int k = 2; k < 10; k += 3) {
    const double ek = energy(std::ldexp(1.0, -k - 1), std::ldexp(1.0, -k));
    const double ek1 = energy(std::ldexp(1.0, -k - 2), std::ldexp(1.0, -k - 1));
    EXPECT_NEAR(ek1 / ek, expected, 1e-3);
  }
}

TEST(Problems, MakeProblemByName) {
  ProblemParams params;
  for (std::string name : {"ex51", "ex52", "ex53", "ex54", "smoke"}) EXPECT_EQ(make_problem(name, params).name, name);
  EXPECT_THROW(make_problem("ex99", params), InvalidArgument);
}
