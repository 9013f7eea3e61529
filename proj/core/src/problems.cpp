#include "ifem/problems.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <numbers>

#include "ifem/exceptions.hpp"

namespace ifem {

namespace {

constexpr double kPi = std::numbers::pi;

// c r^mu cos(mu (theta - theta0)) restricted to an angular sector.
struct PolarBranch {
  double lo, hi;  // sector [lo, hi] in radians
  double c, mu, theta0;
};

// Pick the sector of `branches` nearest to the angle of z and return the
// angle shifted by a multiple of 2 pi into that sector's frame.
std::pair<const PolarBranch*, double> select_branch(const std::vector<PolarBranch>& branches,
                                                    Point2 z) {
  double theta = std::atan2(z.y, z.x);
  if (theta < 0.0) theta += 2.0 * kPi;
  const PolarBranch* best = nullptr;
  double best_dist = 1e300, best_theta = theta;
  for (const PolarBranch& b : branches) {
    const double mid = 0.5 * (b.lo + b.hi);
    const double t = theta + 2.0 * kPi * std::round((mid - theta) / (2.0 * kPi));
    const double dist = t < b.lo ? b.lo - t : (t > b.hi ? t - b.hi : 0.0);
    if (dist < best_dist) {
      best = &b;
      best_dist = dist;
      best_theta = t;
    }
  }
  return {best, best_theta};
}

double polar_value(const PolarBranch& b, Point2 z, double theta) {
  const double r = std::hypot(z.x, z.y);
  return b.c * std::pow(r, b.mu) * std::cos(b.mu * (theta - b.theta0));
}

Point2 polar_gradient(const PolarBranch& b, Point2 z, double theta) {
  const double r = std::hypot(z.x, z.y);
  if (r == 0.0) return {0.0, 0.0};
  const double a = b.mu * (theta - b.theta0);
  const double s = b.c * b.mu * std::pow(r, b.mu - 1.0);
  const double ur = s * std::cos(a), ut = -s * std::sin(a);
  const double ct = std::cos(theta), st = std::sin(theta);
  return {ur * ct - ut * st, ur * st + ut * ct};
}

// Wire u, grad_u from per-side sector tables.
void attach_polar(LevelSetProblem& p, std::vector<PolarBranch> minus, std::vector<PolarBranch> plus) {
  auto tables = std::make_shared<std::array<std::vector<PolarBranch>, 2>>(
      std::array<std::vector<PolarBranch>, 2>{std::move(minus), std::move(plus)});
  p.u = [tables](Point2 z, RegionTag r) {
    const auto [b, theta] = select_branch((*tables)[static_cast<int>(r)], z);
    return polar_value(*b, z, theta);
  };
  p.grad_u = [tables](Point2 z, RegionTag r) {
    const auto [b, theta] = select_branch((*tables)[static_cast<int>(r)], z);
    return polar_gradient(*b, z, theta);
  };
  p.f = [](Point2, RegionTag) { return 0.0; };
}

}  // namespace

Point2 interface_normal(const LevelSet& ls, Point2 p) {
  const Point2 g = ls.gradient(p);
  return (1.0 / norm(g)) * g;
}

double exact_flux_jump(const LevelSetProblem& p, Point2 z) {
  const Point2 n = interface_normal(p.ls, z);
  return p.beta_plus * dot(p.grad_u(z, RegionTag::Plus), n) -
         p.beta_minus * dot(p.grad_u(z, RegionTag::Minus), n);
}

LevelSetProblem example_51(double beta_minus, double beta_plus) {
  if (!(beta_minus > 0.0) || !(beta_plus > 0.0)) throw InvalidArgument("beta must be positive");
  constexpr double r0 = 0.5;
  LevelSetProblem p;
  p.name = "ex51";
  p.domain = {-1.0, -1.0, 1.0, 1.0};
  p.ls = circle_level_set({0.0, 0.0}, r0);
  p.beta_minus = beta_minus;
  p.beta_plus = beta_plus;
  const double shift = (1.0 / beta_minus - 1.0 / beta_plus) * r0 * r0 * r0;
  p.u = [=](Point2 z, RegionTag r) {
    const double r3 = std::pow(std::hypot(z.x, z.y), 3);
    return r == RegionTag::Minus ? r3 / beta_minus : r3 / beta_plus + shift;
  };
  p.grad_u = [=](Point2 z, RegionTag r) {
    const double s = 3.0 * std::hypot(z.x, z.y) / (r == RegionTag::Minus ? beta_minus : beta_plus);
    return s * z;
  };
  p.f = [](Point2 z, RegionTag) { return -9.0 * std::hypot(z.x, z.y); };
  p.minus_witness = {0.0, 0.0};
  p.plus_witness = {0.9, 0.9};
  return p;
}

LevelSetProblem example_52(bool swap_branches) {
  LevelSetProblem p;
  p.name = "ex52";
  p.domain = {-1.0, -1.0, 1.0, 1.0};
  p.ls = flower_level_set();
  p.beta_minus = 1.0;
  p.beta_plus = 10.0;

  auto u_exp = [](Point2 z) { return std::exp(z.x * z.x + z.y * z.y); };
  auto g_exp = [](Point2 z) { return (2.0 * std::exp(z.x * z.x + z.y * z.y)) * z; };
  auto lap_exp = [](Point2 z) {
    const double r2 = z.x * z.x + z.y * z.y;
    return (4.0 * r2 + 4.0) * std::exp(r2);
  };
  auto u_log = [](Point2 z) {
    const double r2 = z.x * z.x + z.y * z.y;
    return 0.1 * r2 * r2 - 0.01 * std::log(2.0 * std::sqrt(r2));
  };
  auto g_log = [](Point2 z) {
    const double r2 = z.x * z.x + z.y * z.y;
    return (0.4 * r2 - 0.01 / r2) * z;
  };
  auto lap_log = [](Point2 z) { return 1.6 * (z.x * z.x + z.y * z.y); };

  const bool exp_inside = !swap_branches;
  const double bm = p.beta_minus, bp = p.beta_plus;
  p.u = [=](Point2 z, RegionTag r) {
    return (r == RegionTag::Minus) == exp_inside ? u_exp(z) : u_log(z);
  };
  p.grad_u = [=](Point2 z, RegionTag r) {
    return (r == RegionTag::Minus) == exp_inside ? g_exp(z) : g_log(z);
  };
  p.f = [=](Point2 z, RegionTag r) {
    const double beta = r == RegionTag::Minus ? bm : bp;
    return -beta * ((r == RegionTag::Minus) == exp_inside ? lap_exp(z) : lap_log(z));
  };
  p.lift = [=](Point2 z) {
    return exp_inside ? u_log(z) - u_exp(z) : u_exp(z) - u_log(z);
  };
  const LevelSet ls = p.ls;
  p.g = [=](Point2 z) {
    const Point2 n = interface_normal(ls, z);
    const Point2 gp = exp_inside ? g_log(z) : g_exp(z);
    const Point2 gm = exp_inside ? g_exp(z) : g_log(z);
    return bp * dot(gp, n) - bm * dot(gm, n);
  };
  p.minus_witness = {0.1, 0.0};
  p.plus_witness = {0.9, 0.9};
  return p;
}

Example53Exponent example53_exponent(double beta_minus) {
  const double mu = 4.0 / kPi * std::atan(std::sqrt((3.0 + beta_minus) / (1.0 + 3.0 * beta_minus)));
  return {mu, -beta_minus * std::sin(mu * kPi / 4.0) / std::sin(3.0 * mu * kPi / 4.0)};
}

Example53Exponent example53_exponent_no_atan(double beta_minus) {
  const double mu = 4.0 / kPi * std::sqrt((3.0 + beta_minus) / (1.0 + 3.0 * beta_minus));
  return {mu, -beta_minus * std::sin(mu * kPi / 4.0) / std::sin(3.0 * mu * kPi / 4.0)};
}

LevelSetProblem example_53(double beta_minus) {
  if (!(beta_minus > 0.0)) throw InvalidArgument("beta_minus must be positive");
  LevelSetProblem p;
  p.name = "ex53";
  p.domain = {-0.5, -0.5, 0.5, 0.5};
  p.ls = quadrant_level_set({0.0, 0.0});
  p.beta_minus = beta_minus;
  p.beta_plus = 1.0;
  const auto [mu, nu] = example53_exponent(beta_minus);
  attach_polar(p, {{0.0, kPi / 2, 1.0, mu, kPi / 4}}, {{kPi / 2, 2 * kPi, nu, mu, 5 * kPi / 4}});
  p.singular_points = {{0.0, 0.0}};
  p.minus_witness = {0.25, 0.25};
  p.plus_witness = {-0.25, -0.25};
  return p;
}

LevelSetProblem example_54() {
  using K = KelloggConstants;
  LevelSetProblem p;
  p.name = "ex54";
  p.domain = {-0.5, -0.5, 0.5, 0.5};
  p.ls = cross_level_set({0.0, 0.0});
  p.beta_minus = 1.0;
  p.beta_plus = K::R;
  const double e = K::epsilon;
  const PolarBranch q1{0.0, kPi / 2, std::cos((kPi / 2 - K::xi) * e), e, kPi / 2 - K::nu};
  const PolarBranch q2{kPi / 2, kPi, std::cos(K::nu * e), e, kPi - K::xi};
  const PolarBranch q3{kPi, 3 * kPi / 2, std::cos(K::xi * e), e, kPi + K::nu};
  const PolarBranch q4{3 * kPi / 2, 2 * kPi, std::cos((kPi / 2 - K::nu) * e), e, 3 * kPi / 2 + K::xi};
  attach_polar(p, {q2, q4}, {q1, q3});
  p.singular_points = {{0.0, 0.0}};
  p.minus_witness = {-0.25, 0.25};
  p.plus_witness = {0.25, 0.25};
  return p;
}

LevelSetProblem smooth_problem(double beta) {
  LevelSetProblem p;
  p.name = "smoke";
  p.domain = {-1.0, -1.0, 1.0, 1.0};
  p.ls = circle_level_set({0.0, 0.0}, 0.5);
  p.beta_minus = p.beta_plus = beta;
  p.u = [](Point2 z, RegionTag) { return std::sin(kPi * z.x) * std::sin(kPi * z.y) + z.x; };
  p.grad_u = [](Point2 z, RegionTag) {
    return Point2{kPi * std::cos(kPi * z.x) * std::sin(kPi * z.y) + 1.0,
                  kPi * std::sin(kPi * z.x) * std::cos(kPi * z.y)};
  };
  p.f = [beta](Point2 z, RegionTag) {
    return beta * 2.0 * kPi * kPi * std::sin(kPi * z.x) * std::sin(kPi * z.y);
  };
  p.minus_witness = {0.0, 0.0};
  p.plus_witness = {0.9, 0.9};
  return p;
}

LevelSetProblem linear_problem(double a, double b, double c, double beta) {
  LevelSetProblem p;
  p.name = "linear";
  p.domain = {-1.0, -1.0, 1.0, 1.0};
  p.ls = circle_level_set({0.0, 0.0}, 0.5);
  p.beta_minus = p.beta_plus = beta;
  p.u = [=](Point2 z, RegionTag) { return a + b * z.x + c * z.y; };
  p.grad_u = [=](Point2, RegionTag) { return Point2{b, c}; };
  p.f = [](Point2, RegionTag) { return 0.0; };
  p.minus_witness = {0.0, 0.0};
  p.plus_witness = {0.9, 0.9};
  return p;
}

LevelSetProblem make_problem(const std::string& name, const ProblemParams& params) {
  if (name == "ex51") return example_51(params.beta_minus, params.beta_plus);
  if (name == "ex52") return example_52(params.swap_branches);
  if (name == "ex53") return example_53(params.beta_minus);
  if (name == "ex54") return example_54();
  if (name == "smoke") return smooth_problem();
  throw InvalidArgument("unknown problem '" + name + "' (expected ex51, ex52, ex53, ex54 or smoke)");
}

}  // namespace ifem
