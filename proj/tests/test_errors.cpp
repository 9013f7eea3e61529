#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ifem/adapt.hpp"
#include "ifem/errors.hpp"
#include "ifem/exceptions.hpp"
#include "ifem/experiments.hpp"

using namespace ifem;

namespace {

FeSolution interpolant(const Mesh& m, const LevelSetProblem& p) {
  NodalField w(m.num_vertices());
  for (std::size_t v = 0; v < w.size(); ++v) w[v] = p.u(m.vertices[v], m.vertex_region(static_cast<int>(v)));
  return make_solution(m, p, w);
}

double last_order(const std::vector<double>& e, const std::vector<double>& dof) {
  return convergence_order(e, dof).back();
}

}  // namespace

TEST(ConvergenceOrder, Arithmetic) {
  const std::vector<double> e{1e-2, 2.5e-3}, d{100, 400};
  EXPECT_NEAR(convergence_order(e, d)[0], 1.0, 1e-15);
  const std::vector<double> same{3e-3, 3e-3};
  EXPECT_EQ(convergence_order(same, d)[0], 0.0);
  const std::vector<double> bad{400, 100};
  EXPECT_THROW(convergence_order(e, bad), InvalidArgument);
}

TEST(ConvergenceOrder, ReproducesReferenceTable) {
  // Reference run of ex51 with beta+ = 10: Dof, the four error columns and
  // their orders, all rounded as tabulated.
  const std::vector<double> dof{129, 481, 1857, 7297, 28929};
  const std::vector<std::vector<double>> err{{1.35e-01, 7.25e-02, 3.69e-02, 1.85e-02, 9.29e-03},
                                             {1.63e-02, 5.00e-03, 1.40e-03, 3.76e-04, 9.81e-05},
                                             {1.34e-01, 2.30e-02, 6.82e-03, 1.84e-03, 4.78e-04},
                                             {2.44e-01, 1.80e-01, 1.30e-01, 9.24e-02, 6.52e-02}};
  const std::vector<std::vector<double>> order{{0.48, 0.50, 0.50, 0.50},
                                               {0.90, 0.94, 0.96, 0.97},
                                               {1.34, 0.90, 0.96, 0.98},
                                               {0.23, 0.24, 0.25, 0.25}};
  for (std::size_t c = 0; c < err.size(); ++c) {
    const auto o = convergence_order(err[c], dof);
    for (std::size_t k = 0; k < o.size(); ++k) EXPECT_NEAR(o[k], order[c][k], 0.01) << "column " << c << " row " << k;
  }
}

TEST(LoglogSlope, PowerLaw) {
  const std::vector<double> x{10, 100, 1000, 10000};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 / std::sqrt(v));
  EXPECT_NEAR(loglog_slope(x, y), -0.5, 1e-12);
}

TEST(H1Error, LinearInterpolantIsExact) {
  const LevelSetProblem p = linear_problem(1, -2, 3);
  const Mesh m = build_fitted_mesh(p.ls, p.domain, 12);
  const FeSolution u = interpolant(m, p);
  EXPECT_LE(h1_error(m, u, p).full(), 1e-10);
  EXPECT_LE(supercloseness_error(m, u, p), 1e-12);
  const TwoValuedGradientField g = ippr_recover(m, u.minus, u.plus);
  EXPECT_LE(recovered_error(m, g, p).plain, 1e-10);
}

TEST(H1Error, PythagoreanSplit) {
  const LevelSetProblem p = example_51(1.0, 10.0);
  const Mesh m = build_fitted_mesh(p.ls, p.domain, 16);
  const H1Error e = h1_error(m, solve_problem(m, p), p);
  EXPECT_NEAR(e.full() * e.full(), e.l2 * e.l2 + e.semi * e.semi, 1e-12 * e.full() * e.full());
  EXPECT_GT(e.energy, e.semi);  // beta >= 1 everywhere
}

TEST(SuperclosenessError, ZeroForInterpolant) {
  const LevelSetProblem p = example_51(1.0, 10.0);
  const Mesh m = build_fitted_mesh(p.ls, p.domain, 16);
  EXPECT_LE(supercloseness_error(m, interpolant(m, p), p), 1e-13);
}

TEST(Errors, SmoothInterpolantAndPprRates) {
  const LevelSetProblem p = smooth_problem();
  Mesh m = build_fitted_mesh(p.ls, p.domain, 8);
  std::vector<double> dof, de, dpe;
  for (int level = 0; level < 4; ++level) {
    const FeSolution uh = solve_problem(m, p);
    dof.push_back(static_cast<double>(m.num_vertices()));
    de.push_back(h1_error(m, interpolant(m, p), p).full());
    dpe.push_back(ppr_error(m, ppr_recover(m, uh.w), p).plain);
    if (level < 3) m = refine_uniform(m, p.ls);
  }
  EXPECT_NEAR(last_order(de, dof), 0.5, 0.05);
  EXPECT_GT(last_order(dpe, dof), 0.85);
}

TEST(Errors, ImmersedRecoveryOfInterpolantIsSecondOrder) {
  const LevelSetProblem p = example_51(1.0, 10.0);
  Mesh m = build_fitted_mesh(p.ls, p.domain, 10);
  std::vector<double> dof, dre;
  for (int level = 0; level < 4; ++level) {
    const FeSolution ui = interpolant(m, p);
    dof.push_back(static_cast<double>(m.num_vertices()));
    dre.push_back(recovered_error(m, ippr_recover(m, ui.minus, ui.plus), p).plain);
    if (level < 3) m = refine_uniform(m, p.ls);
  }
  EXPECT_GT(last_order(dre, dof), 0.9);
}

TEST(Errors, QuadratureDoublingIsStable) {
  const TriangleRule fine = triangle_rule_collapsed(6);
  ErrorOptions hi;
  hi.rule = &fine;
  for (const char* name : {"ex51", "ex52"}) {
    const LevelSetProblem p = make_problem(name, {});
    const Mesh m = build_fitted_mesh(p.ls, p.domain, 32);
    const FeSolution uh = solve_problem(m, p);
    const TwoValuedGradientField g = ippr_recover(m, uh.minus, uh.plus);
    const GradientField s = ppr_recover(m, uh.w);
    auto rel = [](double a, double b) { return std::abs(a - b) / b; };
    EXPECT_LT(rel(h1_error(m, uh, p).full(), h1_error(m, uh, p, hi).full()), 1e-3) << name;
    EXPECT_LT(rel(recovered_error(m, g, p).plain, recovered_error(m, g, p, hi).plain), 1e-3) << name;
    EXPECT_LT(rel(ppr_error(m, s, p).plain, ppr_error(m, s, p, hi).plain), 1e-3) << name;
  }
}

TEST(Errors, RecordEntriesAreFinite) {
  const LevelSetProblem p = example_52();
  const Mesh m = build_fitted_mesh(p.ls, p.domain, 16);
  const Evaluation ev = evaluate(m, p, solve_problem(m, p));
  const ErrorRecord& r = ev.record;
  for (double x : {r.De, r.Die, r.Dre, r.Dpe, r.energy_error, r.eta}) {
    EXPECT_TRUE(std::isfinite(x));
    EXPECT_GE(x, 0.0);
  }
  EXPECT_GT(r.kappa, 0.0);
  EXPECT_EQ(r.dof, m.num_vertices());
}
