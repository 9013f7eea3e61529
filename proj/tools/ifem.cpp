// Command-line experiment runner.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ifem/adapt.hpp"
#include "ifem/config.hpp"
#include "ifem/exceptions.hpp"
#include "ifem/experiments.hpp"
#include "ifem/report.hpp"
#include "ifem/version.hpp"

namespace fs = std::filesystem;
using namespace ifem;

namespace {

struct RunArgs {
  std::string problem;
  std::string mode;
  std::optional<int> levels;
  std::optional<int> coarse_n;
  std::optional<double> beta_minus;
  std::optional<double> beta_plus;
  std::optional<double> theta;
  std::optional<long> max_dof;
  std::optional<double> cg_tol;
  std::optional<std::string> out;
  std::optional<std::string> config;
  std::optional<std::string> dump_mesh;
  std::optional<std::string> dump_gradient;
  long seed = 0;
  bool quiet = false;
};

// Stage label for a library error, used in diagnostics.
const char* stage_of(const std::exception& e) {
  if (dynamic_cast<const UnresolvedInterface*>(&e) || dynamic_cast<const AmbiguousElement*>(&e) ||
      dynamic_cast<const NoConvergence*>(&e))
    return "mesh";
  if (dynamic_cast<const DegenerateTriangle*>(&e)) return "assemble";
  if (dynamic_cast<const MaxIterations*>(&e)) return "solve";
  if (dynamic_cast<const RankDeficient*>(&e) || dynamic_cast<const PatchExhausted*>(&e)) return "recover";
  if (dynamic_cast<const DivisionByZero*>(&e)) return "estimate";
  if (dynamic_cast<const InvalidArgument*>(&e)) return "configure";
  return "run";
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string default_tag(const std::string& problem, const ProblemParams& p) {
  if (problem == "ex51") return problem + "_bm" + fmt("%g", p.beta_minus) + "_bp" + fmt("%g", p.beta_plus);
  if (problem == "ex53") return problem + "_bm" + fmt("%g", p.beta_minus);
  return problem;
}

int run(const RunArgs& a) {
  Config cfg;
  if (a.config) cfg = Config::load(*a.config);
  const std::string name = a.problem.empty() ? cfg.get_string("problem", "") : a.problem;
  if (name.empty()) throw InvalidArgument("no problem given");

  ProblemParams params;
  params.beta_minus = a.beta_minus.value_or(cfg.get_double("beta_minus", 1.0));
  params.beta_plus = a.beta_plus.value_or(cfg.get_double("beta_plus", 10.0));
  if (name == "ex53" && !a.beta_minus && !cfg.has("beta_minus")) params.beta_minus = 10000.0;
  params.swap_branches = cfg.get_bool("ex52.swap_branches", false);
  const LevelSetProblem problem = make_problem(name, params);

  const bool adaptive_default = name == "ex53" || name == "ex54";
  const std::string mode = !a.mode.empty() ? a.mode : cfg.get_string("mode", adaptive_default ? "adaptive" : "uniform");
  if (mode != "uniform" && mode != "adaptive") throw InvalidArgument("mode must be uniform or adaptive");

  SolveOptions solve;
  solve.tol = a.cg_tol.value_or(cfg.get_double("cg_tol", 1e-10));
  RecoveryOptions recovery;
  recovery.min_layers = static_cast<int>(cfg.get_int("recovery.min_layers", recovery.min_layers));

  const fs::path out = a.out.value_or(cfg.get_string("out", (fs::path("results") / default_tag(name, params)).string()));
  fs::create_directories(out);
  const auto t0 = std::chrono::steady_clock::now();
  auto log = [&](const std::string& s) {
    if (!a.quiet) std::cerr << s << '\n';
  };

  std::optional<Mesh> last_mesh;
  std::optional<TwoValuedGradientField> last_grad;
  std::ostringstream summary;
  summary << "problem = " << name << "\nmode = " << mode << "\nbeta_minus = " << problem.beta_minus
          << "\nbeta_plus = " << problem.beta_plus << "\ncg_tol = " << solve.tol << "\nseed = " << a.seed << '\n';

  if (mode == "uniform") {
    UniformOptions opts = default_uniform_options(name);
    const int default_levels = opts.levels;
    opts.levels = a.levels.value_or(static_cast<int>(cfg.get_int("levels", opts.levels)));
    if (opts.family == MeshFamily::Resnapped && opts.levels != default_levels) {
      // Keep the finest re-snapped mesh fixed when the level count changes.
      const int finest = opts.coarse_n << (default_levels - 1);
      opts.coarse_n = std::max(8, finest >> std::clamp(opts.levels - 1, 0, 16));
    }
    opts.coarse_n = a.coarse_n.value_or(static_cast<int>(cfg.get_int("coarse_n", opts.coarse_n)));
    opts.solve = solve;
    opts.recovery = recovery;
    if (opts.levels < 2) throw InvalidArgument("levels must be at least 2");
    const bool need_mesh = a.dump_mesh.has_value();
    const bool need_grad = a.dump_gradient.has_value();
    std::string mesh_picture;
    const UniformResult res = run_uniform(problem, opts, [&](const LevelState& s) {
      log("level " + std::to_string(s.level) + ": dof " + std::to_string(s.mesh.num_vertices()) + ", cg " +
          std::to_string(s.solution.stats.iterations) + " iterations");
      if (s.mesh.num_triangles() <= 40000) mesh_picture = mesh_svg(s.mesh);
      if (need_mesh) last_mesh = s.mesh;
      if (need_grad) last_grad = s.evaluation.gradient;
    });
    write_text(out / (name + ".csv"), uniform_csv(res.records));
    write_text(out / (name + ".full.csv"), uniform_csv(res.records, true));
    std::vector<double> dof, de, die, dre, dpe;
    for (const auto& r : res.records) {
      dof.push_back(static_cast<double>(r.dof));
      de.push_back(r.De);
      die.push_back(r.Die);
      dre.push_back(r.Dre);
      dpe.push_back(r.Dpe);
    }
    write_text(out / (name + "_errors.svg"), loglog_svg(dof, {{"De", de}, {"Die", die}, {"Dre", dre}, {"Dpe", dpe}}));
    if (!mesh_picture.empty()) write_text(out / (name + "_mesh.svg"), mesh_picture);
    const std::size_t k = dof.size() - 1;
    auto final_order = [&](const std::vector<double>& e) { return convergence_order(e, dof)[k - 1]; };
    summary << "levels = " << res.records.size() << "\nfinal_order.De = " << fmt("%.4f", final_order(de))
            << "\nfinal_order.Die = " << fmt("%.4f", final_order(die))
            << "\nfinal_order.Dre = " << fmt("%.4f", final_order(dre))
            << "\nfinal_order.Dpe = " << fmt("%.4f", final_order(dpe));
    double min_angle = 180.0;
    for (double ang : res.min_angles) min_angle = std::min(min_angle, ang);
    summary << "\nmin_angle_deg = " << fmt("%.3f", min_angle) << '\n';
    std::cout << uniform_csv(res.records);
  } else {
    AdaptiveOptions opts;
    opts.theta = a.theta.value_or(cfg.get_double("theta", 0.2));
    opts.max_dof = static_cast<std::size_t>(a.max_dof.value_or(cfg.get_int("max_dof", name == "ex54" ? 100000 : 50000)));
    opts.bulk_on_squares = cfg.get_bool("marking.bulk_on_squares", true);
    opts.solve = solve;
    opts.recovery = recovery;
    const int n0 = a.coarse_n.value_or(static_cast<int>(cfg.get_int("coarse_n", default_adaptive_n(name))));
    const AdaptiveResult res =
        adaptive_loop(problem, adaptive_initial_mesh(problem, n0), opts, [&](const IterationState& s) {
          log("iteration " + std::to_string(s.iteration) + ": dof " + std::to_string(s.record.dof) + ", eta " +
              fmt("%.3e", s.record.eta) + ", kappa " + fmt("%.3f", s.record.kappa));
          if (a.dump_gradient) last_grad = s.gradient;
        });
    last_mesh = res.final_mesh;
    write_text(out / (name + ".csv"), adaptive_csv(res.records));
    write_text(out / (name + ".full.csv"), adaptive_csv(res.records, true));
    write_text(out / (name + "_extra.csv"), adaptive_extra_csv(res.records));
    write_text(out / (name + "_mesh.svg"), mesh_svg(res.final_mesh));
    std::vector<double> dof, energy, recovered, eta;
    for (const auto& r : res.records) {
      dof.push_back(static_cast<double>(r.dof));
      energy.push_back(r.energy_error);
      recovered.push_back(r.recovered_energy_error);
      eta.push_back(r.eta);
    }
    write_text(out / (name + "_errors.svg"),
               loglog_svg(dof, {{"energy", energy}, {"recovered", recovered}, {"eta", eta}}));
    const AdaptiveSummary s = summarize_adaptive(res, problem);
    summary << "theta = " << opts.theta << "\nmax_dof = " << opts.max_dof << "\niterations = " << s.iterations
            << "\nslope.energy = " << fmt("%.4f", s.energy_slope)
            << "\nslope.recovered_energy = " << fmt("%.4f", s.recovered_slope)
            << "\nslope.recovered_plain = " << fmt("%.4f", s.recovered_plain_slope)
            << "\nslope.eta = " << fmt("%.4f", s.eta_slope) << "\nkappa.final = " << fmt("%.4f", s.final_kappa)
            << "\nkappa.min = " << fmt("%.4f", s.min_kappa) << "\nkappa.max = " << fmt("%.4f", s.max_kappa)
            << "\nnear_fraction_r005 = " << fmt("%.4f", s.near_fraction) << "\nh_min = " << fmt("%.3e", s.h_min)
            << "\nh_max = " << fmt("%.4f", s.h_max) << '\n';
    std::cout << adaptive_csv(res.records);
  }
  write_text(out / (name + "_summary.txt"), summary.str());
  if (a.dump_mesh && last_mesh) {
    std::ofstream f(*a.dump_mesh);
    write_mesh(f, *last_mesh);
  }
  if (a.dump_gradient && last_grad) {
    std::ofstream f(*a.dump_gradient);
    write_gradient(f, *last_grad);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  log("wrote " + out.string() + " in " + fmt("%.1f", secs) + " s");
  return 0;
}

int dump_mesh_cmd(const std::string& problem_name, int n, const std::string& out, double bm, double bp) {
  ProblemParams params;
  params.beta_minus = bm;
  params.beta_plus = bp;
  const LevelSetProblem p = make_problem(problem_name, params);
  const Mesh m = build_fitted_mesh(p.ls, p.domain, n);
  if (out.empty() || out == "-") {
    write_mesh(std::cout, m);
  } else {
    std::ofstream f(out);
    if (!f) throw InvalidArgument("cannot open " + out);
    write_mesh(f, m);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interface-problem finite elements with immersed gradient recovery"};
  app.require_subcommand(1);
  const std::vector<std::string> problems{"ex51", "ex52", "ex53", "ex54", "smoke"};

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Run a convergence study and write CSV/SVG reports");
  run_cmd->add_option("problem", ra.problem, "ex51 | ex52 | ex53 | ex54 | smoke")->check(CLI::IsMember(problems));
  run_cmd->add_option("--mode", ra.mode, "uniform or adaptive (default by problem)");
  run_cmd->add_option("--levels", ra.levels, "uniform levels");
  run_cmd->add_option("--coarse-n", ra.coarse_n, "squares per side of the first mesh");
  run_cmd->add_option("--beta-minus", ra.beta_minus, "coefficient inside / on the minus side");
  run_cmd->add_option("--beta-plus", ra.beta_plus, "coefficient on the plus side");
  run_cmd->add_option("--theta", ra.theta, "Dörfler bulk parameter");
  run_cmd->add_option("--max-dof", ra.max_dof, "stop adapting once the vertex count exceeds this");
  run_cmd->add_option("--cg-tol", ra.cg_tol, "CG relative residual tolerance");
  run_cmd->add_option("--out", ra.out, "output directory");
  run_cmd->add_option("--seed", ra.seed, "seed for randomized checks (solver path is deterministic)");
  run_cmd->add_option("--config", ra.config, "key = value config file");
  run_cmd->add_option("--dump-mesh", ra.dump_mesh, "write the last mesh (ifem-mesh v1)");
  run_cmd->add_option("--dump-gradient", ra.dump_gradient, "write the last recovered gradient (ifem-grad v1)");
  run_cmd->add_flag("-q,--quiet", ra.quiet, "no progress output");

  std::string dm_problem = "ex51", dm_out;
  int dm_n = 16;
  double dm_bm = 1.0, dm_bp = 10.0;
  auto* dm_cmd = app.add_subcommand("dump-mesh", "Write a fitted mesh in ifem-mesh v1 format");
  dm_cmd->add_option("problem", dm_problem, "problem whose interface is meshed")->check(CLI::IsMember(problems));
  dm_cmd->add_option("-n,--n", dm_n, "squares per side");
  dm_cmd->add_option("-o,--out", dm_out, "output file (default stdout)");
  dm_cmd->add_option("--beta-minus", dm_bm);
  dm_cmd->add_option("--beta-plus", dm_bp);

  auto* ver_cmd = app.add_subcommand("version", "Print the version");

  CLI11_PARSE(app, argc, argv);
  try {
    if (run_cmd->parsed()) return run(ra);
    if (dm_cmd->parsed()) return dump_mesh_cmd(dm_problem, dm_n, dm_out, dm_bm, dm_bp);
    if (ver_cmd->parsed()) {
      std::cout << "ifem " << version() << '\n';
      return 0;
    }
  } catch (const ifem::Error& e) {
    std::cerr << "ifem: " << stage_of(e) << " stage failed: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ifem: run stage failed: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
