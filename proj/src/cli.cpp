#include <algorithm>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "sosgap/error.hpp"
#include "sosgap/lab.hpp"
#include "sosgap/matrix_io.hpp"
#include "sosgap/sos_program.hpp"

namespace sosgap {

namespace {

struct GenerateArgs {
  std::string model = "submatrix";
  std::string noise = "gaussian";
  int d = 0;
  int s = 0;
  double beta = 0.0;
  double beta_tilde = 0.0;
  double sigma = 1.0;
  double nu = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

struct EstimateArgs {
  std::string in;
  std::string estimator = "scan";
  int s = 0;
  int level = 1;
  std::string strategy = "branch_and_bound";
  double guard = 1e8;
  bool json = false;
};

struct CertifyArgs {
  std::string in;
  int level = 1;
  int s = 0;
  std::string mode = "sign";
  std::uint64_t max_cliques = CliqueBudget{}.max_cliques;
};

struct SolveArgs {
  std::string in;
  int level = 1;
  bool basic = false;
  int s = 0;
  SolverOptions solver;
  std::string dump;
};

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

void add_solver_flags(CLI::App* cmd, SolverOptions& o) {
  cmd->add_option("--tol", o.tol, "Relative residual tolerance")->capture_default_str();
  cmd->add_option("--max-iter", o.max_iter, "Iteration cap")->capture_default_str();
  cmd->add_option("--step", o.step, "Initial ADMM step size")->capture_default_str();
}

ModelParams generate_params(const GenerateArgs& a) {
  ModelParams p;
  p.d = a.d;
  p.s_star = a.s;
  p.beta_star = a.beta;
  p.seed = a.seed;
  if (a.model == "sbm") {
    p.kind = ModelKind::Sbm;
    p.beta_tilde = a.beta_tilde;
  } else if (a.noise == "rademacher") {
    p.noise = RademacherNoise{a.nu};
  } else {
    p.noise = GaussianNoise{a.sigma};
  }
  return p;
}

void run_generate(const GenerateArgs& a, std::ostream& out) {
  const auto instance = generate(generate_params(a));
  const GroundTruth truth{instance.support, instance.params};
  if (a.out.empty()) {
    out << matrix_to_json(instance.matrix, truth).dump(1) << '\n';
  } else {
    write_matrix_file(a.out, instance.matrix, truth);
  }
}

void run_estimate(const EstimateArgs& a, std::ostream& out) {
  const auto file = read_matrix_file(a.in);
  const auto& x = file.matrix;
  auto spec = parse_estimator(a.estimator);
  if (spec.kind == EstimatorKind::SosLevel && a.estimator == "sos_level") spec.level = a.level;
  ScanOptions scan;
  scan.strategy = a.strategy == "exhaustive" ? ScanStrategy::Exhaustive : ScanStrategy::BranchAndBound;
  scan.exhaustive_guard = a.guard;

  nlohmann::json report;
  report["estimator"] = estimator_name(spec);
  double value = 0.0;
  switch (spec.kind) {
    case EstimatorKind::Scan: {
      const auto r = scan_estimate(x, a.s, scan);
      value = r.value;
      report["support"] = r.support;
      report["subsets_examined"] = r.subsets_examined;
      break;
    }
    case EstimatorKind::Avg: value = avg_estimate(x, a.s); break;
    case EstimatorKind::Max: value = max_estimate(x); break;
    case EstimatorKind::Lp: value = lp_estimate(x, a.s); break;
    case EstimatorKind::SosBasic:
    case EstimatorKind::SosLevel: {
      const auto program = spec.kind == EstimatorKind::SosBasic ? assemble_basic(x, a.s)
                                                                : assemble_level(x, a.s, spec.level);
      const auto sol = solve(program, SolverOptions{});
      value = sol.value;
      report["level"] = spec.level;
      report["status"] = sol.status == SdpStatus::Optimal ? "optimal" : "max_iter_reached";
      break;
    }
  }
  if (a.json) {
    report["value"] = value;
    out << report.dump(1) << '\n';
  } else {
    out << format_double(value) << '\n';
  }
}

void run_certify(const CertifyArgs& a, std::ostream& out) {
  const auto file = read_matrix_file(a.in);
  const auto mode = a.mode == "binary" ? PositivityMode::BinaryOne : PositivityMode::SignPositive;
  CliqueBudget budget;
  budget.max_cliques = a.max_cliques;
  const auto c = certify(file.matrix, mode, a.s, a.level, budget);
  auto j = report_to_json(c.report);
  j["d"] = file.matrix.d();
  j["s_star"] = a.s;
  j["ell"] = a.level;
  j["mode"] = a.mode;
  out << j.dump(1) << '\n';
}

void run_solve(const SolveArgs& a, std::ostream& out) {
  const auto file = read_matrix_file(a.in);
  const auto program = a.basic ? assemble_basic(file.matrix, a.s) : assemble_level(file.matrix, a.s, a.level);
  if (!a.dump.empty()) write_text_file(a.dump, program_to_json(program).dump(1) + "\n");
  const auto sol = solve(program, a.solver);
  nlohmann::json j;
  j["program"] = a.basic ? "basic" : "level";
  if (!a.basic) j["level"] = a.level;
  j["status"] = sol.status == SdpStatus::Optimal ? "optimal" : "max_iter_reached";
  j["value"] = sol.value;
  j["iterations"] = sol.iterations;
  j["primal_residual"] = sol.primal_residual;
  j["dual_residual"] = sol.dual_residual;
  j["min_eigenvalue"] = sol.min_eigenvalue;
  j["max_eigenvalue"] = sol.max_eigenvalue;
  out << j.dump(1) << '\n';
}

void run_experiment_cmd(const ExperimentArgs& a, std::ostream& out) {
  auto cfg = load_config(a.config);
  if (a.seed) cfg.base_seed = *a.seed;
  if (!a.out.empty()) cfg.output = a.out;
  const auto csv = to_csv(run_experiment(cfg));
  if (cfg.output.empty()) {
    out << csv;
  } else {
    write_text_file(cfg.output, csv);
  }
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Planted submatrix lab: estimators, SoS relaxations and pseudo-moment certificates.\n"
               "Vertices are 0-indexed in all inputs and outputs."};
  app.require_subcommand(1);
  std::uint64_t seed = 0;

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Sample a planted instance and write it as matrix JSON");
  g->add_option("--model", gen.model, "submatrix or sbm")
      ->check(CLI::IsMember({"submatrix", "sbm"}))
      ->capture_default_str();
  g->add_option("--noise", gen.noise, "gaussian or rademacher (submatrix only)")
      ->check(CLI::IsMember({"gaussian", "rademacher"}))
      ->capture_default_str();
  g->add_option("--d", gen.d, "Matrix dimension")->required();
  g->add_option("--s", gen.s, "Planted support size")->required();
  g->add_option("--beta", gen.beta, "Planted mean (sbm: edge probability inside the support)");
  g->add_option("--beta-tilde", gen.beta_tilde, "sbm edge probability outside the support");
  g->add_option("--sigma", gen.sigma, "Gaussian noise level; 0 gives the noiseless mean matrix")
      ->capture_default_str();
  g->add_option("--nu", gen.nu, "Rademacher amplitude")->capture_default_str();
  g->add_option("--seed", gen.seed, "64-bit seed")->capture_default_str();
  g->add_option("--out", gen.out, "Output path (default: stdout)");

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Run one estimator and print its value");
  e->add_option("--in", est.in, "Matrix JSON")->required();
  e->add_option("--estimator", est.estimator, "scan, avg, max, lp, sos_basic, sos_level or sos_level:L")
      ->capture_default_str();
  e->add_option("--s", est.s, "Target support size")->required();
  e->add_option("--level", est.level, "SoS level for sos_level")->capture_default_str();
  e->add_option("--strategy", est.strategy, "Scan strategy: branch_and_bound or exhaustive")
      ->check(CLI::IsMember({"branch_and_bound", "exhaustive"}))
      ->capture_default_str();
  e->add_option("--guard", est.guard, "Largest subset count the exhaustive scan accepts")->capture_default_str();
  e->add_flag("--json", est.json, "Print a JSON report instead of the bare value");
  e->add_option("--seed", seed, "Accepted for uniformity; estimators are deterministic");

  CertifyArgs cert;
  auto* c = app.add_subcommand("certify", "Build and verify the clique-count pseudo-moment certificate");
  c->add_option("--in", cert.in, "Matrix JSON")->required();
  c->add_option("--level", cert.level, "SoS level")->capture_default_str();
  c->add_option("--s", cert.s, "Target support size")->required();
  c->add_option("--mode", cert.mode, "sign: edge when X_ij > 0; binary: edge when A_ij = 1")
      ->check(CLI::IsMember({"sign", "binary"}))
      ->capture_default_str();
  c->add_option("--max-cliques", cert.max_cliques, "Clique enumeration budget")->capture_default_str();
  c->add_option("--seed", seed, "Accepted for uniformity; certification is deterministic");

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "Solve an SoS relaxation with the ADMM solver");
  s->add_option("--in", sol.in, "Matrix JSON")->required();
  auto* level_opt = s->add_option("--level", sol.level, "SoS level")->capture_default_str();
  s->add_flag("--basic", sol.basic, "Solve the basic (d+1)x(d+1) relaxation")->excludes(level_opt);
  s->add_option("--s", sol.s, "Target support size")->required();
  add_solver_flags(s, sol.solver);
  s->add_option("--dump-program", sol.dump, "Write the assembled program as JSON");
  s->add_option("--seed", seed, "Accepted for uniformity; the solver is deterministic");

  ExperimentArgs exp;
  auto* x = app.add_subcommand("experiment", "Run an experiment config and write CSV");
  x->add_option("--config", exp.config, "Experiment JSON config")->required();
  x->add_option("--out", exp.out, "CSV output path (default: config output, else stdout)");
  x->add_option("--seed", exp.seed, "Override the config base_seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::ParseError& ex) {
    err << "error kind=Usage message=\"" << ex.what() << "\"\n";
    return 2;
  }

  try {
    if (*g) run_generate(gen, out);
    if (*e) run_estimate(est, out);
    if (*c) run_certify(cert, out);
    if (*s) run_solve(sol, out);
    if (*x) run_experiment_cmd(exp, out);
  } catch (const Error& ex) {
    err << "error kind=" << to_string(ex.kind()) << " message=\"" << ex.what() << "\"\n";
    return 1;
  }
  return 0;
}

}  // namespace sosgap
