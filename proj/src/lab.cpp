#include "sosgap/lab.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>

#include <omp.h>

#include "sosgap/error.hpp"
#include "sosgap/matrix_io.hpp"
#include "sosgap/rng.hpp"
#include "sosgap/sos_program.hpp"

namespace sosgap {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string format_ms(double ms) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

std::string csv_safe(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  }
  return s;
}

std::string error_cell(const Error& e) {
  return std::string(to_string(e.kind())) + ": " + csv_safe(e.what());
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::string model_label(const ModelParams& p) {
  if (p.kind == ModelKind::Sbm) return "sbm";
  return std::holds_alternative<RademacherNoise>(p.noise) ? "rademacher" : "submatrix";
}

std::string noise_label(const ModelParams& p) {
  if (p.kind == ModelKind::Sbm) return "bernoulli(" + format_double(p.beta_tilde) + ")";
  if (const auto* g = std::get_if<GaussianNoise>(&p.noise)) return "gaussian(" + format_double(g->sigma) + ")";
  return "rademacher(" + format_double(std::get<RademacherNoise>(p.noise).nu) + ")";
}

std::vector<json> as_list(const json& j, const char* key, const json& fallback) {
  const json& v = j.contains(key) ? j.at(key) : fallback;
  if (v.is_array()) return std::vector<json>(v.begin(), v.end());
  return {v};
}

std::vector<GridPoint> expand_grid_entry(const json& e) {
  const auto model = e.value("model", std::string("submatrix"));
  std::vector<GridPoint> out;
  for (const auto& d : as_list(e, "d", json())) {
    for (const auto& s : as_list(e, "s_star", json())) {
      for (const auto& beta : as_list(e, "beta_star", 0.0)) {
        for (const auto& tilde : as_list(e, "beta_tilde", json())) {
          for (const auto& sigma : as_list(e, "sigma", 1.0)) {
            for (const auto& nu : as_list(e, "nu", 1.0)) {
              for (const auto& ell : as_list(e, "ell", 1)) {
                GridPoint g;
                g.params.d = d.get<int>();
                g.params.s_star = s.get<int>();
                g.params.beta_star = beta.get<double>();
                g.ell = ell.get<int>();
                if (model == "sbm") {
                  g.params.kind = ModelKind::Sbm;
                  g.params.beta_tilde = tilde.is_null() ? g.params.beta_star : tilde.get<double>();
                } else if (model == "rademacher") {
                  g.params.noise = RademacherNoise{nu.get<double>()};
                } else if (model == "submatrix") {
                  g.params.noise = GaussianNoise{sigma.get<double>()};
                } else {
                  fail(ErrorKind::InvalidParams, "unknown model '" + model + "'");
                }
                validate(g.params);
                if (g.ell < 1) fail(ErrorKind::InvalidParams, "ell must be >= 1");
                out.push_back(g);
              }
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

std::string estimator_name(const EstimatorSpec& e) {
  switch (e.kind) {
    case EstimatorKind::Scan: return "scan";
    case EstimatorKind::Avg: return "avg";
    case EstimatorKind::Max: return "max";
    case EstimatorKind::Lp: return "lp";
    case EstimatorKind::SosBasic: return "sos_basic";
    case EstimatorKind::SosLevel: return "sos_level";
  }
  return "?";
}

EstimatorSpec parse_estimator(const std::string& name) {
  if (name == "scan") return {EstimatorKind::Scan, 0};
  if (name == "avg") return {EstimatorKind::Avg, 0};
  if (name == "max") return {EstimatorKind::Max, 0};
  if (name == "lp") return {EstimatorKind::Lp, 0};
  if (name == "sos_basic") return {EstimatorKind::SosBasic, 1};
  const std::string prefix = "sos_level";
  if (name.rfind(prefix, 0) == 0) {
    int level = 1;
    if (name.size() > prefix.size()) {
      if (name[prefix.size()] != ':') fail(ErrorKind::InvalidParams, "bad estimator '" + name + "'");
      level = std::stoi(name.substr(prefix.size() + 1));
    }
    if (level < 1) fail(ErrorKind::InvalidParams, "sos level must be >= 1");
    return {EstimatorKind::SosLevel, level};
  }
  fail(ErrorKind::InvalidParams, "unknown estimator '" + name + "'");
}

ExperimentConfig config_from_json(const json& j) {
  try {
    ExperimentConfig cfg;
    const auto kind = j.at("experiment").get<std::string>();
    if (kind == "gap") {
      cfg.experiment = ExperimentKind::Gap;
    } else if (kind == "certificate") {
      cfg.experiment = ExperimentKind::Certificate;
    } else if (kind == "threshold") {
      cfg.experiment = ExperimentKind::Threshold;
    } else {
      fail(ErrorKind::InvalidParams, "unknown experiment '" + kind + "'");
    }
    for (const auto& entry : j.at("grid")) {
      auto points = expand_grid_entry(entry);
      cfg.grid.insert(cfg.grid.end(), points.begin(), points.end());
    }
    if (cfg.grid.empty()) fail(ErrorKind::InvalidParams, "empty grid");
    for (const auto& e : j.value("estimators", std::vector<std::string>{})) {
      cfg.estimators.push_back(parse_estimator(e));
    }
    cfg.multipliers = j.value("multipliers", std::vector<double>{});
    cfg.solve_sdp = j.value("solve_sdp", false);
    cfg.replicates = j.value("replicates", 1);
    cfg.base_seed = j.value("base_seed", std::uint64_t{0});
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      cfg.solver.tol = s.value("tol", cfg.solver.tol);
      cfg.solver.max_iter = s.value("max_iter", cfg.solver.max_iter);
      cfg.solver.step = s.value("step", cfg.solver.step);
    }
    validate(cfg.solver);
    if (j.contains("scan")) {
      const auto& s = j.at("scan");
      const auto strategy = s.value("strategy", std::string("branch_and_bound"));
      if (strategy == "exhaustive") {
        cfg.scan.strategy = ScanStrategy::Exhaustive;
      } else if (strategy == "branch_and_bound") {
        cfg.scan.strategy = ScanStrategy::BranchAndBound;
      } else {
        fail(ErrorKind::InvalidParams, "unknown scan strategy '" + strategy + "'");
      }
      cfg.scan.exhaustive_guard = s.value("guard", cfg.scan.exhaustive_guard);
    }
    if (j.contains("max_cliques")) cfg.cliques.max_cliques = j.at("max_cliques").get<std::uint64_t>();
    cfg.output = j.value("output", std::string());
    if (cfg.replicates < 1) fail(ErrorKind::InvalidParams, "replicates must be >= 1");
    if (cfg.experiment == ExperimentKind::Gap && cfg.estimators.empty()) {
      fail(ErrorKind::InvalidParams, "gap experiment needs at least one estimator");
    }
    if (cfg.experiment == ExperimentKind::Threshold) {
      if (cfg.multipliers.empty()) fail(ErrorKind::InvalidParams, "threshold sweep needs multipliers");
      for (const auto& g : cfg.grid) {
        if (g.params.kind != ModelKind::Submatrix || !std::holds_alternative<GaussianNoise>(g.params.noise)) {
          fail(ErrorKind::InvalidParams, "threshold sweep uses Gaussian submatrix grid points");
        }
      }
    }
    return cfg;
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidParams, std::string("bad config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_json_file(path));
}

int ResultTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  fail(ErrorKind::InvalidParams, "no column '" + name + "'");
}

std::string to_csv(const ResultTable& t) {
  std::ostringstream out;
  const auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out.str();
}

std::uint64_t replicate_seed(std::uint64_t base, std::size_t point, int rep) {
  return derive_seed(derive_seed(base, point), static_cast<std::uint64_t>(rep));
}

namespace {

using Rows = std::vector<std::vector<std::string>>;

// Runs `task(point, rep)` for every (grid point, replicate) pair, in
// parallel, and concatenates the produced rows in (point, rep) order.
ResultTable run_tasks(std::vector<std::string> header, std::size_t points, int reps,
                      const std::function<Rows(std::size_t, int)>& task) {
  const auto total = static_cast<long long>(points) * reps;
  std::vector<Rows> produced(static_cast<std::size_t>(total));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic, 1)
  for (long long t = 0; t < total; ++t) {
    try {
      produced[static_cast<std::size_t>(t)] = task(static_cast<std::size_t>(t / reps), static_cast<int>(t % reps));
    } catch (...) {
      failures[static_cast<std::size_t>(t)] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  ResultTable table{std::move(header), {}};
  for (auto& rows : produced) {
    for (auto& r : rows) table.rows.push_back(std::move(r));
  }
  return table;
}

struct EstimateOutcome {
  double value = 0.0;
  std::string note;
};

EstimateOutcome run_estimator(const EstimatorSpec& e, const NoisyMatrix& x, int s,
                              const ExperimentConfig& cfg) {
  switch (e.kind) {
    case EstimatorKind::Scan: return {scan_estimate(x, s, cfg.scan).value, ""};
    case EstimatorKind::Avg: return {avg_estimate(x, s), ""};
    case EstimatorKind::Max: return {max_estimate(x), ""};
    case EstimatorKind::Lp: return {lp_estimate(x, s), ""};
    case EstimatorKind::SosBasic:
    case EstimatorKind::SosLevel: {
      const auto program = e.kind == EstimatorKind::SosBasic ? assemble_basic(x, s)
                                                             : assemble_level(x, s, e.level);
      const auto sol = solve(program, cfg.solver);
      return {sol.value, sol.status == SdpStatus::Optimal ? "" : "MaxIterReached"};
    }
  }
  return {};
}

}  // namespace

ResultTable run_gap_experiment(const ExperimentConfig& cfg) {
  std::vector<std::string> header{"model", "d",   "s_star", "beta_star", "noise",    "estimator", "level",
                                  "rep",   "seed", "estimate", "abs_error", "runtime_ms", "error"};
  return run_tasks(std::move(header), cfg.grid.size(), cfg.replicates, [&cfg](std::size_t g, int rep) {
    ModelParams params = cfg.grid[g].params;
    params.seed = replicate_seed(cfg.base_seed, g, rep);
    Rows rows;
    std::optional<PlantedInstance> instance;
    std::string gen_error;
    try {
      instance = generate(params);
    } catch (const Error& e) {
      gen_error = error_cell(e);
    }
    for (const auto& est : cfg.estimators) {
      std::vector<std::string> row{model_label(params),
                                   std::to_string(params.d),
                                   std::to_string(params.s_star),
                                   format_double(params.beta_star),
                                   noise_label(params),
                                   estimator_name(est),
                                   est.kind == EstimatorKind::SosBasic || est.kind == EstimatorKind::SosLevel
                                       ? std::to_string(est.level)
                                       : "",
                                   std::to_string(rep),
                                   std::to_string(params.seed)};
      const auto start = std::chrono::steady_clock::now();
      std::string estimate, abs_error, error = gen_error;
      if (instance) {
        try {
          const auto out = run_estimator(est, instance->matrix, params.s_star, cfg);
          estimate = format_double(out.value);
          abs_error = format_double(std::abs(out.value - params.beta_star));
          error = out.note;
        } catch (const Error& e) {
          error = error_cell(e);
        }
      }
      row.insert(row.end(), {estimate, abs_error, format_ms(elapsed_ms(start)), error});
      rows.push_back(std::move(row));
    }
    return rows;
  });
}

ResultTable run_certificate_experiment(const ExperimentConfig& cfg) {
  std::vector<std::string> header{"model",     "d",         "s_star",    "ell",
                                  "rep",       "seed",      "eta_empty", "rowsum_violation_zero",
                                  "min_eig",   "psd",       "objective", "objective_exact",
                                  "sdp_value", "runtime_ms", "error"};
  return run_tasks(std::move(header), cfg.grid.size(), cfg.replicates, [&cfg](std::size_t g, int rep) {
    const auto& point = cfg.grid[g];
    ModelParams params = point.params;
    params.seed = replicate_seed(cfg.base_seed, g, rep);
    std::vector<std::string> row{model_label(params), std::to_string(params.d), std::to_string(params.s_star),
                                 std::to_string(point.ell), std::to_string(rep), std::to_string(params.seed)};
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> rest(7);
    std::string error;
    try {
      const auto instance = generate(params);
      const auto mode = params.kind == ModelKind::Sbm ? PositivityMode::BinaryOne : PositivityMode::SignPositive;
      const auto graph = positivity_graph(instance.matrix, mode);
      const auto table = expansivity_table(graph, point.ell, cfg.cliques);
      rest[0] = std::to_string(table.clique_count);
      if (table.clique_count > 0) {
        const auto pe = build_certificate(table, params.s_star, point.ell);
        const auto report = verify_certificate(pe, params.d, params.s_star, point.ell);
        const auto objective = certificate_objective(instance.matrix, pe, params.s_star);
        rest[1] = report.rowsum_max_violation == 0 && report.normalization_ok ? "true" : "false";
        rest[2] = format_double(report.min_eigenvalue);
        rest[3] = report.psd ? "true" : "false";
        rest[4] = format_double(to_double(objective));
        rest[5] = to_fraction_string(objective);
      } else {
        error = "CertificateUndefined: eta({}) = 0";
      }
      if (cfg.solve_sdp) {
        const auto sol = solve(assemble_level(instance.matrix, params.s_star, point.ell), cfg.solver);
        rest[6] = format_double(sol.value);
        if (sol.status != SdpStatus::Optimal && error.empty()) error = "MaxIterReached";
      }
    } catch (const Error& e) {
      error = error_cell(e);
    }
    row.insert(row.end(), rest.begin(), rest.end());
    row.push_back(format_ms(elapsed_ms(start)));
    row.push_back(error);
    return Rows{std::move(row)};
  });
}

ResultTable run_threshold_sweep(const ExperimentConfig& cfg) {
  std::vector<std::string> header{"kind",   "d",      "s_star",     "c",           "beta_bar",
                                  "rep",    "seed",   "hypothesis", "scan_value",  "reject",
                                  "type1_error", "type2_error", "total_error", "runtime_ms"};
  const std::size_t nc = cfg.multipliers.size();
  // One task per (grid point, multiplier, replicate); each emits the null and
  // the alternative row.
  auto data = run_tasks(header, cfg.grid.size() * nc, cfg.replicates, [&cfg, nc](std::size_t flat, int rep) {
    const std::size_t g = flat / nc;
    const double c = cfg.multipliers[flat % nc];
    const auto& base = cfg.grid[g].params;
    const double beta_bar = c * std::sqrt(std::log(static_cast<double>(base.d) / base.s_star) / base.s_star);
    Rows rows;
    for (int h = 0; h < 2; ++h) {
      ModelParams params = base;
      params.beta_star = h == 0 ? 0.0 : beta_bar;
      params.seed = derive_seed(replicate_seed(cfg.base_seed, flat, rep), static_cast<std::uint64_t>(h));
      const auto start = std::chrono::steady_clock::now();
      std::vector<std::string> row{"data", std::to_string(base.d), std::to_string(base.s_star), format_double(c),
                                   format_double(beta_bar), std::to_string(rep), std::to_string(params.seed),
                                   std::to_string(h)};
      const auto instance = generate(params);
      const double scan = scan_estimate(instance.matrix, params.s_star, cfg.scan).value;
      const bool reject = scan > beta_bar / 2.0;
      row.insert(row.end(), {format_double(scan), reject ? "1" : "0", "", "", "", format_ms(elapsed_ms(start))});
      rows.push_back(std::move(row));
    }
    return rows;
  });

  // Interleave a summary row after each (grid point, multiplier) block.
  ResultTable out{std::move(header), {}};
  const auto block = static_cast<std::size_t>(cfg.replicates) * 2;
  const int reject_col = out.column("reject");
  const int hyp_col = out.column("hypothesis");
  for (std::size_t flat = 0; flat < cfg.grid.size() * nc; ++flat) {
    int false_alarm = 0, missed = 0;
    for (std::size_t k = 0; k < block; ++k) {
      auto& row = data.rows[flat * block + k];
      const bool reject = row[static_cast<std::size_t>(reject_col)] == "1";
      const bool alt = row[static_cast<std::size_t>(hyp_col)] == "1";
      false_alarm += !alt && reject;
      missed += alt && !reject;
      out.rows.push_back(std::move(row));
    }
    const auto& first = out.rows[out.rows.size() - block];
    const double reps = cfg.replicates;
    const double t1 = false_alarm / reps;
    const double t2 = missed / reps;
    out.rows.push_back({"summary", first[1], first[2], first[3], first[4], "", "", "", "", "", format_double(t1),
                        format_double(t2), format_double(t1 + t2), ""});
  }
  return out;
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::Gap: return run_gap_experiment(cfg);
    case ExperimentKind::Certificate: return run_certificate_experiment(cfg);
    case ExperimentKind::Threshold: return run_threshold_sweep(cfg);
  }
  fail(ErrorKind::InvalidParams, "unknown experiment kind");
}

}  // namespace sosgap
