#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sosgap/certificate.hpp"
#include "sosgap/estimators.hpp"
#include "sosgap/models.hpp"
#include "sosgap/sdp.hpp"

namespace sosgap {

enum class ExperimentKind { Gap, Certificate, Threshold };

enum class EstimatorKind { Scan, Avg, Max, Lp, SosBasic, SosLevel };

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::Scan;
  int level = 0;  // SosLevel only
};

/// One model setting. `ell` is used by the certificate experiment.
struct GridPoint {
  ModelParams params;
  int ell = 1;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Gap;
  std::vector<GridPoint> grid;
  std::vector<EstimatorSpec> estimators;  // Gap
  std::vector<double> multipliers;        // Threshold
  bool solve_sdp = false;                 // Certificate
  int replicates = 1;
  std::uint64_t base_seed = 0;
  SolverOptions solver;
  ScanOptions scan;
  CliqueBudget cliques;
  std::filesystem::path output;
};

/// Grid entries may give any numeric field as a list; the grid is the
/// Cartesian product in the order d, s_star, beta_star, beta_tilde, sigma,
/// nu, ell.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Rows are strings already formatted for CSV (17 significant digits).
struct ResultTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // throws InvalidParams
};

std::string to_csv(const ResultTable& table);

/// Seed of replicate `rep` at grid point `point`.
std::uint64_t replicate_seed(std::uint64_t base_seed, std::size_t point, int rep);

ResultTable run_gap_experiment(const ExperimentConfig& cfg);
ResultTable run_certificate_experiment(const ExperimentConfig& cfg);
ResultTable run_threshold_sweep(const ExperimentConfig& cfg);
ResultTable run_experiment(const ExperimentConfig& cfg);

std::string format_double(double x);
std::string estimator_name(const EstimatorSpec& e);
EstimatorSpec parse_estimator(const std::string& name);

/// Entry point of the `sosgap` command-line tool. Output goes to the given
/// streams so it can be driven from tests.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sosgap
