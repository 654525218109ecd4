#pragma once

#include "pdecol/nlp.hpp"
#include "pdecol/problems.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pdecol {

struct RunConfig {
  std::string problem = "burgers";
  Backend backend = Backend::Fem;
  int degree = 1;
  int n_nodes = 34;
  int intervals = 3;
  int points_per_interval = 5;
  int quad_points = 3;
  RadauKind kind = RadauKind::Flipped;
  double tolerance = 1e-8;
  double constraint_tolerance = 1e-8;
  int max_iterations = 1000;
  std::string out_dir = "out";

  /// Throws InvalidConfig on nonpositive counts or an unsupported degree.
  void validate() const;
  MeshConfig mesh() const;
  SolveOptions solve_options() const;
};

struct BenchmarkRun {
  std::unique_ptr<Transcription> transcription;
  SolveReport report;
};

BenchmarkRun solve_benchmark(const RunConfig& config);
/// Same, with a problem definition other than the named benchmark.
BenchmarkRun solve_benchmark(const ProblemDefinition& problem, const RunConfig& config);

/// Writes state.csv, controls.csv and summary.json into config.out_dir.
/// The files depend only on the configuration and the solution, never on
/// timing, so identical runs produce identical bytes.
void write_benchmark_outputs(const RunConfig& config, const BenchmarkRun& run);

/// Value at local tau of the temporal interpolant through per-support values.
double interpolate_in_time(const TemporalMesh& mesh, const Eigen::Ref<const Eigen::VectorXd>& support_values,
                           double tau);

struct ConvergenceReport {
  std::string norm;  ///< "linf-temporal" or "relative-l2-spatial"
  double probe = 0.0;  ///< x_c or t_c
  std::vector<double> h;
  std::vector<double> error;
  std::vector<bool> fitted;
  double slope = 0.0;
  std::string reference;
  std::vector<int> excluded_nodes;  ///< spatial study: nodes where the reference vanishes
  bool all_converged = true;
};

/// Least-squares slope of log(error) against log(h) over points with error
/// above `floor`.  Returns NaN when fewer than two points qualify.
double fit_slope(const std::vector<double>& h, const std::vector<double>& error, double floor,
                 std::vector<bool>* used = nullptr);

struct TemporalStudy {
  RunConfig base;  ///< spatial grid and solver settings
  int points_per_interval = 3;
  std::vector<int> coarse_intervals;
  int reference_intervals = 0;
  int reference_points = 0;  ///< 0: same as points_per_interval
  double probe_x = 0.0;
  std::optional<ProblemDefinition> problem;  ///< overrides base.problem
};

struct SpatialStudy {
  RunConfig base;  ///< temporal mesh, degree and solver settings
  std::vector<int> coarse_elements;
  int reference_elements = 0;
  std::optional<ProblemDefinition> problem;  ///< overrides base.problem
};

ConvergenceReport temporal_self_convergence(const TemporalStudy& study);
ConvergenceReport spatial_self_convergence(const SpatialStudy& study);

void write_convergence(const std::string& dir, const std::string& stem, const ConvergenceReport& report);

/// MatrixMarket pattern of the constraint Jacobian; returns the file path.
std::string export_sparsity(const RunConfig& config);

}  // namespace pdecol
