#include "pdecol/study.hpp"
#include "pdecol/derivatives.hpp"
#include "pdecol/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

namespace pdecol {

namespace {

std::string fmt(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_output(const std::string& dir, const std::string& name)
{
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream os(path, std::ios::binary);
  PDECOL_REQUIRE(os.good(), Error, "cannot write " + path);
  return os;
}

const char* backend_name(Backend b) { return b == Backend::Fem ? "fem" : "fd"; }

}  // namespace

void RunConfig::validate() const
{
  problem_by_name(problem);
  PDECOL_REQUIRE(degree == 1 || degree == 2, InvalidConfig, "degree must be 1 or 2");
  PDECOL_REQUIRE(n_nodes >= 3, InvalidConfig, "need at least 3 spatial nodes");
  PDECOL_REQUIRE(degree == 1 || n_nodes % 2 == 1, InvalidConfig, "degree 2 needs an odd node count");
  PDECOL_REQUIRE(intervals >= 1, InvalidConfig, "need at least one time interval");
  PDECOL_REQUIRE(points_per_interval >= 1, InvalidConfig, "need at least one collocation point per interval");
  PDECOL_REQUIRE(quad_points >= 2, InvalidConfig, "need at least two quadrature points per element");
  PDECOL_REQUIRE(tolerance > 0.0 && constraint_tolerance > 0.0, InvalidConfig, "tolerances must be positive");
  PDECOL_REQUIRE(max_iterations >= 1, InvalidConfig, "iteration cap must be positive");
  PDECOL_REQUIRE(backend == Backend::Fem || degree == 1, InvalidConfig, "the fd backend has no degree 2");
}

MeshConfig RunConfig::mesh() const
{
  return {points_per_interval, intervals, n_nodes, degree, quad_points, kind};
}

SolveOptions RunConfig::solve_options() const
{
  SolveOptions o;
  o.tolerance = tolerance;
  o.constraint_tolerance = constraint_tolerance;
  o.max_iterations = max_iterations;
  return o;
}

BenchmarkRun solve_benchmark(const RunConfig& config)
{
  config.validate();
  return solve_benchmark(problem_by_name(config.problem), config);
}

BenchmarkRun solve_benchmark(const ProblemDefinition& problem, const RunConfig& config)
{
  config.validate();
  BenchmarkRun run;
  run.transcription = build_transcription(problem, config.mesh(), config.backend);
  run.report = solve(to_nlp(*run.transcription), config.solve_options());
  return run;
}

void write_benchmark_outputs(const RunConfig& config, const BenchmarkRun& run)
{
  const Transcription& tr = *run.transcription;
  const DecisionVector v = unpack(tr.layout(), run.report.z);
  const Eigen::VectorXd ts = support_times(tr.mesh());

  {
    auto os = open_output(config.out_dir, "state.csv");
    os << "t";
    for (int k = 0; k < tr.grid().n_nodes(); ++k) os << ",x=" << fmt(tr.grid().nodes[k]);
    os << '\n';
    for (int s = 0; s < v.state.rows(); ++s) {
      os << fmt(ts[s]);
      for (int k = 0; k < v.state.cols(); ++k) os << ',' << fmt(v.state(s, k));
      os << '\n';
    }
  }
  {
    auto os = open_output(config.out_dir, "controls.csv");
    const Eigen::VectorXd tc = tr.control_times();
    os << "t";
    if (tr.layout().has_u1) os << ",u1";
    if (tr.layout().has_u2) os << ",u2";
    os << '\n';
    for (int c = 0; c < tc.size(); ++c) {
      os << fmt(tc[c]);
      if (tr.layout().has_u1) os << ',' << fmt(v.u1[c]);
      if (tr.layout().has_u2) os << ',' << fmt(v.u2[c]);
      os << '\n';
    }
  }
  nlohmann::ordered_json j;
  j["problem"] = config.problem;
  j["backend"] = backend_name(config.backend);
  j["degree"] = config.degree;
  j["n_nodes"] = config.n_nodes;
  j["intervals"] = config.intervals;
  j["points_per_interval"] = config.points_per_interval;
  j["radau"] = config.kind == RadauKind::Flipped ? "flipped" : "standard";
  j["n_variables"] = tr.n_variables();
  j["n_constraints"] = tr.n_constraints();
  j["jacobian_nnz"] = unique_pattern(tr.jacobian_pattern()).nnz();
  j["status"] = to_string(run.report.status);
  j["objective"] = run.report.objective;
  j["constraint_violation"] = run.report.constraint_violation;
  j["optimality"] = run.report.optimality;
  j["iterations"] = run.report.iterations;
  j["tolerance"] = config.tolerance;
  auto os = open_output(config.out_dir, "summary.json");
  os << j.dump(2) << '\n';
}

double interpolate_in_time(const TemporalMesh& mesh, const Eigen::Ref<const Eigen::VectorXd>& support_values,
                           double tau)
{
  PDECOL_REQUIRE(support_values.size() == mesh.n_support, DimensionMismatch,
                 "support value count does not match the temporal mesh");
  PDECOL_REQUIRE(tau >= -1.0 && tau <= 1.0, OutOfDomain, "tau outside [-1, 1]");
  int j = 0;
  while (j + 1 < mesh.n_intervals() && tau >= mesh.intervals[j + 1].tau_left) ++j;
  const TemporalInterval& iv = mesh.intervals[j];
  const double r = 2.0 * (tau - iv.tau_left) / (iv.tau_right - iv.tau_left) - 1.0;
  std::vector<double> vals(iv.support.size());
  for (std::size_t l = 0; l < vals.size(); ++l) vals[l] = support_values[iv.support_offset + static_cast<int>(l)];
  return lagrange_interpolate(iv.support, vals, r);
}

double fit_slope(const std::vector<double>& h, const std::vector<double>& error, double floor,
                 std::vector<bool>* used)
{
  PDECOL_REQUIRE(h.size() == error.size(), DimensionMismatch, "h and error differ in length");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  if (used) used->assign(h.size(), false);
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(error[i] > floor) || !(h[i] > 0.0)) continue;
    const double x = std::log(h[i]), y = std::log(error[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
    if (used) (*used)[i] = true;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceReport temporal_self_convergence(const TemporalStudy& study)
{
  PDECOL_REQUIRE(!study.coarse_intervals.empty(), InvalidConfig, "no coarse meshes given");
  const int finest = *std::max_element(study.coarse_intervals.begin(), study.coarse_intervals.end());
  PDECOL_REQUIRE(study.reference_intervals >= finest, InvalidConfig,
                 "reference mesh must be at least as fine as every coarse mesh");

  RunConfig fine = study.base;
  fine.intervals = study.reference_intervals;
  fine.points_per_interval = study.reference_points > 0 ? study.reference_points : study.points_per_interval;
  const ProblemDefinition prob = study.problem ? *study.problem : problem_by_name(study.base.problem);
  const BenchmarkRun ref = solve_benchmark(prob, fine);
  // The probe is quoted to four digits, so accept the node that rounds to it.
  const int kc = ref.transcription->grid().find_node(study.probe_x, 5e-5);
  PDECOL_REQUIRE(kc >= 0, InvalidConfig, "probe x is not a node of the spatial grid");
  const DecisionVector ref_v = unpack(ref.transcription->layout(), ref.report.z);
  const Eigen::VectorXd ref_line = ref_v.state.col(kc);

  ConvergenceReport rep;
  rep.norm = "linf-temporal";
  rep.probe = study.probe_x;
  rep.reference = std::to_string(fine.intervals) + " intervals x " + std::to_string(fine.points_per_interval) +
                  " points, " + std::to_string(fine.n_nodes) + " nodes";
  rep.all_converged = ref.report.converged();

  const double span = prob.tf - prob.t0;
  for (int nint : study.coarse_intervals) {
    RunConfig cc = study.base;
    cc.intervals = nint;
    cc.points_per_interval = study.points_per_interval;
    const BenchmarkRun run = solve_benchmark(prob, cc);
    rep.all_converged = rep.all_converged && run.report.converged();
    const DecisionVector v = unpack(run.transcription->layout(), run.report.z);
    const Eigen::VectorXd line = v.state.col(kc);
    const TemporalMesh& cm = run.transcription->mesh();
    const int per = 2 * study.points_per_interval;
    double err = 0.0;
    for (const auto& iv : cm.intervals) {
      for (int q = 0; q < per; ++q) {
        const double tau = iv.tau_left + (q + 0.5) / per * (iv.tau_right - iv.tau_left);
        err = std::max(err, std::abs(interpolate_in_time(cm, line, tau) -
                                     interpolate_in_time(ref.transcription->mesh(), ref_line, tau)));
      }
    }
    rep.h.push_back(span / nint);
    rep.error.push_back(err);
  }
  rep.slope = fit_slope(rep.h, rep.error, 10.0 * study.base.constraint_tolerance, &rep.fitted);
  return rep;
}

ConvergenceReport spatial_self_convergence(const SpatialStudy& study)
{
  PDECOL_REQUIRE(!study.coarse_elements.empty(), InvalidConfig, "no coarse meshes given");
  const int finest = *std::max_element(study.coarse_elements.begin(), study.coarse_elements.end());
  PDECOL_REQUIRE(study.reference_elements >= finest, InvalidConfig,
                 "reference grid must be at least as fine as every coarse grid");
  const int p = study.base.degree;

  RunConfig fine = study.base;
  fine.n_nodes = p * study.reference_elements + 1;
  const ProblemDefinition prob = study.problem ? *study.problem : problem_by_name(study.base.problem);
  const BenchmarkRun ref = solve_benchmark(prob, fine);
  const DecisionVector ref_v = unpack(ref.transcription->layout(), ref.report.z);
  const Eigen::VectorXd ref_final = ref_v.state.row(ref_v.state.rows() - 1).transpose();

  ConvergenceReport rep;
  rep.norm = "relative-l2-spatial";
  rep.probe = ref.transcription->mesh().tf;
  rep.reference = std::to_string(study.reference_elements) + " elements of degree " + std::to_string(p);
  rep.all_converged = ref.report.converged();
  const double scale = ref_final.cwiseAbs().maxCoeff();

  for (int nel : study.coarse_elements) {
    RunConfig cc = study.base;
    cc.n_nodes = p * nel + 1;
    const BenchmarkRun run = solve_benchmark(prob, cc);
    rep.all_converged = rep.all_converged && run.report.converged();
    const DecisionVector v = unpack(run.transcription->layout(), run.report.z);
    const auto& grid = run.transcription->grid();
    double sum = 0.0;
    for (int k = 0; k < grid.n_nodes(); ++k) {
      const double yf = evaluate_solution(ref.transcription->grid(), ref_final, grid.nodes[k]);
      if (std::abs(yf) <= 1e-14 * scale) {
        rep.excluded_nodes.push_back(k);
        continue;
      }
      const double rel = (yf - v.state(v.state.rows() - 1, k)) / yf;
      sum += rel * rel;
    }
    rep.h.push_back(1.0 / nel);
    rep.error.push_back(std::sqrt(sum / grid.n_nodes()));
  }
  rep.slope = fit_slope(rep.h, rep.error, 10.0 * study.base.constraint_tolerance, &rep.fitted);
  return rep;
}

void write_convergence(const std::string& dir, const std::string& stem, const ConvergenceReport& report)
{
  {
    auto os = open_output(dir, stem + ".csv");
    os << "h,error,fitted\n";
    for (std::size_t i = 0; i < report.h.size(); ++i)
      os << fmt(report.h[i]) << ',' << fmt(report.error[i]) << ',' << (report.fitted[i] ? 1 : 0) << '\n';
  }
  nlohmann::ordered_json j;
  j["norm"] = report.norm;
  j["probe"] = report.probe;
  j["slope"] = std::isfinite(report.slope) ? nlohmann::ordered_json(report.slope) : nlohmann::ordered_json(nullptr);
  j["reference"] = report.reference;
  j["h"] = report.h;
  j["error"] = report.error;
  j["excluded_nodes"] = report.excluded_nodes;
  j["all_converged"] = report.all_converged;
  auto os = open_output(dir, stem + ".json");
  os << j.dump(2) << '\n';
}

std::string export_sparsity(const RunConfig& config)
{
  config.validate();
  const auto tr = build_transcription(problem_by_name(config.problem), config.mesh(), config.backend);
  auto os = open_output(config.out_dir, "jacobian.mtx");
  write_pattern_matrix_market(os, tr->jacobian_pattern());
  return (std::filesystem::path(config.out_dir) / "jacobian.mtx").string();
}

}  // namespace pdecol
