// pdecol: transcribe and solve the boundary-control benchmarks.
//
//   pdecol solve --problem burgers --nt 5 --intervals 3 --nx 34 --out run1
//   pdecol converge-time --problem heat --nt 3 --coarse 2,4,8 --reference 32
//   pdecol sparsity --problem heat --nt 3 --intervals 2 --nx 5
//
// Any flag can also come from a key=value file given with --config; flags on
// the command line win.

#include "pdecol/error.hpp"
#include "pdecol/problems.hpp"
#include "pdecol/study.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 2;
constexpr int kExitInvalid = 3;

struct Options {
  pdecol::RunConfig run;
  std::string backend = "fem";
  std::string radau = "flipped";
  std::vector<int> coarse;
  int reference = 0;
  int reference_points = 0;
  double probe_x = std::numeric_limits<double>::quiet_NaN();
};

void finalize(Options& o)
{
  if (o.backend == "fem")
    o.run.backend = pdecol::Backend::Fem;
  else if (o.backend == "fd")
    o.run.backend = pdecol::Backend::Fd;
  else
    throw pdecol::InvalidConfig("backend must be fem or fd");
  if (o.radau == "flipped")
    o.run.kind = pdecol::RadauKind::Flipped;
  else if (o.radau == "standard")
    o.run.kind = pdecol::RadauKind::Standard;
  else
    throw pdecol::InvalidConfig("radau must be flipped or standard");
  // Full validation happens per verb; the studies override the node count.
  pdecol::problem_by_name(o.run.problem);
}

int run_solve(const Options& o)
{
  const auto start = std::chrono::steady_clock::now();
  const pdecol::BenchmarkRun run = pdecol::solve_benchmark(o.run);
  pdecol::write_benchmark_outputs(o.run, run);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto& r = run.report;
  std::cout << "status      " << pdecol::to_string(r.status) << '\n'
            << "objective   " << std::setprecision(8) << r.objective << '\n'
            << "violation   " << r.constraint_violation << '\n'
            << "optimality  " << r.optimality << '\n'
            << "iterations  " << r.iterations << '\n'
            << "wall time   " << std::setprecision(3) << secs << " s\n"
            << "output      " << o.run.out_dir << '\n';
  return r.converged() ? kExitOk : kExitNotConverged;
}

int report_convergence(const pdecol::ConvergenceReport& rep, const std::string& dir, const std::string& stem)
{
  pdecol::write_convergence(dir, stem, rep);
  std::cout << std::setw(14) << "h" << std::setw(16) << "error" << '\n';
  for (std::size_t i = 0; i < rep.h.size(); ++i) {
    std::cout << std::setw(14) << std::setprecision(6) << rep.h[i] << std::setw(16) << rep.error[i]
              << (rep.fitted[i] ? "" : "  (below floor)") << '\n';
  }
  std::cout << "slope " << std::setprecision(4) << rep.slope << "  reference: " << rep.reference << '\n';
  return rep.all_converged ? kExitOk : kExitNotConverged;
}

int run_converge_time(const Options& o)
{
  pdecol::TemporalStudy st;
  st.base = o.run;
  st.points_per_interval = o.run.points_per_interval;
  st.coarse_intervals = o.coarse.empty() ? std::vector<int>{2, 4, 8} : o.coarse;
  st.reference_intervals = o.reference > 0 ? o.reference : 4 * *std::max_element(st.coarse_intervals.begin(), st.coarse_intervals.end());
  st.reference_points = o.reference_points;
  st.probe_x = std::isnan(o.probe_x)
                 ? (o.run.problem == "burgers" ? pdecol::burgers::kProbeX : pdecol::heat::kProbeX)
                 : o.probe_x;
  return report_convergence(pdecol::temporal_self_convergence(st), o.run.out_dir, "converge_time");
}

int run_converge_space(const Options& o)
{
  pdecol::SpatialStudy st;
  st.base = o.run;
  st.coarse_elements = o.coarse.empty() ? std::vector<int>{4, 8, 16} : o.coarse;
  st.reference_elements = o.reference > 0 ? o.reference : 4 * *std::max_element(st.coarse_elements.begin(), st.coarse_elements.end());
  return report_convergence(pdecol::spatial_self_convergence(st), o.run.out_dir, "converge_space");
}

int run_sparsity(const Options& o)
{
  const std::string path = pdecol::export_sparsity(o.run);
  std::cout << "wrote " << path << '\n';
  return kExitOk;
}

int run_compare(const Options& o)
{
  o.run.validate();
  const auto cmp = pdecol::compare_radau(pdecol::problem_by_name(o.run.problem), o.run.mesh());
  std::cout << "flipped Radau:  " << cmp.columns_flipped << " columns, "
            << cmp.empty_columns_flipped.size() << " without Jacobian entries\n"
            << "standard Radau: " << cmp.columns_standard << " columns, "
            << cmp.empty_columns_standard.size() << " without Jacobian entries";
  for (const auto& l : cmp.empty_labels_standard) std::cout << ' ' << l;
  std::cout << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Radau collocation / Galerkin transcription of parabolic boundary-control problems"};
  app.set_config("--config", "", "key=value configuration file");
  app.require_subcommand(1, 1);

  Options o;
  app.add_option("--problem", o.run.problem, "burgers | heat | heat-constrained")->capture_default_str();
  app.add_option("--backend", o.backend, "fem | fd")->capture_default_str();
  app.add_option("--degree", o.run.degree, "element degree (1 or 2)")->capture_default_str();
  app.add_option("--nx", o.run.n_nodes, "spatial nodes")->capture_default_str();
  app.add_option("--nt", o.run.points_per_interval, "collocation points per interval")->capture_default_str();
  app.add_option("--intervals", o.run.intervals, "time intervals")->capture_default_str();
  app.add_option("--quad", o.run.quad_points, "quadrature points per element")->capture_default_str();
  app.add_option("--radau", o.radau, "flipped | standard")->capture_default_str();
  app.add_option("--tol", o.run.tolerance, "optimality tolerance")->capture_default_str();
  app.add_option("--constr-tol", o.run.constraint_tolerance, "feasibility tolerance")->capture_default_str();
  app.add_option("--max-iter", o.run.max_iterations, "iteration cap")->capture_default_str();
  app.add_option("--out", o.run.out_dir, "output directory")->capture_default_str();
  app.add_option("--coarse", o.coarse, "coarse interval or element counts")->delimiter(',');
  app.add_option("--reference", o.reference, "reference interval or element count");
  app.add_option("--reference-points", o.reference_points, "reference points per interval");
  app.add_option("--probe-x", o.probe_x, "x_c for temporal studies");

  auto* solve = app.add_subcommand("solve", "solve one benchmark and write CSV/JSON");
  auto* ctime = app.add_subcommand("converge-time", "temporal self-convergence study");
  auto* cspace = app.add_subcommand("converge-space", "spatial self-convergence study");
  auto* sparsity = app.add_subcommand("sparsity", "export the Jacobian pattern");
  auto* compare = app.add_subcommand("compare-lgr", "flipped vs standard Radau structure");
  for (auto* sc : {solve, ctime, cspace, sparsity, compare}) sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    finalize(o);
    if (*solve) return run_solve(o);
    if (*ctime) return run_converge_time(o);
    if (*cspace) return run_converge_space(o);
    if (*sparsity) return run_sparsity(o);
    if (*compare) return run_compare(o);
  } catch (const pdecol::InvalidConfig& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitInvalid;
}
