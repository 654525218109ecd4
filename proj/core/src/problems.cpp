#include "pdecol/problems.hpp"
#include "pdecol/derivatives.hpp"
#include "pdecol/error.hpp"
#include "pdecol/fd_backend.hpp"

#include <cmath>
#include <numbers>

namespace pdecol {

ProblemDefinition burgers_problem()
{
  using namespace burgers;
  ProblemDefinition p;
  p.name = "burgers";
  p.t0 = 0.0;
  p.tf = kFinalTime;
  p.capacity = ScalarMap::identity();
  p.convection = ScalarMap::quadratic(0.0, 1.0);  // beta(s) = s^2/2
  p.diffusion = ScalarMap::quadratic(kViscosity, 0.0);
  p.left = {BoundaryCondition::Kind::Neumann, kViscosity, true};
  p.right = {BoundaryCondition::Kind::Neumann, kViscosity, true};
  p.initial_state = [](double x) { return x * x * (1.0 - x) * (1.0 - x); };
  p.objective.kind = TrackingObjective::Kind::Distributed;
  p.objective.state_weight = 1.0;
  p.objective.control_weight = kControlWeight;
  p.objective.target = [](double, double) { return kTarget; };
  p.control_lower = kControlMin;
  p.control_upper = kControlMax;
  p.objective_scale = 1e4;
  return p;
}

ProblemDefinition heat_problem(bool constrained)
{
  using namespace heat;
  constexpr double pi = std::numbers::pi;
  constexpr double a1 = kCapacityConst, a2 = kCapacitySlope;
  constexpr double a3 = kConductivityConst, a4 = kConductivitySlope;
  constexpr double rho = kRate;
  // Source manufactured so that y = 2 + e^{rho t} cos(pi x) solves the PDE.
  constexpr double lin = rho * (a1 + 2.0 * a2) + pi * pi * (a3 + 2.0 * a4);
  constexpr double quad = 2.0 * a4 * pi * pi + rho * a2;

  ProblemDefinition p;
  p.name = constrained ? "heat-constrained" : "heat";
  p.t0 = 0.0;
  p.tf = kFinalTime;
  p.capacity = ScalarMap::quadratic(a1, a2);
  p.convection = ScalarMap::zero_map();
  p.diffusion = ScalarMap::quadratic(a3, a4);
  p.left = {BoundaryCondition::Kind::Robin, kRobin, true};
  p.right = {BoundaryCondition::Kind::Neumann, 0.0, false};
  p.initial_state = [](double x) { return 2.0 + std::cos(pi * x); };
  p.source = [](double x, double t) {
    const double c = std::cos(pi * x);
    const double e1 = std::exp(rho * t), e2 = std::exp(2.0 * rho * t);
    return lin * e1 * c - a4 * pi * pi * e2 + quad * e2 * c * c;
  };
  p.source_dt = [](double x, double t) {
    const double c = std::cos(pi * x);
    const double e1 = std::exp(rho * t), e2 = std::exp(2.0 * rho * t);
    return rho * lin * e1 * c + 2.0 * rho * (-a4 * pi * pi * e2 + quad * e2 * c * c);
  };
  p.objective.kind = TrackingObjective::Kind::RightBoundary;
  p.objective.state_weight = 1.0;
  p.objective.control_weight = kControlWeight;
  p.objective.target = [](double, double t) { return 2.0 - std::exp(rho * t); };
  p.objective.target_dt = [](double, double t) { return -rho * std::exp(rho * t); };
  p.control_lower = kControlMin;
  p.control_upper = kControlMax;
  if (constrained) {
    p.control_upper_profile = [](double t) { return kControlMax * 0.5 * (1.0 + std::cos(4.0 * pi * t)); };
  }
  p.objective_scale = 1e4;
  return p;
}

ProblemDefinition problem_by_name(const std::string& name)
{
  if (name == "burgers") return burgers_problem();
  if (name == "heat") return heat_problem(false);
  if (name == "heat-constrained") return heat_problem(true);
  throw InvalidConfig("unknown problem '" + name + "' (expected burgers, heat or heat-constrained)");
}

std::unique_ptr<Transcription> build_transcription(const ProblemDefinition& problem,
                                                   const MeshConfig& mesh, Backend backend)
{
  PDECOL_REQUIRE(mesh.points_per_interval >= 1 && mesh.intervals >= 1, InvalidConfig,
                 "temporal mesh needs at least one interval with one point");
  TemporalMesh tm = uniform_temporal_mesh(problem.t0, problem.tf, mesh.intervals,
                                          mesh.points_per_interval, mesh.kind);
  if (backend == Backend::Fd) {
    PDECOL_REQUIRE(mesh.degree == 1, InvalidConfig, "the finite difference backend has no element degree");
    return std::make_unique<FdTranscription>(std::move(tm), spatial_grid_from_nodes(mesh.n_nodes, 1),
                                             problem);
  }
  return std::make_unique<FemTranscription>(
    std::move(tm), spatial_grid_from_nodes(mesh.n_nodes, mesh.degree, mesh.quad_points), problem);
}

std::vector<int> empty_jacobian_columns(const Transcription& tr)
{
  std::vector<char> used(tr.n_variables(), 0);
  for (int c : tr.jacobian_pattern().cols) used[c] = 1;
  std::vector<int> empty;
  for (int j = 0; j < tr.n_variables(); ++j) {
    if (!used[j]) empty.push_back(j);
  }
  return empty;
}

std::string variable_label(const DecisionLayout& layout, int index)
{
  if (index < layout.n_state()) {
    return "y[" + std::to_string(index % layout.n_support) + "," +
           std::to_string(index / layout.n_support) + "]";
  }
  if (index == layout.t0()) return "t0";
  if (index == layout.tf()) return "tf";
  const int off = index - layout.n_state();
  if (layout.has_u1 && off < layout.n_controls_per_signal) return "u1[" + std::to_string(off) + "]";
  const int c = layout.has_u1 ? off - layout.n_controls_per_signal : off;
  return "u2[" + std::to_string(c) + "]";
}

RadauComparison compare_radau(const ProblemDefinition& problem, const MeshConfig& mesh)
{
  MeshConfig flipped = mesh, standard = mesh;
  flipped.kind = RadauKind::Flipped;
  standard.kind = RadauKind::Standard;
  const auto a = build_transcription(problem, flipped);
  const auto b = build_transcription(problem, standard);
  RadauComparison r;
  r.columns_flipped = a->n_variables();
  r.columns_standard = b->n_variables();
  r.empty_columns_flipped = empty_jacobian_columns(*a);
  r.empty_columns_standard = empty_jacobian_columns(*b);
  for (int j : r.empty_columns_standard) r.empty_labels_standard.push_back(variable_label(b->layout(), j));
  return r;
}

}  // namespace pdecol
