#include "pdecol/error.hpp"
#include "pdecol/transcription.hpp"

#include <string>

namespace pdecol {

namespace {

double boundary_flux(const BoundaryCondition& bc, double y, double u)
{
  return bc.kind == BoundaryCondition::Kind::Neumann ? bc.coefficient * u
                                                     : bc.coefficient * (y - u);
}

}  // namespace

FemTranscription::FemTranscription(TemporalMesh mesh, SpatialGrid grid, ProblemDefinition problem)
  : Transcription(std::move(mesh), std::move(grid), std::move(problem))
{
  ops_ = assemble_operators(grid_);
  dt_ = assemble_global_diff_matrix(mesh_);
  quad_ = spatial_quadrature(grid_);

  coupling_.resize(grid_.n_nodes());
  for (int k = 0; k < grid_.n_nodes(); ++k) {
    for (int r : ops_.coupling[k]) {
      coupling_[k].push_back({r, ops_.M.coeff(k, r), ops_.N.coeff(k, r), ops_.A.coeff(k, r)});
    }
  }
  dt_rows_.resize(mesh_.n_collocation);
  for (int i = 0; i < mesh_.n_collocation; ++i) {
    for (SparseRowMatrix::InnerIterator it(dt_, i); it; ++it) {
      dt_rows_[i].emplace_back(static_cast<int>(it.col()), it.value());
    }
  }

  nominal_times_ = collocation_times(mesh_);
  nominal_loads_.resize(mesh_.n_collocation);
  for (int i = 0; i < mesh_.n_collocation; ++i) {
    nominal_loads_[i] = assemble_load(grid_, problem_.source, nominal_times_[i]);
  }
  build_patterns();
}

FemTranscription::TimeData FemTranscription::time_data(const Eigen::VectorXd& z, int i) const
{
  const double t0 = z[layout_.t0()];
  const double tf = z[layout_.tf()];
  const double tau = mesh_.collocation_tau[i];
  TimeData d;
  d.psi = 0.5 * (tf - t0) * mesh_.collocation_dtau_dr[i];
  d.omega = d.psi * mesh_.collocation_weight[i];
  d.t = (tau == 1.0) ? tf : t0 + 0.5 * (tau + 1.0) * (tf - t0);
  d.dt_dt0 = 0.5 * (1.0 - tau);
  d.dt_dtf = 0.5 * (1.0 + tau);
  return d;
}

Eigen::VectorXd FemTranscription::load_at(int i, double t) const
{
  if (t == nominal_times_[i]) return nominal_loads_[i];
  return assemble_load(grid_, problem_.source, t);
}

Eigen::VectorXd FemTranscription::load_dt_at(int, double t) const
{
  return assemble_load(grid_, problem_.source_dt, t);
}

Eigen::MatrixXd FemTranscription::dynamics_residual(const Eigen::VectorXd& z) const
{
  PDECOL_REQUIRE(z.size() == layout_.size(), DimensionMismatch,
                 "decision vector has length " + std::to_string(z.size()) + ", expected " +
                   std::to_string(layout_.size()));
  const int nx = grid_.n_nodes();
  const auto& cap = problem_.capacity;
  const auto& conv = problem_.convection;
  const auto& diff = problem_.diffusion;
  Eigen::MatrixXd res(mesh_.n_collocation, nx);
  Eigen::VectorXd ydot(nx), yc(nx);

  for (int i = 0; i < mesh_.n_collocation; ++i) {
    const int s = mesh_.collocation_support[i];
    const TimeData td = time_data(z, i);
    for (int r = 0; r < nx; ++r) {
      double acc = 0.0;
      for (const auto& [n, d] : dt_rows_[i]) acc += d * z[layout_.state(n, r)];
      ydot[r] = acc;
      yc[r] = z[layout_.state(s, r)];
    }
    const int c = control_index(i);
    const double u1 = (layout_.has_u1 && c >= 0) ? z[layout_.u1(c)] : 0.0;
    const double u2 = (layout_.has_u2 && c >= 0) ? z[layout_.u2(c)] : 0.0;
    const Eigen::VectorXd load = load_at(i, td.t);

    for (int k = 0; k < nx; ++k) {
      double v = 0.0;
      for (const auto& cp : coupling_[k]) {
        const double y = yc[cp.node];
        v += cp.m * cap.d1(y) * ydot[cp.node];
        double spatial = cp.a * diff.value(y);
        if (!conv.zero) spatial += cp.n * conv.value(y);
        v += td.psi * spatial;
      }
      double boundary = 0.0;
      if (k == nx - 1) boundary += boundary_flux(problem_.right, yc[k], u2);
      if (k == 0) boundary -= boundary_flux(problem_.left, yc[k], u1);
      v -= td.psi * (boundary + load[k]);
      res(i, k) = v;
    }
  }
  return res;
}

void FemTranscription::constraints(const Eigen::VectorXd& z, Eigen::VectorXd& c) const
{
  const int nx = grid_.n_nodes();
  c.resize(n_constraints());
  c.head(nx) = initial_condition_residual(z);
  const Eigen::MatrixXd res = dynamics_residual(z);
  for (int i = 0; i < mesh_.n_collocation; ++i) {
    for (int k = 0; k < nx; ++k) c[dynamics_row(i, k)] = res(i, k);
  }
}

double FemTranscription::objective_bracket(const Eigen::VectorXd& z, int i, double t,
                                           double* dbracket_dt) const
{
  const auto& obj = problem_.objective;
  const int s = mesh_.collocation_support[i];
  const int nloc = grid_.nodes_per_element();
  double value = 0.0, dvalue = 0.0;

  if (obj.kind == TrackingObjective::Kind::Distributed) {
    for (const auto& p : quad_) {
      double yh = 0.0;
      for (int a = 0; a < nloc; ++a) yh += p.phi[a] * z[layout_.state(s, p.dofs[a])];
      const double e = yh - obj.target(p.x, t);
      value += p.weight * 0.5 * obj.state_weight * e * e;
      if (obj.target_dt) dvalue -= p.weight * obj.state_weight * e * obj.target_dt(p.x, t);
    }
  } else {
    const double e = z[layout_.state(s, grid_.n_nodes() - 1)] - obj.target(1.0, t);
    value += 0.5 * obj.state_weight * e * e;
    if (obj.target_dt) dvalue -= obj.state_weight * e * obj.target_dt(1.0, t);
  }

  const int c = control_index(i);
  if (c >= 0) {
    if (layout_.has_u1) value += 0.5 * obj.control_weight * z[layout_.u1(c)] * z[layout_.u1(c)];
    if (layout_.has_u2) value += 0.5 * obj.control_weight * z[layout_.u2(c)] * z[layout_.u2(c)];
  }
  if (dbracket_dt) *dbracket_dt = dvalue;
  return value;
}

double FemTranscription::objective(const Eigen::VectorXd& z) const
{
  PDECOL_REQUIRE(z.size() == layout_.size(), DimensionMismatch, "decision vector length mismatch");
  double phi = 0.0;
  for (int i = 0; i < mesh_.n_collocation; ++i) {
    const TimeData td = time_data(z, i);
    phi += td.omega * objective_bracket(z, i, td.t, nullptr);
  }
  return phi;
}

}  // namespace pdecol
