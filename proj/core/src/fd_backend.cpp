#include "pdecol/fd_backend.hpp"
#include "pdecol/error.hpp"

#include <cmath>

namespace pdecol {

FdOperators build_fd_operators(const SpatialGrid& grid)
{
  const int nx = grid.n_nodes();
  PDECOL_REQUIRE(nx >= 4, InvalidConfig, "finite differences need at least 4 nodes");
  const double h = grid.nodes[1] - grid.nodes[0];
  for (int k = 1; k < nx; ++k) {
    PDECOL_REQUIRE(std::abs(grid.nodes[k] - grid.nodes[k - 1] - h) <= 1e-12, InvalidConfig,
                   "finite differences need a uniform grid");
  }
  FdOperators ops;
  ops.spacing = h;
  std::vector<Eigen::Triplet<double>> d1, d2;
  for (int k = 1; k < nx - 1; ++k) {
    d1.emplace_back(k - 1, k - 1, -0.5 / h);
    d1.emplace_back(k - 1, k + 1, 0.5 / h);
    d2.emplace_back(k - 1, k - 1, 1.0 / (h * h));
    d2.emplace_back(k - 1, k, -2.0 / (h * h));
    d2.emplace_back(k - 1, k + 1, 1.0 / (h * h));
  }
  ops.first.resize(nx - 2, nx);
  ops.first.setFromTriplets(d1.begin(), d1.end());
  ops.second.resize(nx - 2, nx);
  ops.second.setFromTriplets(d2.begin(), d2.end());
  return ops;
}

FdTranscription::FdTranscription(TemporalMesh mesh, SpatialGrid grid, ProblemDefinition problem)
  : Transcription(std::move(mesh), std::move(grid), std::move(problem))
{
  ops_ = build_fd_operators(grid_);
  PDECOL_REQUIRE(problem_.capacity.linear && problem_.capacity.d1(0.0) == 1.0, InvalidConfig,
                 "finite difference backend needs unit capacity");
  PDECOL_REQUIRE(problem_.diffusion.linear && problem_.diffusion.d1(0.0) > 0.0, InvalidConfig,
                 "finite difference backend needs a constant positive diffusivity");
  PDECOL_REQUIRE(problem_.left.kind == BoundaryCondition::Kind::Neumann &&
                   problem_.right.kind == BoundaryCondition::Kind::Neumann,
                 InvalidConfig, "finite difference backend supports Neumann conditions only");
  PDECOL_REQUIRE(!problem_.source, InvalidConfig, "finite difference backend has no source term");
  diffusivity_ = problem_.diffusion.d1(0.0);
  left_gain_ = problem_.left.coefficient / diffusivity_;
  right_gain_ = problem_.right.coefficient / diffusivity_;

  const int nx = grid_.n_nodes();
  trapezoid_ = Eigen::VectorXd::Constant(nx, ops_.spacing);
  trapezoid_[0] = trapezoid_[nx - 1] = 0.5 * ops_.spacing;

  const SparseRowMatrix dt = assemble_global_diff_matrix(mesh_);
  dt_rows_.resize(mesh_.n_collocation);
  for (int i = 0; i < mesh_.n_collocation; ++i) {
    for (SparseRowMatrix::InnerIterator it(dt, i); it; ++it)
      dt_rows_[i].emplace_back(static_cast<int>(it.col()), it.value());
  }

  const Eigen::VectorXd z = default_initial_guess();
  jac_pattern_ = {n_constraints(), n_variables(), {}, {}};
  traverse_jacobian(z, [&](int r, int c, double) {
    jac_pattern_.rows.push_back(r);
    jac_pattern_.cols.push_back(c);
  });
  hess_pattern_ = {n_variables(), n_variables(), {}, {}};
  traverse_hessian(z, 1.0, Eigen::VectorXd::Ones(n_constraints()), [&](int r, int c, double) {
    hess_pattern_.rows.push_back(r);
    hess_pattern_.cols.push_back(c);
  });
}

double FdTranscription::psi(const Eigen::VectorXd& z, int i) const
{
  return 0.5 * (z[layout_.tf()] - z[layout_.t0()]) * mesh_.collocation_dtau_dr[i];
}

double FdTranscription::time_at(const Eigen::VectorXd& z, int i) const
{
  const double tau = mesh_.collocation_tau[i];
  const double t0 = z[layout_.t0()], tf = z[layout_.tf()];
  return tau == 1.0 ? tf : t0 + 0.5 * (tau + 1.0) * (tf - t0);
}

Eigen::MatrixXd FdTranscription::dynamics_residual(const Eigen::VectorXd& z) const
{
  PDECOL_REQUIRE(z.size() == layout_.size(), DimensionMismatch, "decision vector length mismatch");
  const int nx = grid_.n_nodes();
  const double h = ops_.spacing;
  const auto& conv = problem_.convection;
  Eigen::MatrixXd res(mesh_.n_collocation, nx);
  for (int i = 0; i < mesh_.n_collocation; ++i) {
    const int s = mesh_.collocation_support[i];
    const double ps = psi(z, i);
    auto y = [&](int k) { return z[layout_.state(s, k)]; };
    for (int k = 1; k < nx - 1; ++k) {
      double ydot = 0.0;
      for (const auto& [n, d] : dt_rows_[i]) ydot += d * z[layout_.state(n, k)];
      const double dx1 = (y(k + 1) - y(k - 1)) / (2.0 * h);
      const double dx2 = (y(k + 1) - 2.0 * y(k) + y(k - 1)) / (h * h);
      res(i, k) = ydot + ps * conv.d1(y(k)) * dx1 - diffusivity_ * ps * dx2;
    }
    const int c = control_index(i);
    const double u1 = (layout_.has_u1 && c >= 0) ? z[layout_.u1(c)] : 0.0;
    const double u2 = (layout_.has_u2 && c >= 0) ? z[layout_.u2(c)] : 0.0;
    res(i, 0) = y(0) - (4.0 * y(1) - y(2) - 2.0 * h * left_gain_ * u1) / 3.0;
    res(i, nx - 1) = y(nx - 1) - (4.0 * y(nx - 2) - y(nx - 3) + 2.0 * h * right_gain_ * u2) / 3.0;
  }
  return res;
}

void FdTranscription::constraints(const Eigen::VectorXd& z, Eigen::VectorXd& c) const
{
  const int nx = grid_.n_nodes();
  c.resize(n_constraints());
  c.head(nx) = initial_condition_residual(z);
  const Eigen::MatrixXd res = dynamics_residual(z);
  for (int i = 0; i < mesh_.n_collocation; ++i) {
    for (int k = 0; k < nx; ++k) c[dynamics_row(i, k)] = res(i, k);
  }
}

double FdTranscription::bracket(const Eigen::VectorXd& z, int i, double t, double* dbracket_dt) const
{
  const auto& obj = problem_.objective;
  const int s = mesh_.collocation_support[i];
  const int nx = grid_.n_nodes();
  double value = 0.0, dvalue = 0.0;
  if (obj.kind == TrackingObjective::Kind::Distributed) {
    for (int k = 0; k < nx; ++k) {
      const double x = grid_.nodes[k];
      const double e = z[layout_.state(s, k)] - obj.target(x, t);
      value += trapezoid_[k] * 0.5 * obj.state_weight * e * e;
      if (obj.target_dt) dvalue -= trapezoid_[k] * obj.state_weight * e * obj.target_dt(x, t);
    }
  } else {
    const double e = z[layout_.state(s, nx - 1)] - obj.target(1.0, t);
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

double FdTranscription::objective(const Eigen::VectorXd& z) const
{
  PDECOL_REQUIRE(z.size() == layout_.size(), DimensionMismatch, "decision vector length mismatch");
  double phi = 0.0;
  for (int i = 0; i < mesh_.n_collocation; ++i) {
    phi += psi(z, i) * mesh_.collocation_weight[i] * bracket(z, i, time_at(z, i), nullptr);
  }
  return phi;
}

void FdTranscription::gradient(const Eigen::VectorXd& z, Eigen::VectorXd& g) const
{
  PDECOL_REQUIRE(z.size() == layout_.size(), DimensionMismatch, "decision vector length mismatch");
  const auto& obj = problem_.objective;
  const int nx = grid_.n_nodes();
  const double span = z[layout_.tf()] - z[layout_.t0()];
  g = Eigen::VectorXd::Zero(layout_.size());
  for (int i = 0; i < mesh_.n_collocation; ++i) {
    const int s = mesh_.collocation_support[i];
    const double omega = psi(z, i) * mesh_.collocation_weight[i];
    const double t = time_at(z, i);
    if (obj.kind == TrackingObjective::Kind::Distributed) {
      for (int k = 0; k < nx; ++k) {
        g[layout_.state(s, k)] +=
          omega * trapezoid_[k] * obj.state_weight * (z[layout_.state(s, k)] - obj.target(grid_.nodes[k], t));
      }
    } else {
      g[layout_.state(s, nx - 1)] +=
        omega * obj.state_weight * (z[layout_.state(s, nx - 1)] - obj.target(1.0, t));
    }
    const int c = control_index(i);
    if (c >= 0) {
      if (layout_.has_u1) g[layout_.u1(c)] += omega * obj.control_weight * z[layout_.u1(c)];
      if (layout_.has_u2) g[layout_.u2(c)] += omega * obj.control_weight * z[layout_.u2(c)];
    }
    double dbr = 0.0;
    const double br = bracket(z, i, t, &dbr);
    const double tau = mesh_.collocation_tau[i];
    g[layout_.t0()] += -omega / span * br + omega * dbr * 0.5 * (1.0 - tau);
    g[layout_.tf()] += omega / span * br + omega * dbr * 0.5 * (1.0 + tau);
  }
}

template <class Emit>
void FdTranscription::traverse_jacobian(const Eigen::VectorXd& z, Emit&& emit) const
{
  const int nx = grid_.n_nodes();
  const double h = ops_.spacing;
  const auto& conv = problem_.convection;
  const double span = z[layout_.tf()] - z[layout_.t0()];

  for (int k = 0; k < nx; ++k) emit(k, layout_.state(0, k), 1.0);
  for (int i = 0; i < mesh_.n_collocation; ++i) {
    const int s = mesh_.collocation_support[i];
    const double ps = psi(z, i);
    auto y = [&](int k) { return z[layout_.state(s, k)]; };
    for (int k = 1; k < nx - 1; ++k) {
      const int row = dynamics_row(i, k);
      for (const auto& [n, d] : dt_rows_[i]) emit(row, layout_.state(n, k), d);
      const double dx1 = (y(k + 1) - y(k - 1)) / (2.0 * h);
      const double dx2 = (y(k + 1) - 2.0 * y(k) + y(k - 1)) / (h * h);
      const double kappa = conv.d1(y(k));
      emit(row, layout_.state(s, k - 1), -ps * kappa / (2.0 * h) - diffusivity_ * ps / (h * h));
      emit(row, layout_.state(s, k), ps * conv.d2(y(k)) * dx1 + 2.0 * diffusivity_ * ps / (h * h));
      emit(row, layout_.state(s, k + 1), ps * kappa / (2.0 * h) - diffusivity_ * ps / (h * h));
      const double spatial = kappa * dx1 - diffusivity_ * dx2;
      emit(row, layout_.t0(), -ps / span * spatial);
      emit(row, layout_.tf(), ps / span * spatial);
    }
    const int c = control_index(i);
    const int first = dynamics_row(i, 0);
    emit(first, layout_.state(s, 0), 1.0);
    emit(first, layout_.state(s, 1), -4.0 / 3.0);
    emit(first, layout_.state(s, 2), 1.0 / 3.0);
    if (layout_.has_u1 && c >= 0) emit(first, layout_.u1(c), 2.0 * h * left_gain_ / 3.0);
    const int last = dynamics_row(i, nx - 1);
    emit(last, layout_.state(s, nx - 1), 1.0);
    emit(last, layout_.state(s, nx - 2), -4.0 / 3.0);
    emit(last, layout_.state(s, nx - 3), 1.0 / 3.0);
    if (layout_.has_u2 && c >= 0) emit(last, layout_.u2(c), -2.0 * h * right_gain_ / 3.0);
  }
}

void FdTranscription::jacobian_values(const Eigen::VectorXd& z, std::span<double> values) const
{
  PDECOL_REQUIRE(z.size() == layout_.size(), DimensionMismatch, "decision vector length mismatch");
  PDECOL_REQUIRE(values.size() == jac_pattern_.nnz(), DimensionMismatch,
                 "jacobian value buffer does not match the pattern");
  std::size_t pos = 0;
  traverse_jacobian(z, [&](int, int, double v) { values[pos++] = v; });
}

template <class Emit>
void FdTranscription::traverse_hessian(const Eigen::VectorXd& z, double objective_factor,
                                       const Eigen::VectorXd& multipliers, Emit&& emit) const
{
  const int nx = grid_.n_nodes();
  const double h = ops_.spacing;
  const auto& conv = problem_.convection;
  const auto& obj = problem_.objective;
  for (int i = 0; i < mesh_.n_collocation; ++i) {
    const int s = mesh_.collocation_support[i];
    const double ps = psi(z, i);
    const double wobj = objective_factor * ps * mesh_.collocation_weight[i];
    for (int k = 0; k < nx; ++k) {
      double diag = 0.0;
      if (obj.kind == TrackingObjective::Kind::Distributed)
        diag += wobj * obj.state_weight * trapezoid_[k];
      else if (k == nx - 1)
        diag += wobj * obj.state_weight;
      if (!conv.zero && k > 0 && k < nx - 1) {
        const double lam = multipliers[dynamics_row(i, k)];
        const double dx1 = (z[layout_.state(s, k + 1)] - z[layout_.state(s, k - 1)]) / (2.0 * h);
        diag += lam * ps * conv.d3(z[layout_.state(s, k)]) * dx1;
        const double off = lam * ps * conv.d2(z[layout_.state(s, k)]) / (2.0 * h);
        // (s,k+1) > (s,k) > (s,k-1) in the column-major layout
        emit(layout_.state(s, k + 1), layout_.state(s, k), off);
        emit(layout_.state(s, k), layout_.state(s, k - 1), -off);
      }
      emit(layout_.state(s, k), layout_.state(s, k), diag);
    }
    const int c = control_index(i);
    if (c >= 0) {
      if (layout_.has_u1) emit(layout_.u1(c), layout_.u1(c), wobj * obj.control_weight);
      if (layout_.has_u2) emit(layout_.u2(c), layout_.u2(c), wobj * obj.control_weight);
    }
  }
}

void FdTranscription::hessian_values(const Eigen::VectorXd& z, double objective_factor,
                                     const Eigen::VectorXd& multipliers, std::span<double> values) const
{
  PDECOL_REQUIRE(z.size() == layout_.size(), DimensionMismatch, "decision vector length mismatch");
  PDECOL_REQUIRE(multipliers.size() == n_constraints(), DimensionMismatch,
                 "multiplier vector length mismatch");
  PDECOL_REQUIRE(values.size() == hess_pattern_.nnz(), DimensionMismatch,
                 "hessian value buffer does not match the pattern");
  std::size_t pos = 0;
  traverse_hessian(z, objective_factor, multipliers, [&](int, int, double v) { values[pos++] = v; });
}

}  // namespace pdecol
