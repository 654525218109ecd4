#include "pdecol/derivatives.hpp"
#include "pdecol/error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

namespace pdecol {

namespace {

double flux_dy(const BoundaryCondition& bc)
{
  return bc.kind == BoundaryCondition::Kind::Robin ? bc.coefficient : 0.0;
}

double flux_du(const BoundaryCondition& bc)
{
  return bc.kind == BoundaryCondition::Kind::Robin ? -bc.coefficient : bc.coefficient;
}

double flux_value(const BoundaryCondition& bc, double y, double u)
{
  return bc.kind == BoundaryCondition::Kind::Neumann ? bc.coefficient * u
                                                     : bc.coefficient * (y - u);
}

}  // namespace

// ---------------------------------------------------------------------------
// Objective gradient

void FemTranscription::objective_state_gradient(const Eigen::VectorXd& z, int i, double t,
                                                double omega, Eigen::VectorXd& g) const
{
  const auto& obj = problem_.objective;
  const int s = mesh_.collocation_support[i];
  if (obj.kind == TrackingObjective::Kind::Distributed) {
    const int nloc = grid_.nodes_per_element();
    for (const auto& p : quad_) {
      double yh = 0.0;
      for (int a = 0; a < nloc; ++a) yh += p.phi[a] * z[layout_.state(s, p.dofs[a])];
      const double e = omega * p.weight * obj.state_weight * (yh - obj.target(p.x, t));
      for (int a = 0; a < nloc; ++a) g[layout_.state(s, p.dofs[a])] += e * p.phi[a];
    }
  } else {
    const int last = grid_.n_nodes() - 1;
    g[layout_.state(s, last)] +=
      omega * obj.state_weight * (z[layout_.state(s, last)] - obj.target(1.0, t));
  }
}

void FemTranscription::gradient(const Eigen::VectorXd& z, Eigen::VectorXd& g) const
{
  PDECOL_REQUIRE(z.size() == layout_.size(), DimensionMismatch, "decision vector length mismatch");
  g = Eigen::VectorXd::Zero(layout_.size());
  const double span = z[layout_.tf()] - z[layout_.t0()];
  const double gamma = problem_.objective.control_weight;
  for (int i = 0; i < mesh_.n_collocation; ++i) {
    const TimeData td = time_data(z, i);
    objective_state_gradient(z, i, td.t, td.omega, g);
    const int c = control_index(i);
    if (c >= 0) {
      if (layout_.has_u1) g[layout_.u1(c)] += td.omega * gamma * z[layout_.u1(c)];
      if (layout_.has_u2) g[layout_.u2(c)] += td.omega * gamma * z[layout_.u2(c)];
    }
    double dbr = 0.0;
    const double br = objective_bracket(z, i, td.t, &dbr);
    g[layout_.t0()] += -td.omega / span * br + td.omega * dbr * td.dt_dt0;
    g[layout_.tf()] += td.omega / span * br + td.omega * dbr * td.dt_dtf;
  }
}

// ---------------------------------------------------------------------------
// Constraint Jacobian

template <class Emit>
void FemTranscription::traverse_jacobian(const Eigen::VectorXd& z, Emit&& emit) const
{
  const int nx = grid_.n_nodes();
  const auto& cap = problem_.capacity;
  const auto& conv = problem_.convection;
  const auto& diff = problem_.diffusion;
  const double span = z[layout_.tf()] - z[layout_.t0()];

  for (int k = 0; k < nx; ++k) emit(k, layout_.state(0, k), 1.0);

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
    const bool u1_on = layout_.has_u1 && c >= 0;
    const bool u2_on = layout_.has_u2 && c >= 0;
    const double u1 = u1_on ? z[layout_.u1(c)] : 0.0;
    const double u2 = u2_on ? z[layout_.u2(c)] : 0.0;
    const Eigen::VectorXd load = load_at(i, td.t);
    Eigen::VectorXd load_dt;
    if (problem_.source_dt) load_dt = load_dt_at(i, td.t);

    for (int k = 0; k < nx; ++k) {
      const int row = dynamics_row(i, k);
      double spatial = 0.0;
      for (const auto& cp : coupling_[k]) {
        const int r = cp.node;
        const double y = yc[r];
        const double mc = cp.m * cap.d1(y);
        for (const auto& [n, d] : dt_rows_[i]) emit(row, layout_.state(n, r), mc * d);
        double local = cp.m * cap.d2(y) * ydot[r] + td.psi * cp.a * diff.d1(y);
        spatial += cp.a * diff.value(y);
        if (!conv.zero) {
          local += td.psi * cp.n * conv.d1(y);
          spatial += cp.n * conv.value(y);
        }
        emit(row, layout_.state(s, r), local);
      }

      double boundary = 0.0;
      if (k == nx - 1) {
        boundary += flux_value(problem_.right, yc[k], u2);
        if (problem_.right.kind == BoundaryCondition::Kind::Robin)
          emit(row, layout_.state(s, k), -td.psi * flux_dy(problem_.right));
        if (u2_on) emit(row, layout_.u2(c), -td.psi * flux_du(problem_.right));
      }
      if (k == 0) {
        boundary -= flux_value(problem_.left, yc[k], u1);
        if (problem_.left.kind == BoundaryCondition::Kind::Robin)
          emit(row, layout_.state(s, k), td.psi * flux_dy(problem_.left));
        if (u1_on) emit(row, layout_.u1(c), td.psi * flux_du(problem_.left));
      }

      // psi-scaled part of the residual, and the explicit time dependence of the load
      const double scaled = spatial - boundary - load[k];
      const double dload = load_dt.size() ? load_dt[k] : 0.0;
      emit(row, layout_.t0(), -td.psi / span * scaled - td.psi * dload * td.dt_dt0);
      emit(row, layout_.tf(), td.psi / span * scaled - td.psi * dload * td.dt_dtf);
    }
  }
}

void FemTranscription::jacobian_values(const Eigen::VectorXd& z, std::span<double> values) const
{
  PDECOL_REQUIRE(z.size() == layout_.size(), DimensionMismatch, "decision vector length mismatch");
  PDECOL_REQUIRE(values.size() == jac_pattern_.nnz(), DimensionMismatch,
                 "jacobian value buffer does not match the pattern");
  std::size_t pos = 0;
  traverse_jacobian(z, [&](int, int, double v) { values[pos++] = v; });
}

// ---------------------------------------------------------------------------
// Lagrangian Hessian, lower triangle

template <class Emit>
void FemTranscription::traverse_hessian(const Eigen::VectorXd& z, double objective_factor,
                                        const Eigen::VectorXd& multipliers, Emit&& emit) const
{
  const int nx = grid_.n_nodes();
  const auto& cap = problem_.capacity;
  const auto& conv = problem_.convection;
  const auto& diff = problem_.diffusion;
  const auto& obj = problem_.objective;
  const bool cap_nonlinear = !cap.linear;
  auto lower = [&](int a, int b, double v) {
    if (a >= b)
      emit(a, b, v);
    else
      emit(b, a, v);
  };

  Eigen::VectorXd ydot(nx), diag(nx), cross(nx);
  for (int i = 0; i < mesh_.n_collocation; ++i) {
    const int s = mesh_.collocation_support[i];
    const TimeData td = time_data(z, i);
    const double wobj = objective_factor * td.omega;

    if (obj.kind == TrackingObjective::Kind::Distributed) {
      for (int k = 0; k < nx; ++k) {
        for (const auto& cp : coupling_[k]) {
          if (cp.node <= k) lower(layout_.state(s, k), layout_.state(s, cp.node), wobj * obj.state_weight * cp.m);
        }
      }
    } else {
      const int last = nx - 1;
      lower(layout_.state(s, last), layout_.state(s, last), wobj * obj.state_weight);
    }
    const int c = control_index(i);
    if (c >= 0) {
      if (layout_.has_u1) lower(layout_.u1(c), layout_.u1(c), wobj * obj.control_weight);
      if (layout_.has_u2) lower(layout_.u2(c), layout_.u2(c), wobj * obj.control_weight);
    }

    double d_self = 0.0;
    for (const auto& [n, d] : dt_rows_[i]) {
      if (n == s) d_self = d;
    }
    for (int r = 0; r < nx; ++r) {
      double acc = 0.0;
      for (const auto& [n, d] : dt_rows_[i]) acc += d * z[layout_.state(n, r)];
      ydot[r] = acc;
    }
    diag.setZero();
    cross.setZero();
    for (int k = 0; k < nx; ++k) {
      const double lam = multipliers[dynamics_row(i, k)];
      for (const auto& cp : coupling_[k]) {
        const int r = cp.node;
        const double y = z[layout_.state(s, r)];
        double v = td.psi * cp.a * diff.d2(y);
        if (!conv.zero) v += td.psi * cp.n * conv.d2(y);
        if (cap_nonlinear) {
          v += cp.m * (cap.d3(y) * ydot[r] + 2.0 * cap.d2(y) * d_self);
          cross[r] += lam * cp.m * cap.d2(y);
        }
        diag[r] += lam * v;
      }
    }
    for (int r = 0; r < nx; ++r) {
      lower(layout_.state(s, r), layout_.state(s, r), diag[r]);
      if (!cap_nonlinear) continue;
      for (const auto& [n, d] : dt_rows_[i]) {
        if (n != s) lower(layout_.state(s, r), layout_.state(n, r), cross[r] * d);
      }
    }
  }
}

void FemTranscription::hessian_values(const Eigen::VectorXd& z, double objective_factor,
                                      const Eigen::VectorXd& multipliers,
                                      std::span<double> values) const
{
  PDECOL_REQUIRE(z.size() == layout_.size(), DimensionMismatch, "decision vector length mismatch");
  PDECOL_REQUIRE(multipliers.size() == n_constraints(), DimensionMismatch,
                 "multiplier vector length mismatch");
  PDECOL_REQUIRE(values.size() == hess_pattern_.nnz(), DimensionMismatch,
                 "hessian value buffer does not match the pattern");
  std::size_t pos = 0;
  traverse_hessian(z, objective_factor, multipliers, [&](int, int, double v) { values[pos++] = v; });
}

void FemTranscription::build_patterns()
{
  const Eigen::VectorXd z = default_initial_guess();
  jac_pattern_ = {n_constraints(), n_variables(), {}, {}};
  traverse_jacobian(z, [&](int r, int c, double) {
    jac_pattern_.rows.push_back(r);
    jac_pattern_.cols.push_back(c);
  });
  hess_pattern_ = {n_variables(), n_variables(), {}, {}};
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n_constraints());
  traverse_hessian(z, 1.0, ones, [&](int r, int c, double) {
    hess_pattern_.rows.push_back(r);
    hess_pattern_.cols.push_back(c);
  });
}

// ---------------------------------------------------------------------------
// Backend-independent helpers

Eigen::SparseMatrix<double> jacobian_matrix(const Transcription& tr, const Eigen::VectorXd& z)
{
  std::vector<double> v(tr.jacobian_pattern().nnz());
  tr.jacobian_values(z, v);
  return assemble(tr.jacobian_pattern(), v);
}

Eigen::SparseMatrix<double> hessian_matrix(const Transcription& tr, const Eigen::VectorXd& z,
                                           double objective_factor,
                                           const Eigen::VectorXd& multipliers)
{
  std::vector<double> v(tr.hessian_pattern().nnz());
  tr.hessian_values(z, objective_factor, multipliers, v);
  const Eigen::SparseMatrix<double> lower = assemble(tr.hessian_pattern(), v);
  Eigen::SparseMatrix<double> full = lower.selfadjointView<Eigen::Lower>();
  return full;
}

SparsityPattern unique_pattern(const SparsityPattern& pattern)
{
  std::vector<std::pair<int, int>> entries(pattern.nnz());
  for (std::size_t e = 0; e < pattern.nnz(); ++e) entries[e] = {pattern.rows[e], pattern.cols[e]};
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  SparsityPattern out{pattern.n_rows, pattern.n_cols, {}, {}};
  out.rows.reserve(entries.size());
  out.cols.reserve(entries.size());
  for (const auto& [r, c] : entries) {
    out.rows.push_back(r);
    out.cols.push_back(c);
  }
  return out;
}

double FdReport::worst() const
{
  double w = 0.0;
  for (const auto& b : blocks) w = std::max(w, b.max_error);
  return w;
}

const BlockError* FdReport::find(const std::string& block) const
{
  for (const auto& b : blocks) {
    if (b.block == block) return &b;
  }
  return nullptr;
}

namespace {

std::string column_block(const DecisionLayout& layout, int col)
{
  if (col < layout.n_state()) return "state";
  if (col == layout.t0() || col == layout.tf()) return "time";
  if (layout.has_u1 && col < layout.u1(0) + layout.n_controls_per_signal) return "u1";
  return "u2";
}

void record(std::vector<BlockError>& blocks, const std::string& name, double analytic, double fd,
            int row, int col)
{
  auto it = std::find_if(blocks.begin(), blocks.end(), [&](const BlockError& b) { return b.block == name; });
  if (it == blocks.end()) {
    blocks.push_back({name, 0.0, -1, -1});
    it = blocks.end() - 1;
  }
  const double err = std::abs(analytic - fd) / std::max(1.0, std::abs(fd));
  if (err > it->max_error || it->row < 0) {
    it->max_error = err;
    it->row = row;
    it->col = col;
  }
}

}  // namespace

FdReport fd_verify(const Transcription& tr, const Eigen::VectorXd& z, const FdOptions& options)
{
  const DecisionLayout& layout = tr.layout();
  const int n = tr.n_variables();
  const int m = tr.n_constraints();
  PDECOL_REQUIRE(z.size() == n, DimensionMismatch, "decision vector length mismatch");
  FdReport report;

  Eigen::VectorXd g;
  tr.gradient(z, g);
  const Eigen::MatrixXd jac = Eigen::MatrixXd(jacobian_matrix(tr, z));
  const SparsityPattern pattern = unique_pattern(tr.jacobian_pattern());
  std::vector<std::vector<int>> pattern_rows(n);
  for (std::size_t e = 0; e < pattern.nnz(); ++e) pattern_rows[pattern.cols[e]].push_back(pattern.rows[e]);

  Eigen::VectorXd lam = options.multipliers;
  if (lam.size() != m) {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    lam.resize(m);
    for (int r = 0; r < m; ++r) lam[r] = dist(rng);
  }
  Eigen::MatrixXd hess;
  if (options.check_hessian) hess = Eigen::MatrixXd(hessian_matrix(tr, z, options.objective_factor, lam));

  auto lagrangian_gradient = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd gx;
    tr.gradient(x, gx);
    return Eigen::VectorXd(options.objective_factor * gx + jacobian_matrix(tr, x).transpose() * lam);
  };

  Eigen::VectorXd zp = z, zm = z, cp, cm;
  for (int j = 0; j < n; ++j) {
    const double h = options.relative_step * std::max(1.0, std::abs(z[j]));
    zp[j] = z[j] + h;
    zm[j] = z[j] - h;
    const std::string cb = column_block(layout, j);

    const double gfd = (tr.objective(zp) - tr.objective(zm)) / (2.0 * h);
    record(report.blocks, "gradient/" + cb, g[j], gfd, 0, j);

    tr.constraints(zp, cp);
    tr.constraints(zm, cm);
    const Eigen::VectorXd col = (cp - cm) / (2.0 * h);
    auto& in_pattern = pattern_rows[j];
    for (int r = 0; r < m; ++r) {
      const std::string rb = r < tr.grid().n_nodes() ? "initial" : "dynamics";
      record(report.blocks, "jacobian/" + rb + ":" + cb, jac(r, j), col[r], r, j);
      if (std::abs(col[r]) > 1e-7 * std::max(1.0, col.cwiseAbs().maxCoeff()) &&
          std::find(in_pattern.begin(), in_pattern.end(), r) == in_pattern.end())
        ++report.outside_pattern;
    }

    const bool time_col = j == layout.t0() || j == layout.tf();
    if (options.check_hessian && !time_col) {
      const Eigen::VectorXd hcol = (lagrangian_gradient(zp) - lagrangian_gradient(zm)) / (2.0 * h);
      for (int r = 0; r < n; ++r) {
        if (r == layout.t0() || r == layout.tf()) continue;
        record(report.blocks, "hessian/" + column_block(layout, r) + ":" + cb, hess(r, j), hcol[r], r, j);
      }
    }
    zp[j] = z[j];
    zm[j] = z[j];
  }
  return report;
}

void write_pattern_matrix_market(std::ostream& os, const SparsityPattern& pattern)
{
  const SparsityPattern u = unique_pattern(pattern);
  os << "%%MatrixMarket matrix coordinate pattern general\n";
  os << u.n_rows << ' ' << u.n_cols << ' ' << u.nnz() << '\n';
  for (std::size_t e = 0; e < u.nnz(); ++e) os << u.rows[e] + 1 << ' ' << u.cols[e] + 1 << '\n';
}

}  // namespace pdecol
