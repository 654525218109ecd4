#include "pdecol/transcription.hpp"

#include "pdecol/error.hpp"

#include <algorithm>
#include <string>

namespace pdecol {

Eigen::VectorXd pack(const DecisionLayout& layout, const DecisionVector& v)
{
  PDECOL_REQUIRE(v.state.rows() == layout.n_support && v.state.cols() == layout.n_nodes,
                 DimensionMismatch, "state matrix does not match the layout");
  Eigen::VectorXd z(layout.size());
  z.head(layout.n_state()) = Eigen::Map<const Eigen::VectorXd>(v.state.data(), layout.n_state());
  if (layout.has_u1) {
    PDECOL_REQUIRE(v.u1.size() == layout.n_controls_per_signal, DimensionMismatch,
                   "u1 has the wrong length");
    z.segment(layout.u1(0), layout.n_controls_per_signal) = v.u1;
  }
  if (layout.has_u2) {
    PDECOL_REQUIRE(v.u2.size() == layout.n_controls_per_signal, DimensionMismatch,
                   "u2 has the wrong length");
    z.segment(layout.u2(0), layout.n_controls_per_signal) = v.u2;
  }
  z[layout.t0()] = v.t0;
  z[layout.tf()] = v.tf;
  return z;
}

DecisionVector unpack(const DecisionLayout& layout, const Eigen::Ref<const Eigen::VectorXd>& z)
{
  PDECOL_REQUIRE(z.size() == layout.size(), DimensionMismatch,
                 "decision vector has length " + std::to_string(z.size()) + ", layout expects " +
                   std::to_string(layout.size()));
  DecisionVector v;
  v.state = Eigen::Map<const Eigen::MatrixXd>(z.data(), layout.n_support, layout.n_nodes);
  if (layout.has_u1) v.u1 = z.segment(layout.u1(0), layout.n_controls_per_signal);
  if (layout.has_u2) v.u2 = z.segment(layout.u2(0), layout.n_controls_per_signal);
  v.t0 = z[layout.t0()];
  v.tf = z[layout.tf()];
  return v;
}

Eigen::SparseMatrix<double> assemble(const SparsityPattern& pattern, std::span<const double> values)
{
  PDECOL_REQUIRE(values.size() == pattern.nnz(), DimensionMismatch,
                 "value array does not match the sparsity pattern");
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(values.size());
  for (std::size_t e = 0; e < values.size(); ++e) {
    triplets.emplace_back(pattern.rows[e], pattern.cols[e], values[e]);
  }
  Eigen::SparseMatrix<double> m(pattern.n_rows, pattern.n_cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Transcription::Transcription(TemporalMesh mesh, SpatialGrid grid, ProblemDefinition problem)
  : mesh_(std::move(mesh)), grid_(std::move(grid)), problem_(std::move(problem))
{
  PDECOL_REQUIRE(mesh_.t0 == problem_.t0 && mesh_.tf == problem_.tf, InvalidConfig,
                 "temporal mesh horizon does not match the problem horizon");
  PDECOL_REQUIRE(static_cast<bool>(problem_.initial_state), InvalidConfig,
                 "problem has no initial state profile");
  layout_.n_support = mesh_.n_support;
  layout_.n_nodes = grid_.n_nodes();
  layout_.n_controls_per_signal = mesh_.n_collocation;
  layout_.has_u1 = problem_.left.has_control;
  layout_.has_u2 = problem_.right.has_control;
}

Eigen::VectorXd Transcription::initial_condition_residual(const Eigen::VectorXd& z) const
{
  PDECOL_REQUIRE(z.size() == layout_.size(), DimensionMismatch, "decision vector length mismatch");
  Eigen::VectorXd r(grid_.n_nodes());
  for (int k = 0; k < grid_.n_nodes(); ++k) {
    r[k] = z[layout_.state(0, k)] - problem_.initial_state(grid_.nodes[k]);
  }
  return r;
}

Eigen::VectorXd Transcription::control_times() const
{
  const Eigen::VectorXd ts = support_times(mesh_);
  return ts.tail(mesh_.n_collocation);
}

Eigen::VectorXd Transcription::default_initial_guess() const
{
  DecisionVector v;
  const Eigen::VectorXd ts = support_times(mesh_);
  v.state.resize(layout_.n_support, layout_.n_nodes);
  for (int k = 0; k < layout_.n_nodes; ++k) {
    const double y0 = problem_.initial_state(grid_.nodes[k]);
    for (int s = 0; s < layout_.n_support; ++s) {
      const double frac = (ts[s] - mesh_.t0) / (mesh_.tf - mesh_.t0);
      v.state(s, k) = y0 * (1.0 - frac);
    }
  }
  Eigen::VectorXd lo, hi;
  bounds(lo, hi);
  const int nc = layout_.n_controls_per_signal;
  if (layout_.has_u1) {
    v.u1.resize(nc);
    for (int c = 0; c < nc; ++c) v.u1[c] = std::clamp(0.0, lo[layout_.u1(c)], hi[layout_.u1(c)]);
  }
  if (layout_.has_u2) {
    v.u2.resize(nc);
    for (int c = 0; c < nc; ++c) v.u2[c] = std::clamp(0.0, lo[layout_.u2(c)], hi[layout_.u2(c)]);
  }
  v.t0 = mesh_.t0;
  v.tf = mesh_.tf;
  return pack(layout_, v);
}

void Transcription::bounds(Eigen::VectorXd& lower, Eigen::VectorXd& upper) const
{
  lower = Eigen::VectorXd::Constant(layout_.size(), -1e20);
  upper = Eigen::VectorXd::Constant(layout_.size(), 1e20);
  const Eigen::VectorXd tc = control_times();
  for (int c = 0; c < layout_.n_controls_per_signal; ++c) {
    double hi = problem_.control_upper;
    if (problem_.control_upper_profile) hi = std::min(hi, problem_.control_upper_profile(tc[c]));
    if (layout_.has_u1) {
      lower[layout_.u1(c)] = problem_.control_lower;
      upper[layout_.u1(c)] = hi;
    }
    if (layout_.has_u2) {
      lower[layout_.u2(c)] = problem_.control_lower;
      upper[layout_.u2(c)] = hi;
    }
  }
  lower[layout_.t0()] = upper[layout_.t0()] = mesh_.t0;
  lower[layout_.tf()] = upper[layout_.tf()] = mesh_.tf;
}

}  // namespace pdecol
