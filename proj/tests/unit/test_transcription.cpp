#include "pdecol/error.hpp"
#include "pdecol/problems.hpp"
#include "pdecol/transcription.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace pdecol;

namespace {

MeshConfig small_mesh(int n, int j, int nx)
{
  MeshConfig m;
  m.points_per_interval = n;
  m.intervals = j;
  m.n_nodes = nx;
  return m;
}

}  // namespace

TEST(Layout, PackUnpackRoundTrip)
{
  DecisionLayout l;
  l.n_support = 4;
  l.n_nodes = 3;
  l.n_controls_per_signal = 3;
  l.has_u1 = true;
  l.has_u2 = true;
  EXPECT_EQ(l.size(), 12 + 6 + 2);
  EXPECT_EQ(l.state(2, 1), 6);
  EXPECT_EQ(l.u2(0), 15);
  DecisionVector v;
  v.state = Eigen::MatrixXd::Random(4, 3);
  v.u1 = Eigen::VectorXd::Random(3);
  v.u2 = Eigen::VectorXd::Random(3);
  v.t0 = 0.1;
  v.tf = 0.9;
  const Eigen::VectorXd z = pack(l, v);
  EXPECT_EQ(z[l.state(2, 1)], v.state(2, 1));
  EXPECT_EQ(z[l.u2(1)], v.u2[1]);
  const DecisionVector w = unpack(l, z);
  EXPECT_EQ(w.state, v.state);
  EXPECT_EQ(w.u1, v.u1);
  EXPECT_EQ(w.u2, v.u2);
  EXPECT_EQ(w.tf, 0.9);
  EXPECT_THROW(unpack(l, Eigen::VectorXd::Zero(5)), DimensionMismatch);
  v.u1.resize(2);
  EXPECT_THROW(pack(l, v), DimensionMismatch);
}

TEST(Layout, MissingControlTakesNoColumns)
{
  const auto tr = build_transcription(heat_problem(false), small_mesh(3, 2, 5));
  const DecisionLayout& l = tr->layout();
  EXPECT_TRUE(l.has_u1);
  EXPECT_FALSE(l.has_u2);
  EXPECT_EQ(tr->n_variables(), 7 * 5 + 6 + 2);
}

TEST(Transcription, SmallestMeshDimensions)
{
  const auto tr = build_transcription(burgers_problem(), small_mesh(1, 1, 3));
  EXPECT_EQ(tr->n_constraints(), 6);
  EXPECT_EQ(tr->n_variables(), 10);
  EXPECT_EQ(tr->dynamics_row(0, 2), 5);
  EXPECT_EQ(tr->control_index(0), 0);
}

TEST(Transcription, BoundsAndGuess)
{
  const auto tr = build_transcription(heat_problem(true), small_mesh(3, 2, 5));
  Eigen::VectorXd lo, hi;
  tr->bounds(lo, hi);
  const DecisionLayout& l = tr->layout();
  const Eigen::VectorXd tc = tr->control_times();
  for (int c = 0; c < l.n_controls_per_signal; ++c) {
    EXPECT_NEAR(hi[l.u1(c)], 0.05 * (1 + std::cos(4 * std::numbers::pi * tc[c])), 1e-15);
    EXPECT_LE(lo[l.u1(c)], -1e19);
  }
  EXPECT_EQ(lo[l.t0()], 0.0);
  EXPECT_EQ(hi[l.t0()], 0.0);
  EXPECT_EQ(lo[l.tf()], 0.5);
  EXPECT_EQ(hi[l.tf()], 0.5);
  const Eigen::VectorXd z = tr->default_initial_guess();
  EXPECT_LT(tr->initial_condition_residual(z).lpNorm<Eigen::Infinity>(), 1e-15);
  for (int j = 0; j < z.size(); ++j) {
    EXPECT_GE(z[j], lo[j]);
    EXPECT_LE(z[j], hi[j]);
  }
}

TEST(Kirchhoff, QuadraticPotential)
{
  Eigen::MatrixXd y(1, 2);
  y << 2.0, -3.0;
  const Eigen::MatrixXd b = kirchhoff_transform(y, ScalarMap::quadratic(0.0, 1.0));
  EXPECT_DOUBLE_EQ(b(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(b(0, 1), 4.5);
  const ScalarMap cap = ScalarMap::quadratic(4.0, 1.0);
  EXPECT_DOUBLE_EQ(cap.value(2.0), 10.0);
  EXPECT_DOUBLE_EQ(cap.d1(2.0), 6.0);
  EXPECT_DOUBLE_EQ(cap.d2(2.0), 1.0);
  EXPECT_FALSE(cap.linear);
  EXPECT_TRUE(ScalarMap::identity().linear);
  EXPECT_TRUE(ScalarMap::zero_map().zero);
}

TEST(FemResidual, ConstantStateWithoutControlIsStationary)
{
  const auto tr = build_transcription(burgers_problem(), small_mesh(4, 3, 9));
  const auto& fem = dynamic_cast<const FemTranscription&>(*tr);
  Eigen::VectorXd z = tr->default_initial_guess();
  const DecisionLayout& l = tr->layout();
  z.head(l.n_state()).setConstant(0.3);
  EXPECT_LT(fem.dynamics_residual(z).cwiseAbs().maxCoeff(), 1e-12);
  // A boundary control injects flux only through the boundary rows.
  z[l.u2(2)] = 0.01;
  const Eigen::MatrixXd r = fem.dynamics_residual(z);
  EXPECT_GT(std::abs(r(2, 8)), 1e-6);
  EXPECT_LT(r.col(0).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(r.middleCols(1, 7).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FemResidual, AffineInControls)
{
  const auto tr = build_transcription(heat_problem(false), small_mesh(3, 2, 7));
  Eigen::VectorXd c0, c1, c2;
  Eigen::VectorXd z = tr->default_initial_guess();
  const DecisionLayout& l = tr->layout();
  z[l.u1(1)] = -0.3;
  tr->constraints(z, c0);
  z[l.u1(1)] = 0.5;
  tr->constraints(z, c2);
  z[l.u1(1)] = 0.1;
  tr->constraints(z, c1);
  EXPECT_LT((c0 + c2 - 2 * c1).lpNorm<Eigen::Infinity>(), 1e-13);
}

TEST(FemResidual, ManufacturedHeatSolutionConverges)
{
  // y = 2 + e^{-t} cos(pi x) with u1(t) = y(0, t) solves the continuous problem.
  const auto exact = [](double x, double t) { return 2.0 + std::exp(-t) * std::cos(std::numbers::pi * x); };
  double prev = 0.0;
  for (int nx : {11, 21, 41}) {
    const auto tr = build_transcription(heat_problem(false), small_mesh(8, 2, nx));
    const auto& fem = dynamic_cast<const FemTranscription&>(*tr);
    const DecisionLayout& l = tr->layout();
    Eigen::VectorXd z = tr->default_initial_guess();
    const Eigen::VectorXd ts = support_times(tr->mesh());
    for (int s = 0; s < l.n_support; ++s)
      for (int k = 0; k < nx; ++k) z[l.state(s, k)] = exact(tr->grid().nodes[k], ts[s]);
    const Eigen::VectorXd tc = tr->control_times();
    for (int c = 0; c < l.n_controls_per_signal; ++c) z[l.u1(c)] = exact(0.0, tc[c]);
    // Residual rows are Galerkin-weighted; scale by the node spacing.
    const double err = fem.dynamics_residual(z).cwiseAbs().maxCoeff() * (nx - 1);
    if (prev > 0.0) EXPECT_LT(err, prev / 3.0) << nx;
    prev = err;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(FemObjective, ZeroStateDistributedTracking)
{
  const auto tr = build_transcription(burgers_problem(), small_mesh(3, 2, 9));
  Eigen::VectorXd z = tr->default_initial_guess();
  z.head(tr->layout().n_state()).setZero();
  EXPECT_NEAR(tr->objective(z), 0.5 * 0.035 * 0.035, 1e-15);
  // Control penalty adds sigma/2 int u^2 with constant u.
  const DecisionLayout& l = tr->layout();
  for (int c = 0; c < l.n_controls_per_signal; ++c) z[l.u1(c)] = 0.01;
  EXPECT_NEAR(tr->objective(z), 0.5 * 0.035 * 0.035 + 0.5 * 0.01 * 1e-4, 1e-15);
}

TEST(FemObjective, BoundaryTrackingIntegratesTarget)
{
  const auto tr = build_transcription(heat_problem(false), small_mesh(6, 3, 5));
  Eigen::VectorXd z = tr->default_initial_guess();
  z.head(tr->layout().n_state()).setZero();
  // 1/2 int_0^0.5 (2 - e^{-t})^2 dt
  const double t = 0.5;
  const double exact = 0.5 * (4 * t + 4 * (std::exp(-t) - 1) + 0.5 * (1 - std::exp(-2 * t)));
  EXPECT_NEAR(tr->objective(z), exact, 1e-10);
}

TEST(Transcription, HorizonMismatchThrows)
{
  ProblemDefinition p = burgers_problem();
  EXPECT_THROW(FemTranscription(uniform_temporal_mesh(0.0, 2.0, 1, 2), spatial_grid_from_nodes(5, 1), p),
               InvalidConfig);
}
