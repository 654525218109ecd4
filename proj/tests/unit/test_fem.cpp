#include "pdecol/error.hpp"
#include "pdecol/fem.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace pdecol;

namespace {

Eigen::MatrixXd dense(const SparseRowMatrix& m) { return Eigen::MatrixXd(m); }

}  // namespace

TEST(Shape, PartitionOfUnityAndNodalValues)
{
  for (int deg : {1, 2}) {
    for (double xi : {0.0, 0.2, 0.5, 0.77, 1.0}) {
      const ShapeValues s = shape_eval(deg, xi);
      double sum = 0.0, dsum = 0.0;
      for (int a = 0; a < s.count; ++a) {
        sum += s.values[a];
        dsum += s.derivatives[a];
      }
      EXPECT_NEAR(sum, 1.0, 1e-15);
      EXPECT_NEAR(dsum, 0.0, 1e-14);
    }
  }
  const ShapeValues mid = shape_eval(2, 0.5);
  EXPECT_DOUBLE_EQ(mid.values[0], 0.0);
  EXPECT_DOUBLE_EQ(mid.values[1], 1.0);
  EXPECT_DOUBLE_EQ(mid.values[2], 0.0);
  const ShapeValues p1 = shape_eval(1, 0.25);
  EXPECT_DOUBLE_EQ(p1.values[0], 0.75);
  EXPECT_DOUBLE_EQ(p1.derivatives[1], 1.0);
  EXPECT_THROW(shape_eval(3, 0.1), InvalidConfig);
}

TEST(Operators, LinearElementMatricesMatchClosedForm)
{
  const SpatialGrid g = build_spatial_grid(4, 1);
  const DiscreteOperators ops = assemble_operators(g);
  const double h = 0.25;
  const Eigen::MatrixXd m = dense(ops.M), n = dense(ops.N), a = dense(ops.A);
  // Interior row 2 sees two elements.
  EXPECT_NEAR(m(2, 2), 4 * h / 6, 1e-15);
  EXPECT_NEAR(m(2, 1), h / 6, 1e-15);
  EXPECT_NEAR(m(0, 0), 2 * h / 6, 1e-15);
  EXPECT_NEAR(a(2, 2), 2 / h, 1e-12);
  EXPECT_NEAR(a(2, 3), -1 / h, 1e-12);
  EXPECT_NEAR(a(0, 0), 1 / h, 1e-12);
  // N_ik = int phi_k' phi_i: on one element [-1/2 1/2; -1/2 1/2].
  EXPECT_NEAR(n(0, 0), -0.5, 1e-15);
  EXPECT_NEAR(n(0, 1), 0.5, 1e-15);
  EXPECT_NEAR(n(2, 2), 0.0, 1e-15);
  EXPECT_NEAR(n(2, 1), -0.5, 1e-15);
  EXPECT_NEAR(n(4, 4), 0.5, 1e-15);
  EXPECT_NEAR(m.sum(), 1.0, 1e-14);
}

TEST(Operators, QuadraticMassMatchesClosedForm)
{
  const SpatialGrid g = build_spatial_grid(2, 2);
  const DiscreteOperators ops = assemble_operators(g);
  const Eigen::MatrixXd m = dense(ops.M);
  const double h = 0.5;
  Eigen::Matrix3d ref;
  ref << 4, 2, -1, 2, 16, 2, -1, 2, 4;
  ref *= h / 30;
  EXPECT_NEAR((m.topLeftCorner(2, 2) - ref.topLeftCorner(2, 2)).norm(), 0.0, 1e-14);
  EXPECT_NEAR(m(1, 1), 16 * h / 30, 1e-14);
  EXPECT_NEAR(m(0, 2), -h / 30, 1e-14);
  EXPECT_NEAR(m(2, 2), 8 * h / 30, 1e-14);
  Eigen::Matrix3d stiff;
  stiff << 7, -8, 1, -8, 16, -8, 1, -8, 7;
  stiff /= 3 * h;
  const Eigen::MatrixXd a = dense(ops.A);
  EXPECT_NEAR((a.topLeftCorner(2, 2) - stiff.topLeftCorner(2, 2)).norm(), 0.0, 1e-12);
  EXPECT_NEAR(a(2, 2), 14 / (3 * h), 1e-12);
}

TEST(Operators, AnnihilateConstantsAndIntegrateLinears)
{
  for (int deg : {1, 2}) {
    const SpatialGrid g = build_spatial_grid(6, deg);
    const DiscreteOperators ops = assemble_operators(g);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.n_nodes());
    EXPECT_NEAR((ops.A * ones).norm(), 0.0, 1e-12);
    EXPECT_NEAR((ops.N * ones).norm(), 0.0, 1e-12);
    // sum_i int phi_i y' = int y' = y(1) - y(0) for y = x.
    const Eigen::VectorXd x = g.nodes;
    EXPECT_NEAR((ops.N * x).sum(), 1.0, 1e-13);
    // int x^2 via M.
    EXPECT_NEAR(x.dot(ops.M * x), 1.0 / 3, 1e-13);
    EXPECT_NEAR(x.dot(ops.A * x), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(ops.e_first[0], 1.0);
    EXPECT_DOUBLE_EQ(ops.e_last[g.n_nodes() - 1], 1.0);
    EXPECT_NEAR((dense(ops.M) - dense(ops.M).transpose()).norm(), 0.0, 1e-15);
    EXPECT_NEAR((dense(ops.A) - dense(ops.A).transpose()).norm(), 0.0, 1e-12);
  }
}

TEST(Operators, CouplingListsMatchElementConnectivity)
{
  const SpatialGrid g1 = build_spatial_grid(5, 1);
  const DiscreteOperators o1 = assemble_operators(g1);
  EXPECT_EQ(o1.coupling[0], (std::vector<int>{0, 1}));
  EXPECT_EQ(o1.coupling[2], (std::vector<int>{1, 2, 3}));
  const SpatialGrid g2 = build_spatial_grid(3, 2);
  const DiscreteOperators o2 = assemble_operators(g2);
  EXPECT_EQ(o2.coupling[1], (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(o2.coupling[2], (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(Load, IntegratesSmoothSource)
{
  const SpatialGrid g = build_spatial_grid(40, 2);
  const auto q = [](double x, double t) { return t * std::cos(std::numbers::pi * x); };
  const Eigen::VectorXd b = assemble_load(g, q, 2.0);
  // sum_i b_i = int q dx = 0, up to the element quadrature error.
  EXPECT_NEAR(b.sum(), 0.0, 1e-9);
  // x . b = int x q = 2 * (-2 / pi^2)
  EXPECT_NEAR(g.nodes.dot(b), -4.0 / (std::numbers::pi * std::numbers::pi), 1e-8);
  const Eigen::VectorXd none = assemble_load(g, {}, 0.0);
  EXPECT_EQ(none.size(), g.n_nodes());
  EXPECT_EQ(none.norm(), 0.0);
}

TEST(Evaluate, InterpolatesNodalCoefficients)
{
  const SpatialGrid g = build_spatial_grid(4, 2);
  Eigen::VectorXd c(g.n_nodes());
  for (int k = 0; k < g.n_nodes(); ++k) c[k] = 1 + g.nodes[k] * g.nodes[k];
  EXPECT_NEAR(evaluate_solution(g, c, 0.3), 1.09, 1e-14);
  EXPECT_NEAR(evaluate_solution(g, c, 1.0), 2.0, 1e-14);
  EXPECT_THROW(evaluate_solution(g, c, 1.5), OutOfDomain);
  EXPECT_THROW(evaluate_solution(g, Eigen::VectorXd::Zero(3), 0.5), DimensionMismatch);
}

TEST(Quadrature, WeightsSumToDomainLength)
{
  const SpatialGrid g = build_spatial_grid(7, 1, 4);
  const auto pts = spatial_quadrature(g);
  ASSERT_EQ(static_cast<int>(pts.size()), 28);
  double w = 0.0;
  for (const auto& p : pts) w += p.weight;
  EXPECT_NEAR(w, 1.0, 1e-14);
}
