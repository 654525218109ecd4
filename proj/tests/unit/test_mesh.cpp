#include "pdecol/error.hpp"
#include "pdecol/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace pdecol;

TEST(TemporalMesh, CountsAndOffsets)
{
  const TemporalMesh m = uniform_temporal_mesh(0.0, 1.0, 3, 4);
  EXPECT_EQ(m.n_intervals(), 3);
  EXPECT_EQ(m.n_collocation, 12);
  EXPECT_EQ(m.n_support, 13);
  EXPECT_DOUBLE_EQ(m.mesh_points.front(), -1.0);
  EXPECT_DOUBLE_EQ(m.mesh_points.back(), 1.0);
  for (int j = 0; j < 3; ++j) {
    EXPECT_EQ(m.intervals[j].support_offset, 4 * j);
    EXPECT_EQ(m.intervals[j].collocation_offset, 4 * j);
  }
  // Flipped: every collocation point is a support point after the first.
  for (int i = 0; i < m.n_collocation; ++i) EXPECT_EQ(m.collocation_support[i], i + 1);
}

TEST(TemporalMesh, WeightsIntegrateTheHorizon)
{
  for (RadauKind kind : {RadauKind::Flipped, RadauKind::Standard}) {
    const TemporalMesh m = uniform_temporal_mesh(0.25, 2.0, 5, 3, kind);
    EXPECT_NEAR(m.omega().sum(), 1.75, 1e-13);
  }
  const std::vector<double> fr = {0.1, 0.6, 0.3};
  const std::vector<int> pts = {2, 5, 3};
  const TemporalMesh m = build_temporal_mesh(0.0, 3.0, fr, pts);
  EXPECT_NEAR(m.omega().sum(), 3.0, 1e-13);
  EXPECT_EQ(m.n_collocation, 10);
  // omega integrates t^2 exactly with enough points in each interval.
  const Eigen::VectorXd t = collocation_times(m);
  double q = 0.0;
  for (int i = 0; i < m.n_collocation; ++i) q += m.omega()[i] * t[i] * t[i];
  EXPECT_NEAR(q, 9.0, 1e-12);
}

TEST(TemporalMesh, TimesAreMonotoneAndEndpointsExact)
{
  const TemporalMesh m = uniform_temporal_mesh(0.0, 0.5, 4, 3);
  const Eigen::VectorXd ts = support_times(m);
  ASSERT_EQ(ts.size(), m.n_support);
  EXPECT_DOUBLE_EQ(ts[0], 0.0);
  EXPECT_DOUBLE_EQ(ts[m.n_support - 1], 0.5);
  for (int s = 1; s < m.n_support; ++s) EXPECT_GT(ts[s], ts[s - 1]);
  const Eigen::VectorXd tc = collocation_times(m);
  EXPECT_DOUBLE_EQ(tc[m.n_collocation - 1], 0.5);
}

TEST(TemporalMesh, GlobalDiffMatrixIsExactOnPolynomials)
{
  const int n = 4;
  const TemporalMesh m = uniform_temporal_mesh(0.0, 2.0, 3, n);
  const SparseRowMatrix d = assemble_global_diff_matrix(m);
  ASSERT_EQ(d.rows(), m.n_collocation);
  ASSERT_EQ(d.cols(), m.n_support);
  const Eigen::VectorXd tau(Eigen::Map<const Eigen::VectorXd>(m.support_tau.data(), m.n_support));
  const Eigen::VectorXd tauc(Eigen::Map<const Eigen::VectorXd>(m.collocation_tau.data(), m.n_collocation));
  for (int k = 0; k <= n; ++k) {
    const Eigen::VectorXd y = tau.array().pow(k);
    const Eigen::VectorXd dy = d * y;
    // D acts in local r; multiply by dtau/dr to get d/dtau.
    for (int i = 0; i < m.n_collocation; ++i) {
      const double exact = k == 0 ? 0.0 : k * std::pow(tauc[i], k - 1);
      EXPECT_NEAR(dy[i] / m.collocation_dtau_dr[i], exact, 1e-10) << k;
    }
  }
  // Shared boundary column between blocks.
  int shared = 0;
  for (int i = 0; i < m.n_collocation; ++i)
    if (d.coeff(i, n) != 0.0) ++shared;
  EXPECT_EQ(shared, 2 * n);
}

TEST(TemporalMesh, StandardKindLeavesLastSupportUncollocatedInEachInterval)
{
  const TemporalMesh m = uniform_temporal_mesh(0.0, 1.0, 2, 3, RadauKind::Standard);
  EXPECT_EQ(m.collocation_support.front(), 0);
  EXPECT_DOUBLE_EQ(m.collocation_tau.front(), -1.0);
  for (double tau : m.collocation_tau) EXPECT_LT(tau, 1.0);
}

TEST(TemporalMesh, InvalidInputsThrow)
{
  EXPECT_THROW(uniform_temporal_mesh(1.0, 1.0, 2, 3), InvalidConfig);
  EXPECT_THROW(uniform_temporal_mesh(0.0, 1.0, 0, 3), InvalidConfig);
  EXPECT_THROW(uniform_temporal_mesh(0.0, 1.0, 2, 0), InvalidConfig);
  const std::vector<double> bad = {0.5, 0.6};
  const std::vector<int> pts = {2, 2};
  EXPECT_THROW(build_temporal_mesh(0.0, 1.0, bad, pts), InvalidConfig);
  const std::vector<double> neg = {1.2, -0.2};
  EXPECT_THROW(build_temporal_mesh(0.0, 1.0, neg, pts), InvalidConfig);
}

TEST(SpatialGrid, NodeCountsAndElements)
{
  const SpatialGrid g1 = spatial_grid_from_nodes(34, 1);
  EXPECT_EQ(g1.n_nodes(), 34);
  EXPECT_EQ(g1.n_elements(), 33);
  EXPECT_NEAR(g1.element_width(5), 1.0 / 33, 1e-15);
  const SpatialGrid g2 = spatial_grid_from_nodes(25, 2);
  EXPECT_EQ(g2.n_elements(), 12);
  EXPECT_EQ(g2.elements[3][0], 6);
  EXPECT_EQ(g2.elements[3][1], 7);
  EXPECT_EQ(g2.elements[3][2], 8);
  EXPECT_DOUBLE_EQ(g2.nodes[24], 1.0);
}

TEST(SpatialGrid, FindNode)
{
  const SpatialGrid g = spatial_grid_from_nodes(68, 1);
  EXPECT_EQ(g.find_node(16.0 / 67), 16);
  EXPECT_EQ(g.find_node(0.2388), -1);
  EXPECT_EQ(g.find_node(0.2388, 5e-5), 16);
  EXPECT_EQ(g.find_node(0.0), 0);
  EXPECT_EQ(g.find_node(1.0), 67);
}

TEST(SpatialGrid, InvalidInputsThrow)
{
  EXPECT_THROW(spatial_grid_from_nodes(2, 1), InvalidConfig);
  EXPECT_THROW(spatial_grid_from_nodes(24, 2), InvalidConfig);
  EXPECT_THROW(spatial_grid_from_nodes(10, 3), InvalidConfig);
  EXPECT_THROW(build_spatial_grid(4, 2, 2), InvalidConfig);
  Eigen::VectorXd bad(4);
  bad << 0.0, 0.5, 0.4, 1.0;
  EXPECT_THROW(make_spatial_grid(bad, 1), InvalidConfig);
  Eigen::VectorXd short_span(3);
  short_span << 0.0, 0.5, 0.9;
  EXPECT_THROW(make_spatial_grid(short_span, 1), InvalidConfig);
}
