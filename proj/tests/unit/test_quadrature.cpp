#include "pdecol/error.hpp"
#include "pdecol/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace pdecol;

namespace {

std::vector<double> as_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

double monomial_integral(int k) { return (k % 2 == 1) ? 0.0 : 2.0 / (k + 1); }

}  // namespace

TEST(Legendre, LowOrderValues)
{
  EXPECT_DOUBLE_EQ(legendre_eval(0, 0.3), 1.0);
  EXPECT_DOUBLE_EQ(legendre_eval(1, 0.3), 0.3);
  EXPECT_NEAR(legendre_eval(2, 0.3), 0.5 * (3 * 0.09 - 1), 1e-15);
  EXPECT_NEAR(legendre_eval(3, -0.7), 0.5 * (5 * std::pow(-0.7, 3) - 3 * -0.7), 1e-15);
  const auto [p, dp] = legendre_eval_with_derivative(3, 0.4);
  EXPECT_NEAR(p, 0.5 * (5 * 0.064 - 1.2), 1e-15);
  EXPECT_NEAR(dp, 0.5 * (15 * 0.16 - 3), 1e-14);
}

TEST(Radau, ThreePointClosedForm)
{
  // Standard rule: -1, (1 -+ sqrt 6)/5 with weights 2/9, (16 +- sqrt 6)/18.
  const RadauRule s = standard_lgr_rule(3);
  const double r6 = std::sqrt(6.0);
  EXPECT_NEAR(s.nodes[0], -1.0, 1e-15);
  EXPECT_NEAR(s.nodes[1], (1 - r6) / 5, 1e-14);
  EXPECT_NEAR(s.nodes[2], (1 + r6) / 5, 1e-14);
  EXPECT_NEAR(s.weights[0], 2.0 / 9, 1e-14);
  EXPECT_NEAR(s.weights[1], (16 + r6) / 18, 1e-14);
  EXPECT_NEAR(s.weights[2], (16 - r6) / 18, 1e-14);

  const RadauRule f = flipped_lgr_rule(3);
  EXPECT_TRUE(f.flipped);
  EXPECT_NEAR(f.nodes[0], -(1 + r6) / 5, 1e-14);
  EXPECT_NEAR(f.nodes[1], -(1 - r6) / 5, 1e-14);
  EXPECT_DOUBLE_EQ(f.nodes[2], 1.0);
  EXPECT_NEAR(f.weights[2], 2.0 / 9, 1e-14);
}

TEST(Radau, FourPointAgainstNumpyRoots)
{
  const double nodes[] = {-1, -0.5753189235216936, 0.1810662711185306, 0.8228240809745921};
  const double weights[] = {0.125, 0.6576886399601173, 0.7763869376863435, 0.4409244223535354};
  const RadauRule s = standard_lgr_rule(4);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(s.nodes[i], nodes[i], 1e-14);
    EXPECT_NEAR(s.weights[i], weights[i], 1e-14);
  }
}

TEST(Radau, SinglePoint)
{
  const RadauRule f = flipped_lgr_rule(1);
  ASSERT_EQ(f.nodes.size(), 1);
  EXPECT_DOUBLE_EQ(f.nodes[0], 1.0);
  EXPECT_DOUBLE_EQ(f.weights[0], 2.0);
}

TEST(Radau, WeightsSumToTwoAndNodesInside)
{
  for (int n = 1; n <= 20; ++n) {
    const RadauRule f = flipped_lgr_rule(n);
    EXPECT_NEAR(f.weights.sum(), 2.0, 1e-13) << n;
    EXPECT_DOUBLE_EQ(f.nodes[n - 1], 1.0);
    for (int i = 0; i < n; ++i) {
      EXPECT_GT(f.nodes[i], -1.0);
      EXPECT_GT(f.weights[i], 0.0);
      if (i > 0) EXPECT_LT(f.nodes[i - 1], f.nodes[i]);
    }
  }
}

TEST(Radau, ExactToDegreeTwoNMinusTwo)
{
  for (int n = 1; n <= 12; ++n) {
    for (const RadauRule& rule : {standard_lgr_rule(n), flipped_lgr_rule(n)}) {
      for (int k = 0; k <= 2 * n - 2; ++k) {
        double q = 0.0;
        for (int i = 0; i < n; ++i) q += rule.weights[i] * std::pow(rule.nodes[i], k);
        EXPECT_NEAR(q, monomial_integral(k), 1e-12) << "n=" << n << " k=" << k;
      }
    }
  }
}

TEST(Radau, NotExactAtDegreeTwoNMinusOne)
{
  for (int n = 2; n <= 8; ++n) {
    const RadauRule f = flipped_lgr_rule(n);
    const int k = 2 * n - 1;
    double q = 0.0;
    for (int i = 0; i < n; ++i) q += f.weights[i] * std::pow(f.nodes[i], k);
    EXPECT_GT(std::abs(q - monomial_integral(k)), 1e-6) << n;
  }
}

TEST(Radau, RejectsZeroPoints)
{
  EXPECT_THROW(flipped_lgr_rule(0), InvalidConfig);
}

TEST(Barycentric, RejectsDuplicates)
{
  const std::vector<double> pts = {0.0, 0.5, 0.5};
  EXPECT_THROW(barycentric_weights(pts), InvalidConfig);
}

TEST(DiffMatrix, ExactForPolynomialsUpToSupportDegree)
{
  for (int n = 1; n <= 10; ++n) {
    const RadauRule f = flipped_lgr_rule(n);
    std::vector<double> support = {-1.0};
    for (int i = 0; i < n; ++i) support.push_back(f.nodes[i]);
    const std::vector<double> eval = as_vector(f.nodes);
    const DiffMatrix d = lagrange_diff_matrix(support, eval);
    ASSERT_EQ(d.entries.rows(), n);
    ASSERT_EQ(d.entries.cols(), n + 1);
    for (int k = 0; k <= n; ++k) {
      for (int i = 0; i < n; ++i) {
        double v = 0.0;
        for (int m = 0; m <= n; ++m) v += d.entries(i, m) * std::pow(support[m], k);
        const double exact = k == 0 ? 0.0 : k * std::pow(eval[i], k - 1);
        EXPECT_NEAR(v, exact, 1e-10) << "n=" << n << " k=" << k;
      }
    }
  }
}

TEST(DiffMatrix, RowsSumToZero)
{
  const std::vector<double> support = {-1.0, -0.2, 0.4, 1.0};
  const std::vector<double> eval = {-0.9, 0.0, 0.4, 1.0, 1.3};
  const DiffMatrix d = lagrange_diff_matrix(support, eval);
  for (int i = 0; i < d.entries.rows(); ++i) EXPECT_NEAR(d.entries.row(i).sum(), 0.0, 1e-13);
}

TEST(DiffMatrix, TwoPointLinear)
{
  const std::vector<double> support = {-1.0, 1.0};
  const std::vector<double> eval = {1.0};
  const DiffMatrix d = lagrange_diff_matrix(support, eval);
  EXPECT_NEAR(d.entries(0, 0), -0.5, 1e-15);
  EXPECT_NEAR(d.entries(0, 1), 0.5, 1e-15);
}

TEST(Lagrange, InterpolationReproducesPolynomialsAndData)
{
  const std::vector<double> support = {-1.0, -0.3, 0.2, 1.0};
  std::vector<double> values;
  for (double x : support) values.push_back(2 - x + 3 * x * x * x);
  for (double q : {-0.8, 0.0, 0.55, 0.99})
    EXPECT_NEAR(lagrange_interpolate(support, values, q), 2 - q + 3 * q * q * q, 1e-13);
  for (std::size_t i = 0; i < support.size(); ++i)
    EXPECT_EQ(lagrange_interpolate(support, values, support[i]), values[i]);
  const Eigen::VectorXd b = lagrange_basis(support, 0.37);
  EXPECT_NEAR(b.sum(), 1.0, 1e-14);
}
