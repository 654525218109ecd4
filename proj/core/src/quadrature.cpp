#include "pdecol/quadrature.hpp"

#include "pdecol/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pdecol {

namespace {

constexpr double kRootTolerance = 1e-14;
constexpr int kMaxNewtonIterations = 100;

}  // namespace

std::pair<double, double> legendre_eval_with_derivative(int n, double r)
{
  PDECOL_REQUIRE(n >= 0, InvalidConfig, "legendre degree must be non-negative");
  if (n == 0) return {1.0, 0.0};
  double p_prev = 1.0, p = r;
  double dp_prev = 0.0, dp = 1.0;
  for (int k = 1; k < n; ++k) {
    const double p_next = ((2.0 * k + 1.0) * r * p - k * p_prev) / (k + 1.0);
    // P'_{k+1} = P'_{k-1} + (2k+1) P_k
    const double dp_next = dp_prev + (2.0 * k + 1.0) * p;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
  }
  return {p, dp};
}

double legendre_eval(int n, double r) { return legendre_eval_with_derivative(n, r).first; }

RadauRule standard_lgr_rule(int n)
{
  PDECOL_REQUIRE(n >= 1, InvalidConfig, "Radau rule needs at least one point");
  RadauRule rule;
  rule.n_points = n;
  rule.flipped = false;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.nodes[0] = -1.0;

  // Interior roots of P_{n-1} + P_n, Newton from Chebyshev-Gauss-Radau guesses.
  for (int i = 1; i < n; ++i) {
    double r = -std::cos(2.0 * std::numbers::pi * i / (2.0 * n - 1.0));
    bool converged = false;
    for (int it = 0; it < kMaxNewtonIterations; ++it) {
      const auto [pa, dpa] = legendre_eval_with_derivative(n - 1, r);
      const auto [pb, dpb] = legendre_eval_with_derivative(n, r);
      const double step = (pa + pb) / (dpa + dpb);
      r -= step;
      if (std::abs(step) < kRootTolerance) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw NumericalFailure("Radau root " + std::to_string(i) + " of n=" + std::to_string(n) +
                             " did not converge");
    }
    rule.nodes[i] = r;
  }
  std::sort(rule.nodes.begin(), rule.nodes.end());
  for (int i = 1; i < n; ++i) {
    if (!(rule.nodes[i] > rule.nodes[i - 1]) || rule.nodes[i] >= 1.0) {
      throw NumericalFailure("Radau root finding produced coincident or out-of-range nodes for n=" +
                             std::to_string(n));
    }
  }

  const double n2 = static_cast<double>(n) * n;
  rule.weights[0] = 2.0 / n2;
  for (int i = 1; i < n; ++i) {
    const double p = legendre_eval(n - 1, rule.nodes[i]);
    rule.weights[i] = (1.0 - rule.nodes[i]) / (n2 * p * p);
  }
  return rule;
}

RadauRule flipped_lgr_rule(int n)
{
  const RadauRule standard = standard_lgr_rule(n);
  RadauRule rule;
  rule.n_points = n;
  rule.flipped = true;
  rule.nodes = -standard.nodes.reverse();
  rule.weights = standard.weights.reverse();
  rule.nodes[n - 1] = 1.0;
  return rule;
}

Eigen::VectorXd barycentric_weights(std::span<const double> support)
{
  const auto m = static_cast<Eigen::Index>(support.size());
  Eigen::VectorXd w = Eigen::VectorXd::Ones(m);
  for (Eigen::Index n = 0; n < m; ++n) {
    for (Eigen::Index k = 0; k < m; ++k) {
      if (k == n) continue;
      const double diff = support[n] - support[k];
      PDECOL_REQUIRE(diff != 0.0, InvalidConfig, "duplicate Lagrange support points");
      w[n] /= diff;
    }
  }
  return w;
}

DiffMatrix lagrange_diff_matrix(std::span<const double> support, std::span<const double> eval)
{
  const auto m = static_cast<Eigen::Index>(support.size());
  const auto ne = static_cast<Eigen::Index>(eval.size());
  const Eigen::VectorXd bw = barycentric_weights(support);

  DiffMatrix d;
  d.support_points = Eigen::Map<const Eigen::VectorXd>(support.data(), m);
  d.eval_points = Eigen::Map<const Eigen::VectorXd>(eval.data(), ne);
  d.entries = Eigen::MatrixXd::Zero(ne, m);

  for (Eigen::Index i = 0; i < ne; ++i) {
    const double x = eval[i];
    Eigen::Index hit = -1;
    for (Eigen::Index n = 0; n < m; ++n) {
      if (support[n] == x) hit = n;
    }
    if (hit >= 0) {
      double diag = 0.0;
      for (Eigen::Index n = 0; n < m; ++n) {
        if (n == hit) continue;
        const double v = (bw[n] / bw[hit]) / (x - support[n]);
        d.entries(i, n) = v;
        diag -= v;
      }
      d.entries(i, hit) = diag;
    } else {
      // L_n'(x) = L_n(x) * sum_{k != n} 1 / (x - x_k)
      const Eigen::VectorXd basis = lagrange_basis(support, x);
      double total = 0.0;
      for (Eigen::Index k = 0; k < m; ++k) total += 1.0 / (x - support[k]);
      for (Eigen::Index n = 0; n < m; ++n) {
        d.entries(i, n) = basis[n] * (total - 1.0 / (x - support[n]));
      }
    }
  }
  return d;
}

Eigen::VectorXd lagrange_basis(std::span<const double> support, double query)
{
  const auto m = static_cast<Eigen::Index>(support.size());
  const Eigen::VectorXd bw = barycentric_weights(support);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
  for (Eigen::Index n = 0; n < m; ++n) {
    if (support[n] == query) {
      out[n] = 1.0;
      return out;
    }
  }
  double denom = 0.0;
  for (Eigen::Index n = 0; n < m; ++n) {
    out[n] = bw[n] / (query - support[n]);
    denom += out[n];
  }
  return out / denom;
}

double lagrange_interpolate(std::span<const double> support, std::span<const double> values,
                            double query)
{
  PDECOL_REQUIRE(support.size() == values.size(), DimensionMismatch,
                 "interpolation support and values differ in length");
  const Eigen::VectorXd bw = barycentric_weights(support);
  double num = 0.0, den = 0.0;
  for (std::size_t n = 0; n < support.size(); ++n) {
    if (support[n] == query) return values[n];
    const double c = bw[static_cast<Eigen::Index>(n)] / (query - support[n]);
    num += c * values[n];
    den += c;
  }
  return num / den;
}

}  // namespace pdecol
