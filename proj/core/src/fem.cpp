#include "pdecol/fem.hpp"

#include "pdecol/error.hpp"

#include <algorithm>
#include <string>

namespace pdecol {

ShapeValues shape_eval(int degree, double xi)
{
  ShapeValues s;
  if (degree == 1) {
    s.count = 2;
    s.values = {1.0 - xi, xi, 0.0};
    s.derivatives = {-1.0, 1.0, 0.0};
  } else if (degree == 2) {
    s.count = 3;
    s.values = {(1.0 - xi) * (1.0 - 2.0 * xi), 4.0 * xi * (1.0 - xi), xi * (2.0 * xi - 1.0)};
    s.derivatives = {4.0 * xi - 3.0, 4.0 - 8.0 * xi, 4.0 * xi - 1.0};
  } else {
    throw InvalidConfig("element degree " + std::to_string(degree) + " unsupported (1 or 2)");
  }
  return s;
}

std::vector<QuadraturePoint> spatial_quadrature(const SpatialGrid& grid)
{
  std::vector<QuadraturePoint> points;
  points.reserve(static_cast<std::size_t>(grid.total_quad_points()));
  const auto& rule = grid.element_rule;
  for (int e = 0; e < grid.n_elements(); ++e) {
    const auto& el = grid.elements[e];
    const double xa = grid.nodes[el[0]];
    const double h = grid.element_width(e);
    for (int q = 0; q < rule.n_points; ++q) {
      const double xi = 0.5 * (rule.nodes[q] + 1.0);
      const ShapeValues s = shape_eval(grid.degree, xi);
      QuadraturePoint p;
      p.element = e;
      p.x = xa + xi * h;
      p.weight = 0.5 * rule.weights[q] * h;
      for (int a = 0; a < s.count; ++a) {
        p.dofs[a] = el[a];
        p.phi[a] = s.values[a];
        p.dphi[a] = s.derivatives[a] / h;
      }
      points.push_back(p);
    }
  }
  return points;
}

DiscreteOperators assemble_operators(const SpatialGrid& grid)
{
  const int n = grid.n_nodes();
  const int nloc = grid.nodes_per_element();
  std::vector<Eigen::Triplet<double>> tm, tn, ta;

  // Element-local matrices scattered into global triplets.
  for (const auto& p : spatial_quadrature(grid)) {
    for (int a = 0; a < nloc; ++a) {
      for (int b = 0; b < nloc; ++b) {
        // row = test function a, column = trial function b
        tm.emplace_back(p.dofs[a], p.dofs[b], p.weight * p.phi[b] * p.phi[a]);
        tn.emplace_back(p.dofs[a], p.dofs[b], p.weight * p.dphi[b] * p.phi[a]);
        ta.emplace_back(p.dofs[a], p.dofs[b], p.weight * p.dphi[b] * p.dphi[a]);
      }
    }
  }

  DiscreteOperators ops;
  ops.M.resize(n, n);
  ops.N.resize(n, n);
  ops.A.resize(n, n);
  ops.M.setFromTriplets(tm.begin(), tm.end());
  ops.N.setFromTriplets(tn.begin(), tn.end());
  ops.A.setFromTriplets(ta.begin(), ta.end());
  ops.e_first = Eigen::VectorXd::Zero(n);
  ops.e_last = Eigen::VectorXd::Zero(n);
  ops.e_first[0] = 1.0;
  ops.e_last[n - 1] = 1.0;

  ops.coupling.assign(n, {});
  for (const auto& el : grid.elements) {
    for (int a = 0; a < nloc; ++a) {
      for (int b = 0; b < nloc; ++b) ops.coupling[el[a]].push_back(el[b]);
    }
  }
  for (auto& row : ops.coupling) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return ops;
}

Eigen::VectorXd assemble_load(const SpatialGrid& grid, const SpaceTimeFunction& source, double t)
{
  Eigen::VectorXd b = Eigen::VectorXd::Zero(grid.n_nodes());
  if (!source) return b;
  const int nloc = grid.nodes_per_element();
  for (const auto& p : spatial_quadrature(grid)) {
    const double q = source(p.x, t);
    for (int a = 0; a < nloc; ++a) b[p.dofs[a]] += p.weight * q * p.phi[a];
  }
  return b;
}

double evaluate_solution(const SpatialGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                         double x)
{
  PDECOL_REQUIRE(coeffs.size() == grid.n_nodes(), DimensionMismatch,
                 "coefficient vector does not match the grid");
  if (!(x >= 0.0 && x <= 1.0)) throw OutOfDomain("evaluation point outside [0, 1]");
  // Last element whose left node is <= x.
  int e = 0;
  for (int k = 0; k < grid.n_elements(); ++k) {
    if (grid.nodes[grid.elements[k][0]] <= x) e = k;
  }
  const auto& el = grid.elements[e];
  const double xa = grid.nodes[el[0]];
  const double xi = (x - xa) / grid.element_width(e);
  const ShapeValues s = shape_eval(grid.degree, xi);
  double v = 0.0;
  for (int a = 0; a < s.count; ++a) v += s.values[a] * coeffs[el[a]];
  return v;
}

}  // namespace pdecol
