#pragma once

#include "pdecol/mesh.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <functional>
#include <vector>

namespace pdecol {

/// Galerkin operators on a spatial grid.
///
///   M_ik = int phi_k phi_i,   N_ik = int phi_k' phi_i,   A_ik = int phi_k' phi_i'
///
/// All three share the element connectivity pattern, which is kept separately
/// in `coupling` so that structural zeros (e.g. interior diagonal of N) still
/// show up in Jacobian patterns.
struct DiscreteOperators {
  SparseRowMatrix M;
  SparseRowMatrix N;
  SparseRowMatrix A;
  Eigen::VectorXd e_first;
  Eigen::VectorXd e_last;
  std::vector<std::vector<int>> coupling;  ///< sorted neighbour lists per node
};

struct ShapeValues {
  int count = 0;
  std::array<double, 3> values{};
  std::array<double, 3> derivatives{};  ///< d/dxi on the unit reference element
};

/// Lagrange shape functions of degree 1 or 2 at local coordinate xi in [0, 1].
ShapeValues shape_eval(int degree, double xi);

/// A spatial quadrature point with basis data already mapped to the element.
struct QuadraturePoint {
  int element = 0;
  double x = 0.0;
  double weight = 0.0;  ///< w_p h_p / 2
  std::array<int, 3> dofs{};
  std::array<double, 3> phi{};
  std::array<double, 3> dphi{};  ///< physical derivative d/dx
};

std::vector<QuadraturePoint> spatial_quadrature(const SpatialGrid& grid);

DiscreteOperators assemble_operators(const SpatialGrid& grid);

using SpaceTimeFunction = std::function<double(double x, double t)>;

/// Load vector b_i = int q(x, t) phi_i dx by the element quadrature.
Eigen::VectorXd assemble_load(const SpatialGrid& grid, const SpaceTimeFunction& source, double t);

/// Finite element function sum_k phi_k(x) coeffs_k.
double evaluate_solution(const SpatialGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                         double x);

}  // namespace pdecol
