#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace pdecol {

/// Legendre-Gauss-Radau rule on [-1, 1].
///
/// The standard rule includes the left endpoint -1; the flipped rule is its
/// mirror image and includes +1.  Nodes are stored in ascending order.
struct RadauRule {
  int n_points = 0;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  bool flipped = false;
};

/// Lagrange differentiation matrix: entry (i, n) is dL_n/dr at eval point i,
/// where L_n is the Lagrange basis polynomial of support point n.
struct DiffMatrix {
  Eigen::VectorXd support_points;
  Eigen::VectorXd eval_points;
  Eigen::MatrixXd entries;
};

/// P_n(r) by the three-term recurrence.
double legendre_eval(int n, double r);

/// Returns (P_n(r), P_n'(r)).
std::pair<double, double> legendre_eval_with_derivative(int n, double r);

RadauRule standard_lgr_rule(int n);
RadauRule flipped_lgr_rule(int n);

/// Barycentric weights 1 / prod_{m != n} (x_n - x_m).  Throws InvalidConfig on
/// duplicate support points.
Eigen::VectorXd barycentric_weights(std::span<const double> support);

DiffMatrix lagrange_diff_matrix(std::span<const double> support, std::span<const double> eval);

double lagrange_interpolate(std::span<const double> support, std::span<const double> values,
                            double query);

/// Values of every Lagrange basis polynomial of `support` at `query`.
Eigen::VectorXd lagrange_basis(std::span<const double> support, double query);

}  // namespace pdecol
