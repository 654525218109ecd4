#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace pdecol {

/// Scalar map s -> f(s) with its first three derivatives.
///
/// Used for the Kirchhoff-like antiderivatives of the PDE coefficients: the
/// convective potential beta (beta' = kappa), the diffusive potential B and the
/// capacity potential C.
struct ScalarMap {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  std::function<double(double)> d3;
  bool linear = false;  ///< d2 vanishes identically
  bool zero = false;    ///< the map is identically zero

  /// f(s) = c1 s + c2 s^2 / 2, so f'(s) = c1 + c2 s.
  static ScalarMap quadratic(double c1, double c2);
  static ScalarMap identity() { return quadratic(1.0, 0.0); }
  static ScalarMap zero_map() { return quadratic(0.0, 0.0); }
};

/// Boundary flux B(y)_x at one end of the rod.
///
/// Neumann: flux = coefficient * u.  Robin: flux = coefficient * (y - u).
/// Without a control the control value is taken as zero.
struct BoundaryCondition {
  enum class Kind { Neumann, Robin };
  Kind kind = Kind::Neumann;
  double coefficient = 0.0;
  bool has_control = false;
};

using TimeFunction = std::function<double(double t)>;
using ProfileFunction = std::function<double(double x)>;
using FieldFunction = std::function<double(double x, double t)>;

/// Quadratic tracking objective
///   1/2 w_y int (y - y_d)^2 [dx] dt + 1/2 gamma int (u1^2 + u2^2) dt
/// with y either integrated over the domain or sampled at x = 1.
struct TrackingObjective {
  enum class Kind { Distributed, RightBoundary };
  Kind kind = Kind::Distributed;
  double state_weight = 1.0;
  double control_weight = 0.0;
  FieldFunction target;     ///< y_d(x, t)
  FieldFunction target_dt;  ///< d y_d / dt; empty means time independent
};

/// Boundary-controlled parabolic problem in divergence form
///
///   d C(y)/dt + d beta(y)/dx = d^2 B(y)/dx^2 + q(x, t)   on (0, 1) x (t0, tf)
///
/// with flux conditions on B(y)_x at both ends and y(x, t0) = y0(x).
struct ProblemDefinition {
  std::string name;
  double t0 = 0.0;
  double tf = 1.0;

  ScalarMap capacity = ScalarMap::identity();
  ScalarMap convection = ScalarMap::zero_map();
  ScalarMap diffusion = ScalarMap::identity();

  BoundaryCondition left;
  BoundaryCondition right;

  ProfileFunction initial_state;
  FieldFunction source;     ///< empty means no source
  FieldFunction source_dt;  ///< time derivative of the source

  TrackingObjective objective;

  double control_lower = -1e20;
  double control_upper = 1e20;
  TimeFunction control_upper_profile;  ///< optional time-varying upper bound

  /// Multiplier applied to the objective inside the NLP solver.
  double objective_scale = 1.0;

  int n_controls() const { return (left.has_control ? 1 : 0) + (right.has_control ? 1 : 0); }
};

/// Elementwise beta(Y) of a coefficient matrix.
Eigen::MatrixXd kirchhoff_transform(const Eigen::Ref<const Eigen::MatrixXd>& state_coeffs,
                                    const ScalarMap& beta);

}  // namespace pdecol
