#pragma once

#include "pdecol/transcription.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <span>
#include <string>

namespace pdecol {

/// min f(z)  s.t.  c(z) = 0,  lower <= z <= upper.
///
/// Bounds at or beyond +-1e19 count as absent.  Variables with equal bounds
/// are held fixed and removed from the iteration.
struct NlpProblem {
  int n_variables = 0;
  int n_constraints = 0;

  std::function<double(const Eigen::VectorXd&)> objective;
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> gradient;
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> constraints;

  SparsityPattern jacobian_pattern;
  std::function<void(const Eigen::VectorXd&, std::span<double>)> jacobian_values;

  /// Lower triangle of the Hessian of  sigma f + lambda' c.
  SparsityPattern hessian_pattern;
  std::function<void(const Eigen::VectorXd&, double sigma, const Eigen::VectorXd& lambda,
                     std::span<double>)>
    hessian_values;

  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  Eigen::VectorXd initial_guess;

  /// The solver minimizes objective_scale * f; reported values are unscaled.
  double objective_scale = 1.0;
};

/// Throws InvalidConfig when callbacks are missing or dimensions disagree.
void validate(const NlpProblem& problem);

NlpProblem to_nlp(const Transcription& tr);

struct SolveOptions {
  double tolerance = 1e-8;             ///< scaled KKT error
  double constraint_tolerance = 1e-8;  ///< max-norm of c(z)
  int max_iterations = 1000;
  double mu_init = 0.1;
  int print_level = 0;
  std::ostream* log = nullptr;
};

enum class SolveStatus { Converged, MaxIterations, RestorationFailed, NumericalFailure };

std::string to_string(SolveStatus status);

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIterations;
  Eigen::VectorXd z;
  Eigen::VectorXd multipliers;
  double objective = 0.0;
  double constraint_violation = 0.0;
  double optimality = 0.0;
  int iterations = 0;
  double wall_time = 0.0;
  std::string message;

  bool converged() const { return status == SolveStatus::Converged; }
};

/// Primal-dual interior point method with a filter line search.
SolveReport solve(const NlpProblem& problem, const SolveOptions& options = {});

}  // namespace pdecol
