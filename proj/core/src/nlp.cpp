#include "pdecol/nlp.hpp"
#include "pdecol/error.hpp"

namespace pdecol {

std::string to_string(SolveStatus status)
{
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::RestorationFailed: return "restoration_failed";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

void validate(const NlpProblem& p)
{
  PDECOL_REQUIRE(p.n_variables > 0, InvalidConfig, "problem has no variables");
  PDECOL_REQUIRE(p.objective && p.gradient, InvalidConfig, "objective callbacks missing");
  PDECOL_REQUIRE(p.n_constraints == 0 || (p.constraints && p.jacobian_values), InvalidConfig,
                 "constraint callbacks missing");
  PDECOL_REQUIRE(p.hessian_values, InvalidConfig, "hessian callback missing");
  PDECOL_REQUIRE(p.lower.size() == p.n_variables && p.upper.size() == p.n_variables, InvalidConfig,
                 "bound vectors have the wrong length");
  PDECOL_REQUIRE(p.initial_guess.size() == p.n_variables, InvalidConfig,
                 "initial guess has the wrong length");
  PDECOL_REQUIRE(p.jacobian_pattern.n_rows == p.n_constraints &&
                   p.jacobian_pattern.n_cols == p.n_variables,
                 InvalidConfig, "jacobian pattern dimensions disagree with the problem");
  PDECOL_REQUIRE(p.hessian_pattern.n_rows == p.n_variables &&
                   p.hessian_pattern.n_cols == p.n_variables,
                 InvalidConfig, "hessian pattern dimensions disagree with the problem");
  for (std::size_t e = 0; e < p.hessian_pattern.nnz(); ++e) {
    PDECOL_REQUIRE(p.hessian_pattern.rows[e] >= p.hessian_pattern.cols[e], InvalidConfig,
                   "hessian pattern must be lower triangular");
  }
  for (int i = 0; i < p.n_variables; ++i) {
    PDECOL_REQUIRE(p.lower[i] <= p.upper[i], InvalidConfig,
                   "lower bound exceeds upper bound at variable " + std::to_string(i));
  }
  PDECOL_REQUIRE(p.objective_scale > 0.0, InvalidConfig, "objective scale must be positive");
}

NlpProblem to_nlp(const Transcription& tr)
{
  NlpProblem p;
  p.n_variables = tr.n_variables();
  p.n_constraints = tr.n_constraints();
  p.objective = [&tr](const Eigen::VectorXd& z) { return tr.objective(z); };
  p.gradient = [&tr](const Eigen::VectorXd& z, Eigen::VectorXd& g) { tr.gradient(z, g); };
  p.constraints = [&tr](const Eigen::VectorXd& z, Eigen::VectorXd& c) { tr.constraints(z, c); };
  p.jacobian_pattern = tr.jacobian_pattern();
  p.jacobian_values = [&tr](const Eigen::VectorXd& z, std::span<double> v) { tr.jacobian_values(z, v); };
  p.hessian_pattern = tr.hessian_pattern();
  p.hessian_values = [&tr](const Eigen::VectorXd& z, double sigma, const Eigen::VectorXd& lam,
                           std::span<double> v) { tr.hessian_values(z, sigma, lam, v); };
  tr.bounds(p.lower, p.upper);
  p.initial_guess = tr.default_initial_guess();
  p.objective_scale = tr.problem().objective_scale;
  return p;
}

}  // namespace pdecol
