#pragma once

#include "pdecol/transcription.hpp"

namespace pdecol {

/// Second-order central differences on a uniform grid, interior rows only.
struct FdOperators {
  SparseRowMatrix first;   ///< (N_x-2) x N_x, (Y_{k+1} - Y_{k-1}) / 2h
  SparseRowMatrix second;  ///< (N_x-2) x N_x, (Y_{k+1} - 2Y_k + Y_{k-1}) / h^2
  double spacing = 0.0;
};

/// Throws InvalidConfig for fewer than four nodes or a nonuniform grid.
FdOperators build_fd_operators(const SpatialGrid& grid);

/// Method-of-lines finite differences in space with the same Radau
/// collocation in time.  Boundary rows are the one-sided second-order
/// Neumann closures, kept as explicit equality constraints.
///
/// Supports problems with unit capacity, constant diffusivity, Neumann
/// conditions at both ends and no source.
class FdTranscription final : public Transcription {
public:
  FdTranscription(TemporalMesh mesh, SpatialGrid grid, ProblemDefinition problem);

  std::string backend() const override { return "fd"; }
  const FdOperators& operators() const { return ops_; }

  Eigen::MatrixXd dynamics_residual(const Eigen::VectorXd& z) const;

  double objective(const Eigen::VectorXd& z) const override;
  void gradient(const Eigen::VectorXd& z, Eigen::VectorXd& g) const override;
  void constraints(const Eigen::VectorXd& z, Eigen::VectorXd& c) const override;
  const SparsityPattern& jacobian_pattern() const override { return jac_pattern_; }
  void jacobian_values(const Eigen::VectorXd& z, std::span<double> values) const override;
  const SparsityPattern& hessian_pattern() const override { return hess_pattern_; }
  void hessian_values(const Eigen::VectorXd& z, double objective_factor,
                      const Eigen::VectorXd& multipliers, std::span<double> values) const override;

private:
  template <class Emit>
  void traverse_jacobian(const Eigen::VectorXd& z, Emit&& emit) const;
  template <class Emit>
  void traverse_hessian(const Eigen::VectorXd& z, double objective_factor,
                        const Eigen::VectorXd& multipliers, Emit&& emit) const;

  double psi(const Eigen::VectorXd& z, int i) const;
  double time_at(const Eigen::VectorXd& z, int i) const;
  double bracket(const Eigen::VectorXd& z, int i, double t, double* dbracket_dt) const;

  FdOperators ops_;
  double diffusivity_ = 0.0;
  double left_gain_ = 0.0;   ///< y_x(0) = left_gain * u1
  double right_gain_ = 0.0;  ///< y_x(1) = right_gain * u2
  Eigen::VectorXd trapezoid_;
  std::vector<std::vector<std::pair<int, double>>> dt_rows_;
  SparsityPattern jac_pattern_;
  SparsityPattern hess_pattern_;
};

}  // namespace pdecol
