#pragma once

#include "pdecol/transcription.hpp"

#include <Eigen/Sparse>

#include <iosfwd>
#include <string>
#include <vector>

namespace pdecol {

/// Constraint Jacobian at z, duplicates summed.
Eigen::SparseMatrix<double> jacobian_matrix(const Transcription& tr, const Eigen::VectorXd& z);

/// Full symmetric Lagrangian Hessian (t0/tf rows and columns empty).
Eigen::SparseMatrix<double> hessian_matrix(const Transcription& tr, const Eigen::VectorXd& z,
                                           double objective_factor,
                                           const Eigen::VectorXd& multipliers);

/// Sorted pattern with repeated coordinates merged.
SparsityPattern unique_pattern(const SparsityPattern& pattern);

struct BlockError {
  std::string block;
  double max_error = 0.0;  ///< |analytic - fd| / max(1, |fd|)
  int row = -1;
  int col = -1;
};

struct FdReport {
  std::vector<BlockError> blocks;
  /// Finite-difference Jacobian entries above threshold that fall outside the pattern.
  int outside_pattern = 0;

  double worst() const;
  const BlockError* find(const std::string& block) const;
};

struct FdOptions {
  double relative_step = 1e-6;
  bool check_hessian = false;
  double objective_factor = 1.0;
  Eigen::VectorXd multipliers;  ///< empty: deterministic pseudo-random values
};

/// Central-difference check of gradient, Jacobian and optionally the
/// Lagrangian Hessian, with step h_i = relative_step * max(1, |z_i|).
FdReport fd_verify(const Transcription& tr, const Eigen::VectorXd& z, const FdOptions& options = {});

/// MatrixMarket "coordinate pattern general" text, 1-based indices.
void write_pattern_matrix_market(std::ostream& os, const SparsityPattern& pattern);

}  // namespace pdecol
