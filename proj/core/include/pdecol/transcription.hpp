#pragma once

#include "pdecol/fem.hpp"
#include "pdecol/mesh.hpp"
#include "pdecol/problem.hpp"

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace pdecol {

/// Index map of the NLP decision vector
///
///   z = [ Y(:) ; U1 ; U2 ; t0 ; tf ]
///
/// Y is the (n_support x n_nodes) state matrix flattened column-major, so all
/// temporal support values of node 0 come first.  Absent controls take no
/// columns.
struct DecisionLayout {
  int n_support = 0;
  int n_nodes = 0;
  int n_controls_per_signal = 0;
  bool has_u1 = false;
  bool has_u2 = false;

  int n_state() const { return n_support * n_nodes; }
  int size() const
  {
    return n_state() + ((has_u1 ? 1 : 0) + (has_u2 ? 1 : 0)) * n_controls_per_signal + 2;
  }
  int state(int s, int k) const { return k * n_support + s; }
  int u1(int c) const { return n_state() + c; }
  int u2(int c) const { return n_state() + (has_u1 ? n_controls_per_signal : 0) + c; }
  int t0() const { return size() - 2; }
  int tf() const { return size() - 1; }
};

struct DecisionVector {
  Eigen::MatrixXd state;  ///< n_support x n_nodes
  Eigen::VectorXd u1;
  Eigen::VectorXd u2;
  double t0 = 0.0;
  double tf = 1.0;
};

Eigen::VectorXd pack(const DecisionLayout& layout, const DecisionVector& v);
DecisionVector unpack(const DecisionLayout& layout, const Eigen::Ref<const Eigen::VectorXd>& z);

/// Coordinate list of structural nonzeros.  Entries may repeat; repeated
/// values are summed on assembly.
struct SparsityPattern {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<int> rows;
  std::vector<int> cols;

  std::size_t nnz() const { return rows.size(); }
};

/// Sparse matrix from a pattern and a matching value array.
Eigen::SparseMatrix<double> assemble(const SparsityPattern& pattern, std::span<const double> values);

/// A fully discretized optimal control problem: objective, equality
/// constraints F(z) = 0, first derivatives, the Hessian of the Lagrangian, and
/// simple bounds.
///
/// Constraint rows: N_x initial-condition rows followed by one row per
/// (collocation point, spatial node) with the node index running fastest.
class Transcription {
public:
  Transcription(TemporalMesh mesh, SpatialGrid grid, ProblemDefinition problem);
  virtual ~Transcription() = default;

  const TemporalMesh& mesh() const { return mesh_; }
  const SpatialGrid& grid() const { return grid_; }
  const ProblemDefinition& problem() const { return problem_; }
  const DecisionLayout& layout() const { return layout_; }
  int n_variables() const { return layout_.size(); }
  int n_constraints() const { return (mesh_.n_collocation + 1) * grid_.n_nodes(); }

  /// Row of the dynamics/boundary constraint for collocation i and node k.
  int dynamics_row(int i, int k) const { return grid_.n_nodes() * (i + 1) + k; }
  /// Control slot paired with collocation point i, or -1 when the point has
  /// no boundary control (the initial point of a standard-Radau mesh).
  int control_index(int i) const { return mesh_.collocation_support[i] - 1; }

  virtual std::string backend() const = 0;
  virtual double objective(const Eigen::VectorXd& z) const = 0;
  virtual void gradient(const Eigen::VectorXd& z, Eigen::VectorXd& g) const = 0;
  virtual void constraints(const Eigen::VectorXd& z, Eigen::VectorXd& c) const = 0;
  virtual const SparsityPattern& jacobian_pattern() const = 0;
  virtual void jacobian_values(const Eigen::VectorXd& z, std::span<double> values) const = 0;
  /// Lower-triangular pattern of the Lagrangian Hessian over all variables
  /// except t0 and tf (treated as parameters).
  virtual const SparsityPattern& hessian_pattern() const = 0;
  virtual void hessian_values(const Eigen::VectorXd& z, double objective_factor,
                              const Eigen::VectorXd& multipliers, std::span<double> values) const = 0;

  /// Initial-condition rows Y(0, k) - y0(x_k).
  Eigen::VectorXd initial_condition_residual(const Eigen::VectorXd& z) const;

  /// Straight line in time from the initial profile to zero, zero controls.
  Eigen::VectorXd default_initial_guess() const;
  void bounds(Eigen::VectorXd& lower, Eigen::VectorXd& upper) const;

  /// Global times of the control slots.
  Eigen::VectorXd control_times() const;

protected:
  TemporalMesh mesh_;
  SpatialGrid grid_;
  ProblemDefinition problem_;
  DecisionLayout layout_;
};

/// Galerkin finite element in space, multi-interval Radau collocation in time.
class FemTranscription final : public Transcription {
public:
  FemTranscription(TemporalMesh mesh, SpatialGrid grid, ProblemDefinition problem);

  std::string backend() const override { return "fem"; }
  const DiscreteOperators& operators() const { return ops_; }
  const SparseRowMatrix& diff_matrix() const { return dt_; }

  /// Collocated dynamics residual, n_collocation x n_nodes.  Zero at a
  /// feasible point.
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
  struct Coupling {
    int node;
    double m, n, a;
  };
  struct TimeData {
    double psi, omega, t, dt_dt0, dt_dtf;
  };

  void build_patterns();
  TimeData time_data(const Eigen::VectorXd& z, int i) const;
  /// Load vector and target samples at collocation i for the endpoint times in z.
  Eigen::VectorXd load_at(int i, double t) const;
  Eigen::VectorXd load_dt_at(int i, double t) const;
  double objective_bracket(const Eigen::VectorXd& z, int i, double t, double* dbracket_dt) const;
  void objective_state_gradient(const Eigen::VectorXd& z, int i, double t, double omega,
                                Eigen::VectorXd& g) const;

  template <class Emit>
  void traverse_jacobian(const Eigen::VectorXd& z, Emit&& emit) const;
  template <class Emit>
  void traverse_hessian(const Eigen::VectorXd& z, double objective_factor,
                        const Eigen::VectorXd& multipliers, Emit&& emit) const;

  DiscreteOperators ops_;
  SparseRowMatrix dt_;
  std::vector<QuadraturePoint> quad_;
  std::vector<std::vector<Coupling>> coupling_;
  std::vector<std::vector<std::pair<int, double>>> dt_rows_;  ///< (support, D) per collocation
  Eigen::VectorXd nominal_times_;
  std::vector<Eigen::VectorXd> nominal_loads_;
  SparsityPattern jac_pattern_;
  SparsityPattern hess_pattern_;
};

}  // namespace pdecol
