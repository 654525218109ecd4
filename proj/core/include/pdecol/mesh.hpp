#pragma once

#include "pdecol/quadrature.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <span>
#include <vector>

namespace pdecol {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Which Radau family supplies the collocation points in each time interval.
enum class RadauKind { Flipped, Standard };

/// One time interval [tau_left, tau_right] of the multi-interval mesh.
///
/// `support` holds the N+1 local interpolation points in r (ascending, first
/// -1, last +1).  For the flipped family the first point is the
/// noncollocated one; for the standard family it is the last.
struct TemporalInterval {
  double tau_left = -1.0;
  double tau_right = 1.0;
  RadauRule rule;
  std::vector<double> support;
  std::vector<int> collocated_local;  ///< local support index of each collocation point
  int support_offset = 0;             ///< global index of local support point 0
  int collocation_offset = 0;         ///< global index of the first collocation point

  int n_points() const { return rule.n_points; }
  double dtau_dr() const { return 0.5 * (tau_right - tau_left); }
};

struct TemporalMesh {
  double t0 = 0.0;
  double tf = 1.0;
  RadauKind kind = RadauKind::Flipped;
  std::vector<double> mesh_points;  ///< tau_0 = -1 < ... < tau_J = +1
  std::vector<TemporalInterval> intervals;

  int n_collocation = 0;  ///< sum of points per interval
  int n_support = 0;      ///< n_collocation + 1

  // Per collocation point, in global order.
  std::vector<int> collocation_interval;
  std::vector<int> collocation_support;
  std::vector<double> collocation_tau;
  std::vector<double> collocation_weight;  ///< unscaled Radau weight
  std::vector<double> collocation_dtau_dr;

  std::vector<double> support_tau;

  int n_intervals() const { return static_cast<int>(intervals.size()); }
  double dt_dtau() const { return 0.5 * (tf - t0); }

  /// psi^(j) = (dt/dtau)(dtau/dr)^(j) for every interval.
  std::vector<double> psi() const;
  /// psi at each collocation point (the alpha vector).
  Eigen::VectorXd alpha() const;
  /// Global-time quadrature weights: psi^(j) times the interval Radau weights.
  Eigen::VectorXd omega() const;
};

/// Builds the mesh.  `interval_fractions` are the interval widths as fractions
/// of the time horizon; they must be positive and sum to one.
TemporalMesh build_temporal_mesh(double t0, double tf, std::span<const double> interval_fractions,
                                 std::span<const int> points_per_interval,
                                 RadauKind kind = RadauKind::Flipped);

/// J equal intervals with N points each.
TemporalMesh uniform_temporal_mesh(double t0, double tf, int n_intervals, int points_per_interval,
                                   RadauKind kind = RadauKind::Flipped);

Eigen::VectorXd collocation_times(const TemporalMesh& mesh);
Eigen::VectorXd support_times(const TemporalMesh& mesh);

/// Block-diagonal D_t (n_collocation x n_support) with one shared column
/// between consecutive interval blocks.
SparseRowMatrix assemble_global_diff_matrix(const TemporalMesh& mesh);

/// Spatial finite element grid on [0, 1].
struct SpatialGrid {
  Eigen::VectorXd nodes;
  int degree = 1;
  int quad_points_per_element = 3;
  RadauRule element_rule;                    ///< standard LGR rule on [-1, 1]
  std::vector<std::array<int, 3>> elements;  ///< node indices; only the first degree+1 used

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
  int nodes_per_element() const { return degree + 1; }
  int total_quad_points() const { return n_elements() * quad_points_per_element; }
  double element_width(int e) const;
  /// Index of the node equal to x within `tol`, or -1.
  int find_node(double x, double tol = 1e-12) const;
};

SpatialGrid build_spatial_grid(int n_elements, int degree, int quad_points = 3);

/// Grid with `n_nodes` uniformly placed nodes (odd count for degree 2).
SpatialGrid spatial_grid_from_nodes(int n_nodes, int degree, int quad_points = 3);

/// Grid on arbitrary ascending nodes spanning [0, 1].
SpatialGrid make_spatial_grid(Eigen::VectorXd nodes, int degree, int quad_points = 3);

}  // namespace pdecol
