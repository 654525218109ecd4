#include "pdecol/mesh.hpp"

#include "pdecol/error.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace pdecol {

namespace {

double tau_to_time(double tau, double t0, double tf)
{
  if (tau == -1.0) return t0;
  if (tau == 1.0) return tf;
  return t0 + 0.5 * (tau + 1.0) * (tf - t0);
}

}  // namespace

std::vector<double> TemporalMesh::psi() const
{
  std::vector<double> out;
  out.reserve(intervals.size());
  for (const auto& iv : intervals) out.push_back(dt_dtau() * iv.dtau_dr());
  return out;
}

Eigen::VectorXd TemporalMesh::alpha() const
{
  Eigen::VectorXd a(n_collocation);
  for (int i = 0; i < n_collocation; ++i) a[i] = dt_dtau() * collocation_dtau_dr[i];
  return a;
}

Eigen::VectorXd TemporalMesh::omega() const
{
  Eigen::VectorXd w(n_collocation);
  for (int i = 0; i < n_collocation; ++i) {
    w[i] = dt_dtau() * collocation_dtau_dr[i] * collocation_weight[i];
  }
  return w;
}

TemporalMesh build_temporal_mesh(double t0, double tf, std::span<const double> interval_fractions,
                                 std::span<const int> points_per_interval, RadauKind kind)
{
  PDECOL_REQUIRE(tf > t0, InvalidConfig, "final time must exceed initial time");
  PDECOL_REQUIRE(!interval_fractions.empty(), InvalidConfig, "mesh needs at least one interval");
  PDECOL_REQUIRE(interval_fractions.size() == points_per_interval.size(), InvalidConfig,
                 "interval fractions and point counts differ in length");
  const double total = std::accumulate(interval_fractions.begin(), interval_fractions.end(), 0.0);
  PDECOL_REQUIRE(std::abs(total - 1.0) < 1e-12, InvalidConfig, "interval fractions must sum to 1");

  TemporalMesh mesh;
  mesh.t0 = t0;
  mesh.tf = tf;
  mesh.kind = kind;
  const auto n_iv = interval_fractions.size();
  mesh.mesh_points.resize(n_iv + 1);
  mesh.mesh_points[0] = -1.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < n_iv; ++j) {
    PDECOL_REQUIRE(interval_fractions[j] > 0.0, InvalidConfig,
                   "interval " + std::to_string(j) + " has non-positive width");
    PDECOL_REQUIRE(points_per_interval[j] >= 1, InvalidConfig,
                   "interval " + std::to_string(j) + " needs at least one collocation point");
    acc += interval_fractions[j];
    mesh.mesh_points[j + 1] = (j + 1 == n_iv) ? 1.0 : -1.0 + 2.0 * acc;
    PDECOL_REQUIRE(mesh.mesh_points[j + 1] > mesh.mesh_points[j], InvalidConfig,
                   "mesh points must be strictly increasing");
  }

  int support_offset = 0;
  for (std::size_t j = 0; j < n_iv; ++j) {
    TemporalInterval iv;
    iv.tau_left = mesh.mesh_points[j];
    iv.tau_right = mesh.mesh_points[j + 1];
    const int n = points_per_interval[j];
    iv.rule = (kind == RadauKind::Flipped) ? flipped_lgr_rule(n) : standard_lgr_rule(n);
    iv.support_offset = support_offset;
    iv.collocation_offset = support_offset;
    if (kind == RadauKind::Flipped) {
      iv.support.push_back(-1.0);
      for (int k = 0; k < n; ++k) iv.support.push_back(iv.rule.nodes[k]);
      for (int k = 0; k < n; ++k) iv.collocated_local.push_back(k + 1);
    } else {
      for (int k = 0; k < n; ++k) iv.support.push_back(iv.rule.nodes[k]);
      iv.support.push_back(1.0);
      for (int k = 0; k < n; ++k) iv.collocated_local.push_back(k);
    }
    support_offset += n;
    mesh.intervals.push_back(std::move(iv));
  }
  mesh.n_collocation = support_offset;
  mesh.n_support = support_offset + 1;

  mesh.support_tau.assign(mesh.n_support, 0.0);
  for (const auto& iv : mesh.intervals) {
    for (std::size_t l = 0; l < iv.support.size(); ++l) {
      const double r = iv.support[l];
      double tau;
      if (r == -1.0) {
        tau = iv.tau_left;
      } else if (r == 1.0) {
        tau = iv.tau_right;
      } else {
        tau = iv.tau_left + 0.5 * (r + 1.0) * (iv.tau_right - iv.tau_left);
      }
      mesh.support_tau[iv.support_offset + l] = tau;
    }
  }

  for (int j = 0; j < mesh.n_intervals(); ++j) {
    const auto& iv = mesh.intervals[j];
    for (int k = 0; k < iv.n_points(); ++k) {
      const int s = iv.support_offset + iv.collocated_local[k];
      mesh.collocation_interval.push_back(j);
      mesh.collocation_support.push_back(s);
      mesh.collocation_tau.push_back(mesh.support_tau[s]);
      mesh.collocation_weight.push_back(iv.rule.weights[k]);
      mesh.collocation_dtau_dr.push_back(iv.dtau_dr());
    }
  }
  return mesh;
}

TemporalMesh uniform_temporal_mesh(double t0, double tf, int n_intervals, int points_per_interval,
                                   RadauKind kind)
{
  PDECOL_REQUIRE(n_intervals >= 1, InvalidConfig, "mesh needs at least one interval");
  std::vector<double> fractions(n_intervals, 1.0 / n_intervals);
  // Keep the fractions summing to exactly one.
  fractions.back() = 1.0 - std::accumulate(fractions.begin(), fractions.end() - 1, 0.0);
  std::vector<int> points(n_intervals, points_per_interval);
  return build_temporal_mesh(t0, tf, fractions, points, kind);
}

Eigen::VectorXd collocation_times(const TemporalMesh& mesh)
{
  Eigen::VectorXd t(mesh.n_collocation);
  for (int i = 0; i < mesh.n_collocation; ++i) {
    t[i] = tau_to_time(mesh.collocation_tau[i], mesh.t0, mesh.tf);
  }
  return t;
}

Eigen::VectorXd support_times(const TemporalMesh& mesh)
{
  Eigen::VectorXd t(mesh.n_support);
  for (int s = 0; s < mesh.n_support; ++s) t[s] = tau_to_time(mesh.support_tau[s], mesh.t0, mesh.tf);
  return t;
}

SparseRowMatrix assemble_global_diff_matrix(const TemporalMesh& mesh)
{
  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& iv : mesh.intervals) {
    std::vector<double> eval;
    for (int l : iv.collocated_local) eval.push_back(iv.support[l]);
    const DiffMatrix d = lagrange_diff_matrix(iv.support, eval);
    for (Eigen::Index q = 0; q < d.entries.rows(); ++q) {
      for (Eigen::Index l = 0; l < d.entries.cols(); ++l) {
        triplets.emplace_back(iv.collocation_offset + static_cast<int>(q),
                              iv.support_offset + static_cast<int>(l), d.entries(q, l));
      }
    }
  }
  SparseRowMatrix dt(mesh.n_collocation, mesh.n_support);
  dt.setFromTriplets(triplets.begin(), triplets.end());
  return dt;
}

double SpatialGrid::element_width(int e) const
{
  const auto& el = elements[e];
  return nodes[el[degree]] - nodes[el[0]];
}

int SpatialGrid::find_node(double x, double tol) const
{
  for (int k = 0; k < n_nodes(); ++k) {
    if (std::abs(nodes[k] - x) <= tol) return k;
  }
  return -1;
}

SpatialGrid make_spatial_grid(Eigen::VectorXd nodes, int degree, int quad_points)
{
  PDECOL_REQUIRE(degree == 1 || degree == 2, InvalidConfig,
                 "element degree " + std::to_string(degree) + " unsupported (1 or 2)");
  PDECOL_REQUIRE(quad_points >= degree + 1, InvalidConfig,
                 "need at least degree+1 quadrature points per element");
  PDECOL_REQUIRE(nodes.size() >= 3, InvalidConfig, "spatial grid needs at least 3 nodes");
  PDECOL_REQUIRE(nodes[0] == 0.0 && nodes[nodes.size() - 1] == 1.0, InvalidConfig,
                 "spatial nodes must span [0, 1]");
  for (Eigen::Index k = 1; k < nodes.size(); ++k) {
    PDECOL_REQUIRE(nodes[k] > nodes[k - 1], InvalidConfig, "spatial nodes must be ascending");
  }
  if (degree == 2) {
    PDECOL_REQUIRE(nodes.size() % 2 == 1, InvalidConfig,
                   "quadratic elements need an odd node count");
  }
  SpatialGrid grid;
  grid.nodes = std::move(nodes);
  grid.degree = degree;
  grid.quad_points_per_element = quad_points;
  grid.element_rule = standard_lgr_rule(quad_points);
  const int n_el = (grid.n_nodes() - 1) / degree;
  for (int e = 0; e < n_el; ++e) {
    const int a = e * degree;
    grid.elements.push_back({a, a + 1, degree == 2 ? a + 2 : -1});
  }
  return grid;
}

SpatialGrid build_spatial_grid(int n_elements, int degree, int quad_points)
{
  PDECOL_REQUIRE(n_elements >= 2, InvalidConfig, "spatial grid needs at least 2 elements");
  PDECOL_REQUIRE(degree == 1 || degree == 2, InvalidConfig,
                 "element degree " + std::to_string(degree) + " unsupported (1 or 2)");
  const int n_nodes = n_elements * degree + 1;
  Eigen::VectorXd nodes(n_nodes);
  for (int k = 0; k < n_nodes; ++k) nodes[k] = static_cast<double>(k) / (n_nodes - 1);
  nodes[n_nodes - 1] = 1.0;
  return make_spatial_grid(std::move(nodes), degree, quad_points);
}

SpatialGrid spatial_grid_from_nodes(int n_nodes, int degree, int quad_points)
{
  PDECOL_REQUIRE(degree == 1 || degree == 2, InvalidConfig,
                 "element degree " + std::to_string(degree) + " unsupported (1 or 2)");
  PDECOL_REQUIRE(n_nodes >= 3, InvalidConfig, "spatial grid needs at least 3 nodes");
  PDECOL_REQUIRE((n_nodes - 1) % degree == 0, InvalidConfig,
                 "quadratic elements need an odd node count");
  return build_spatial_grid((n_nodes - 1) / degree, degree, quad_points);
}

}  // namespace pdecol
