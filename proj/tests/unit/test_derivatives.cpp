#include "pdecol/derivatives.hpp"
#include "pdecol/problems.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace pdecol;

namespace {

MeshConfig small_mesh(int n, int j, int nx, int degree = 1)
{
  MeshConfig m;
  m.points_per_interval = n;
  m.intervals = j;
  m.n_nodes = nx;
  m.degree = degree;
  return m;
}

/// Default guess plus a deterministic perturbation that stays inside the bounds.
Eigen::VectorXd perturbed_guess(const Transcription& tr, unsigned seed)
{
  Eigen::VectorXd z = tr.default_initial_guess();
  Eigen::VectorXd lo, hi;
  tr.bounds(lo, hi);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-0.05, 0.05);
  for (int j = 0; j < tr.layout().t0(); ++j) {
    z[j] += dist(rng);
    z[j] = std::clamp(z[j], std::max(lo[j], -1e3), std::min(hi[j], 1e3));
  }
  return z;
}

struct Case {
  const char* problem;
  Backend backend;
  int degree;
};

class FdCheck : public ::testing::TestWithParam<Case> {};

}  // namespace

TEST_P(FdCheck, AnalyticDerivativesMatchCentralDifferences)
{
  const Case c = GetParam();
  const auto tr = build_transcription(problem_by_name(c.problem), small_mesh(3, 2, c.degree == 2 ? 7 : 6, c.degree),
                                      c.backend);
  FdOptions opt;
  opt.check_hessian = true;
  opt.objective_factor = 0.7;
  const FdReport rep = fd_verify(*tr, perturbed_guess(*tr, 11), opt);
  for (const BlockError& b : rep.blocks) {
    EXPECT_LT(b.max_error, 1e-6) << b.block << " at (" << b.row << ", " << b.col << ")";
  }
  EXPECT_EQ(rep.outside_pattern, 0);
  EXPECT_NE(rep.find("hessian/state:state"), nullptr);
  EXPECT_NE(rep.find("gradient/state"), nullptr);
}

INSTANTIATE_TEST_SUITE_P(Problems, FdCheck,
                         ::testing::Values(Case{"burgers", Backend::Fem, 1}, Case{"burgers", Backend::Fem, 2},
                                           Case{"burgers", Backend::Fd, 1}, Case{"heat", Backend::Fem, 1},
                                           Case{"heat", Backend::Fem, 2},
                                           Case{"heat-constrained", Backend::Fem, 1}),
                         [](const auto& info) {
                           std::string n = info.param.problem;
                           std::replace(n.begin(), n.end(), '-', '_');
                           return n + (info.param.backend == Backend::Fd ? "_fd" : "_fem") + "_p" +
                                  std::to_string(info.param.degree);
                         });

TEST(Pattern, ClosedFormNonzeroCountForLinearElements)
{
  // N_x initial rows plus, per interval, (3 N_x - 2)(N + 1) state entries per
  // row block, two control entries and the 2 N_x endpoint-time columns.
  for (auto [n, j, nx] : {std::tuple{3, 2, 5}, std::tuple{5, 3, 34}, std::tuple{2, 4, 9}}) {
    const auto tr = build_transcription(burgers_problem(), small_mesh(n, j, nx));
    const std::size_t per_point = (3 * nx - 2) * (n + 1) + 2 + 2 * nx;
    const std::size_t expected = nx + n * j * per_point;
    EXPECT_EQ(unique_pattern(tr->jacobian_pattern()).nnz(), expected) << n << " " << j << " " << nx;
  }
  const auto tr = build_transcription(burgers_problem(), small_mesh(3, 2, 5));
  EXPECT_EQ(unique_pattern(tr->jacobian_pattern()).nnz(), 389u);
}

TEST(Pattern, HeatHasNoRightControlColumns)
{
  const auto tr = build_transcription(heat_problem(false), small_mesh(3, 2, 5));
  EXPECT_FALSE(tr->layout().has_u2);
  EXPECT_TRUE(empty_jacobian_columns(*tr).empty());
}

TEST(Pattern, HessianIsLowerTriangularAndExcludesTimes)
{
  const auto tr = build_transcription(heat_problem(false), small_mesh(3, 2, 5));
  const SparsityPattern& h = tr->hessian_pattern();
  for (std::size_t e = 0; e < h.nnz(); ++e) {
    EXPECT_GE(h.rows[e], h.cols[e]);
    EXPECT_LT(h.rows[e], tr->layout().t0());
  }
}

TEST(Jacobian, ConstantForLinearProblem)
{
  ProblemDefinition p = burgers_problem();
  p.convection = ScalarMap::zero_map();
  const auto tr = build_transcription(p, small_mesh(3, 2, 6));
  const Eigen::SparseMatrix<double> a = jacobian_matrix(*tr, perturbed_guess(*tr, 1));
  const Eigen::SparseMatrix<double> b = jacobian_matrix(*tr, perturbed_guess(*tr, 2));
  // Only the endpoint-time columns see the state.
  const int nt = tr->layout().t0();
  EXPECT_LT((Eigen::MatrixXd(a) - Eigen::MatrixXd(b)).leftCols(nt).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_GT((Eigen::MatrixXd(a) - Eigen::MatrixXd(b)).rightCols(2).cwiseAbs().maxCoeff(), 0.0);
  Eigen::VectorXd lambda = Eigen::VectorXd::Random(tr->n_constraints());
  const Eigen::SparseMatrix<double> h = hessian_matrix(*tr, perturbed_guess(*tr, 3), 0.0, lambda);
  EXPECT_LT(Eigen::MatrixXd(h).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Hessian, SymmetricAssembly)
{
  const auto tr = build_transcription(heat_problem(false), small_mesh(3, 2, 5));
  const Eigen::VectorXd lambda = Eigen::VectorXd::LinSpaced(tr->n_constraints(), -1, 1);
  const Eigen::MatrixXd h(hessian_matrix(*tr, perturbed_guess(*tr, 4), 1.0, lambda));
  EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MatrixMarket, HeaderAndOneBasedEntries)
{
  SparsityPattern p;
  p.n_rows = 2;
  p.n_cols = 3;
  p.rows = {0, 1, 1};
  p.cols = {2, 0, 0};
  std::ostringstream os;
  write_pattern_matrix_market(os, p);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "%%MatrixMarket matrix coordinate pattern general");
  int r, c, n;
  is >> r >> c >> n;
  EXPECT_EQ(r, 2);
  EXPECT_EQ(c, 3);
  EXPECT_EQ(n, 2);
  int i, j;
  is >> i >> j;
  EXPECT_EQ(i, 1);
  EXPECT_EQ(j, 3);
}
