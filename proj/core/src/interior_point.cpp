#include "pdecol/error.hpp"
#include "pdecol/nlp.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <vector>

namespace pdecol {

namespace {

constexpr double kInfinity = 1e19;
constexpr double kBoundPush = 1e-2;
constexpr double kBoundRelax = 1e-8;
constexpr double kScaleMax = 100.0;
constexpr double kMuDecrease = 0.2;
constexpr double kMuPower = 1.5;
constexpr double kMuTolFactor = 10.0;
constexpr double kGammaTheta = 1e-5;
constexpr double kGammaPhi = 1e-8;
constexpr double kSwitchTheta = 1.1;
constexpr double kSwitchPhi = 2.3;
constexpr double kSwitchDelta = 1.0;
constexpr double kArmijo = 1e-8;
constexpr double kAlphaMinFactor = 0.05;
constexpr double kSigmaSafeguard = 1e10;
constexpr double kSocContraction = 0.99;
constexpr int kMaxSoc = 4;

using SpMat = Eigen::SparseMatrix<double>;
using Clock = std::chrono::steady_clock;

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

bool all_finite(const std::vector<double>& v)
{
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

struct Trial {
  Eigen::VectorXd x;
  double f = 0.0;
  Eigen::VectorXd c;
  double theta = 0.0;
  double phi = 0.0;
  bool finite = true;
};

class InteriorPoint {
public:
  InteriorPoint(const NlpProblem& p, const SolveOptions& o) : p_(p), o_(o) { setup(); }

  SolveReport run();

private:
  const NlpProblem& p_;
  const SolveOptions& o_;

  int n_ = 0;  // free variables
  int m_ = 0;
  std::vector<int> free_;
  Eigen::VectorXd full_;
  Eigen::VectorXd xl_, xu_;  // relaxed bounds on free variables
  std::vector<int> lo_, up_;  // free indices with finite bounds

  std::vector<int> jac_entry_, jac_row_, jac_col_;  // kept Jacobian entries
  std::vector<int> hess_entry_, hess_row_, hess_col_;
  std::vector<double> jac_buf_, hess_buf_;

  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
  bool analyzed_ = false;
  SpMat kkt_;
  SpMat jac_;
  SpMat hess_lower_;

  double mu_ = 0.1;
  std::vector<std::pair<double, double>> filter_;
  double theta_max_ = 0.0, theta_min_ = 0.0;
  double delta_w_last_ = 0.0;
  double delta_c_ = 0.0;  // regularization in the current factorization

  Eigen::VectorXd x_, lam_, zl_, zu_, g_, c_;
  double f_ = 0.0;
  std::string failure_block_;

  void setup();
  Eigen::VectorXd expand(const Eigen::VectorXd& x) const;
  bool eval_f(const Eigen::VectorXd& x, double& f);
  bool eval_c(const Eigen::VectorXd& x, Eigen::VectorXd& c);
  bool eval_g(const Eigen::VectorXd& x, Eigen::VectorXd& g);
  bool eval_jac(const Eigen::VectorXd& x);
  bool eval_hess(const Eigen::VectorXd& x, const Eigen::VectorXd& lam);

  Eigen::VectorXd slack_lower(const Eigen::VectorXd& x) const;
  Eigen::VectorXd slack_upper(const Eigen::VectorXd& x) const;
  double barrier(const Eigen::VectorXd& x, double f) const;
  Eigen::VectorXd barrier_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& g) const;
  Eigen::VectorXd sigma_diag() const;

  bool factor(double hess_factor, const Eigen::VectorXd& diag, double delta_c);
  bool solve_kkt(const Eigen::VectorXd& rhs, Eigen::VectorXd& sol);
  bool newton_step(Eigen::VectorXd& dx, Eigen::VectorXd& dlam);

  double fraction_to_boundary(const Eigen::VectorXd& x, const Eigen::VectorXd& dx, double tau) const;
  double fraction_to_boundary_dual(const Eigen::VectorXd& z, const Eigen::VectorXd& dz,
                                   double tau) const;
  bool filter_acceptable(double theta, double phi) const;
  void augment_filter(double theta, double phi);
  bool evaluate_trial(const Eigen::VectorXd& x, Trial& t);
  void least_squares_multipliers();
  bool restoration();

  double kkt_error(double mu, double* dual, double* compl_out) const;
  void log_iteration(int iter, double err, double alpha, double delta_w) const;
};

void InteriorPoint::setup()
{
  validate(p_);
  m_ = p_.n_constraints;
  full_ = p_.initial_guess;
  std::vector<int> map(p_.n_variables, -1);
  for (int i = 0; i < p_.n_variables; ++i) {
    if (p_.lower[i] == p_.upper[i]) {
      full_[i] = p_.lower[i];
    } else {
      map[i] = static_cast<int>(free_.size());
      free_.push_back(i);
    }
  }
  n_ = static_cast<int>(free_.size());
  xl_.resize(n_);
  xu_.resize(n_);
  for (int j = 0; j < n_; ++j) {
    const double lo = p_.lower[free_[j]];
    const double hi = p_.upper[free_[j]];
    xl_[j] = lo <= -kInfinity ? -std::numeric_limits<double>::infinity()
                              : lo - kBoundRelax * std::max(1.0, std::abs(lo));
    xu_[j] = hi >= kInfinity ? std::numeric_limits<double>::infinity()
                             : hi + kBoundRelax * std::max(1.0, std::abs(hi));
    if (std::isfinite(xl_[j])) lo_.push_back(j);
    if (std::isfinite(xu_[j])) up_.push_back(j);
  }

  const auto& jp = p_.jacobian_pattern;
  for (std::size_t e = 0; e < jp.nnz(); ++e) {
    const int col = map[jp.cols[e]];
    if (col < 0) continue;
    jac_entry_.push_back(static_cast<int>(e));
    jac_row_.push_back(jp.rows[e]);
    jac_col_.push_back(col);
  }
  const auto& hp = p_.hessian_pattern;
  for (std::size_t e = 0; e < hp.nnz(); ++e) {
    const int r = map[hp.rows[e]];
    const int c = map[hp.cols[e]];
    if (r < 0 || c < 0) continue;
    hess_entry_.push_back(static_cast<int>(e));
    hess_row_.push_back(std::max(r, c));
    hess_col_.push_back(std::min(r, c));
  }
  {
    std::vector<Eigen::Triplet<double>> t;
    for (std::size_t e = 0; e < hess_row_.size(); ++e) t.emplace_back(hess_row_[e], hess_col_[e], 0.0);
    hess_lower_.resize(n_, n_);
    hess_lower_.setFromTriplets(t.begin(), t.end());
  }
  jac_buf_.resize(jp.nnz());
  hess_buf_.resize(hp.nnz());
  mu_ = o_.mu_init;
}

Eigen::VectorXd InteriorPoint::expand(const Eigen::VectorXd& x) const
{
  Eigen::VectorXd z = full_;
  for (int j = 0; j < n_; ++j) z[free_[j]] = x[j];
  return z;
}

bool InteriorPoint::eval_f(const Eigen::VectorXd& x, double& f)
{
  f = p_.objective_scale * p_.objective(expand(x));
  if (!std::isfinite(f)) failure_block_ = "objective";
  return std::isfinite(f);
}

bool InteriorPoint::eval_c(const Eigen::VectorXd& x, Eigen::VectorXd& c)
{
  if (m_ == 0) {
    c.resize(0);
    return true;
  }
  p_.constraints(expand(x), c);
  PDECOL_REQUIRE(c.size() == m_, DimensionMismatch, "constraint callback returned wrong length");
  if (!all_finite(c)) failure_block_ = "constraints";
  return all_finite(c);
}

bool InteriorPoint::eval_g(const Eigen::VectorXd& x, Eigen::VectorXd& g)
{
  Eigen::VectorXd gf;
  p_.gradient(expand(x), gf);
  PDECOL_REQUIRE(gf.size() == p_.n_variables, DimensionMismatch, "gradient callback returned wrong length");
  g.resize(n_);
  for (int j = 0; j < n_; ++j) g[j] = p_.objective_scale * gf[free_[j]];
  if (!all_finite(g)) failure_block_ = "gradient";
  return all_finite(g);
}

bool InteriorPoint::eval_jac(const Eigen::VectorXd& x)
{
  if (m_ == 0) {
    jac_.resize(0, n_);
    return true;
  }
  p_.jacobian_values(expand(x), jac_buf_);
  if (!all_finite(jac_buf_)) {
    failure_block_ = "jacobian";
    return false;
  }
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(jac_entry_.size());
  for (std::size_t e = 0; e < jac_entry_.size(); ++e) t.emplace_back(jac_row_[e], jac_col_[e], jac_buf_[jac_entry_[e]]);
  jac_.resize(m_, n_);
  jac_.setFromTriplets(t.begin(), t.end());
  return true;
}

bool InteriorPoint::eval_hess(const Eigen::VectorXd& x, const Eigen::VectorXd& lam)
{
  Eigen::VectorXd lam_full = lam;
  p_.hessian_values(expand(x), p_.objective_scale, lam_full, hess_buf_);
  if (!all_finite(hess_buf_)) {
    failure_block_ = "hessian";
    return false;
  }
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(hess_entry_.size());
  for (std::size_t e = 0; e < hess_entry_.size(); ++e) t.emplace_back(hess_row_[e], hess_col_[e], hess_buf_[hess_entry_[e]]);
  hess_lower_.resize(n_, n_);
  hess_lower_.setFromTriplets(t.begin(), t.end());
  return true;
}

Eigen::VectorXd InteriorPoint::slack_lower(const Eigen::VectorXd& x) const
{
  Eigen::VectorXd s(lo_.size());
  for (std::size_t k = 0; k < lo_.size(); ++k) s[k] = x[lo_[k]] - xl_[lo_[k]];
  return s;
}

Eigen::VectorXd InteriorPoint::slack_upper(const Eigen::VectorXd& x) const
{
  Eigen::VectorXd s(up_.size());
  for (std::size_t k = 0; k < up_.size(); ++k) s[k] = xu_[up_[k]] - x[up_[k]];
  return s;
}

double InteriorPoint::barrier(const Eigen::VectorXd& x, double f) const
{
  double phi = f;
  for (int j : lo_) phi -= mu_ * std::log(x[j] - xl_[j]);
  for (int j : up_) phi -= mu_ * std::log(xu_[j] - x[j]);
  return phi;
}

Eigen::VectorXd InteriorPoint::barrier_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& g) const
{
  Eigen::VectorXd bg = g;
  for (int j : lo_) bg[j] -= mu_ / (x[j] - xl_[j]);
  for (int j : up_) bg[j] += mu_ / (xu_[j] - x[j]);
  return bg;
}

Eigen::VectorXd InteriorPoint::sigma_diag() const
{
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n_);
  for (std::size_t k = 0; k < lo_.size(); ++k) s[lo_[k]] += zl_[k] / (x_[lo_[k]] - xl_[lo_[k]]);
  for (std::size_t k = 0; k < up_.size(); ++k) s[up_[k]] += zu_[k] / (xu_[up_[k]] - x_[up_[k]]);
  return s;
}

// KKT matrix  [ hess_factor*W + diag,  J' ;  J,  -delta_c I ]  stored in full.
// The triplet list always has the same structure so the symbolic analysis is
// reused across iterations.
bool InteriorPoint::factor(double hess_factor, const Eigen::VectorXd& diag, double delta_c)
{
  const int dim = n_ + m_;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * hess_lower_.nonZeros() + 2 * jac_.nonZeros() + dim);
  for (int k = 0; k < hess_lower_.outerSize(); ++k) {
    for (SpMat::InnerIterator it(hess_lower_, k); it; ++it) {
      const double v = hess_factor * it.value();
      t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), v);
      if (it.row() != it.col()) t.emplace_back(static_cast<int>(it.col()), static_cast<int>(it.row()), v);
    }
  }
  for (int j = 0; j < n_; ++j) t.emplace_back(j, j, diag[j]);
  for (int k = 0; k < jac_.outerSize(); ++k) {
    for (SpMat::InnerIterator it(jac_, k); it; ++it) {
      t.emplace_back(n_ + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
      t.emplace_back(static_cast<int>(it.col()), n_ + static_cast<int>(it.row()), it.value());
    }
  }
  for (int i = 0; i < m_; ++i) t.emplace_back(n_ + i, n_ + i, -delta_c);
  kkt_.resize(dim, dim);
  kkt_.setFromTriplets(t.begin(), t.end());
  kkt_.makeCompressed();
  if (!analyzed_) {
    lu_.analyzePattern(kkt_);
    analyzed_ = true;
  }
  lu_.factorize(kkt_);
  delta_c_ = delta_c;
  return lu_.info() == Eigen::Success;
}

// Solve with the factored matrix, refining against the matrix without the
// constraint regularization.
bool InteriorPoint::solve_kkt(const Eigen::VectorXd& rhs, Eigen::VectorXd& sol)
{
  auto residual = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd r = rhs - kkt_ * x;
    if (delta_c_ != 0.0) r.tail(m_) -= delta_c_ * x.tail(m_);
    return r;
  };
  sol = lu_.solve(rhs);
  if (!all_finite(sol)) return false;
  const double scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
  Eigen::VectorXd r = residual(sol);
  for (int it = 0; it < 5 && r.lpNorm<Eigen::Infinity>() > 1e-14 * scale; ++it) {
    const Eigen::VectorXd d = lu_.solve(r);
    if (!all_finite(d)) return false;
    sol += d;
    r = residual(sol);
  }
  return r.lpNorm<Eigen::Infinity>() <= 1e-6 * scale;
}

bool InteriorPoint::newton_step(Eigen::VectorXd& dx, Eigen::VectorXd& dlam)
{
  const Eigen::VectorXd sigma = sigma_diag();
  Eigen::VectorXd rhs(n_ + m_);
  rhs.head(n_) = -(barrier_gradient(x_, g_) + (m_ ? Eigen::VectorXd(jac_.transpose() * lam_) : Eigen::VectorXd::Zero(n_)));
  rhs.tail(m_) = -c_;

  double delta_w = 0.0;
  double delta_c = 0.0;
  for (int attempt = 0; attempt < 60; ++attempt) {
    const Eigen::VectorXd diag = sigma + Eigen::VectorXd::Constant(n_, delta_w);
    Eigen::VectorXd sol;
    bool ok = factor(1.0, diag, delta_c) && solve_kkt(rhs, sol);
    if (!ok) {
      if (delta_c == 0.0) {
        delta_c = 1e-8 * std::pow(mu_, 0.25);
        continue;
      }
    } else {
      dx = sol.head(n_);
      const Eigen::VectorXd wdx = hess_lower_.selfadjointView<Eigen::Lower>() * dx;
      const double curvature = dx.dot(wdx) + dx.dot(diag.cwiseProduct(dx));
      if (curvature >= 1e-10 * dx.squaredNorm() || dx.lpNorm<Eigen::Infinity>() == 0.0) {
        dlam = sol.tail(m_);
        delta_w_last_ = delta_w;
        return true;
      }
    }
    if (delta_w == 0.0) {
      delta_w = delta_w_last_ == 0.0 ? 1e-4 : std::max(1e-20, delta_w_last_ / 3.0);
    } else {
      delta_w *= delta_w_last_ == 0.0 ? 100.0 : 8.0;
    }
    if (delta_w > 1e40) break;
  }
  failure_block_ = "kkt factorization";
  return false;
}

double InteriorPoint::fraction_to_boundary(const Eigen::VectorXd& x, const Eigen::VectorXd& dx,
                                           double tau) const
{
  double alpha = 1.0;
  for (int j : lo_) {
    if (dx[j] < 0.0) alpha = std::min(alpha, -tau * (x[j] - xl_[j]) / dx[j]);
  }
  for (int j : up_) {
    if (dx[j] > 0.0) alpha = std::min(alpha, tau * (xu_[j] - x[j]) / dx[j]);
  }
  return alpha;
}

double InteriorPoint::fraction_to_boundary_dual(const Eigen::VectorXd& z, const Eigen::VectorXd& dz,
                                                double tau) const
{
  double alpha = 1.0;
  for (int k = 0; k < z.size(); ++k) {
    if (dz[k] < 0.0) alpha = std::min(alpha, -tau * z[k] / dz[k]);
  }
  return alpha;
}

bool InteriorPoint::filter_acceptable(double theta, double phi) const
{
  for (const auto& [ft, fp] : filter_) {
    if (theta >= ft && phi >= fp) return false;
  }
  return true;
}

void InteriorPoint::augment_filter(double theta, double phi)
{
  const double ft = (1.0 - kGammaTheta) * theta;
  const double fp = phi - kGammaPhi * theta;
  std::erase_if(filter_, [&](const auto& e) { return e.first >= ft && e.second >= fp; });
  filter_.emplace_back(ft, fp);
}

bool InteriorPoint::evaluate_trial(const Eigen::VectorXd& x, Trial& t)
{
  t.x = x;
  t.finite = eval_f(x, t.f) && eval_c(x, t.c);
  if (!t.finite) return false;
  t.theta = t.c.lpNorm<1>();
  t.phi = barrier(x, t.f);
  t.finite = std::isfinite(t.phi);
  return t.finite;
}

void InteriorPoint::least_squares_multipliers()
{
  if (m_ == 0) return;
  Eigen::VectorXd rhs(n_ + m_);
  Eigen::VectorXd r = g_;
  for (std::size_t k = 0; k < lo_.size(); ++k) r[lo_[k]] -= zl_[k];
  for (std::size_t k = 0; k < up_.size(); ++k) r[up_[k]] += zu_[k];
  rhs.head(n_) = -r;
  rhs.tail(m_).setZero();
  const Eigen::VectorXd diag = Eigen::VectorXd::Ones(n_);
  Eigen::VectorXd sol;
  if (factor(0.0, diag, 0.0) && solve_kkt(rhs, sol) &&
      sol.tail(m_).lpNorm<Eigen::Infinity>() <= 1e3) {
    lam_ = sol.tail(m_);
  } else {
    lam_.setZero(m_);
  }
}

// Feasibility phase: damped Gauss-Newton steps on ||c||^2 that stay interior,
// until the constraint violation drops enough to be acceptable to the filter.
bool InteriorPoint::restoration()
{
  const double theta_start = c_.lpNorm<1>();
  for (int it = 0; it < 200; ++it) {
    if (!eval_jac(x_)) return false;
    Eigen::VectorXd sigma = sigma_diag();
    const double rho = std::sqrt(mu_);
    Eigen::VectorXd diag = sigma + Eigen::VectorXd::Constant(n_, rho);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_ + m_);
    rhs.tail(m_) = -c_;
    Eigen::VectorXd sol;
    if (!(factor(0.0, diag, 0.0) && solve_kkt(rhs, sol))) {
      diag.array() += 1e-4;
      if (!(factor(0.0, diag, 1e-8) && solve_kkt(rhs, sol))) return false;
    }
    const Eigen::VectorXd dx = sol.head(n_);
    double alpha = fraction_to_boundary(x_, dx, std::max(0.99, 1.0 - mu_));
    const double theta = c_.lpNorm<1>();
    Trial t;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls) {
      if (evaluate_trial(x_ + alpha * dx, t) && t.theta <= (1.0 - 1e-4 * alpha) * theta) {
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) return false;
    x_ = t.x;
    f_ = t.f;
    c_ = t.c;
    if (t.theta <= 0.9 * theta_start && filter_acceptable(t.theta, t.phi)) {
      if (!eval_g(x_, g_) || !eval_jac(x_)) return false;
      for (std::size_t k = 0; k < lo_.size(); ++k)
        zl_[k] = std::min(zl_[k], kSigmaSafeguard * mu_ / (x_[lo_[k]] - xl_[lo_[k]]));
      for (std::size_t k = 0; k < up_.size(); ++k)
        zu_[k] = std::min(zu_[k], kSigmaSafeguard * mu_ / (xu_[up_[k]] - x_[up_[k]]));
      least_squares_multipliers();
      return true;
    }
  }
  return false;
}

double InteriorPoint::kkt_error(double mu, double* dual_out, double* compl_out) const
{
  Eigen::VectorXd r = g_;
  if (m_) r += jac_.transpose() * lam_;
  for (std::size_t k = 0; k < lo_.size(); ++k) r[lo_[k]] -= zl_[k];
  for (std::size_t k = 0; k < up_.size(); ++k) r[up_[k]] += zu_[k];
  const double zsum = zl_.lpNorm<1>() + zu_.lpNorm<1>();
  const int nz = static_cast<int>(lo_.size() + up_.size());
  const double sd = std::max(kScaleMax, (lam_.lpNorm<1>() + zsum) / std::max(1, m_ + n_)) / kScaleMax;
  const double sc = std::max(kScaleMax, zsum / std::max(1, nz)) / kScaleMax;
  double compl_err = 0.0;
  for (std::size_t k = 0; k < lo_.size(); ++k)
    compl_err = std::max(compl_err, std::abs(zl_[k] * (x_[lo_[k]] - xl_[lo_[k]]) - mu));
  for (std::size_t k = 0; k < up_.size(); ++k)
    compl_err = std::max(compl_err, std::abs(zu_[k] * (xu_[up_[k]] - x_[up_[k]]) - mu));
  const double dual = r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0;
  const double primal = m_ ? c_.lpNorm<Eigen::Infinity>() : 0.0;
  if (dual_out) *dual_out = dual;
  if (compl_out) *compl_out = compl_err;
  return std::max({dual / sd, primal, compl_err / sc});
}

void InteriorPoint::log_iteration(int iter, double err, double alpha, double delta_w) const
{
  if (o_.print_level <= 0 || !o_.log) return;
  *o_.log << std::setw(4) << iter << std::scientific << std::setprecision(6) << "  f=" << f_
          << "  inf_pr=" << (m_ ? c_.lpNorm<Eigen::Infinity>() : 0.0) << "  err=" << err
          << "  mu=" << std::setprecision(2) << mu_ << "  alpha=" << alpha << "  dw=" << delta_w
          << std::defaultfloat << '\n';
}

SolveReport InteriorPoint::run()
{
  const auto start = Clock::now();
  SolveReport rep;
  auto finish = [&](SolveStatus status, int iter, const std::string& msg) {
    rep.status = status;
    rep.iterations = iter;
    rep.message = msg;
    Eigen::VectorXd z = expand(x_);
    for (int i = 0; i < p_.n_variables; ++i) z[i] = std::clamp(z[i], p_.lower[i], p_.upper[i]);
    rep.z = z;
    rep.multipliers = lam_;
    rep.objective = p_.objective(z);
    Eigen::VectorXd c;
    if (m_) {
      p_.constraints(z, c);
      rep.constraint_violation = c.lpNorm<Eigen::Infinity>();
    }
    // A failure at the starting point can leave the gradient or Jacobian unset.
    const bool evaluated = g_.size() == n_ && jac_.rows() == m_ && jac_.cols() == n_;
    rep.optimality = evaluated ? kkt_error(0.0, nullptr, nullptr) : std::numeric_limits<double>::quiet_NaN();
    rep.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    return rep;
  };

  // Starting point pushed strictly inside the bounds.
  x_.resize(n_);
  for (int j = 0; j < n_; ++j) {
    double v = p_.initial_guess[free_[j]];
    const double lo = xl_[j], hi = xu_[j];
    const double width = hi - lo;
    if (std::isfinite(lo)) {
      double push = kBoundPush * std::max(1.0, std::abs(lo));
      if (std::isfinite(hi)) push = std::min(push, kBoundPush * width);
      v = std::max(v, lo + push);
    }
    if (std::isfinite(hi)) {
      double push = kBoundPush * std::max(1.0, std::abs(hi));
      if (std::isfinite(lo)) push = std::min(push, kBoundPush * width);
      v = std::min(v, hi - push);
    }
    x_[j] = v;
  }
  zl_ = Eigen::VectorXd::Ones(lo_.size());
  zu_ = Eigen::VectorXd::Ones(up_.size());
  lam_ = Eigen::VectorXd::Zero(m_);

  if (!eval_f(x_, f_) || !eval_g(x_, g_) || !eval_c(x_, c_) || !eval_jac(x_))
    return finish(SolveStatus::NumericalFailure, 0, "non-finite value in " + failure_block_ + " at the starting point");
  least_squares_multipliers();

  const double theta0 = m_ ? c_.lpNorm<1>() : 0.0;
  theta_max_ = 1e4 * std::max(1.0, theta0);
  theta_min_ = 1e-4 * std::max(1.0, theta0);

  double alpha = 0.0;
  for (int iter = 0; iter <= o_.max_iterations; ++iter) {
    const double err0 = kkt_error(0.0, nullptr, nullptr);
    log_iteration(iter, err0, alpha, delta_w_last_);
    const double viol = m_ ? c_.lpNorm<Eigen::Infinity>() : 0.0;
    if (err0 <= o_.tolerance && viol <= o_.constraint_tolerance)
      return finish(SolveStatus::Converged, iter, "optimal solution found");
    if (iter == o_.max_iterations) break;

    while (kkt_error(mu_, nullptr, nullptr) <= kMuTolFactor * mu_) {
      const double next = std::max(o_.tolerance / 10.0, std::min(kMuDecrease * mu_, std::pow(mu_, kMuPower)));
      if (next >= mu_) break;
      mu_ = next;
      filter_.clear();
    }

    if (!eval_hess(x_, lam_))
      return finish(SolveStatus::NumericalFailure, iter, "non-finite value in hessian");
    Eigen::VectorXd dx, dlam;
    if (!newton_step(dx, dlam))
      return finish(SolveStatus::NumericalFailure, iter, "could not factor the KKT system");

    const double tau = std::max(0.99, 1.0 - mu_);
    const Eigen::VectorXd sl = slack_lower(x_), su = slack_upper(x_);
    Eigen::VectorXd dzl(lo_.size()), dzu(up_.size());
    for (std::size_t k = 0; k < lo_.size(); ++k) dzl[k] = (mu_ - zl_[k] * sl[k] - zl_[k] * dx[lo_[k]]) / sl[k];
    for (std::size_t k = 0; k < up_.size(); ++k) dzu[k] = (mu_ - zu_[k] * su[k] + zu_[k] * dx[up_[k]]) / su[k];
    const double alpha_z = std::min(fraction_to_boundary_dual(zl_, dzl, tau), fraction_to_boundary_dual(zu_, dzu, tau));
    const double alpha_max = fraction_to_boundary(x_, dx, tau);

    // Filter line search.
    const double theta = m_ ? c_.lpNorm<1>() : 0.0;
    const double phi = barrier(x_, f_);
    const double slope = barrier_gradient(x_, g_).dot(dx);
    double alpha_min = kGammaTheta;
    if (slope < 0.0) {
      alpha_min = std::min({kGammaTheta, kGammaPhi * theta / -slope,
                            kSwitchDelta * std::pow(theta, kSwitchTheta) / std::pow(-slope, kSwitchPhi)});
    }
    alpha_min *= kAlphaMinFactor;

    const bool tiny = (dx.cwiseAbs().array() / (1.0 + x_.cwiseAbs().array())).maxCoeff() < 10.0 * std::numeric_limits<double>::epsilon();
    Trial accepted;
    bool found = false;
    bool f_type = false;
    alpha = alpha_max;
    if (tiny) {
      found = evaluate_trial(x_ + alpha * dx, accepted);
    }
    for (int ls = 0; !found && ls < 60 && alpha >= alpha_min; ++ls) {
      Trial t;
      if (evaluate_trial(x_ + alpha * dx, t) && t.theta <= theta_max_ && filter_acceptable(t.theta, t.phi)) {
        const bool switching = slope < 0.0 && alpha * std::pow(-slope, kSwitchPhi) > kSwitchDelta * std::pow(theta, kSwitchTheta);
        if (theta <= theta_min_ && switching) {
          if (t.phi <= phi + kArmijo * alpha * slope) {
            accepted = t;
            found = true;
            f_type = true;
            break;
          }
        } else if (t.theta <= (1.0 - kGammaTheta) * theta || t.phi <= phi - kGammaPhi * theta) {
          accepted = t;
          found = true;
          break;
        }
      }
      // Second-order correction on the first trial when infeasibility grew.
      if (ls == 0 && t.finite && m_ && t.theta >= theta) {
        Eigen::VectorXd csoc = alpha * c_ + t.c;
        double theta_old = theta;
        double theta_trial = t.theta;
        const Eigen::VectorXd diag = sigma_diag() + Eigen::VectorXd::Constant(n_, delta_w_last_);
        Eigen::VectorXd rhs(n_ + m_);
        rhs.head(n_) = -(barrier_gradient(x_, g_) + jac_.transpose() * lam_);
        for (int soc = 0; soc < kMaxSoc; ++soc) {
          if (theta_trial > kSocContraction * theta_old && soc > 0) break;
          rhs.tail(m_) = -csoc;
          Eigen::VectorXd sol;
          if (!solve_kkt(rhs, sol)) break;
          const Eigen::VectorXd dxs = sol.head(n_);
          const double as = fraction_to_boundary(x_, dxs, tau);
          Trial ts;
          if (!evaluate_trial(x_ + as * dxs, ts)) break;
          if (ts.theta <= theta_max_ && filter_acceptable(ts.theta, ts.phi)) {
            const bool switching = slope < 0.0 && alpha * std::pow(-slope, kSwitchPhi) > kSwitchDelta * std::pow(theta, kSwitchTheta);
            if (theta <= theta_min_ && switching) {
              if (ts.phi <= phi + kArmijo * alpha * slope) {
                accepted = ts;
                found = true;
                f_type = true;
              }
            } else if (ts.theta <= (1.0 - kGammaTheta) * theta || ts.phi <= phi - kGammaPhi * theta) {
              accepted = ts;
              found = true;
            }
          }
          if (found) {
            dx = (ts.x - x_) / alpha;
            break;
          }
          theta_old = theta_trial;
          theta_trial = ts.theta;
          csoc = as * csoc + ts.c;
        }
        if (found) break;
      }
      alpha *= 0.5;
    }

    if (!found) {
      if (!m_ || !restoration())
        return finish(SolveStatus::RestorationFailed, iter, "line search failed and restoration did not recover");
      augment_filter(theta, phi);
      continue;
    }

    if (!f_type) augment_filter(theta, phi);
    x_ = accepted.x;
    f_ = accepted.f;
    c_ = accepted.c;
    lam_ += alpha * dlam;
    zl_ += alpha_z * dzl;
    zu_ += alpha_z * dzu;
    for (std::size_t k = 0; k < lo_.size(); ++k) {
      const double s = x_[lo_[k]] - xl_[lo_[k]];
      zl_[k] = std::max(std::min(zl_[k], kSigmaSafeguard * mu_ / s), mu_ / (kSigmaSafeguard * s));
    }
    for (std::size_t k = 0; k < up_.size(); ++k) {
      const double s = xu_[up_[k]] - x_[up_[k]];
      zu_[k] = std::max(std::min(zu_[k], kSigmaSafeguard * mu_ / s), mu_ / (kSigmaSafeguard * s));
    }
    if (!eval_g(x_, g_) || !eval_jac(x_))
      return finish(SolveStatus::NumericalFailure, iter, "non-finite value in " + failure_block_);
  }
  return finish(SolveStatus::MaxIterations, o_.max_iterations, "iteration limit reached");
}

}  // namespace

SolveReport solve(const NlpProblem& problem, const SolveOptions& options)
{
  InteriorPoint ip(problem, options);
  return ip.run();
}

}  // namespace pdecol
