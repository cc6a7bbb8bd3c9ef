#include "blockreg/baselines.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "blockreg/rng.hpp"

namespace blockreg::baselines {

Eigen::VectorXd ridge_fit(const GenotypeMatrix &X, const PhenotypeVector &y,
                          double reg) {
  if (!(reg > 0.0)) throw InvalidArgument("ridge regularizer must be > 0");
  const Eigen::Index J = X.n_markers();
  Eigen::MatrixXd gram = X.values.transpose() * X.values;
  gram.diagonal().array() += reg;
  Eigen::LDLT<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success)
    throw SolveFailure("ridge system factorization failed");
  Eigen::VectorXd beta = solver.solve(X.values.transpose() * y.values);
  if (!beta.allFinite()) throw SolveFailure("ridge solution is not finite");
  (void)J;
  return beta;
}

namespace {
inline double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}
}  // namespace

LassoFit lasso_fit(const GenotypeMatrix &X, const PhenotypeVector &y,
                   double penalty, double tol, long max_cycles) {
  if (penalty < 0.0) throw InvalidArgument("lasso penalty must be >= 0");
  const Eigen::Index J = X.n_markers();
  LassoFit fit;
  fit.penalty = penalty;
  fit.beta = Eigen::VectorXd::Zero(J);
  Eigen::VectorXd s_xx(J);
  for (Eigen::Index j = 0; j < J; ++j) s_xx[j] = X.values.col(j).squaredNorm();
  Eigen::VectorXd resid = y.values;

  double max_change = std::numeric_limits<double>::infinity();
  long cycle = 0;
  while (max_change >= tol && cycle < max_cycles) {
    max_change = 0.0;
    for (Eigen::Index j = 0; j < J; ++j) {
      const auto x_col = X.values.col(j);
      const double old = fit.beta[j];
      const double rho = x_col.dot(resid) + s_xx[j] * old;
      const double updated = soft_threshold(rho, penalty) / s_xx[j];
      if (updated != old) {
        resid += x_col * (old - updated);
        fit.beta[j] = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    ++cycle;
  }
  fit.n_iterations = cycle;

  double kkt = 0.0;
  for (Eigen::Index j = 0; j < J; ++j) {
    const double grad = X.values.col(j).dot(resid);
    if (fit.beta[j] == 0.0) {
      kkt = std::max(kkt, std::abs(grad) - penalty);
    } else {
      kkt = std::max(kkt, std::abs(grad - penalty * (fit.beta[j] > 0 ? 1.0 : -1.0)));
    }
  }
  fit.max_kkt_violation = std::max(kkt, 0.0);
  if (max_change >= tol)
    throw NoConvergence("lasso coordinate descent did not converge; max KKT violation " +
                        std::to_string(fit.max_kkt_violation));
  return fit;
}

std::vector<double> default_penalty_grid(const GenotypeMatrix &X,
                                         const PhenotypeVector &y, int n) {
  double pen_max = 0.0;
  for (Eigen::Index j = 0; j < X.n_markers(); ++j)
    pen_max = std::max(pen_max, std::abs(X.values.col(j).dot(y.values)));
  if (pen_max <= 0.0) pen_max = 1.0;
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double lo = std::log(1e-3 * pen_max);
  const double hi = std::log(pen_max);
  for (int i = 0; i < n; ++i) {
    const double t = (n == 1) ? 0.0 : static_cast<double>(i) / (n - 1);
    grid[static_cast<std::size_t>(i)] = std::exp(hi + t * (lo - hi));
  }
  return grid;  // descending
}

double lasso_cv(const GenotypeMatrix &X, const PhenotypeVector &y,
                std::span<const double> grid, int folds, std::uint64_t seed) {
  if (folds < 2) throw InvalidArgument("need at least 2 CV folds");
  if (grid.empty()) throw InvalidArgument("empty penalty grid");
  const Eigen::Index n = X.n_individuals();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());
  std::vector<int> fold_of(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    fold_of[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] =
        static_cast<int>(i % folds);

  // larger penalties first so ties resolve toward the sparser model
  std::vector<double> penalties(grid.begin(), grid.end());
  std::sort(penalties.begin(), penalties.end(), std::greater<>());

  double best_penalty = penalties.front();
  double best_mse = std::numeric_limits<double>::infinity();
  for (double penalty : penalties) {
    double sse = 0.0;
    long n_test = 0;
    for (int f = 0; f < folds; ++f) {
      std::vector<Eigen::Index> train, test;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (fold_of[static_cast<std::size_t>(i)] == f)
          test.push_back(i);
        else
          train.push_back(i);
      }
      if (test.empty() || train.empty()) continue;
      GenotypeMatrix Xtr;
      Xtr.values = X.values(train, Eigen::all);
      PhenotypeVector ytr{y.values(train)};
      const LassoFit fit = lasso_fit(Xtr, ytr, penalty);
      for (Eigen::Index i : test) {
        const double pred = X.values.row(i).dot(fit.beta);
        const double err = y.values[i] - pred;
        sse += err * err;
        ++n_test;
      }
    }
    const double mse = sse / static_cast<double>(n_test);
    if (mse < best_mse) {
      best_mse = mse;
      best_penalty = penalty;
    }
  }
  return best_penalty;
}

SampleTrace bernoulli_prior_chain(const Dataset &data,
                                  const Hyperparameters &hyper,
                                  const SamplingSchedule &schedule) {
  gibbs::SamplerOptions opts;
  opts.prior = gibbs::ActivationPrior::bernoulli;
  return gibbs::run_chain(data, hyper, schedule, opts);
}

WaldResult single_marker_wald(const GenotypeMatrix &X,
                              const PhenotypeVector &y) {
  const Eigen::Index n = X.n_individuals();
  const Eigen::Index J = X.n_markers();
  if (n < 3) throw DimensionMismatch("Wald test needs N >= 3");
  WaldResult res;
  res.statistic.resize(J);
  res.p_value.resize(J);
  res.neg_log10_p.resize(J);
  const boost::math::students_t tdist(static_cast<double>(n - 2));
  const double y_mean = y.values.mean();
  const Eigen::VectorXd yc = y.values.array() - y_mean;
  const double s_yy = yc.squaredNorm();
  constexpr double kPClamp = 1e-300;

  for (Eigen::Index j = 0; j < J; ++j) {
    const auto x = X.values.col(j);
    const double x_mean = x.mean();
    const Eigen::VectorXd xc = x.array() - x_mean;
    const double s_xx = xc.squaredNorm();
    if (s_xx <= 0.0)
      throw ZeroVarianceColumn("constant column in Wald test");
    const double s_xy = xc.dot(yc);
    const double b = s_xy / s_xx;
    const double rss = s_yy - b * s_xy;
    const double dof = static_cast<double>(n - 2);
    const double se_sq = std::max(rss, 0.0) / dof / s_xx;
    double t, p;
    if (se_sq <= 0.0) {
      t = std::numeric_limits<double>::infinity();
      p = kPClamp;
    } else {
      t = b / std::sqrt(se_sq);
      p = 2.0 * boost::math::cdf(boost::math::complement(tdist, std::abs(t)));
      p = std::max(p, kPClamp);
    }
    res.statistic[j] = t;
    res.p_value[j] = p;
    res.neg_log10_p[j] = -std::log10(p);
  }
  return res;
}

}  // namespace blockreg::baselines
