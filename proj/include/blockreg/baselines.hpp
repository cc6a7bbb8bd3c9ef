#ifndef BLOCKREG_BASELINES_HPP
#define BLOCKREG_BASELINES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "blockreg/gibbs.hpp"
#include "blockreg/types.hpp"

namespace blockreg::baselines {

// Solves (X'X + reg I) beta = X'y.
Eigen::VectorXd ridge_fit(const GenotypeMatrix &X, const PhenotypeVector &y,
                          double reg = 0.1);

struct LassoFit {
  Eigen::VectorXd beta;
  double penalty = 0.0;
  long n_iterations = 0;       // coordinate-descent cycles used
  double max_kkt_violation = 0.0;
};

// Minimizes (1/2)||y - X beta||^2 + penalty * ||beta||_1 by cyclic
// coordinate descent with soft-thresholding.
LassoFit lasso_fit(const GenotypeMatrix &X, const PhenotypeVector &y,
                   double penalty, double tol = 1e-7,
                   long max_cycles = 10000);

// 50 log-spaced penalties from max_j |x_j . y| down to 1e-3 of it.
std::vector<double> default_penalty_grid(const GenotypeMatrix &X,
                                         const PhenotypeVector &y,
                                         int n = 50);

// k-fold CV by mean squared prediction error; ties go to the larger
// (sparser) penalty. Fold assignment is seeded.
double lasso_cv(const GenotypeMatrix &X, const PhenotypeVector &y,
                std::span<const double> grid, int folds, std::uint64_t seed);

// Same sampler with an i.i.d. Bernoulli(p) prior on c and a conjugate
// Beta update for p.
SampleTrace bernoulli_prior_chain(const Dataset &data,
                                  const Hyperparameters &hyper,
                                  const SamplingSchedule &schedule);

struct WaldResult {
  Eigen::VectorXd statistic;
  Eigen::VectorXd p_value;       // clamped below at 1e-300
  Eigen::VectorXd neg_log10_p;
};

// Per-marker simple linear regression y = a + b x_j; two-sided p from
// t(N-2).
WaldResult single_marker_wald(const GenotypeMatrix &X,
                              const PhenotypeVector &y);

}  // namespace blockreg::baselines

#endif
