#ifndef BLOCKREG_GIBBS_HPP
#define BLOCKREG_GIBBS_HPP

#include <Eigen/Dense>
#include <cstdint>

#include "blockreg/markov_prior.hpp"
#include "blockreg/rng.hpp"
#include "blockreg/types.hpp"

namespace blockreg::gibbs {

// Closed-form pieces of the c_j = 1 marginal likelihood: the two half-line
// integrals of the Laplace-slab model, kept in log space.
struct ActiveMarginal {
  double log_A_minus = 0.0;
  double log_A_plus = 0.0;
  double mu_minus = 0.0;
  double mu_plus = 0.0;
  double s_sq = 0.0;  // sigma_sq / sum_i x_ij^2
  double log_K = 0.0;
  double total = 0.0;  // log_K + logsumexp(log_A_minus, log_A_plus)
};

// z_i = y_i - sum_{k != j} x_ik beta_k  (beta_j excluded regardless of value)
Eigen::VectorXd residuals_excluding(Eigen::Index j, const GenotypeMatrix &X,
                                    const PhenotypeVector &y,
                                    const Eigen::VectorXd &beta);

double marginal_loglik_inactive(const Eigen::VectorXd &z, double sigma_sq);

ActiveMarginal marginal_loglik_active(const Eigen::VectorXd &z,
                                      const Eigen::VectorXd &x_col,
                                      double sigma_sq, double lambda);

enum class Side { negative, positive };

// Draw from N(mean, sd^2) restricted to the requested open half-line.
// Tail-robust: uses an exponential-proposal rejection step when the
// truncation point is far from the mean.
double sample_truncated_normal(double mean, double sd, Side side, Rng &rng);

// Spike draw for c_j = 0; for c_j = 1, mixture of the two truncated normals
// with the negative component weighted by A_(-) / (A_(-) + A_(+)).
double sample_betaj(int c_j, const ActiveMarginal &active, Rng &rng);

enum class ActivationPrior { markov, bernoulli };

// Shape of the sigma^2 inverse-gamma posterior: `paper` uses (N+2J+nu0)/2,
// `active` substitutes the active count J' for J.
enum class SigmaShape { paper, active };

struct SamplerOptions {
  ActivationPrior prior = ActivationPrior::markov;
  SigmaShape sigma_shape = SigmaShape::paper;
  bool update_sigma = true;
  bool update_lambda = true;
  bool update_transition = true;  // pi0/pi1, or p in bernoulli mode
  bool swap_pi_order = false;     // sample pi1 before pi0
};

double sample_sigma_sq(const ModelState &state, const GenotypeMatrix &X,
                       const PhenotypeVector &y, const Hyperparameters &hyper,
                       Rng &rng, SigmaShape shape = SigmaShape::paper);

double sample_lambda(const ModelState &state, const Hyperparameters &hyper,
                     Rng &rng);

// Resamples c_j (marginalizing beta_j) in place and returns the new value.
// Does not touch beta_j.
int sample_cj(Eigen::Index j, ModelState &state, const GenotypeMatrix &X,
              const PhenotypeVector &y, const MarkerMap &map,
              const Hyperparameters &hyper, Rng &rng,
              const SamplerOptions &opts = {});

class Chain {
 public:
  Chain(const Dataset &data, const Hyperparameters &hyper,
        const SamplerOptions &opts, std::uint64_t seed);
  Chain(const Dataset &data, const Hyperparameters &hyper,
        const SamplerOptions &opts, ModelState init, std::uint64_t seed);

  // One full sweep: (c_j, beta_j) for j ascending, then sigma^2, pi0, pi1
  // (or p), then lambda. Residuals are maintained incrementally.
  void sweep();

  SampleTrace run(const SamplingSchedule &schedule);

  const ModelState &state() const { return state_; }
  ModelState &mutable_state() { return state_; }
  double train_error() const;
  void refresh_fitted();  // recompute the fitted-value cache from beta
  Rng &rng() { return rng_; }

 private:
  const Dataset &data_;
  Hyperparameters hyper_;
  SamplerOptions opts_;
  ModelState state_;
  Eigen::VectorXd fitted_;
  Rng rng_;
};

SampleTrace run_chain(const Dataset &data, const Hyperparameters &hyper,
                      const SamplingSchedule &schedule,
                      const SamplerOptions &opts = {});

}  // namespace blockreg::gibbs

#endif
