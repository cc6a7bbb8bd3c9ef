#include "blockreg/gibbs.hpp"

#include <cmath>
#include <limits>

#include "blockreg/math.hpp"

namespace blockreg::gibbs {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

Eigen::VectorXd residuals_excluding(Eigen::Index j, const GenotypeMatrix &X,
                                    const PhenotypeVector &y,
                                    const Eigen::VectorXd &beta) {
  Eigen::VectorXd z = y.values - X.values * beta;
  z += beta[j] * X.values.col(j);
  return z;
}

double marginal_loglik_inactive(const Eigen::VectorXd &z, double sigma_sq) {
  const double n = static_cast<double>(z.size());
  return -0.5 * n * std::log(2.0 * M_PI * sigma_sq) -
         z.squaredNorm() / (2.0 * sigma_sq);
}

ActiveMarginal marginal_loglik_active(const Eigen::VectorXd &z,
                                      const Eigen::VectorXd &x_col,
                                      double sigma_sq, double lambda) {
  const double s_xx = x_col.squaredNorm();
  if (s_xx <= 0.0)
    throw ZeroVarianceColumn("marginal likelihood needs sum_i x_ij^2 > 0");
  const double s_zx = z.dot(x_col);
  const double s_zz = z.squaredNorm();
  const double n = static_cast<double>(z.size());
  const double half_inv_lambda = 0.5 / lambda;

  ActiveMarginal m;
  m.s_sq = sigma_sq / s_xx;
  m.mu_minus = (s_zx + half_inv_lambda) / s_xx;
  m.mu_plus = (s_zx - half_inv_lambda) / s_xx;
  const double s = std::sqrt(m.s_sq);
  const double base = -s_zz / (2.0 * sigma_sq) +
                      0.5 * std::log(2.0 * M_PI * m.s_sq);
  // The quadratic completion mu^2/(2 s^2) and the truncation log-CDF are
  // combined in one stable evaluation.
  m.log_A_minus = base + log_norm_cdf_plus_half_sq(-m.mu_minus / s);
  m.log_A_plus = base + log_norm_cdf_plus_half_sq(m.mu_plus / s);
  m.log_K = -0.5 * n * std::log(2.0 * M_PI * sigma_sq) -
            std::log(4.0 * lambda * sigma_sq);
  m.total = m.log_K + log_sum_exp(m.log_A_minus, m.log_A_plus);
  return m;
}

namespace {

// Standard-normal draw restricted to (a, inf). Robert's exponential
// proposal once the cut is past the bulk; plain rejection otherwise.
double std_normal_lower_truncated(double a, Rng &rng) {
  if (a < 0.4) {
    for (;;) {
      const double x = rng.normal();
      if (x > a) return x;
    }
  }
  const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double x = a + rng.exponential(alpha);
    const double diff = x - alpha;
    if (rng.uniform() <= std::exp(-0.5 * diff * diff)) return x;
  }
}

}  // namespace

double sample_truncated_normal(double mean, double sd, Side side, Rng &rng) {
  if (side == Side::negative) {
    // mirror: -beta ~ N(-mean, sd^2) restricted to (0, inf)
    const double a = mean / sd;  // (0 - (-mean)) / sd
    double w;
    do {
      w = -mean + sd * std_normal_lower_truncated(a, rng);
    } while (!(w > 0.0));
    return -w;
  }
  const double a = -mean / sd;
  double x;
  do {
    x = mean + sd * std_normal_lower_truncated(a, rng);
  } while (!(x > 0.0));
  return x;
}

double sample_betaj(int c_j, const ActiveMarginal &active, Rng &rng) {
  if (c_j == 0) return 0.0;
  const double lse = log_sum_exp(active.log_A_minus, active.log_A_plus);
  const double w_minus = std::exp(active.log_A_minus - lse);
  const double s = std::sqrt(active.s_sq);
  if (rng.bernoulli(w_minus))
    return sample_truncated_normal(active.mu_minus, s, Side::negative, rng);
  return sample_truncated_normal(active.mu_plus, s, Side::positive, rng);
}

double sample_sigma_sq(const ModelState &state, const GenotypeMatrix &X,
                       const PhenotypeVector &y, const Hyperparameters &hyper,
                       Rng &rng, SigmaShape shape_mode) {
  const double n = static_cast<double>(X.n_individuals());
  double j_term;
  if (shape_mode == SigmaShape::paper) {
    j_term = 2.0 * static_cast<double>(X.n_markers());
  } else {
    long j_active = 0;
    for (int cj : state.c) j_active += cj;
    j_term = 2.0 * static_cast<double>(j_active);
  }
  const double rss = (y.values - X.values * state.beta).squaredNorm();
  const double l1 = state.beta.array().abs().sum();
  const double shape = 0.5 * (n + j_term + hyper.nu0);
  const double scale =
      0.5 * (rss + l1 / state.lambda + hyper.nu0 * hyper.s0_sq);
  return rng.inv_gamma(shape, scale);
}

double sample_lambda(const ModelState &state, const Hyperparameters &hyper,
                     Rng &rng) {
  long j_active = 0;
  double l1_active = 0.0;
  for (std::size_t j = 0; j < state.c.size(); ++j) {
    if (state.c[j] == 1) {
      ++j_active;
      l1_active += std::abs(state.beta[static_cast<Eigen::Index>(j)]);
    }
  }
  const double shape = static_cast<double>(j_active) + hyper.alpha;
  const double scale = l1_active / (2.0 * state.sigma_sq) + hyper.gamma;
  return rng.inv_gamma(shape, scale);
}

namespace {

// log prior factor for c_j = k given its neighbors (Markov mode) or the
// i.i.d. Bernoulli factor.
double activation_log_prior(Eigen::Index j, int k, const ModelState &state,
                            const MarkerMap &map, const SamplerOptions &opts) {
  if (opts.prior == ActivationPrior::bernoulli) {
    const double p = state.pi1;
    return k == 1 ? std::log(p) : std::log1p(-p);
  }
  const markov::TransitionParams params{state.pi0, state.pi1};
  const Eigen::Index last = static_cast<Eigen::Index>(state.c.size()) - 1;
  double left = (j == 0)
                    ? markov::initial_prob(k)
                    : markov::transition_prob(state.c[j - 1], k, map.d[j],
                                              map.rho[j], params);
  double right = (j == last)
                     ? 1.0
                     : markov::transition_prob(k, state.c[j + 1], map.d[j + 1],
                                               map.rho[j + 1], params);
  const double p = left * right;
  return p > 0.0 ? std::log(p) : kNegInf;
}

int draw_cj(Eigen::Index j, const ModelState &state, const MarkerMap &map,
            double loglik0, double loglik1, const SamplerOptions &opts,
            Rng &rng) {
  const double w0 = loglik0 + activation_log_prior(j, 0, state, map, opts);
  const double w1 = loglik1 + activation_log_prior(j, 1, state, map, opts);
  if (w0 == kNegInf && w1 == kNegInf)
    return state.c[j];  // frozen-chain contradiction: leave untouched
  const double lse = log_sum_exp(w0, w1);
  const double p1 = std::exp(w1 - lse);
  return rng.bernoulli(p1) ? 1 : 0;
}

}  // namespace

int sample_cj(Eigen::Index j, ModelState &state, const GenotypeMatrix &X,
              const PhenotypeVector &y, const MarkerMap &map,
              const Hyperparameters & /*hyper*/, Rng &rng,
              const SamplerOptions &opts) {
  const Eigen::VectorXd z = residuals_excluding(j, X, y, state.beta);
  const double l0 = marginal_loglik_inactive(z, state.sigma_sq);
  const ActiveMarginal am =
      marginal_loglik_active(z, X.values.col(j), state.sigma_sq, state.lambda);
  const int k = draw_cj(j, state, map, l0, am.total, opts, rng);
  state.c[j] = k;
  return k;
}

Chain::Chain(const Dataset &data, const Hyperparameters &hyper,
             const SamplerOptions &opts, std::uint64_t seed)
    : Chain(data, hyper, opts, initial_state(data, hyper, seed), seed) {
  if (opts.prior == ActivationPrior::bernoulli) {
    state_.pi1 = hyper.bern_a / (hyper.bern_a + hyper.bern_b);
    state_.pi0 = 1.0 - state_.pi1;
  }
}

Chain::Chain(const Dataset &data, const Hyperparameters &hyper,
             const SamplerOptions &opts, ModelState init, std::uint64_t seed)
    : data_(data),
      hyper_(hyper),
      opts_(opts),
      state_(std::move(init)),
      rng_(seed) {
  hyper_.validate();
  refresh_fitted();
}

void Chain::refresh_fitted() {
  fitted_ = data_.genotypes.values * state_.beta;
}

double Chain::train_error() const {
  return (data_.phenotype.values - fitted_).squaredNorm();
}

void Chain::sweep() {
  const Eigen::Index J = data_.genotypes.n_markers();
  Eigen::VectorXd z(data_.genotypes.n_individuals());
  for (Eigen::Index j = 0; j < J; ++j) {
    const auto x_col = data_.genotypes.values.col(j);
    z = data_.phenotype.values - fitted_ + state_.beta[j] * x_col;
    const double l0 = marginal_loglik_inactive(z, state_.sigma_sq);
    const ActiveMarginal am =
        marginal_loglik_active(z, x_col, state_.sigma_sq, state_.lambda);
    const int k = draw_cj(j, state_, data_.map, l0, am.total, opts_, rng_);
    const double new_beta = (k == 1) ? sample_betaj(1, am, rng_) : 0.0;
    if (new_beta != state_.beta[j])
      fitted_ += x_col * (new_beta - state_.beta[j]);
    state_.c[j] = k;
    state_.beta[j] = new_beta;
  }

  if (opts_.update_sigma)
    state_.sigma_sq = sample_sigma_sq(state_, data_.genotypes,
                                      data_.phenotype, hyper_, rng_,
                                      opts_.sigma_shape);

  if (opts_.update_transition) {
    if (opts_.prior == ActivationPrior::bernoulli) {
      long j_active = 0;
      for (int cj : state_.c) j_active += cj;
      const long j_total = static_cast<long>(state_.c.size());
      const double p =
          rng_.beta(hyper_.bern_a + static_cast<double>(j_active),
                    hyper_.bern_b + static_cast<double>(j_total - j_active));
      state_.pi1 = p;
      state_.pi0 = 1.0 - p;
    } else if (opts_.swap_pi_order) {
      state_.pi1 =
          markov::sample_pi1(state_.c, data_.map, state_.pi1, hyper_, rng_);
      state_.pi0 =
          markov::sample_pi0(state_.c, data_.map, state_.pi0, hyper_, rng_);
    } else {
      state_.pi0 =
          markov::sample_pi0(state_.c, data_.map, state_.pi0, hyper_, rng_);
      state_.pi1 =
          markov::sample_pi1(state_.c, data_.map, state_.pi1, hyper_, rng_);
    }
  }

  if (opts_.update_lambda)
    state_.lambda = sample_lambda(state_, hyper_, rng_);
}

SampleTrace Chain::run(const SamplingSchedule &schedule) {
  schedule.validate();
  SampleTrace trace;
  trace.schedule = schedule;
  trace.retained.reserve(static_cast<std::size_t>(schedule.n_retained()));
  for (long t = 0; t < schedule.burn_in; ++t) sweep();
  for (long t = 1; t <= schedule.iterations; ++t) {
    sweep();
    if (t % schedule.thin == 0)
      trace.retained.push_back(RetainedSample{state_, train_error()});
  }
  return trace;
}

SampleTrace run_chain(const Dataset &data, const Hyperparameters &hyper,
                      const SamplingSchedule &schedule,
                      const SamplerOptions &opts) {
  Chain chain(data, hyper, opts, schedule.seed);
  return chain.run(schedule);
}

}  // namespace blockreg::gibbs
