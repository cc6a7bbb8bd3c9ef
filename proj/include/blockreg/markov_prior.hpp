#ifndef BLOCKREG_MARKOV_PRIOR_HPP
#define BLOCKREG_MARKOV_PRIOR_HPP

#include <span>

#include "blockreg/rng.hpp"
#include "blockreg/types.hpp"

namespace blockreg::markov {

struct TransitionParams {
  double pi0 = 0.5;  // P(stay at 0 | recombination)
  double pi1 = 0.5;  // P(stay at 1 | recombination)
};

// P(c_next | c_prev) = exp(-d*rho) * delta(c_next, c_prev)
//                    + (1 - exp(-d*rho)) * Pi[c_prev][c_next]
double transition_prob(int c_prev, int c_next, double d_kb, double rho,
                       const TransitionParams &params);

// The chain's start distribution is uniform over {0,1}.
double initial_prob(int c1);

double chain_log_prior(std::span<const int> c, const MarkerMap &map,
                       const TransitionParams &params);

struct BetaShapes {
  double a = 0.0;
  double b = 0.0;
};

// Posterior Beta shapes for pi0: n00 is the fractional same-state count
// (attribution to the recombination branch uses the previous iteration's
// pi0), n01 the integer count of 0->1 transitions.
BetaShapes pi0_posterior(std::span<const int> c, const MarkerMap &map,
                         double pi0_prev, const Hyperparameters &hyper);
BetaShapes pi1_posterior(std::span<const int> c, const MarkerMap &map,
                         double pi1_prev, const Hyperparameters &hyper);

double sample_pi0(std::span<const int> c, const MarkerMap &map,
                  double pi0_prev, const Hyperparameters &hyper, Rng &rng);
double sample_pi1(std::span<const int> c, const MarkerMap &map,
                  double pi1_prev, const Hyperparameters &hyper, Rng &rng);

}  // namespace blockreg::markov

#endif
