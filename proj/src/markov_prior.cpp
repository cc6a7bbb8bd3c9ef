#include "blockreg/markov_prior.hpp"

#include <cmath>
#include <limits>

namespace blockreg::markov {

namespace {

inline double no_recomb_prob(double d_kb, double rho) {
  const double dr = d_kb * rho;
  if (dr > 700.0) return 0.0;  // exp would underflow anyway
  return std::exp(-dr);
}

inline double pi_entry(int from, int to, const TransitionParams &p) {
  if (from == 0) return to == 0 ? p.pi0 : 1.0 - p.pi0;
  return to == 1 ? p.pi1 : 1.0 - p.pi1;
}

}  // namespace

double transition_prob(int c_prev, int c_next, double d_kb, double rho,
                       const TransitionParams &params) {
  const double stay = no_recomb_prob(d_kb, rho);
  const double same = (c_prev == c_next) ? 1.0 : 0.0;
  return stay * same + (1.0 - stay) * pi_entry(c_prev, c_next, params);
}

double initial_prob(int /*c1*/) { return 0.5; }

double chain_log_prior(std::span<const int> c, const MarkerMap &map,
                       const TransitionParams &params) {
  double lp = std::log(initial_prob(c[0]));
  for (std::size_t j = 1; j < c.size(); ++j) {
    const double p =
        transition_prob(c[j - 1], c[j], map.d[j], map.rho[j], params);
    lp += (p > 0.0) ? std::log(p)
                    : -std::numeric_limits<double>::infinity();
  }
  return lp;
}

namespace {

// Shared form of Eq.-(7)-style fractional counting for both parameters.
// `state` is the value whose self-transitions are being counted.
BetaShapes stay_posterior(std::span<const int> c, const MarkerMap &map,
                          int state, double pi_prev, double prior_a,
                          double prior_b) {
  double n_stay = 0.0;  // fractional
  double n_leave = 0.0; // integer
  for (std::size_t j = 1; j < c.size(); ++j) {
    if (c[j - 1] != state) continue;
    if (c[j] == state) {
      const double e = no_recomb_prob(map.d[j], map.rho[j]);
      const double recomb_stay = (1.0 - e) * pi_prev;
      n_stay += recomb_stay / (e + recomb_stay);
    } else {
      n_leave += 1.0;
    }
  }
  BetaShapes s;
  s.a = n_stay + prior_a;
  s.b = n_leave + prior_b;
  if (!(s.a > 0.0) || !(s.b > 0.0))
    throw DegenerateBeta("nonpositive Beta shape in transition posterior");
  return s;
}

}  // namespace

BetaShapes pi0_posterior(std::span<const int> c, const MarkerMap &map,
                         double pi0_prev, const Hyperparameters &hyper) {
  return stay_posterior(c, map, 0, pi0_prev, hyper.a00, hyper.b00);
}

BetaShapes pi1_posterior(std::span<const int> c, const MarkerMap &map,
                         double pi1_prev, const Hyperparameters &hyper) {
  return stay_posterior(c, map, 1, pi1_prev, hyper.a10, hyper.b10);
}

double sample_pi0(std::span<const int> c, const MarkerMap &map,
                  double pi0_prev, const Hyperparameters &hyper, Rng &rng) {
  const BetaShapes s = pi0_posterior(c, map, pi0_prev, hyper);
  return rng.beta(s.a, s.b);
}

double sample_pi1(std::span<const int> c, const MarkerMap &map,
                  double pi1_prev, const Hyperparameters &hyper, Rng &rng) {
  const BetaShapes s = pi1_posterior(c, map, pi1_prev, hyper);
  return rng.beta(s.a, s.b);
}

}  // namespace blockreg::markov
