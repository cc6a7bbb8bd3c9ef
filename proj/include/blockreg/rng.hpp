#ifndef BLOCKREG_RNG_HPP
#define BLOCKREG_RNG_HPP

#include <algorithm>
#include <cstdint>
#include <random>

namespace blockreg {

// Derives a child seed from (seed, stream); splitmix64 finalizer.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(gen_);
  }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  double normal(double mean, double sd) { return mean + sd * normal(); }
  double exponential(double rate) {
    return std::exponential_distribution<double>(rate)(gen_);
  }
  double gamma(double shape, double scale = 1.0) {
    return std::gamma_distribution<double>(shape, scale)(gen_);
  }
  // Two-gamma construction; shape-rate cancels in the ratio.
  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }
  // shape-scale convention: density ~ x^{-shape-1} exp(-scale/x)
  double inv_gamma(double shape, double scale) {
    return scale / gamma(shape);
  }
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t uniform_int(std::uint64_t n) {  // [0, n)
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(gen_);
  }
  long poisson(double mean) {
    return std::poisson_distribution<long>(mean)(gen_);
  }
  template <class It>
  void shuffle(It first, It last) {
    std::shuffle(first, last, gen_);
  }
  std::mt19937_64 &engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace blockreg

#endif
