#ifndef BLOCKREG_EVALUATION_HPP
#define BLOCKREG_EVALUATION_HPP

#include <Eigen/Dense>
#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "blockreg/simulator.hpp"
#include "blockreg/types.hpp"

namespace blockreg::eval {

struct PosteriorSummary {
  Eigen::VectorXd p_c;        // per-marker activation frequency
  Eigen::VectorXd beta_mean;  // posterior mean (spike zeros included)
  Eigen::VectorXd beta_best;  // min-train-error snapshot
  std::vector<int> c_best;
  long n_samples = 0;
};

PosteriorSummary posterior_summary(const SampleTrace &trace);

enum class RankMode { abs_beta, p_c };

// Descending by |score| (abs_beta) or by score (p_c); ties broken by
// ascending marker index. Returns 0-based marker indices.
std::vector<Eigen::Index> rank_markers(std::span<const double> scores,
                                       RankMode mode);

struct PRCurve {
  struct Point {
    long k;
    double precision;
    double recall;
  };
  std::vector<Point> points;  // k = 1..J
  double auprc = 0.0;
};

PRCurve precision_recall(std::span<const Eigen::Index> ranking,
                         std::span<const Eigen::Index> truth);

enum class Method { block, bernoulli, ridge, lasso, wald };

std::string method_name(Method m);

// Recall grid {0.1, ..., 1.0} used when averaging curves across replicates.
inline constexpr std::array<double, 10> kRecallGrid = {
    0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

struct MethodResult {
  double auprc_mean = 0.0;
  double auprc_se = 0.0;  // 0 when replicates == 1
  std::array<double, 10> mean_precision_at_recall{};
  std::vector<double> auprc_per_replicate;
};

struct BenchmarkResult {
  std::map<Method, MethodResult> per_method;
  int replicates = 0;
};

struct BenchmarkOptions {
  SamplingSchedule schedule;           // seed acts as the master seed
  Hyperparameters hyper;
  RankMode rank_mode = RankMode::abs_beta;
  double ridge_reg = 0.1;
  int cv_folds = 5;
};

// Simulates `replicates` seeded datasets, fits every requested method, and
// aggregates precision-recall. Replicate seeds derive from the master seed.
BenchmarkResult benchmark(int replicates, const sim::SimConfig &config,
                          std::span<const Method> methods,
                          const BenchmarkOptions &opts);

}  // namespace blockreg::eval

#endif
