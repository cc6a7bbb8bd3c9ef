#include "blockreg/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "blockreg/baselines.hpp"
#include "blockreg/gibbs.hpp"

namespace blockreg::eval {

PosteriorSummary posterior_summary(const SampleTrace &trace) {
  if (trace.retained.empty())
    throw EmptyTrace("posterior summary needs a nonempty trace");
  const Eigen::Index J = trace.retained.front().state.beta.size();
  PosteriorSummary s;
  s.n_samples = static_cast<long>(trace.retained.size());
  s.p_c = Eigen::VectorXd::Zero(J);
  s.beta_mean = Eigen::VectorXd::Zero(J);
  std::size_t best = 0;
  for (std::size_t t = 0; t < trace.retained.size(); ++t) {
    const auto &sample = trace.retained[t];
    s.beta_mean += sample.state.beta;
    for (Eigen::Index j = 0; j < J; ++j)
      s.p_c[j] += sample.state.c[static_cast<std::size_t>(j)];
    if (sample.train_error < trace.retained[best].train_error) best = t;
  }
  s.p_c /= static_cast<double>(s.n_samples);
  s.beta_mean /= static_cast<double>(s.n_samples);
  s.beta_best = trace.retained[best].state.beta;
  s.c_best = trace.retained[best].state.c;
  return s;
}

std::vector<Eigen::Index> rank_markers(std::span<const double> scores,
                                       RankMode mode) {
  for (double v : scores)
    if (!std::isfinite(v)) throw NonFiniteValue("non-finite ranking score");
  std::vector<Eigen::Index> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](Eigen::Index j) {
    const double v = scores[static_cast<std::size_t>(j)];
    return mode == RankMode::abs_beta ? std::abs(v) : v;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return key(a) > key(b);
                   });
  return order;
}

PRCurve precision_recall(std::span<const Eigen::Index> ranking,
                         std::span<const Eigen::Index> truth) {
  if (truth.empty()) throw EmptyTruth("precision-recall needs nonempty truth");
  const std::set<Eigen::Index> truth_set(truth.begin(), truth.end());
  PRCurve curve;
  curve.points.reserve(ranking.size());
  long hits = 0;
  double prev_recall = 0.0;
  double auprc = 0.0;
  for (std::size_t k = 1; k <= ranking.size(); ++k) {
    if (truth_set.count(ranking[k - 1])) ++hits;
    const double precision = static_cast<double>(hits) / static_cast<double>(k);
    const double recall =
        static_cast<double>(hits) / static_cast<double>(truth_set.size());
    curve.points.push_back({static_cast<long>(k), precision, recall});
    // step integration: hold precision from each achieved recall level
    auprc += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  curve.auprc = auprc;
  return curve;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::block: return "block";
    case Method::bernoulli: return "bernoulli";
    case Method::ridge: return "ridge";
    case Method::lasso: return "lasso";
    case Method::wald: return "wald";
  }
  return "unknown";
}

namespace {

double precision_at_recall(const PRCurve &curve, double target) {
  for (const auto &pt : curve.points)
    if (pt.recall >= target - 1e-12) return pt.precision;
  return curve.points.back().precision;
}

std::vector<double> method_scores(Method m, const Dataset &data,
                                  const BenchmarkOptions &opts,
                                  std::uint64_t seed) {
  const Eigen::Index J = data.genotypes.n_markers();
  std::vector<double> scores(static_cast<std::size_t>(J));
  switch (m) {
    case Method::block:
    case Method::bernoulli: {
      SamplingSchedule sched = opts.schedule;
      sched.seed = seed;
      gibbs::SamplerOptions sopts;
      if (m == Method::bernoulli)
        sopts.prior = gibbs::ActivationPrior::bernoulli;
      const SampleTrace trace =
          gibbs::run_chain(data, opts.hyper, sched, sopts);
      const PosteriorSummary summary = posterior_summary(trace);
      for (Eigen::Index j = 0; j < J; ++j)
        scores[static_cast<std::size_t>(j)] =
            opts.rank_mode == RankMode::p_c ? summary.p_c[j]
                                            : summary.beta_mean[j];
      break;
    }
    case Method::ridge: {
      const Eigen::VectorXd beta =
          baselines::ridge_fit(data.genotypes, data.phenotype, opts.ridge_reg);
      for (Eigen::Index j = 0; j < J; ++j)
        scores[static_cast<std::size_t>(j)] = beta[j];
      break;
    }
    case Method::lasso: {
      const std::vector<double> grid =
          baselines::default_penalty_grid(data.genotypes, data.phenotype);
      const double penalty = baselines::lasso_cv(
          data.genotypes, data.phenotype, grid, opts.cv_folds, seed);
      const baselines::LassoFit fit =
          baselines::lasso_fit(data.genotypes, data.phenotype, penalty);
      for (Eigen::Index j = 0; j < J; ++j)
        scores[static_cast<std::size_t>(j)] = fit.beta[j];
      break;
    }
    case Method::wald: {
      const baselines::WaldResult w =
          baselines::single_marker_wald(data.genotypes, data.phenotype);
      for (Eigen::Index j = 0; j < J; ++j)
        scores[static_cast<std::size_t>(j)] = w.neg_log10_p[j];
      break;
    }
  }
  return scores;
}

RankMode score_rank_mode(Method m, RankMode configured) {
  // Wald scores are -log10 p: rank by raw value, not magnitude of beta.
  if (m == Method::wald) return RankMode::p_c;
  return configured;
}

}  // namespace

BenchmarkResult benchmark(int replicates, const sim::SimConfig &config,
                          std::span<const Method> methods,
                          const BenchmarkOptions &opts) {
  if (replicates < 1) throw InvalidArgument("replicates must be >= 1");
  BenchmarkResult result;
  result.replicates = replicates;
  for (Method m : methods) result.per_method[m] = MethodResult{};
  std::map<Method, std::array<double, 10>> precision_sums;
  for (Method m : methods) precision_sums[m] = {};

  for (int rep = 0; rep < replicates; ++rep) {
    sim::SimConfig rep_config = config;
    rep_config.seed = mix_seed(opts.schedule.seed, static_cast<std::uint64_t>(rep));
    sim::SimDataset simulated;
    try {
      simulated = sim::simulate(rep_config);
    } catch (const Error &e) {
      throw Error("replicate " + std::to_string(rep) + " (seed " +
                  std::to_string(rep_config.seed) + ") failed: " + e.what());
    }
    Dataset data = validate_dataset(std::move(simulated.genotypes),
                                    std::move(simulated.map),
                                    std::move(simulated.phenotype));
    // regression fits run without an intercept; center genotype columns and
    // phenotype (the Wald baseline carries its own intercept and is
    // invariant to this)
    center_dataset(data);

    int method_id = 0;
    for (Method m : methods) {
      const std::uint64_t seed =
          mix_seed(opts.schedule.seed,
                   1000003ULL * static_cast<std::uint64_t>(rep + 1) +
                       static_cast<std::uint64_t>(++method_id));
      const std::vector<double> scores = method_scores(m, data, opts, seed);
      const std::vector<Eigen::Index> ranking =
          rank_markers(scores, score_rank_mode(m, opts.rank_mode));
      const PRCurve curve =
          precision_recall(ranking, simulated.causal_indices);
      result.per_method[m].auprc_per_replicate.push_back(curve.auprc);
      for (std::size_t g = 0; g < kRecallGrid.size(); ++g)
        precision_sums[m][g] += precision_at_recall(curve, kRecallGrid[g]);
    }
  }

  for (Method m : methods) {
    auto &mr = result.per_method[m];
    const auto &v = mr.auprc_per_replicate;
    const double n = static_cast<double>(v.size());
    mr.auprc_mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    if (v.size() > 1) {
      double ss = 0.0;
      for (double a : v) ss += (a - mr.auprc_mean) * (a - mr.auprc_mean);
      mr.auprc_se = std::sqrt(ss / (n - 1.0) / n);
    }
    for (std::size_t g = 0; g < kRecallGrid.size(); ++g)
      mr.mean_precision_at_recall[g] = precision_sums[m][g] / n;
  }
  return result;
}

}  // namespace blockreg::eval
