// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and seeded for reproducibility.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "blockreg/baselines.hpp"
#include "blockreg/evaluation.hpp"
#include "blockreg/gibbs.hpp"
#include "blockreg/io.hpp"
#include "blockreg/simulator.hpp"
#include "oracles.hpp"

using namespace blockreg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

Eigen::VectorXd random_genotype_column(Rng &rng, Eigen::Index n) {
  Eigen::VectorXd x(n);
  bool constant = true;
  do {
    for (Eigen::Index i = 0; i < n; ++i)
      x[i] = static_cast<double>(rng.uniform_int(3));
    constant = true;
    for (Eigen::Index i = 1; i < n; ++i)
      if (x[i] != x[0]) constant = false;
  } while (constant && n > 1);
  if (n == 1 && x[0] == 0.0) x[0] = 1.0;
  return x;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// criterion 1: closed-form active marginal vs adaptive quadrature
// ---------------------------------------------------------------------------
Outcome criterion_1() {
  Outcome out;
  Rng rng(101);
  double worst = 0.0;
  for (int it = 0; it < 1000; ++it) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform_int(50));
    const Eigen::VectorXd x = random_genotype_column(rng, n);
    const double ratio = rng.uniform(-10.0, 10.0);
    Eigen::VectorXd z = ratio * x;
    for (Eigen::Index i = 0; i < n; ++i) z[i] += rng.normal(0, 1);
    const double lambda = std::exp(rng.uniform(std::log(1e-3), std::log(1e3)));
    const double sigma_sq = std::exp(rng.uniform(std::log(1e-2), std::log(1e2)));
    const double closed =
        gibbs::marginal_loglik_active(z, x, sigma_sq, lambda).total;
    const double quad =
        oracles::active_log_marginal_quadrature(z, x, sigma_sq, lambda);
    worst = std::max(worst, std::abs(closed - quad) / std::max(1.0, std::abs(quad)));
  }
  out.pass = worst <= 1e-6;
  out.detail = "worst relative log error " + fmt(worst) +
               " over 1000 configurations (limit 1e-6)";
  return out;
}

// ---------------------------------------------------------------------------
// criterion 2: sampler vs exact enumeration on N=6, J=2
// ---------------------------------------------------------------------------

// log integral over beta2 of exp(inner(y - x2 beta2) + Laplace(beta2))
double two_active_log_marginal(const Eigen::VectorXd &y,
                               const Eigen::VectorXd &x1,
                               const Eigen::VectorXd &x2) {
  auto g = [&](double b2) {
    const Eigen::VectorXd z = y - b2 * x2;
    return oracles::active_log_marginal_quadrature(z, x1, 1.0, 1.0) -
           std::log(4.0) - 0.5 * std::abs(b2);
  };
  const double ls2 = y.dot(x2) / x2.squaredNorm();
  const double s2 = std::sqrt(1.0 / x2.squaredNorm());
  const double lo = std::min(0.0, ls2) - 25.0 * s2 - 5.0;
  const double hi = std::max(0.0, ls2) + 25.0 * s2 + 5.0;

  // composite Simpson on each side of the kink at 0
  auto simpson_side = [&](double a, double b, double gmax) {
    const int n_iv = 1200;  // even
    double sum = 0.0;
    const double h = (b - a) / n_iv;
    for (int i = 0; i <= n_iv; ++i) {
      const double w = (i == 0 || i == n_iv) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      sum += w * std::exp(g(a + i * h) - gmax);
    }
    return sum * h / 3.0;
  };
  double gmax = -1e300;
  for (int i = 0; i <= 400; ++i)
    gmax = std::max(gmax, g(lo + (hi - lo) * i / 400.0));
  double total = 0.0;
  if (lo < 0.0) total += simpson_side(lo, std::min(0.0, hi), gmax);
  if (hi > 0.0) total += simpson_side(std::max(0.0, lo), hi, gmax);
  return gmax + std::log(total);
}

Outcome criterion_2() {
  Outcome out;
  Rng data_rng(202);
  const Eigen::Index n = 6;
  GenotypeMatrix X;
  X.values.resize(n, 2);
  X.values.col(0) = random_genotype_column(data_rng, n);
  X.values.col(1) = random_genotype_column(data_rng, n);
  PhenotypeVector y;
  y.values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    y.values[i] = 1.5 * X.values(i, 0) + data_rng.normal();
  const Dataset data = validate_dataset(
      X, MarkerMap::from_positions({0.0, 1.0}, {0.0, 0.1}), y);

  // exact posterior over the four activation configurations (flat prior)
  std::array<double, 4> logp{};  // index = c1 + 2*c2
  logp[0] = oracles::gaussian_logpdf_sum(y.values, 1.0);
  logp[1] =
      oracles::active_log_marginal_quadrature(y.values, X.values.col(0), 1.0, 1.0);
  logp[2] =
      oracles::active_log_marginal_quadrature(y.values, X.values.col(1), 1.0, 1.0);
  logp[3] = two_active_log_marginal(y.values, X.values.col(0), X.values.col(1));
  const double lmax = *std::max_element(logp.begin(), logp.end());
  std::array<double, 4> exact{};
  double norm = 0.0;
  for (int k = 0; k < 4; ++k) norm += exact[k] = std::exp(logp[k] - lmax);
  for (auto &p : exact) p /= norm;

  // sampler with sigma^2, lambda, and the activation prior frozen
  gibbs::SamplerOptions opts;
  opts.prior = gibbs::ActivationPrior::bernoulli;
  opts.update_sigma = false;
  opts.update_lambda = false;
  opts.update_transition = false;
  ModelState init;
  init.beta = Eigen::Vector2d::Zero();
  init.c = {0, 0};
  init.sigma_sq = 1.0;
  init.lambda = 1.0;
  init.pi0 = 0.5;
  init.pi1 = 0.5;  // flat Bernoulli prior
  gibbs::Chain chain(data, Hyperparameters{}, opts, init, 203);

  std::array<long, 4> counts{};
  const long sweeps = 200000;
  bool finite = true;
  for (long t = 0; t < sweeps; ++t) {
    chain.sweep();
    const auto &s = chain.state();
    ++counts[static_cast<std::size_t>(s.c[0] + 2 * s.c[1])];
    if (!s.beta.allFinite()) finite = false;
  }
  double tv = 0.0;
  for (int k = 0; k < 4; ++k)
    tv += std::abs(static_cast<double>(counts[static_cast<std::size_t>(k)]) /
                       static_cast<double>(sweeps) -
                   exact[k]);
  tv *= 0.5;
  out.pass = tv < 0.02 && finite;
  std::ostringstream ss;
  ss << "total variation " << fmt(tv) << " (limit 0.02); exact = [";
  for (int k = 0; k < 4; ++k) ss << (k ? ", " : "") << fmt(exact[k]);
  ss << "]";
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// criteria 3-5: simulated benchmark comparisons
// ---------------------------------------------------------------------------
eval::BenchmarkResult run_benchmark(double rho, double beta,
                                    std::vector<eval::Method> methods,
                                    std::uint64_t seed) {
  sim::SimConfig config;
  config.rho_per_kb = rho;
  config.beta_causal = beta;
  eval::BenchmarkOptions opts;
  opts.schedule.seed = seed;
  return eval::benchmark(20, config, methods, opts);
}

Outcome criterion_3() {
  Outcome out;
  const auto r = run_benchmark(
      0.05, 2.0,
      {eval::Method::block, eval::Method::bernoulli, eval::Method::ridge,
       eval::Method::lasso},
      301);
  const double block = r.per_method.at(eval::Method::block).auprc_mean;
  const double bern = r.per_method.at(eval::Method::bernoulli).auprc_mean;
  const double ridge = r.per_method.at(eval::Method::ridge).auprc_mean;
  const double lasso = r.per_method.at(eval::Method::lasso).auprc_mean;
  out.pass = block >= bern + 0.05 && block >= ridge + 0.05 &&
             block >= lasso + 0.05;
  out.detail = "mean AUPRC: block " + fmt(block) + ", bernoulli " + fmt(bern) +
               ", ridge " + fmt(ridge) + ", lasso " + fmt(lasso) +
               " (block must lead each by >= 0.05)";
  return out;
}

Outcome criterion_4() {
  Outcome out;
  const auto r = run_benchmark(
      1.0, 2.0, {eval::Method::block, eval::Method::bernoulli}, 401);
  const double block = r.per_method.at(eval::Method::block).auprc_mean;
  const double bern = r.per_method.at(eval::Method::bernoulli).auprc_mean;
  const double gap = std::abs(block - bern);
  out.pass = gap < 0.05;
  out.detail = "high-recombination AUPRC gap |block - bernoulli| = " +
               fmt(gap) + " (block " + fmt(block) + ", bernoulli " +
               fmt(bern) + "; limit 0.05)";
  return out;
}

Outcome criterion_5() {
  Outcome out;
  std::vector<double> means;
  for (double beta : {0.5, 1.0, 2.0}) {
    const auto r = run_benchmark(0.5, beta, {eval::Method::block}, 501);
    means.push_back(r.per_method.at(eval::Method::block).auprc_mean);
  }
  out.pass = means[0] <= means[1] && means[1] <= means[2];
  out.detail = "block AUPRC at effect sizes {0.5, 1.0, 2.0}: " + fmt(means[0]) +
               ", " + fmt(means[1]) + ", " + fmt(means[2]) +
               " (must be nondecreasing)";
  return out;
}

// ---------------------------------------------------------------------------
// criterion 6: block length decreases with the recombination rate
// ---------------------------------------------------------------------------
Outcome criterion_6() {
  Outcome out;
  std::vector<double> means;
  std::uint64_t seed = 601;
  for (double rho : {0.05, 0.1, 0.5, 1.0}) {
    double total = 0.0;
    for (int r = 0; r < 50; ++r) {
      sim::SimConfig config;
      config.rho_per_kb = rho;
      config.seed = seed++;
      total += sim::simulate(config).mean_snps_per_block;
    }
    means.push_back(total / 50.0);
  }
  out.pass = means[0] > means[1] && means[1] > means[2] && means[2] > means[3];
  out.detail = "mean SNPs per block at rho {0.05, 0.1, 0.5, 1.0}: " +
               fmt(means[0]) + ", " + fmt(means[1]) + ", " + fmt(means[2]) +
               ", " + fmt(means[3]) + " (must be strictly decreasing)";
  return out;
}

// ---------------------------------------------------------------------------
// criterion 7: baseline correctness
// ---------------------------------------------------------------------------
Outcome criterion_7() {
  Outcome out;
  Rng rng(701);

  double worst_ridge = 0.0;
  for (int it = 0; it < 100; ++it) {
    const Eigen::Index n = 10 + static_cast<Eigen::Index>(rng.uniform_int(90));
    const Eigen::Index J = 2 + static_cast<Eigen::Index>(rng.uniform_int(15));
    GenotypeMatrix X;
    X.values.resize(n, J);
    for (Eigen::Index j = 0; j < J; ++j)
      X.values.col(j) = random_genotype_column(rng, n);
    PhenotypeVector y;
    y.values.resize(n);
    for (auto &v : y.values) v = rng.normal(0, 2);
    const double reg = rng.uniform(0.01, 10.0);
    const Eigen::VectorXd beta = baselines::ridge_fit(X, y, reg);
    Eigen::MatrixXd gram = X.values.transpose() * X.values;
    gram.diagonal().array() += reg;
    const Eigen::VectorXd ref =
        gram.fullPivLu().solve(X.values.transpose() * y.values);
    worst_ridge = std::max(
        worst_ridge, (beta - ref).lpNorm<Eigen::Infinity>() /
                         std::max(1.0, ref.lpNorm<Eigen::Infinity>()));
  }

  double worst_kkt = 0.0;
  for (int it = 0; it < 50; ++it) {
    const Eigen::Index n = 40;
    const Eigen::Index J = 10;
    GenotypeMatrix X;
    X.values.resize(n, J);
    for (Eigen::Index j = 0; j < J; ++j)
      X.values.col(j) = random_genotype_column(rng, n);
    PhenotypeVector y;
    y.values.resize(n);
    for (auto &v : y.values) v = rng.normal(0, 3);
    const double penalty = rng.uniform(0.5, 30.0);
    const auto fit = baselines::lasso_fit(X, y, penalty, 1e-13, 200000);
    worst_kkt = std::max(worst_kkt, fit.max_kkt_violation);
  }

  const Eigen::Index n = 200, J = 500;
  GenotypeMatrix X;
  X.values.resize(n, J);
  for (Eigen::Index j = 0; j < J; ++j)
    X.values.col(j) = random_genotype_column(rng, n);
  PhenotypeVector y;
  y.values.resize(n);
  for (auto &v : y.values) v = rng.normal(0, 1);
  const auto wald = baselines::single_marker_wald(X, y);
  std::vector<double> ps(wald.p_value.data(), wald.p_value.data() + J);
  const double ks =
      oracles::ks_distance(std::move(ps), [](double v) { return v; });

  out.pass = worst_ridge <= 1e-8 && worst_kkt <= 1e-6 && ks < 0.05;
  out.detail = "ridge vs dense solve " + fmt(worst_ridge) +
               " (limit 1e-8); lasso KKT violation " + fmt(worst_kkt) +
               " (limit 1e-6); null Wald p-value KS " + fmt(ks) +
               " (limit 0.05)";
  return out;
}

// ---------------------------------------------------------------------------
// criterion 8: end-to-end determinism and numeric hygiene
// ---------------------------------------------------------------------------
std::string slurp(const fs::path &path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void run_pipeline(const fs::path &dir, bool &finite_ok, bool &spike_ok) {
  fs::remove_all(dir);
  sim::SimConfig config;
  config.seed = 801;
  const auto sim_data = sim::simulate(config);
  io::write_dataset(sim_data, dir);

  Dataset data = io::read_dataset(dir / "genotypes.tsv", dir / "markers.tsv",
                                  dir / "phenotype.tsv");
  const double offset = center_dataset(data);

  SamplingSchedule sched;
  sched.burn_in = 500;
  sched.iterations = 2000;
  sched.thin = 10;
  sched.seed = 802;
  const SampleTrace trace = gibbs::run_chain(data, Hyperparameters{}, sched);
  for (const auto &r : trace.retained) {
    if (!r.state.beta.allFinite() || !std::isfinite(r.state.sigma_sq) ||
        !std::isfinite(r.state.lambda) || !std::isfinite(r.state.pi0) ||
        !std::isfinite(r.state.pi1) || !std::isfinite(r.train_error))
      finite_ok = false;
    for (std::size_t j = 0; j < r.state.c.size(); ++j)
      if (r.state.c[j] == 0 &&
          r.state.beta[static_cast<Eigen::Index>(j)] != 0.0)
        spike_ok = false;
  }

  const auto summary = eval::posterior_summary(trace);
  std::vector<double> scores(summary.beta_mean.data(),
                             summary.beta_mean.data() + summary.beta_mean.size());
  const auto ranking = eval::rank_markers(scores, eval::RankMode::abs_beta);
  const auto truth = io::read_truth(dir / "truth.tsv");
  const auto curve = eval::precision_recall(ranking, truth);

  io::write_beta_summary(dir / "beta_summary.tsv", data.genotypes, data.map,
                         summary, ranking);
  io::write_trace(dir / "trace.tsv", trace);
  io::write_pr_curve(dir / "pr_curve.tsv", curve);
  io::write_manifest(dir / "manifest.txt",
                     {{"seed", "802"},
                      {"burn_in", "500"},
                      {"iterations", "2000"},
                      {"thin", "10"},
                      {"phenotype_offset", io::format_number(offset)},
                      {"auprc", io::format_number(curve.auprc)}});
}

Outcome criterion_8() {
  Outcome out;
  bool finite_ok = true, spike_ok = true;
  const fs::path a = fs::temp_directory_path() / "blockreg_accept_a";
  const fs::path b = fs::temp_directory_path() / "blockreg_accept_b";
  run_pipeline(a, finite_ok, spike_ok);
  run_pipeline(b, finite_ok, spike_ok);

  bool identical = true;
  std::string first_diff;
  for (const char *name :
       {"genotypes.tsv", "markers.tsv", "phenotype.tsv", "truth.tsv",
        "sim_manifest.txt", "beta_summary.tsv", "trace.tsv", "pr_curve.tsv",
        "manifest.txt"}) {
    if (slurp(a / name) != slurp(b / name)) {
      identical = false;
      if (first_diff.empty()) first_diff = name;
    }
  }
  out.pass = identical && finite_ok && spike_ok;
  out.detail = std::string("same-seed reruns byte-identical: ") +
               (identical ? "yes" : ("no, first difference in " + first_diff)) +
               "; all retained values finite: " + (finite_ok ? "yes" : "no") +
               "; inactive markers have zero coefficients: " +
               (spike_ok ? "yes" : "no");
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC-1", criterion_1}, {"AC-2", criterion_2}, {"AC-3", criterion_3},
      {"AC-4", criterion_4}, {"AC-5", criterion_5}, {"AC-6", criterion_6},
      {"AC-7", criterion_7}, {"AC-8", criterion_8},
  };
  int failures = 0;
  for (const auto &[name, fn] : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      out = fn();
    } catch (const std::exception &e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    out.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("%s: %s — %s [%.1f s]\n", name.c_str(),
                out.pass ? "PASS" : "FAIL", out.detail.c_str(), out.seconds);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (failures > 0)
    std::printf("%d criterion(s) failed\n", failures);
  else
    std::printf("all criteria passed\n");
  return failures == 0 ? 0 : 1;
}
