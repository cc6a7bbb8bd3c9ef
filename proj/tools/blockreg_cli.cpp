// blockreg command line: simulate, fit, ridge, lasso, wald, benchmark.
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "blockreg/baselines.hpp"
#include "blockreg/evaluation.hpp"
#include "blockreg/gibbs.hpp"
#include "blockreg/io.hpp"
#include "blockreg/simulator.hpp"

namespace fs = std::filesystem;
using namespace blockreg;

namespace {

constexpr const char *kVersion = "0.1.0";

struct DatasetArgs {
  std::string genotypes, markers, phenotype, truth;
};

void add_dataset_options(CLI::App *cmd, DatasetArgs &args) {
  cmd->add_option("--genotypes", args.genotypes, "genotypes.tsv path")
      ->required();
  cmd->add_option("--markers", args.markers, "markers.tsv path")->required();
  cmd->add_option("--phenotype", args.phenotype, "phenotype.tsv path")
      ->required();
  cmd->add_option("--truth", args.truth,
                  "truth.tsv with causal marker indices (enables pr_curve.tsv)");
}

void add_hyper_options(CLI::App *cmd, Hyperparameters &h) {
  cmd->add_option("--nu0", h.nu0, "sigma^2 prior dof");
  cmd->add_option("--s0-sq", h.s0_sq, "sigma^2 prior scale");
  cmd->add_option("--alpha", h.alpha, "lambda prior shape");
  cmd->add_option("--gamma", h.gamma, "lambda prior scale");
  cmd->add_option("--a00", h.a00, "Beta prior a for pi0");
  cmd->add_option("--b00", h.b00, "Beta prior b for pi0");
  cmd->add_option("--a10", h.a10, "Beta prior a for pi1");
  cmd->add_option("--b10", h.b10, "Beta prior b for pi1");
  cmd->add_option("--bern-a", h.bern_a, "Beta prior a for Bernoulli p");
  cmd->add_option("--bern-b", h.bern_b, "Beta prior b for Bernoulli p");
}

void write_pr_if_truth(const std::string &truth_path, const fs::path &out,
                       const std::vector<Eigen::Index> &ranking) {
  if (truth_path.empty()) return;
  const std::vector<Eigen::Index> truth = io::read_truth(truth_path);
  const eval::PRCurve curve = eval::precision_recall(ranking, truth);
  io::write_pr_curve(out / "pr_curve.tsv", curve);
}

std::vector<std::pair<std::string, std::string>> base_manifest(
    std::uint64_t seed) {
  return {{"software", "blockreg"},
          {"version", kVersion},
          {"seed", std::to_string(seed)}};
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Block-regularized Bayesian sparse regression for "
               "association mapping"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value configuration file");
  app.set_version_flag("--version", kVersion);

  // ---- simulate ----
  auto *sim_cmd = app.add_subcommand(
      "simulate", "generate a block-structured dataset with known truth");
  sim::SimConfig sim_config;
  std::string sim_out;
  std::string block_sizes_str = "3,2,5";
  sim_cmd->add_option("--out", sim_out, "output directory")->required();
  sim_cmd->add_option("--seed", sim_config.seed, "random seed");
  sim_cmd->add_option("--n-haplotypes", sim_config.n_haplotypes, "");
  sim_cmd->add_option("--region-kb", sim_config.region_kb, "");
  sim_cmd->add_option("--markers-per-kb", sim_config.markers_per_kb, "");
  sim_cmd->add_option("--rho-per-kb", sim_config.rho_per_kb, "");
  sim_cmd->add_option("--n-ancestors", sim_config.n_ancestors, "");
  sim_cmd->add_option("--flip-prob", sim_config.mutation_flip_prob, "");
  sim_cmd->add_option("--maf", sim_config.maf_threshold, "");
  sim_cmd->add_option("--block-sizes", block_sizes_str,
                      "comma-separated causal block sizes");
  sim_cmd->add_option("--beta-causal", sim_config.beta_causal, "");
  sim_cmd->add_option("--noise-sd", sim_config.noise_sd, "");

  // ---- fit ----
  auto *fit_cmd = app.add_subcommand(
      "fit", "run the Gibbs sampler and write posterior summaries");
  DatasetArgs fit_data;
  add_dataset_options(fit_cmd, fit_data);
  std::string fit_out;
  SamplingSchedule schedule;
  Hyperparameters hyper;
  std::string prior = "block";
  std::string sigma_shape = "paper";
  std::string rank_mode = "abs_beta";
  long segment_size = 0;
  fit_cmd->add_option("--out", fit_out, "output directory")->required();
  fit_cmd->add_option("--seed", schedule.seed, "random seed");
  fit_cmd->add_option("--burn-in", schedule.burn_in, "burn-in sweeps");
  fit_cmd->add_option("--iters", schedule.iterations, "retained-phase sweeps");
  fit_cmd->add_option("--thin", schedule.thin, "thinning interval");
  fit_cmd->add_option("--prior", prior, "activation prior")
      ->check(CLI::IsMember({"block", "bernoulli"}));
  fit_cmd->add_option("--sigma-shape", sigma_shape,
                      "sigma^2 posterior shape convention")
      ->check(CLI::IsMember({"paper", "active"}));
  fit_cmd->add_option("--rank-mode", rank_mode, "marker ranking score")
      ->check(CLI::IsMember({"abs_beta", "p_c"}));
  fit_cmd->add_option("--segment-size", segment_size,
                      "fit markers in independent segments of this size "
                      "(0 = no segmentation)");
  add_hyper_options(fit_cmd, hyper);

  // ---- ridge ----
  auto *ridge_cmd = app.add_subcommand("ridge", "ridge regression baseline");
  DatasetArgs ridge_data;
  add_dataset_options(ridge_cmd, ridge_data);
  std::string ridge_out;
  double ridge_reg = 0.1;
  std::uint64_t ridge_seed = 0;
  ridge_cmd->add_option("--out", ridge_out, "output directory")->required();
  ridge_cmd->add_option("--reg", ridge_reg, "ridge regularizer");
  ridge_cmd->add_option("--seed", ridge_seed, "random seed (unused)");

  // ---- lasso ----
  auto *lasso_cmd =
      app.add_subcommand("lasso", "lasso baseline with CV penalty selection");
  DatasetArgs lasso_data;
  add_dataset_options(lasso_cmd, lasso_data);
  std::string lasso_out;
  double lasso_penalty = -1.0;
  int cv_folds = 5;
  std::uint64_t lasso_seed = 0;
  lasso_cmd->add_option("--out", lasso_out, "output directory")->required();
  lasso_cmd->add_option("--penalty", lasso_penalty,
                        "fixed penalty (skips cross-validation)");
  lasso_cmd->add_option("--cv-folds", cv_folds, "cross-validation folds");
  lasso_cmd->add_option("--seed", lasso_seed, "random seed for CV folds");

  // ---- wald ----
  auto *wald_cmd =
      app.add_subcommand("wald", "single-marker Wald test baseline");
  DatasetArgs wald_data;
  add_dataset_options(wald_cmd, wald_data);
  std::string wald_out;
  std::uint64_t wald_seed = 0;
  wald_cmd->add_option("--out", wald_out, "output directory")->required();
  wald_cmd->add_option("--seed", wald_seed, "random seed (unused)");

  // ---- benchmark ----
  auto *bench_cmd = app.add_subcommand(
      "benchmark", "replicate simulation + method comparison");
  std::string bench_out;
  int replicates = 50;
  std::string methods_str = "block,bernoulli,ridge,lasso,wald";
  sim::SimConfig bench_sim;
  SamplingSchedule bench_schedule;
  Hyperparameters bench_hyper;
  std::string bench_rank_mode = "abs_beta";
  bench_cmd->add_option("--out", bench_out, "output directory")->required();
  bench_cmd->add_option("--seed", bench_schedule.seed, "master seed");
  bench_cmd->add_option("--replicates", replicates, "number of datasets");
  bench_cmd->add_option("--methods", methods_str, "comma-separated methods");
  bench_cmd->add_option("--rho-per-kb", bench_sim.rho_per_kb, "");
  bench_cmd->add_option("--beta-causal", bench_sim.beta_causal, "");
  bench_cmd->add_option("--markers-per-kb", bench_sim.markers_per_kb, "");
  bench_cmd->add_option("--n-haplotypes", bench_sim.n_haplotypes, "");
  bench_cmd->add_option("--n-ancestors", bench_sim.n_ancestors, "");
  bench_cmd->add_option("--region-kb", bench_sim.region_kb, "");
  bench_cmd->add_option("--noise-sd", bench_sim.noise_sd, "");
  bench_cmd->add_option("--burn-in", bench_schedule.burn_in, "");
  bench_cmd->add_option("--iters", bench_schedule.iterations, "");
  bench_cmd->add_option("--thin", bench_schedule.thin, "");
  bench_cmd->add_option("--rank-mode", bench_rank_mode, "")
      ->check(CLI::IsMember({"abs_beta", "p_c"}));
  add_hyper_options(bench_cmd, bench_hyper);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim_cmd->parsed()) {
      sim_config.causal_block_sizes.clear();
      std::stringstream ss(block_sizes_str);
      std::string tok;
      while (std::getline(ss, tok, ','))
        sim_config.causal_block_sizes.push_back(std::stoi(tok));
      const sim::SimDataset data = sim::simulate(sim_config);
      io::write_dataset(data, sim_out);
      auto manifest = base_manifest(sim_config.seed);
      manifest.emplace_back("command", "simulate");
      manifest.emplace_back("rho_per_kb",
                            io::format_number(sim_config.rho_per_kb));
      manifest.emplace_back("beta_causal",
                            io::format_number(sim_config.beta_causal));
      io::write_manifest(fs::path(sim_out) / "manifest.txt", manifest);
      std::cout << "wrote " << data.genotypes.n_markers() << " markers x "
                << data.genotypes.n_individuals() << " individuals to "
                << sim_out << "\n";
    } else if (fit_cmd->parsed()) {
      Dataset data = io::read_dataset(fit_data.genotypes, fit_data.markers,
                                      fit_data.phenotype);
      const double offset = center_dataset(data);

      gibbs::SamplerOptions opts;
      opts.prior = prior == "bernoulli" ? gibbs::ActivationPrior::bernoulli
                                        : gibbs::ActivationPrior::markov;
      opts.sigma_shape = sigma_shape == "active" ? gibbs::SigmaShape::active
                                                 : gibbs::SigmaShape::paper;
      const Eigen::Index J = data.genotypes.n_markers();
      const long seg = segment_size > 0 ? segment_size : J;

      std::vector<SampleTrace> traces;
      auto fit_fn = [&](const Dataset &segment,
                        std::uint64_t seed) -> eval::PosteriorSummary {
        SamplingSchedule s = schedule;
        s.seed = seed;
        traces.push_back(gibbs::run_chain(segment, hyper, s, opts));
        return eval::posterior_summary(traces.back());
      };
      const eval::PosteriorSummary summary =
          io::run_segmented(data, seg, schedule.seed, fit_fn);

      std::vector<double> scores(static_cast<std::size_t>(J));
      for (Eigen::Index j = 0; j < J; ++j)
        scores[static_cast<std::size_t>(j)] =
            rank_mode == "p_c" ? summary.p_c[j] : summary.beta_mean[j];
      const auto ranking = eval::rank_markers(
          scores, rank_mode == "p_c" ? eval::RankMode::p_c
                                     : eval::RankMode::abs_beta);

      fs::create_directories(fit_out);
      io::write_beta_summary(fs::path(fit_out) / "beta_summary.tsv",
                             data.genotypes, data.map, summary, ranking);
      // segments in order; retained_index is global-sequential
      SampleTrace merged;
      for (const auto &t : traces)
        merged.retained.insert(merged.retained.end(), t.retained.begin(),
                               t.retained.end());
      io::write_trace(fs::path(fit_out) / "trace.tsv", merged);
      write_pr_if_truth(fit_data.truth, fit_out, ranking);
      auto manifest = base_manifest(schedule.seed);
      manifest.emplace_back("command", "fit");
      manifest.emplace_back("prior", prior);
      manifest.emplace_back("sigma_shape", sigma_shape);
      manifest.emplace_back("burn_in", std::to_string(schedule.burn_in));
      manifest.emplace_back("iterations", std::to_string(schedule.iterations));
      manifest.emplace_back("thin", std::to_string(schedule.thin));
      manifest.emplace_back("segment_size", std::to_string(seg));
      manifest.emplace_back("phenotype_offset", io::format_number(offset));
      manifest.emplace_back("nu0", io::format_number(hyper.nu0));
      manifest.emplace_back("s0_sq", io::format_number(hyper.s0_sq));
      manifest.emplace_back("alpha", io::format_number(hyper.alpha));
      manifest.emplace_back("gamma", io::format_number(hyper.gamma));
      manifest.emplace_back("a00", io::format_number(hyper.a00));
      manifest.emplace_back("b00", io::format_number(hyper.b00));
      manifest.emplace_back("a10", io::format_number(hyper.a10));
      manifest.emplace_back("b10", io::format_number(hyper.b10));
      io::write_manifest(fs::path(fit_out) / "manifest.txt", manifest);
    } else if (ridge_cmd->parsed()) {
      Dataset data = io::read_dataset(ridge_data.genotypes, ridge_data.markers,
                                      ridge_data.phenotype);
      const double offset = center_dataset(data);
      const Eigen::VectorXd beta =
          baselines::ridge_fit(data.genotypes, data.phenotype, ridge_reg);
      std::vector<double> scores(beta.data(), beta.data() + beta.size());
      const auto ranking =
          eval::rank_markers(scores, eval::RankMode::abs_beta);
      fs::create_directories(ridge_out);
      io::write_scores(fs::path(ridge_out) / "beta_summary.tsv",
                       data.genotypes, data.map, scores, "beta", ranking);
      write_pr_if_truth(ridge_data.truth, ridge_out, ranking);
      auto manifest = base_manifest(ridge_seed);
      manifest.emplace_back("command", "ridge");
      manifest.emplace_back("reg", io::format_number(ridge_reg));
      manifest.emplace_back("phenotype_offset", io::format_number(offset));
      io::write_manifest(fs::path(ridge_out) / "manifest.txt", manifest);
    } else if (lasso_cmd->parsed()) {
      Dataset data = io::read_dataset(lasso_data.genotypes, lasso_data.markers,
                                      lasso_data.phenotype);
      const double offset = center_dataset(data);
      double penalty = lasso_penalty;
      if (penalty < 0.0) {
        const auto grid =
            baselines::default_penalty_grid(data.genotypes, data.phenotype);
        penalty = baselines::lasso_cv(data.genotypes, data.phenotype, grid,
                                      cv_folds, lasso_seed);
      }
      const baselines::LassoFit fit =
          baselines::lasso_fit(data.genotypes, data.phenotype, penalty);
      std::vector<double> scores(fit.beta.data(),
                                 fit.beta.data() + fit.beta.size());
      const auto ranking =
          eval::rank_markers(scores, eval::RankMode::abs_beta);
      fs::create_directories(lasso_out);
      io::write_scores(fs::path(lasso_out) / "beta_summary.tsv",
                       data.genotypes, data.map, scores, "beta", ranking);
      write_pr_if_truth(lasso_data.truth, lasso_out, ranking);
      auto manifest = base_manifest(lasso_seed);
      manifest.emplace_back("command", "lasso");
      manifest.emplace_back("penalty", io::format_number(penalty));
      manifest.emplace_back("max_kkt_violation",
                            io::format_number(fit.max_kkt_violation));
      manifest.emplace_back("phenotype_offset", io::format_number(offset));
      io::write_manifest(fs::path(lasso_out) / "manifest.txt", manifest);
    } else if (wald_cmd->parsed()) {
      const Dataset data = io::read_dataset(
          wald_data.genotypes, wald_data.markers, wald_data.phenotype);
      const baselines::WaldResult w =
          baselines::single_marker_wald(data.genotypes, data.phenotype);
      std::vector<double> scores(w.neg_log10_p.data(),
                                 w.neg_log10_p.data() + w.neg_log10_p.size());
      const auto ranking = eval::rank_markers(scores, eval::RankMode::p_c);
      fs::create_directories(wald_out);
      io::write_scores(fs::path(wald_out) / "wald.tsv", data.genotypes,
                       data.map, scores, "neg_log10_p", ranking);
      write_pr_if_truth(wald_data.truth, wald_out, ranking);
      auto manifest = base_manifest(wald_seed);
      manifest.emplace_back("command", "wald");
      io::write_manifest(fs::path(wald_out) / "manifest.txt", manifest);
    } else if (bench_cmd->parsed()) {
      std::vector<eval::Method> methods;
      std::stringstream ss(methods_str);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (tok == "block") methods.push_back(eval::Method::block);
        else if (tok == "bernoulli") methods.push_back(eval::Method::bernoulli);
        else if (tok == "ridge") methods.push_back(eval::Method::ridge);
        else if (tok == "lasso") methods.push_back(eval::Method::lasso);
        else if (tok == "wald") methods.push_back(eval::Method::wald);
        else throw InvalidArgument("unknown method '" + tok + "'");
      }
      eval::BenchmarkOptions opts;
      opts.schedule = bench_schedule;
      opts.hyper = bench_hyper;
      opts.rank_mode = bench_rank_mode == "p_c" ? eval::RankMode::p_c
                                                : eval::RankMode::abs_beta;
      const eval::BenchmarkResult result =
          eval::benchmark(replicates, bench_sim, methods, opts);
      fs::create_directories(bench_out);
      {
        std::ofstream f(fs::path(bench_out) / "summary.tsv",
                        std::ios::binary);
        f << "method\tauprc_mean\tauprc_se\n";
        for (const auto &[m, r] : result.per_method)
          f << eval::method_name(m) << '\t' << io::format_number(r.auprc_mean)
            << '\t' << io::format_number(r.auprc_se) << '\n';
      }
      {
        std::ofstream f(fs::path(bench_out) / "pr_curve.tsv",
                        std::ios::binary);
        f << "method\trecall\tmean_precision\n";
        for (const auto &[m, r] : result.per_method)
          for (std::size_t g = 0; g < eval::kRecallGrid.size(); ++g)
            f << eval::method_name(m) << '\t'
              << io::format_number(eval::kRecallGrid[g]) << '\t'
              << io::format_number(r.mean_precision_at_recall[g]) << '\n';
      }
      auto manifest = base_manifest(bench_schedule.seed);
      manifest.emplace_back("command", "benchmark");
      manifest.emplace_back("replicates", std::to_string(replicates));
      manifest.emplace_back("methods", methods_str);
      manifest.emplace_back("rho_per_kb",
                            io::format_number(bench_sim.rho_per_kb));
      manifest.emplace_back("beta_causal",
                            io::format_number(bench_sim.beta_causal));
      io::write_manifest(fs::path(bench_out) / "manifest.txt", manifest);
      for (const auto &[m, r] : result.per_method)
        std::cout << eval::method_name(m) << ": AUPRC "
                  << io::format_number(r.auprc_mean) << " +- "
                  << io::format_number(r.auprc_se) << "\n";
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
