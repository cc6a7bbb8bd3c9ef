#include "blockreg/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace blockreg::sim {

void SimConfig::validate() const {
  if (n_haplotypes < 2 || n_haplotypes % 2 != 0)
    throw InvalidArgument("n_haplotypes must be even and >= 2");
  if (!(region_kb > 0.0)) throw InvalidArgument("region_kb must be > 0");
  if (!(markers_per_kb > 0.0))
    throw InvalidArgument("markers_per_kb must be > 0");
  if (rho_per_kb < 0.0) throw InvalidArgument("rho_per_kb must be >= 0");
  if (n_ancestors < 1) throw InvalidArgument("n_ancestors must be >= 1");
  if (mutation_flip_prob < 0.0 || mutation_flip_prob > 1.0)
    throw InvalidArgument("mutation_flip_prob must be in [0,1]");
  if (maf_threshold < 0.0 || maf_threshold >= 0.5)
    throw InvalidArgument("maf_threshold must be in [0, 0.5)");
  if (causal_block_sizes.empty())
    throw InvalidArgument("need at least one causal block size");
  for (int s : causal_block_sizes)
    if (s < 1) throw InvalidArgument("causal block sizes must be >= 1");
  if (noise_sd < 0.0) throw InvalidArgument("noise_sd must be >= 0");
}

HaplotypePanel generate_haplotypes(const SimConfig &config, Rng &rng) {
  config.validate();
  const long n_markers =
      std::max<long>(1, rng.poisson(config.region_kb * config.markers_per_kb));
  std::vector<double> positions(static_cast<std::size_t>(n_markers));
  for (auto &p : positions) p = rng.uniform(0.0, config.region_kb);
  std::sort(positions.begin(), positions.end());
  std::vector<double> rho(positions.size(), config.rho_per_kb);

  HaplotypePanel panel;
  panel.map = MarkerMap::from_positions(std::move(positions), std::move(rho));
  const Eigen::Index J = panel.map.n_markers();

  // Dataset-level recombination breakpoints; haplotypes may only change
  // copy source at these intervals.
  std::vector<char> breakpoint(static_cast<std::size_t>(J), 0);
  for (Eigen::Index j = 1; j < J; ++j) {
    const double p_break =
        -std::expm1(-panel.map.d[static_cast<std::size_t>(j)] *
                    panel.map.rho[static_cast<std::size_t>(j)]);
    breakpoint[static_cast<std::size_t>(j)] = rng.bernoulli(p_break) ? 1 : 0;
  }

  const int A = config.n_ancestors;
  Eigen::MatrixXi ancestors(A, J);
  for (Eigen::Index j = 0; j < J; ++j) {
    const double freq = rng.uniform(0.05, 0.95);
    for (int a = 0; a < A; ++a)
      ancestors(a, j) = rng.bernoulli(freq) ? 1 : 0;
  }

  panel.haplotypes.resize(config.n_haplotypes, J);
  panel.switch_before.assign(static_cast<std::size_t>(J), 0);
  for (int h = 0; h < config.n_haplotypes; ++h) {
    int anc = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(A)));
    for (Eigen::Index j = 0; j < J; ++j) {
      if (j > 0 && breakpoint[static_cast<std::size_t>(j)]) {
        const int next =
            static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(A)));
        if (next != anc) panel.switch_before[static_cast<std::size_t>(j)] = 1;
        anc = next;
      }
      int allele = ancestors(anc, j);
      if (rng.bernoulli(config.mutation_flip_prob)) allele = 1 - allele;
      panel.haplotypes(h, j) = allele;
    }
  }
  return panel;
}

GenotypeMatrix pair_genotypes(const Eigen::MatrixXi &haplotypes, Rng &rng) {
  const Eigen::Index H = haplotypes.rows();
  if (H % 2 != 0)
    throw OddHaplotypeCount("cannot pair an odd number of haplotypes");
  const Eigen::Index n = H / 2;
  const Eigen::Index J = haplotypes.cols();

  std::vector<Eigen::Index> perm(static_cast<std::size_t>(H));
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm.begin(), perm.end());

  GenotypeMatrix X;
  X.values.resize(n, J);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index a = perm[static_cast<std::size_t>(2 * i)];
    const Eigen::Index b = perm[static_cast<std::size_t>(2 * i + 1)];
    for (Eigen::Index j = 0; j < J; ++j)
      X.values(i, j) =
          static_cast<double>(haplotypes(a, j) + haplotypes(b, j));
  }
  // Recode columns so entries count the minor allele.
  for (Eigen::Index j = 0; j < J; ++j) {
    const double freq = X.values.col(j).sum() / (2.0 * static_cast<double>(n));
    if (freq > 0.5)
      X.values.col(j) = 2.0 - X.values.col(j).array();
  }
  X.marker_ids.reserve(static_cast<std::size_t>(J));
  for (Eigen::Index j = 0; j < J; ++j)
    X.marker_ids.push_back("m" + std::to_string(j + 1));
  X.individual_ids.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    X.individual_ids.push_back("ind" + std::to_string(i + 1));
  return X;
}

MafFiltered maf_filter(const GenotypeMatrix &genotypes, const MarkerMap &map,
                       double threshold) {
  if (threshold < 0.0 || threshold >= 0.5)
    throw InvalidArgument("MAF threshold must be in [0, 0.5)");
  const Eigen::Index n = genotypes.n_individuals();
  const Eigen::Index J = genotypes.n_markers();
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < J; ++j) {
    const double freq =
        genotypes.values.col(j).sum() / (2.0 * static_cast<double>(n));
    const double maf = std::min(freq, 1.0 - freq);
    if (maf > threshold) kept.push_back(j);
  }
  if (kept.empty())
    throw AllMarkersFiltered("no markers survive the MAF filter");

  MafFiltered out;
  out.kept = kept;
  out.genotypes.values.resize(n, static_cast<Eigen::Index>(kept.size()));
  std::vector<double> positions, rho;
  positions.reserve(kept.size());
  rho.reserve(kept.size());
  Eigen::Index prev = -1;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const Eigen::Index j = kept[k];
    out.genotypes.values.col(static_cast<Eigen::Index>(k)) =
        genotypes.values.col(j);
    if (!genotypes.marker_ids.empty())
      out.genotypes.marker_ids.push_back(
          genotypes.marker_ids[static_cast<std::size_t>(j)]);
    positions.push_back(map.positions_kb[static_cast<std::size_t>(j)]);
    // Length-weighted mean rate over the merged original intervals.
    double merged = 0.0;
    if (prev >= 0) {
      double total_d = 0.0, weighted = 0.0;
      for (Eigen::Index t = prev + 1; t <= j; ++t) {
        total_d += map.d[static_cast<std::size_t>(t)];
        weighted += map.d[static_cast<std::size_t>(t)] *
                    map.rho[static_cast<std::size_t>(t)];
      }
      merged = total_d > 0.0 ? weighted / total_d
                             : map.rho[static_cast<std::size_t>(j)];
    }
    rho.push_back(merged);
    prev = j;
  }
  out.genotypes.individual_ids = genotypes.individual_ids;
  out.map = MarkerMap::from_positions(std::move(positions), std::move(rho));
  return out;
}

namespace {

struct Placement {
  Eigen::Index start;
  int size;
};

bool compatible(const std::vector<Placement> &placed, Eigen::Index start,
                int size) {
  for (const auto &p : placed) {
    // at least one non-causal marker between blocks
    if (start <= p.start + p.size && p.start <= start + size) return false;
  }
  return true;
}

bool dfs_place(const std::vector<std::vector<Eigen::Index>> &candidates,
               std::size_t i, std::span<const int> sizes,
               std::vector<Placement> &placed) {
  if (i == candidates.size()) return true;
  for (Eigen::Index start : candidates[i]) {
    if (!compatible(placed, start, sizes[i])) continue;
    placed.push_back({start, sizes[i]});
    if (dfs_place(candidates, i + 1, sizes, placed)) return true;
    placed.pop_back();
  }
  return false;
}

std::vector<Placement> try_place(
    const std::vector<std::vector<Eigen::Index>> &candidates,
    std::span<const int> sizes, Rng &rng) {
  for (const auto &c : candidates)
    if (c.empty()) return {};
  // Randomized attempts keep the selection close to uniform over feasible
  // placements; DFS is the completeness backstop.
  for (int attempt = 0; attempt < 300; ++attempt) {
    std::vector<Placement> placed;
    bool ok = true;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const auto &cand = candidates[i];
      const Eigen::Index start = cand[rng.uniform_int(cand.size())];
      if (!compatible(placed, start, sizes[i])) {
        ok = false;
        break;
      }
      placed.push_back({start, sizes[i]});
    }
    if (ok) return placed;
  }
  std::vector<Placement> placed;
  if (dfs_place(candidates, 0, sizes, placed)) return placed;
  return {};
}

}  // namespace

std::vector<Eigen::Index> assign_causal_blocks(
    const std::vector<char> &boundary_before, std::span<const int> block_sizes,
    Rng &rng, bool allow_unlinked_fallback) {
  if (block_sizes.empty())
    throw InvalidArgument("need at least one causal block size");
  const Eigen::Index J = static_cast<Eigen::Index>(boundary_before.size());

  std::vector<int> run(static_cast<std::size_t>(J), 0);
  for (Eigen::Index j = 1; j < J; ++j)
    run[static_cast<std::size_t>(j)] =
        run[static_cast<std::size_t>(j - 1)] +
        (boundary_before[static_cast<std::size_t>(j)] ? 1 : 0);

  auto strict_candidates = [&](int size) {
    std::vector<Eigen::Index> cand;
    for (Eigen::Index p = 0; p + size <= J; ++p) {
      if (run[static_cast<std::size_t>(p)] ==
          run[static_cast<std::size_t>(p + size - 1)])
        cand.push_back(p);
    }
    return cand;
  };
  auto all_candidates = [&](int size) {
    std::vector<Eigen::Index> cand;
    for (Eigen::Index p = 0; p + size <= J; ++p) cand.push_back(p);
    return cand;
  };

  std::vector<std::vector<Eigen::Index>> candidates;
  for (int s : block_sizes) candidates.push_back(strict_candidates(s));
  std::vector<Placement> placed = try_place(candidates, block_sizes, rng);

  if (placed.empty() && allow_unlinked_fallback) {
    candidates.clear();
    for (int s : block_sizes) candidates.push_back(all_candidates(s));
    placed = try_place(candidates, block_sizes, rng);
  }
  if (placed.empty()) {
    int largest = 0;
    for (Eigen::Index p = 0; p < J; ++p) {
      int len = 1;
      while (p + len < J && run[static_cast<std::size_t>(p)] ==
                                run[static_cast<std::size_t>(p + len)])
        ++len;
      largest = std::max(largest, len);
    }
    throw InfeasibleBlocks(
        "no placement for requested causal block sizes; largest "
        "recombination-free run has " +
        std::to_string(largest) + " markers");
  }

  std::vector<Eigen::Index> causal;
  for (const auto &p : placed)
    for (int t = 0; t < p.size; ++t) causal.push_back(p.start + t);
  std::sort(causal.begin(), causal.end());
  return causal;
}

PhenotypeVector generate_phenotype(const GenotypeMatrix &genotypes,
                                   std::span<const Eigen::Index> causal,
                                   double beta_causal, double noise_sd,
                                   Rng &rng) {
  const Eigen::Index n = genotypes.n_individuals();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(genotypes.n_markers());
  for (Eigen::Index j : causal) beta[j] = beta_causal;
  Eigen::VectorXd y = genotypes.values * beta;
  for (Eigen::Index i = 0; i < n; ++i) y[i] += noise_sd * rng.normal();
  return PhenotypeVector{std::move(y)};
}

SimDataset simulate(const SimConfig &config) {
  config.validate();
  Rng rng(config.seed);
  const HaplotypePanel panel = generate_haplotypes(config, rng);
  GenotypeMatrix genotypes = pair_genotypes(panel.haplotypes, rng);
  MafFiltered filtered =
      maf_filter(genotypes, panel.map, config.maf_threshold);

  // Carry ancestor-switch flags over to the surviving markers.
  const std::size_t kept_n = filtered.kept.size();
  std::vector<char> boundary(kept_n, 0);
  for (std::size_t k = 1; k < kept_n; ++k) {
    for (Eigen::Index t = filtered.kept[k - 1] + 1; t <= filtered.kept[k]; ++t)
      if (panel.switch_before[static_cast<std::size_t>(t)]) {
        boundary[k] = 1;
        break;
      }
  }

  SimDataset out;
  out.causal_indices = assign_causal_blocks(
      boundary, config.causal_block_sizes, rng, /*allow_unlinked_fallback=*/true);
  out.phenotype =
      generate_phenotype(filtered.genotypes, out.causal_indices,
                         config.beta_causal, config.noise_sd, rng);
  out.true_beta =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kept_n));
  for (Eigen::Index j : out.causal_indices) out.true_beta[j] = config.beta_causal;
  out.genotypes = std::move(filtered.genotypes);
  out.map = std::move(filtered.map);
  out.block_count = 1;
  for (std::size_t k = 1; k < kept_n; ++k) out.block_count += boundary[k] ? 1 : 0;
  out.mean_snps_per_block =
      static_cast<double>(kept_n) / static_cast<double>(out.block_count);
  return out;
}

}  // namespace blockreg::sim
