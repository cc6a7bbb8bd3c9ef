#ifndef BLOCKREG_SIMULATOR_HPP
#define BLOCKREG_SIMULATOR_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "blockreg/rng.hpp"
#include "blockreg/types.hpp"

namespace blockreg::sim {

struct SimConfig {
  int n_haplotypes = 360;
  double region_kb = 40.0;
  double markers_per_kb = 0.8;
  double rho_per_kb = 0.1;
  int n_ancestors = 8;
  double mutation_flip_prob = 0.01;
  double maf_threshold = 0.01;
  std::vector<int> causal_block_sizes{3, 2, 5};
  double beta_causal = 2.5;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Binary haplotypes copied from a small ancestral panel along the marker
// chain. Recombination breakpoints are realized once per dataset (interval j
// breaks with probability 1 - exp(-d_j rho_j)); at a breakpoint every
// haplotype re-draws its source ancestor uniformly. switch_before[j] records
// whether any haplotype actually changed ancestor in interval (j-1, j), so
// maximal switch-free runs are the dataset's recombination-free blocks.
struct HaplotypePanel {
  Eigen::MatrixXi haplotypes;        // n_haplotypes x J, entries {0,1}
  MarkerMap map;
  std::vector<char> switch_before;   // size J; [0] always 0
};

HaplotypePanel generate_haplotypes(const SimConfig &config, Rng &rng);

// Random perfect matching of haplotype rows; genotype = sum of the pair,
// recoded per column so entries count the minor allele.
GenotypeMatrix pair_genotypes(const Eigen::MatrixXi &haplotypes, Rng &rng);

struct MafFiltered {
  GenotypeMatrix genotypes;
  MarkerMap map;
  std::vector<Eigen::Index> kept;  // original indices of surviving markers
};

// Drops markers with MAF <= threshold; d recomputed from surviving
// positions, rho of a merged interval is the length-weighted mean.
MafFiltered maf_filter(const GenotypeMatrix &genotypes, const MarkerMap &map,
                       double threshold);

// Places one contiguous causal block per requested size inside
// recombination-free runs (boundary_before[j] marks a run boundary between
// markers j-1 and j), non-overlapping and separated by at least one
// non-causal marker. With allow_unlinked_fallback, an infeasible strict
// placement falls back to unconstrained contiguous blocks.
std::vector<Eigen::Index> assign_causal_blocks(
    const std::vector<char> &boundary_before, std::span<const int> block_sizes,
    Rng &rng, bool allow_unlinked_fallback = false);

PhenotypeVector generate_phenotype(const GenotypeMatrix &genotypes,
                                   std::span<const Eigen::Index> causal,
                                   double beta_causal, double noise_sd,
                                   Rng &rng);

struct SimDataset {
  GenotypeMatrix genotypes;
  MarkerMap map;
  PhenotypeVector phenotype;
  std::vector<Eigen::Index> causal_indices;
  Eigen::VectorXd true_beta;
  int block_count = 0;
  double mean_snps_per_block = 0.0;
};

SimDataset simulate(const SimConfig &config);

}  // namespace blockreg::sim

#endif
