#ifndef BLOCKREG_IO_HPP
#define BLOCKREG_IO_HPP

#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "blockreg/evaluation.hpp"
#include "blockreg/simulator.hpp"
#include "blockreg/types.hpp"

namespace blockreg::io {

// All numbers are serialized with 17 significant digits.
std::string format_number(double v);

// Tab-separated formats, first row header:
//   genotypes.tsv: individual_id then one column per marker id
//   markers.tsv:   marker_id, position_kb, rho_per_kb
//   phenotype.tsv: individual_id, value (row order must match genotypes)
Dataset read_dataset(const std::filesystem::path &genotypes_path,
                     const std::filesystem::path &markers_path,
                     const std::filesystem::path &phenotype_path);

// 0-based marker indices, one per line after a header.
std::vector<Eigen::Index> read_truth(const std::filesystem::path &path);

void write_dataset(const sim::SimDataset &data,
                   const std::filesystem::path &out_dir);

void write_beta_summary(const std::filesystem::path &path,
                        const GenotypeMatrix &X, const MarkerMap &map,
                        const eval::PosteriorSummary &summary,
                        const std::vector<Eigen::Index> &ranking);

// Plain per-marker scores (ridge/lasso/wald paths).
void write_scores(const std::filesystem::path &path, const GenotypeMatrix &X,
                  const MarkerMap &map, const std::vector<double> &scores,
                  const std::string &score_column,
                  const std::vector<Eigen::Index> &ranking);

void write_trace(const std::filesystem::path &path, const SampleTrace &trace);

void write_pr_curve(const std::filesystem::path &path,
                    const eval::PRCurve &curve);

// flat key=value metadata
void write_manifest(const std::filesystem::path &path,
                    const std::vector<std::pair<std::string, std::string>> &kv);

// Fits consecutive marker segments independently and concatenates the
// per-marker summaries in genomic order. The fit function receives the
// segment dataset and a seed derived from (seed, segment index).
using SegmentFit =
    std::function<eval::PosteriorSummary(const Dataset &, std::uint64_t)>;

eval::PosteriorSummary run_segmented(const Dataset &data, long segment_size,
                                     std::uint64_t seed, const SegmentFit &fit);

Dataset segment_dataset(const Dataset &data, Eigen::Index begin,
                        Eigen::Index end);

}  // namespace blockreg::io

#endif
