#include "blockreg/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace blockreg::io {

namespace fs = std::filesystem;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_tabs(const std::string &line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, '\t')) out.push_back(field);
  return out;
}

std::ifstream open_in(const fs::path &path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path.string() + " for reading");
  return f;
}

std::ofstream open_out(const fs::path &path) {
  std::ofstream f(path, std::ios::binary);  // fixed newlines on all platforms
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  return f;
}

double parse_double(const std::string &s, const fs::path &path, long line,
                    long column) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception &) {
    throw ParseError(path.string() + ":" + std::to_string(line) + ":" +
                     std::to_string(column) + ": cannot parse '" + s +
                     "' as a number");
  }
}

}  // namespace

Dataset read_dataset(const fs::path &genotypes_path,
                     const fs::path &markers_path,
                     const fs::path &phenotype_path) {
  GenotypeMatrix X;
  {
    std::ifstream f = open_in(genotypes_path);
    std::string line;
    if (!std::getline(f, line))
      throw ParseError(genotypes_path.string() + ": empty file");
    std::vector<std::string> header = split_tabs(line);
    if (header.size() < 2)
      throw ParseError(genotypes_path.string() + ": header needs marker ids");
    X.marker_ids.assign(header.begin() + 1, header.end());
    const std::size_t J = X.marker_ids.size();
    std::vector<std::vector<double>> rows;
    long lineno = 1;
    while (std::getline(f, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::vector<std::string> fields = split_tabs(line);
      if (fields.size() != J + 1)
        throw ParseError(genotypes_path.string() + ":" +
                         std::to_string(lineno) + ": expected " +
                         std::to_string(J + 1) + " fields, got " +
                         std::to_string(fields.size()));
      X.individual_ids.push_back(fields[0]);
      std::vector<double> row(J);
      for (std::size_t j = 0; j < J; ++j) {
        const double v = parse_double(fields[j + 1], genotypes_path, lineno,
                                      static_cast<long>(j + 2));
        if (v != 0.0 && v != 1.0 && v != 2.0)
          throw ParseError(genotypes_path.string() + ":" +
                           std::to_string(lineno) + ":" +
                           std::to_string(j + 2) + ": genotype '" +
                           fields[j + 1] + "' is not in {0,1,2}");
        row[j] = v;
      }
      rows.push_back(std::move(row));
    }
    X.values.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(J));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < J; ++j)
        X.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            rows[i][j];
  }

  std::vector<double> positions, rho;
  {
    std::ifstream f = open_in(markers_path);
    std::string line;
    if (!std::getline(f, line))
      throw ParseError(markers_path.string() + ": empty file");
    long lineno = 1;
    std::size_t row = 0;
    while (std::getline(f, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::vector<std::string> fields = split_tabs(line);
      if (fields.size() != 3)
        throw ParseError(markers_path.string() + ":" + std::to_string(lineno) +
                         ": expected 3 fields (marker_id, position_kb, "
                         "rho_per_kb)");
      if (row >= X.marker_ids.size() || fields[0] != X.marker_ids[row])
        throw DimensionMismatch(markers_path.string() + ":" +
                                std::to_string(lineno) +
                                ": marker id does not match genotypes header");
      positions.push_back(parse_double(fields[1], markers_path, lineno, 2));
      rho.push_back(parse_double(fields[2], markers_path, lineno, 3));
      ++row;
    }
    if (row != X.marker_ids.size())
      throw DimensionMismatch(markers_path.string() + ": has " +
                              std::to_string(row) + " markers, genotypes has " +
                              std::to_string(X.marker_ids.size()));
  }

  PhenotypeVector y;
  {
    std::ifstream f = open_in(phenotype_path);
    std::string line;
    if (!std::getline(f, line))
      throw ParseError(phenotype_path.string() + ": empty file");
    std::vector<double> values;
    long lineno = 1;
    std::size_t row = 0;
    while (std::getline(f, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::vector<std::string> fields = split_tabs(line);
      if (fields.size() != 2)
        throw ParseError(phenotype_path.string() + ":" +
                         std::to_string(lineno) +
                         ": expected 2 fields (individual_id, value)");
      if (row >= X.individual_ids.size() || fields[0] != X.individual_ids[row])
        throw DimensionMismatch(phenotype_path.string() + ":" +
                                std::to_string(lineno) +
                                ": individual id does not match genotypes");
      values.push_back(parse_double(fields[1], phenotype_path, lineno, 2));
      ++row;
    }
    y.values = Eigen::Map<Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
  }

  return validate_dataset(std::move(X),
                          MarkerMap::from_positions(std::move(positions),
                                                    std::move(rho)),
                          std::move(y));
}

std::vector<Eigen::Index> read_truth(const fs::path &path) {
  std::ifstream f = open_in(path);
  std::string line;
  if (!std::getline(f, line)) throw ParseError(path.string() + ": empty file");
  std::vector<Eigen::Index> truth;
  long lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields = split_tabs(line);
    truth.push_back(static_cast<Eigen::Index>(
        parse_double(fields[0], path, lineno, 1)));
  }
  return truth;
}

void write_dataset(const sim::SimDataset &data, const fs::path &out_dir) {
  fs::create_directories(out_dir);
  const Eigen::Index n = data.genotypes.n_individuals();
  const Eigen::Index J = data.genotypes.n_markers();
  {
    std::ofstream f = open_out(out_dir / "genotypes.tsv");
    f << "individual_id";
    for (const auto &id : data.genotypes.marker_ids) f << '\t' << id;
    f << '\n';
    for (Eigen::Index i = 0; i < n; ++i) {
      f << data.genotypes.individual_ids[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < J; ++j)
        f << '\t' << static_cast<int>(data.genotypes.values(i, j));
      f << '\n';
    }
  }
  {
    std::ofstream f = open_out(out_dir / "markers.tsv");
    f << "marker_id\tposition_kb\trho_per_kb\n";
    for (Eigen::Index j = 0; j < J; ++j)
      f << data.genotypes.marker_ids[static_cast<std::size_t>(j)] << '\t'
        << format_number(data.map.positions_kb[static_cast<std::size_t>(j)])
        << '\t' << format_number(data.map.rho[static_cast<std::size_t>(j)])
        << '\n';
  }
  {
    std::ofstream f = open_out(out_dir / "phenotype.tsv");
    f << "individual_id\tvalue\n";
    for (Eigen::Index i = 0; i < n; ++i)
      f << data.genotypes.individual_ids[static_cast<std::size_t>(i)] << '\t'
        << format_number(data.phenotype.values[i]) << '\n';
  }
  {
    std::ofstream f = open_out(out_dir / "truth.tsv");
    f << "causal_index\tmarker_id\ttrue_beta\n";
    for (Eigen::Index j : data.causal_indices)
      f << j << '\t' << data.genotypes.marker_ids[static_cast<std::size_t>(j)]
        << '\t' << format_number(data.true_beta[j]) << '\n';
  }
  {
    std::ofstream f = open_out(out_dir / "sim_manifest.txt");
    f << "n_individuals=" << n << '\n'
      << "n_markers=" << J << '\n'
      << "block_count=" << data.block_count << '\n'
      << "mean_snps_per_block=" << format_number(data.mean_snps_per_block)
      << '\n';
  }
}

void write_beta_summary(const fs::path &path, const GenotypeMatrix &X,
                        const MarkerMap &map,
                        const eval::PosteriorSummary &summary,
                        const std::vector<Eigen::Index> &ranking) {
  std::vector<long> rank_of(static_cast<std::size_t>(X.n_markers()), 0);
  for (std::size_t r = 0; r < ranking.size(); ++r)
    rank_of[static_cast<std::size_t>(ranking[r])] = static_cast<long>(r + 1);
  std::ofstream f = open_out(path);
  f << "marker_id\tposition_kb\tp_c\tbeta_mean\tbeta_best\tc_best\trank\n";
  for (Eigen::Index j = 0; j < X.n_markers(); ++j)
    f << X.marker_ids[static_cast<std::size_t>(j)] << '\t'
      << format_number(map.positions_kb[static_cast<std::size_t>(j)]) << '\t'
      << format_number(summary.p_c[j]) << '\t'
      << format_number(summary.beta_mean[j]) << '\t'
      << format_number(summary.beta_best[j]) << '\t'
      << summary.c_best[static_cast<std::size_t>(j)] << '\t'
      << rank_of[static_cast<std::size_t>(j)] << '\n';
}

void write_scores(const fs::path &path, const GenotypeMatrix &X,
                  const MarkerMap &map, const std::vector<double> &scores,
                  const std::string &score_column,
                  const std::vector<Eigen::Index> &ranking) {
  std::vector<long> rank_of(static_cast<std::size_t>(X.n_markers()), 0);
  for (std::size_t r = 0; r < ranking.size(); ++r)
    rank_of[static_cast<std::size_t>(ranking[r])] = static_cast<long>(r + 1);
  std::ofstream f = open_out(path);
  f << "marker_id\tposition_kb\t" << score_column << "\trank\n";
  for (Eigen::Index j = 0; j < X.n_markers(); ++j)
    f << X.marker_ids[static_cast<std::size_t>(j)] << '\t'
      << format_number(map.positions_kb[static_cast<std::size_t>(j)]) << '\t'
      << format_number(scores[static_cast<std::size_t>(j)]) << '\t'
      << rank_of[static_cast<std::size_t>(j)] << '\n';
}

void write_trace(const fs::path &path, const SampleTrace &trace) {
  std::ofstream f = open_out(path);
  f << "retained_index\tsigma_sq\tlambda\tpi0\tpi1\ttrain_error\n";
  for (std::size_t t = 0; t < trace.retained.size(); ++t) {
    const auto &r = trace.retained[t];
    f << t << '\t' << format_number(r.state.sigma_sq) << '\t'
      << format_number(r.state.lambda) << '\t' << format_number(r.state.pi0)
      << '\t' << format_number(r.state.pi1) << '\t'
      << format_number(r.train_error) << '\n';
  }
}

void write_pr_curve(const fs::path &path, const eval::PRCurve &curve) {
  std::ofstream f = open_out(path);
  f << "k\tprecision\trecall\n";
  for (const auto &pt : curve.points)
    f << pt.k << '\t' << format_number(pt.precision) << '\t'
      << format_number(pt.recall) << '\n';
}

void write_manifest(const fs::path &path,
                    const std::vector<std::pair<std::string, std::string>> &kv) {
  std::ofstream f = open_out(path);
  for (const auto &[k, v] : kv) f << k << '=' << v << '\n';
}

Dataset segment_dataset(const Dataset &data, Eigen::Index begin,
                        Eigen::Index end) {
  Dataset seg;
  seg.genotypes.values = data.genotypes.values.middleCols(begin, end - begin);
  seg.genotypes.individual_ids = data.genotypes.individual_ids;
  seg.genotypes.marker_ids.assign(
      data.genotypes.marker_ids.begin() + begin,
      data.genotypes.marker_ids.begin() + end);
  std::vector<double> positions(data.map.positions_kb.begin() + begin,
                                data.map.positions_kb.begin() + end);
  std::vector<double> rho(data.map.rho.begin() + begin,
                          data.map.rho.begin() + end);
  seg.map = MarkerMap::from_positions(std::move(positions), std::move(rho));
  seg.phenotype = data.phenotype;
  return seg;
}

eval::PosteriorSummary run_segmented(const Dataset &data, long segment_size,
                                     std::uint64_t seed,
                                     const SegmentFit &fit) {
  if (segment_size < 1) throw InvalidArgument("segment_size must be >= 1");
  const Eigen::Index J = data.genotypes.n_markers();
  eval::PosteriorSummary out;
  out.p_c.resize(J);
  out.beta_mean.resize(J);
  out.beta_best.resize(J);
  out.c_best.resize(static_cast<std::size_t>(J));
  long segment = 0;
  for (Eigen::Index begin = 0; begin < J; begin += segment_size, ++segment) {
    const Eigen::Index end = std::min<Eigen::Index>(begin + segment_size, J);
    try {
      const Dataset seg = segment_dataset(data, begin, end);
      const eval::PosteriorSummary s =
          fit(seg, mix_seed(seed, static_cast<std::uint64_t>(segment)));
      out.p_c.segment(begin, end - begin) = s.p_c;
      out.beta_mean.segment(begin, end - begin) = s.beta_mean;
      out.beta_best.segment(begin, end - begin) = s.beta_best;
      for (Eigen::Index j = begin; j < end; ++j)
        out.c_best[static_cast<std::size_t>(j)] =
            s.c_best[static_cast<std::size_t>(j - begin)];
      out.n_samples = s.n_samples;
    } catch (const Error &e) {
      throw Error("segment " + std::to_string(segment) + " failed: " +
                  e.what());
    }
  }
  return out;
}

}  // namespace blockreg::io
