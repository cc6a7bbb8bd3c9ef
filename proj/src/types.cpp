#include "blockreg/types.hpp"

#include <cmath>

namespace blockreg {

MarkerMap MarkerMap::from_positions(std::vector<double> positions_kb,
                                    std::vector<double> rho) {
  if (rho.size() != positions_kb.size())
    throw DimensionMismatch("rho length does not match positions length");
  MarkerMap map;
  map.positions_kb = std::move(positions_kb);
  map.rho = std::move(rho);
  map.d.assign(map.positions_kb.size(), 0.0);
  for (std::size_t j = 1; j < map.positions_kb.size(); ++j)
    map.d[j] = map.positions_kb[j] - map.positions_kb[j - 1];
  return map;
}

void Hyperparameters::validate() const {
  auto pos = [](double v, const char *name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidArgument(std::string("hyperparameter ") + name +
                            " must be strictly positive");
  };
  pos(nu0, "nu0");
  pos(s0_sq, "s0_sq");
  pos(alpha, "alpha");
  pos(gamma, "gamma");
  pos(a00, "a00");
  pos(b00, "b00");
  pos(a10, "a10");
  pos(b10, "b10");
  pos(bern_a, "bern_a");
  pos(bern_b, "bern_b");
}

void SamplingSchedule::validate() const {
  if (thin < 1) throw InvalidArgument("thin must be >= 1");
  if (iterations < thin)
    throw InvalidArgument("iterations must be >= thin");
  if (burn_in < 0) throw InvalidArgument("burn_in must be >= 0");
}

Dataset validate_dataset(GenotypeMatrix X, MarkerMap map, PhenotypeVector y) {
  const Eigen::Index n = X.n_individuals();
  const Eigen::Index J = X.n_markers();
  if (n < 2) throw DimensionMismatch("need at least 2 individuals");
  if (J < 1) throw DimensionMismatch("need at least 1 marker");
  if (y.values.size() != n)
    throw DimensionMismatch("phenotype length " +
                            std::to_string(y.values.size()) +
                            " does not match N=" + std::to_string(n));
  if (map.n_markers() != J)
    throw DimensionMismatch("marker map has " +
                            std::to_string(map.n_markers()) +
                            " entries for J=" + std::to_string(J) +
                            " markers");
  if (!X.marker_ids.empty() &&
      static_cast<Eigen::Index>(X.marker_ids.size()) != J)
    throw DimensionMismatch("marker id count does not match J");
  if (X.marker_ids.empty()) {
    X.marker_ids.reserve(J);
    for (Eigen::Index j = 0; j < J; ++j)
      X.marker_ids.push_back("m" + std::to_string(j + 1));
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(y.values[i]))
      throw NonFiniteValue("phenotype value for individual " +
                           std::to_string(i + 1) + " is not finite");
  }
  for (Eigen::Index j = 0; j < J; ++j) {
    bool seen[3] = {false, false, false};
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = X.values(i, j);
      if (!std::isfinite(v)) throw NonFiniteValue("non-finite genotype value");
      if (v != 0.0 && v != 1.0 && v != 2.0)
        throw NonFiniteValue("genotype value outside {0,1,2} at individual " +
                             std::to_string(i + 1) + ", marker " +
                             X.marker_ids[j]);
      seen[static_cast<int>(v)] = true;
    }
    if (seen[0] + seen[1] + seen[2] < 2)
      throw ConstantColumn("marker " + X.marker_ids[j] +
                           " has zero sample variance");
  }

  for (std::size_t j = 1; j < map.positions_kb.size(); ++j) {
    if (map.positions_kb[j] < map.positions_kb[j - 1])
      throw NegativeDistance("marker positions decrease at index " +
                             std::to_string(j + 1));
  }
  for (double r : map.rho) {
    if (!(r >= 0.0) || !std::isfinite(r))
      throw NonFiniteValue("recombination rate must be finite and >= 0");
  }
  // d is always recomputed from positions.
  map = MarkerMap::from_positions(std::move(map.positions_kb),
                                  std::move(map.rho));

  return Dataset{std::move(X), std::move(map), std::move(y)};
}

double center_dataset(Dataset &data) {
  Eigen::MatrixXd &X = data.genotypes.values;
  X.rowwise() -= X.colwise().mean();
  const double offset = data.phenotype.values.mean();
  data.phenotype.values.array() -= offset;
  return offset;
}

ModelState initial_state(const Dataset &data, const Hyperparameters &hyper,
                         std::uint64_t /*seed*/) {
  hyper.validate();
  const Eigen::Index J = data.genotypes.n_markers();
  ModelState s;
  s.beta = Eigen::VectorXd::Zero(J);
  s.c.assign(static_cast<std::size_t>(J), 0);
  const Eigen::VectorXd &y = data.phenotype.values;
  const double mean = y.mean();
  const double var =
      (y.array() - mean).square().sum() / static_cast<double>(y.size() - 1);
  s.sigma_sq = var > 0.0 ? var : 1.0;
  s.lambda = 1.0;
  s.pi0 = hyper.a00 / (hyper.a00 + hyper.b00);
  s.pi1 = hyper.a10 / (hyper.a10 + hyper.b10);
  return s;
}

double train_error(const GenotypeMatrix &X, const PhenotypeVector &y,
                   const Eigen::VectorXd &beta) {
  return (y.values - X.values * beta).squaredNorm();
}

}  // namespace blockreg
