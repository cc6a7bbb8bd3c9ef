#include <doctest.h>

#include "blockreg/types.hpp"

using namespace blockreg;

namespace {

GenotypeMatrix make_genotypes(std::initializer_list<std::initializer_list<double>> rows) {
  GenotypeMatrix X;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto J = static_cast<Eigen::Index>(rows.begin()->size());
  X.values.resize(n, J);
  Eigen::Index i = 0;
  for (const auto &row : rows) {
    Eigen::Index j = 0;
    for (double v : row) X.values(i, j++) = v;
    ++i;
  }
  return X;
}

MarkerMap make_map(std::vector<double> positions, double rho = 0.1) {
  std::vector<double> rho_vec(positions.size(), rho);
  return MarkerMap::from_positions(std::move(positions), std::move(rho_vec));
}

}  // namespace

TEST_SUITE("data-model") {

TEST_CASE("well-formed dataset is accepted and d recomputed") {
  auto X = make_genotypes({{0, 1}, {1, 2}, {2, 0}});
  auto map = make_map({1.0, 3.5});
  map.d = {99.0, 99.0};  // stale; must be recomputed
  PhenotypeVector y{Eigen::Vector3d(1.0, 2.0, 3.0)};
  const Dataset ds = validate_dataset(X, map, y);
  CHECK(ds.genotypes.n_individuals() == 3);
  CHECK(ds.genotypes.n_markers() == 2);
  CHECK(ds.map.d[0] == 0.0);
  CHECK(ds.map.d[1] == doctest::Approx(2.5));
}

TEST_CASE("constant column is rejected") {
  auto X = make_genotypes({{0, 1}, {0, 2}, {0, 0}});
  PhenotypeVector y{Eigen::Vector3d(1, 2, 3)};
  CHECK_THROWS_AS(validate_dataset(X, make_map({0.0, 1.0}), y),
                  ConstantColumn);
}

TEST_CASE("phenotype length mismatch") {
  auto X = make_genotypes({{0, 1}, {1, 2}, {2, 0}});
  PhenotypeVector y{Eigen::Vector4d(1, 2, 3, 4)};
  CHECK_THROWS_AS(validate_dataset(X, make_map({0.0, 1.0}), y),
                  DimensionMismatch);
}

TEST_CASE("non-finite phenotype and genotype values rejected") {
  auto X = make_genotypes({{0, 1}, {1, 2}, {2, 0}});
  PhenotypeVector bad_y{Eigen::Vector3d(1, std::nan(""), 3)};
  CHECK_THROWS_AS(validate_dataset(X, make_map({0.0, 1.0}), bad_y),
                  NonFiniteValue);
  auto Xbad = make_genotypes({{0, 1}, {3, 2}, {2, 0}});
  PhenotypeVector y{Eigen::Vector3d(1, 2, 3)};
  CHECK_THROWS_AS(validate_dataset(Xbad, make_map({0.0, 1.0}), y),
                  NonFiniteValue);
}

TEST_CASE("decreasing positions rejected") {
  auto X = make_genotypes({{0, 1}, {1, 2}, {2, 0}});
  PhenotypeVector y{Eigen::Vector3d(1, 2, 3)};
  MarkerMap map;
  map.positions_kb = {2.0, 1.0};
  map.rho = {0.0, 0.1};
  map.d = {0.0, -1.0};
  CHECK_THROWS_AS(validate_dataset(X, map, y), NegativeDistance);
}

TEST_CASE("validation is idempotent") {
  auto X = make_genotypes({{0, 1}, {1, 2}, {2, 0}});
  PhenotypeVector y{Eigen::Vector3d(1, 2, 3)};
  const Dataset once = validate_dataset(X, make_map({0.0, 1.0}), y);
  const Dataset twice =
      validate_dataset(once.genotypes, once.map, once.phenotype);
  CHECK(once.genotypes.values == twice.genotypes.values);
  CHECK(once.map.positions_kb == twice.map.positions_kb);
  CHECK(once.map.d == twice.map.d);
  CHECK(once.map.rho == twice.map.rho);
  CHECK(once.phenotype.values == twice.phenotype.values);
  CHECK(once.genotypes.marker_ids == twice.genotypes.marker_ids);
}

TEST_CASE("initial state") {
  auto X = make_genotypes({{0, 1}, {1, 2}});
  PhenotypeVector y{Eigen::Vector2d(1.0, -1.0)};
  const Dataset ds = validate_dataset(X, make_map({0.0, 1.0}), y);
  Hyperparameters hyper;  // Beta(10,2) priors
  const ModelState s = initial_state(ds, hyper, 7);
  CHECK(s.sigma_sq == doctest::Approx(2.0));
  CHECK(s.lambda == 1.0);
  CHECK(s.pi0 == doctest::Approx(10.0 / 12.0));
  CHECK(s.pi1 == doctest::Approx(10.0 / 12.0));
  for (int cj : s.c) CHECK(cj == 0);
  for (Eigen::Index j = 0; j < s.beta.size(); ++j) CHECK(s.beta[j] == 0.0);
}

TEST_CASE("hyperparameters must be strictly positive") {
  Hyperparameters h;
  h.gamma = 0.0;
  CHECK_THROWS_AS(h.validate(), InvalidArgument);
}

}  // TEST_SUITE
