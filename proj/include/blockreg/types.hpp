#ifndef BLOCKREG_TYPES_HPP
#define BLOCKREG_TYPES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace blockreg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : Error { using Error::Error; };
struct ConstantColumn : Error { using Error::Error; };
struct NonFiniteValue : Error { using Error::Error; };
struct NegativeDistance : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct InvalidArgument : Error { using Error::Error; };
struct DegenerateBeta : Error { using Error::Error; };
struct ZeroVarianceColumn : Error { using Error::Error; };
struct SolveFailure : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct OddHaplotypeCount : Error { using Error::Error; };
struct AllMarkersFiltered : Error { using Error::Error; };
struct InfeasibleBlocks : Error { using Error::Error; };
struct EmptyTrace : Error { using Error::Error; };
struct EmptyTruth : Error { using Error::Error; };

// N x J design matrix of minor-allele counts in {0,1,2}.
struct GenotypeMatrix {
  Eigen::MatrixXd values;                    // N x J
  std::vector<std::string> marker_ids;       // J
  std::vector<std::string> individual_ids;   // N (may be empty before io)

  Eigen::Index n_individuals() const { return values.rows(); }
  Eigen::Index n_markers() const { return values.cols(); }
};

// Per-interval distances (kb) and recombination rates (per kb).
// d[j] and rho[j] describe the interval between markers j-1 and j;
// index 0 is defined as 0 / unused.
struct MarkerMap {
  std::vector<double> positions_kb;
  std::vector<double> d;
  std::vector<double> rho;

  static MarkerMap from_positions(std::vector<double> positions_kb,
                                  std::vector<double> rho);
  Eigen::Index n_markers() const {
    return static_cast<Eigen::Index>(positions_kb.size());
  }
};

struct PhenotypeVector {
  Eigen::VectorXd values;
};

struct Hyperparameters {
  double nu0 = 1.0;
  double s0_sq = 1.0;   // sigma^2 ~ Inv-gamma(nu0/2, nu0*s0_sq/2)
  double alpha = 1.0;
  double gamma = 1.0;   // lambda ~ Inv-gamma(alpha, gamma)
  double a00 = 10.0, b00 = 2.0;      // pi0 ~ Beta(a00, b00)
  double a10 = 10.0, b10 = 2.0;      // pi1 ~ Beta(a10, b10)
  double bern_a = 10.0, bern_b = 2.0;  // p ~ Beta(bern_a, bern_b)

  void validate() const;
};

// One Gibbs state. For the independent-Bernoulli prior variant, pi1 holds p
// and pi0 = 1 - p (the dp->inf, pi1 = p parameterization of the same chain).
struct ModelState {
  Eigen::VectorXd beta;
  std::vector<int> c;
  double sigma_sq = 1.0;
  double lambda = 1.0;
  double pi0 = 0.5;
  double pi1 = 0.5;
};

struct SamplingSchedule {
  long burn_in = 2000;
  long iterations = 5000;
  long thin = 10;
  std::uint64_t seed = 0;

  void validate() const;
  long n_retained() const { return iterations / thin; }
};

struct RetainedSample {
  ModelState state;
  double train_error = 0.0;  // sum_i (y_i - x_i beta)^2 at this snapshot
};

struct SampleTrace {
  std::vector<RetainedSample> retained;
  SamplingSchedule schedule;
};

struct Dataset {
  GenotypeMatrix genotypes;
  MarkerMap map;
  PhenotypeVector phenotype;
};

// Checks dimensions and value domains, rejects constant columns, and
// recomputes d from positions. Idempotent.
Dataset validate_dataset(GenotypeMatrix X, MarkerMap map, PhenotypeVector y);

// Prepares a validated dataset for the intercept-free regression fits by
// removing the column means from the genotypes and the mean from the
// phenotype. Centering only the phenotype is not enough: an uncentered
// design matrix leaves a constant offset sum_j beta_j * mean(x_j) in the
// residuals that the model can only absorb by activating spurious markers.
// Returns the phenotype offset that was removed.
double center_dataset(Dataset &data);

// All-inactive start: beta = c = 0, sigma_sq = var(y), lambda = 1,
// pi0/pi1 at their prior means.
ModelState initial_state(const Dataset &data, const Hyperparameters &hyper,
                         std::uint64_t seed);

double train_error(const GenotypeMatrix &X, const PhenotypeVector &y,
                   const Eigen::VectorXd &beta);

}  // namespace blockreg

#endif
