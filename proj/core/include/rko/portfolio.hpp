#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rko/decoder.hpp"

namespace rko::portfolio {

/// Cardinality-constrained mean-variance instance. Sigma is dense, row-major.
/// Assets are identified 1..n in reports; storage is 0-based.
struct Instance {
  std::size_t n = 0;
  std::vector<double> mu;
  std::vector<double> sigma;
  double lambda = 0.5;
  std::size_t K = 1;
  std::vector<double> lower;
  std::vector<double> upper;

  double cov(std::size_t i, std::size_t j) const { return sigma[i * n + j]; }

  /// Throws std::invalid_argument on shape errors, asymmetric Sigma
  /// (tolerance 1e-12), bounds outside 0 <= l <= u <= 1, K outside [1, n] or
  /// when K*min(l) <= 1 <= K*max(u) does not hold.
  void validate() const;
};

/// Same bounds for every asset.
Instance makeInstance(std::vector<double> mu, std::vector<double> sigma, double lambda,
                      std::size_t K, double lower, double upper);

struct Solution {
  std::vector<double> w;
  std::vector<int> z;
  std::vector<std::size_t> selected;  // 1-based asset ids in selection order
  std::vector<double> rawWeights;     // pre-normalization weights of `selected`
  double cost = 0.0;
  double penalty = 0.0;
};

inline constexpr double kProportionalPenalty = 1e4;
inline constexpr double kFixedPenalty = 1e3;

/// lambda * w'Sigma w - (1 - lambda) * mu'w
double objective(const Instance& instance, std::span<const double> w);
double risk(const Instance& instance, std::span<const double> w);
double expectedReturn(const Instance& instance, std::span<const double> w);

/// 1-based position picked by `key` in a list of `remaining` assets.
std::size_t selectionPosition(double key, std::size_t remaining);

/// Selection without replacement from keys[0..K), weights from keys[K..2K),
/// normalization to unit budget and bound penalties. Keys must have length 2K.
Solution decode(const Instance& instance, std::span<const double> keys);

struct FeasibilityReport {
  bool budgetOk = true;       // sum w = 1 within 1e-9
  bool cardinalityOk = true;  // sum z = K
  bool boundsOk = true;       // l z <= w <= u z
  bool binaryOk = true;       // z in {0,1}
  std::vector<std::size_t> boundViolations;  // 1-based asset ids
  bool feasible() const { return budgetOk && cardinalityOk && boundsOk && binaryOk; }
  std::string describe() const;
};

FeasibilityReport check(const Instance& instance, const Solution& solution);

class PortfolioDecoder final : public Decoder {
 public:
  explicit PortfolioDecoder(Instance instance);

  std::size_t dimension() const override { return 2 * instance_.K; }
  double decode(std::span<const double> keys) const override;

  const Instance& instance() const noexcept { return instance_; }

 private:
  Instance instance_;
};

struct OracleResult {
  double bestCost = 0.0;
  std::vector<double> w;
  std::vector<std::size_t> selected;  // 1-based
  std::size_t evaluated = 0;
};

inline constexpr double kMaxOracleWork = 1e7;

/// Number of weight vectors on the step-`gridStep` simplex grid of dimension
/// K whose coordinates lie in [lower, upper].
double gridPointsPerSubset(std::size_t K, double lower, double upper, double gridStep);

/// Exhaustive reference: every K-subset times every grid weight vector inside
/// the bounds; minimizes the objective. Requires uniform bounds. Throws
/// GuardExceeded when C(n,K) * grid points exceeds kMaxOracleWork.
OracleResult bruteForce(const Instance& instance, double gridStep);

/// Bound on how far the grid optimum can sit above the continuous optimum:
/// the largest partial derivative magnitude times K times the grid step.
double gridResolutionBound(const Instance& instance, double gridStep);

}  // namespace rko::portfolio
