#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rko/decoder.hpp"

namespace rko::mip {

/// min c^T x  s.t.  Ax <= b,  l <= x <= u,  x_i integer for i < p (0-based).
/// A is dense, row-major, m x n.
struct Instance {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t p = 0;
  std::vector<double> c;
  std::vector<double> A;
  std::vector<double> b;
  std::vector<double> l;
  std::vector<double> u;

  double coefficient(std::size_t row, std::size_t col) const { return A[row * n + col]; }
  bool isInteger(std::size_t i) const noexcept { return i < p; }

  /// Throws std::invalid_argument on shape or bound violations.
  void validate() const;
};

/// Quadratic penalty phi(delta) = prefactor * delta^2 on violated rows.
struct PenaltyModel {
  double prefactor = 1e4;
};

struct Assignment {
  std::vector<double> x;
  double cost = 0.0;
  std::vector<double> slack;  // b - Ax, negative entries are violations
};

struct FeasibilityReport {
  std::vector<double> slack;
  std::size_t violatedRows = 0;
  bool boundsOk = true;
  bool integralityOk = true;
  bool feasible = false;
};

/// Integer variables: round-half-up of l - 0.5 + (u - l + 1) * key.
/// Continuous variables: l + (u - l) * key.
std::vector<double> mapKeysToAssignment(const Instance& instance, std::span<const double> keys);

std::vector<double> rowSlack(const Instance& instance, std::span<const double> x);
double linearCost(const Instance& instance, std::span<const double> x);

/// Cost c^T x plus the penalty of every violated row.
Assignment decode(const Instance& instance, const PenaltyModel& penalty,
                  std::span<const double> keys);

/// Feasible iff every slack >= 0, bounds hold and integer variables are
/// integral (tolerance 1e-9).
FeasibilityReport checkFeasibility(const Instance& instance, std::span<const double> x);

class MipDecoder final : public Decoder {
 public:
  explicit MipDecoder(Instance instance, PenaltyModel penalty = {});

  std::size_t dimension() const override { return instance_.n; }
  double decode(std::span<const double> keys) const override;

  const Instance& instance() const noexcept { return instance_; }
  const PenaltyModel& penalty() const noexcept { return penalty_; }

 private:
  Instance instance_;
  PenaltyModel penalty_;
};

struct OracleResult {
  bool feasible = false;
  double bestCost = 0.0;
  std::vector<double> bestX;
  std::size_t evaluated = 0;
};

inline constexpr std::size_t kMaxOracleAssignments = std::size_t{1} << 20;

/// Exhaustive scan of every integer point of the box. Continuous variables,
/// if any, are restricted to their two bounds (box corners). Throws
/// GuardExceeded when more than kMaxOracleAssignments points would be scanned.
OracleResult bruteForce(const Instance& instance);

}  // namespace rko::mip
