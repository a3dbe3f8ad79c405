#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "rko/elite_pool.hpp"
#include "rko/random_keys.hpp"

namespace rko {

/// Cost of a key vector as seen by a search procedure. Inside an ensemble run
/// this wraps the shared decoder-call accounting and may throw to signal that
/// the run is over.
using CostFunction = std::function<double(std::span<const double>)>;

/// Cost function with a local call limit.
class BudgetedCost {
 public:
  BudgetedCost(const CostFunction& cost, std::size_t limit) : cost_(cost), limit_(limit) {}

  /// nullopt once the limit has been reached; the wrapped function is not called.
  std::optional<double> operator()(const RandomKeyVector& keys);

  bool exhausted() const noexcept { return used_ >= limit_; }
  std::size_t used() const noexcept { return used_; }
  std::size_t remaining() const noexcept { return exhausted() ? 0 : limit_ - used_; }

 private:
  const CostFunction& cost_;
  std::size_t limit_;
  std::size_t used_ = 0;
};

/// Current point of a local search; `at` is the BudgetedCost ordinal of its
/// evaluation (0 for the starting point).
struct Incumbent {
  RandomKeyVector keys;
  double cost;
  std::size_t at = 0;
};

enum class LocalSearchKind { Swap, Mirror, Farey, NelderMead };

inline constexpr std::array<LocalSearchKind, 4> kLocalSearches = {
    LocalSearchKind::Swap, LocalSearchKind::Mirror, LocalSearchKind::Farey,
    LocalSearchKind::NelderMead};

std::string_view toString(LocalSearchKind kind) noexcept;

/// Farey sequence of order 7 with 1/1 replaced by 0.9999.
std::span<const double> fareyValues() noexcept;

struct NelderMeadConfig {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double initialStep = 0.05;
  std::size_t callsPerDimension = 50;
  double minDiameter = 1e-4;
};

// Each local search returns true when it strictly improved `current`. All of
// them stop early once `budget` is exhausted.

/// Repeated first-improvement passes over index pairs (i<j) in shuffled order.
bool swapLocalSearch(Incumbent& current, BudgetedCost& budget, Rng& rng);
/// Repeated first-improvement passes replacing key i by 1 - key i.
bool mirrorLocalSearch(Incumbent& current, BudgetedCost& budget, Rng& rng);
/// Repeated passes trying every Farey value at each index, shuffled order.
bool fareyLocalSearch(Incumbent& current, BudgetedCost& budget, Rng& rng);
/// Nelder-Mead simplex search with vertices clamped to the key range.
bool nelderMeadLocalSearch(Incumbent& current, BudgetedCost& budget, Rng& rng,
                           const NelderMeadConfig& config = {});

bool runLocalSearch(LocalSearchKind kind, Incumbent& current, BudgetedCost& budget, Rng& rng);

/// Randomized variable neighborhood descent over the four local searches.
/// Spends at most `maxCalls` calls of `cost` beyond the start evaluation and
/// never returns a worse solution than `start`.
EvaluatedSolution rvnd(const EvaluatedSolution& start, const CostFunction& cost,
                       std::size_t maxCalls, Rng& rng);

}  // namespace rko
