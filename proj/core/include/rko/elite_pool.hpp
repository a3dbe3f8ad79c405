#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <vector>

#include "rko/random_keys.hpp"

namespace rko {

/// A key vector together with its decoded cost. Immutable once built.
class EvaluatedSolution {
 public:
  /// Throws std::invalid_argument if cost is not finite.
  EvaluatedSolution(RandomKeyVector vector, double cost, std::uint64_t decodedAt = 0);

  const RandomKeyVector& vector() const noexcept { return vector_; }
  double cost() const noexcept { return cost_; }
  /// Ordinal of the decoder call that produced the cost.
  std::uint64_t decodedAt() const noexcept { return decodedAt_; }

 private:
  RandomKeyVector vector_;
  double cost_;
  std::uint64_t decodedAt_;
};

enum class InsertOutcome { Accepted, RejectedDuplicate, RejectedWorse };

const char* toString(InsertOutcome outcome) noexcept;

inline constexpr std::size_t kDefaultPoolCapacity = 20;

/// Bounded set of distinct elite solutions ordered by cost, shared by all
/// searchers of a run. Safe for concurrent insert and read.
///
/// Once full, an accepted candidate replaces the entry that is closest to it
/// in key space among the entries with strictly worse cost, so the size stays
/// at capacity.
class ElitePool {
 public:
  explicit ElitePool(std::size_t capacity = kDefaultPoolCapacity);

  InsertOutcome insert(const EvaluatedSolution& candidate);

  std::optional<EvaluatedSolution> best() const;
  std::optional<double> bestCost() const;

  /// Uniformly chosen member. Throws std::logic_error when the pool is empty.
  EvaluatedSolution sample(Rng& rng) const;

  /// Copy of all entries, cost ascending.
  std::vector<EvaluatedSolution> snapshot() const;

  std::size_t size() const;
  std::size_t capacity() const noexcept { return capacity_; }

 private:
  std::size_t capacity_;
  mutable std::shared_mutex mutex_;
  std::vector<EvaluatedSolution> entries_;
};

}  // namespace rko
