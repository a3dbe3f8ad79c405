#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rko/elite_pool.hpp"
#include "rko/local_search.hpp"
#include "rko/random_keys.hpp"

namespace rko {

/// Stopping rule of a run. At least one of the two limits must be set.
struct RunBudget {
  std::optional<double> wallClockSeconds;
  std::optional<std::uint64_t> decoderCalls;
  std::uint64_t masterSeed = 1;
  /// Optional early stop once the pool best reaches this cost (time-to-target runs).
  std::optional<double> targetCost;

  /// Throws std::invalid_argument when neither limit is set and positive.
  void validate() const;
};

struct TracePoint {
  double seconds;
  std::uint64_t decoderCalls;
  double cost;
  std::string searcher;
};

struct RunReport {
  double bestCost = 0.0;
  RandomKeyVector bestVector;
  double timeToBest = 0.0;           // seconds from run start
  std::uint64_t callsToBest = 0;     // decoder-call ordinal of the best solution
  std::uint64_t decoderCalls = 0;    // exact number of decode invocations
  std::uint64_t seed = 0;
  std::string searcherId;            // who found the best ("pool-init" for the random pool)
  double elapsed = 0.0;
  std::vector<TracePoint> trace;     // every improvement of the pool best, in order
};

/// Thrown by SearchContext::evaluate when the run is over. Deliberately not a
/// std::exception so generic handlers in searcher code do not swallow it.
struct SearchStopped {};

namespace detail {
class EnsembleState;
}

/// Everything a searcher may touch during a run: its private random stream,
/// the shared elite pool and the budgeted decoder.
class SearchContext {
 public:
  enum class OfferPolicy { PersonalImprovements, Everything };

  SearchContext(detail::EnsembleState& state, std::size_t index, std::string label,
                Rng rng, OfferPolicy policy = OfferPolicy::PersonalImprovements);

  SearchContext(const SearchContext&) = delete;
  SearchContext& operator=(const SearchContext&) = delete;

  std::size_t dimension() const;
  std::string_view label() const noexcept { return label_; }
  Rng& rng() noexcept { return rng_; }
  ElitePool& pool();

  /// Decodes `keys`, charging one decoder call. Every strict personal
  /// improvement is offered to the pool. Throws SearchStopped once the budget
  /// is spent and DecoderFailure when the decoder misbehaves.
  double evaluate(const RandomKeyVector& keys);
  EvaluatedSolution evaluateSolution(RandomKeyVector keys);

  RandomKeyVector randomVector() { return newRandomVector(dimension(), rng_); }
  EvaluatedSolution randomSolution() { return evaluateSolution(randomVector()); }

  InsertOutcome offer(const EvaluatedSolution& solution);

  /// Adapter for rvnd() and the local searches.
  const CostFunction& cost() const noexcept { return costFn_; }

  double personalBest() const noexcept { return personalBest_; }
  std::uint64_t callsIssued() const;

 private:
  detail::EnsembleState& state_;
  std::size_t index_;
  std::string label_;
  Rng rng_;
  OfferPolicy policy_;
  double personalBest_ = std::numeric_limits<double>::infinity();
  std::size_t quantumUsed_ = 0;
  std::uint64_t lastOrdinal_ = 0;
  CostFunction costFn_;
};

/// A metaheuristic of the ensemble. run() loops until the context throws
/// SearchStopped (or returns on its own). Implementations keep all per-run
/// state local to run(), so one instance can serve many runs.
class Searcher {
 public:
  virtual ~Searcher() = default;
  virtual std::string name() const = 0;
  virtual void run(SearchContext& ctx) const = 0;
};

}  // namespace rko
