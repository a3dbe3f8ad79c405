#include "rko/ensemble.hpp"

#include <stdexcept>
#include <thread>

#include "ensemble_state.hpp"

namespace rko {

RunReport runEnsemble(const Decoder& decoder, const SearcherList& searchers,
                      const RunBudget& budget, const EnsembleOptions& options) {
  budget.validate();
  if (searchers.empty()) throw std::invalid_argument("ensemble needs at least one searcher");
  if (decoder.dimension() == 0) throw InvalidDimension("decoder dimension must be >= 1");
  if (options.quantum == 0) throw std::invalid_argument("quantum must be >= 1");

  detail::EnsembleState state(decoder, options.poolCapacity, budget);
  const std::size_t count = searchers.size();

  // Pool initialization uses its own stream, after all searcher streams.
  {
    SearchContext init(state, count, "pool-init", deriveStream(budget.masterSeed, count),
                       SearchContext::OfferPolicy::Everything);
    try {
      for (std::size_t i = 0; i < options.poolCapacity; ++i) init.randomSolution();
    } catch (const SearchStopped&) {
    } catch (...) {
      state.recordFailure(std::current_exception());
    }
  }

  if (!state.stopRequested()) {
    if (options.deterministic) {
      state.turnstile.emplace(count);
      state.cooperativeParticipants = count;
      state.quantum = options.quantum;
    }

    std::vector<std::thread> threads;
    threads.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      threads.emplace_back([&state, &searchers, &budget, i] {
        SearchContext ctx(state, i, searchers[i]->name(), deriveStream(budget.masterSeed, i));
        if (state.turnstile) state.turnstile->enter(i);
        try {
          searchers[i]->run(ctx);
        } catch (const SearchStopped&) {
        } catch (...) {
          state.recordFailure(std::current_exception());
        }
        if (state.turnstile) state.turnstile->leave(i);
      });
    }
    for (auto& t : threads) t.join();
  }

  if (state.failure) {
    try {
      std::rethrow_exception(state.failure);
    } catch (const DecoderFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw DecoderFailure(std::string("search aborted: ") + e.what());
    }
  }

  RunReport report;
  const auto best = state.pool.best();
  if (!best) throw std::logic_error("ensemble finished with an empty pool");
  report.bestCost = best->cost();
  report.bestVector = best->vector();
  report.timeToBest = state.bestTime;
  report.callsToBest = state.bestCalls;
  report.decoderCalls = state.calls.load();
  report.seed = budget.masterSeed;
  report.searcherId = state.bestLabel;
  report.elapsed = state.elapsed();
  report.trace = state.trace;
  return report;
}

}  // namespace rko
