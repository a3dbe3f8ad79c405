#include "rko/search_context.hpp"

#include <cmath>
#include <stdexcept>

#include "ensemble_state.hpp"

namespace rko {

void RunBudget::validate() const {
  const bool wallOk = wallClockSeconds && *wallClockSeconds > 0.0;
  const bool callsOk = decoderCalls && *decoderCalls > 0;
  if (wallClockSeconds && !wallOk) throw std::invalid_argument("wall-clock limit must be > 0");
  if (decoderCalls && !callsOk) throw std::invalid_argument("decoder-call limit must be > 0");
  if (!wallOk && !callsOk) {
    throw std::invalid_argument("run budget needs a wall-clock or decoder-call limit");
  }
}

SearchContext::SearchContext(detail::EnsembleState& state, std::size_t index, std::string label,
                             Rng rng, OfferPolicy policy)
    : state_(state),
      index_(index),
      label_(std::move(label)),
      rng_(std::move(rng)),
      policy_(policy),
      costFn_([this](std::span<const double> keys) {
        return evaluate(RandomKeyVector(std::vector<double>(keys.begin(), keys.end())));
      }) {}

std::size_t SearchContext::dimension() const { return state_.decoder.dimension(); }

ElitePool& SearchContext::pool() { return state_.pool; }

std::uint64_t SearchContext::callsIssued() const { return state_.calls.load(); }

double SearchContext::evaluate(const RandomKeyVector& keys) {
  if (state_.stopRequested()) throw SearchStopped{};

  const auto& budget = state_.budget;
  if (budget.decoderCalls) {
    if (state_.issued.fetch_add(1) >= *budget.decoderCalls) {
      state_.requestStop();
      throw SearchStopped{};
    }
  }
  if (budget.wallClockSeconds && state_.elapsed() >= *budget.wallClockSeconds) {
    state_.requestStop();
    throw SearchStopped{};
  }

  double c = 0.0;
  try {
    c = state_.decoder.decode(keys.view());
  } catch (const std::exception& e) {
    throw DecoderFailure(std::string("decoder threw: ") + e.what());
  }
  const std::uint64_t ordinal = state_.calls.fetch_add(1) + 1;
  lastOrdinal_ = ordinal;
  if (!std::isfinite(c)) throw DecoderFailure("decoder returned a non-finite cost");

  // A result that completes after the deadline is not admitted.
  if (budget.wallClockSeconds && state_.elapsed() > *budget.wallClockSeconds) {
    state_.requestStop();
    throw SearchStopped{};
  }

  if (policy_ == OfferPolicy::Everything || c < personalBest_) {
    personalBest_ = std::min(personalBest_, c);
    offer(EvaluatedSolution(keys, c, ordinal));
  }

  if (state_.turnstile && index_ < state_.cooperativeParticipants &&
      ++quantumUsed_ >= state_.quantum) {
    quantumUsed_ = 0;
    state_.turnstile->yield(index_);
  }
  return c;
}

EvaluatedSolution SearchContext::evaluateSolution(RandomKeyVector keys) {
  const double c = evaluate(keys);
  return EvaluatedSolution(std::move(keys), c, lastOrdinal_);
}

InsertOutcome SearchContext::offer(const EvaluatedSolution& solution) {
  const auto outcome = state_.pool.insert(solution);
  if (outcome == InsertOutcome::Accepted) state_.noteAccepted(solution, label_);
  return outcome;
}

}  // namespace rko
