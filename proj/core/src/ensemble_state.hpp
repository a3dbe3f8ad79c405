#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rko/decoder.hpp"
#include "rko/elite_pool.hpp"
#include "rko/search_context.hpp"

namespace rko::detail {

/// Hands a single execution token round-robin between searcher threads so a
/// multi-searcher run becomes a deterministic function of the master seed.
class Turnstile {
 public:
  explicit Turnstile(std::size_t participants) : active_(participants, true) {}

  void enter(std::size_t id) {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return turn_ == id; });
  }

  void yield(std::size_t id) {
    std::unique_lock lock(mutex_);
    advance();
    cv_.notify_all();
    cv_.wait(lock, [&] { return turn_ == id; });
  }

  void leave(std::size_t id) {
    std::unique_lock lock(mutex_);
    active_[id] = false;
    if (turn_ == id) advance();
    cv_.notify_all();
  }

 private:
  void advance() {
    const std::size_t n = active_.size();
    for (std::size_t k = 1; k <= n; ++k) {
      const std::size_t cand = (turn_ + k) % n;
      if (active_[cand]) {
        turn_ = cand;
        return;
      }
    }
    turn_ = n;  // nobody left
  }

  std::mutex mutex_;
  std::condition_variable cv_;
  std::vector<bool> active_;
  std::size_t turn_ = 0;
};

class EnsembleState {
 public:
  using Clock = std::chrono::steady_clock;

  EnsembleState(const Decoder& decoder, std::size_t poolCapacity, const RunBudget& budget)
      : decoder(decoder), pool(poolCapacity), budget(budget), start(Clock::now()) {}

  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }

  bool stopRequested() const { return stop.load(std::memory_order_acquire); }
  void requestStop() { stop.store(true, std::memory_order_release); }

  void recordFailure(std::exception_ptr e) {
    std::lock_guard lock(bestMutex);
    if (!failure) failure = e;
    requestStop();
  }

  // Called after an accepted pool insertion.
  void noteAccepted(const EvaluatedSolution& s, const std::string& label) {
    std::lock_guard lock(bestMutex);
    if (s.cost() < bestCost) {
      bestCost = s.cost();
      bestTime = elapsed();
      bestCalls = s.decodedAt();
      bestLabel = label;
      trace.push_back({bestTime, bestCalls, bestCost, label});
      if (budget.targetCost && bestCost <= *budget.targetCost) requestStop();
    }
  }

  const Decoder& decoder;
  ElitePool pool;
  RunBudget budget;
  Clock::time_point start;

  std::atomic<std::uint64_t> issued{0};
  std::atomic<std::uint64_t> calls{0};
  std::atomic<bool> stop{false};

  std::optional<Turnstile> turnstile;
  std::size_t cooperativeParticipants = 0;
  std::size_t quantum = 100;

  std::mutex bestMutex;
  double bestCost = std::numeric_limits<double>::infinity();
  double bestTime = 0.0;
  std::uint64_t bestCalls = 0;
  std::string bestLabel;
  std::vector<TracePoint> trace;
  std::exception_ptr failure;
};

}  // namespace rko::detail
