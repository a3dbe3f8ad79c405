#include "rko/elite_pool.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace rko {

EvaluatedSolution::EvaluatedSolution(RandomKeyVector vector, double cost,
                                     std::uint64_t decodedAt)
    : vector_(std::move(vector)), cost_(cost), decodedAt_(decodedAt) {
  if (!std::isfinite(cost_)) throw std::invalid_argument("evaluated solution cost must be finite");
}

const char* toString(InsertOutcome outcome) noexcept {
  switch (outcome) {
    case InsertOutcome::Accepted: return "accepted";
    case InsertOutcome::RejectedDuplicate: return "rejected-duplicate";
    case InsertOutcome::RejectedWorse: return "rejected-worse";
  }
  return "unknown";
}

ElitePool::ElitePool(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("elite pool capacity must be >= 1");
  entries_.reserve(capacity_);
}

InsertOutcome ElitePool::insert(const EvaluatedSolution& candidate) {
  std::unique_lock lock(mutex_);

  for (const auto& e : entries_) {
    if (e.vector() == candidate.vector()) return InsertOutcome::RejectedDuplicate;
  }

  const auto byCost = [](const EvaluatedSolution& a, const EvaluatedSolution& b) {
    return a.cost() < b.cost();
  };

  if (entries_.size() < capacity_) {
    // upper_bound keeps earlier arrivals ahead of later ones at equal cost.
    auto pos = std::upper_bound(entries_.begin(), entries_.end(), candidate, byCost);
    entries_.insert(pos, candidate);
    return InsertOutcome::Accepted;
  }

  // Entries are sorted, so the strictly-worse ones form a suffix.
  auto firstWorse = std::upper_bound(entries_.begin(), entries_.end(), candidate, byCost);
  if (firstWorse == entries_.end()) return InsertOutcome::RejectedWorse;

  auto victim = entries_.end();
  double nearest = std::numeric_limits<double>::infinity();
  for (auto it = firstWorse; it != entries_.end(); ++it) {
    const double d = similarityDistance(it->vector(), candidate.vector());
    if (d < nearest) {
      nearest = d;
      victim = it;
    }
  }
  entries_.erase(victim);
  auto pos = std::upper_bound(entries_.begin(), entries_.end(), candidate, byCost);
  entries_.insert(pos, candidate);
  return InsertOutcome::Accepted;
}

std::optional<EvaluatedSolution> ElitePool::best() const {
  std::shared_lock lock(mutex_);
  if (entries_.empty()) return std::nullopt;
  return entries_.front();
}

std::optional<double> ElitePool::bestCost() const {
  std::shared_lock lock(mutex_);
  if (entries_.empty()) return std::nullopt;
  return entries_.front().cost();
}

EvaluatedSolution ElitePool::sample(Rng& rng) const {
  std::shared_lock lock(mutex_);
  if (entries_.empty()) throw std::logic_error("cannot sample from an empty elite pool");
  std::uniform_int_distribution<std::size_t> pick(0, entries_.size() - 1);
  return entries_[pick(rng)];
}

std::vector<EvaluatedSolution> ElitePool::snapshot() const {
  std::shared_lock lock(mutex_);
  return entries_;
}

std::size_t ElitePool::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

}  // namespace rko
