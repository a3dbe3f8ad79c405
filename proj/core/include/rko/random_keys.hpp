#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace rko {

/// Random stream used by every searcher. Each searcher owns its own instance.
using Rng = std::mt19937_64;

/// Largest admissible key. Arithmetic that would produce a key >= 1 clamps here.
inline constexpr double kMaxKey = 1.0 - 1e-9;

class InvalidDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Clamps a value into [0, kMaxKey].
double clampKey(double value) noexcept;

/// Uniform draw on [0,1).
double uniformKey(Rng& rng);

/// Fixed-length vector of keys, each in [0,1).
///
/// The length is fixed at construction. Writes go through set(), which clamps,
/// so the range invariant cannot be broken from outside.
class RandomKeyVector {
 public:
  RandomKeyVector() = default;

  /// Throws std::invalid_argument if any key is outside [0,1) or not finite.
  explicit RandomKeyVector(std::vector<double> keys);

  std::size_t size() const noexcept { return keys_.size(); }
  bool empty() const noexcept { return keys_.empty(); }

  double operator[](std::size_t i) const { return keys_[i]; }

  void set(std::size_t i, double value) { keys_[i] = clampKey(value); }
  void swap(std::size_t i, std::size_t j) { std::swap(keys_[i], keys_[j]); }

  std::span<const double> view() const noexcept { return keys_; }
  const std::vector<double>& values() const noexcept { return keys_; }

  bool operator==(const RandomKeyVector&) const = default;

 private:
  std::vector<double> keys_;
};

/// Draws `dimension` independent uniform keys. Throws InvalidDimension when
/// dimension is zero.
RandomKeyVector newRandomVector(std::size_t dimension, Rng& rng);

/// Euclidean distance in key space. Throws std::invalid_argument on a length
/// mismatch.
double similarityDistance(std::span<const double> a, std::span<const double> b);

inline double similarityDistance(const RandomKeyVector& a, const RandomKeyVector& b) {
  return similarityDistance(a.view(), b.view());
}

/// Derives an independent stream for one participant of a seeded run.
Rng deriveStream(std::uint64_t masterSeed, std::uint64_t streamIndex);

}  // namespace rko
