#include "rko/random_keys.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rko {

double clampKey(double value) noexcept {
  if (!(value >= 0.0)) return 0.0;  // also maps NaN to 0
  return std::min(value, kMaxKey);
}

double uniformKey(Rng& rng) {
  // generate_canonical may round up to 1.0 on some library versions.
  return std::min(std::generate_canonical<double, 53>(rng), kMaxKey);
}

RandomKeyVector::RandomKeyVector(std::vector<double> keys) : keys_(std::move(keys)) {
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    const double k = keys_[i];
    if (!std::isfinite(k) || k < 0.0 || k >= 1.0) {
      throw std::invalid_argument("key " + std::to_string(i) + " = " + std::to_string(k) +
                                  " outside [0,1)");
    }
  }
}

RandomKeyVector newRandomVector(std::size_t dimension, Rng& rng) {
  if (dimension == 0) throw InvalidDimension("random-key vector dimension must be >= 1");
  std::vector<double> keys(dimension);
  for (auto& k : keys) k = uniformKey(rng);
  return RandomKeyVector(std::move(keys));
}

double similarityDistance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("similarity_distance: dimension mismatch (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                                ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

Rng deriveStream(std::uint64_t masterSeed, std::uint64_t streamIndex) {
  std::seed_seq seq{static_cast<std::uint32_t>(masterSeed),
                    static_cast<std::uint32_t>(masterSeed >> 32),
                    static_cast<std::uint32_t>(streamIndex),
                    static_cast<std::uint32_t>(streamIndex >> 32)};
  return Rng(seq);
}

}  // namespace rko
