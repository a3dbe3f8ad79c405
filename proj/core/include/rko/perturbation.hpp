#pragma once

#include <array>
#include <string_view>

#include "rko/random_keys.hpp"

namespace rko {

/// Range of the perturbation rate drawn by shake().
struct ShakeConfig {
  double betaMin = 0.1;
  double betaMax = 0.3;

  /// Throws std::invalid_argument unless 0 < betaMin <= betaMax <= 1.
  void validate() const;

  static ShakeConfig fixed(double beta) { return {beta, beta}; }
};

struct BlendConfig {
  double rho = 0.5;  // probability of inheriting from the first parent
  double mu = 0.0;   // probability of a fresh random key
  int factor = 1;    // +1 copies the second parent, -1 copies its complement

  void validate() const;
};

enum class ShakeMove { Swap, SwapNeighbor, Mirror, Random };

inline constexpr std::array<ShakeMove, 4> kShakeMoves = {
    ShakeMove::Swap, ShakeMove::SwapNeighbor, ShakeMove::Mirror, ShakeMove::Random};

std::string_view toString(ShakeMove move) noexcept;

/// Applies one move in place at an index chosen by the move itself. Swap and
/// SwapNeighbor are no-ops when the vector has fewer than two keys.
void applyMove(RandomKeyVector& keys, ShakeMove move, Rng& rng);

/// Mirror at a fixed index: key becomes 1 - key (clamped).
void mirrorKey(RandomKeyVector& keys, std::size_t index);

/// Draws beta uniformly in [betaMin, betaMax] and applies ceil(beta * n)
/// uniformly chosen moves to a copy of `keys`. Indices may repeat.
RandomKeyVector shake(const RandomKeyVector& keys, const ShakeConfig& config, Rng& rng);

/// Biased uniform crossover. Per key: with probability mu a fresh key,
/// otherwise a[i] with probability rho, else b[i] (factor +1) or 1 - b[i]
/// (factor -1). Throws std::invalid_argument on a dimension mismatch.
RandomKeyVector blend(const RandomKeyVector& a, const RandomKeyVector& b,
                      const BlendConfig& config, Rng& rng);

}  // namespace rko
