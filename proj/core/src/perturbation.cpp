#include "rko/perturbation.hpp"

#include <cmath>
#include <stdexcept>

namespace rko {

void ShakeConfig::validate() const {
  if (!(betaMin > 0.0 && betaMin <= betaMax && betaMax <= 1.0)) {
    throw std::invalid_argument("shake config requires 0 < betaMin <= betaMax <= 1");
  }
}

void BlendConfig::validate() const {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("blend rho must be in [0,1]");
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("blend mu must be in [0,1]");
  if (factor != 1 && factor != -1) throw std::invalid_argument("blend factor must be +1 or -1");
}

std::string_view toString(ShakeMove move) noexcept {
  switch (move) {
    case ShakeMove::Swap: return "swap";
    case ShakeMove::SwapNeighbor: return "swap-neighbor";
    case ShakeMove::Mirror: return "mirror";
    case ShakeMove::Random: return "random";
  }
  return "unknown";
}

namespace {

std::size_t pickIndex(std::size_t n, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace

void mirrorKey(RandomKeyVector& keys, std::size_t index) {
  keys.set(index, 1.0 - keys[index]);
}

void applyMove(RandomKeyVector& keys, ShakeMove move, Rng& rng) {
  const std::size_t n = keys.size();
  if (n == 0) return;
  switch (move) {
    case ShakeMove::Swap: {
      if (n < 2) return;
      const std::size_t i = pickIndex(n, rng);
      std::size_t j = pickIndex(n - 1, rng);
      if (j >= i) ++j;
      keys.swap(i, j);
      return;
    }
    case ShakeMove::SwapNeighbor: {
      if (n < 2) return;
      const std::size_t i = pickIndex(n - 1, rng);
      keys.swap(i, i + 1);
      return;
    }
    case ShakeMove::Mirror:
      mirrorKey(keys, pickIndex(n, rng));
      return;
    case ShakeMove::Random: {
      const std::size_t i = pickIndex(n, rng);
      keys.set(i, uniformKey(rng));
      return;
    }
  }
}

RandomKeyVector shake(const RandomKeyVector& keys, const ShakeConfig& config, Rng& rng) {
  config.validate();
  RandomKeyVector out = keys;
  const double beta = config.betaMin + (config.betaMax - config.betaMin) * uniformKey(rng);
  const auto moves =
      static_cast<std::size_t>(std::ceil(beta * static_cast<double>(keys.size())));
  for (std::size_t m = 0; m < moves; ++m) {
    const auto which = kShakeMoves[pickIndex(kShakeMoves.size(), rng)];
    applyMove(out, which, rng);
  }
  return out;
}

RandomKeyVector blend(const RandomKeyVector& a, const RandomKeyVector& b,
                      const BlendConfig& config, Rng& rng) {
  config.validate();
  if (a.size() != b.size()) throw std::invalid_argument("blend: parent dimension mismatch");
  RandomKeyVector child = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (uniformKey(rng) < config.mu) {
      child.set(i, uniformKey(rng));
    } else if (uniformKey(rng) < config.rho) {
      child.set(i, a[i]);
    } else {
      child.set(i, config.factor == 1 ? b[i] : 1.0 - b[i]);
    }
  }
  return child;
}

}  // namespace rko
