#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <string>

#include "rko/decoder.hpp"
#include "rko/mip.hpp"
#include "rko/portfolio.hpp"
#include "rko/tdtsp.hpp"

namespace fixtures {

/// Six customers, two 30 s intervals. Keys (0.81, 0.32, 0.54, 0.29, 0.15, 0.91)
/// decode to the route 5-4-2-3-1-6 with cost 32; the enumerated optimum is 18.
rko::tdtsp::Instance sixCustomers();

/// Ten assets with bounds [0.01, 0.40] and K = 3; mu and Sigma are filler
/// since only the decoder mapping is pinned.
rko::portfolio::Instance tenAssets();

/// 15-item 0/1 knapsack as a MIP: c = -values, one weight row, capacity 200.
rko::mip::Instance knapsack15();
inline constexpr double kKnapsackOptimum = -369.0;  // dynamic-programming oracle, computed outside this code base

/// n=4, K=2, lambda=0.5, mu=(0.10,0.08,0.12,0.05), Sigma=diag(0.04,0.02,0.09,0.01), l=0.1, u=0.9.
rko::portfolio::Instance toyPortfolio();

/// Random PSD covariance (factor model) and returns, uniform bounds.
rko::portfolio::Instance randomPortfolio(std::size_t n, std::size_t K, double lambda,
                                         double lower, double upper, std::uint64_t seed);

/// Path of a file under data/.
std::string dataPath(const std::string& name);

/// Decoder wrapper that counts calls; thread-safe.
class CountingDecoder final : public rko::Decoder {
 public:
  explicit CountingDecoder(const rko::Decoder& inner) : inner_(inner) {}
  std::size_t dimension() const override { return inner_.dimension(); }
  double decode(std::span<const double> keys) const override;
  std::uint64_t calls() const;

 private:
  const rko::Decoder& inner_;
  mutable std::atomic<std::uint64_t> calls_{0};
};

}  // namespace fixtures
