#include "fixtures.hpp"

#include <random>

#include "rko/random_keys.hpp"

#ifndef RKO_DATA_DIR
#error "RKO_DATA_DIR must be defined"
#endif

namespace fixtures {

rko::tdtsp::Instance sixCustomers() {
  rko::tdtsp::Instance in;
  in.n = 6;
  in.H = 2;
  in.Tbar = 30.0;
  in.service = {0, 5, 5, 6, 4, 3, 4, 0};
  const double h0[8][8] = {
      {0, 5, 7, 4, 1, 3, 6, 0}, {4, 0, 8, 1, 1, 4, 2, 4}, {7, 8, 0, 5, 2, 6, 6, 7},
      {5, 2, 4, 0, 1, 3, 2, 5}, {3, 1, 2, 1, 0, 7, 8, 3}, {2, 3, 5, 3, 9, 0, 4, 2},
      {5, 2, 8, 2, 7, 2, 0, 5}, {0, 5, 7, 4, 1, 3, 6, 0}};
  const double h1[8][8] = {
      {0, 8, 10, 3, 1, 2, 4, 0}, {7, 0, 8, 1, 3, 4, 4, 7}, {9, 8, 0, 6, 2, 6, 8, 9},
      {5, 4, 4, 0, 1, 3, 6, 5}, {2, 1, 2, 1, 0, 7, 8, 2}, {3, 2, 5, 4, 11, 0, 4, 3},
      {5, 3, 8, 7, 7, 2, 0, 5}, {0, 8, 10, 3, 1, 2, 4, 0}};
  in.travel.reserve(2 * 64);
  for (const auto* m : {h0, h1})
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) in.travel.push_back(m[i][j]);
  in.validate();
  return in;
}

rko::portfolio::Instance tenAssets() {
  const std::size_t n = 10;
  std::vector<double> mu(n);
  std::vector<double> sigma(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    mu[i] = 0.001 * static_cast<double>(i + 1);
    sigma[i * n + i] = 0.01;
  }
  return rko::portfolio::makeInstance(mu, sigma, 0.5, 3, 0.01, 0.40);
}

rko::mip::Instance knapsack15() {
  const std::vector<double> w = {23, 31, 29, 44, 53, 38, 63, 85, 89, 82, 12, 17, 45, 27, 36};
  const std::vector<double> v = {92, 57, 49, 68, 60, 43, 67, 84, 87, 72, 25, 30, 55, 40, 48};
  rko::mip::Instance in;
  in.n = 15;
  in.m = 1;
  in.p = 15;
  for (const double x : v) in.c.push_back(-x);
  in.A = w;
  in.b = {200};
  in.l.assign(15, 0.0);
  in.u.assign(15, 1.0);
  in.validate();
  return in;
}

rko::portfolio::Instance toyPortfolio() {
  return rko::portfolio::makeInstance({0.10, 0.08, 0.12, 0.05},
                                      {0.04, 0, 0, 0, 0, 0.02, 0, 0, 0, 0, 0.09, 0, 0, 0, 0, 0.01},
                                      0.5, 2, 0.1, 0.9);
}

rko::portfolio::Instance randomPortfolio(std::size_t n, std::size_t K, double lambda, double lower,
                                         double upper, std::uint64_t seed) {
  rko::Rng rng(seed);
  std::uniform_real_distribution<double> ret(-0.002, 0.01);
  std::normal_distribution<double> load(0.0, 0.03);
  std::uniform_real_distribution<double> idio(0.0002, 0.002);
  std::vector<double> mu(n);
  for (auto& m : mu) m = ret(rng);
  // Two-factor model: Sigma = B B' + D, symmetric by construction.
  const std::size_t f = 2;
  std::vector<double> B(n * f);
  for (auto& b : B) b = load(rng);
  std::vector<double> sigma(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < f; ++k) s += B[i * f + k] * B[j * f + k];
      sigma[i * n + j] = s;
      sigma[j * n + i] = s;
    }
    sigma[i * n + i] += idio(rng);
  }
  return rko::portfolio::makeInstance(mu, sigma, lambda, K, lower, upper);
}

std::string dataPath(const std::string& name) { return std::string(RKO_DATA_DIR) + "/" + name; }

double CountingDecoder::decode(std::span<const double> keys) const {
  calls_.fetch_add(1, std::memory_order_relaxed);
  return inner_.decode(keys);
}

std::uint64_t CountingDecoder::calls() const { return calls_.load(); }

}  // namespace fixtures
