#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "rko/local_search.hpp"
#include "rko/mip.hpp"
#include "rko/portfolio.hpp"
#include "rko/random_keys.hpp"
#include "rko/tdtsp.hpp"

namespace {

std::vector<rko::RandomKeyVector> keySet(std::size_t n, std::size_t count) {
  rko::Rng rng(1);
  std::vector<rko::RandomKeyVector> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(rko::newRandomVector(n, rng));
  return out;
}

void BM_TdTspDecode(benchmark::State& state) {
  rko::tdtsp::GeneratorOptions opt;
  opt.n = static_cast<std::size_t>(state.range(0));
  const rko::tdtsp::TdTspDecoder dec(rko::tdtsp::generate(opt));
  const auto keys = keySet(opt.n, 64);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dec.decode(keys[i++ % keys.size()].view()));
}
BENCHMARK(BM_TdTspDecode)->Arg(10)->Arg(50)->Arg(100);

void BM_PortfolioDecode(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t K = 10;
  std::vector<double> mu(n);
  std::vector<double> sigma(n * n, 0.0001);
  for (std::size_t i = 0; i < n; ++i) {
    mu[i] = 0.001 * static_cast<double>(i % 17);
    sigma[i * n + i] = 0.001;
  }
  const rko::portfolio::PortfolioDecoder dec(rko::portfolio::makeInstance(mu, sigma, 0.3, K, 0.01, 0.25));
  const auto keys = keySet(2 * K, 64);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dec.decode(keys[i++ % keys.size()].view()));
}
BENCHMARK(BM_PortfolioDecode)->Arg(31)->Arg(225)->Arg(2000);

void BM_MipDecode(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  rko::mip::Instance in;
  in.n = n;
  in.m = n / 2;
  in.p = n;
  in.c.assign(n, -1.0);
  in.l.assign(n, 0.0);
  in.u.assign(n, 1.0);
  in.b.assign(in.m, static_cast<double>(n) / 4);
  in.A.assign(in.m * n, 1.0);
  const rko::mip::MipDecoder dec(in);
  const auto keys = keySet(n, 64);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dec.decode(keys[i++ % keys.size()].view()));
}
BENCHMARK(BM_MipDecode)->Arg(15)->Arg(200);

void BM_Rvnd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const rko::CostFunction bowl = [](std::span<const double> k) {
    double s = 0.0;
    for (const double x : k) s += (x - 0.3) * (x - 0.3);
    return s;
  };
  rko::Rng rng(2);
  for (auto _ : state) {
    const auto start = rko::newRandomVector(n, rng);
    benchmark::DoNotOptimize(rvnd(rko::EvaluatedSolution(start, bowl(start.view())), bowl, 2000, rng));
  }
}
BENCHMARK(BM_Rvnd)->Arg(10)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
