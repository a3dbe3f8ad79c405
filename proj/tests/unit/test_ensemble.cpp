#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fixtures.hpp"
#include "rko/ensemble.hpp"
#include "rko/mip.hpp"
#include "rko/searchers.hpp"
#include "rko/tdtsp.hpp"

using namespace rko;

namespace {

class Sphere final : public Decoder {
 public:
  explicit Sphere(std::size_t n) : n_(n) {}
  std::size_t dimension() const override { return n_; }
  double decode(std::span<const double> k) const override {
    double s = 0.0;
    for (const double x : k) s += (x - 0.25) * (x - 0.25);
    return s;
  }

 private:
  std::size_t n_;
};

class Broken final : public Decoder {
 public:
  explicit Broken(bool throws) : throws_(throws) {}
  std::size_t dimension() const override { return 3; }
  double decode(std::span<const double> k) const override {
    if (k[0] < 0.5) return 1.0;
    if (throws_) throw std::runtime_error("boom");
    return std::nan("");
  }

 private:
  bool throws_;
};

RunBudget calls(std::uint64_t n, std::uint64_t seed = 1) {
  RunBudget b;
  b.decoderCalls = n;
  b.masterSeed = seed;
  return b;
}

}  // namespace

TEST_CASE("metropolis rule") {
  CHECK(metropolisAccept(-1.0, 1e-12, 0.999));
  CHECK(metropolisAccept(0.0, 1.0, 0.999));
  CHECK(metropolisAccept(1.0, 1.0, std::exp(-1.0) - 1e-9));
  CHECK_FALSE(metropolisAccept(1.0, 1.0, std::exp(-1.0) + 1e-9));
  // vanishing temperature refuses every worsening move
  CHECK_FALSE(metropolisAccept(1e-6, 1e-300, 0.0));
  CHECK_FALSE(metropolisAccept(1.0, 0.0, 0.0));
}

TEST_CASE("temperature calibration") {
  const std::vector<double> d = {-3.0, 1.0, 2.0, 3.0};
  const double T = calibrateTemperature(d, 0.5);
  // mean positive delta 2 is accepted with probability one half
  CHECK(std::exp(-2.0 / T) == doctest::Approx(0.5));
  const std::vector<double> flat = {0.0, -1.0};
  CHECK(calibrateTemperature(flat, 0.5) > 0.0);
}

TEST_CASE("parameter validation") {
  BrkgaParams b;
  b.eliteFraction = 0.9;
  CHECK_THROWS(b.validate());
  SaParams s;
  s.coolingRate = 1.0;
  CHECK_THROWS(s.validate());
  VnsParams v;
  v.betaLevels = {0.3, 0.1};
  CHECK_THROWS(v.validate());
  CHECK_THROWS_AS(makeSearcher("tabu"), std::invalid_argument);
  CHECK(parseSearchers("brkga,sa,ils,vns").size() == 4);
  CHECK_THROWS_AS(parseSearchers(""), std::invalid_argument);
}

TEST_CASE("brkga generation") {
  const Brkga ga;
  CHECK(ga.eliteCount() == 20);
  CHECK(ga.mutantCount() == 15);
  Rng rng(3);
  const auto cost = [](const RandomKeyVector& v) { return v[0] + v[1]; };
  std::vector<EvaluatedSolution> pop;
  for (int i = 0; i < 100; ++i) {
    auto v = newRandomVector(2, rng);
    pop.emplace_back(v, cost(v));
  }
  std::sort(pop.begin(), pop.end(), [](const auto& a, const auto& b) { return a.cost() < b.cost(); });
  const Brkga::Evaluate eval = [&](RandomKeyVector v) {
    const double c = cost(v);
    return EvaluatedSolution(std::move(v), c);
  };
  const auto next = ga.evolve(pop, 2, eval, rng);
  REQUIRE(next.size() == 100);
  CHECK(next.front().cost() <= pop.front().cost());
  // elites survive unchanged
  for (std::size_t i = 0; i < 20; ++i)
    CHECK(std::any_of(next.begin(), next.end(), [&](const auto& s) { return s.vector() == pop[i].vector(); }));
  auto copy = next;
  ga.inject(copy, EvaluatedSolution(RandomKeyVector({0.0, 0.0}), 0.0), rng);
  CHECK(copy.size() == 100);
  CHECK(copy.front().cost() == 0.0);
}

TEST_CASE("ensemble honours the decoder-call budget exactly") {
  const Sphere sphere(4);
  for (const char* list : {"brkga", "sa", "ils", "vns", "brkga,sa,ils,vns"}) {
    for (const bool det : {false, true}) {
      const fixtures::CountingDecoder counter(sphere);
      EnsembleOptions opt;
      opt.deterministic = det;
      const auto r = runEnsemble(counter, parseSearchers(list), calls(3000), opt);
      INFO(list << " deterministic=" << det);
      CHECK(counter.calls() == 3000);
      CHECK(r.decoderCalls == 3000);
      CHECK(r.callsToBest <= 3000);
      CHECK(r.bestCost == doctest::Approx(sphere.decode(r.bestVector.view())));
      // the pool best only ever improves
      for (std::size_t i = 1; i < r.trace.size(); ++i) {
        CHECK(r.trace[i].cost < r.trace[i - 1].cost);
        CHECK(r.trace[i].decoderCalls > r.trace[i - 1].decoderCalls);
      }
      REQUIRE_FALSE(r.trace.empty());
      CHECK(r.trace.back().cost == r.bestCost);
    }
  }
}

TEST_CASE("deterministic mode repeats exactly") {
  const auto in = fixtures::sixCustomers();
  const tdtsp::TdTspDecoder dec(in);
  EnsembleOptions opt;
  opt.deterministic = true;
  const auto searchers = parseSearchers("brkga,sa,ils,vns");
  const auto a = runEnsemble(dec, searchers, calls(5000, 7), opt);
  const auto b = runEnsemble(dec, searchers, calls(5000, 7), opt);
  CHECK(a.bestCost == b.bestCost);
  CHECK(a.bestVector == b.bestVector);
  CHECK(a.callsToBest == b.callsToBest);
  CHECK(a.searcherId == b.searcherId);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].decoderCalls == b.trace[i].decoderCalls);
    CHECK(a.trace[i].searcher == b.trace[i].searcher);
  }
  const auto c = runEnsemble(dec, searchers, calls(5000, 8), opt);
  CHECK(c.seed == 8);
}

TEST_CASE("ensemble finds the six-customer optimum") {
  const tdtsp::TdTspDecoder dec(fixtures::sixCustomers());
  const auto r = runEnsemble(dec, parseSearchers("brkga,sa,ils,vns"), calls(20000, 3));
  CHECK(r.bestCost == 18.0);
}

TEST_CASE("wall-clock budget stops the run") {
  const Sphere sphere(3);
  RunBudget b;
  b.wallClockSeconds = 0.2;
  const auto r = runEnsemble(sphere, parseSearchers("sa,ils"), b);
  CHECK(r.elapsed < 2.0);
  CHECK(r.decoderCalls > 0);
}

TEST_CASE("target cost stops the run early") {
  const Sphere sphere(2);
  RunBudget b = calls(1000000);
  b.targetCost = 1e-3;
  const auto r = runEnsemble(sphere, parseSearchers("ils"), b);
  CHECK(r.bestCost <= 1e-3);
  CHECK(r.decoderCalls < 1000000);
}

TEST_CASE("decoder failures surface as DecoderFailure") {
  const Broken throws(true);
  const Broken nan(false);
  CHECK_THROWS_AS(runEnsemble(throws, parseSearchers("ils,sa"), calls(5000)), DecoderFailure);
  CHECK_THROWS_AS(runEnsemble(nan, parseSearchers("brkga"), calls(5000)), DecoderFailure);
}

TEST_CASE("bad run inputs") {
  const Sphere sphere(2);
  CHECK_THROWS_AS(runEnsemble(sphere, {}, calls(10)), std::invalid_argument);
  CHECK_THROWS_AS(runEnsemble(sphere, parseSearchers("sa"), RunBudget{}), std::invalid_argument);
  const Sphere empty(0);
  CHECK_THROWS_AS(runEnsemble(empty, parseSearchers("sa"), calls(10)), std::invalid_argument);
}

TEST_CASE("knapsack solutions stay feasible") {
  const auto in = fixtures::knapsack15();
  const mip::MipDecoder dec(in);
  const auto r = runEnsemble(dec, parseSearchers("brkga,sa,ils,vns"), calls(2000, 4));
  const auto x = mip::mapKeysToAssignment(in, r.bestVector.view());
  CHECK(mip::checkFeasibility(in, x).feasible);
  CHECK(r.bestCost >= fixtures::kKnapsackOptimum);
}
