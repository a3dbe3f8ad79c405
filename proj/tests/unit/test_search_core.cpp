#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "fixtures.hpp"
#include "rko/elite_pool.hpp"
#include "rko/local_search.hpp"
#include "rko/perturbation.hpp"
#include "rko/portfolio.hpp"
#include "rko/random_keys.hpp"

using namespace rko;

namespace {

bool inRange(const RandomKeyVector& v) {
  return std::all_of(v.values().begin(), v.values().end(),
                     [](double k) { return k >= 0.0 && k < 1.0; });
}

RandomKeyVector keys(std::vector<double> v) { return RandomKeyVector(std::move(v)); }

}  // namespace

TEST_CASE("clampKey maps into [0, 1)") {
  CHECK(clampKey(-0.5) == 0.0);
  CHECK(clampKey(1.0) == kMaxKey);
  CHECK(clampKey(7.0) == kMaxKey);
  CHECK(clampKey(0.25) == 0.25);
  CHECK(clampKey(std::nan("")) == 0.0);
}

TEST_CASE("random key vectors") {
  Rng rng(42);
  SUBCASE("mean of a long vector is near one half") {
    const auto v = newRandomVector(100000, rng);
    double sum = 0.0;
    for (const double k : v.values()) sum += k;
    CHECK(std::abs(sum / 1e5 - 0.5) < 0.01);
    CHECK(inRange(v));
  }
  SUBCASE("zero dimension is rejected") { CHECK_THROWS_AS(newRandomVector(0, rng), InvalidDimension); }
  SUBCASE("constructor rejects out-of-range keys") {
    CHECK_THROWS_AS(keys({0.2, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(keys({-0.1}), std::invalid_argument);
    CHECK_THROWS_AS(keys({std::nan("")}), std::invalid_argument);
  }
  SUBCASE("set clamps") {
    auto v = keys({0.1, 0.2});
    v.set(0, 3.0);
    v.set(1, -2.0);
    CHECK(v[0] == kMaxKey);
    CHECK(v[1] == 0.0);
  }
}

TEST_CASE("similarity distance") {
  const std::vector<double> a = {0.3, 0.4};
  const std::vector<double> o = {0.0, 0.0};
  const std::vector<double> x = {1.0, 0.0};
  CHECK(similarityDistance(a, a) == 0.0);
  CHECK(similarityDistance(o, x) == doctest::Approx(1.0));
  CHECK(similarityDistance(a, o) == doctest::Approx(0.5));
  const std::vector<double> three = {0, 0, 0};
  CHECK_THROWS_AS(similarityDistance(a, three), std::invalid_argument);
}

TEST_CASE("derived streams are reproducible and distinct") {
  auto a = deriveStream(7, 0);
  auto b = deriveStream(7, 0);
  auto c = deriveStream(7, 1);
  auto d = deriveStream(8, 0);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
}

// ------------------------------------------------------------ elite pool

TEST_CASE("elite pool insertion rules") {
  ElitePool pool(3);
  const EvaluatedSolution s1(keys({0.1, 0.1}), 5.0);
  CHECK((pool.insert(s1) == InsertOutcome::Accepted));
  CHECK((pool.insert(s1) == InsertOutcome::RejectedDuplicate));
  CHECK((pool.insert(EvaluatedSolution(keys({0.9, 0.9}), 3.0)) == InsertOutcome::Accepted));
  CHECK((pool.insert(EvaluatedSolution(keys({0.5, 0.5}), 4.0)) == InsertOutcome::Accepted));
  CHECK(pool.size() == 3);

  SUBCASE("full pool rejects candidates no better than every entry") {
    CHECK((pool.insert(EvaluatedSolution(keys({0.2, 0.2}), 5.0)) == InsertOutcome::RejectedWorse));
    CHECK((pool.insert(EvaluatedSolution(keys({0.2, 0.2}), 6.0)) == InsertOutcome::RejectedWorse));
  }
  SUBCASE("replaces the nearest strictly worse entry") {
    // Nearest to (0.85,0.85) is (0.9,0.9) but it costs 3.0 < 3.5; next nearest worse is (0.5,0.5).
    CHECK((pool.insert(EvaluatedSolution(keys({0.85, 0.85}), 3.5)) == InsertOutcome::Accepted));
    const auto snap = pool.snapshot();
    REQUIRE(snap.size() == 3);
    CHECK(snap[0].cost() == 3.0);
    CHECK(snap[1].cost() == 3.5);
    CHECK(snap[2].cost() == 5.0);
  }
  SUBCASE("best and sample") {
    CHECK(pool.bestCost().value() == 3.0);
    Rng rng(1);
    std::set<double> seen;
    for (int i = 0; i < 200; ++i) seen.insert(pool.sample(rng).cost());
    CHECK(seen.size() == 3);
  }
}

TEST_CASE("empty pool") {
  ElitePool pool(2);
  Rng rng(1);
  CHECK_FALSE(pool.best().has_value());
  CHECK_THROWS_AS(pool.sample(rng), std::logic_error);
  CHECK_THROWS_AS(ElitePool(0), std::invalid_argument);
  CHECK_THROWS_AS(EvaluatedSolution(keys({0.1}), std::nan("")), std::invalid_argument);
}

TEST_CASE("pool properties over 10^4 random insertions") {
  Rng rng(2024);
  std::uniform_real_distribution<double> cost(0.0, 100.0);
  ElitePool pool(20);
  double best = INFINITY;
  std::size_t accepted = 0;
  for (int i = 0; i < 10000; ++i) {
    // Coarse keys so exact duplicates actually occur.
    std::vector<double> v(3);
    for (auto& k : v) k = std::floor(uniformKey(rng) * 4.0) / 4.0;
    const double c = std::floor(cost(rng));
    const auto outcome = pool.insert(EvaluatedSolution(RandomKeyVector(v), c));
    if (outcome == InsertOutcome::Accepted) ++accepted;
    const double now = pool.bestCost().value();
    REQUIRE(now <= best);
    best = now;
    if (accepted >= 20) REQUIRE(pool.size() == 20);
    const auto snap = pool.snapshot();
    for (std::size_t a = 0; a < snap.size(); ++a) {
      if (a > 0) REQUIRE(snap[a - 1].cost() <= snap[a].cost());
      for (std::size_t b = a + 1; b < snap.size(); ++b) REQUIRE_FALSE(snap[a].vector() == snap[b].vector());
    }
  }
}

TEST_CASE("pool survives concurrent inserts") {
  ElitePool pool(20);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&pool, t] {
      Rng rng(static_cast<std::uint64_t>(t));
      for (int i = 0; i < 2000; ++i) {
        auto v = newRandomVector(5, rng);
        const double c = v[0] + v[1];
        pool.insert(EvaluatedSolution(std::move(v), c));
        (void)pool.sample(rng);
      }
    });
  }
  for (auto& th : threads) th.join();
  CHECK(pool.size() == 20);
  const auto snap = pool.snapshot();
  CHECK(std::is_sorted(snap.begin(), snap.end(),
                       [](const auto& a, const auto& b) { return a.cost() < b.cost(); }));
}

// ------------------------------------------------------------ perturbation

TEST_CASE("shake and blend configuration checks") {
  CHECK_THROWS(ShakeConfig{0.0, 0.3}.validate());
  CHECK_THROWS(ShakeConfig{0.4, 0.3}.validate());
  CHECK_THROWS(BlendConfig{1.5, 0.0, 1}.validate());
  CHECK_THROWS(BlendConfig{0.5, 0.0, 0}.validate());
}

TEST_CASE("shake properties over 10^4 cases") {
  Rng rng(99);
  const ShakeConfig cfg{};
  for (int c = 0; c < 10000; ++c) {
    const std::size_t n = 1 + static_cast<std::size_t>(uniformKey(rng) * 30);
    const auto in = newRandomVector(n, rng);
    const auto out = shake(in, cfg, rng);
    REQUIRE(out.size() == n);
    REQUIRE(inRange(out));
    std::size_t changed = 0;
    for (std::size_t i = 0; i < n; ++i) changed += in[i] != out[i];
    REQUIRE(changed <= 2 * static_cast<std::size_t>(std::ceil(cfg.betaMax * static_cast<double>(n))));
  }
}

TEST_CASE("single moves") {
  Rng rng(3);
  SUBCASE("mirror") {
    auto v = keys({0.25, 0.0});
    mirrorKey(v, 0);
    mirrorKey(v, 1);
    CHECK(v[0] == 0.75);
    CHECK(v[1] == kMaxKey);
  }
  SUBCASE("swap moves keep the multiset") {
    for (const auto move : {ShakeMove::Swap, ShakeMove::SwapNeighbor}) {
      auto v = keys({0.1, 0.2, 0.3, 0.4});
      applyMove(v, move, rng);
      auto sorted = v.values();
      std::sort(sorted.begin(), sorted.end());
      CHECK(sorted == std::vector<double>{0.1, 0.2, 0.3, 0.4});
    }
  }
  SUBCASE("one-key vectors") {
    auto v = keys({0.3});
    applyMove(v, ShakeMove::Swap, rng);
    applyMove(v, ShakeMove::SwapNeighbor, rng);
    CHECK(v[0] == 0.3);
  }
}

TEST_CASE("blend properties over 10^4 cases") {
  Rng rng(5);
  for (int c = 0; c < 10000; ++c) {
    const std::size_t n = 1 + static_cast<std::size_t>(uniformKey(rng) * 20);
    const auto a = newRandomVector(n, rng);
    const auto b = newRandomVector(n, rng);
    const BlendConfig cfg{uniformKey(rng), uniformKey(rng) * 0.2, uniformKey(rng) < 0.5 ? 1 : -1};
    const auto out = blend(a, b, cfg, rng);
    REQUIRE(inRange(out));
  }
}

TEST_CASE("blend semantics") {
  Rng rng(6);
  const auto a = keys({0.1, 0.2, 0.3});
  const auto b = keys({0.6, 0.7, 0.8});
  CHECK(blend(a, b, {1.0, 0.0, 1}, rng) == a);
  CHECK(blend(a, b, {0.0, 0.0, 1}, rng) == b);
  const auto c = blend(a, b, {0.0, 0.0, -1}, rng);
  CHECK(c[0] == doctest::Approx(0.4));
  CHECK(c[2] == doctest::Approx(0.2));
  Rng r1(11);
  Rng r2(11);
  CHECK(blend(a, b, {0.5, 0.1, 1}, r1) == blend(a, b, {0.5, 0.1, 1}, r2));
  CHECK_THROWS_AS(blend(a, keys({0.5}), {}, rng), std::invalid_argument);
}

// ------------------------------------------------------------ local search

TEST_CASE("Farey values") {
  const auto f = fareyValues();
  CHECK(f.size() == 19);
  CHECK(f.front() == 0.0);
  CHECK(f.back() == 0.9999);
  CHECK(std::is_sorted(f.begin(), f.end()));
}

namespace {

// Smooth bowl with minimum at (0.3, 0.7, ...).
double bowl(std::span<const double> k) {
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double t = i % 2 ? 0.7 : 0.3;
    s += (k[i] - t) * (k[i] - t);
  }
  return s;
}

}  // namespace

TEST_CASE("rvnd never worsens and honours its budget") {
  Rng rng(8);
  const CostFunction f = bowl;
  for (int c = 0; c < 300; ++c) {
    const std::size_t n = 1 + c % 6;
    auto start = newRandomVector(n, rng);
    const EvaluatedSolution s(start, bowl(start.view()));
    std::size_t calls = 0;
    const CostFunction counted = [&](std::span<const double> k) { ++calls; return bowl(k); };
    const std::size_t budget = 1 + c % 200;
    const auto out = rvnd(s, counted, budget, rng);
    REQUIRE(out.cost() <= s.cost());
    REQUIRE(calls <= budget);
    REQUIRE(inRange(out.vector()));
  }
  CHECK_THROWS_AS(rvnd(EvaluatedSolution(keys({0.5}), 0.0), f, 0, rng), std::invalid_argument);
}

TEST_CASE("rvnd with budget 1 issues at most one call") {
  Rng rng(1);
  std::size_t calls = 0;
  const CostFunction f = [&](std::span<const double> k) { ++calls; return bowl(k); };
  rvnd(EvaluatedSolution(keys({0.9, 0.1}), 2.0), f, 1, rng);
  CHECK(calls == 1);
}

TEST_CASE("rvnd fixed point returns the start") {
  Rng rng(2);
  const CostFunction flat = [](std::span<const double>) { return 1.0; };
  const EvaluatedSolution s(keys({0.2, 0.4, 0.6}), 1.0, 17);
  const auto out = rvnd(s, flat, 100000, rng);
  CHECK(out.vector() == s.vector());
  CHECK(out.decodedAt() == 17);
}

TEST_CASE("rvnd reaches the optimum of a two-asset portfolio from every start") {
  // n = 2, K = 2: the only freedom is the weight split.
  const auto in = rko::portfolio::makeInstance({0.10, 0.05}, {0.04, 0.0, 0.0, 0.01}, 0.5, 2, 0.1, 0.9);
  const rko::portfolio::PortfolioDecoder decoder(in);
  const CostFunction f = [&](std::span<const double> k) { return decoder.decode(k); };
  // Oracle: key grid at resolution 0.01.
  double oracle = INFINITY;
  for (int a = 0; a < 100; ++a)
    for (int b = 0; b < 100; ++b)
      for (int c = 0; c < 100; c += 99) {
        const std::vector<double> k = {c / 100.0, 0.0, a / 100.0, b / 100.0};
        oracle = std::min(oracle, f(k));
      }
  Rng rng(3);
  for (int s = 0; s < 50; ++s) {
    auto start = newRandomVector(4, rng);
    const auto out = rvnd(EvaluatedSolution(start, f(start.view())), f, 1000000, rng);
    CHECK(out.cost() <= oracle + 1e-5);
  }
}

TEST_CASE("individual local searches improve a bowl") {
  Rng rng(4);
  const CostFunction f = bowl;
  for (const auto kind : kLocalSearches) {
    auto start = keys({0.9, 0.05, 0.6, 0.2});
    Incumbent cur{start, bowl(start.view()), 0};
    BudgetedCost budget(f, 5000);
    const double before = cur.cost;
    const bool improved = runLocalSearch(kind, cur, budget, rng);
    INFO(toString(kind));
    CHECK(improved);
    CHECK(cur.cost < before);
    CHECK(cur.cost == doctest::Approx(bowl(cur.keys.view())));
  }
}

TEST_CASE("Nelder-Mead respects its per-dimension call cap") {
  Rng rng(5);
  std::size_t calls = 0;
  const CostFunction f = [&](std::span<const double> k) { ++calls; return bowl(k); };
  auto start = keys({0.9, 0.05, 0.6});
  Incumbent cur{start, bowl(start.view()), 0};
  BudgetedCost budget(f, 1000000);
  NelderMeadConfig cfg;
  cfg.minDiameter = 0.0;
  nelderMeadLocalSearch(cur, budget, rng, cfg);
  CHECK(calls <= cfg.callsPerDimension * 3);
}
