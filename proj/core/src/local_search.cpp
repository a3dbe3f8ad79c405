#include "rko/local_search.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rko/perturbation.hpp"

namespace rko {

std::optional<double> BudgetedCost::operator()(const RandomKeyVector& keys) {
  if (exhausted()) return std::nullopt;
  ++used_;
  return cost_(keys.view());
}

std::string_view toString(LocalSearchKind kind) noexcept {
  switch (kind) {
    case LocalSearchKind::Swap: return "swap";
    case LocalSearchKind::Mirror: return "mirror";
    case LocalSearchKind::Farey: return "farey";
    case LocalSearchKind::NelderMead: return "nelder-mead";
  }
  return "unknown";
}

std::span<const double> fareyValues() noexcept {
  static constexpr std::array<double, 19> kValues = {
      0.0,       1.0 / 7.0, 1.0 / 6.0, 1.0 / 5.0, 1.0 / 4.0, 2.0 / 7.0, 1.0 / 3.0,
      2.0 / 5.0, 3.0 / 7.0, 1.0 / 2.0, 4.0 / 7.0, 3.0 / 5.0, 2.0 / 3.0, 5.0 / 7.0,
      3.0 / 4.0, 4.0 / 5.0, 5.0 / 6.0, 6.0 / 7.0, 0.9999};
  return kValues;
}

namespace {

std::vector<std::size_t> shuffledIndices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

// Evaluates `trial`; adopts it when strictly better. nullopt means out of budget.
std::optional<bool> tryMove(Incumbent& current, RandomKeyVector&& trial, BudgetedCost& budget) {
  const auto cost = budget(trial);
  if (!cost) return std::nullopt;
  if (*cost < current.cost) {
    current.keys = std::move(trial);
    current.cost = *cost;
    current.at = budget.used();
    return true;
  }
  return false;
}

}  // namespace

bool swapLocalSearch(Incumbent& current, BudgetedCost& budget, Rng& rng) {
  const std::size_t n = current.keys.size();
  if (n < 2) return false;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  bool improved = false;
  for (bool passImproved = true; passImproved;) {
    passImproved = false;
    std::shuffle(pairs.begin(), pairs.end(), rng);
    for (const auto& [i, j] : pairs) {
      if (current.keys[i] == current.keys[j]) continue;
      RandomKeyVector trial = current.keys;
      trial.swap(i, j);
      const auto r = tryMove(current, std::move(trial), budget);
      if (!r) return improved;
      passImproved = passImproved || *r;
    }
    improved = improved || passImproved;
  }
  return improved;
}

bool mirrorLocalSearch(Incumbent& current, BudgetedCost& budget, Rng& rng) {
  const std::size_t n = current.keys.size();
  bool improved = false;
  for (bool passImproved = true; passImproved;) {
    passImproved = false;
    for (const std::size_t i : shuffledIndices(n, rng)) {
      RandomKeyVector trial = current.keys;
      mirrorKey(trial, i);
      if (trial == current.keys) continue;
      const auto r = tryMove(current, std::move(trial), budget);
      if (!r) return improved;
      passImproved = passImproved || *r;
    }
    improved = improved || passImproved;
  }
  return improved;
}

bool fareyLocalSearch(Incumbent& current, BudgetedCost& budget, Rng& rng) {
  const std::size_t n = current.keys.size();
  const auto values = fareyValues();
  bool improved = false;
  for (bool passImproved = true; passImproved;) {
    passImproved = false;
    for (const std::size_t i : shuffledIndices(n, rng)) {
      for (const double v : values) {
        if (current.keys[i] == v) continue;
        RandomKeyVector trial = current.keys;
        trial.set(i, v);
        const auto r = tryMove(current, std::move(trial), budget);
        if (!r) return improved;
        if (*r) {
          passImproved = true;
          break;  // first improvement at this index
        }
      }
    }
    improved = improved || passImproved;
  }
  return improved;
}

namespace {

struct Vertex {
  std::vector<double> x;
  double cost;
  std::size_t at;
};

RandomKeyVector toKeys(const std::vector<double>& x) {
  std::vector<double> k(x.size());
  std::transform(x.begin(), x.end(), k.begin(), clampKey);
  return RandomKeyVector(std::move(k));
}

// p + coef * (q - p), clamped into the key range.
std::vector<double> affine(const std::vector<double>& p, const std::vector<double>& q,
                           double coef) {
  std::vector<double> r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = clampKey(p[i] + coef * (q[i] - p[i]));
  return r;
}

}  // namespace

bool nelderMeadLocalSearch(Incumbent& current, BudgetedCost& budget, Rng& /*rng*/,
                           const NelderMeadConfig& config) {
  const std::size_t n = current.keys.size();
  if (n == 0) return false;
  const std::size_t callLimit = config.callsPerDimension * n;
  std::size_t calls = 0;

  auto evaluate = [&](const std::vector<double>& x) -> std::optional<Vertex> {
    if (calls >= callLimit) return std::nullopt;
    const auto c = budget(toKeys(x));
    if (!c) return std::nullopt;
    ++calls;
    return Vertex{x, *c, budget.used()};
  };

  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  simplex.push_back({current.keys.values(), current.cost, current.at});
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = current.keys.values();
    x[i] = x[i] + config.initialStep < 1.0 ? x[i] + config.initialStep
                                           : x[i] - config.initialStep;
    x[i] = clampKey(x[i]);
    auto v = evaluate(x);
    if (!v) break;
    simplex.push_back(std::move(*v));
  }

  const auto byCost = [](const Vertex& a, const Vertex& b) { return a.cost < b.cost; };

  if (simplex.size() == n + 1) {
    for (;;) {
      std::stable_sort(simplex.begin(), simplex.end(), byCost);

      double diameter = 0.0;
      for (std::size_t v = 1; v <= n; ++v)
        diameter = std::max(diameter, similarityDistance(simplex[0].x, simplex[v].x));
      if (diameter < config.minDiameter) break;

      std::vector<double> centroid(n, 0.0);
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i];
      for (auto& c : centroid) c /= static_cast<double>(n);

      Vertex& worst = simplex[n];
      auto reflected = evaluate(affine(centroid, worst.x, -config.reflection));
      if (!reflected) break;

      if (reflected->cost < simplex[0].cost) {
        auto expanded = evaluate(affine(centroid, reflected->x, config.expansion));
        if (!expanded) {
          worst = std::move(*reflected);
          break;
        }
        worst = expanded->cost < reflected->cost ? std::move(*expanded) : std::move(*reflected);
        continue;
      }
      if (reflected->cost < simplex[n - 1].cost) {
        worst = std::move(*reflected);
        continue;
      }

      std::optional<Vertex> contracted;
      bool accept = false;
      if (reflected->cost < worst.cost) {
        contracted = evaluate(affine(centroid, reflected->x, config.contraction));
        accept = contracted && contracted->cost <= reflected->cost;
      } else {
        contracted = evaluate(affine(centroid, worst.x, config.contraction));
        accept = contracted && contracted->cost < worst.cost;
      }
      if (!contracted) break;
      if (accept) {
        worst = std::move(*contracted);
        continue;
      }

      bool outOfBudget = false;
      for (std::size_t v = 1; v <= n; ++v) {
        auto shrunk = evaluate(affine(simplex[0].x, simplex[v].x, config.shrink));
        if (!shrunk) {
          outOfBudget = true;
          break;
        }
        simplex[v] = std::move(*shrunk);
      }
      if (outOfBudget) break;
    }
  }

  const auto best = std::min_element(simplex.begin(), simplex.end(), byCost);
  if (best->cost < current.cost) {
    current.keys = toKeys(best->x);
    current.cost = best->cost;
    current.at = best->at;
    return true;
  }
  return false;
}

bool runLocalSearch(LocalSearchKind kind, Incumbent& current, BudgetedCost& budget, Rng& rng) {
  switch (kind) {
    case LocalSearchKind::Swap: return swapLocalSearch(current, budget, rng);
    case LocalSearchKind::Mirror: return mirrorLocalSearch(current, budget, rng);
    case LocalSearchKind::Farey: return fareyLocalSearch(current, budget, rng);
    case LocalSearchKind::NelderMead: return nelderMeadLocalSearch(current, budget, rng);
  }
  return false;
}

EvaluatedSolution rvnd(const EvaluatedSolution& start, const CostFunction& cost,
                       std::size_t maxCalls, Rng& rng) {
  if (maxCalls == 0) throw std::invalid_argument("rvnd budget must be >= 1");
  BudgetedCost budget(cost, maxCalls);
  Incumbent current{start.vector(), start.cost(), 0};

  auto order = kLocalSearches;
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t k = 0;
  while (k < order.size() && !budget.exhausted()) {
    if (runLocalSearch(order[k], current, budget, rng)) {
      std::shuffle(order.begin(), order.end(), rng);
      k = 0;
    } else {
      ++k;
    }
  }
  if (current.at == 0) return start;
  return EvaluatedSolution(std::move(current.keys), current.cost, start.decodedAt() + current.at);
}

}  // namespace rko
