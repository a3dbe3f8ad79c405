#include "rko/searchers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rko/local_search.hpp"

namespace rko {

namespace {

constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

void sortByCost(std::vector<EvaluatedSolution>& population) {
  std::stable_sort(population.begin(), population.end(),
                   [](const auto& a, const auto& b) { return a.cost() < b.cost(); });
}

}  // namespace

// ---------------------------------------------------------------- BRKGA

void BrkgaParams::validate() const {
  if (populationSize < 3) throw std::invalid_argument("brkga population size must be >= 3");
  if (!(eliteFraction > 0.0 && eliteFraction < 1.0))
    throw std::invalid_argument("brkga elite fraction must be in (0,1)");
  if (!(mutantFraction > 0.0 && mutantFraction < 1.0))
    throw std::invalid_argument("brkga mutant fraction must be in (0,1)");
  if (!(eliteFraction + mutantFraction < 1.0))
    throw std::invalid_argument("brkga elite + mutant fractions must be < 1");
  if (!(inheritBias >= 0.0 && inheritBias <= 1.0))
    throw std::invalid_argument("brkga inherit bias must be in [0,1]");
  if (exchangeInterval == 0) throw std::invalid_argument("brkga exchange interval must be >= 1");
}

Brkga::Brkga(BrkgaParams params) : params_(params) {
  params_.validate();
  const auto p = static_cast<double>(params_.populationSize);
  elites_ = std::max<std::size_t>(1, static_cast<std::size_t>(params_.eliteFraction * p));
  mutants_ = static_cast<std::size_t>(params_.mutantFraction * p);
  // Keep room for at least one offspring.
  while (elites_ + mutants_ >= params_.populationSize) {
    if (mutants_ > 0) --mutants_;
    else --elites_;
  }
}

std::vector<EvaluatedSolution> Brkga::evolve(const std::vector<EvaluatedSolution>& population,
                                             std::size_t dimension, const Evaluate& evaluate,
                                             Rng& rng) const {
  const std::size_t size = population.size();
  std::vector<EvaluatedSolution> next(population.begin(), population.begin() + elites_);
  next.reserve(size);

  for (std::size_t m = 0; m < mutants_; ++m) next.push_back(evaluate(newRandomVector(dimension, rng)));

  const BlendConfig crossover{params_.inheritBias, 0.0, 1};
  std::uniform_int_distribution<std::size_t> elitePick(0, elites_ - 1);
  std::uniform_int_distribution<std::size_t> otherPick(elites_, size - 1);
  while (next.size() < size) {
    const auto& a = population[elitePick(rng)];
    const auto& b = population[otherPick(rng)];
    next.push_back(evaluate(blend(a.vector(), b.vector(), crossover, rng)));
  }
  sortByCost(next);
  return next;
}

void Brkga::inject(std::vector<EvaluatedSolution>& population, const EvaluatedSolution& incoming,
                   Rng& rng) const {
  std::uniform_int_distribution<std::size_t> pick(elites_, population.size() - 1);
  population[pick(rng)] = incoming;
  sortByCost(population);
}

void Brkga::run(SearchContext& ctx) const {
  const Evaluate evaluate = [&ctx](RandomKeyVector keys) {
    return ctx.evaluateSolution(std::move(keys));
  };
  std::vector<EvaluatedSolution> population;
  population.reserve(params_.populationSize);
  for (std::size_t i = 0; i < params_.populationSize; ++i) population.push_back(ctx.randomSolution());
  sortByCost(population);

  for (std::size_t generation = 1;; ++generation) {
    population = evolve(population, ctx.dimension(), evaluate, ctx.rng());
    ctx.offer(population.front());
    if (generation % params_.exchangeInterval == 0 && ctx.pool().size() > 0) {
      inject(population, ctx.pool().sample(ctx.rng()), ctx.rng());
    }
  }
}

// ---------------------------------------------------------------- SA

void SaParams::validate() const {
  if (!(initialAcceptance > 0.0 && initialAcceptance < 1.0))
    throw std::invalid_argument("sa initial acceptance must be in (0,1)");
  if (!(coolingRate > 0.0 && coolingRate < 1.0))
    throw std::invalid_argument("sa cooling rate must be in (0,1)");
  if (calibrationSamples == 0) throw std::invalid_argument("sa needs >= 1 calibration sample");
  neighborhood.validate();
}

bool metropolisAccept(double delta, double temperature, double u) noexcept {
  if (delta <= 0.0) return true;
  if (!(temperature > 0.0)) return false;
  return u < std::exp(-delta / temperature);
}

double calibrateTemperature(std::span<const double> deltas, double acceptance) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const double d : deltas) {
    if (d > 0.0) {
      sum += d;
      ++count;
    }
  }
  if (count == 0) return 1.0;  // flat sample: any scale works
  return -(sum / static_cast<double>(count)) / std::log(acceptance);
}

SimulatedAnnealing::SimulatedAnnealing(SaParams params) : params_(params) { params_.validate(); }

void SimulatedAnnealing::run(SearchContext& ctx) const {
  auto& rng = ctx.rng();
  const std::size_t movesPerTemperature =
      params_.movesPerTemperature ? params_.movesPerTemperature : ctx.dimension();

  EvaluatedSolution current = ctx.pool().size() > 0 ? ctx.pool().sample(rng) : ctx.randomSolution();

  std::vector<double> deltas;
  deltas.reserve(params_.calibrationSamples);
  for (std::size_t s = 0; s < params_.calibrationSamples; ++s) {
    deltas.push_back(ctx.evaluate(shake(current.vector(), params_.neighborhood, rng)) -
                     current.cost());
  }
  const double initialTemperature = calibrateTemperature(deltas, params_.initialAcceptance);

  double temperature = initialTemperature;
  for (;;) {
    for (std::size_t m = 0; m < movesPerTemperature; ++m) {
      auto neighbor = ctx.evaluateSolution(shake(current.vector(), params_.neighborhood, rng));
      if (metropolisAccept(neighbor.cost() - current.cost(), temperature, uniformKey(rng))) {
        current = std::move(neighbor);
      }
    }
    temperature *= params_.coolingRate;
    if (temperature < params_.restartTemperature) {
      current = ctx.pool().sample(rng);
      temperature = initialTemperature;
    }
  }
}

// ---------------------------------------------------------------- ILS / VNS

void VnsParams::validate() const {
  if (betaLevels.empty()) throw std::invalid_argument("vns needs at least one beta level");
  for (std::size_t k = 0; k < betaLevels.size(); ++k) {
    if (!(betaLevels[k] > 0.0 && betaLevels[k] <= 1.0))
      throw std::invalid_argument("vns beta levels must be in (0,1]");
    if (k > 0 && !(betaLevels[k] > betaLevels[k - 1]))
      throw std::invalid_argument("vns beta levels must be strictly increasing");
  }
}

void perturbationDescent(SearchContext& ctx, std::span<const ShakeConfig> neighborhoods,
                         std::size_t restartAfter) {
  if (neighborhoods.empty()) throw std::invalid_argument("need at least one neighborhood");
  auto& rng = ctx.rng();
  EvaluatedSolution current = rvnd(ctx.randomSolution(), ctx.cost(), kUnlimited, rng);
  std::size_t k = 0;
  std::size_t stall = 0;
  for (;;) {
    auto candidate = ctx.evaluateSolution(shake(current.vector(), neighborhoods[k], rng));
    candidate = rvnd(candidate, ctx.cost(), kUnlimited, rng);
    if (candidate.cost() < current.cost()) {
      current = std::move(candidate);
      k = 0;
      stall = 0;
      continue;
    }
    k = (k + 1) % neighborhoods.size();
    if (++stall >= restartAfter) {
      current = ctx.pool().sample(rng);
      k = 0;
      stall = 0;
    }
  }
}

IteratedLocalSearch::IteratedLocalSearch(IlsParams params) : params_(params) {
  params_.shake.validate();
  if (params_.restartAfter == 0) throw std::invalid_argument("ils restartAfter must be >= 1");
}

void IteratedLocalSearch::run(SearchContext& ctx) const {
  perturbationDescent(ctx, std::span(&params_.shake, 1), params_.restartAfter);
}

VariableNeighborhoodSearch::VariableNeighborhoodSearch(VnsParams params)
    : params_(std::move(params)) {
  params_.validate();
  if (params_.restartAfter == 0) throw std::invalid_argument("vns restartAfter must be >= 1");
  for (const double beta : params_.betaLevels) neighborhoods_.push_back(ShakeConfig::fixed(beta));
}

void VariableNeighborhoodSearch::run(SearchContext& ctx) const {
  perturbationDescent(ctx, neighborhoods_, params_.restartAfter);
}

// ---------------------------------------------------------------- factory

std::shared_ptr<const Searcher> makeSearcher(std::string_view name) {
  if (name == "brkga") return std::make_shared<Brkga>();
  if (name == "sa") return std::make_shared<SimulatedAnnealing>();
  if (name == "ils") return std::make_shared<IteratedLocalSearch>();
  if (name == "vns") return std::make_shared<VariableNeighborhoodSearch>();
  throw std::invalid_argument("unknown searcher '" + std::string(name) +
                              "' (expected brkga, sa, ils or vns)");
}

SearcherList parseSearchers(std::string_view list) {
  SearcherList out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = list.find(',', pos);
    const auto token = list.substr(pos, comma == std::string_view::npos ? list.size() - pos
                                                                         : comma - pos);
    if (!token.empty()) out.push_back(makeSearcher(token));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("searcher list is empty");
  return out;
}

}  // namespace rko
