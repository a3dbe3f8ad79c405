#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rko/elite_pool.hpp"
#include "rko/perturbation.hpp"
#include "rko/search_context.hpp"

namespace rko {

struct BrkgaParams {
  std::size_t populationSize = 100;
  double eliteFraction = 0.20;
  double mutantFraction = 0.15;
  double inheritBias = 0.70;
  std::size_t exchangeInterval = 50;  // generations between pool injections

  void validate() const;
};

/// Biased random-key genetic algorithm.
class Brkga final : public Searcher {
 public:
  using Evaluate = std::function<EvaluatedSolution(RandomKeyVector)>;

  explicit Brkga(BrkgaParams params = {});

  std::string name() const override { return "brkga"; }
  void run(SearchContext& ctx) const override;

  std::size_t eliteCount() const noexcept { return elites_; }
  std::size_t mutantCount() const noexcept { return mutants_; }

  /// Produces the next generation from a cost-sorted population: elites
  /// copied, fresh mutants, and offspring of (elite, non-elite) parent pairs.
  /// The result is sorted by cost.
  std::vector<EvaluatedSolution> evolve(const std::vector<EvaluatedSolution>& population,
                                        std::size_t dimension, const Evaluate& evaluate,
                                        Rng& rng) const;

  /// Replaces a uniformly chosen non-elite member with `incoming` and
  /// re-sorts. Population size is unchanged.
  void inject(std::vector<EvaluatedSolution>& population, const EvaluatedSolution& incoming,
              Rng& rng) const;

 private:
  BrkgaParams params_;
  std::size_t elites_;
  std::size_t mutants_;
};

struct SaParams {
  double initialAcceptance = 0.5;
  double coolingRate = 0.99;
  std::size_t movesPerTemperature = 0;  // 0 means "problem dimension"
  std::size_t calibrationSamples = 100;
  double restartTemperature = 1e-6;
  ShakeConfig neighborhood{};

  void validate() const;
};

/// Metropolis rule: improvements and ties always pass; a worsening delta
/// passes when u < exp(-delta / temperature).
bool metropolisAccept(double delta, double temperature, double u) noexcept;

/// Temperature at which the mean worsening delta among `deltas` is accepted
/// with probability `acceptance`.
double calibrateTemperature(std::span<const double> deltas, double acceptance);

class SimulatedAnnealing final : public Searcher {
 public:
  explicit SimulatedAnnealing(SaParams params = {});
  std::string name() const override { return "sa"; }
  void run(SearchContext& ctx) const override;

 private:
  SaParams params_;
};

struct IlsParams {
  ShakeConfig shake{};
  std::size_t restartAfter = 50;  // non-improving iterations before a pool restart
};

struct VnsParams {
  std::vector<double> betaLevels{0.1, 0.2, 0.3, 0.4, 0.5};
  std::size_t restartAfter = 50;

  void validate() const;
};

/// Shake-then-RVND loop over an ordered list of neighborhoods: an improvement
/// resets to the first neighborhood, a failure advances cyclically. After
/// `restartAfter` consecutive failures the search restarts from a pool member.
void perturbationDescent(SearchContext& ctx, std::span<const ShakeConfig> neighborhoods,
                         std::size_t restartAfter);

class IteratedLocalSearch final : public Searcher {
 public:
  explicit IteratedLocalSearch(IlsParams params = {});
  std::string name() const override { return "ils"; }
  void run(SearchContext& ctx) const override;

 private:
  IlsParams params_;
};

class VariableNeighborhoodSearch final : public Searcher {
 public:
  explicit VariableNeighborhoodSearch(VnsParams params = {});
  std::string name() const override { return "vns"; }
  void run(SearchContext& ctx) const override;

 private:
  VnsParams params_;
  std::vector<ShakeConfig> neighborhoods_;
};

using SearcherList = std::vector<std::shared_ptr<const Searcher>>;

/// Builds a searcher with default parameters from its name
/// (brkga, sa, ils, vns). Throws std::invalid_argument for unknown names.
std::shared_ptr<const Searcher> makeSearcher(std::string_view name);

/// Parses a comma-separated list such as "brkga,sa,ils,vns".
SearcherList parseSearchers(std::string_view list);

}  // namespace rko
