#include "rko/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rko/errors.hpp"

namespace rko::portfolio {

void Instance::validate() const {
  if (n == 0) throw std::invalid_argument("portfolio instance needs n >= 1");
  if (mu.size() != n) throw std::invalid_argument("portfolio instance: mu must have length n");
  if (sigma.size() != n * n) throw std::invalid_argument("portfolio instance: Sigma must be n x n");
  if (lower.size() != n || upper.size() != n)
    throw std::invalid_argument("portfolio instance: bounds must have length n");
  if (K < 1 || K > n) throw std::invalid_argument("portfolio instance: K must be in [1, n]");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("portfolio instance: lambda must be in [0,1]");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(0.0 <= lower[i] && lower[i] <= upper[i] && upper[i] <= 1.0))
      throw std::invalid_argument("portfolio instance: need 0 <= l_i <= u_i <= 1 (asset " +
                                  std::to_string(i + 1) + ")");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(cov(i, j) - cov(j, i)) > 1e-12)
        throw std::invalid_argument("portfolio instance: Sigma is not symmetric");
    }
  }
  const double minL = *std::min_element(lower.begin(), lower.end());
  const double maxU = *std::max_element(upper.begin(), upper.end());
  const double k = static_cast<double>(K);
  if (!(k * minL <= 1.0 && 1.0 <= k * maxU))
    throw std::invalid_argument("portfolio instance: bounds cannot hold a unit budget with K assets");
}

Instance makeInstance(std::vector<double> mu, std::vector<double> sigma, double lambda,
                      std::size_t K, double lower, double upper) {
  Instance inst;
  inst.n = mu.size();
  inst.mu = std::move(mu);
  inst.sigma = std::move(sigma);
  inst.lambda = lambda;
  inst.K = K;
  inst.lower.assign(inst.n, lower);
  inst.upper.assign(inst.n, upper);
  inst.validate();
  return inst;
}

double risk(const Instance& instance, std::span<const double> w) {
  double r = 0.0;
  for (std::size_t i = 0; i < instance.n; ++i) {
    if (w[i] == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < instance.n; ++j) row += instance.cov(i, j) * w[j];
    r += w[i] * row;
  }
  return r;
}

double expectedReturn(const Instance& instance, std::span<const double> w) {
  double r = 0.0;
  for (std::size_t i = 0; i < instance.n; ++i) r += instance.mu[i] * w[i];
  return r;
}

double objective(const Instance& instance, std::span<const double> w) {
  if (w.size() != instance.n) throw std::invalid_argument("objective: w must have length n");
  return instance.lambda * risk(instance, w) - (1.0 - instance.lambda) * expectedReturn(instance, w);
}

std::size_t selectionPosition(double key, std::size_t remaining) {
  const auto pos = static_cast<std::size_t>(std::ceil(key * static_cast<double>(remaining)));
  return std::clamp<std::size_t>(pos, 1, remaining);
}

Solution decode(const Instance& instance, std::span<const double> keys) {
  const std::size_t K = instance.K;
  if (keys.size() != 2 * K) throw std::invalid_argument("portfolio decode: key length must be 2K");

  Solution s;
  s.w.assign(instance.n, 0.0);
  s.z.assign(instance.n, 0);
  s.selected.reserve(K);
  s.rawWeights.reserve(K);

  std::vector<std::size_t> assets(instance.n);
  std::iota(assets.begin(), assets.end(), std::size_t{0});

  double sum = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    const std::size_t pos = selectionPosition(keys[i], assets.size());
    const std::size_t id = assets[pos - 1];
    assets.erase(assets.begin() + static_cast<std::ptrdiff_t>(pos - 1));
    s.z[id] = 1;
    const double raw = instance.lower[id] + (instance.upper[id] - instance.lower[id]) * keys[i + K];
    s.w[id] = raw;
    s.selected.push_back(id + 1);
    s.rawWeights.push_back(raw);
    sum += raw;
  }

  for (const std::size_t id1 : s.selected) {
    const std::size_t id = id1 - 1;
    s.w[id] = sum > 0.0 ? s.w[id] / sum : 1.0 / static_cast<double>(K);
    s.penalty += std::max(0.0, s.w[id] - instance.upper[id]) +
                 std::max(0.0, instance.lower[id] - s.w[id]);
  }

  s.cost = objective(instance, s.w);
  if (s.penalty > 0.0) s.cost += kProportionalPenalty * s.penalty + kFixedPenalty;
  return s;
}

std::string FeasibilityReport::describe() const {
  if (feasible()) return "feasible";
  std::ostringstream out;
  const char* sep = "";
  if (!budgetOk) { out << sep << "budget"; sep = ", "; }
  if (!cardinalityOk) { out << sep << "cardinality"; sep = ", "; }
  if (!boundsOk) {
    out << sep << "bounds (assets";
    for (const auto id : boundViolations) out << ' ' << id;
    out << ')';
    sep = ", ";
  }
  if (!binaryOk) out << sep << "binary";
  return out.str();
}

FeasibilityReport check(const Instance& instance, const Solution& solution) {
  if (solution.w.size() != instance.n || solution.z.size() != instance.n)
    throw std::invalid_argument("portfolio check: solution vectors must have length n");
  FeasibilityReport r;
  double sumW = 0.0;
  long sumZ = 0;
  for (std::size_t i = 0; i < instance.n; ++i) {
    const int z = solution.z[i];
    const double w = solution.w[i];
    if (z != 0 && z != 1) r.binaryOk = false;
    sumW += w;
    sumZ += z;
    if (w < instance.lower[i] * z || w > instance.upper[i] * z) {
      r.boundsOk = false;
      r.boundViolations.push_back(i + 1);
    }
  }
  r.budgetOk = std::abs(sumW - 1.0) <= 1e-9;
  r.cardinalityOk = sumZ == static_cast<long>(instance.K);
  return r;
}

PortfolioDecoder::PortfolioDecoder(Instance instance) : instance_(std::move(instance)) {
  instance_.validate();
}

double PortfolioDecoder::decode(std::span<const double> keys) const {
  return portfolio::decode(instance_, keys).cost;
}

namespace {

struct GridRange {
  long units;  // grid points making up the whole budget
  long lo;
  long hi;
};

GridRange gridRange(double lower, double upper, double gridStep) {
  const long units = std::lround(1.0 / gridStep);
  if (std::abs(static_cast<double>(units) * gridStep - 1.0) > 1e-9)
    throw std::invalid_argument("grid step must divide 1");
  const long lo = static_cast<long>(std::ceil(lower / gridStep - 1e-9));
  const long hi = static_cast<long>(std::floor(upper / gridStep + 1e-9));
  return {units, lo, hi};
}

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

double gridPointsPerSubset(std::size_t K, double lower, double upper, double gridStep) {
  const auto g = gridRange(lower, upper, gridStep);
  if (g.lo > g.hi) return 0.0;
  // ways[s] = number of ways to reach total s with the coordinates so far.
  std::vector<double> ways(static_cast<std::size_t>(g.units) + 1, 0.0);
  ways[0] = 1.0;
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<double> next(ways.size(), 0.0);
    for (long s = 0; s <= g.units; ++s) {
      if (ways[static_cast<std::size_t>(s)] == 0.0) continue;
      for (long v = g.lo; v <= g.hi && s + v <= g.units; ++v)
        next[static_cast<std::size_t>(s + v)] += ways[static_cast<std::size_t>(s)];
    }
    ways = std::move(next);
  }
  return ways.back();
}

OracleResult bruteForce(const Instance& instance, double gridStep) {
  instance.validate();
  if (!(gridStep > 0.0 && gridStep <= 1.0)) throw std::invalid_argument("grid step must be in (0,1]");
  const double lower = *std::min_element(instance.lower.begin(), instance.lower.end());
  const double upper = *std::max_element(instance.upper.begin(), instance.upper.end());
  const std::size_t K = instance.K;

  const double work = binomial(instance.n, K) * gridPointsPerSubset(K, lower, upper, gridStep);
  if (work > kMaxOracleWork) {
    std::ostringstream msg;
    msg << "portfolio oracle: C(" << instance.n << "," << K << ") x grid points = " << work
        << " exceeds " << kMaxOracleWork;
    throw GuardExceeded(msg.str(), work, kMaxOracleWork);
  }

  OracleResult best;
  best.bestCost = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> subset(K);
  std::iota(subset.begin(), subset.end(), std::size_t{0});
  std::vector<long> units(K);
  std::vector<double> w(K);

  const auto evaluate = [&](const std::vector<double>& weights) {
    double riskTerm = 0.0;
    double ret = 0.0;
    for (std::size_t a = 0; a < K; ++a) {
      ret += instance.mu[subset[a]] * weights[a];
      for (std::size_t b = 0; b < K; ++b)
        riskTerm += weights[a] * instance.cov(subset[a], subset[b]) * weights[b];
    }
    return instance.lambda * riskTerm - (1.0 - instance.lambda) * ret;
  };

  for (;;) {
    std::vector<GridRange> ranges(K);
    for (std::size_t a = 0; a < K; ++a)
      ranges[a] = gridRange(instance.lower[subset[a]], instance.upper[subset[a]], gridStep);
    const long total = ranges[0].units;

    // Depth-first over the first K-1 coordinates; the last one closes the budget.
    const auto recurse = [&](auto&& self, std::size_t a, long used) -> void {
      if (a + 1 == K) {
        const long last = total - used;
        if (last < ranges[a].lo || last > ranges[a].hi) return;
        units[a] = last;
        for (std::size_t t = 0; t < K; ++t) w[t] = static_cast<double>(units[t]) * gridStep;
        ++best.evaluated;
        const double cost = evaluate(w);
        if (cost < best.bestCost) {
          best.bestCost = cost;
          best.w.assign(instance.n, 0.0);
          best.selected.clear();
          for (std::size_t t = 0; t < K; ++t) {
            best.w[subset[t]] = w[t];
            best.selected.push_back(subset[t] + 1);
          }
        }
        return;
      }
      for (long v = ranges[a].lo; v <= ranges[a].hi && used + v <= total; ++v) {
        units[a] = v;
        self(self, a + 1, used + v);
      }
    };
    recurse(recurse, 0, 0);

    // Next combination in lexicographic order.
    std::size_t i = K;
    while (i > 0 && subset[i - 1] == instance.n - K + (i - 1)) --i;
    if (i == 0) break;
    ++subset[i - 1];
    for (std::size_t j = i; j < K; ++j) subset[j] = subset[j - 1] + 1;
  }
  return best;
}

double gridResolutionBound(const Instance& instance, double gridStep) {
  const double maxU = *std::max_element(instance.upper.begin(), instance.upper.end());
  double maxRow = 0.0;
  for (std::size_t i = 0; i < instance.n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < instance.n; ++j) row += std::abs(instance.cov(i, j));
    maxRow = std::max(maxRow, row);
  }
  double maxMu = 0.0;
  for (const double m : instance.mu) maxMu = std::max(maxMu, std::abs(m));
  const double gradient = 2.0 * instance.lambda * maxRow * maxU + (1.0 - instance.lambda) * maxMu;
  return gradient * static_cast<double>(instance.K) * gridStep;
}

}  // namespace rko::portfolio
