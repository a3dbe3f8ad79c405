#include "rko/mip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rko/errors.hpp"

namespace rko::mip {

namespace {

constexpr double kIntegralityTolerance = 1e-9;

bool isIntegral(double v) { return std::abs(v - std::round(v)) <= kIntegralityTolerance; }

}  // namespace

void Instance::validate() const {
  if (n == 0 || m == 0) throw std::invalid_argument("mip instance needs n >= 1 and m >= 1");
  if (p > n) throw std::invalid_argument("mip instance has p > n");
  if (c.size() != n || l.size() != n || u.size() != n)
    throw std::invalid_argument("mip instance: c, l, u must have length n");
  if (b.size() != m) throw std::invalid_argument("mip instance: b must have length m");
  if (A.size() != m * n) throw std::invalid_argument("mip instance: A must be m x n");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(l[i] <= u[i]))
      throw std::invalid_argument("mip instance: l > u at variable " + std::to_string(i));
    if (isInteger(i) && !(isIntegral(l[i]) && isIntegral(u[i])))
      throw std::invalid_argument("mip instance: non-integer bound on integer variable " +
                                  std::to_string(i));
  }
}

std::vector<double> mapKeysToAssignment(const Instance& instance, std::span<const double> keys) {
  if (keys.size() != instance.n) throw std::invalid_argument("mip decode: key length != n");
  std::vector<double> x(instance.n);
  for (std::size_t i = 0; i < instance.n; ++i) {
    const double lo = instance.l[i];
    const double hi = instance.u[i];
    if (instance.isInteger(i)) {
      const double raw = lo - 0.5 + (hi - lo + 1.0) * keys[i];
      x[i] = std::clamp(std::floor(raw + 0.5), lo, hi);  // round half up
    } else {
      x[i] = lo + (hi - lo) * keys[i];
    }
  }
  return x;
}

std::vector<double> rowSlack(const Instance& instance, std::span<const double> x) {
  std::vector<double> slack(instance.m);
  for (std::size_t r = 0; r < instance.m; ++r) {
    double ax = 0.0;
    for (std::size_t j = 0; j < instance.n; ++j) ax += instance.coefficient(r, j) * x[j];
    slack[r] = instance.b[r] - ax;
  }
  return slack;
}

double linearCost(const Instance& instance, std::span<const double> x) {
  double cost = 0.0;
  for (std::size_t j = 0; j < instance.n; ++j) cost += instance.c[j] * x[j];
  return cost;
}

Assignment decode(const Instance& instance, const PenaltyModel& penalty,
                  std::span<const double> keys) {
  Assignment out;
  out.x = mapKeysToAssignment(instance, keys);
  out.slack = rowSlack(instance, out.x);
  out.cost = linearCost(instance, out.x);
  for (const double delta : out.slack) {
    if (delta < 0.0) out.cost += penalty.prefactor * delta * delta;
  }
  return out;
}

FeasibilityReport checkFeasibility(const Instance& instance, std::span<const double> x) {
  if (x.size() != instance.n) throw std::invalid_argument("mip check: x length != n");
  FeasibilityReport report;
  report.slack = rowSlack(instance, x);
  for (const double s : report.slack) {
    if (s < 0.0) ++report.violatedRows;
  }
  for (std::size_t i = 0; i < instance.n; ++i) {
    if (x[i] < instance.l[i] || x[i] > instance.u[i]) report.boundsOk = false;
    if (instance.isInteger(i) && !isIntegral(x[i])) report.integralityOk = false;
  }
  report.feasible = report.violatedRows == 0 && report.boundsOk && report.integralityOk;
  return report;
}

MipDecoder::MipDecoder(Instance instance, PenaltyModel penalty)
    : instance_(std::move(instance)), penalty_(penalty) {
  instance_.validate();
  if (!(penalty_.prefactor > 0.0)) throw std::invalid_argument("penalty prefactor must be > 0");
}

double MipDecoder::decode(std::span<const double> keys) const {
  return mip::decode(instance_, penalty_, keys).cost;
}

OracleResult bruteForce(const Instance& instance) {
  instance.validate();
  std::vector<std::vector<double>> domains(instance.n);
  double total = 1.0;
  for (std::size_t i = 0; i < instance.n; ++i) {
    if (instance.isInteger(i)) {
      for (double v = instance.l[i]; v <= instance.u[i]; v += 1.0) domains[i].push_back(v);
    } else {
      domains[i].push_back(instance.l[i]);
      if (instance.u[i] > instance.l[i]) domains[i].push_back(instance.u[i]);
    }
    total *= static_cast<double>(domains[i].size());
    if (total > static_cast<double>(kMaxOracleAssignments)) {
      throw GuardExceeded("mip oracle: more than " + std::to_string(kMaxOracleAssignments) +
                              " assignments to enumerate",
                          total, static_cast<double>(kMaxOracleAssignments));
    }
  }

  OracleResult result;
  result.bestCost = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> digit(instance.n, 0);
  std::vector<double> x(instance.n);
  for (;;) {
    for (std::size_t i = 0; i < instance.n; ++i) x[i] = domains[i][digit[i]];
    ++result.evaluated;
    const auto slack = rowSlack(instance, x);
    bool ok = true;
    for (const double s : slack) ok = ok && s >= 0.0;
    if (ok) {
      const double cost = linearCost(instance, x);
      if (cost < result.bestCost) {
        result.bestCost = cost;
        result.bestX = x;
        result.feasible = true;
      }
    }
    std::size_t k = 0;
    while (k < instance.n && ++digit[k] == domains[k].size()) digit[k++] = 0;
    if (k == instance.n) break;
  }
  if (!result.feasible) result.bestCost = 0.0;
  return result;
}

}  // namespace rko::mip
