#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rko/decoder.hpp"

namespace rko::tdtsp {

/// Time-dependent TSP over nodes 0..n+1: 0 is the depot, n+1 its copy marking
/// the end of the route, 1..n the customers. The horizon H * Tbar is split
/// into H intervals; travel times are constant inside an interval.
struct Instance {
  std::size_t n = 0;
  std::size_t H = 0;
  double Tbar = 0.0;
  std::vector<double> service;  // length n+2, service[0] = service[n+1] = 0
  std::vector<double> travel;   // [h][i][j], (n+2) x (n+2) per interval
  std::optional<std::uint64_t> seed;  // set for generated instances

  std::size_t nodes() const noexcept { return n + 2; }
  std::size_t terminal() const noexcept { return n + 1; }
  double horizon() const noexcept { return static_cast<double>(H) * Tbar; }

  double t(std::size_t i, std::size_t j, std::size_t h) const {
    return travel[(h * nodes() + i) * nodes() + j];
  }
  double& t(std::size_t i, std::size_t j, std::size_t h) {
    return travel[(h * nodes() + i) * nodes() + j];
  }

  /// Throws std::invalid_argument on shape errors, negative times, positive
  /// depot/terminal service or non-positive customer service.
  void validate() const;

  /// Places where node n+1 does not duplicate node 0 (empty when consistent).
  std::vector<std::string> depotCopyWarnings() const;
};

struct Arc {
  std::size_t from;
  std::size_t to;
  std::size_t interval;
  bool operator==(const Arc&) const = default;
};

struct Flow {
  std::size_t from;
  std::size_t to;
  double value;
};

struct Solution {
  std::vector<std::size_t> permutation;  // customers 1..n in visiting order
  std::vector<Arc> arcs;                 // n+1 arcs, depot to terminal
  std::vector<Flow> flows;               // two entries per traversed arc
  std::vector<double> a;                 // departure times; a[n+1] is the arrival at the terminal
  double travelCost = 0.0;
  double cost = 0.0;
  bool penalized = false;
};

inline constexpr double kPenaltyFactor = 1e3;

/// Customers sorted by key, ties by smaller index.
std::vector<std::size_t> orderByKeys(std::span<const double> keys);

/// Drives the route through time: the interval index follows the departure
/// time until the horizon is passed, then the last interval is used. Any
/// overflow marks the solution penalized and adds H * Tbar * 1e3 once.
Solution simulate(const Instance& instance, std::span<const std::size_t> permutation);

/// Keys of length n to a route; see simulate().
Solution decode(const Instance& instance, std::span<const double> keys);

struct FamilyResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct CheckReport {
  std::vector<FamilyResult> families;

  bool feasible() const;
  const FamilyResult& family(const std::string& name) const;
};

/// Verifies a solution against every constraint family of the time-indexed
/// two-commodity-flow model. Family names:
///   depot_no_entry, terminal_no_exit, depot_first_interval,
///   depot_no_late_departure, out_degree, in_degree, terminal_in_degree,
///   flow_balance, flow_depot_out, flow_depot_in, flow_terminal_out,
///   flow_linking, depot_time_zero, time_propagation, interval_identification,
///   horizon, domains.
/// Strict inequalities use a 1e-9 tolerance.
CheckReport check(const Instance& instance, const Solution& solution);

/// Cheapest depot departure in the first interval plus, for each customer, its
/// cheapest outgoing arc over all intervals (depot excluded as a target).
double lowerBound(const Instance& instance);

struct OracleResult {
  double bestCost = 0.0;
  std::vector<std::size_t> permutation;
  std::size_t evaluated = 0;
};

inline constexpr std::size_t kMaxOracleCustomers = 10;

/// Enumerates all n! visiting orders. Throws GuardExceeded for n > 10.
OracleResult bruteForce(const Instance& instance);

struct GeneratorOptions {
  std::size_t n = 10;
  std::size_t H = 5;
  double horizon = 54000.0;
  double travelMin = 1.0;
  double travelMax = 12.0;
  std::uint64_t seed = 1;
};

/// Service-time band by instance size: [1800,2700] for n <= 14,
/// [900,1500] for n <= 24, [360,600] for n <= 54, [180,360] for n <= 84,
/// [120,240] above.
std::pair<double, double> serviceBand(std::size_t n);

/// Synthetic instance: integer service times from the size band, integer
/// travel times uniform in [travelMin, travelMax] per arc and interval, node
/// n+1 a copy of node 0.
Instance generate(const GeneratorOptions& options);

class TdTspDecoder final : public Decoder {
 public:
  explicit TdTspDecoder(Instance instance);

  std::size_t dimension() const override { return instance_.n; }
  double decode(std::span<const double> keys) const override;

  const Instance& instance() const noexcept { return instance_; }

 private:
  Instance instance_;
};

}  // namespace rko::tdtsp
