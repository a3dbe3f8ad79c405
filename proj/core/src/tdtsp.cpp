#include "rko/tdtsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rko/errors.hpp"

namespace rko::tdtsp {

void Instance::validate() const {
  if (n == 0) throw std::invalid_argument("tdtsp instance needs n >= 1");
  if (H == 0) throw std::invalid_argument("tdtsp instance needs H >= 1");
  if (!(Tbar > 0.0)) throw std::invalid_argument("tdtsp instance needs Tbar > 0");
  if (service.size() != nodes()) throw std::invalid_argument("tdtsp instance: s must have length n+2");
  if (travel.size() != H * nodes() * nodes())
    throw std::invalid_argument("tdtsp instance: t must hold H matrices of (n+2)x(n+2)");
  if (service.front() != 0.0 || service.back() != 0.0)
    throw std::invalid_argument("tdtsp instance: depot and terminal service must be 0");
  for (std::size_t i = 1; i <= n; ++i) {
    if (!(service[i] > 0.0))
      throw std::invalid_argument("tdtsp instance: service time of customer " + std::to_string(i) +
                                  " must be > 0");
  }
  for (const double v : travel) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("tdtsp instance: travel times must be finite and >= 0");
  }
}

std::vector<std::string> Instance::depotCopyWarnings() const {
  std::vector<std::string> out;
  const std::size_t last = terminal();
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t k = 1; k <= n; ++k) {
      if (t(last, k, h) != t(0, k, h)) {
        std::ostringstream msg;
        msg << "t[" << h << "][" << last << "][" << k << "] != t[" << h << "][0][" << k << "]";
        out.push_back(msg.str());
      }
      if (t(k, last, h) != t(k, 0, h)) {
        std::ostringstream msg;
        msg << "t[" << h << "][" << k << "][" << last << "] != t[" << h << "][" << k << "][0]";
        out.push_back(msg.str());
      }
    }
  }
  return out;
}

std::vector<std::size_t> orderByKeys(std::span<const double> keys) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{1});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a - 1] < keys[b - 1]; });
  return order;
}

namespace {

// One pass of the route simulation. When `out` is non-null the full
// assignment is recorded; the returned value is the cost in either case.
double runRoute(const Instance& in, std::span<const std::size_t> perm, Solution* out) {
  const std::size_t n = in.n;
  const std::size_t last = in.terminal();
  const double horizon = in.horizon();

  std::vector<double> a(out ? in.nodes() : 0, 0.0);
  double now = 0.0;
  std::size_t h = 0;
  std::size_t current = 0;
  double flow = static_cast<double>(n);
  double travel = 0.0;
  bool penalized = false;

  for (const std::size_t next : perm) {
    std::size_t used = h;
    if (h >= in.H) {
      used = in.H - 1;
      penalized = true;
    }
    const double tt = in.t(current, next, used);
    travel += tt;
    now += tt + in.service[next];
    if (h < in.H) h = static_cast<std::size_t>(std::floor(now / in.Tbar));
    if (out) {
      a[next] = now;
      out->arcs.push_back({current, next, used});
      out->flows.push_back({current, next, flow});
      out->flows.push_back({next, current, static_cast<double>(n) - flow});
    }
    flow -= 1.0;
    current = next;
  }

  std::size_t used = h;
  if (h < in.H && now + in.t(current, last, h) < horizon) {
    used = h;
  } else {
    used = in.H - 1;
    penalized = true;
  }
  const double tt = in.t(current, last, used);
  travel += tt;
  now += tt;

  const double cost = travel + (penalized ? horizon * kPenaltyFactor : 0.0);
  if (out) {
    a[last] = now;
    out->arcs.push_back({current, last, used});
    out->flows.push_back({current, last, flow});
    out->flows.push_back({last, current, static_cast<double>(n) - flow});
    out->a = std::move(a);
    out->travelCost = travel;
    out->cost = cost;
    out->penalized = penalized;
  }
  return cost;
}

}  // namespace

Solution simulate(const Instance& instance, std::span<const std::size_t> permutation) {
  if (permutation.size() != instance.n)
    throw std::invalid_argument("tdtsp simulate: route must list n customers");
  for (const auto c : permutation) {
    if (c < 1 || c > instance.n) throw std::invalid_argument("tdtsp simulate: customer id out of range");
  }
  Solution s;
  s.permutation.assign(permutation.begin(), permutation.end());
  s.arcs.reserve(instance.n + 1);
  s.flows.reserve(2 * (instance.n + 1));
  runRoute(instance, permutation, &s);
  return s;
}

Solution decode(const Instance& instance, std::span<const double> keys) {
  if (keys.size() != instance.n) throw std::invalid_argument("tdtsp decode: key length must be n");
  const auto order = orderByKeys(keys);
  return simulate(instance, order);
}

bool CheckReport::feasible() const {
  return std::all_of(families.begin(), families.end(), [](const auto& f) { return f.passed; });
}

const FamilyResult& CheckReport::family(const std::string& name) const {
  for (const auto& f : families) {
    if (f.name == name) return f;
  }
  throw std::out_of_range("no constraint family named " + name);
}

namespace {

constexpr double kTol = 1e-9;

class FamilyRecorder {
 public:
  explicit FamilyRecorder(CheckReport& report) : report_(report) {}

  FamilyResult& open(std::string name) {
    report_.families.push_back({std::move(name), true, {}});
    return report_.families.back();
  }

  static void fail(FamilyResult& f, const std::string& why) {
    if (f.passed) f.detail = why;
    f.passed = false;
  }

 private:
  CheckReport& report_;
};

bool near(double a, double b) { return std::abs(a - b) <= kTol; }

}  // namespace

CheckReport check(const Instance& in, const Solution& sol) {
  const std::size_t N = in.nodes();
  const std::size_t n = in.n;
  const std::size_t last = in.terminal();
  const auto inArcSet = [&](std::size_t i, std::size_t j) {
    return i != j && !(i == 0 && j == last) && !(i == last && j == 0);
  };

  CheckReport report;
  FamilyRecorder rec(report);

  // Domains first: the dense tables below rely on in-range indices.
  std::vector<int> x(in.H * N * N, 0);
  std::vector<double> y(N * N, 0.0);
  const auto X = [&](std::size_t i, std::size_t j, std::size_t h) -> int& {
    return x[(h * N + i) * N + j];
  };
  const auto Y = [&](std::size_t i, std::size_t j) -> double& { return y[i * N + j]; };

  auto& domains = rec.open("domains");
  for (const auto& arc : sol.arcs) {
    if (arc.from >= N || arc.to >= N || arc.interval >= in.H || !inArcSet(arc.from, arc.to)) {
      FamilyRecorder::fail(domains, "arc outside the arc set or horizon");
      continue;
    }
    if (++X(arc.from, arc.to, arc.interval) > 1) FamilyRecorder::fail(domains, "x not binary");
  }
  for (const auto& f : sol.flows) {
    if (f.from >= N || f.to >= N) {
      FamilyRecorder::fail(domains, "flow on an unknown node");
      continue;
    }
    if (f.value < 0.0) FamilyRecorder::fail(domains, "negative flow");
    Y(f.from, f.to) = f.value;
  }
  if (sol.a.size() != N) {
    FamilyRecorder::fail(domains, "time vector must have length n+2");
    return report;
  }
  for (const double t : sol.a) {
    if (t < 0.0) FamilyRecorder::fail(domains, "negative time");
  }

  const auto sumX = [&](std::size_t i, std::size_t j) {
    int s = 0;
    for (std::size_t h = 0; h < in.H; ++h) s += X(i, j, h);
    return s;
  };

  auto& noEntry = rec.open("depot_no_entry");
  for (std::size_t i = 1; i < N; ++i)
    if (sumX(i, 0) != 0) FamilyRecorder::fail(noEntry, "arc into depot from node " + std::to_string(i));

  auto& noExit = rec.open("terminal_no_exit");
  for (std::size_t j = 0; j < last; ++j)
    if (sumX(last, j) != 0) FamilyRecorder::fail(noExit, "arc out of terminal to node " + std::to_string(j));

  auto& firstInterval = rec.open("depot_first_interval");
  {
    int s = 0;
    for (std::size_t j = 1; j <= n; ++j) s += X(0, j, 0);
    if (s != 1) FamilyRecorder::fail(firstInterval, "depot departures in interval 0: " + std::to_string(s));
  }

  auto& lateDeparture = rec.open("depot_no_late_departure");
  {
    int s = 0;
    for (std::size_t j = 1; j <= n; ++j)
      for (std::size_t h = 1; h < in.H; ++h) s += X(0, j, h);
    if (s != 0) FamilyRecorder::fail(lateDeparture, "depot departures after interval 0");
  }

  auto& outDegree = rec.open("out_degree");
  auto& inDegree = rec.open("in_degree");
  for (std::size_t c = 1; c <= n; ++c) {
    int out = 0;
    int inc = 0;
    for (std::size_t j = 1; j < N; ++j)
      if (j != c) out += sumX(c, j);
    for (std::size_t i = 0; i < last; ++i)
      if (i != c) inc += sumX(i, c);
    if (out != 1) FamilyRecorder::fail(outDegree, "customer " + std::to_string(c) + " leaves " + std::to_string(out) + " times");
    if (inc != 1) FamilyRecorder::fail(inDegree, "customer " + std::to_string(c) + " entered " + std::to_string(inc) + " times");
  }

  auto& terminalIn = rec.open("terminal_in_degree");
  {
    int s = 0;
    for (std::size_t i = 1; i <= n; ++i) s += sumX(i, last);
    if (s != 1) FamilyRecorder::fail(terminalIn, "terminal entered " + std::to_string(s) + " times");
  }

  auto& balance = rec.open("flow_balance");
  for (std::size_t i = 1; i <= n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < N; ++j)
      if (j != i) s += Y(j, i) - Y(i, j);
    if (!near(s, 2.0)) FamilyRecorder::fail(balance, "customer " + std::to_string(i) + " net flow " + std::to_string(s));
  }

  const double nd = static_cast<double>(n);
  auto& depotOut = rec.open("flow_depot_out");
  auto& depotIn = rec.open("flow_depot_in");
  auto& terminalOut = rec.open("flow_terminal_out");
  {
    double sOut = 0.0, sIn = 0.0, sTerm = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      sOut += Y(0, j);
      sIn += Y(j, 0);
      sTerm += Y(last, j);
    }
    if (!near(sOut, nd)) FamilyRecorder::fail(depotOut, "depot outflow " + std::to_string(sOut));
    if (!near(sIn, 0.0)) FamilyRecorder::fail(depotIn, "depot inflow " + std::to_string(sIn));
    if (!near(sTerm, nd)) FamilyRecorder::fail(terminalOut, "terminal outflow " + std::to_string(sTerm));
  }

  auto& linking = rec.open("flow_linking");
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      if (!inArcSet(i, j)) continue;
      const double rhs = nd * (sumX(i, j) + sumX(j, i));
      if (!near(Y(i, j) + Y(j, i), rhs))
        FamilyRecorder::fail(linking, "pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }

  auto& timeZero = rec.open("depot_time_zero");
  if (sol.a[0] != 0.0) FamilyRecorder::fail(timeZero, "a_0 != 0");

  auto& propagation = rec.open("time_propagation");
  const double span = in.Tbar * static_cast<double>(in.H);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      if (!inArcSet(i, j)) continue;
      for (std::size_t h = 0; h < in.H; ++h) {
        const double free = 1.0 - X(i, j, h);
        const double base = sol.a[i] + in.service[j] + in.t(i, j, h);
        const bool lowOk = base - 2.0 * span * free <= sol.a[j] + kTol;
        const bool highOk = sol.a[j] <= base + span * free + kTol;
        if (!lowOk || !highOk) {
          std::ostringstream msg;
          msg << "arc (" << i << "," << j << ") interval " << h;
          FamilyRecorder::fail(propagation, msg.str());
        }
      }
    }
  }

  auto& intervalId = rec.open("interval_identification");
  for (std::size_t i = 1; i <= n; ++i) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t j = 1; j < N; ++j) {
      for (std::size_t h = 0; h < in.H; ++h) {
        lo += in.Tbar * static_cast<double>(h) * X(i, j, h);
        hi += in.Tbar * static_cast<double>(h + 1) * X(i, j, h);
      }
    }
    if (!(lo <= sol.a[i] + kTol && sol.a[i] < hi))
      FamilyRecorder::fail(intervalId, "customer " + std::to_string(i) + " departs outside its interval");
  }

  auto& horizonFamily = rec.open("horizon");
  if (!(sol.a[last] < span))
    FamilyRecorder::fail(horizonFamily, "arrival " + std::to_string(sol.a[last]) + " >= horizon");

  return report;
}

double lowerBound(const Instance& in) {
  double first = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j <= in.n; ++j) first = std::min(first, in.t(0, j, 0));
  double sum = first;
  for (std::size_t i = 1; i <= in.n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < in.nodes(); ++j) {
      if (j == i) continue;
      for (std::size_t h = 0; h < in.H; ++h) best = std::min(best, in.t(i, j, h));
    }
    sum += best;
  }
  return sum;
}

OracleResult bruteForce(const Instance& instance) {
  instance.validate();
  if (instance.n > kMaxOracleCustomers) {
    double perms = 1.0;
    for (std::size_t k = 2; k <= instance.n; ++k) perms *= static_cast<double>(k);
    throw GuardExceeded("tdtsp oracle: n = " + std::to_string(instance.n) + " exceeds " +
                            std::to_string(kMaxOracleCustomers),
                        perms, 3628800.0);
  }
  std::vector<std::size_t> perm(instance.n);
  std::iota(perm.begin(), perm.end(), std::size_t{1});
  OracleResult best;
  best.bestCost = std::numeric_limits<double>::infinity();
  do {
    ++best.evaluated;
    const double cost = runRoute(instance, perm, nullptr);
    if (cost < best.bestCost) {
      best.bestCost = cost;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::pair<double, double> serviceBand(std::size_t n) {
  if (n <= 14) return {1800.0, 2700.0};
  if (n <= 24) return {900.0, 1500.0};
  if (n <= 54) return {360.0, 600.0};
  if (n <= 84) return {180.0, 360.0};
  return {120.0, 240.0};
}

Instance generate(const GeneratorOptions& options) {
  if (options.n == 0 || options.H == 0) throw std::invalid_argument("generator needs n >= 1 and H >= 1");
  if (!(options.horizon > 0.0)) throw std::invalid_argument("generator needs a positive horizon");
  if (!(options.travelMin >= 0.0 && options.travelMin <= options.travelMax))
    throw std::invalid_argument("generator needs 0 <= travelMin <= travelMax");

  std::mt19937_64 rng(options.seed);
  Instance in;
  in.n = options.n;
  in.H = options.H;
  in.Tbar = options.horizon / static_cast<double>(options.H);
  in.seed = options.seed;
  const std::size_t N = in.nodes();
  const std::size_t last = in.terminal();

  const auto [sLo, sHi] = serviceBand(options.n);
  std::uniform_int_distribution<long> serviceDist(std::lround(sLo), std::lround(sHi));
  in.service.assign(N, 0.0);
  for (std::size_t i = 1; i <= in.n; ++i) in.service[i] = static_cast<double>(serviceDist(rng));

  std::uniform_int_distribution<long> travelDist(std::lround(options.travelMin),
                                                 std::lround(options.travelMax));
  in.travel.assign(in.H * N * N, 0.0);
  for (std::size_t h = 0; h < in.H; ++h) {
    for (std::size_t i = 0; i < last; ++i) {
      for (std::size_t j = 0; j < last; ++j) {
        if (i != j) in.t(i, j, h) = static_cast<double>(travelDist(rng));
      }
    }
    for (std::size_t k = 0; k < last; ++k) {
      in.t(last, k, h) = in.t(0, k, h);
      in.t(k, last, h) = in.t(k, 0, h);
    }
    in.t(last, last, h) = 0.0;
  }
  in.validate();
  return in;
}

TdTspDecoder::TdTspDecoder(Instance instance) : instance_(std::move(instance)) {
  instance_.validate();
}

double TdTspDecoder::decode(std::span<const double> keys) const {
  if (keys.size() != instance_.n) throw std::invalid_argument("tdtsp decode: key length must be n");
  const auto order = orderByKeys(keys);
  return runRoute(instance_, order, nullptr);
}

}  // namespace rko::tdtsp
