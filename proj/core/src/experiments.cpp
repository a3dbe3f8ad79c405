#include "rko/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <system_error>

#include "rko/errors.hpp"

namespace rko::experiments {

std::vector<RunReport> solveSeeds(const Decoder& decoder, const SearcherList& searchers,
                                  RunBudget base, std::size_t runs, const EnsembleOptions& options) {
  if (runs == 0) throw std::invalid_argument("need at least one seed");
  std::vector<RunReport> out;
  out.reserve(runs);
  for (std::size_t s = 1; s <= runs; ++s) {
    base.masterSeed = s;
    out.push_back(runEnsemble(decoder, searchers, base, options));
  }
  return out;
}

// ------------------------------------------------------------ RPD

double rpd(double ofv, double ub) {
  if (!std::isfinite(ofv) || !std::isfinite(ub)) throw std::invalid_argument("rpd: non-finite value");
  if (ub == 0.0) throw std::invalid_argument("rpd: reference UB must be nonzero");
  return (ofv / ub - 1.0) * 100.0;
}

RpdRecord summarizeRpd(std::string instanceId, std::span<const double> ofvs,
                       std::span<const double> timesToBest, double referenceUB) {
  if (ofvs.empty()) throw std::invalid_argument("summarizeRpd: no runs");
  if (timesToBest.size() != ofvs.size())
    throw std::invalid_argument("summarizeRpd: one time-to-best per run expected");
  RpdRecord r;
  r.instanceId = std::move(instanceId);
  r.referenceUB = referenceUB;
  r.runs = ofvs.size();
  r.bestOfv = *std::min_element(ofvs.begin(), ofvs.end());
  r.rpdBest = rpd(r.bestOfv, referenceUB);
  double sum = 0.0;
  for (const double z : ofvs) sum += rpd(z, referenceUB);
  r.rpdAvg = sum / static_cast<double>(r.runs);
  r.timeToBestAvg =
      std::accumulate(timesToBest.begin(), timesToBest.end(), 0.0) / static_cast<double>(r.runs);
  return r;
}

// ------------------------------------------------------------ TTT

double targetFromPercent(double reference, double percentAbove) {
  return reference + std::abs(reference) * percentAbove / 100.0;
}

std::size_t TttRecord::censoredCount() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [](const TttPoint& p) { return p.censored; }));
}

TttRecord buildTtt(double target, double limit, std::span<const std::optional<double>> hits) {
  if (hits.empty()) throw std::invalid_argument("buildTtt: need at least one repetition");
  if (!(limit > 0.0)) throw std::invalid_argument("buildTtt: limit must be positive");
  TttRecord rec;
  rec.target = target;
  rec.limit = limit;
  rec.points.reserve(hits.size());
  for (const auto& h : hits) {
    if (h) {
      if (*h < 0.0 || *h > limit) throw std::invalid_argument("buildTtt: hit time outside [0, limit]");
      rec.points.push_back({*h, false, 0.0});
    } else {
      rec.points.push_back({limit, true, 0.0});
    }
  }
  std::stable_sort(rec.points.begin(), rec.points.end(), [](const TttPoint& a, const TttPoint& b) {
    if (a.seconds != b.seconds) return a.seconds < b.seconds;
    return !a.censored && b.censored;
  });
  const double R = static_cast<double>(rec.points.size());
  for (std::size_t i = 0; i < rec.points.size(); ++i)
    rec.points[i].probability = (static_cast<double>(i) + 0.5) / R;
  return rec;
}

std::optional<double> timeToTarget(const RunReport& report, double target) {
  for (const auto& p : report.trace)
    if (p.cost <= target) return p.seconds;
  return std::nullopt;
}

// ------------------------------------------------------------ profiles

namespace {

std::string joinNames(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

}  // namespace

MissingReference::MissingReference(std::vector<std::string> instances)
    : std::invalid_argument("missing reference for: " + joinNames(instances)),
      instances_(std::move(instances)) {}

double rho(std::span<const double> factors, double tau) {
  if (factors.empty()) return 0.0;
  const auto hit = std::count_if(factors.begin(), factors.end(),
                                 [tau](double q) { return q <= tau + 1e-12; });
  return static_cast<double>(hit) / static_cast<double>(factors.size());
}

std::vector<ProfileRecord> buildProfiles(std::span<const MethodResult> results,
                                         const std::map<std::string, Reference>& references,
                                         std::span<const double> taus) {
  std::set<std::string> instances;
  std::set<std::string> methods;
  std::map<std::pair<std::string, std::string>, double> best;
  for (const auto& r : results) {
    if (!std::isfinite(r.value) || r.value <= 0.0)
      throw std::invalid_argument("profile: objective of " + r.method + " on " + r.instance +
                                  " must be positive and finite");
    instances.insert(r.instance);
    methods.insert(r.method);
    const auto key = std::make_pair(r.instance, r.method);
    const auto it = best.find(key);
    if (it == best.end() || r.value < it->second) best[key] = r.value;
  }

  std::vector<std::string> missing;
  for (const auto& p : instances)
    if (!references.contains(p)) missing.push_back(p);
  if (!missing.empty()) throw MissingReference(std::move(missing));
  for (const auto& p : instances) {
    const Reference& ref = references.at(p);
    if (!(ref.best > 0.0) || !(ref.lowerBound > 0.0))
      throw std::invalid_argument("profile: references of " + p + " must be positive");
  }
  for (std::size_t i = 1; i < taus.size(); ++i)
    if (taus[i] < taus[i - 1]) throw std::invalid_argument("profile: tau values must be sorted");

  std::vector<ProfileRecord> out;
  for (const auto& m : methods) {
    ProfileRecord rec;
    rec.method = m;
    rec.instances.assign(instances.begin(), instances.end());
    for (const auto& p : rec.instances) {
      const Reference& ref = references.at(p);
      const auto it = best.find({p, m});
      if (it == best.end()) {
        rec.qBest.push_back(std::numeric_limits<double>::infinity());
        rec.qLb.push_back(std::numeric_limits<double>::infinity());
        continue;
      }
      rec.qBest.push_back(it->second / ref.best);
      rec.qLb.push_back(1.0 + (it->second - ref.lowerBound) / ref.lowerBound);
    }
    rec.taus.assign(taus.begin(), taus.end());
    for (const double t : taus) {
      rec.rhoBest.push_back(rho(rec.qBest, t));
      rec.rhoLb.push_back(rho(rec.qLb, t));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

// ------------------------------------------------------------ frontier

std::vector<std::size_t> dominatedPoints(std::span<const FrontierPoint> points, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i == j) continue;
      const auto& a = points[j];
      const auto& b = points[i];
      const bool noWorse = a.risk <= b.risk + tol && a.expectedReturn >= b.expectedReturn - tol;
      const bool better = a.risk < b.risk - tol || a.expectedReturn > b.expectedReturn + tol;
      if (noWorse && better) {
        out.push_back(i);
        break;
      }
    }
  }
  return out;
}

// ------------------------------------------------------------ CSV writers

namespace {

std::string schemaLine(std::string_view schema) { return fmt::format("# {} v1\n", schema); }

}  // namespace

std::string runsCsv(std::string_view instanceId, std::span<const RunReport> runs, bool timing) {
  std::string out = schemaLine(kRunsSchema);
  out += timing ? "instance,seed,best_cost,time_to_best,calls_to_best,decoder_calls,elapsed,found_by\n"
                : "instance,seed,best_cost,calls_to_best,decoder_calls,found_by\n";
  for (const auto& r : runs) {
    if (timing)
      out += fmt::format("{},{},{:.10f},{:.6f},{},{},{:.6f},{}\n", instanceId, r.seed, r.bestCost,
                         r.timeToBest, r.callsToBest, r.decoderCalls, r.elapsed, r.searcherId);
    else
      out += fmt::format("{},{},{:.10f},{},{},{}\n", instanceId, r.seed, r.bestCost, r.callsToBest,
                         r.decoderCalls, r.searcherId);
  }
  return out;
}

std::string rpdCsv(std::span<const RpdRecord> records) {
  std::string out = schemaLine(kRpdSchema);
  out += "instance,reference_ub,best_ofv,rpd_best,rpd_avg,time_to_best_avg,runs\n";
  for (const auto& r : records)
    out += fmt::format("{},{:.10f},{:.10f},{:.6f},{:.6f},{:.6f},{}\n", r.instanceId, r.referenceUB,
                       r.bestOfv, r.rpdBest, r.rpdAvg, r.timeToBestAvg, r.runs);
  return out;
}

std::string tttCsv(const TttRecord& record) {
  std::string out = schemaLine(kTttSchema);
  out += fmt::format("# target={:.10f} limit={:.6f}\n", record.target, record.limit);
  out += "rank,seconds,censored,probability\n";
  for (std::size_t i = 0; i < record.points.size(); ++i) {
    const auto& p = record.points[i];
    out += fmt::format("{},{:.6f},{},{:.6f}\n", i + 1, p.seconds, p.censored ? 1 : 0, p.probability);
  }
  return out;
}

std::string frontierCsv(std::span<const FrontierPoint> points) {
  std::string out = schemaLine(kFrontierSchema);
  out += "lambda,risk,return,cost,feasible\n";
  for (const auto& p : points)
    out += fmt::format("{:.6f},{:.10f},{:.10f},{:.10f},{}\n", p.lambda, p.risk, p.expectedReturn,
                       p.cost, p.feasible ? 1 : 0);
  return out;
}

std::string profileCsv(std::span<const ProfileRecord> records) {
  std::string out = schemaLine(kProfileSchema);
  out += "method,tau,rho_best,rho_lb\n";
  for (const auto& r : records)
    for (std::size_t k = 0; k < r.taus.size(); ++k)
      out += fmt::format("{},{:.6f},{:.6f},{:.6f}\n", r.method, r.taus[k], r.rhoBest[k], r.rhoLb[k]);
  return out;
}

// ------------------------------------------------------------ CSV reader

namespace {

std::vector<std::string> splitFields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    std::string_view f = line.substr(start, comma == std::string_view::npos ? comma : comma - start);
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
    out.emplace_back(f);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

CsvTable parseCsv(std::string_view text) {
  CsvTable t;
  std::size_t pos = 0;
  std::size_t lineNo = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    auto fields = splitFields(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size())
      throw ParseError("line " + std::to_string(lineNo),
                       fmt::format("expected {} fields, found {}", t.header.size(), fields.size()));
    t.rows.push_back(std::move(fields));
  }
  if (t.header.empty()) throw ParseError("line 1", "missing CSV header");
  return t;
}

std::size_t CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ParseError("header", "missing column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

const std::string& CsvTable::text(std::size_t row, std::string_view name) const {
  return rows.at(row).at(column(name));
}

double CsvTable::number(std::size_t row, std::string_view name) const {
  const std::string& s = text(row, name);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(fmt::format("row {} column {}", row + 1, name), "not a number: '" + s + "'");
  return v;
}

std::vector<MethodResult> parseResults(std::string_view csv) {
  const CsvTable t = parseCsv(csv);
  std::vector<MethodResult> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    out.push_back({t.text(r, "instance"), t.text(r, "method"), t.number(r, "value")});
  return out;
}

std::map<std::string, Reference> parseReferences(std::string_view csv) {
  const CsvTable t = parseCsv(csv);
  std::map<std::string, Reference> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::string& id = t.text(r, "instance");
    if (out.contains(id)) throw ParseError(fmt::format("row {}", r + 1), "duplicate instance " + id);
    out[id] = {t.number(r, "best"), t.number(r, "lb")};
  }
  return out;
}

}  // namespace rko::experiments
