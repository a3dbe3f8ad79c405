#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rko/decoder.hpp"
#include "rko/ensemble.hpp"
#include "rko/search_context.hpp"

namespace rko::experiments {

/// One runEnsemble per seed, seeds 1..runs. `base` supplies the limits; its
/// masterSeed is overwritten.
std::vector<RunReport> solveSeeds(const Decoder& decoder, const SearcherList& searchers,
                                  RunBudget base, std::size_t runs,
                                  const EnsembleOptions& options = {});

// ------------------------------------------------------------ RPD

/// (ofv / ub - 1) * 100, applied verbatim for negative references too.
/// Throws std::invalid_argument when ub is zero or either value is not finite.
double rpd(double ofv, double ub);

struct RpdRecord {
  std::string instanceId;
  double referenceUB = 0.0;
  double bestOfv = 0.0;       // smallest objective over the runs
  double rpdBest = 0.0;       // rpd of the best run
  double rpdAvg = 0.0;        // mean rpd over the runs
  double timeToBestAvg = 0.0;
  std::size_t runs = 0;
};

RpdRecord summarizeRpd(std::string instanceId, std::span<const double> ofvs,
                       std::span<const double> timesToBest, double referenceUB);

// ------------------------------------------------------------ TTT

/// Target for a time-to-target run: `percentAbove` percent worse than the
/// reference, in the minimization sense (reference + |reference| * p / 100).
double targetFromPercent(double reference, double percentAbove);

struct TttPoint {
  double seconds = 0.0;
  bool censored = false;
  double probability = 0.0;  // (i - 1/2) / R for the i-th sorted time
};

struct TttRecord {
  double target = 0.0;
  double limit = 0.0;
  std::vector<TttPoint> points;  // sorted by time, censored runs last among ties

  std::size_t censoredCount() const;
  std::size_t uncensoredCount() const { return points.size() - censoredCount(); }
};

/// `hits[r]` holds the time run r needed to reach the target, or nothing when
/// the budget ran out first; such runs are recorded at `limit`. Throws
/// std::invalid_argument on an empty set or a hit later than the limit.
TttRecord buildTtt(double target, double limit, std::span<const std::optional<double>> hits);

/// Time-to-target of one run: first trace point at or below the target.
std::optional<double> timeToTarget(const RunReport& report, double target);

// ------------------------------------------------------------ profiles

struct MethodResult {
  std::string instance;
  std::string method;
  double value = 0.0;
};

struct Reference {
  double best = 0.0;        // best-known objective
  double lowerBound = 0.0;  // proven lower bound
};

/// Raised when references do not cover the result set; lists the instances.
class MissingReference : public std::invalid_argument {
 public:
  explicit MissingReference(std::vector<std::string> instances);
  const std::vector<std::string>& instances() const noexcept { return instances_; }

 private:
  std::vector<std::string> instances_;
};

struct ProfileRecord {
  std::string method;
  std::vector<std::string> instances;  // sorted
  std::vector<double> qBest;           // z / z_best, +inf when the method has no result
  std::vector<double> qLb;             // 1 + (z - LB) / LB
  std::vector<double> taus;
  std::vector<double> rhoBest;
  std::vector<double> rhoLb;
};

/// Fraction of factors not above tau (1e-12 slack for exact ties).
double rho(std::span<const double> factors, double tau);

/// One record per method. Repeated (instance, method) entries keep the
/// smallest value. Objectives and references must be positive.
std::vector<ProfileRecord> buildProfiles(std::span<const MethodResult> results,
                                         const std::map<std::string, Reference>& references,
                                         std::span<const double> taus);

// ------------------------------------------------------------ frontier

struct FrontierPoint {
  double lambda = 0.0;
  double risk = 0.0;
  double expectedReturn = 0.0;
  double cost = 0.0;
  bool feasible = true;
};

/// Indices of points dominated in (risk, -return) by another point.
std::vector<std::size_t> dominatedPoints(std::span<const FrontierPoint> points, double tol = 1e-12);

// ------------------------------------------------------------ CSV

/// Headers are preceded by a "# <schema> v1" line. Times and percentages are
/// written with 6 decimals, objective values with 10.
inline constexpr std::string_view kRunsSchema = "rko-runs";
inline constexpr std::string_view kRpdSchema = "rko-rpd";
inline constexpr std::string_view kTttSchema = "rko-ttt";
inline constexpr std::string_view kFrontierSchema = "rko-frontier";
inline constexpr std::string_view kProfileSchema = "rko-profile";

/// Per-run table. Without timing the wall-clock columns are left out so that
/// deterministic runs produce identical bytes.
std::string runsCsv(std::string_view instanceId, std::span<const RunReport> runs, bool timing);
std::string rpdCsv(std::span<const RpdRecord> records);
std::string tttCsv(const TttRecord& record);
std::string frontierCsv(std::span<const FrontierPoint> points);
std::string profileCsv(std::span<const ProfileRecord> records);

/// Minimal CSV reader for the files above: '#' lines are skipped, the first
/// remaining line is the header. Throws ParseError with line numbers.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws ParseError when absent
  double number(std::size_t row, std::string_view name) const;
  const std::string& text(std::size_t row, std::string_view name) const;
};

CsvTable parseCsv(std::string_view text);

/// "instance,method,value" rows.
std::vector<MethodResult> parseResults(std::string_view csv);
/// "instance,best,lb" rows.
std::map<std::string, Reference> parseReferences(std::string_view csv);

}  // namespace rko::experiments
