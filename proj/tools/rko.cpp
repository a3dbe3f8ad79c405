// rko: command-line driver for the random-key optimizer.
//
// Exit codes: 0 success, 2 parse or validation error, 3 oracle guard or
// budget refusal.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rko/ensemble.hpp"
#include "rko/errors.hpp"
#include "rko/experiments.hpp"
#include "rko/instance_io.hpp"
#include "rko/mip.hpp"
#include "rko/portfolio.hpp"
#include "rko/searchers.hpp"
#include "rko/tdtsp.hpp"

namespace {

using nlohmann::json;
using rko::io::ProblemKind;
namespace ex = rko::experiments;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitRefused = 3;

// Deterministic runs need a call budget; wall-clock cut-offs are not reproducible.
constexpr std::uint64_t kDefaultDeterministicCalls = 20000;

struct ProblemOptions {
  std::string path;
  std::string kind;
  bool orlib = false;
  std::size_t K = 0;
  double lambda = 0.3;
  double lower = 0.01;
  double upper = 0.25;
};

void addProblemOptions(CLI::App* cmd, ProblemOptions& o) {
  cmd->add_option("--instance", o.path, "Instance file")->required();
  cmd->add_option("--kind", o.kind, "Problem kind")
      ->required()
      ->check(CLI::IsMember({"mip", "portfolio", "tdtsp"}));
  cmd->add_flag("--orlib", o.orlib, "Portfolio instance is an OR-Library text file");
  cmd->add_option("--K", o.K, "Cardinality (OR-Library input, or override)");
  cmd->add_option("--lambda", o.lambda, "Risk weight (OR-Library input)");
  cmd->add_option("--lower", o.lower, "Lower weight bound (OR-Library input)");
  cmd->add_option("--upper", o.upper, "Upper weight bound (OR-Library input)");
}

/// A loaded instance together with its decoder.
struct Problem {
  ProblemKind kind;
  std::variant<rko::io::MipParse, rko::portfolio::Instance, rko::tdtsp::Instance> data;
  std::unique_ptr<rko::Decoder> decoder;

  std::size_t size() const {
    switch (kind) {
      case ProblemKind::Mip: return std::get<rko::io::MipParse>(data).instance.n;
      case ProblemKind::Portfolio: return std::get<rko::portfolio::Instance>(data).n;
      case ProblemKind::TdTsp: return std::get<rko::tdtsp::Instance>(data).n;
    }
    return 0;
  }

  // Decoded solution of `keys` for the result JSON.
  json describe(std::span<const double> keys) const {
    json out;
    switch (kind) {
      case ProblemKind::Mip: {
        const auto& p = std::get<rko::io::MipParse>(data);
        const auto a = rko::mip::decode(p.instance, p.penalty, keys);
        const auto f = rko::mip::checkFeasibility(p.instance, a.x);
        out["x"] = a.x;
        out["cost"] = a.cost;
        out["objective"] = rko::mip::linearCost(p.instance, a.x);
        out["feasible"] = f.feasible;
        out["violated_rows"] = f.violatedRows;
        break;
      }
      case ProblemKind::Portfolio: {
        const auto& in = std::get<rko::portfolio::Instance>(data);
        const auto s = rko::portfolio::decode(in, keys);
        out["assets"] = s.selected;
        std::vector<double> weights;
        for (const auto id : s.selected) weights.push_back(s.w[id - 1]);
        out["weights"] = weights;
        out["cost"] = s.cost;
        out["penalty"] = s.penalty;
        out["risk"] = rko::portfolio::risk(in, s.w);
        out["return"] = rko::portfolio::expectedReturn(in, s.w);
        out["feasible"] = rko::portfolio::check(in, s).feasible();
        break;
      }
      case ProblemKind::TdTsp: {
        const auto& in = std::get<rko::tdtsp::Instance>(data);
        const auto s = rko::tdtsp::decode(in, keys);
        out["permutation"] = s.permutation;
        out["departures"] = s.a;
        out["travel_cost"] = s.travelCost;
        out["cost"] = s.cost;
        out["penalized"] = s.penalized;
        out["feasible"] = rko::tdtsp::check(in, s).feasible();
        break;
      }
    }
    return out;
  }
};

Problem loadProblem(const ProblemOptions& o) {
  Problem p{rko::io::parseProblemKind(o.kind), {}, nullptr};
  const std::string text = rko::io::readFile(o.path);
  switch (p.kind) {
    case ProblemKind::Mip: {
      auto parsed = rko::io::parseMip(text);
      p.decoder = std::make_unique<rko::mip::MipDecoder>(parsed.instance, parsed.penalty);
      p.data = std::move(parsed);
      break;
    }
    case ProblemKind::Portfolio: {
      rko::portfolio::Instance in;
      if (o.orlib) {
        const auto lib = rko::io::parseOrLibPortfolio(text);
        if (o.K == 0) throw std::invalid_argument("--K is required with --orlib");
        in = rko::portfolio::makeInstance(lib.mean, lib.sigma, o.lambda, o.K, o.lower, o.upper);
      } else {
        in = rko::io::parsePortfolio(text);
        if (o.K != 0) {
          in.K = o.K;
          in.validate();
        }
      }
      p.decoder = std::make_unique<rko::portfolio::PortfolioDecoder>(in);
      p.data = std::move(in);
      break;
    }
    case ProblemKind::TdTsp: {
      auto parsed = rko::io::parseTdTsp(text);
      for (const auto& w : parsed.warnings) fmt::print(stderr, "warning: {}\n", w);
      p.decoder = std::make_unique<rko::tdtsp::TdTspDecoder>(parsed.instance);
      p.data = std::move(parsed.instance);
      break;
    }
  }
  return p;
}

struct RunOptions {
  std::string searchers = "brkga,sa,ils,vns";
  std::size_t seeds = 5;
  std::optional<double> timeLimit;
  std::optional<std::uint64_t> decoderCalls;
  bool deterministic = false;
};

void addRunOptions(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--searchers", o.searchers, "Comma-separated searchers (brkga, sa, ils, vns)");
  cmd->add_option("--seeds", o.seeds, "Number of runs; seeds are 1..R")->check(CLI::PositiveNumber);
  cmd->add_option("--time-limit", o.timeLimit, "Seconds per run (default: size schedule)");
  cmd->add_option("--decoder-calls", o.decoderCalls, "Decoder calls per run");
  cmd->add_flag("--deterministic", o.deterministic, "Single execution token; reproducible runs");
}

rko::RunBudget makeBudget(const RunOptions& o, const Problem& p) {
  rko::RunBudget b;
  if (o.deterministic) {
    if (o.timeLimit)
      throw std::invalid_argument("--deterministic takes a --decoder-calls budget, not --time-limit");
    b.decoderCalls = o.decoderCalls.value_or(kDefaultDeterministicCalls);
  } else {
    b.decoderCalls = o.decoderCalls;
    if (o.timeLimit) b.wallClockSeconds = *o.timeLimit;
    else if (!o.decoderCalls) b.wallClockSeconds = rko::io::budgetFor(p.kind, p.size());
  }
  b.validate();
  return b;
}

rko::EnsembleOptions ensembleOptions(const RunOptions& o) {
  rko::EnsembleOptions e;
  e.deterministic = o.deterministic;
  return e;
}

void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") std::cout << contents;
  else rko::io::writeFile(path, contents);
}

std::vector<double> parseNumberList(const std::string& list) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    const std::string item = list.substr(start, comma - start);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) throw std::invalid_argument("not a number list: '" + list + "'");
    out.push_back(v);
    start = comma + 1;
  }
  return out;
}

// ------------------------------------------------------------ subcommands

int cmdSolve(const ProblemOptions& po, const RunOptions& ro, const std::string& csvPath,
             const std::string& jsonPath) {
  const Problem p = loadProblem(po);
  const auto budget = makeBudget(ro, p);
  const auto searchers = rko::parseSearchers(ro.searchers);
  const auto runs = ex::solveSeeds(*p.decoder, searchers, budget, ro.seeds, ensembleOptions(ro));
  const bool timing = !ro.deterministic;

  json result;
  result["instance"] = po.path;
  result["kind"] = po.kind;
  result["searchers"] = ro.searchers;
  result["deterministic"] = ro.deterministic;
  if (budget.wallClockSeconds) result["time_limit"] = *budget.wallClockSeconds;
  if (budget.decoderCalls) result["decoder_calls"] = *budget.decoderCalls;
  json jruns = json::array();
  std::size_t bestIdx = 0;
  double sum = 0.0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& run = runs[r];
    json j;
    j["seed"] = run.seed;
    j["best_cost"] = run.bestCost;
    j["calls_to_best"] = run.callsToBest;
    j["decoder_calls"] = run.decoderCalls;
    j["found_by"] = run.searcherId;
    if (timing) {
      j["time_to_best"] = run.timeToBest;
      j["elapsed"] = run.elapsed;
    }
    j["solution"] = p.describe(run.bestVector.view());
    jruns.push_back(std::move(j));
    sum += run.bestCost;
    if (run.bestCost < runs[bestIdx].bestCost) bestIdx = r;
  }
  result["runs"] = std::move(jruns);
  result["best_cost"] = runs[bestIdx].bestCost;
  result["mean_cost"] = sum / static_cast<double>(runs.size());
  result["best_solution"] = p.describe(runs[bestIdx].bestVector.view());

  if (!csvPath.empty()) rko::io::writeFile(csvPath, ex::runsCsv(std::filesystem::path(po.path).stem().string(), runs, timing));
  emit(jsonPath, result.dump(2) + "\n");
  return kExitOk;
}

int cmdRpd(const std::string& runsPath, double ub, const std::string& out) {
  const auto table = ex::parseCsv(rko::io::readFile(runsPath));
  if (table.rows.empty()) throw std::invalid_argument("no runs in " + runsPath);
  const bool hasTime = std::find(table.header.begin(), table.header.end(), "time_to_best") != table.header.end();
  std::vector<double> ofv;
  std::vector<double> ttb;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    ofv.push_back(table.number(r, "best_cost"));
    ttb.push_back(hasTime ? table.number(r, "time_to_best") : 0.0);
  }
  const auto rec = ex::summarizeRpd(table.text(0, "instance"), ofv, ttb, ub);
  emit(out, ex::rpdCsv(std::span(&rec, 1)));
  return kExitOk;
}

int cmdTtt(const ProblemOptions& po, RunOptions ro, double reference, double percent,
           std::size_t reps, const std::string& out) {
  const Problem p = loadProblem(po);
  ro.seeds = reps;
  auto budget = makeBudget(ro, p);
  const double target = ex::targetFromPercent(reference, percent);
  budget.targetCost = target;
  const double limit = budget.wallClockSeconds.value_or(0.0);
  if (!(limit > 0.0)) throw std::invalid_argument("ttt needs a wall-clock budget");
  const auto runs = ex::solveSeeds(*p.decoder, rko::parseSearchers(ro.searchers), budget, reps,
                                   ensembleOptions(ro));
  std::vector<std::optional<double>> hits;
  for (const auto& r : runs) {
    auto t = ex::timeToTarget(r, target);
    if (t && *t > limit) t.reset();
    hits.push_back(t);
  }
  emit(out, ex::tttCsv(ex::buildTtt(target, limit, hits)));
  return kExitOk;
}

int cmdFrontier(const ProblemOptions& po, const RunOptions& ro, const std::string& lambdas,
                const std::string& out) {
  if (po.kind != "portfolio") throw std::invalid_argument("frontier needs --kind portfolio");
  const Problem base = loadProblem(po);
  auto in = std::get<rko::portfolio::Instance>(base.data);
  const auto searchers = rko::parseSearchers(ro.searchers);
  std::vector<ex::FrontierPoint> points;
  for (const double lambda : parseNumberList(lambdas)) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda values must lie in (0,1)");
    in.lambda = lambda;
    const rko::portfolio::PortfolioDecoder decoder(in);
    Problem p{ProblemKind::Portfolio, in, nullptr};
    const auto runs = ex::solveSeeds(decoder, searchers, makeBudget(ro, p), ro.seeds, ensembleOptions(ro));
    const auto best = std::min_element(runs.begin(), runs.end(), [](const auto& a, const auto& b) {
      return a.bestCost < b.bestCost;
    });
    const auto s = rko::portfolio::decode(in, best->bestVector.view());
    points.push_back({lambda, rko::portfolio::risk(in, s.w), rko::portfolio::expectedReturn(in, s.w),
                      s.cost, rko::portfolio::check(in, s).feasible()});
  }
  emit(out, ex::frontierCsv(points));
  return kExitOk;
}

int cmdProfile(const std::string& results, const std::string& references, const std::string& taus,
               const std::string& out) {
  const auto r = ex::parseResults(rko::io::readFile(results));
  const auto refs = ex::parseReferences(rko::io::readFile(references));
  const auto t = parseNumberList(taus);
  emit(out, ex::profileCsv(ex::buildProfiles(r, refs, t)));
  return kExitOk;
}

int cmdOracle(const ProblemOptions& po, double grid, const std::string& out) {
  const Problem p = loadProblem(po);
  json j;
  j["kind"] = po.kind;
  switch (p.kind) {
    case ProblemKind::Mip: {
      const auto r = rko::mip::bruteForce(std::get<rko::io::MipParse>(p.data).instance);
      j["feasible"] = r.feasible;
      if (r.feasible) {
        j["optimum"] = r.bestCost;
        j["x"] = r.bestX;
      }
      j["evaluated"] = r.evaluated;
      break;
    }
    case ProblemKind::Portfolio: {
      const auto& in = std::get<rko::portfolio::Instance>(p.data);
      const auto r = rko::portfolio::bruteForce(in, grid);
      j["optimum"] = r.bestCost;
      j["assets"] = r.selected;
      j["w"] = r.w;
      j["grid_step"] = grid;
      j["resolution_bound"] = rko::portfolio::gridResolutionBound(in, grid);
      j["evaluated"] = r.evaluated;
      break;
    }
    case ProblemKind::TdTsp: {
      const auto& in = std::get<rko::tdtsp::Instance>(p.data);
      const auto r = rko::tdtsp::bruteForce(in);
      j["optimum"] = r.bestCost;
      j["permutation"] = r.permutation;
      j["lower_bound"] = rko::tdtsp::lowerBound(in);
      j["evaluated"] = r.evaluated;
      break;
    }
  }
  emit(out, j.dump(2) + "\n");
  return kExitOk;
}

int cmdGenerate(const rko::tdtsp::GeneratorOptions& g, const std::string& out) {
  emit(out, rko::io::writeTdTsp(rko::tdtsp::generate(g)));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-key optimizer: ensemble metaheuristics over problem-specific decoders"};
  app.require_subcommand(1);

  ProblemOptions po;
  RunOptions ro;
  std::string out;
  std::string csv;

  auto* solve = app.add_subcommand("solve", "Multi-seed ensemble runs");
  addProblemOptions(solve, po);
  addRunOptions(solve, ro);
  solve->add_option("--out", out, "Result JSON (default: stdout)");
  solve->add_option("--csv", csv, "Per-run CSV");

  std::string runsPath;
  double ub = 0.0;
  auto* rpd = app.add_subcommand("rpd", "Relative percentage deviation from a solve CSV");
  rpd->add_option("--runs", runsPath, "Per-run CSV written by solve")->required();
  rpd->add_option("--ub", ub, "Reference upper bound")->required();
  rpd->add_option("--out", out, "Output CSV (default: stdout)");

  double reference = 0.0;
  double percent = 0.0;
  std::size_t reps = 20;
  auto* ttt = app.add_subcommand("ttt", "Time-to-target repetitions");
  addProblemOptions(ttt, po);
  addRunOptions(ttt, ro);
  ttt->add_option("--reference", reference, "Reference objective")->required();
  ttt->add_option("--target-percent", percent, "Target: percent above the reference");
  ttt->add_option("--reps", reps, "Repetitions (seeds 1..reps)")->check(CLI::PositiveNumber);
  ttt->add_option("--out", out, "Output CSV (default: stdout)");

  std::string lambdas = "0.1,0.3,0.5,0.7,0.9";
  auto* frontier = app.add_subcommand("frontier", "Efficient frontier over a lambda sweep");
  addProblemOptions(frontier, po);
  addRunOptions(frontier, ro);
  frontier->add_option("--lambdas", lambdas, "Comma-separated lambda values in (0,1)");
  frontier->add_option("--out", out, "Output CSV (default: stdout)");

  std::string results;
  std::string references;
  std::string taus = "1,1.01,1.05,1.1,1.5,2";
  auto* profile = app.add_subcommand("profile", "Quality performance profiles");
  profile->add_option("--results", results, "CSV with instance,method,value")->required();
  profile->add_option("--references", references, "CSV with instance,best,lb")->required();
  profile->add_option("--taus", taus, "Comma-separated, nondecreasing tau values");
  profile->add_option("--out", out, "Output CSV (default: stdout)");

  double grid = 1e-3;
  auto* oracle = app.add_subcommand("oracle", "Exhaustive reference optimum for small instances");
  addProblemOptions(oracle, po);
  oracle->add_option("--grid", grid, "Portfolio weight grid step");
  oracle->add_option("--out", out, "Output JSON (default: stdout)");

  rko::tdtsp::GeneratorOptions gen;
  auto* generate = app.add_subcommand("generate", "Synthetic TD-TSP instance");
  generate->add_option("--n", gen.n, "Customers")->check(CLI::PositiveNumber);
  generate->add_option("--H", gen.H, "Intervals")->check(CLI::PositiveNumber);
  generate->add_option("--horizon", gen.horizon, "Planning horizon in seconds");
  generate->add_option("--travel-min", gen.travelMin, "Smallest travel time");
  generate->add_option("--travel-max", gen.travelMax, "Largest travel time");
  generate->add_option("--seed", gen.seed, "Generator seed");
  generate->add_option("--out", out, "Output JSON (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*solve) return cmdSolve(po, ro, csv, out);
    if (*rpd) return cmdRpd(runsPath, ub, out);
    if (*ttt) return cmdTtt(po, ro, reference, percent, reps, out);
    if (*frontier) return cmdFrontier(po, ro, lambdas, out);
    if (*profile) return cmdProfile(results, references, taus, out);
    if (*oracle) return cmdOracle(po, grid, out);
    if (*generate) return cmdGenerate(gen, out);
  } catch (const rko::GuardExceeded& e) {
    fmt::print(stderr, "refused: {}\n", e.what());
    return kExitRefused;
  } catch (const rko::ParseError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return kExitOk;
}
