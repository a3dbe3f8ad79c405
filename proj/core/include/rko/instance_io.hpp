#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rko/mip.hpp"
#include "rko/portfolio.hpp"
#include "rko/tdtsp.hpp"

namespace rko::io {

enum class ProblemKind { Mip, Portfolio, TdTsp };

/// "mip", "portfolio" or "tdtsp". Throws std::invalid_argument otherwise.
ProblemKind parseProblemKind(std::string_view name);
std::string_view toString(ProblemKind kind) noexcept;

/// Wall-clock seconds granted to one run on an instance of size n.
/// Portfolio: 10/20/30/50/100/200 s for n <= 31/98/225/457/1318/above.
/// TD-TSP: n seconds. Generic MIP: 10 s.
double budgetFor(ProblemKind kind, std::size_t n);

// ------------------------------------------------------------ OR-Library

/// OR-Library portfolio file: line 1 holds n, the next n lines hold
/// "mean stddev" per asset, and the remaining n(n+1)/2 lines hold "i j corr"
/// (1-based, upper triangle including the diagonal).
struct OrLibPortfolio {
  std::size_t n = 0;
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<double> sigma;  // n x n row-major, corr_ij * sd_i * sd_j, exactly symmetric
};

/// Throws ParseError carrying the offending line number.
OrLibPortfolio parseOrLibPortfolio(std::string_view text);

/// Smallest eigenvalue of a symmetric n x n matrix.
double smallestEigenvalue(const std::vector<double>& matrix, std::size_t n);

// ------------------------------------------------------------ JSON formats

struct TdTspParse {
  tdtsp::Instance instance;
  std::vector<std::string> warnings;  // depot-copy mismatches
};

/// {"format":"rko-tdtsp","version":1,"n":..,"H":..,"Tbar":..,"s":[n+2],
///  "t":[H matrices of (n+2)x(n+2)],"seed":optional}
/// Throws ParseError naming the JSON path of the first problem.
TdTspParse parseTdTsp(std::string_view json);
std::string writeTdTsp(const tdtsp::Instance& instance);

/// {"format":"rko-mip","version":1,"n","m","p","c","l","u","b",
///  "A":[[m rows of n]] or "A_triplets":[[row,col,value],...] (0-based),
///  "penalty":optional prefactor}
struct MipParse {
  mip::Instance instance;
  mip::PenaltyModel penalty;
};
MipParse parseMip(std::string_view json);
std::string writeMip(const mip::Instance& instance, const mip::PenaltyModel& penalty = {});

/// {"format":"rko-portfolio","version":1,"n","mu":[n],"sigma":[[n x n]],
///  "lambda","K","l": number or [n],"u": number or [n]}
portfolio::Instance parsePortfolio(std::string_view json);
std::string writePortfolio(const portfolio::Instance& instance);

std::string readFile(const std::string& path);
void writeFile(const std::string& path, std::string_view contents);

}  // namespace rko::io
