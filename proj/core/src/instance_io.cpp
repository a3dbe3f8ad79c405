#include "rko/instance_io.hpp"

#include <Eigen/Dense>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "rko/errors.hpp"

namespace rko::io {

using nlohmann::json;

ProblemKind parseProblemKind(std::string_view name) {
  if (name == "mip") return ProblemKind::Mip;
  if (name == "portfolio") return ProblemKind::Portfolio;
  if (name == "tdtsp") return ProblemKind::TdTsp;
  throw std::invalid_argument("unknown problem kind '" + std::string(name) +
                              "' (expected mip, portfolio or tdtsp)");
}

std::string_view toString(ProblemKind kind) noexcept {
  switch (kind) {
    case ProblemKind::Mip: return "mip";
    case ProblemKind::Portfolio: return "portfolio";
    case ProblemKind::TdTsp: return "tdtsp";
  }
  return "?";
}

double budgetFor(ProblemKind kind, std::size_t n) {
  if (n == 0) throw std::invalid_argument("budgetFor: n must be >= 1");
  switch (kind) {
    case ProblemKind::Portfolio:
      if (n <= 31) return 10.0;
      if (n <= 98) return 20.0;
      if (n <= 225) return 30.0;
      if (n <= 457) return 50.0;
      if (n <= 1318) return 100.0;
      return 200.0;
    case ProblemKind::TdTsp:
      return static_cast<double>(n);
    case ProblemKind::Mip:
      return 10.0;
  }
  return 10.0;
}

// ------------------------------------------------------------ OR-Library

namespace {

struct LineReader {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t lineNo = 0;

  // Next line with at least one token; false at end of input.
  bool next(std::vector<std::string_view>& tokens) {
    while (pos < text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      const std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++lineNo;
      tokens.clear();
      std::size_t i = 0;
      while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
      }
      if (!tokens.empty()) return true;
    }
    return false;
  }

  std::string where() const { return "line " + std::to_string(lineNo); }
};

double toDouble(std::string_view token, const std::string& where) {
  double value = 0.0;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(where, "not a number: '" + std::string(token) + "'");
  return value;
}

std::size_t toIndex(std::string_view token, const std::string& where) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(where, "not a non-negative integer: '" + std::string(token) + "'");
  return value;
}

std::string firstMissing(const std::vector<char>& seen, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (!seen[i * n + j])
        return "missing pair (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")";
  return "missing pairs";
}

}  // namespace

OrLibPortfolio parseOrLibPortfolio(std::string_view text) {
  LineReader reader{text};
  std::vector<std::string_view> tok;

  if (!reader.next(tok)) throw ParseError("line 1", "empty file, expected the asset count");
  if (tok.size() != 1) throw ParseError(reader.where(), "expected a single asset count");
  OrLibPortfolio out;
  out.n = toIndex(tok[0], reader.where());
  if (out.n == 0) throw ParseError(reader.where(), "asset count must be positive");
  const std::size_t n = out.n;

  out.mean.resize(n);
  out.stddev.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!reader.next(tok))
      throw ParseError(reader.where(), "truncated file: expected " + std::to_string(n) +
                                           " asset lines, found " + std::to_string(i));
    if (tok.size() != 2) throw ParseError(reader.where(), "expected 'mean stddev'");
    out.mean[i] = toDouble(tok[0], reader.where());
    out.stddev[i] = toDouble(tok[1], reader.where());
    if (!(out.stddev[i] >= 0.0)) throw ParseError(reader.where(), "negative standard deviation");
  }

  const std::size_t pairs = n * (n + 1) / 2;
  std::vector<char> seen(n * n, 0);
  out.sigma.assign(n * n, 0.0);
  for (std::size_t k = 0; k < pairs; ++k) {
    if (!reader.next(tok)) throw ParseError(reader.where(), "truncated file: " + firstMissing(seen, n));
    if (tok.size() != 3) throw ParseError(reader.where(), "expected 'i j correlation'");
    std::size_t i = toIndex(tok[0], reader.where());
    std::size_t j = toIndex(tok[1], reader.where());
    const double corr = toDouble(tok[2], reader.where());
    if (i < 1 || i > n || j < 1 || j > n)
      throw ParseError(reader.where(), "asset index out of range 1.." + std::to_string(n));
    if (!(corr >= -1.0 && corr <= 1.0))
      throw ParseError(reader.where(), "correlation " + std::string(tok[2]) + " outside [-1, 1]");
    if (i == j && std::abs(corr - 1.0) > 1e-9)
      throw ParseError(reader.where(), "diagonal correlation must be 1");
    if (i > j) std::swap(i, j);
    --i;
    --j;
    if (seen[i * n + j])
      throw ParseError(reader.where(), "duplicate pair (" + std::to_string(i + 1) + ", " +
                                           std::to_string(j + 1) + ")");
    seen[i * n + j] = 1;
    // Upper triangle only, then mirrored: symmetric bit for bit.
    out.sigma[i * n + j] = i == j ? out.stddev[i] * out.stddev[i]
                                  : corr * out.stddev[i] * out.stddev[j];
    out.sigma[j * n + i] = out.sigma[i * n + j];
  }
  if (reader.next(tok))
    throw ParseError(reader.where(), "unexpected data after " + std::to_string(pairs) +
                                         " correlation lines");
  return out;
}

double smallestEigenvalue(const std::vector<double>& matrix, std::size_t n) {
  if (matrix.size() != n * n) throw std::invalid_argument("smallestEigenvalue: matrix must be n x n");
  if (n == 0) throw std::invalid_argument("smallestEigenvalue: empty matrix");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = matrix[i * n + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver did not converge");
  return solver.eigenvalues().minCoeff();
}

// ------------------------------------------------------------ JSON helpers

namespace {

json parseDocument(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("invalid JSON: ") + e.what());
  }
}

const json& field(const json& obj, const std::string& key) {
  if (!obj.is_object()) throw ParseError("$", "expected a JSON object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(key, "missing field");
  return *it;
}

void checkHeader(const json& doc, const char* format) {
  const json& f = field(doc, "format");
  if (!f.is_string() || f.get<std::string>() != format)
    throw ParseError("format", std::string("expected \"") + format + "\"");
  const json& v = field(doc, "version");
  if (!v.is_number_integer() || v.get<long long>() != 1)
    throw ParseError("version", "unsupported version (expected 1)");
}

double number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ParseError(path, "expected a number");
  return value.get<double>();
}

std::size_t count(const json& value, const std::string& path) {
  if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0))
    throw ParseError(path, "expected a non-negative integer");
  return value.get<std::size_t>();
}

std::vector<double> vector(const json& value, const std::string& path, std::size_t expected) {
  if (!value.is_array()) throw ParseError(path, "expected an array");
  if (value.size() != expected)
    throw ParseError(path, "expected " + std::to_string(expected) + " entries, found " +
                               std::to_string(value.size()));
  std::vector<double> out(expected);
  for (std::size_t i = 0; i < expected; ++i)
    out[i] = number(value[i], path + "[" + std::to_string(i) + "]");
  return out;
}

// Square or rectangular dense matrix, appended row-major to `out`.
void matrix(const json& value, const std::string& path, std::size_t rows, std::size_t cols,
            std::vector<double>& out) {
  if (!value.is_array()) throw ParseError(path, "expected an array of rows");
  if (value.size() != rows)
    throw ParseError(path, "expected " + std::to_string(rows) + " rows, found " +
                               std::to_string(value.size()));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = vector(value[r], path + "[" + std::to_string(r) + "]", cols);
    out.insert(out.end(), row.begin(), row.end());
  }
}

// Scalar applied to every asset or a per-asset array.
std::vector<double> bounds(const json& value, const std::string& path, std::size_t n) {
  if (value.is_number()) return std::vector<double>(n, value.get<double>());
  return vector(value, path, n);
}

json rows(const std::vector<double>& data, std::size_t rows, std::size_t cols, std::size_t offset = 0) {
  json out = json::array();
  for (std::size_t r = 0; r < rows; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < cols; ++c) row.push_back(data[offset + r * cols + c]);
    out.push_back(std::move(row));
  }
  return out;
}

template <class F>
auto validated(F&& build) {
  try {
    return build();
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError("", e.what());
  }
}

}  // namespace

// ------------------------------------------------------------ TD-TSP

TdTspParse parseTdTsp(std::string_view text) {
  const json doc = parseDocument(text);
  checkHeader(doc, "rko-tdtsp");

  TdTspParse out;
  tdtsp::Instance& in = out.instance;
  in.n = count(field(doc, "n"), "n");
  in.H = count(field(doc, "H"), "H");
  in.Tbar = number(field(doc, "Tbar"), "Tbar");
  if (in.n == 0) throw ParseError("n", "need at least one customer");
  if (in.H == 0) throw ParseError("H", "need at least one interval");
  if (!(in.Tbar > 0.0)) throw ParseError("Tbar", "interval length must be positive");

  const std::size_t N = in.nodes();
  in.service = vector(field(doc, "s"), "s", N);
  for (std::size_t i = 0; i < N; ++i) {
    const double s = in.service[i];
    const std::string path = "s[" + std::to_string(i) + "]";
    if (s < 0.0) throw ParseError(path, "negative service time");
    if ((i == 0 || i == in.terminal()) && s != 0.0) throw ParseError(path, "depot service must be 0");
    if (i != 0 && i != in.terminal() && !(s > 0.0)) throw ParseError(path, "customer service must be positive");
  }

  const json& t = field(doc, "t");
  if (!t.is_array()) throw ParseError("t", "expected an array of H matrices");
  if (t.size() != in.H)
    throw ParseError("t", "expected H=" + std::to_string(in.H) + " matrices, found " +
                              std::to_string(t.size()));
  in.travel.reserve(in.H * N * N);
  for (std::size_t h = 0; h < in.H; ++h) matrix(t[h], "t[" + std::to_string(h) + "]", N, N, in.travel);
  for (std::size_t h = 0; h < in.H; ++h)
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        if (in.t(i, j, h) < 0.0)
          throw ParseError("t[" + std::to_string(h) + "][" + std::to_string(i) + "][" +
                               std::to_string(j) + "]",
                           "negative travel time");

  if (const auto it = doc.find("seed"); it != doc.end() && !it->is_null()) {
    if (!it->is_number_unsigned()) throw ParseError("seed", "expected a non-negative integer");
    in.seed = it->get<std::uint64_t>();
  }

  validated([&] { in.validate(); return 0; });
  out.warnings = in.depotCopyWarnings();
  return out;
}

std::string writeTdTsp(const tdtsp::Instance& in) {
  json doc;
  doc["format"] = "rko-tdtsp";
  doc["version"] = 1;
  doc["n"] = in.n;
  doc["H"] = in.H;
  doc["Tbar"] = in.Tbar;
  doc["s"] = in.service;
  json t = json::array();
  const std::size_t N = in.nodes();
  for (std::size_t h = 0; h < in.H; ++h) t.push_back(rows(in.travel, N, N, h * N * N));
  doc["t"] = std::move(t);
  if (in.seed) doc["seed"] = *in.seed;
  return doc.dump(1) + "\n";
}

// ------------------------------------------------------------ generic MIP

MipParse parseMip(std::string_view text) {
  const json doc = parseDocument(text);
  checkHeader(doc, "rko-mip");

  MipParse out;
  mip::Instance& in = out.instance;
  in.n = count(field(doc, "n"), "n");
  in.m = count(field(doc, "m"), "m");
  in.p = count(field(doc, "p"), "p");
  if (in.n == 0) throw ParseError("n", "need at least one variable");
  if (in.p > in.n) throw ParseError("p", "more integer variables than variables");
  in.c = vector(field(doc, "c"), "c", in.n);
  in.l = vector(field(doc, "l"), "l", in.n);
  in.u = vector(field(doc, "u"), "u", in.n);
  in.b = vector(field(doc, "b"), "b", in.m);

  const bool dense = doc.contains("A");
  const bool sparse = doc.contains("A_triplets");
  if (dense == sparse) throw ParseError("A", "give exactly one of \"A\" or \"A_triplets\"");
  if (dense) {
    in.A.reserve(in.m * in.n);
    matrix(doc["A"], "A", in.m, in.n, in.A);
  } else {
    in.A.assign(in.m * in.n, 0.0);
    const json& trip = doc["A_triplets"];
    if (!trip.is_array()) throw ParseError("A_triplets", "expected an array of [row, col, value]");
    for (std::size_t k = 0; k < trip.size(); ++k) {
      const std::string path = "A_triplets[" + std::to_string(k) + "]";
      const json& e = trip[k];
      if (!e.is_array() || e.size() != 3) throw ParseError(path, "expected [row, col, value]");
      const std::size_t r = count(e[0], path + "[0]");
      const std::size_t c = count(e[1], path + "[1]");
      if (r >= in.m) throw ParseError(path + "[0]", "row out of range");
      if (c >= in.n) throw ParseError(path + "[1]", "column out of range");
      in.A[r * in.n + c] += number(e[2], path + "[2]");
    }
  }

  if (const auto it = doc.find("penalty"); it != doc.end()) {
    out.penalty.prefactor = number(*it, "penalty");
    if (!(out.penalty.prefactor > 0.0)) throw ParseError("penalty", "prefactor must be positive");
  }
  validated([&] { in.validate(); return 0; });
  return out;
}

std::string writeMip(const mip::Instance& in, const mip::PenaltyModel& penalty) {
  json doc;
  doc["format"] = "rko-mip";
  doc["version"] = 1;
  doc["n"] = in.n;
  doc["m"] = in.m;
  doc["p"] = in.p;
  doc["c"] = in.c;
  doc["l"] = in.l;
  doc["u"] = in.u;
  doc["b"] = in.b;
  doc["A"] = rows(in.A, in.m, in.n);
  doc["penalty"] = penalty.prefactor;
  return doc.dump(1) + "\n";
}

// ------------------------------------------------------------ portfolio

portfolio::Instance parsePortfolio(std::string_view text) {
  const json doc = parseDocument(text);
  checkHeader(doc, "rko-portfolio");

  portfolio::Instance in;
  in.n = count(field(doc, "n"), "n");
  if (in.n == 0) throw ParseError("n", "need at least one asset");
  in.mu = vector(field(doc, "mu"), "mu", in.n);
  in.sigma.reserve(in.n * in.n);
  matrix(field(doc, "sigma"), "sigma", in.n, in.n, in.sigma);
  in.lambda = number(field(doc, "lambda"), "lambda");
  in.K = count(field(doc, "K"), "K");
  in.lower = bounds(field(doc, "l"), "l", in.n);
  in.upper = bounds(field(doc, "u"), "u", in.n);
  validated([&] { in.validate(); return 0; });
  return in;
}

std::string writePortfolio(const portfolio::Instance& in) {
  json doc;
  doc["format"] = "rko-portfolio";
  doc["version"] = 1;
  doc["n"] = in.n;
  doc["mu"] = in.mu;
  doc["sigma"] = rows(in.sigma, in.n, in.n);
  doc["lambda"] = in.lambda;
  doc["K"] = in.K;
  doc["l"] = in.lower;
  doc["u"] = in.upper;
  return doc.dump(1) + "\n";
}

// ------------------------------------------------------------ files

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void writeFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace rko::io
