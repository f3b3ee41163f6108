#include "ccbounds/py_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ccbounds {

namespace {

bool all_digits(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

[[noreturn]] void line_error(int lineno, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(lineno) + ": " + what);
}

// strips a trailing comment and hands back the remaining fields
std::istringstream fields_of(std::string line) {
  if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  return std::istringstream(std::move(line));
}

std::uint64_t parse_subset(const std::string& token, int n_files, int lineno) {
  if (token == "-") return 0;
  std::uint64_t mask = 0;
  std::size_t start = 0;
  while (start <= token.size()) {
    auto comma = token.find(',', start);
    if (comma == std::string::npos) comma = token.size();
    const std::string piece = token.substr(start, comma - start);
    if (piece.empty() || !all_digits(piece)) line_error(lineno, "bad file index '" + piece + "'");
    const long value = std::stol(piece);
    if (value < 1 || value > n_files)
      line_error(lineno, "file index " + piece + " outside 1.." + std::to_string(n_files));
    const std::uint64_t bit = 1ull << (value - 1);
    if (mask & bit) line_error(lineno, "file index " + piece + " repeated in subset");
    mask |= bit;
    start = comma + 1;
  }
  return mask;
}

}  // namespace

oracle::Rational parse_probability(const std::string& text) {
  const auto bad = [&]() -> void {
    throw std::invalid_argument("bad probability '" + text + "'");
  };
  if (text.empty()) bad();
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    if (num.empty() || den.empty() || !all_digits(num) || !all_digits(den)) bad();
    const oracle::BigInt d(den);
    if (d == 0) bad();
    return {oracle::BigInt(num), d};
  }
  const auto dot = text.find('.');
  const std::string whole = dot == std::string::npos ? text : text.substr(0, dot);
  const std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
  if ((whole.empty() && frac.empty()) || !all_digits(whole) || !all_digits(frac)) bad();
  oracle::BigInt scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  const oracle::BigInt units = whole.empty() ? oracle::BigInt(0) : oracle::BigInt(whole);
  const oracle::BigInt tail = frac.empty() ? oracle::BigInt(0) : oracle::BigInt(frac);
  return {units * scale + tail, scale};
}

SubsetDistFile parse_subset_dist(std::istream& in, int n_files) {
  if (n_files < 1 || n_files > 64)
    throw std::invalid_argument("parse_subset_dist: n_files must lie in 1..64");

  oracle::RationalSubsetDist exact;
  exact.n_files = n_files;
  std::map<std::uint64_t, int> first_line;  // mask -> line that introduced it
  std::string line;
  int lineno = 0;
  oracle::Rational total = 0;

  while (std::getline(in, line)) {
    ++lineno;
    auto in_fields = fields_of(line);
    std::string subset_token, prob_token, extra;
    if (!(in_fields >> subset_token)) continue;
    if (!(in_fields >> prob_token)) line_error(lineno, "missing probability");
    if (in_fields >> extra) line_error(lineno, "unexpected trailing field '" + extra + "'");

    const std::uint64_t mask = parse_subset(subset_token, n_files, lineno);
    if (const auto [it, fresh] = first_line.emplace(mask, lineno); !fresh)
      line_error(lineno, "subset repeats line " + std::to_string(it->second));

    oracle::Rational prob;
    try {
      prob = parse_probability(prob_token);
    } catch (const std::invalid_argument& e) {
      line_error(lineno, e.what());
    }
    if (prob <= 0) line_error(lineno, "probability must be positive");
    total += prob;
    exact.support.emplace_back(mask, std::move(prob));
  }

  if (exact.support.empty()) throw std::runtime_error("no subsets given");
  if (total != 1) {
    std::ostringstream msg;
    msg << "probabilities sum to " << total << ", want exactly 1";
    throw std::runtime_error(msg.str());
  }

  std::sort(exact.support.begin(), exact.support.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<std::uint64_t, double>> rounded;
  rounded.reserve(exact.support.size());
  for (const auto& [mask, prob] : exact.support)
    rounded.emplace_back(mask, oracle::to_double(prob));
  return {std::move(exact), SubsetRequestDistribution(std::move(rounded))};
}

SubsetDistFile load_subset_dist(const std::string& path, int n_files) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return parse_subset_dist(in, n_files);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

RequestDistribution parse_popularity(std::istream& in, int n_files) {
  std::vector<double> probs;
  probs.reserve(n_files);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto in_fields = fields_of(line);
    std::string token, extra;
    if (!(in_fields >> token)) continue;
    if (in_fields >> extra) line_error(lineno, "unexpected trailing field '" + extra + "'");
    try {
      probs.push_back(oracle::to_double(parse_probability(token)));
    } catch (const std::invalid_argument& e) {
      line_error(lineno, e.what());
    }
  }
  if (static_cast<int>(probs.size()) != n_files)
    throw std::runtime_error("expected " + std::to_string(n_files) + " probabilities, got " +
                             std::to_string(probs.size()));
  return RequestDistribution(std::move(probs));
}

RequestDistribution load_popularity(const std::string& path, int n_files) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return parse_popularity(in, n_files);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace ccbounds
