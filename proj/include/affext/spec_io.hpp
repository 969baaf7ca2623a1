#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "affext/extractor.hpp"

namespace affext {

/// Raised for malformed text input; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace text {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::uint64_t parse_u64(std::string_view s, std::size_t line = 0) {
  s = trim(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError("expected a nonnegative integer, got '" + std::string(s) + "'", line);
  return v;
}

inline double parse_double(std::string_view s, std::size_t line = 0) {
  s = trim(s);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError("expected a real number, got '" + std::string(s) + "'", line);
  return v;
}

inline std::vector<std::uint64_t> parse_list(std::string_view s, std::size_t line = 0) {
  std::vector<std::uint64_t> out;
  s = trim(s);
  if (s.empty()) return out;
  while (true) {
    auto comma = s.find(',');
    out.push_back(parse_u64(s.substr(0, comma), line));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

// Shortest round-trip representation.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename Range>
std::string join(const Range& values) {
  std::string out;
  bool first = true;
  for (const auto& v : values) {
    if (!first) out += ',';
    out += std::to_string(v);
    first = false;
  }
  return out;
}

}  // namespace text

/// Flat key = value serialization. The matrix is stored as seed points and
/// rebuilt on load.
inline void write_spec(std::ostream& os, const ExtractorSpec& spec) {
  os << "q = " << spec.q.value() << '\n'
     << "n = " << spec.n << '\n'
     << "k = " << spec.k << '\n'
     << "m = " << spec.m << '\n'
     << "beta = " << text::format_double(spec.beta) << '\n'
     << "epsilon = " << text::format_double(spec.epsilon) << '\n'
     << "d = " << text::join(spec.d.d) << '\n'
     << "seed_points = " << text::join(spec.A.seed_points()) << '\n'
     << "lcm = " << spec.d.lcm << '\n'
     << "D_master = " << spec.d.D_master << '\n';
}

inline std::string spec_to_string(const ExtractorSpec& spec) {
  std::ostringstream os;
  write_spec(os, spec);
  return os.str();
}

inline ExtractorSpec read_spec(std::istream& is) {
  static constexpr std::string_view kKeys[] = {"q",    "n", "k",           "m",   "beta",
                                               "epsilon", "d", "seed_points", "lcm", "D_master"};
  std::map<std::string, std::pair<std::string, std::size_t>, std::less<>> values;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", lineno);
    std::string key(text::trim(line.substr(0, eq)));
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys))
      throw ParseError("unknown key '" + key + "'", lineno);
    if (values.count(key)) throw ParseError("duplicate key '" + key + "'", lineno);
    values[key] = {std::string(text::trim(line.substr(eq + 1))), lineno};
  }
  for (auto key : kKeys)
    if (!values.count(key)) throw ParseError("missing key '" + std::string(key) + "'");

  auto u64 = [&](std::string_view key) {
    const auto& [v, l] = values.find(key)->second;
    return text::parse_u64(v, l);
  };
  auto real = [&](std::string_view key) {
    const auto& [v, l] = values.find(key)->second;
    return text::parse_double(v, l);
  };
  auto list = [&](std::string_view key) {
    const auto& [v, l] = values.find(key)->second;
    return text::parse_list(v, l);
  };

  PrimeModulus q(u64("q"));
  const std::size_t n = u64("n"), k = u64("k"), m = u64("m");
  const double beta = real("beta"), epsilon = real("epsilon");
  if (epsilon != epsilon_for(beta)) throw ParseError("epsilon is not 1/4 - beta/2");
  if (m == 0 || m > k || k > n || n >= q.value()) throw ParseError("need 1 <= m <= k <= n < q");

  ExponentVector d{list("d"), u64("D_master"), u64("lcm")};
  if (d.d.size() != n) throw ParseError("d must have n entries");
  if (auto bad = exponent_violation(d, q.value() - 1)) throw ParseError("exponents: " + *bad);

  auto seeds = list("seed_points");
  if (seeds.size() != n) throw ParseError("seed_points must have n entries");
  PrimeField field(q);
  CoefficientMatrix a = build_matrix(m, n, field, std::move(seeds));
  const bool ok = lcm_within_bound(d.lcm, q.value(), epsilon);
  return ExtractorSpec{std::move(q), n, k, m, beta, epsilon, std::move(d), std::move(a), ok};
}

inline ExtractorSpec spec_from_string(const std::string& s) {
  std::istringstream is(s);
  return read_spec(is);
}

}  // namespace affext
