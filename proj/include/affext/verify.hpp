#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "affext/analysis.hpp"

namespace affext {

enum class Check : unsigned {
  kStatisticalDistance = 1u << 0,
  kCharacters = 1u << 1,
  kXor = 1u << 2,
  kChangeOfVars = 1u << 3,
  kClaim35 = 1u << 4,
  kZeroCoordinate = 1u << 5,
};

class CheckSet {
 public:
  constexpr CheckSet() = default;
  constexpr CheckSet(std::initializer_list<Check> checks) {
    for (auto c : checks) bits_ |= static_cast<unsigned>(c);
  }
  static constexpr CheckSet all() {
    return {Check::kStatisticalDistance, Check::kCharacters, Check::kXor,
            Check::kChangeOfVars,        Check::kClaim35,    Check::kZeroCoordinate};
  }
  constexpr bool has(Check c) const { return bits_ & static_cast<unsigned>(c); }
  constexpr void add(Check c) { bits_ |= static_cast<unsigned>(c); }
  constexpr bool empty() const { return bits_ == 0; }

  /// Parses a comma-separated list of: sd, characters, xor, change_of_vars,
  /// claim35, zero_coordinate, all.
  static CheckSet parse(std::string_view list) {
    CheckSet set;
    while (!list.empty()) {
      auto comma = list.find(',');
      auto name = text::trim(list.substr(0, comma));
      if (name == "all") set = all();
      else if (name == "sd") set.add(Check::kStatisticalDistance);
      else if (name == "characters") set.add(Check::kCharacters);
      else if (name == "xor") set.add(Check::kXor);
      else if (name == "change_of_vars") set.add(Check::kChangeOfVars);
      else if (name == "claim35") set.add(Check::kClaim35);
      else if (name == "zero_coordinate") set.add(Check::kZeroCoordinate);
      else if (!name.empty()) throw std::invalid_argument("unknown check '" + std::string(name) + "'");
      if (comma == std::string_view::npos) break;
      list.remove_prefix(comma + 1);
    }
    return set;
  }

 private:
  unsigned bits_ = 0;
};

struct ExhaustiveSource {};
struct SampleSource {
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
};
struct ExplicitSource {
  std::vector<AffineSubspace> subspaces;
};
using SubspaceSource = std::variant<ExhaustiveSource, SampleSource, ExplicitSource>;

struct VerifyOptions {
  CheckSet checks = CheckSet::all();
  unsigned workers = 1;
  std::uint64_t seed = 0;  // drives sampled pivot-identity grids
  Budget budget;
  std::size_t chunk = 256;  // subspaces per work unit
};

struct VerifySummary {
  std::uint64_t subspaces_processed = 0;
  std::uint64_t budget_errors = 0;
  std::uint64_t reports = 0;
  std::uint64_t theorem_checks = 0;
  std::uint64_t theorem_violations = 0;
  std::uint64_t xor_violations = 0;
  std::uint64_t change_of_vars_violations = 0;
  std::uint64_t claim35_violations = 0;
  std::uint64_t zero_coordinate_violations = 0;
  std::optional<Rational> max_sd;
  std::uint64_t max_sd_subspace = 0;
  std::optional<double> max_character;
  std::uint64_t max_character_subspace = 0;

  bool all_theorem_checks_passed() const { return theorem_violations == 0; }
};

namespace detail {

struct SubspaceOutcome {
  std::vector<BoundReport> reports;
  std::optional<Rational> sd;
  std::optional<double> max_character;
  bool budget_error = false;
};

class SweepContext {
 public:
  SweepContext(const ExtractorSpec& spec, const VerifyOptions& opts)
      : spec_(spec), opts_(opts), eval_(spec), roots_(spec.q.value()) {}

  SubspaceOutcome run(std::uint64_t id, const AffineSubspace& v) const {
    SubspaceOutcome out;
    try {
      process(id, v, out);
    } catch (const BudgetExceeded& e) {
      out.reports.clear();
      BoundReport r;
      r.check = "budget_error";
      r.informational = true;
      r.note = e.what();
      out.reports.push_back(std::move(r));
      out.budget_error = true;
      out.sd.reset();
      out.max_character.reset();
    }
    for (auto& r : out.reports) r.subspace_id = id;
    return out;
  }

 private:
  void process(std::uint64_t id, const AffineSubspace& v, SubspaceOutcome& out) const {
    const auto& checks = opts_.checks;
    const auto& field = eval_.field();
    const std::uint64_t q = field.modulus();
    if (v.ambient_dim() != spec_.n || v.modulus() != q)
      throw std::invalid_argument("subspace does not live in F_q^n of the spec");

    if (checks.has(Check::kStatisticalDistance) || checks.has(Check::kCharacters) ||
        checks.has(Check::kXor)) {
      const OutputDistribution dist = output_distribution(eval_, v, opts_.budget);
      const Rational sd = statistical_distance(dist);
      out.sd = sd;
      if (checks.has(Check::kStatisticalDistance)) {
        BoundReport r;
        r.check = "statistical_distance";
        r.quantity = sd.to_double();
        r.informational = true;
        r.note = sd.to_string();
        out.reports.push_back(std::move(r));
      }
      if (checks.has(Check::kCharacters) || checks.has(Check::kXor)) {
        BoundReport x = xor_bound_check(dist, roots_, opts_.budget);
        const double eps = x.bound / std::pow(static_cast<double>(q), static_cast<double>(spec_.m) / 2.0);
        out.max_character = eps;
        if (checks.has(Check::kCharacters)) {
          BoundReport r;
          r.check = "max_character";
          r.quantity = eps;
          r.informational = true;
          r.c_encoded = x.c_encoded;
          out.reports.push_back(std::move(r));
        }
        if (checks.has(Check::kXor)) out.reports.push_back(std::move(x));
      }
    }

    const bool per_c = checks.has(Check::kChangeOfVars) || checks.has(Check::kZeroCoordinate);
    if (checks.has(Check::kClaim35))
      out.reports.push_back(claim35_structure_check(spec_, v, opts_.budget, mix_seed(opts_.seed, id)));
    if (per_c) {
      const std::uint64_t characters = saturating_pow(q, spec_.m);
      require_budget("nonzero character vectors", characters, opts_.budget.points);
      for (std::uint64_t code = 1; code < characters; ++code) {
        const FieldVector c = decode_vector(code, spec_.m, q);
        if (checks.has(Check::kChangeOfVars))
          out.reports.push_back(change_of_vars_check(spec_, eval_, v, c, opts_.budget));
        if (checks.has(Check::kZeroCoordinate))
          out.reports.push_back(zero_coordinate_bound(spec_.A, field, c, v.pivots()));
      }
    }
  }

  const ExtractorSpec& spec_;
  const VerifyOptions& opts_;
  Evaluator eval_;
  RootsOfUnity roots_;
};

inline void tally(VerifySummary& s, std::uint64_t id, const SubspaceOutcome& o) {
  ++s.subspaces_processed;
  if (o.budget_error) ++s.budget_errors;
  s.reports += o.reports.size();
  for (const auto& r : o.reports) {
    if (r.informational) continue;
    ++s.theorem_checks;
    if (r.satisfied) continue;
    ++s.theorem_violations;
    if (r.check == "xor") ++s.xor_violations;
    else if (r.check == "change_of_vars") ++s.change_of_vars_violations;
    else if (r.check == "claim35") ++s.claim35_violations;
    else if (r.check == "zero_coordinate") ++s.zero_coordinate_violations;
  }
  if (o.sd && (!s.max_sd || *s.max_sd < *o.sd)) {
    s.max_sd = o.sd;
    s.max_sd_subspace = id;
  }
  if (o.max_character && (!s.max_character || *s.max_character < *o.max_character)) {
    s.max_character = o.max_character;
    s.max_character_subspace = id;
  }
}

}  // namespace detail

using ReportSink = std::function<void(const BoundReport&)>;

/// Runs the selected checks on every subspace from the source. Work is
/// sharded in contiguous chunks across `workers` threads; reports reach the
/// sink on the calling thread in subspace order, so output is identical for
/// any worker count. Budget errors are reported per subspace and the sweep
/// continues.
inline VerifySummary verify_extractor(const ExtractorSpec& spec, const SubspaceSource& source,
                                      const VerifyOptions& opts, const ReportSink& sink) {
  const PrimeField field = spec.field();
  std::uint64_t total = 0;
  std::optional<SubspaceEnumerator> exhaustive;
  if (std::holds_alternative<ExhaustiveSource>(source)) {
    exhaustive.emplace(spec.n, spec.k, field, opts.budget);
    total = exhaustive->size();
  } else if (const auto* s = std::get_if<SampleSource>(&source)) {
    total = s->count;
  } else {
    total = std::get<ExplicitSource>(source).subspaces.size();
  }
  auto subspace_at = [&](std::uint64_t i) -> AffineSubspace {
    if (exhaustive) return exhaustive->at(i);
    if (const auto* s = std::get_if<SampleSource>(&source))
      return random_subspace(spec.n, spec.k, field, mix_seed(s->seed, i));
    return std::get<ExplicitSource>(source).subspaces[i];
  };

  const detail::SweepContext ctx(spec, opts);
  VerifySummary summary;
  const unsigned workers = std::max(1u, opts.workers);
  const std::uint64_t chunk = std::max<std::size_t>(1, opts.chunk);
  const std::uint64_t chunks_total = (total + chunk - 1) / chunk;
  const std::uint64_t wave = std::uint64_t{workers} * 8;

  std::vector<std::vector<detail::SubspaceOutcome>> results;
  for (std::uint64_t first = 0; first < chunks_total; first += wave) {
    const std::uint64_t count = std::min(wave, chunks_total - first);
    results.assign(count, {});
    std::atomic<std::uint64_t> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    auto work = [&] {
      try {
        for (std::uint64_t c; (c = next.fetch_add(1)) < count;) {
          const std::uint64_t lo = (first + c) * chunk, hi = std::min(total, lo + chunk);
          auto& bucket = results[c];
          bucket.reserve(hi - lo);
          for (std::uint64_t i = lo; i < hi; ++i) bucket.push_back(ctx.run(i, subspace_at(i)));
        }
      } catch (...) {
        next = count;  // drain the wave
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    for (std::uint64_t c = 0; c < count; ++c) {
      std::uint64_t id = (first + c) * chunk;
      for (const auto& outcome : results[c]) {
        detail::tally(summary, id, outcome);
        for (const auto& r : outcome.reports) sink(r);
        ++id;
      }
    }
  }
  return summary;
}

// CSV columns: check_name,subspace_id,c_encoded,quantity,bound,satisfied.
// Informational rows leave bound and satisfied empty.
inline void write_report_header(std::ostream& os) {
  os << "check_name,subspace_id,c_encoded,quantity,bound,satisfied\n";
}

inline void write_report_row(std::ostream& os, const BoundReport& r) {
  std::string line = r.check;
  line += ',';
  if (r.subspace_id) line += std::to_string(*r.subspace_id);
  line += ',';
  if (r.c_encoded) line += std::to_string(*r.c_encoded);
  line += ',';
  line += text::format_double(r.quantity);
  line += ',';
  if (!r.informational) {
    line += text::format_double(r.bound);
    line += r.satisfied ? ",1" : ",0";
  } else {
    line += ',';
  }
  line += '\n';
  os << line;
}

inline std::vector<std::pair<std::string, std::string>> summary_fields(const VerifySummary& s) {
  std::vector<std::pair<std::string, std::string>> kv = {
      {"subspaces_processed", std::to_string(s.subspaces_processed)},
      {"budget_errors", std::to_string(s.budget_errors)},
      {"reports", std::to_string(s.reports)},
      {"theorem_checks", std::to_string(s.theorem_checks)},
      {"theorem_violations", std::to_string(s.theorem_violations)},
      {"xor_violations", std::to_string(s.xor_violations)},
      {"change_of_vars_violations", std::to_string(s.change_of_vars_violations)},
      {"claim35_violations", std::to_string(s.claim35_violations)},
      {"zero_coordinate_violations", std::to_string(s.zero_coordinate_violations)},
  };
  if (s.max_sd) {
    kv.emplace_back("max_sd", s.max_sd->to_string());
    kv.emplace_back("max_sd_decimal", text::format_double(s.max_sd->to_double()));
    kv.emplace_back("max_sd_subspace", std::to_string(s.max_sd_subspace));
  }
  if (s.max_character) {
    kv.emplace_back("max_character_magnitude", text::format_double(*s.max_character));
    kv.emplace_back("max_character_subspace", std::to_string(s.max_character_subspace));
  }
  kv.emplace_back("all_theorem_checks_passed", s.all_theorem_checks_passed() ? "true" : "false");
  return kv;
}

inline void write_summary(std::ostream& os, const VerifySummary& s, std::string_view prefix = "") {
  for (const auto& [k, v] : summary_fields(s)) os << prefix << k << " = " << v << '\n';
}

}  // namespace affext
