#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "affext/affext.hpp"

namespace affext::cli {

enum ExitCode : int {
  kOk = 0,
  kArgumentError = 1,
  kStrictWarning = 2,
  kCheckFailed = 3,
};

struct RunConfig {
  std::string command;
  std::uint64_t q = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  double beta = 0.0;
  std::optional<std::size_t> m;  // explicit output length (verification instances)
  std::optional<std::vector<Residue>> seed_points;
  TypicalityRule typicality;
  Budget budget;
  std::uint64_t seed = 0;
  bool strict_lcm = false;

  std::string spec_path;
  std::string input_path;
  std::string output_path;
  std::string subspace_path;
  std::string report_dir;

  bool exhaustive = false;
  std::optional<std::uint64_t> sample;
  std::string checks = "all";
  unsigned workers = 1;
  std::vector<std::uint64_t> prachar_limits = {1000, 100000};
};

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  return os;
}

inline ExtractorSpec load_spec(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open spec file '" + path + "'");
  return read_spec(is);
}

}  // namespace detail

inline int cmd_plan(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (!cfg.m && !(cfg.beta > 0.0 && cfg.beta < 0.5)) {
      err << "error: beta must lie in (0, 1/2)\n";
      return kArgumentError;
    }
    const PrimeModulus q(cfg.q);
    std::optional<PlanResult> plan;
    if (cfg.m) {
      ExtractorSpec spec = make_lab_spec(q, cfg.n, cfg.k, *cfg.m, cfg.seed_points);
      PlanResult r{std::move(spec), is_typical(q, cfg.typicality), {}};
      r.warnings.push_back("explicit m: beta recorded as m/k=" + text::format_double(r.spec.beta));
      if (!r.typical) r.warnings.push_back("q is not typical");
      if (!r.spec.lcm_bound_satisfied) r.warnings.push_back("LCM bound fails");
      plan.emplace(std::move(r));
    } else {
      plan.emplace(plan_parameters(cfg.n, cfg.k, cfg.beta, q, cfg.typicality, cfg.seed_points));
    }
    const ExtractorSpec& spec = plan->spec;
    // With the spec on stdout, keep the summary out of its way.
    std::ostream& info = cfg.spec_path.empty() ? err : out;
    info << "q = " << q.value() << " (omega(q-1) = " << q.omega() << ", "
        << (plan->typical ? "typical" : "not typical") << ")\n"
        << "n = " << spec.n << ", k = " << spec.k << ", m = " << spec.m << "\n"
        << "beta = " << text::format_double(spec.beta) << ", epsilon = " << text::format_double(spec.epsilon)
        << "\n"
        << "d = " << text::join(spec.d.d) << "\n"
        << "lcm = " << spec.d.lcm << ", D_master = " << spec.d.D_master << "\n"
        << "lcm_bound_satisfied = " << (spec.lcm_bound_satisfied ? "true" : "false") << "\n";
    for (const auto& w : plan->warnings) err << "warning: " << w << '\n';
    if (cfg.strict_lcm && !spec.lcm_bound_satisfied) {
      err << "error: LCM bound fails under --strict\n";
      return kStrictWarning;
    }
    if (cfg.spec_path.empty()) {
      write_spec(out, spec);
    } else {
      auto os = detail::open_out(cfg.spec_path);
      write_spec(os, spec);
    }
    return kOk;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kArgumentError;
  }
}

/// Streams comma-separated residue vectors through the extractor, one line
/// in, one line out.
inline int cmd_extract_stream(const ExtractorSpec& spec, std::istream& in, std::ostream& out,
                              std::ostream& err) {
  const Evaluator eval(spec);
  const std::uint64_t q = spec.q.value();
  std::string line;
  std::size_t lineno = 0;
  FieldVector z(spec.m);
  std::string buffer;
  while (std::getline(in, line)) {
    ++lineno;
    try {
      const auto x = text::parse_list(line, lineno);
      if (x.size() != spec.n)
        throw ParseError("expected " + std::to_string(spec.n) + " residues, got " + std::to_string(x.size()),
                         lineno);
      for (auto r : x)
        if (r >= q) throw ParseError("residue " + std::to_string(r) + " is not below q", lineno);
      eval.evaluate(x, z);
    } catch (const ParseError& e) {
      err << "error: " << e.what() << '\n';
      return kArgumentError;
    }
    buffer = text::join(z);
    buffer += '\n';
    out << buffer;
  }
  return kOk;
}

inline int cmd_extract(const RunConfig& cfg, std::istream& default_in, std::ostream& default_out,
                       std::ostream& err) {
  try {
    const ExtractorSpec spec = detail::load_spec(cfg.spec_path);
    std::ifstream fin;
    std::istream* in = &default_in;
    if (!cfg.input_path.empty()) {
      fin.open(cfg.input_path);
      if (!fin) throw std::runtime_error("cannot open input '" + cfg.input_path + "'");
      in = &fin;
    }
    if (cfg.output_path.empty()) return cmd_extract_stream(spec, *in, default_out, err);
    auto os = detail::open_out(cfg.output_path);
    return cmd_extract_stream(spec, *in, os, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kArgumentError;
  }
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const ExtractorSpec spec = detail::load_spec(cfg.spec_path);
    const int sources = int(cfg.exhaustive) + int(cfg.sample.has_value()) + int(!cfg.subspace_path.empty());
    if (sources != 1) {
      err << "error: choose exactly one of --exhaustive, --sample N, --subspace-file\n";
      return kArgumentError;
    }
    SubspaceSource source = ExhaustiveSource{};
    if (cfg.sample) {
      source = SampleSource{*cfg.sample, cfg.seed};
    } else if (!cfg.subspace_path.empty()) {
      std::ifstream is(cfg.subspace_path);
      if (!is) throw std::runtime_error("cannot open subspace file '" + cfg.subspace_path + "'");
      auto subspaces = read_subspaces(is);
      for (const auto& v : subspaces)
        if (v.ambient_dim() != spec.n || v.modulus() != spec.q.value())
          throw std::invalid_argument("subspace file does not match the spec's q and n");
      source = ExplicitSource{std::move(subspaces)};
    }
    VerifyOptions opts;
    opts.checks = CheckSet::parse(cfg.checks);
    opts.workers = cfg.workers;
    opts.seed = cfg.seed;
    opts.budget = cfg.budget;

    std::ofstream csv;
    if (!cfg.report_dir.empty()) {
      std::filesystem::create_directories(cfg.report_dir);
      csv = detail::open_out((std::filesystem::path(cfg.report_dir) / "report.csv").string());
      write_report_header(csv);
    }
    const VerifySummary summary = verify_extractor(spec, source, opts, [&](const BoundReport& r) {
      if (csv.is_open()) write_report_row(csv, r);
    });
    if (csv.is_open()) {
      write_summary(csv, summary, "# ");
      auto sfile = detail::open_out((std::filesystem::path(cfg.report_dir) / "summary.txt").string());
      write_summary(sfile, summary);
    }
    write_summary(out, summary);
    return summary.all_theorem_checks_passed() ? kOk : kCheckFailed;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kArgumentError;
  }
}

inline int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::ofstream file;
    std::ostream* csv = &out;
    if (!cfg.report_dir.empty()) {
      std::filesystem::create_directories(cfg.report_dir);
      file = detail::open_out((std::filesystem::path(cfg.report_dir) / "bounds.csv").string());
      csv = &file;
    }
    *csv << "check_name,case,quantity,bound,satisfied,detail\n";
    std::size_t failures = 0;
    const auto battery = deligne_battery();
    for (std::size_t i = 0; i < battery.size(); ++i) {
      const BoundReport r = deligne_bound_check(battery[i].f, battery[i].b, cfg.budget);
      failures += !r.satisfied;
      *csv << "deligne," << i << ',' << text::format_double(r.quantity) << ','
           << text::format_double(r.bound) << ',' << (r.satisfied ? 1 : 0) << ",\"b=" << battery[i].b << " "
           << r.note << " margin=" << text::format_double(r.bound - r.quantity) << "\"\n";
    }
    for (auto limit : cfg.prachar_limits) {
      const PracharAverage p = prachar_average(limit);
      *csv << "prachar," << limit << ',' << p.sum << ',' << ',' << ",\"primes=" << p.prime_count
           << " normalized=" << text::format_double(p.normalized) << "\"\n";
      out << "prachar limit=" << limit << " sum=" << p.sum << " normalized=" << text::format_double(p.normalized)
          << '\n';
    }
    out << "deligne cases=" << battery.size() << " failures=" << failures << '\n';
    return failures == 0 ? kOk : kCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kArgumentError;
  }
}

}  // namespace affext::cli
