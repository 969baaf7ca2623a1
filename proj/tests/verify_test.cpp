#include "affext/verify.hpp"

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace affext {
namespace {

struct Run {
  VerifySummary summary;
  std::string csv;
};

Run run(const ExtractorSpec& spec, const SubspaceSource& source, VerifyOptions opts) {
  std::ostringstream os;
  write_report_header(os);
  Run r;
  r.summary = verify_extractor(spec, source, opts, [&](const BoundReport& b) { write_report_row(os, b); });
  write_summary(os, r.summary, "# ");
  r.csv = os.str();
  return r;
}

TEST(CheckSet, Parse) {
  const auto all = CheckSet::parse("all");
  for (auto c : {Check::kStatisticalDistance, Check::kCharacters, Check::kXor, Check::kChangeOfVars, Check::kClaim35,
                 Check::kZeroCoordinate})
    EXPECT_TRUE(all.has(c));
  const auto some = CheckSet::parse("sd, xor");
  EXPECT_TRUE(some.has(Check::kStatisticalDistance));
  EXPECT_TRUE(some.has(Check::kXor));
  EXPECT_FALSE(some.has(Check::kClaim35));
  EXPECT_TRUE(CheckSet::parse("").empty());
  EXPECT_THROW(CheckSet::parse("sd,bogus"), std::invalid_argument);
}

TEST(VerifyExtractor, FullSpaceIsExactlyUniform) {
  const auto spec = make_lab_spec(PrimeModulus(13), 3, 3, 2);
  const auto r = run(spec, ExhaustiveSource{}, {});
  EXPECT_EQ(r.summary.subspaces_processed, 1u);
  ASSERT_TRUE(r.summary.max_sd.has_value());
  EXPECT_EQ(*r.summary.max_sd, (Rational{0, 1}));
  EXPECT_NEAR(*r.summary.max_character, 0.0, kTolerance);
  EXPECT_TRUE(r.summary.all_theorem_checks_passed());
}

TEST(VerifyExtractor, ExhaustiveSmallSweepPasses) {
  const auto spec = make_lab_spec(PrimeModulus(7), 3, 2, 1);
  const auto r = run(spec, ExhaustiveSource{}, {});
  EXPECT_EQ(r.summary.subspaces_processed, gaussian_binomial(3, 2, 7) * 7);
  EXPECT_EQ(r.summary.theorem_violations, 0u);
  EXPECT_EQ(r.summary.budget_errors, 0u);
  // Every theorem row is satisfied.
  std::istringstream is(r.csv);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "check_name,subspace_id,c_encoded,quantity,bound,satisfied");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.starts_with("#")) continue;
    ++rows;
    EXPECT_FALSE(line.ends_with(",0")) << line;
  }
  EXPECT_EQ(rows, r.summary.reports);
}

TEST(VerifyExtractor, SummaryTracksMaximumSd) {
  const auto spec = make_lab_spec(PrimeModulus(5), 3, 2, 1);
  const PrimeField f(5);
  const SubspaceEnumerator en(3, 2, f);
  Rational best{0, 1};
  std::uint64_t best_id = 0;
  for (std::uint64_t i = 0; i < en.size(); ++i) {
    const auto sd = statistical_distance(output_distribution(spec, en.at(i)));
    if (best < sd) {
      best = sd;
      best_id = i;
    }
  }
  VerifyOptions opts;
  opts.checks = CheckSet::parse("sd");
  const auto r = run(spec, ExhaustiveSource{}, opts);
  ASSERT_TRUE(r.summary.max_sd.has_value());
  EXPECT_EQ(*r.summary.max_sd, best);
  EXPECT_EQ(r.summary.max_sd_subspace, best_id);
  EXPECT_EQ(r.summary.theorem_checks, 0u);
}

TEST(VerifyExtractor, IdenticalAcrossWorkerCounts) {
  const auto spec = make_lab_spec(PrimeModulus(7), 4, 2, 2);
  VerifyOptions opts;
  opts.chunk = 17;
  opts.seed = 5;
  const auto one = run(spec, SampleSource{300, 99}, opts);
  for (unsigned w : {2u, 3u, 4u}) {
    opts.workers = w;
    const auto many = run(spec, SampleSource{300, 99}, opts);
    ASSERT_EQ(many.csv, one.csv) << w;
  }
  opts.workers = 1;
  EXPECT_EQ(run(spec, SampleSource{300, 99}, opts).csv, one.csv);
  EXPECT_NE(run(spec, SampleSource{300, 100}, opts).csv, one.csv);
}

TEST(VerifyExtractor, SampledSubspacesFollowSeeds) {
  const auto spec = make_lab_spec(PrimeModulus(13), 3, 2, 1);
  const PrimeField f(13);
  std::vector<AffineSubspace> expected;
  for (std::uint64_t i = 0; i < 10; ++i) expected.push_back(random_subspace(3, 2, f, mix_seed(7, i)));
  VerifyOptions opts;
  opts.checks = CheckSet::parse("sd");
  EXPECT_EQ(run(spec, SampleSource{10, 7}, opts).csv, run(spec, ExplicitSource{expected}, opts).csv);
}

TEST(VerifyExtractor, RowsPerCheck) {
  const auto spec = make_lab_spec(PrimeModulus(5), 3, 2, 2);
  const PrimeField f(5);
  const ExplicitSource one{{random_subspace(3, 2, f, 1)}};
  const auto r = run(spec, one, {});
  // sd, max_character, xor, claim35, then per nonzero c change_of_vars and zero_coordinate.
  EXPECT_EQ(r.summary.reports, 4u + 2u * 24u);
  EXPECT_EQ(r.summary.theorem_checks, 2u + 2u * 24u);
  EXPECT_NE(r.csv.find("\nstatistical_distance,0,,"), std::string::npos);
  EXPECT_NE(r.csv.find("\nzero_coordinate,0,24,"), std::string::npos);
}

TEST(VerifyExtractor, BudgetErrorsAreReportedPerSubspace) {
  const auto spec = make_lab_spec(PrimeModulus(7), 4, 3, 1);
  const PrimeField f(7);
  ExplicitSource src{{random_subspace(4, 3, f, 1), canonicalize(f, {1, 2, 3, 4}, {{1, 0, 0, 5}}),
                      random_subspace(4, 3, f, 2)}};
  VerifyOptions opts;
  opts.budget.points = 100;  // 343-point flats exceed it, a 7-point line does not
  const auto r = run(spec, src, opts);
  EXPECT_EQ(r.summary.subspaces_processed, 3u);
  EXPECT_EQ(r.summary.budget_errors, 2u);
  EXPECT_TRUE(r.summary.all_theorem_checks_passed());
  EXPECT_NE(r.csv.find("budget_error,0,"), std::string::npos);
  EXPECT_NE(r.csv.find("budget_error,2,"), std::string::npos);
  EXPECT_NE(r.csv.find("xor,1,"), std::string::npos);
}

TEST(VerifyExtractor, RejectsForeignSubspaces) {
  const auto spec = make_lab_spec(PrimeModulus(13), 3, 2, 1);
  ExplicitSource src{{random_subspace(4, 2, PrimeField(13), 1)}};
  EXPECT_THROW(run(spec, src, {}), std::invalid_argument);
  VerifyOptions opts;
  opts.workers = 3;
  EXPECT_THROW(run(spec, src, opts), std::invalid_argument);
}

TEST(ReportRow, Format) {
  BoundReport info;
  info.check = "statistical_distance";
  info.quantity = 0.25;
  info.informational = true;
  info.subspace_id = 3;
  std::ostringstream os;
  write_report_row(os, info);
  EXPECT_EQ(os.str(), "statistical_distance,3,,0.25,,\n");

  BoundReport gate = make_bound_report("xor", 0.5, 1.5);
  gate.subspace_id = 4;
  gate.c_encoded = 2;
  os.str("");
  write_report_row(os, gate);
  EXPECT_EQ(os.str(), "xor,4,2,0.5,1.5,1\n");
}

}  // namespace
}  // namespace affext
