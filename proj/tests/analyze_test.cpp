// Copyright 2026 the ssf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ssf/analyze.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ssf/construct.hpp"
#include "ssf/growth.hpp"
#include "ssf/word.hpp"

namespace ssf {
namespace {

Word dw(const std::string& digits) {
  Word w;
  for (char c : digits) w.push_back(static_cast<Symbol>(c - '0'));
  return w;
}

GrowthFunction norm_expr(const std::string& expr) {
  return GrowthFunction::from_expression(expr).normalize();
}

Word alternating(std::size_t len) {
  Word w(len);
  for (std::size_t i = 0; i < len; ++i) w[i] = i % 2;
  return w;
}

std::size_t count_verdict(const Report& r, const std::string& check,
                          const std::string& verdict) {
  std::size_t c = 0;
  for (const CheckRecord& rec : r) {
    if (rec.check == check && rec.verdict == verdict) ++c;
  }
  return c;
}

TEST(Profile, ConstantWordOracle) {
  for (ProfileMode mode : {ProfileMode::kFast, ProfileMode::kNaive}) {
    const ComplexityProfile pr = complexity_profile(Word(5, 0), 3, mode);
    EXPECT_EQ(pr.p, (std::vector<std::uint64_t>{1, 1, 1}));
    EXPECT_EQ(pr.source_length, 5u);
    EXPECT_EQ(pr.reliable_horizon, 1u);
  }
}

TEST(Profile, HandEnumeratedOracle) {
  for (ProfileMode mode : {ProfileMode::kFast, ProfileMode::kNaive}) {
    const ComplexityProfile pr = complexity_profile(dw("0110"), 4, mode);
    EXPECT_EQ(pr.p, (std::vector<std::uint64_t>{2, 3, 2, 1}));
  }
}

TEST(Profile, AtAccessorCoversEndpoints) {
  const ComplexityProfile pr = complexity_profile(dw("0110"), 4);
  EXPECT_EQ(pr.at(0), 1u);  // the empty factor
  EXPECT_EQ(pr.at(1), 2u);
  EXPECT_EQ(pr.at(4), 1u);
  EXPECT_THROW(pr.at(5), DomainError);
}

TEST(Profile, RejectsBadRanges) {
  EXPECT_THROW(complexity_profile(Word{}, 1), DomainError);
  EXPECT_THROW(complexity_profile(dw("01"), 0), DomainError);
  EXPECT_THROW(complexity_profile(dw("01"), 3), DomainError);
}

TEST(Profile, FastMatchesNaiveOnRandomWords) {
  std::mt19937 rng(123456);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t len = 1 + rng() % 2000;
    const Symbol sigma = 2 + rng() % 7;
    Word w(len);
    for (auto& c : w) c = rng() % sigma;
    const auto fast = complexity_profile(w, len, ProfileMode::kFast);
    const auto naive = complexity_profile(w, len, ProfileMode::kNaive);
    ASSERT_EQ(fast.p, naive.p) << "trial " << trial << " len " << len;
  }
}

TEST(Profile, PrefixCountsAreMonotoneUnderExtension) {
  ConstructionState st = init_state(norm_expr("max(8*n, n^2)"));
  const Word longer = omega_prefix(st, 4000);
  Word shorter(longer.begin(), longer.begin() + 2000);
  const auto p_long = complexity_profile(longer, 500).p;
  const auto p_short = complexity_profile(shorter, 500).p;
  for (std::size_t i = 0; i < 500; ++i) {
    EXPECT_LE(p_short[i], p_long[i]) << "n=" << i + 1;
  }
}

TEST(ProfileChecks, PeriodicWordTakesBoundedBranch) {
  const auto pr = complexity_profile(alternating(1200), 300);
  const Report report = profile_checks(pr);
  ASSERT_EQ(report.size(), 3u);
  for (const CheckRecord& rec : report) {
    EXPECT_EQ(rec.verdict, "pass") << rec.check;
  }
  EXPECT_TRUE(all_passed(report));
  for (std::size_t n = 2; n <= 300; ++n) EXPECT_EQ(pr.at(n), 2u);
}

TEST(ProfileChecks, GeneratedWordGrowsLinearly) {
  ConstructionState st = init_state(norm_expr("max(8*n, n^2)"));
  const Word w = omega_prefix(st, 4000);
  const auto pr = complexity_profile(w, 1000);
  EXPECT_TRUE(all_passed(profile_checks(pr)));
  for (std::uint64_t n = 1; n <= 1000; ++n) {
    EXPECT_GE(pr.at(n), n + 1) << "n=" << n;
  }
}

TEST(ProfileChecks, FlagsManufacturedViolations) {
  ComplexityProfile bad;
  bad.source_length = 1000;
  bad.reliable_horizon = 250;
  bad.p.assign(250, 0);
  for (std::size_t i = 0; i < 250; ++i) bad.p[i] = i + 2;  // p(n) = n+1
  bad.p[10] = 5;  // drop below p(10)
  Report report = profile_checks(bad);
  EXPECT_EQ(count_verdict(report, "monotone", "fail"), 1u);

  for (std::size_t i = 0; i < 250; ++i) bad.p[i] = i + 2;
  bad.p[1] = 9;  // p(2) = 9 > p(1)^2 = 4... and non-monotone stays legal
  report = profile_checks(bad);
  EXPECT_EQ(count_verdict(report, "submultiplicative", "fail"), 1u);

  for (std::size_t i = 0; i < 250; ++i) bad.p[i] = i + 2;
  bad.p[4] = 5;   // p(5) = 5 <= 5 pins the profile...
  bad.p[5] = 7;   // ...but it grows again
  report = profile_checks(bad);
  EXPECT_EQ(count_verdict(report, "bounded-or-linear-dichotomy", "fail"), 1u);
}

TEST(BalancedBounds, QuadraticOmegaPrefix) {
  ConstructionState st = init_state(norm_expr("max(8*n, n^2)"));
  auto [w, final_state] = omega_prefix_state(std::move(st), 10000);
  const auto pr = complexity_profile(w, 2000);
  const Report report =
      balanced_bounds_check(pr, final_state.trace, final_state.f);
  EXPECT_TRUE(all_passed(report));
  // Levels k=1..7 have n_k <= 2000: each contributes the two upper records.
  EXPECT_EQ(count_verdict(report, "upper-count-bound", "pass"), 7u);
  EXPECT_EQ(count_verdict(report, "count-vs-target", "pass"), 7u);
  // Lower bounds apply where 2 n_k <= 2000; only k=1..3 are visible at
  // L=10^4 (the k=4 visibility length is 19683).
  EXPECT_EQ(count_verdict(report, "lower-count-bound", "pass"), 3u);
  EXPECT_EQ(count_verdict(report, "lower-count-bound", "skipped"), 4u);
}

TEST(BalancedBounds, ExponentialOmegaPrefix) {
  ConstructionState st = init_state(norm_expr("max(8*n, 2^n)"));
  auto [w, final_state] = omega_prefix_state(std::move(st), 10000);
  const auto pr = complexity_profile(w, 2000);
  const Report report =
      balanced_bounds_check(pr, final_state.trace, final_state.f);
  EXPECT_TRUE(all_passed(report));
  // Only k=1 (n=1) and k=2 (n=3) are balanced; both visible at L=10^4
  // (visibility lengths 150 and 318).
  EXPECT_EQ(count_verdict(report, "upper-count-bound", "pass"), 2u);
  EXPECT_EQ(count_verdict(report, "lower-count-bound", "pass"), 2u);
  EXPECT_EQ(count_verdict(report, "lower-count-bound", "skipped"), 0u);
}

TEST(BalancedBounds, ShortPrefixSkipsInvisibleLevels) {
  ConstructionState st = init_state(norm_expr("max(8*n, n^2)"));
  auto [w, final_state] = omega_prefix_state(std::move(st), 10000);
  Word head(w.begin(), w.begin() + 100);  // below H_1 = 81? no: cuts H_2/H_3
  const auto pr = complexity_profile(head, 25);
  const Report report =
      balanced_bounds_check(pr, final_state.trace, final_state.f);
  EXPECT_TRUE(all_passed(report));
  // n_k <= 25 for k=1..3 (1, 3, 9); 2 n_k <= 25 for k=1..3 as well, but only
  // k=1 has visibility length 81 <= 100.
  EXPECT_EQ(count_verdict(report, "lower-count-bound", "pass"), 1u);
  EXPECT_EQ(count_verdict(report, "lower-count-bound", "skipped"), 2u);
}

TEST(Sandwich, QuadraticOmegaPrefix) {
  ConstructionState st = init_state(norm_expr("max(8*n, n^2)"));
  auto [w, final_state] = omega_prefix_state(std::move(st), 10000);
  const auto pr = complexity_profile(w, 2000);
  const Report report = sandwich_check(pr, final_state.trace, final_state.f);
  EXPECT_TRUE(all_passed(report));
  EXPECT_EQ(count_verdict(report, "count-upper-sandwich", "pass"), 7u);
  EXPECT_EQ(count_verdict(report, "count-lower-sandwich", "pass"), 3u);
  EXPECT_EQ(count_verdict(report, "count-lower-sandwich", "skipped"), 4u);
}

TEST(Recurrence, SingleLeadingSymbolFails) {
  Word w(4096, 0);
  w[0] = 1;
  const RecurrenceReport rr = recurrence_check(w, 8);
  EXPECT_FALSE(rr.passed());
  EXPECT_EQ(rr.violation_count, 8u);
  std::vector<std::uint64_t> lengths;
  for (const auto& v : rr.witnesses) lengths.push_back(v.length);
  std::sort(lengths.begin(), lengths.end());
  EXPECT_EQ(lengths, (std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 8}));
}

TEST(Recurrence, PeriodicWordPasses) {
  const RecurrenceReport rr = recurrence_check(alternating(4096), 16);
  EXPECT_TRUE(rr.passed());
  EXPECT_EQ(rr.window, 1024u);
}

TEST(Recurrence, GeneratedWordPasses) {
  // Recurrence at factor scale 16 requires enough construction levels that
  // every early boundary pattern has re-entered the enumeration; 10^5 is
  // comfortably past that point for this profile.
  ConstructionState st = init_state(norm_expr("max(8*n, n^2)"));
  const Word w = omega_prefix(st, 100000);
  EXPECT_TRUE(recurrence_check(w, 16).passed());
}

TEST(Recurrence, RejectsDegenerateInputs) {
  EXPECT_THROW(recurrence_check(dw("0101"), 0), DomainError);
  EXPECT_THROW(recurrence_check(dw("0101"), 2), DomainError);
}

TEST(Gap, UnitThresholdSplitsEveryRun) {
  const GapDecomposition d = gap_decomposition(dw("102"), 1);
  ASSERT_EQ(d.blocks.size(), 2u);
  EXPECT_EQ(d.blocks[0], dw("1"));
  EXPECT_EQ(d.blocks[1], dw("2"));
  EXPECT_EQ(d.gaps, (std::vector<std::uint64_t>{1}));
  EXPECT_EQ(d.reconstruct(), dw("102"));
}

TEST(Gap, HighThresholdKeepsTheWordWhole) {
  const GapDecomposition d = gap_decomposition(dw("102"), 3);
  ASSERT_EQ(d.blocks.size(), 1u);
  EXPECT_EQ(d.blocks[0], dw("102"));
  EXPECT_TRUE(d.gaps.empty());
  EXPECT_EQ(d.reconstruct(), dw("102"));
}

TEST(Gap, BoundaryRunsYieldEmptyEdgeBlocks) {
  const GapDecomposition d = gap_decomposition(dw("000102000"), 3);
  ASSERT_EQ(d.blocks.size(), 3u);
  EXPECT_TRUE(d.blocks[0].empty());
  EXPECT_EQ(d.blocks[1], dw("102"));
  EXPECT_TRUE(d.blocks[2].empty());
  EXPECT_EQ(d.gaps, (std::vector<std::uint64_t>{3, 3}));
  EXPECT_EQ(d.reconstruct(), dw("000102000"));
}

TEST(Gap, RejectsZeroThreshold) {
  EXPECT_THROW(gap_decomposition(dw("102"), 0), DomainError);
}

TEST(GapStructure, GeneratedPrefixDecomposesIntoLevelMembers) {
  ConstructionState st = init_state(norm_expr("max(8*n, n^2)"));
  st = advance(std::move(st));  // level k=2: words of length 3
  const LevelSet::Ptr x2 = st.level;
  auto [w, final_state] = omega_prefix_state(std::move(st), 10000);
  const GapDecomposition d = gap_decomposition(w, x2->length());
  EXPECT_EQ(d.reconstruct(), w);
  EXPECT_TRUE(all_passed(gap_structure_check(d, *x2)));
  EXPECT_GT(d.blocks.size(), 100u);
}

TEST(GapStructure, WorksAtTheNextScaleToo) {
  ConstructionState st = init_state(norm_expr("max(8*n, n^2)"));
  st = advance(std::move(st));
  st = advance(std::move(st));  // level k=3: words of length 9
  const LevelSet::Ptr x3 = st.level;
  auto [w, final_state] = omega_prefix_state(std::move(st), 10000);
  const GapDecomposition d = gap_decomposition(w, x3->length());
  EXPECT_EQ(d.reconstruct(), w);
  EXPECT_TRUE(all_passed(gap_structure_check(d, *x3)));
}

TEST(GapStructure, DetectsForeignBlocks) {
  ConstructionState st = init_state(norm_expr("max(8*n, n^2)"));
  st = advance(std::move(st));
  const GapDecomposition d = gap_decomposition(dw("555000555000102"), 3);
  const Report report = gap_structure_check(d, *st.level);
  EXPECT_FALSE(all_passed(report));
}

}  // namespace
}  // namespace ssf
