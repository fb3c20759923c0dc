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

#include "ssf/construct.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "ssf/errors.hpp"
#include "ssf/growth.hpp"
#include "ssf/level_set.hpp"
#include "ssf/nat.hpp"
#include "ssf/word.hpp"

namespace ssf {
namespace {

GrowthFunction norm_expr(const std::string& text) {
  return GrowthFunction::from_expression(text).normalize();
}

Word run_word(Symbol letter, std::uint64_t n) {
  return Word(static_cast<std::size_t>(n), letter);
}

std::vector<Word> run_words(Symbol count, std::uint64_t n) {
  std::vector<Word> out;
  for (Symbol i = 1; i <= count; ++i) out.push_back(run_word(i, n));
  return out;
}

/// A hand-assembled state over an explicit seed level, for exercising a
/// single transition in isolation.
ConstructionState synth_state(GrowthFunction f, std::uint64_t k,
                              std::vector<Word> words, std::uint64_t g,
                              Phase phase) {
  ConstructionState st(std::move(f));
  st.level = LevelSet::from_words(k, std::move(words));
  st.k = k;
  st.n = st.level->length();
  st.s = st.level->size();
  st.g = g;
  st.phase = phase;
  return st;
}

struct ExpectedRecord {
  std::uint64_t k;
  const char* tag;
  std::uint64_t n;
  Nat s;
  std::uint64_t g;
  bool balanced;
};

void expect_trace(const std::vector<TraceRecord>& got,
                  const std::vector<ExpectedRecord>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(got[i].k, want[i].k) << "record " << i;
    EXPECT_EQ(got[i].case_tag, want[i].tag) << "record " << i;
    EXPECT_EQ(got[i].n, want[i].n) << "record " << i;
    EXPECT_EQ(got[i].s, want[i].s) << "record " << i;
    EXPECT_EQ(got[i].g, want[i].g) << "record " << i;
    EXPECT_EQ(got[i].balanced, want[i].balanced) << "record " << i;
  }
}

void expect_trace_invariants(const std::vector<TraceRecord>& trace) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    EXPECT_GE(trace[i].s, Nat(2));
    if (i == 0) continue;
    EXPECT_GE(trace[i].g, trace[i - 1].g) << "record " << i;
    if (trace[i].k == trace[i - 1].k) {
      EXPECT_EQ(trace[i].n, trace[i - 1].n);
      EXPECT_EQ(trace[i].s, trace[i - 1].s);
    } else {
      EXPECT_EQ(trace[i].k, trace[i - 1].k + 1);
      EXPECT_LT(2 * trace[i - 1].n, trace[i].n) << "record " << i;
      EXPECT_LE(trace[i].n, 8 * trace[i - 1].n) << "record " << i;
    }
  }
}

ConstructionState advance_times(ConstructionState st, int times) {
  for (int i = 0; i < times; ++i) st = advance(std::move(st));
  return st;
}

// -- initialization -----------------------------------------------------------

TEST(InitState, AlphabetIsHalfOfFirstValue) {
  auto st = init_state(norm_expr("max(8*n, n^2)"));
  EXPECT_EQ(st.k, 1u);
  EXPECT_EQ(st.n, 1u);
  EXPECT_EQ(st.s, Nat(4));
  EXPECT_EQ(st.g, 0u);
  EXPECT_EQ(st.phase, Phase::AtBalanced);
  ASSERT_EQ(st.trace.size(), 1u);
  EXPECT_EQ(st.trace[0].case_tag, "init");
  EXPECT_TRUE(st.trace[0].balanced);
  EXPECT_EQ(st.level->materialize(),
            (std::vector<Word>{{1}, {2}, {3}, {4}}));
}

TEST(InitState, LargerFirstValueWidensTheAlphabet) {
  std::vector<Nat> values(8, Nat(100));
  auto st = init_state(GrowthFunction::from_table(values).normalize());
  EXPECT_EQ(st.s, Nat(50));
}

TEST(InitState, RequiresNormalizedProfile) {
  EXPECT_THROW(init_state(GrowthFunction::from_expression("n+1")),
               NormalizationError);
}

// -- classification -----------------------------------------------------------

TEST(Classify, ThresholdsAreExact) {
  // 6ns = 24 at (1, 4): strict > for the chain case, strict < of 6ns^2
  // for the widening case, everything else fans out.
  EXPECT_EQ(classify_values(norm_expr("max(8*n, n^2)"), 1, Nat(4)),
            CaseTag::I);
  EXPECT_EQ(classify_values(norm_expr("max(8*n, 2^n)"), 3, Nat(4)),
            CaseTag::II);
  EXPECT_EQ(classify_values(norm_expr("max(8*n, min(n^2, 3000))"), 81,
                            Nat(18)),
            CaseTag::III);
  // boundary: 6ns exactly f(3n) is not the chain case
  EXPECT_EQ(classify_values(norm_expr("8*n"), 1, Nat(4)), CaseTag::I);
}

TEST(Classify, RequiresBalancedPhase) {
  auto st = advance_times(init_state(norm_expr("max(8*n, 2^n)")), 2);
  EXPECT_EQ(st.phase, Phase::CaseIILoop);
  EXPECT_THROW(classify(st), DomainError);
}

// -- whole-run oracles ---------------------------------------------------------

TEST(Oracle, QuadraticProfileFansOutForever) {
  auto st = advance_times(init_state(norm_expr("max(8*n, n^2)")), 9);
  expect_trace(st.trace, {
                   {1, "init", 1, Nat(4), 0, true},
                   {2, "I", 3, Nat(4), 1, true},
                   {3, "I", 9, Nat(4), 3, true},
                   {4, "I", 27, Nat(13), 9, true},
                   {5, "I", 81, Nat(40), 27, true},
                   {6, "I", 243, Nat(121), 81, true},
                   {7, "I", 729, Nat(364), 243, true},
                   {8, "I", 2187, Nat(1093), 729, true},
                   {9, "I", 6561, Nat(3280), 2187, true},
                   {10, "I", 19683, Nat(9841), 6561, true},
               });
  expect_trace_invariants(st.trace);
  EXPECT_EQ(st.phase, Phase::AtBalanced);
  EXPECT_EQ(st.level->length(), st.n);
  EXPECT_EQ(st.level->size(), st.s);
}

TEST(Oracle, ExponentialProfileStaysInTheSquaringLoop) {
  auto st = advance_times(init_state(norm_expr("max(8*n, 2^n)")), 11);
  expect_trace(st.trace, {
                   {1, "init", 1, Nat(4), 0, true},
                   {2, "I", 3, Nat(4), 1, true},
                   {3, "II-prep", 24, Nat(8), 18, false},
                   {4, "II-sub1", 66, Nat(64), 18, false},
                   {5, "II-sub1", 150, Nat(4096), 18, false},
                   {6, "II-sub1", 318, Nat(1) << 24, 18, false},
                   {7, "II-sub1", 654, Nat(1) << 48, 18, false},
                   {8, "II-sub1", 1326, Nat(1) << 96, 18, false},
                   {9, "II-sub1", 2673, Nat(1) << 192, 21, false},
                   {10, "II-sub1", 5379, Nat(1) << 384, 33, false},
                   {11, "II-sub1", 10812, Nat(1) << 768, 54, false},
                   {12, "II-sub1", 21714, Nat(1) << 1536, 90, false},
               });
  expect_trace_invariants(st.trace);
  EXPECT_EQ(st.phase, Phase::CaseIILoop);
}

TEST(Oracle, CappedProfileEndsInAChainRun) {
  auto st = advance_times(init_state(norm_expr("max(8*n, min(n^2, 3000))")),
                          5);
  expect_trace(st.trace, {
                   {1, "init", 1, Nat(4), 0, true},
                   {2, "I", 3, Nat(4), 1, true},
                   {3, "I", 9, Nat(4), 3, true},
                   {4, "I", 27, Nat(13), 9, true},
                   {5, "I", 81, Nat(18), 27, true},
                   {6, "III-step", 243, Nat(9), 81, false},
                   {7, "III-step", 567, Nat(5), 81, false},
                   {8, "III-final", 1215, Nat(3), 81, true},
               });
  expect_trace_invariants(st.trace);
  EXPECT_EQ(st.phase, Phase::AtBalanced);
  EXPECT_EQ(st.n, 1215u);
  EXPECT_EQ(st.s, Nat(3));
}

TEST(Oracle, LinearProfileKeepsMinimalFanOut) {
  auto st = advance_times(init_state(norm_expr("n + 1")), 6);
  ASSERT_EQ(st.trace.size(), 7u);
  std::uint64_t n = 1, g = 0;
  for (std::size_t i = 0; i < st.trace.size(); ++i) {
    EXPECT_EQ(st.trace[i].case_tag, i == 0 ? "init" : "I");
    EXPECT_EQ(st.trace[i].n, n);
    EXPECT_EQ(st.trace[i].s, Nat(4));
    EXPECT_EQ(st.trace[i].g, g);
    EXPECT_TRUE(st.trace[i].balanced);
    g = n;
    n *= 3;
  }
  expect_trace_invariants(st.trace);
}

TEST(Oracle, RunsAreDeterministic) {
  auto a = advance_times(init_state(norm_expr("max(8*n, 2^n)")), 7);
  auto b = advance_times(init_state(norm_expr("max(8*n, 2^n)")), 7);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    EXPECT_EQ(a.trace[i].case_tag, b.trace[i].case_tag);
    EXPECT_EQ(a.trace[i].n, b.trace[i].n);
    EXPECT_EQ(a.trace[i].s, b.trace[i].s);
  }
  EXPECT_EQ(a.level->first_word(), b.level->first_word());
}

// -- single transitions on synthetic states ------------------------------------

TEST(Transition, WideningStepCapsCardinalityByTheBalancePoint) {
  auto st = synth_state(norm_expr("max(8*n, 2^n)"), 3, run_words(9, 9), 0,
                        Phase::AtBalanced);
  ASSERT_EQ(classify(st), CaseTag::II);
  auto out = step_case_II_prep(std::move(st));
  EXPECT_EQ(out.k, 4u);
  EXPECT_EQ(out.n, 72u);
  EXPECT_EQ(out.s, Nat(24));  // min(huge, max(9, f(3) = 24))
  EXPECT_EQ(out.g, 54u);
  EXPECT_EQ(out.phase, Phase::CaseIILoop);
  ASSERT_EQ(out.trace.size(), 1u);
  EXPECT_EQ(out.trace[0].case_tag, "II-prep");
  EXPECT_FALSE(out.trace[0].balanced);
  // promoted first member: alpha_1, gap, alpha_2, slide gap, gap, alpha_2
  Word first = run_word(1, 9);
  append_zeros(first, 9);
  append_word(first, run_word(2, 9));
  append_zeros(first, 27 + 9);
  append_word(first, run_word(2, 9));
  EXPECT_EQ(out.level->first_word(), first);
}

TEST(Transition, SquaringStepDoublesLengthAndSquaresCardinality) {
  auto st = synth_state(norm_expr("max(8*n, 2^n)"), 4, run_words(24, 72), 54,
                        Phase::CaseIILoop);
  auto out = step_case_II_sub1(std::move(st));
  EXPECT_EQ(out.k, 5u);
  EXPECT_EQ(out.n, 198u);  // 2*72 + max(54, ceil(72/16))
  EXPECT_EQ(out.s, Nat(576));
  EXPECT_EQ(out.g, 54u);
  EXPECT_EQ(out.phase, Phase::CaseIILoop);
  EXPECT_EQ(out.trace.back().case_tag, "II-sub1");
  EXPECT_FALSE(out.trace.back().balanced);
  Word first = run_word(1, 72);
  append_zeros(first, 54);
  append_word(first, run_word(2, 72));
  EXPECT_EQ(out.level->first_word(), first);
  // even cardinality and unbalanced: the wrap member keeps its natural place
  EXPECT_EQ(out.level->output_for_param(Nat(23 * 24)), Nat(23 * 24));
}

TEST(Transition, SquaringStepRejectsSlowProfiles) {
  std::vector<Nat> values(900, Nat(49000));
  auto st = synth_state(GrowthFunction::from_table(values).normalize(), 5,
                        run_words(10, 100), 50, Phase::CaseIILoop);
  EXPECT_THROW(step_case_II_sub1(std::move(st)), DomainError);
}

TEST(Transition, LoopExitRejectsFastProfiles) {
  auto st = synth_state(norm_expr("max(8*n, 2^n)"), 4, run_words(24, 72), 54,
                        Phase::CaseIILoop);
  EXPECT_THROW(step_case_II_sub2(std::move(st)), DomainError);
}

TEST(Transition, LoopExitBisectsTheShortenedSquare) {
  std::vector<Nat> values;
  for (std::uint64_t m = 1; m <= 900; ++m) {
    values.push_back(m < 260 ? Nat(49000)
                             : (m < 300 ? Nat(200) * m : Nat(72000)));
  }
  auto st = synth_state(GrowthFunction::from_table(values).normalize(), 5,
                        run_words(10, 100), 50, Phase::CaseIILoop);
  auto out = step_case_II_sub2(std::move(st));
  EXPECT_EQ(out.k, 6u);
  EXPECT_EQ(out.n, 260u);  // least m with f(m) >= 2 m s^2
  EXPECT_EQ(out.s, Nat(100));
  EXPECT_EQ(out.g, 60u);   // 260 - 2*100
  EXPECT_EQ(out.phase, Phase::AtBalanced);
  EXPECT_EQ(out.trace.back().case_tag, "II-sub2b");
  EXPECT_TRUE(out.trace.back().balanced);
  Word first = run_word(1, 100);
  append_zeros(first, 60);
  append_word(first, run_word(2, 100));
  EXPECT_EQ(out.level->first_word(), first);
}

TEST(Transition, LoopExitCanFanOutDirectly) {
  std::vector<Nat> values;
  for (std::uint64_t m = 1; m <= 900; ++m) {
    values.push_back(m < 280 ? Nat(40000) : Nat(48000));
  }
  auto st = synth_state(GrowthFunction::from_table(values).normalize(), 5,
                        run_words(10, 100), 50, Phase::CaseIILoop);
  auto out = step_case_II_sub2(std::move(st));
  EXPECT_EQ(out.k, 6u);
  EXPECT_EQ(out.n, 300u);
  EXPECT_EQ(out.s, Nat(80));  // floor(48000 / 600)
  EXPECT_EQ(out.g, 100u);
  EXPECT_EQ(out.phase, Phase::AtBalanced);
  EXPECT_EQ(out.trace.back().case_tag, "II-sub2a");
  EXPECT_TRUE(out.trace.back().balanced);
  Word first = run_word(1, 100);
  append_zeros(first, 100);
  append_word(first, run_word(2, 100));
  EXPECT_EQ(out.level->first_word(), first);
}

TEST(Transition, LoopExitCanHandOverToTheChainRun) {
  std::vector<Nat> values;
  for (std::uint64_t m = 1; m <= 900; ++m) {
    values.push_back(8 * m < 5000 ? Nat(5000) : Nat(8) * m);
  }
  auto f = GrowthFunction::from_table(values).normalize();
  auto st = synth_state(f, 5, run_words(10, 100), 50, Phase::CaseIILoop);
  auto mid = step_case_II_sub2(std::move(st));
  EXPECT_EQ(mid.k, 5u);  // same level, re-marked as balanced
  EXPECT_EQ(mid.n, 100u);
  EXPECT_EQ(mid.s, Nat(10));
  EXPECT_EQ(mid.g, 50u);
  EXPECT_EQ(mid.phase, Phase::CaseIIIRun);
  EXPECT_EQ(mid.trace.back().case_tag, "II-sub2c");
  EXPECT_TRUE(mid.trace.back().balanced);
  auto out = advance(std::move(mid));
  EXPECT_EQ(out.k, 6u);
  EXPECT_EQ(out.n, 300u);
  EXPECT_EQ(out.s, Nat(5));
  EXPECT_EQ(out.g, 100u);
  EXPECT_EQ(out.phase, Phase::AtBalanced);
  EXPECT_EQ(out.trace.back().case_tag, "III-final");
  EXPECT_TRUE(out.trace.back().balanced);
  expect_trace_invariants(out.trace);
}

TEST(Transition, ChainRunHalvesUntilTheProfileCatchesUp) {
  auto st = synth_state(norm_expr("max(8*n, min(n^2, 3000))"), 4,
                        run_words(20, 60), 0, Phase::AtBalanced);
  ASSERT_EQ(classify(st), CaseTag::III);
  auto out = advance(std::move(st));
  expect_trace(out.trace, {
                   {5, "III-step", 180, Nat(10), 60, false},
                   {6, "III-step", 420, Nat(5), 60, false},
                   {7, "III-final", 900, Nat(3), 60, true},
               });
  EXPECT_EQ(out.phase, Phase::AtBalanced);
  // final members are blocks of eight entry members over the entry gap
  const Word w = out.level->first_word();
  ASSERT_EQ(w.size(), 900u);
  EXPECT_EQ(w[0], 1u);
  EXPECT_EQ(w[60], 0u);
  EXPECT_EQ(w[120], 2u);
  EXPECT_EQ(w[840], 8u);
  const Word w2 = out.level->word_at(2);
  EXPECT_EQ(w2[0], 17u);
  EXPECT_EQ(w2[480], 1u);  // wraps around the entry level
}

TEST(Transition, PhasePreconditionsAreEnforced) {
  auto quad = init_state(norm_expr("max(8*n, n^2)"));
  EXPECT_THROW(step_case_II_sub1(quad), DomainError);
  EXPECT_THROW(step_case_II_sub2(quad), DomainError);
  EXPECT_THROW(run_case_III(quad), DomainError);  // classifies as fan-out

  auto exp2 = advance_times(init_state(norm_expr("max(8*n, 2^n)")), 1);
  ASSERT_EQ(classify(exp2), CaseTag::II);
  EXPECT_THROW(step_case_I(exp2), DomainError);
  EXPECT_THROW(run_case_III(exp2), DomainError);

  auto loop = advance_times(init_state(norm_expr("max(8*n, 2^n)")), 2);
  ASSERT_EQ(loop.phase, Phase::CaseIILoop);
  EXPECT_THROW(step_case_I(loop), DomainError);
  EXPECT_THROW(step_case_II_prep(loop), DomainError);
  EXPECT_THROW(run_case_III(loop), DomainError);
}

// -- limit-word prefixes --------------------------------------------------------

TEST(OmegaPrefix, MatchesHandComputedPrefixes) {
  auto st = init_state(norm_expr("max(8*n, n^2)"));
  EXPECT_EQ(omega_prefix(st, 5), (Word{1, 0, 2, 0, 0}));
  EXPECT_EQ(omega_prefix(st, 9), (Word{1, 0, 2, 0, 0, 0, 3, 0, 4}));
}

TEST(OmegaPrefix, CrossesIntoTheWideningRule) {
  auto st = init_state(norm_expr("max(8*n, 2^n)"));
  Word want{1, 0, 2, 0, 0, 0, 3, 0, 4};
  append_zeros(want, 12);
  append_word(want, Word{3, 0, 4});
  EXPECT_EQ(omega_prefix(st, 24), want);
}

TEST(OmegaPrefix, LongerPrefixesExtendShorterOnes) {
  auto st = init_state(norm_expr("max(8*n, n^2)"));
  const Word big = omega_prefix(st, 2000);
  const Word small = omega_prefix(st, 500);
  ASSERT_EQ(big.size(), 2000u);
  ASSERT_EQ(small.size(), 500u);
  EXPECT_TRUE(std::equal(small.begin(), small.end(), big.begin()));

  auto st2 = init_state(norm_expr("max(8*n, 2^n)"));
  const Word big2 = omega_prefix(st2, 1500);
  const Word small2 = omega_prefix(st2, 700);
  EXPECT_TRUE(std::equal(small2.begin(), small2.end(), big2.begin()));
}

TEST(OmegaPrefix, StateVariantExposesTheRun) {
  auto [word, st] = omega_prefix_state(init_state(norm_expr("max(8*n, n^2)")),
                                       100);
  EXPECT_EQ(word.size(), 100u);
  EXPECT_GE(st.n, 100u);
  EXPECT_EQ(st.trace.back().n, st.n);
  EXPECT_EQ(st.level->length(), st.n);
}

TEST(OmegaPrefix, EnforcesTheMemoryBudget) {
  auto st = init_state(norm_expr("max(8*n, n^2)"));
  EXPECT_THROW(omega_prefix(st, (std::uint64_t{1} << 22) + 1), ResourceError);
  EXPECT_THROW(omega_prefix(st, 100, 100), ResourceError);
  EXPECT_NO_THROW(omega_prefix(st, 100, std::uint64_t{1} << 20));
}

}  // namespace
}  // namespace ssf
