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

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "ssf/construct.hpp"
#include "ssf/errors.hpp"
#include "ssf/growth.hpp"
#include "ssf/level_set.hpp"
#include "ssf/nat.hpp"
#include "ssf/suffix_automaton.hpp"
#include "ssf/word.hpp"

namespace ssf {

// ---------------------------------------------------------------------------
// Measurements on finite words: factor-count profiles, structural inequality
// checks against those profiles and against generator traces, recurrence
// scans, and the block/gap decomposition induced by long zero runs.
// ---------------------------------------------------------------------------

/// Distinct-factor counts of a finite word.  p(n) is exact for every n up to
/// max_length, but only prefix-of-an-infinite-word conclusions drawn at
/// n <= reliable_horizon (a quarter of the source) are considered safe from
/// edge truncation.
struct ComplexityProfile {
  std::vector<std::uint64_t> p;  // p[i] = count for length i + 1
  std::uint64_t source_length = 0;
  std::uint64_t reliable_horizon = 0;

  std::uint64_t at(std::uint64_t n) const {
    if (n == 0) return 1;
    if (n > p.size()) {
      throw DomainError("profile only covers lengths up to " +
                        std::to_string(p.size()));
    }
    return p[n - 1];
  }

  std::uint64_t max_length() const { return p.size(); }
};

enum class ProfileMode { kFast, kNaive };

/// One verdict line of a structural report.
struct CheckRecord {
  std::string check;     // what was tested
  std::string location;  // where, e.g. "n=12" or "k=3"
  std::string expected;  // bound or reference value, rendered
  std::string actual;    // measured value, rendered
  std::string verdict;   // "pass", "fail", or "skipped"
};

using Report = std::vector<CheckRecord>;

inline bool all_passed(const Report& report) {
  return std::none_of(report.begin(), report.end(), [](const CheckRecord& r) {
    return r.verdict == "fail";
  });
}

namespace detail {

/// Double rolling hash of every window of one length, collected into a set;
/// collisions across both 64-bit channels are vanishingly unlikely and this
/// path exists only as an independent cross-check of the automaton counts.
inline std::uint64_t naive_count_one_length(const Word& w, std::uint64_t n) {
  static constexpr std::uint64_t kMod1 = 0xffffffffffffffc5ull;  // < 2^64
  static constexpr std::uint64_t kB1 = 1000003;
  static constexpr std::uint64_t kB2 = 998244353;
  const std::size_t len = w.size();
  if (n == 0 || n > len) return 0;
  auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % m);
  };
  auto addmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) + b) % m);
  };
  // Channel 1: mod a 64-bit prime; channel 2: natural wraparound mod 2^64.
  std::uint64_t pow1 = 1, pow2 = 1;
  for (std::uint64_t i = 0; i + 1 < n; ++i) {
    pow1 = mulmod(pow1, kB1, kMod1);
    pow2 = pow2 * kB2;
  }
  std::uint64_t h1 = 0, h2 = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    h1 = addmod(mulmod(h1, kB1, kMod1), w[i] + std::uint64_t{1}, kMod1);
    h2 = h2 * kB2 + w[i] + 1;
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(len - n + 2);
  seen.insert(h1 * 0x9e3779b97f4a7c15ull ^ h2);
  for (std::size_t i = n; i < len; ++i) {
    const std::uint64_t out1 = mulmod(pow1, w[i - n] + std::uint64_t{1}, kMod1);
    const std::uint64_t kept = h1 >= out1 ? h1 - out1 : h1 + (kMod1 - out1);
    h1 = addmod(mulmod(kept, kB1, kMod1), w[i] + std::uint64_t{1}, kMod1);
    h2 = (h2 - pow2 * (w[i - n] + 1)) * kB2 + w[i] + 1;
    seen.insert(h1 * 0x9e3779b97f4a7c15ull ^ h2);
  }
  return seen.size();
}

}  // namespace detail

/// Measures p(1..max_length) of w.  kFast builds one suffix automaton;
/// kNaive hashes every window per length (quadratic, for cross-checking).
inline ComplexityProfile complexity_profile(
    const Word& w, std::uint64_t max_length,
    ProfileMode mode = ProfileMode::kFast) {
  if (w.empty()) throw DomainError("cannot profile an empty word");
  if (max_length == 0 || max_length > w.size()) {
    throw DomainError("profile length must lie in [1, word length]");
  }
  ComplexityProfile profile;
  profile.source_length = w.size();
  profile.reliable_horizon = w.size() / 4;
  if (mode == ProfileMode::kFast) {
    SuffixAutomaton sam(w);
    profile.p = sam.count_per_length(max_length);
  } else {
    profile.p.reserve(max_length);
    for (std::uint64_t n = 1; n <= max_length; ++n) {
      profile.p.push_back(detail::naive_count_one_length(w, n));
    }
  }
  return profile;
}

// ---------------------------------------------------------------------------
// Generic profile sanity checks.
// ---------------------------------------------------------------------------

/// Checks a measured profile against the inequalities any factor-count
/// sequence obeys.  All three checks are confined to the reliable horizon:
/// counts at lengths near the source length are truncated by the word end
/// and would break monotonicity trivially.
inline Report profile_checks(const ComplexityProfile& profile,
                             std::uint64_t submultiplicativity_cap = 4096) {
  Report report;
  const auto& p = profile.p;
  const std::uint64_t h =
      std::min<std::uint64_t>(profile.max_length(), profile.reliable_horizon);

  // Monotonicity: within the horizon every factor extends to the right.
  bool mono_ok = true;
  std::string mono_loc = "all n";
  for (std::uint64_t n = 1; n < h; ++n) {
    if (p[n] < p[n - 1]) {
      mono_ok = false;
      mono_loc = "n=" + std::to_string(n + 1);
      break;
    }
  }
  report.push_back(CheckRecord{"monotone", mono_loc, "p(n+1) >= p(n)", "",
                               mono_ok ? "pass" : "fail"});

  // Submultiplicativity: every factor of length n+m splits into a length-n
  // prefix and a length-m suffix.  Pairs capped for cost.
  bool sub_ok = true;
  std::string sub_loc = "all pairs";
  const std::uint64_t cap = std::min<std::uint64_t>(h, submultiplicativity_cap);
  for (std::uint64_t n = 1; n <= cap && sub_ok; ++n) {
    for (std::uint64_t m = n; n + m <= cap; ++m) {
      const Nat lhs = Nat(p[n + m - 1]);
      const Nat rhs = Nat(p[n - 1]) * Nat(p[m - 1]);
      if (lhs > rhs) {
        sub_ok = false;
        sub_loc = "n=" + std::to_string(n) + ",m=" + std::to_string(m);
        break;
      }
    }
  }
  report.push_back(CheckRecord{"submultiplicative", sub_loc,
                               "p(n+m) <= p(n)*p(m)", "",
                               sub_ok ? "pass" : "fail"});

  // Bounded-or-growing dichotomy: once p(n) <= n at some length, the word
  // is pinned to a periodic tail and p must stay at that value from then on
  // (within the horizon); otherwise p(n) >= n+1 throughout.
  bool dich_ok = true;
  std::string dich_loc = "horizon";
  std::uint64_t pinned = 0;  // value p must keep once bounded, 0 = growing
  for (std::uint64_t n = 1; n <= h; ++n) {
    if (pinned != 0) {
      if (p[n - 1] != pinned) {
        dich_ok = false;
        dich_loc = "n=" + std::to_string(n);
        break;
      }
    } else if (p[n - 1] <= n) {
      pinned = p[n - 1];
    }
  }
  report.push_back(CheckRecord{
      "bounded-or-linear-dichotomy", dich_loc,
      "p(n) >= n+1 until bounded, then constant", "",
      dich_ok ? "pass" : "fail"});
  return report;
}

// ---------------------------------------------------------------------------
// Bounds at the balanced levels of a generator run.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string nat_str(const Nat& x) { return x.str(); }

/// The length from which level k's local structure is pinned down in the
/// generated word: every level-k word has appeared once the construction
/// reaches absolute level k + ceil(log2 s_k) + 2.  Returns the n-value of
/// the last trace record at that absolute level, if the trace reaches it.
inline std::optional<std::uint64_t> visibility_length(
    const std::vector<TraceRecord>& trace, std::uint64_t k, const Nat& s_k) {
  const std::uint64_t target = k + ceil_log2(s_k) + 2;
  std::optional<std::uint64_t> found;
  for (const TraceRecord& r : trace) {
    if (r.k == target) found = r.n;
  }
  return found;
}

}  // namespace detail

/// Verifies the two-sided factor-count bounds the generator guarantees at
/// its balanced levels, against a measured profile of a prefix of its word.
///
/// Upper side at a balanced level (n_k, s_k): p(n_k) <= 3 n_k s_k, and the
/// balance inequality itself gives 6 n_k s_k <= 3 f(n_k), so the measured
/// count stays within a constant of the target.  Checked whenever n_k is
/// within the profile range.
///
/// Lower side: p(2 n_k) >= n_k s_k.  This needs every level-k word to have
/// entered the prefix, which is certain only from the visibility length of
/// level k onward; shorter prefixes yield "skipped".
inline Report balanced_bounds_check(const ComplexityProfile& profile,
                                    const std::vector<TraceRecord>& trace,
                                    const GrowthFunction& f) {
  Report report;
  for (const TraceRecord& rec : trace) {
    if (!rec.balanced) continue;
    const Nat bound_upper = Nat(3) * Nat(rec.n) * rec.s;
    if (rec.n <= profile.max_length()) {
      const Nat measured(profile.at(rec.n));
      report.push_back(CheckRecord{
          "upper-count-bound", "k=" + std::to_string(rec.k) +
          ",n=" + std::to_string(rec.n),
          "p(n_k) <= " + detail::nat_str(bound_upper),
          detail::nat_str(measured),
          measured <= bound_upper ? "pass" : "fail"});
      const Nat six_ns = Nat(6) * Nat(rec.n) * rec.s;
      const Nat three_f = Nat(3) * f.eval(rec.n);
      report.push_back(CheckRecord{
          "count-vs-target", "k=" + std::to_string(rec.k) +
          ",n=" + std::to_string(rec.n),
          "6 n_k s_k <= " + detail::nat_str(three_f),
          detail::nat_str(six_ns),
          six_ns <= three_f ? "pass" : "fail"});
    }
    const std::uint64_t two_n = 2 * rec.n;
    if (two_n <= profile.max_length()) {
      const auto vis = detail::visibility_length(trace, rec.k, rec.s);
      const bool visible = vis.has_value() && *vis <= profile.source_length;
      const Nat bound_lower = Nat(rec.n) * rec.s;
      if (visible) {
        const Nat measured(profile.at(two_n));
        report.push_back(CheckRecord{
            "lower-count-bound", "k=" + std::to_string(rec.k) +
            ",n=" + std::to_string(rec.n),
            "p(2 n_k) >= " + detail::nat_str(bound_lower),
            detail::nat_str(measured),
            measured >= bound_lower ? "pass" : "fail"});
      } else {
        report.push_back(CheckRecord{
            "lower-count-bound", "k=" + std::to_string(rec.k) +
            ",n=" + std::to_string(rec.n),
            "p(2 n_k) >= " + detail::nat_str(bound_lower),
            "prefix shorter than visibility length", "skipped"});
      }
    }
  }
  return report;
}

/// Verifies the sandwich the balance inequalities promise at balanced
/// levels: f(floor(n_k / 3)) <= 6 p(2 n_k) and 2 p(n_k) <= 3 f(n_k).
/// Both sides are exact integer comparisons on the measured profile.
inline Report sandwich_check(const ComplexityProfile& profile,
                             const std::vector<TraceRecord>& trace,
                             const GrowthFunction& f) {
  Report report;
  for (const TraceRecord& rec : trace) {
    if (!rec.balanced) continue;
    if (rec.n <= profile.max_length()) {
      const Nat lhs = Nat(2) * Nat(profile.at(rec.n));
      const Nat rhs = Nat(3) * f.eval(rec.n);
      report.push_back(CheckRecord{
          "count-upper-sandwich", "k=" + std::to_string(rec.k) +
          ",n=" + std::to_string(rec.n),
          "2 p(n_k) <= " + detail::nat_str(rhs), detail::nat_str(lhs),
          lhs <= rhs ? "pass" : "fail"});
    }
    const std::uint64_t two_n = 2 * rec.n;
    if (two_n <= profile.max_length()) {
      const auto vis = detail::visibility_length(trace, rec.k, rec.s);
      const bool visible = vis.has_value() && *vis <= profile.source_length;
      const Nat lhs = f.eval(rec.n / 3);
      const Nat rhs = Nat(6) * Nat(profile.at(two_n));
      if (visible) {
        report.push_back(CheckRecord{
            "count-lower-sandwich", "k=" + std::to_string(rec.k) +
            ",n=" + std::to_string(rec.n),
            detail::nat_str(lhs) + " <= 6 p(2 n_k)", detail::nat_str(rhs),
            lhs <= rhs ? "pass" : "fail"});
      } else {
        report.push_back(CheckRecord{
            "count-lower-sandwich", "k=" + std::to_string(rec.k) +
            ",n=" + std::to_string(rec.n),
            detail::nat_str(lhs) + " <= 6 p(2 n_k)",
            "prefix shorter than visibility length", "skipped"});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Recurrence scan.
// ---------------------------------------------------------------------------

/// A factor that fails the recurrence window test.
struct RecurrenceViolation {
  std::uint64_t length;        // factor length n
  std::uint64_t last_end;      // last end position of that factor class
  std::uint64_t class_longest; // longest factor in the same end-set class
};

struct RecurrenceReport {
  std::uint64_t max_factor_length = 0;
  std::uint64_t window = 0;  // quarter of the scanned prefix
  std::uint64_t violation_count = 0;
  std::vector<RecurrenceViolation> witnesses;  // capped sample
  bool passed() const { return violation_count == 0; }
};

/// Every factor of length n <= max_factor_length that starts inside the
/// first quarter of w must occur again with a start position in the last
/// three quarters.  Linear via one automaton: with 1-based end positions,
/// a class seen first at min_end and last at max_end violates at length n
/// iff min_end - n < quarter (it starts in the first quarter) and
/// max_end - n < quarter (no restart at or after the quarter mark).
inline RecurrenceReport recurrence_check(const Word& w,
                                         std::uint64_t max_factor_length,
                                         std::size_t witness_cap = 16) {
  if (max_factor_length == 0) {
    throw DomainError("max factor length must be positive");
  }
  if (w.size() < 4 * max_factor_length) {
    throw DomainError(
        "word too short: need length >= 4 * max factor length");
  }
  RecurrenceReport rr;
  rr.max_factor_length = max_factor_length;
  rr.window = w.size() / 4;
  const std::uint64_t quarter = rr.window;
  SuffixAutomaton sam(w);
  for (const SuffixAutomaton::ExtentRow& row : sam.extent_rows()) {
    const std::uint64_t hi = std::min(row.longest, max_factor_length);
    if (row.shortest > hi) continue;
    for (std::uint64_t n = row.shortest; n <= hi; ++n) {
      const bool starts_in_first_quarter = row.min_end < quarter + n;
      if (!starts_in_first_quarter) continue;
      if (row.max_end < quarter + n) {
        ++rr.violation_count;
        if (rr.witnesses.size() < witness_cap) {
          rr.witnesses.push_back(
              RecurrenceViolation{n, row.max_end, row.longest});
        }
      }
    }
  }
  return rr;
}

// ---------------------------------------------------------------------------
// Block/gap decomposition along zero runs.
// ---------------------------------------------------------------------------

/// w cut at every maximal run of >= threshold zeros: blocks and gaps
/// alternate, starting and ending with a block (possibly empty when the
/// word starts or ends inside a qualifying run).  reconstruct() is exact.
struct GapDecomposition {
  std::uint64_t threshold = 0;
  std::vector<Word> blocks;               // blocks.size() == gaps.size() + 1
  std::vector<std::uint64_t> gaps;        // run lengths, each >= threshold

  Word reconstruct() const {
    Word out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      append_word(out, blocks[i]);
      if (i < gaps.size()) append_zeros(out, gaps[i]);
    }
    return out;
  }
};

inline GapDecomposition gap_decomposition(const Word& w,
                                          std::uint64_t threshold) {
  if (threshold == 0) throw DomainError("gap threshold must be positive");
  GapDecomposition d;
  d.threshold = threshold;
  Word current;
  std::size_t i = 0;
  while (i < w.size()) {
    if (w[i] != 0) {
      current.push_back(w[i]);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < w.size() && w[j] == 0) ++j;
    const std::uint64_t run = j - i;
    if (run >= threshold) {
      d.blocks.push_back(std::move(current));
      current = Word{};
      d.gaps.push_back(run);
    } else {
      append_zeros(current, run);
    }
    i = j;
  }
  d.blocks.push_back(std::move(current));
  return d;
}

/// Checks a decomposition of a word prefix against one generator level:
/// every complete block (all but the last, which the prefix may truncate)
/// must be a level member, and every gap already complete in the prefix
/// (all but possibly the last) must be at least the level word length.
inline Report gap_structure_check(const GapDecomposition& d,
                                  const LevelSet& level) {
  Report report;
  const std::uint64_t n_k = level.length();
  bool members_ok = true;
  std::string member_loc = "all complete blocks";
  std::size_t complete_blocks = d.blocks.empty() ? 0 : d.blocks.size() - 1;
  for (std::size_t i = 0; i < complete_blocks; ++i) {
    if (d.blocks[i].size() != n_k || !level.index_of(d.blocks[i])) {
      members_ok = false;
      member_loc = "block " + std::to_string(i);
      break;
    }
  }
  report.push_back(CheckRecord{
      "complete-blocks-are-level-members", member_loc,
      "every complete block in X_k", "",
      members_ok ? "pass" : "fail"});

  bool gaps_ok = true;
  std::string gap_loc = "all complete gaps";
  // The final gap is complete only if a (possibly empty) block follows it
  // inside the prefix; with blocks.size() == gaps.size() + 1 the last gap
  // is always followed by the last block, but when that block is empty the
  // word ended inside the run, so the run may be truncated.
  std::size_t complete_gaps = d.gaps.size();
  if (!d.blocks.empty() && d.blocks.back().empty() && complete_gaps > 0) {
    --complete_gaps;
  }
  for (std::size_t i = 0; i < complete_gaps; ++i) {
    if (d.gaps[i] < n_k) {
      gaps_ok = false;
      gap_loc = "gap " + std::to_string(i);
      break;
    }
  }
  report.push_back(CheckRecord{
      "complete-gaps-span-level-length", gap_loc,
      "every complete gap >= " + std::to_string(n_k), "",
      gaps_ok ? "pass" : "fail"});
  return report;
}

}  // namespace ssf
