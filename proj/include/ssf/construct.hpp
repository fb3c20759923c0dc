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
#include <string>
#include <utility>
#include <vector>

#include "ssf/errors.hpp"
#include "ssf/growth.hpp"
#include "ssf/level_set.hpp"
#include "ssf/nat.hpp"
#include "ssf/word.hpp"

namespace ssf {

// ---------------------------------------------------------------------------
// The level synthesizer.  Starting from X_1 = {1, …, ⌊b/2⌋} it repeatedly
// extends the current level, dispatching on how fast the target profile f
// grows relative to the current (n, s):
//
//   at a balanced index            in the squaring loop          chain run
//   ┌─────────────────────┐   ┌─────────────────────────┐   ┌──────────────┐
//   │ 6ns > f(3n)  → chain│   │ f(ñ) ≥ 2ñs² → square    │   │ halve s until│
//   │ 6ns² < f(3n) → prep │   │ else → shortened square,│   │ 2ns ≤ f(n)   │
//   │ otherwise    → fan  │   │   fan-out, or chain     │   │              │
//   └─────────────────────┘   └─────────────────────────┘   └──────────────┘
//
// An index is *balanced* when 3·2ns ≥ f(⌊n/3⌋) and 2ns ≤ f(n); every word
// of the final limit sequence decomposes over any balanced level.
// ---------------------------------------------------------------------------

enum class CaseTag { I, II, III };

enum class Phase { AtBalanced, CaseIILoop, CaseIIIRun };

struct TraceRecord {
  std::uint64_t k = 0;
  std::string case_tag;  // init | I | II-prep | II-sub1 | II-sub2a |
                         // II-sub2b | II-sub2c | III-step | III-final
  std::uint64_t n = 0;
  Nat s;
  std::uint64_t g = 0;
  bool balanced = false;
};

struct ConstructionState {
  explicit ConstructionState(GrowthFunction profile) : f(std::move(profile)) {}

  GrowthFunction f;  // normalized target profile
  LevelSet::Ptr level;
  std::uint64_t k = 1;
  std::uint64_t n = 1;
  Nat s;
  std::uint64_t g = 0;
  Phase phase = Phase::AtBalanced;
  std::vector<TraceRecord> trace;
};

namespace detail {

inline std::uint64_t checked_mul_u64(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > UINT64_MAX / b) {
    throw ResourceError("level length overflow");
  }
  return a * b;
}

/// Both halves of the balance condition at (n, s), exact.
inline bool is_balanced(const GrowthFunction& f, std::uint64_t n,
                        const Nat& s) {
  const Nat twice = Nat(2) * n * s;
  return twice <= f.eval(n) && Nat(3) * twice >= f.eval(n / 3);
}

/// Appends a record, enforcing the trace invariants: cardinality ≥ 2, gap
/// parameter non-decreasing, contiguous level indices with the step bound
/// 2n_k < n_{k+1} ≤ 8n_k, and the exact balance inequalities whenever the
/// record claims balancedness.
inline void append_record(ConstructionState& st, TraceRecord rec) {
  if (rec.s < 2) {
    throw ConsistencyError("cardinality fell below 2 at level " +
                           std::to_string(rec.k));
  }
  if (!st.trace.empty()) {
    const TraceRecord& prev = st.trace.back();
    if (rec.g < prev.g) {
      throw ConsistencyError("gap parameter decreased at level " +
                             std::to_string(rec.k));
    }
    if (rec.k == prev.k) {
      if (rec.n != prev.n || rec.s != prev.s) {
        throw ConsistencyError("re-marked level changed parameters at k=" +
                               std::to_string(rec.k));
      }
    } else {
      if (rec.k != prev.k + 1) {
        throw ConsistencyError("level index skipped at k=" +
                               std::to_string(rec.k));
      }
      if (!(2 * prev.n < rec.n && rec.n <= 8 * prev.n)) {
        throw ConsistencyError("length step bound violated at k=" +
                               std::to_string(rec.k));
      }
    }
  }
  if (rec.balanced && !is_balanced(st.f, rec.n, rec.s)) {
    throw ConsistencyError("balance condition violated at k=" +
                           std::to_string(rec.k));
  }
  st.trace.push_back(std::move(rec));
}

/// Installs a freshly derived level and records it.
inline void apply_level(ConstructionState& st, LevelSet::Ptr level,
                        std::string tag, std::uint64_t g_rec, bool balanced,
                        Phase phase) {
  st.level = std::move(level);
  st.k = st.level->k();
  st.n = st.level->length();
  st.s = st.level->size();
  st.g = g_rec;
  st.phase = phase;
  append_record(st, TraceRecord{st.k, std::move(tag), st.n, st.s, st.g,
                                balanced});
}

/// The gap parameter used by the squaring loop at absolute index k.
inline std::uint64_t loop_gap(const ConstructionState& st) {
  const Nat k2 = Nat(st.k) * st.k;
  const std::uint64_t grow = to_u64(ceil_div(Nat(st.n), k2), "loop gap");
  return std::max(st.g, grow);
}

}  // namespace detail

/// Classification of a balanced index by the growth of f at 3n.
inline CaseTag classify_values(const GrowthFunction& f, std::uint64_t n,
                               const Nat& s) {
  const Nat f3n = f.eval(detail::checked_mul_u64(3, n));
  const Nat six_ns = Nat(6) * n * s;
  if (six_ns > f3n) return CaseTag::III;
  if (six_ns * s < f3n) return CaseTag::II;
  return CaseTag::I;
}

inline CaseTag classify(const ConstructionState& st) {
  if (st.phase != Phase::AtBalanced) {
    throw DomainError("classify requires a balanced state");
  }
  return classify_values(st.f, st.n, st.s);
}

/// Initial state over the normalized profile; b = f(1) fixes the alphabet.
inline ConstructionState init_state(const GrowthFunction& f_tilde) {
  if (!f_tilde.is_normalized()) {
    throw NormalizationError("construction requires a normalized profile");
  }
  const Nat b = f_tilde.eval(1);
  if (b < 8) {
    throw NormalizationError("f(1) = " + b.str() + " is below 8");
  }
  ConstructionState st(f_tilde);
  const Nat half = b / 2;
  if (half > Nat(UINT32_MAX)) {
    throw ResourceError("alphabet size " + half.str() +
                        " exceeds the symbol range");
  }
  st.level = LevelSet::base(static_cast<Symbol>(half.convert_to<std::uint32_t>()));
  st.k = 1;
  st.n = 1;
  st.s = half;
  st.g = 0;
  st.phase = Phase::AtBalanced;
  detail::append_record(st, TraceRecord{1, "init", 1, st.s, 0, true});
  return st;
}

/// Fan-out step: n ← 3n, s ← ⌊f(3n)/(6n)⌋.
inline ConstructionState step_case_I(ConstructionState st) {
  if (st.phase != Phase::AtBalanced || classify(st) != CaseTag::I) {
    throw DomainError("fan-out step precondition violated");
  }
  const std::uint64_t n3 = detail::checked_mul_u64(3, st.n);
  const Nat s_new = st.f.eval(n3) / (Nat(6) * st.n);
  const std::uint64_t gap = st.n;
  detail::apply_level(st, LevelSet::extend_case_i(st.level, s_new), "I", gap,
                      /*balanced=*/true, Phase::AtBalanced);
  return st;
}

/// Widening step entering the squaring loop: n ← 8n, g ← 6n,
/// s ← min{⌊f(8n)/(16n)⌋, max{s, f(⌊n/3⌋)}}.
inline ConstructionState step_case_II_prep(ConstructionState st) {
  if (st.phase != Phase::AtBalanced || classify(st) != CaseTag::II) {
    throw DomainError("widening step precondition violated");
  }
  const std::uint64_t n8 = detail::checked_mul_u64(8, st.n);
  const Nat floor_side = st.f.eval(n8) / (Nat(16) * st.n);
  Nat max_side = st.f.eval(st.n / 3);
  if (st.s > max_side) max_side = st.s;
  const bool balanced = floor_side <= max_side;
  const Nat s_new = balanced ? floor_side : max_side;
  if (s_new < st.s) {
    throw ConsistencyError("widening step shrank the level");
  }
  const std::uint64_t gap = detail::checked_mul_u64(6, st.n);
  detail::apply_level(st, LevelSet::extend_prep(st.level, s_new), "II-prep",
                      gap, balanced,
                      balanced ? Phase::AtBalanced : Phase::CaseIILoop);
  return st;
}

/// Squaring step: n ← 2n+g̃, s ← s², X ← X·0^g̃·X; stays in the loop.
inline ConstructionState step_case_II_sub1(ConstructionState st) {
  if (st.phase != Phase::CaseIILoop) {
    throw DomainError("squaring step outside the loop");
  }
  const std::uint64_t gt = detail::loop_gap(st);
  const std::uint64_t n_new =
      detail::checked_mul_u64(2, st.n) + gt;
  if (st.f.eval(n_new) < Nat(2) * n_new * st.s * st.s) {
    throw DomainError("squaring step precondition violated");
  }
  const bool wrap = (st.s % 2 == 1);  // unbalanced level: wrap only for odd s
  detail::apply_level(st,
                      LevelSet::extend_product(st.level, gt, wrap), "II-sub1",
                      gt, /*balanced=*/false, Phase::CaseIILoop);
  return st;
}

/// Loop exit step; dispatches exactly like a balanced classification:
///   (a) fan-out at this index, (b) shortened square with bisected length,
///   (c) re-mark the current index balanced and hand over to the chain run.
inline ConstructionState step_case_II_sub2(ConstructionState st) {
  if (st.phase != Phase::CaseIILoop) {
    throw DomainError("loop exit step outside the loop");
  }
  const std::uint64_t gt = detail::loop_gap(st);
  const std::uint64_t n_tilde = detail::checked_mul_u64(2, st.n) + gt;
  if (st.f.eval(n_tilde) >= Nat(2) * n_tilde * st.s * st.s) {
    throw DomainError("loop exit step precondition violated");
  }
  switch (classify_values(st.f, st.n, st.s)) {
    case CaseTag::I: {
      const std::uint64_t n3 = detail::checked_mul_u64(3, st.n);
      const Nat s_new = st.f.eval(n3) / (Nat(6) * st.n);
      const std::uint64_t gap = st.n;
      detail::apply_level(st, LevelSet::extend_case_i(st.level, s_new),
                          "II-sub2a", gap, /*balanced=*/true,
                          Phase::AtBalanced);
      return st;
    }
    case CaseTag::II: {
      // Least m in [2n+g̃, 3n] with f(m) ≥ 2m·s².  The left endpoint fails
      // by the loop-exit precondition and m = 3n holds on this branch, so
      // the bisection always starts from a valid false/true bracket.
      const Nat s2 = st.s * st.s;
      auto pred = [&](std::uint64_t m) { return st.f.eval(m) >= Nat(2) * m * s2; };
      std::uint64_t lo = n_tilde;  // known false
      std::uint64_t hi = detail::checked_mul_u64(3, st.n);
      if (!pred(hi)) {
        throw ConsistencyError("shortened square: no valid length at 3n");
      }
      while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (pred(mid)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      const std::uint64_t M = hi;
      if (!pred(M) || pred(M - 1)) {
        throw ConsistencyError("shortened square: bracket lost");
      }
      const std::uint64_t gap = M - 2 * st.n;
      detail::apply_level(st, LevelSet::extend_product(st.level, gap, true),
                          "II-sub2b", gap, /*balanced=*/true,
                          Phase::AtBalanced);
      return st;
    }
    case CaseTag::III: {
      // The current index turns out balanced; re-mark it and let the next
      // dispatch run the chain phase from here.
      st.phase = Phase::CaseIIIRun;
      detail::append_record(st, TraceRecord{st.k, "II-sub2c", st.n, st.s,
                                            st.g, true});
      return st;
    }
  }
  throw ConsistencyError("unreachable loop exit branch");
}

/// Chain run: from the frozen entry level, level i has length (2^(i+1)−1)n
/// and cardinality ⌈s/2^i⌉; intermediate levels violate the upper balance
/// bound by construction, and the first i that restores 2ns ≤ f(n) is final.
inline ConstructionState run_case_III(ConstructionState st) {
  if (st.phase == Phase::AtBalanced) {
    if (classify(st) != CaseTag::III) {
      throw DomainError("chain run precondition violated");
    }
  } else if (st.phase != Phase::CaseIIIRun) {
    throw DomainError("chain run from inside the squaring loop");
  }
  const LevelSet::Ptr entry = st.level;
  const std::uint64_t gap = st.n;  // every chain gap is the entry length
  const std::uint64_t g_rec = std::max(st.g, gap);
  for (std::uint64_t i = 1;; ++i) {
    LevelSet::Ptr next = LevelSet::extend_chain(entry, i);
    const bool oversized =
        Nat(2) * next->length() * next->size() > st.f.eval(next->length());
    if (oversized) {
      detail::apply_level(st, std::move(next), "III-step", g_rec,
                          /*balanced=*/false, Phase::CaseIIIRun);
    } else {
      detail::apply_level(st, std::move(next), "III-final", g_rec,
                          /*balanced=*/true, Phase::AtBalanced);
      return st;
    }
  }
}

/// One dispatch round of the flow diagram; appends one or more records.
inline ConstructionState advance(ConstructionState st) {
  switch (st.phase) {
    case Phase::AtBalanced:
      switch (classify(st)) {
        case CaseTag::I:
          return step_case_I(std::move(st));
        case CaseTag::II:
          return step_case_II_prep(std::move(st));
        case CaseTag::III:
          return run_case_III(std::move(st));
      }
      throw ConsistencyError("unreachable classification");
    case Phase::CaseIILoop: {
      const std::uint64_t gt = detail::loop_gap(st);
      const std::uint64_t n_tilde = detail::checked_mul_u64(2, st.n) + gt;
      if (st.f.eval(n_tilde) >= Nat(2) * n_tilde * st.s * st.s) {
        return step_case_II_sub1(std::move(st));
      }
      return step_case_II_sub2(std::move(st));
    }
    case Phase::CaseIIIRun:
      return run_case_III(std::move(st));
  }
  throw ConsistencyError("unreachable phase");
}

/// Length-L prefix of the limit word, together with the state that
/// produced it (levels are grown until n_k ≥ L).
inline std::pair<Word, ConstructionState> omega_prefix_state(
    ConstructionState st, std::uint64_t L,
    std::uint64_t budget_bytes = std::uint64_t{1} << 30) {
  // First-word extraction caches a few members per level; 64 symbol slots
  // per requested position is a comfortable envelope for the whole stack.
  if (L > budget_bytes / (sizeof(Symbol) * 64)) {
    throw ResourceError("prefix length " + std::to_string(L) +
                        " exceeds the memory budget");
  }
  while (st.n < L) {
    st = advance(std::move(st));
  }
  Word w = st.level->first_word();
  w.resize(L);
  return {std::move(w), std::move(st)};
}

inline Word omega_prefix(ConstructionState st, std::uint64_t L,
                         std::uint64_t budget_bytes = std::uint64_t{1}
                                                      << 30) {
  return omega_prefix_state(std::move(st), L, budget_bytes).first;
}

}  // namespace ssf
