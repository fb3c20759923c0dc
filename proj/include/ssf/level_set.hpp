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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "ssf/errors.hpp"
#include "ssf/nat.hpp"
#include "ssf/word.hpp"

namespace ssf {

// ---------------------------------------------------------------------------
// LevelSet: one level X_k of the hierarchy — an ordered set of s_k words of
// common length n_k — stored symbolically as a derivation rule over the
// parent level.  Cardinalities square under the product rule, so levels are
// never materialized wholesale; individual members are computed on demand
// from their output index.
//
// Derivation rules:
//   Base      X_1 = single symbols 1..s
//   Explicit  a seed level given by an explicit word list
//   CaseI     α_i `0^(n_p)` β  with β drawn from the r_i parents following
//             α_i cyclically (r_i = ⌈s/s_p⌉ for the first s mod s_p parents,
//             ⌊s/s_p⌋ for the rest)
//   Prep      α `0^(n_p)` 0^j β 0^(3n_p−j) `0^(n_p)` γ, γ the cyclic
//             successor of α; within one α the pair (j=0, β=γ) comes first,
//             the remaining (j, β) follow in j-major order
//   Product   α `0^gap` β over all parent pairs (α, β)
//   Chain     blocks of 2^i parent words separated by 0^(n_p), block j
//             starting at parent index 2^i·j, the last block wrapping
//             around; the parent here is the frozen entry level
//
// Output ordering: the level begins with the pair words α_1⋆α_2, α_3⋆α_4, …
// followed — for CaseI/Prep always, for Product when flagged — by the wrap
// word α_s⋆α_1, followed by all remaining members in ascending parameter
// order.  Base/Explicit/Chain use their natural order.
// ---------------------------------------------------------------------------

class LevelSet {
 public:
  using Ptr = std::shared_ptr<const LevelSet>;

  /// Indices ≥ this bound bypass the per-level word cache.
  static constexpr std::uint64_t kCacheBound = 64;
  /// Default cap for whole-level materialization.
  static constexpr std::uint64_t kMaterializeLimit = 4096;

  static Ptr base(Symbol symbol_count) {
    if (symbol_count < 2) {
      throw ConsistencyError("base level needs at least 2 symbols");
    }
    auto l = make();
    l->kind_ = Kind::Base;
    l->k_ = 1;
    l->n_ = 1;
    l->s_ = symbol_count;
    return l;
  }

  /// A seed level from an explicit word list (k is the caller's index).
  static Ptr from_words(std::uint64_t k, std::vector<Word> words) {
    if (words.size() < 2) {
      throw ConsistencyError("explicit level needs at least 2 words");
    }
    const std::size_t len = words.front().size();
    for (const Word& w : words) {
      if (w.size() != len) {
        throw ConsistencyError("explicit level has unequal word lengths");
      }
      if (starts_or_ends_with_zero(w)) {
        throw ConsistencyError("explicit level word starts or ends with 0");
      }
    }
    std::vector<Word> sorted = words;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ConsistencyError("explicit level has duplicate words");
    }
    auto l = make();
    l->kind_ = Kind::Explicit;
    l->k_ = k;
    l->n_ = len;
    l->s_ = words.size();
    l->explicit_words_ =
        std::make_shared<const std::vector<Word>>(std::move(words));
    return l;
  }

  static Ptr extend_case_i(Ptr parent, const Nat& s_new) {
    auto l = derive(std::move(parent), s_new);
    l->kind_ = Kind::CaseI;
    l->n_ = checked_mul(3, l->parent_->n_);
    l->init_quota();
    if (l->quota_hi() > l->parent_->s_) {
      throw ConsistencyError(
          "per-parent successor count exceeds parent cardinality");
    }
    return l;
  }

  static Ptr extend_prep(Ptr parent, const Nat& s_new) {
    auto l = derive(std::move(parent), s_new);
    l->kind_ = Kind::Prep;
    l->n_ = checked_mul(8, l->parent_->n_);
    l->init_quota();
    Nat capacity = (Nat(3) * l->parent_->n_ + 1) * l->parent_->s_;
    if (l->quota_hi() > capacity) {
      throw ConsistencyError("per-parent quota exceeds the (j, β) grid");
    }
    return l;
  }

  static Ptr extend_product(Ptr parent, std::uint64_t gap,
                            bool wrap_after_pairs) {
    const Nat sp = parent->s_;
    auto l = derive(std::move(parent), sp * sp);
    l->kind_ = Kind::Product;
    l->gap_ = gap;
    l->wrap_after_pairs_ = wrap_after_pairs;
    l->n_ = checked_add(checked_mul(2, l->parent_->n_), gap);
    return l;
  }

  /// Chain level i ≥ 1 built from the frozen entry level.
  static Ptr extend_chain(Ptr entry, std::uint64_t i) {
    if (i == 0 || i >= 63) {
      throw ConsistencyError("chain exponent out of range");
    }
    const Nat s_new = ceil_div(entry->s_, Nat(1) << i);
    if (s_new < 2) {
      throw ConsistencyError("chain level cardinality fell below 2");
    }
    auto l = make();
    l->parent_ = std::move(entry);
    l->s_ = s_new;
    l->kind_ = Kind::Chain;
    l->chain_i_ = i;
    l->k_ = l->parent_->k_ + i;
    l->n_ = checked_mul((std::uint64_t{1} << (i + 1)) - 1, l->parent_->n_);
    return l;
  }

  std::uint64_t k() const { return k_; }
  std::uint64_t length() const { return n_; }
  const Nat& size() const { return s_; }
  const Ptr& parent() const { return parent_; }

  Word first_word() const { return word_at(0); }

  /// The word at the given position of the output order (0-based).
  Word word_at(const Nat& output_index) const {
    if (output_index >= s_) {
      throw DomainError("level member index out of range");
    }
    if (output_index < kCacheBound) {
      const auto key = output_index.convert_to<std::uint64_t>();
      {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        auto it = cache_->words.find(key);
        if (it != cache_->words.end()) return it->second;
      }
      Word w = word_from_param(param_for_output(output_index));
      std::lock_guard<std::mutex> lock(cache_->mutex);
      return cache_->words.emplace(key, std::move(w)).first->second;
    }
    return word_from_param(param_for_output(output_index));
  }

  /// All members in output order; refuses levels larger than `limit`.
  std::vector<Word> materialize(
      std::uint64_t limit = kMaterializeLimit) const {
    if (s_ > limit) {
      throw ResourceError("level too large to materialize: " + s_.str() +
                          " words");
    }
    std::vector<Word> out;
    const auto count = s_.convert_to<std::uint64_t>();
    out.reserve(count);
    for (std::uint64_t o = 0; o < count; ++o) {
      out.push_back(word_at(o));
    }
    return out;
  }

  /// Output position of `w`, if present (linear scan; small levels only).
  std::optional<Nat> index_of(const Word& w,
                              std::uint64_t limit = kMaterializeLimit) const {
    if (s_ > limit) {
      throw ResourceError("level too large to search: " + s_.str() +
                          " words");
    }
    const auto count = s_.convert_to<std::uint64_t>();
    for (std::uint64_t o = 0; o < count; ++o) {
      if (word_at(o) == w) return Nat(o);
    }
    return std::nullopt;
  }

  // -- output order <-> parameter order ------------------------------------
  // The parameter order is the natural enumeration of the rule; the output
  // order moves the pairing words (and possibly the wrap word) to the front.
  // Both directions run in O(log s) exact big-integer arithmetic.

  Nat param_for_output(const Nat& o) const {
    if (o >= s_) throw DomainError("level member index out of range");
    const Nat fronts = front_count();
    if (o < fronts) return front_at(o);
    const Nat target = o - fronts + 1;  // wanted non-front rank (1-based)
    Nat lo = 0, hi = s_ - 1;
    while (lo < hi) {
      Nat mid = (lo + hi) / 2;
      if (mid + 1 - count_front_le(mid) >= target) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo;
  }

  Nat output_for_param(const Nat& t) const {
    if (t >= s_) throw DomainError("level member index out of range");
    if (std::optional<Nat> pos = front_position(t)) return *pos;
    return front_count() + t - count_front_le(t);
  }

 private:
  enum class Kind { Base, Explicit, CaseI, Prep, Product, Chain };

  struct Cache {
    std::mutex mutex;
    std::map<std::uint64_t, Word> words;
  };

  static std::shared_ptr<LevelSet> make() {
    auto l = std::shared_ptr<LevelSet>(new LevelSet());
    l->cache_ = std::make_shared<Cache>();
    return l;
  }

  static std::shared_ptr<LevelSet> derive(Ptr parent, const Nat& s_new) {
    if (!parent) throw ConsistencyError("derived level without parent");
    if (s_new < 2) throw ConsistencyError("level cardinality fell below 2");
    auto l = make();
    l->k_ = parent->k_ + 1;
    l->s_ = s_new;
    l->parent_ = std::move(parent);
    return l;
  }

  static std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (b != 0 && a > UINT64_MAX / b) {
      throw ResourceError("word length overflow");
    }
    return a * b;
  }
  static std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    if (a > UINT64_MAX - b) throw ResourceError("word length overflow");
    return a + b;
  }

  void init_quota() {
    if (s_ < parent_->s_) {
      throw ConsistencyError("quota rule needs at least one word per parent");
    }
    quota_q_ = s_ / parent_->s_;
    quota_r_ = s_ % parent_->s_;
  }

  /// ⌈s / s_p⌉ — the larger of the two per-parent quotas.
  Nat quota_hi() const { return quota_r_ == 0 ? quota_q_ : Nat(quota_q_ + 1); }

  /// Number of members whose parent index is < i (quota rules).
  Nat cum(const Nat& i) const {
    return i * quota_q_ + (i < quota_r_ ? i : quota_r_);
  }

  /// Parent index owning parameter t (quota rules).
  Nat parent_block(const Nat& t) const {
    const Nat first_big = quota_r_ * (quota_q_ + 1);
    if (t < first_big) return t / (quota_q_ + 1);
    return quota_r_ + (t - first_big) / quota_q_;
  }

  bool is_quota_rule() const {
    return kind_ == Kind::CaseI || kind_ == Kind::Prep;
  }

  Nat pair_count() const { return parent_->s_ / 2; }

  Nat front_count() const {
    if (is_quota_rule()) return pair_count() + 1;
    if (kind_ == Kind::Product) {
      return pair_count() + (wrap_after_pairs_ ? 1 : 0);
    }
    return 0;
  }

  /// Parameter index of the o-th front word (pairs first, then wrap).
  Nat front_at(const Nat& o) const {
    const Nat sp = parent_->s_;
    if (is_quota_rule()) {
      if (o < pair_count()) return cum(2 * o);
      return cum(sp - 1);
    }
    // Product: pair j is (2j, 2j+1) -> 2j(s_p+1)+1; wrap is (s_p-1, 0).
    if (o < pair_count()) return 2 * o * (sp + 1) + 1;
    return (sp - 1) * sp;
  }

  /// Number of front parameters ≤ t.
  Nat count_front_le(const Nat& t) const {
    if (is_quota_rule()) {
      const Nat sp = parent_->s_;
      const Nat i = parent_block(t);
      Nat pairs = i / 2 + 1;
      if (pairs > pair_count()) pairs = pair_count();
      if (i == sp - 1) pairs += 1;  // wrap word cum(s_p - 1)
      return pairs;
    }
    if (kind_ == Kind::Product) {
      const Nat sp = parent_->s_;
      Nat pairs = 0;
      if (t >= 1) {
        pairs = (t - 1) / (2 * (sp + 1)) + 1;
        if (pairs > pair_count()) pairs = pair_count();
      }
      if (wrap_after_pairs_ && t >= (sp - 1) * sp) pairs += 1;
      return pairs;
    }
    return 0;
  }

  /// Output position of parameter t if t is a front word.
  std::optional<Nat> front_position(const Nat& t) const {
    if (is_quota_rule()) {
      const Nat sp = parent_->s_;
      const Nat i = parent_block(t);
      if (cum(i) != t) return std::nullopt;
      if (i == sp - 1) return pair_count();
      if (i % 2 == 0 && i / 2 < pair_count()) return Nat(i / 2);
      return std::nullopt;
    }
    if (kind_ == Kind::Product) {
      const Nat sp = parent_->s_;
      if (t >= 1 && (t - 1) % (2 * (sp + 1)) == 0) {
        const Nat j = (t - 1) / (2 * (sp + 1));
        if (j < pair_count()) return j;
      }
      if (wrap_after_pairs_ && t == (sp - 1) * sp) return pair_count();
      return std::nullopt;
    }
    return std::nullopt;
  }

  Word word_from_param(const Nat& t) const {
    switch (kind_) {
      case Kind::Base:
        return Word{static_cast<Symbol>(t.convert_to<std::uint32_t>() + 1)};
      case Kind::Explicit:
        return (*explicit_words_)[to_u64(t, "explicit index")];
      case Kind::CaseI: {
        const Nat sp = parent_->s_;
        const Nat i = parent_block(t);
        const Nat d = t - cum(i);
        Word w = parent_->word_at(i);
        w.reserve(n_);
        append_zeros(w, parent_->n_);
        append_word(w, parent_->word_at((i + 1 + d) % sp));
        return w;
      }
      case Kind::Prep: {
        const Nat sp = parent_->s_;
        const Nat i = parent_block(t);
        const Nat tw = t - cum(i);
        const Nat succ = (i + 1) % sp;
        Nat j = 0, m = succ;
        if (tw != 0) {
          // Linear (j, m) grid index, skipping the promoted (0, succ) slot.
          const Nat l = (tw - 1 < succ) ? Nat(tw - 1) : tw;
          j = l / sp;
          m = l % sp;
        }
        const std::uint64_t np = parent_->n_;
        const std::uint64_t jv = to_u64(j, "interior gap offset");
        Word w = parent_->word_at(i);
        w.reserve(n_);
        append_zeros(w, np);
        append_zeros(w, jv);
        append_word(w, parent_->word_at(m));
        append_zeros(w, 3 * np - jv);
        append_zeros(w, np);
        append_word(w, parent_->word_at(succ));
        return w;
      }
      case Kind::Product: {
        const Nat sp = parent_->s_;
        Word w = parent_->word_at(t / sp);
        w.reserve(n_);
        append_zeros(w, gap_);
        append_word(w, parent_->word_at(t % sp));
        return w;
      }
      case Kind::Chain: {
        const Nat sp = parent_->s_;
        const Nat start = (Nat(1) << chain_i_) * t;
        const std::uint64_t count = std::uint64_t{1} << chain_i_;
        Word w;
        w.reserve(n_);
        for (std::uint64_t c = 0; c < count; ++c) {
          if (c) append_zeros(w, parent_->n_);
          append_word(w, parent_->word_at((start + c) % sp));
        }
        return w;
      }
    }
    throw ConsistencyError("unreachable level rule kind");
  }

  LevelSet() = default;

  Kind kind_ = Kind::Base;
  std::uint64_t k_ = 1;
  std::uint64_t n_ = 1;
  Nat s_;
  Ptr parent_;
  std::shared_ptr<const std::vector<Word>> explicit_words_;
  Nat quota_q_, quota_r_;            // CaseI / Prep
  std::uint64_t gap_ = 0;            // Product
  bool wrap_after_pairs_ = true;     // Product
  std::uint64_t chain_i_ = 0;        // Chain
  std::shared_ptr<Cache> cache_;
};

}  // namespace ssf
