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
#include <vector>

#include "ssf/errors.hpp"
#include "ssf/word.hpp"

namespace ssf {

// ---------------------------------------------------------------------------
// Suffix automaton over a Word: the minimal DFA of its suffixes, built online
// in O(L log σ).  Each non-root state represents the factors of one end-set
// class, covering the length interval (len(link), len]; summing those
// intervals yields exact distinct-factor counts per length, and propagating
// first/last end positions up the links yields occurrence extents.
// ---------------------------------------------------------------------------

class SuffixAutomaton {
 public:
  explicit SuffixAutomaton(const Word& w) {
    states_.reserve(2 * w.size() + 2);
    states_.push_back(State{});  // root
    states_[0].len = 0;
    states_[0].link = -1;
    std::int64_t last = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      last = extend(last, w[i], static_cast<std::uint64_t>(i) + 1);
    }
    propagate_end_positions();
  }

  std::size_t state_count() const { return states_.size(); }

  /// Exact number of distinct factors of each length 1..max_len.
  std::vector<std::uint64_t> count_per_length(std::uint64_t max_len) const {
    std::vector<std::uint64_t> diff(max_len + 2, 0);
    for (std::size_t v = 1; v < states_.size(); ++v) {
      const std::uint64_t lo = states_[states_[v].link].len + 1;
      std::uint64_t hi = states_[v].len;
      if (hi > max_len) hi = max_len;
      if (lo > hi) continue;
      diff[lo] += 1;
      diff[hi + 1] -= 1;
    }
    std::vector<std::uint64_t> out(max_len, 0);
    std::uint64_t acc = 0;
    for (std::uint64_t n = 1; n <= max_len; ++n) {
      acc += diff[n];
      out[n - 1] = acc;
    }
    return out;
  }

  /// One occurrence-extent row per end-set class: factors of length
  /// n ∈ (shortest-1, longest] occur with first end position min_end and
  /// last end position max_end (end = index one past the factor).
  struct ExtentRow {
    std::uint64_t shortest;  // len(link) + 1
    std::uint64_t longest;   // len
    std::uint64_t min_end;
    std::uint64_t max_end;
  };

  std::vector<ExtentRow> extent_rows() const {
    std::vector<ExtentRow> rows;
    rows.reserve(states_.size() - 1);
    for (std::size_t v = 1; v < states_.size(); ++v) {
      rows.push_back(ExtentRow{states_[states_[v].link].len + 1,
                               states_[v].len, states_[v].min_end,
                               states_[v].max_end});
    }
    return rows;
  }

 private:
  struct State {
    std::uint64_t len = 0;
    std::int64_t link = -1;
    std::uint64_t min_end = UINT64_MAX;  // smallest end position, 1-based
    std::uint64_t max_end = 0;           // largest end position, 1-based
    bool clone = false;
    std::vector<std::pair<Symbol, std::int64_t>> next;  // sorted by symbol
  };

  std::int64_t find(const State& s, Symbol c) const {
    auto it = std::lower_bound(
        s.next.begin(), s.next.end(), c,
        [](const std::pair<Symbol, std::int64_t>& e, Symbol x) {
          return e.first < x;
        });
    return (it != s.next.end() && it->first == c) ? it->second : -1;
  }

  static void put(State& s, Symbol c, std::int64_t to) {
    auto it = std::lower_bound(
        s.next.begin(), s.next.end(), c,
        [](const std::pair<Symbol, std::int64_t>& e, Symbol x) {
          return e.first < x;
        });
    if (it != s.next.end() && it->first == c) {
      it->second = to;
    } else {
      s.next.insert(it, {c, to});
    }
  }

  std::int64_t extend(std::int64_t last, Symbol c, std::uint64_t end_pos) {
    const std::int64_t cur = static_cast<std::int64_t>(states_.size());
    states_.push_back(State{});
    states_[cur].len = states_[last].len + 1;
    states_[cur].min_end = end_pos;
    states_[cur].max_end = end_pos;
    std::int64_t p = last;
    while (p != -1 && find(states_[p], c) == -1) {
      put(states_[p], c, cur);
      p = states_[p].link;
    }
    if (p == -1) {
      states_[cur].link = 0;
      return cur;
    }
    const std::int64_t q = find(states_[p], c);
    if (states_[p].len + 1 == states_[q].len) {
      states_[cur].link = q;
      return cur;
    }
    const std::int64_t clone = static_cast<std::int64_t>(states_.size());
    states_.push_back(states_[q]);  // copies transitions and link
    states_[clone].len = states_[p].len + 1;
    states_[clone].clone = true;
    states_[clone].min_end = UINT64_MAX;
    states_[clone].max_end = 0;
    while (p != -1 && find(states_[p], c) == q) {
      put(states_[p], c, clone);
      p = states_[p].link;
    }
    states_[q].link = clone;
    states_[cur].link = clone;
    return cur;
  }

  /// Counting-sort states by len descending and fold end extents into links.
  void propagate_end_positions() {
    std::uint64_t max_len = 0;
    for (const State& s : states_) max_len = std::max(max_len, s.len);
    std::vector<std::uint64_t> bucket(max_len + 1, 0);
    for (const State& s : states_) bucket[s.len]++;
    for (std::uint64_t i = 1; i <= max_len; ++i) bucket[i] += bucket[i - 1];
    std::vector<std::int64_t> order(states_.size());
    for (std::int64_t v = static_cast<std::int64_t>(states_.size()) - 1;
         v >= 0; --v) {
      order[--bucket[states_[v].len]] = v;
    }
    for (std::size_t i = order.size(); i-- > 1;) {
      const std::int64_t v = order[i];
      State& sv = states_[v];
      State& sl = states_[sv.link];
      sl.min_end = std::min(sl.min_end, sv.min_end);
      sl.max_end = std::max(sl.max_end, sv.max_end);
    }
  }

  std::vector<State> states_;
};

}  // namespace ssf
