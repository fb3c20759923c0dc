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

#include <cstdint>
#include <string>
#include <vector>

namespace ssf {

/// Letters are small non-negative integers; 0 is the designated gap letter.
using Symbol = std::uint32_t;

/// A finite word over the symbol alphabet.
using Word = std::vector<Symbol>;

inline void append_zeros(Word& w, std::uint64_t count) {
  w.insert(w.end(), static_cast<std::size_t>(count), Symbol{0});
}

inline void append_word(Word& w, const Word& x) {
  w.insert(w.end(), x.begin(), x.end());
}

inline bool starts_or_ends_with_zero(const Word& w) {
  return !w.empty() && (w.front() == 0 || w.back() == 0);
}

inline Symbol max_symbol(const Word& w) {
  Symbol m = 0;
  for (Symbol c : w) {
    if (c > m) m = c;
  }
  return m;
}

/// Comma-free decimal rendering for diagnostics, e.g. {1,0,2} -> "1 0 2".
inline std::string to_string(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(w[i]);
  }
  return out;
}

}  // namespace ssf
