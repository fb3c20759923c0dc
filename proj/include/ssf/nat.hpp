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

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "ssf/errors.hpp"

namespace ssf {

/// Arbitrary-precision natural number.  All quantities in this library are
/// non-negative; subtraction has to be saturated explicitly where it occurs.
/// Expression templates are disabled so every arithmetic result is a plain
/// value — lazy expression objects holding references to temporaries are a
/// lifetime hazard in generic code.
using Nat =
    boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                  boost::multiprecision::et_off>;

/// ⌈a / b⌉ for naturals, b > 0.
inline Nat ceil_div(const Nat& a, const Nat& b) { return (a + b - 1) / b; }

/// ⌊a / b⌋ for naturals, b > 0.
inline Nat floor_div(const Nat& a, const Nat& b) { return a / b; }

/// max(a - b, 0).
inline Nat saturating_sub(const Nat& a, const Nat& b) {
  return a >= b ? Nat(a - b) : Nat(0);
}

/// ⌊log2(x)⌋ with the convention log2(0) = 0 (also log2(1) = 0).
inline Nat floor_log2(const Nat& x) {
  if (x <= 1) return 0;
  return Nat(boost::multiprecision::msb(x));
}

/// ⌈log2(x)⌉ for x >= 1.
inline std::uint64_t ceil_log2(const Nat& x) {
  if (x <= 1) return 0;
  std::uint64_t m = boost::multiprecision::msb(x);
  return (Nat(1) << m) == x ? m : m + 1;
}

/// Narrow a natural to uint64, throwing if it does not fit.
inline std::uint64_t to_u64(const Nat& x, const char* what) {
  if (x > Nat(UINT64_MAX)) {
    throw ResourceError(std::string(what) + " does not fit in 64 bits: " +
                        x.str());
  }
  return x.convert_to<std::uint64_t>();
}

}  // namespace ssf
