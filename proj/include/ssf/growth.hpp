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
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ssf/errors.hpp"
#include "ssf/expr.hpp"
#include "ssf/nat.hpp"

namespace ssf {

// ---------------------------------------------------------------------------
// GrowthFunction: a positive integer function given either by a closed-form
// expression in `n` or by a finite table of values for n = 1..N.
//
// A normalized function wraps the underlying definition g as
//     value(0) = 1,   value(n) = max(g(n), 8n)  for n >= 1,
// which is the profile the synthesizer actually targets.  `raw` always
// exposes the underlying definition (0 results allowed there); `eval` applies
// the normalization when the flag is set and rejects 0 results otherwise.
// ---------------------------------------------------------------------------

class GrowthFunction {
 public:
  /// Default horizon for expression evaluation; larger arguments throw
  /// ResourceError so a typo cannot silently spin on gigantic numbers.
  static constexpr std::uint64_t kDefaultHorizon = std::uint64_t{1} << 24;

  static GrowthFunction from_expression(std::string_view text) {
    return GrowthFunction(parse_expression(text));
  }

  static GrowthFunction from_expr(ExprPtr e) {
    return GrowthFunction(std::move(e));
  }

  /// `values[i]` is the value at n = i + 1; the domain is [1, values.size()].
  static GrowthFunction from_table(std::vector<Nat> values) {
    GrowthFunction f;
    f.table_ = std::make_shared<const std::vector<Nat>>(std::move(values));
    return f;
  }

  bool is_expression() const { return expr_ != nullptr; }
  bool is_normalized() const { return normalized_; }

  /// Canonical text of the expression (round-trips through the parser).
  std::string expression_text() const {
    if (!expr_) throw DomainError("growth function is a table");
    return ssf::to_string(*expr_);
  }

  /// Size of the table domain; 0 for expression-backed functions.
  std::uint64_t table_size() const {
    return table_ ? static_cast<std::uint64_t>(table_->size()) : 0;
  }

  std::uint64_t horizon() const { return horizon_; }
  void set_horizon(std::uint64_t h) { horizon_ = h; }

  /// The same function with the normalization layer switched on.
  /// Idempotent; shares the definition and the memo with this object.
  GrowthFunction normalize() const {
    GrowthFunction f = *this;
    f.normalized_ = true;
    return f;
  }

  /// The underlying definition, ignoring normalization.  May return 0.
  Nat raw(std::uint64_t n) const {
    if (table_) {
      if (n < 1 || n > table_->size()) {
        throw EvaluationError("argument " + std::to_string(n) +
                              " outside table domain [1, " +
                              std::to_string(table_->size()) + "]");
      }
      return (*table_)[n - 1];
    }
    if (n > horizon_) {
      throw ResourceError("argument " + std::to_string(n) +
                          " exceeds evaluation horizon " +
                          std::to_string(horizon_));
    }
    {
      std::lock_guard<std::mutex> lock(cache_->mutex);
      auto it = cache_->memo.find(n);
      if (it != cache_->memo.end()) return it->second;
    }
    Nat v = eval_expr(*expr_, Nat(n));
    std::lock_guard<std::mutex> lock(cache_->mutex);
    cache_->memo.emplace(n, v);
    return v;
  }

  /// Function value.  Normalized: 1 at n = 0, max(raw(n), 8n) otherwise.
  /// Unnormalized: raw(n), with a 0 result rejected as EvaluationError.
  Nat eval(std::uint64_t n) const {
    if (normalized_) {
      if (n == 0) return 1;
      Nat v = raw(n);
      Nat floor8 = Nat(8) * n;
      return v >= floor8 ? v : floor8;
    }
    Nat v = raw(n);
    if (v == 0) {
      throw EvaluationError("growth function is 0 at n = " +
                            std::to_string(n));
    }
    return v;
  }

 private:
  GrowthFunction() : cache_(std::make_shared<Cache>()) {}
  explicit GrowthFunction(ExprPtr e)
      : expr_(std::move(e)), cache_(std::make_shared<Cache>()) {}

  struct Cache {
    std::mutex mutex;
    std::unordered_map<std::uint64_t, Nat> memo;
  };

  ExprPtr expr_;
  std::shared_ptr<const std::vector<Nat>> table_;
  std::shared_ptr<Cache> cache_;
  std::uint64_t horizon_ = kDefaultHorizon;
  bool normalized_ = false;
};

// ---------------------------------------------------------------------------
// Validation of the three admissibility properties over n in [1, max_n]:
//   lower_bound:  f(n) >= n + 1
//   monotone:     f(n) >= f(n-1)
//   doubling:     f(2n) <= f(n)^2
// ---------------------------------------------------------------------------

struct ValidationViolation {
  std::string property;  // "lower_bound", "monotone" or "doubling"
  std::uint64_t n;       // lower/monotone: failing index; doubling: half index
  Nat value;             // offending function value
};

struct ValidationReport {
  bool lower_bound_ok = true;
  bool monotone_ok = true;
  bool doubling_ok = true;
  std::optional<ValidationViolation> first_violation;

  bool all_ok() const { return lower_bound_ok && monotone_ok && doubling_ok; }
};

/// Single ascending scan m = 1..max_n; at each m the lower bound, the
/// monotone step from m-1, and (for even m) the doubling pair (m/2, m) are
/// checked, and the earliest violation in this order is recorded.
inline ValidationReport validate(const GrowthFunction& f,
                                 std::uint64_t max_n) {
  ValidationReport report;
  auto record = [&report](const char* property, std::uint64_t n,
                          const Nat& value) {
    if (!report.first_violation) {
      report.first_violation = ValidationViolation{property, n, value};
    }
  };
  Nat prev;
  for (std::uint64_t m = 1; m <= max_n; ++m) {
    Nat fm = f.raw(m);
    if (fm < Nat(m) + 1) {
      record("lower_bound", m, fm);
      report.lower_bound_ok = false;
    }
    if (m >= 2 && fm < prev) {
      record("monotone", m, fm);
      report.monotone_ok = false;
    }
    if (m % 2 == 0) {
      Nat half = f.raw(m / 2);
      if (fm > half * half) {
        record("doubling", m / 2, fm);
        report.doubling_ok = false;
      }
    }
    prev = std::move(fm);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Sequence utilities.
// ---------------------------------------------------------------------------

/// Forward differences: out[0] = values[0], out[i] = values[i] - values[i-1].
/// Throws DomainError on a decreasing step.
inline std::vector<Nat> discrete_derivative(const std::vector<Nat>& values) {
  std::vector<Nat> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == 0) {
      out.push_back(values[0]);
    } else {
      if (values[i] < values[i - 1]) {
        throw DomainError("sequence decreases at index " + std::to_string(i));
      }
      out.push_back(values[i] - values[i - 1]);
    }
  }
  return out;
}

/// Partial sums, the inverse of discrete_derivative.
inline std::vector<Nat> cumulative(const std::vector<Nat>& deltas) {
  std::vector<Nat> out;
  out.reserve(deltas.size());
  Nat acc = 0;
  for (const Nat& d : deltas) {
    acc += d;
    out.push_back(acc);
  }
  return out;
}

/// True iff f(n) <= C * g(D * n) at every sample point.
inline bool asym_dominates(const std::function<Nat(std::uint64_t)>& f,
                           const std::function<Nat(std::uint64_t)>& g,
                           const Nat& C, std::uint64_t D,
                           const std::vector<std::uint64_t>& sample) {
  for (std::uint64_t n : sample) {
    if (f(n) > C * g(D * n)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// A strictly increasing function with the doubling property whose forward
// difference keeps falling back down infinitely often.  The difference is
// constant on blocks delimited by consecutive factorials:
//   on [m!, (m+1)!)   it equals (m+3)!   when m is odd,
//                     and (m+1)!^2      when m is even.
// ---------------------------------------------------------------------------

inline Nat factorial(std::uint64_t m) {
  Nat r = 1;
  for (std::uint64_t i = 2; i <= m; ++i) r *= i;
  return r;
}

/// The forward difference described above, for n >= 1.
inline Nat counterexample_derivative(std::uint64_t n) {
  if (n == 0) {
    throw DomainError("difference sequence starts at n = 1");
  }
  // Largest m with m! <= n; factorials outgrow uint64 long before m = 25.
  std::uint64_t m = 1;
  Nat fact = 1;
  while (fact * (m + 1) <= n) {
    ++m;
    fact *= m;
  }
  if (m % 2 == 1) return factorial(m + 3);
  Nat half = factorial(m + 1);
  return half * half;
}

/// Values F(0..max_n) of the counterexample function: F(0) = 1 and
/// F(n) = F(n-1) + counterexample_derivative(n).
inline std::vector<Nat> counterexample_table(std::uint64_t max_n) {
  std::vector<Nat> out;
  out.reserve(max_n + 1);
  out.push_back(1);
  for (std::uint64_t n = 1; n <= max_n; ++n) {
    out.push_back(out.back() + counterexample_derivative(n));
  }
  return out;
}

}  // namespace ssf
