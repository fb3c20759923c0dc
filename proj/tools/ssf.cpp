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
//
// ssf — synthesize and check recurrent words with prescribed factor counts.
//
// Subcommands:
//   validate        check a growth expression for the required inequalities
//   generate        build a word prefix and its construction trace
//   analyze         measure the factor-count profile of a stored word
//   verify          re-derive a generated word and check every inequality
//   minimal         build the nested-catalogue word and its report
//   counterexample  emit the table showing why a derivative premise is needed
//
// Exit codes: 0 success, 1 check failure, 2 usage error, 3 resource limit.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssf/analyze.hpp"
#include "ssf/construct.hpp"
#include "ssf/errors.hpp"
#include "ssf/growth.hpp"
#include "ssf/io.hpp"
#include "ssf/minimal.hpp"
#include "ssf/nat.hpp"
#include "ssf/word.hpp"

namespace {

constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 30;

/// Memory budget in bytes: SSF_MEMORY_BUDGET when set, 1 GiB otherwise.
std::uint64_t memory_budget() {
  const char* raw = std::getenv("SSF_MEMORY_BUDGET");
  if (raw == nullptr || *raw == '\0') return kDefaultBudget;
  char* end = nullptr;
  errno = 0;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (errno != 0 || end == raw || *end != '\0' || value == 0) {
    throw ssf::DomainError(std::string("SSF_MEMORY_BUDGET must be a positive "
                                       "byte count, got \"") + raw + "\"");
  }
  return value;
}

void print_validation(const ssf::ValidationReport& report) {
  auto line = [](const char* name, bool ok) {
    std::cout << name << ": " << (ok ? "ok" : "violated") << '\n';
  };
  line("lower-bound", report.lower_bound_ok);
  line("monotone", report.monotone_ok);
  line("doubling", report.doubling_ok);
  if (report.first_violation) {
    const auto& v = *report.first_violation;
    std::cout << "first violation: " << v.property << " at n=" << v.n
              << " (value " << v.value.str() << ")\n";
  }
}

void print_report(const ssf::Report& report) {
  for (const auto& rec : report) {
    std::cout << "  [" << rec.verdict << "] " << rec.check << " @ "
              << rec.location << ": expected " << rec.expected;
    if (!rec.actual.empty()) std::cout << ", actual " << rec.actual;
    std::cout << '\n';
  }
}

std::size_t failed_count(const ssf::Report& report) {
  std::size_t failed = 0;
  for (const auto& rec : report) failed += rec.verdict == "fail" ? 1 : 0;
  return failed;
}

struct ValidateConfig {
  std::string expression;
  std::uint64_t max_n = 4096;
};

int run_validate(const ValidateConfig& cfg) {
  const auto f = ssf::GrowthFunction::from_expression(cfg.expression);
  const auto report = ssf::validate(f, cfg.max_n);
  print_validation(report);
  return report.all_ok() ? 0 : 1;
}

struct GenerateConfig {
  std::string expression;
  std::uint64_t length = 0;
  std::uint64_t max_n = 4096;
  std::string word_path = "word.ssfw";
  std::string trace_path = "trace.jsonl";
  bool force = false;
};

int run_generate(const GenerateConfig& cfg) {
  const auto f = ssf::GrowthFunction::from_expression(cfg.expression);
  const auto validation = ssf::validate(f, cfg.max_n);
  if (!validation.all_ok()) {
    print_validation(validation);
    if (!cfg.force) {
      std::cerr << "refusing to generate from a profile that fails "
                   "validation (use --force to override)\n";
      return 1;
    }
    std::cerr << "validation failed; continuing because --force is set\n";
  }
  auto [word, state] = ssf::omega_prefix_state(
      ssf::init_state(f.normalize()), cfg.length, memory_budget());
  ssf::io::write_word_file(cfg.word_path, word);
  ssf::io::write_trace_jsonl(cfg.trace_path, state.trace);
  std::cout << "length=" << word.size()
            << " alphabet=" << (ssf::max_symbol(word) + 1)
            << " levels=" << state.trace.size() << " top-level n=" << state.n
            << " s=" << state.s.str() << '\n';
  std::cout << "wrote " << cfg.word_path << " and " << cfg.trace_path << '\n';
  return 0;
}

struct AnalyzeConfig {
  std::string word_path;
  std::uint64_t max_length = 0;  // 0 = quarter of the word
  std::string mode = "fast";
  std::string profile_path = "profile.csv";
};

int run_analyze(const AnalyzeConfig& cfg) {
  const ssf::Word word = ssf::io::read_word_file(cfg.word_path);
  std::uint64_t max_length = cfg.max_length;
  if (max_length == 0) {
    max_length = std::max<std::uint64_t>(1, word.size() / 4);
  }
  max_length = std::min<std::uint64_t>(max_length, word.size());
  const auto mode = cfg.mode == "naive" ? ssf::ProfileMode::kNaive
                                        : ssf::ProfileMode::kFast;
  const auto profile = ssf::complexity_profile(word, max_length, mode);
  ssf::io::write_profile_csv(cfg.profile_path, profile);
  std::cout << "length=" << word.size() << " max-length=" << max_length
            << " p(1)=" << profile.at(1) << " p(" << max_length
            << ")=" << profile.at(max_length) << '\n';
  std::cout << "wrote " << cfg.profile_path << '\n';
  return 0;
}

struct VerifyConfig {
  std::string expression;
  std::string word_path;
  std::string trace_path;
  std::uint64_t max_length = 0;      // 0 = min(2000, quarter)
  std::uint64_t max_factor_len = 0;  // 0 = min(16, length / 4096)
  std::uint64_t gap_threshold = 0;   // 0 = first level length above 1
  std::string report_path = "verify_report.jsonl";
  bool skip_profile = false;
  bool skip_recurrence = false;
  bool skip_gaps = false;
};

int run_verify(const VerifyConfig& cfg) {
  const auto f =
      ssf::GrowthFunction::from_expression(cfg.expression).normalize();
  const ssf::Word stored = ssf::io::read_word_file(cfg.word_path);
  const auto stored_trace = ssf::io::read_trace_jsonl(cfg.trace_path);
  const std::uint64_t length = stored.size();

  ssf::Report report;

  // The construction is deterministic: the same profile and length must
  // reproduce the stored word and trace bit for bit.
  auto [rebuilt, state] = ssf::omega_prefix_state(ssf::init_state(f), length,
                                                  memory_budget());
  report.push_back({"word-reproduction", cfg.word_path,
                    "rebuilt prefix matches the stored word",
                    rebuilt == stored ? "match" : "mismatch",
                    rebuilt == stored ? "pass" : "fail"});
  bool trace_match = state.trace.size() == stored_trace.size();
  for (std::size_t i = 0; trace_match && i < stored_trace.size(); ++i) {
    const auto& a = state.trace[i];
    const auto& b = stored_trace[i];
    trace_match = a.k == b.k && a.case_tag == b.case_tag && a.n == b.n &&
                  a.s == b.s && a.g == b.g && a.balanced == b.balanced;
  }
  report.push_back({"trace-reproduction", cfg.trace_path,
                    "rebuilt trace matches the stored trace",
                    trace_match ? "match" : "mismatch",
                    trace_match ? "pass" : "fail"});

  if (!cfg.skip_profile) {
    std::uint64_t max_length = cfg.max_length;
    if (max_length == 0) {
      max_length = std::min<std::uint64_t>(2000, length / 4);
      max_length = std::max<std::uint64_t>(max_length, 1);
    }
    max_length = std::min<std::uint64_t>(max_length, length);
    const auto profile = ssf::complexity_profile(stored, max_length);
    const auto profile_report = ssf::profile_checks(profile);
    report.insert(report.end(), profile_report.begin(), profile_report.end());
    const auto bounds = ssf::balanced_bounds_check(profile, state.trace, f);
    report.insert(report.end(), bounds.begin(), bounds.end());
    const auto sandwich = ssf::sandwich_check(profile, state.trace, f);
    report.insert(report.end(), sandwich.begin(), sandwich.end());
  }

  if (!cfg.skip_recurrence) {
    std::uint64_t window = cfg.max_factor_len;
    if (window == 0) {
      // Short prefixes legitimately lack repeats of their longest boundary
      // factors, so the default window grows with the prefix.
      window = std::min<std::uint64_t>(16, length >> 12);
    }
    window = std::min<std::uint64_t>(window, length / 4);
    if (window >= 1) {
      const auto rec = ssf::recurrence_check(stored, window);
      report.push_back(
          {"recurrence", "F=" + std::to_string(window),
           "every early factor recurs in the last three quarters",
           std::to_string(rec.violation_count) + " violations",
           rec.passed() ? "pass" : "fail"});
      for (const auto& v : rec.witnesses) {
        std::cerr << "  recurrence witness: length " << v.length
                  << " last seen ending at " << v.last_end << '\n';
      }
    }
  }

  if (!cfg.skip_gaps) {
    std::uint64_t threshold = cfg.gap_threshold;
    if (threshold == 0) {
      for (const auto& rec : state.trace) {
        if (rec.n > 1) {
          threshold = rec.n;
          break;
        }
      }
    }
    const ssf::LevelSet* level = nullptr;
    for (const ssf::LevelSet* l = state.level.get(); l != nullptr;
         l = l->parent().get()) {
      if (l->length() == threshold) level = l;
    }
    if (threshold >= 1 && level != nullptr) {
      const auto d = ssf::gap_decomposition(stored, threshold);
      report.push_back({"gap-reconstruction",
                        "threshold=" + std::to_string(threshold),
                        "blocks and gaps reassemble the word",
                        d.reconstruct() == stored ? "match" : "mismatch",
                        d.reconstruct() == stored ? "pass" : "fail"});
      const auto gaps = ssf::gap_structure_check(d, *level);
      report.insert(report.end(), gaps.begin(), gaps.end());
    }
  }

  ssf::io::write_report_jsonl(cfg.report_path, report);
  print_report(report);
  const std::size_t failed = failed_count(report);
  std::cout << report.size() << " checks, " << failed << " failed\n";
  std::cout << "wrote " << cfg.report_path << '\n';
  return failed == 0 ? 0 : 1;
}

struct MinimalConfig {
  std::string expression;
  std::uint64_t depth = 12;
  std::uint64_t max_length = 0;  // 0 = min(256, quarter)
  std::uint64_t recurrence_cap = 8;
  // The catalogue surfaces scale-2^n variety only in exponentially deep
  // prefixes, so by default only the letter count is a hard lower bound.
  std::uint64_t assert_lower_up_to = 0;
  std::string word_path = "minimal.ssfw";
  std::string report_path = "minimal_report.jsonl";
};

int run_minimal(const MinimalConfig& cfg) {
  const auto f =
      ssf::GrowthFunction::from_expression(cfg.expression).normalize();
  const auto state = ssf::build_minimal(f, cfg.depth, memory_budget());
  ssf::io::write_word_file(cfg.word_path, state.emitted());

  std::uint64_t max_length = cfg.max_length;
  if (max_length == 0) {
    max_length = std::min<std::uint64_t>(256, state.emitted().size() / 4);
    max_length = std::max<std::uint64_t>(max_length, 1);
  }
  max_length = std::min<std::uint64_t>(max_length, state.emitted().size());
  const auto profile = ssf::complexity_profile(state.emitted(), max_length);
  const auto report = ssf::minimal_checks(state, profile, cfg.recurrence_cap,
                                          cfg.assert_lower_up_to);
  ssf::io::write_report_jsonl(cfg.report_path, report);

  std::cout << "alphabet=" << state.alphabet().str()
            << " depth=" << cfg.depth << " length=" << state.emitted().size()
            << " pops=" << state.pops().size() << '\n';
  std::cout << "catalogue sizes:";
  for (std::uint64_t n = 0; n <= std::min<std::uint64_t>(cfg.depth, 8); ++n) {
    std::cout << " |W(2^" << n << ")|=" << state.w_size(n).str();
  }
  std::cout << '\n';
  print_report(report);
  const std::size_t failed = failed_count(report);
  std::cout << report.size() << " checks, " << failed << " failed\n";
  std::cout << "wrote " << cfg.word_path << " and " << cfg.report_path << '\n';
  return failed == 0 ? 0 : 1;
}

struct CounterexampleConfig {
  std::uint64_t max_n = 6000;
  std::string csv_path = "counterexample.csv";
};

int run_counterexample(const CounterexampleConfig& cfg) {
  const auto table = ssf::counterexample_table(cfg.max_n);
  std::vector<std::vector<std::string>> rows;
  rows.reserve(cfg.max_n);
  for (std::uint64_t n = 1; n <= cfg.max_n; ++n) {
    rows.push_back({std::to_string(n), table[n].str(),
                    (table[n] - table[n - 1]).str()});
  }
  ssf::io::write_csv(cfg.csv_path, "n,F,dF", rows);
  std::cout << "wrote " << rows.size() << " rows to " << cfg.csv_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthesize and check recurrent words with prescribed "
               "factor-count growth"};
  app.require_subcommand(1);

  ValidateConfig validate_cfg;
  auto* validate = app.add_subcommand(
      "validate", "check a growth expression for the required inequalities");
  validate->add_option("--f", validate_cfg.expression, "growth expression")
      ->required();
  validate->add_option("--max-n", validate_cfg.max_n, "largest n to scan")
      ->check(CLI::PositiveNumber);

  GenerateConfig generate_cfg;
  auto* generate = app.add_subcommand(
      "generate", "build a word prefix and its construction trace");
  generate->add_option("--f", generate_cfg.expression, "growth expression")
      ->required();
  generate->add_option("--length", generate_cfg.length, "prefix length")
      ->required()
      ->check(CLI::PositiveNumber);
  generate->add_option("--max-n", generate_cfg.max_n,
                       "validation scan range");
  generate->add_option("--out", generate_cfg.word_path, "word file path");
  generate->add_option("--trace", generate_cfg.trace_path,
                       "trace file path");
  generate->add_flag("--force", generate_cfg.force,
                     "generate even when validation fails");

  AnalyzeConfig analyze_cfg;
  auto* analyze = app.add_subcommand(
      "analyze", "measure the factor-count profile of a stored word");
  analyze->add_option("--word", analyze_cfg.word_path, "word file path")
      ->required();
  analyze->add_option("--max-length", analyze_cfg.max_length,
                      "longest factor length to count (0 = quarter)");
  analyze->add_option("--mode", analyze_cfg.mode, "counting mode")
      ->check(CLI::IsMember({"fast", "naive"}));
  analyze->add_option("--out", analyze_cfg.profile_path, "profile CSV path");

  VerifyConfig verify_cfg;
  auto* verify = app.add_subcommand(
      "verify", "re-derive a generated word and check every inequality");
  verify->add_option("--f", verify_cfg.expression, "growth expression")
      ->required();
  verify->add_option("--word", verify_cfg.word_path, "word file path")
      ->required();
  verify->add_option("--trace", verify_cfg.trace_path, "trace file path")
      ->required();
  verify->add_option("--max-length", verify_cfg.max_length,
                     "profile depth (0 = automatic)");
  verify->add_option("--max-factor-len", verify_cfg.max_factor_len,
                     "recurrence window (0 = automatic)");
  verify->add_option("--gap-threshold", verify_cfg.gap_threshold,
                     "zero-run length that separates blocks (0 = automatic)");
  verify->add_option("--report", verify_cfg.report_path, "report file path");
  verify->add_flag("--skip-profile", verify_cfg.skip_profile,
                   "skip profile and bound checks");
  verify->add_flag("--skip-recurrence", verify_cfg.skip_recurrence,
                   "skip the recurrence scan");
  verify->add_flag("--skip-gaps", verify_cfg.skip_gaps,
                   "skip the gap-structure checks");

  MinimalConfig minimal_cfg;
  auto* minimal = app.add_subcommand(
      "minimal", "build the nested-catalogue word and its report");
  minimal->add_option("--f", minimal_cfg.expression, "growth expression")
      ->required();
  minimal->add_option("--depth", minimal_cfg.depth,
                      "emit a prefix of length 2^depth")
      ->check(CLI::PositiveNumber);
  minimal->add_option("--max-length", minimal_cfg.max_length,
                      "profile depth (0 = automatic)");
  minimal->add_option("--recurrence-cap", minimal_cfg.recurrence_cap,
                      "longest factor length in the recurrence scan");
  minimal->add_option("--assert-lower-up-to",
                      minimal_cfg.assert_lower_up_to,
                      "largest exponent whose lower bound must hold");
  minimal->add_option("--out", minimal_cfg.word_path, "word file path");
  minimal->add_option("--report", minimal_cfg.report_path,
                      "report file path");

  CounterexampleConfig counterexample_cfg;
  auto* counterexample = app.add_subcommand(
      "counterexample",
      "emit the step-function table with the non-monotone derivative");
  counterexample->add_option("--max-n", counterexample_cfg.max_n,
                             "largest n in the table")
      ->check(CLI::PositiveNumber);
  counterexample->add_option("--out", counterexample_cfg.csv_path,
                             "CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return run_validate(validate_cfg);
    if (*generate) return run_generate(generate_cfg);
    if (*analyze) return run_analyze(analyze_cfg);
    if (*verify) return run_verify(verify_cfg);
    if (*minimal) return run_minimal(minimal_cfg);
    if (*counterexample) return run_counterexample(counterexample_cfg);
  } catch (const ssf::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ssf::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ssf::NormalizationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ssf::ResourceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const ssf::EvaluationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const ssf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
