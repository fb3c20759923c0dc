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
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssf/analyze.hpp"
#include "ssf/construct.hpp"
#include "ssf/errors.hpp"
#include "ssf/nat.hpp"
#include "ssf/word.hpp"

namespace ssf {
namespace io {

// ---------------------------------------------------------------------------
// File formats:
//   words    binary, 20-byte header ("SSFW", version u32, alphabet u32,
//            length u64, all little-endian) + one u32 per symbol;
//   traces   one JSON object per line (big integers as decimal strings);
//   reports  one JSON object per line, all fields strings;
//   profiles CSV with header "n,p".
// Every writer goes through a temp file + rename, so readers never observe
// a half-written file.
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kWordFormatVersion = 1;

namespace detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {
      static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
      static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

inline void put_u64(std::ostream& out, std::uint64_t v) {
  put_u32(out, static_cast<std::uint32_t>(v & 0xffffffffull));
  put_u32(out, static_cast<std::uint32_t>(v >> 32));
}

inline std::uint32_t get_u32(std::istream& in, std::size_t& offset,
                             const char* what) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  if (!in) throw ParseError(std::string("truncated ") + what, offset + 1);
  offset += 4;
  return static_cast<std::uint32_t>(bytes[0]) |
         (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

inline std::uint64_t get_u64(std::istream& in, std::size_t& offset,
                             const char* what) {
  const std::uint64_t lo = get_u32(in, offset, what);
  const std::uint64_t hi = get_u32(in, offset, what);
  return lo | (hi << 32);
}

/// Writes via <path>.tmp and renames into place.
inline void atomic_write(const std::filesystem::path& path,
                         const std::function<void(std::ostream&)>& fill) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw ResourceError("cannot open " + tmp.string() + " for writing");
    }
    fill(out);
    out.flush();
    if (!out) throw ResourceError("write failed on " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace detail

// -- word files -------------------------------------------------------------

inline void write_word_file(const std::filesystem::path& path, const Word& w) {
  const std::uint64_t alphabet = w.empty() ? 1 : max_symbol(w) + 1ull;
  if (alphabet > UINT32_MAX) {
    throw ResourceError("alphabet too large for the word format");
  }
  detail::atomic_write(path, [&](std::ostream& out) {
    out.write("SSFW", 4);
    detail::put_u32(out, kWordFormatVersion);
    detail::put_u32(out, static_cast<std::uint32_t>(alphabet));
    detail::put_u64(out, w.size());
    for (Symbol c : w) detail::put_u32(out, c);
  });
}

inline Word read_word_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open " + path.string());
  std::size_t offset = 0;
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string_view(magic, 4) != "SSFW") {
    throw ParseError("not a word file (bad magic)", 1);
  }
  offset = 4;
  const std::uint32_t version = detail::get_u32(in, offset, "version");
  if (version != kWordFormatVersion) {
    throw ParseError("unsupported word format version " +
                         std::to_string(version),
                     5);
  }
  const std::uint32_t alphabet = detail::get_u32(in, offset, "alphabet");
  const std::uint64_t length = detail::get_u64(in, offset, "length");
  Word w;
  w.reserve(length);
  for (std::uint64_t i = 0; i < length; ++i) {
    const std::uint32_t c = detail::get_u32(in, offset, "symbol");
    if (c >= alphabet) {
      throw ParseError("symbol " + std::to_string(c) +
                           " outside declared alphabet",
                       offset - 3);
    }
    w.push_back(c);
  }
  in.peek();
  if (!in.eof()) throw ParseError("trailing bytes after word body", offset + 1);
  return w;
}

// -- trace files ------------------------------------------------------------

inline void write_trace_jsonl(const std::filesystem::path& path,
                              const std::vector<TraceRecord>& trace) {
  detail::atomic_write(path, [&](std::ostream& out) {
    for (const TraceRecord& rec : trace) {
      nlohmann::json j;
      j["k"] = rec.k;
      j["case"] = rec.case_tag;
      j["n"] = rec.n;
      j["s"] = rec.s.str();
      j["g"] = rec.g;
      j["balanced"] = rec.balanced;
      out << j.dump() << '\n';
    }
  });
}

inline std::vector<TraceRecord> read_trace_jsonl(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot open " + path.string());
  std::vector<TraceRecord> trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw ParseError("malformed trace line", line_no);
    }
    try {
      TraceRecord rec;
      rec.k = j.at("k").get<std::uint64_t>();
      rec.case_tag = j.at("case").get<std::string>();
      rec.n = j.at("n").get<std::uint64_t>();
      rec.s = Nat(j.at("s").get<std::string>());
      rec.g = j.at("g").get<std::uint64_t>();
      rec.balanced = j.at("balanced").get<bool>();
      trace.push_back(std::move(rec));
    } catch (const std::exception&) {
      throw ParseError("trace line missing or mistyping a field", line_no);
    }
  }
  return trace;
}

// -- report files -----------------------------------------------------------

inline void write_report_jsonl(const std::filesystem::path& path,
                               const Report& report) {
  detail::atomic_write(path, [&](std::ostream& out) {
    for (const CheckRecord& rec : report) {
      nlohmann::json j;
      j["check"] = rec.check;
      j["location"] = rec.location;
      j["expected"] = rec.expected;
      j["actual"] = rec.actual;
      j["verdict"] = rec.verdict;
      out << j.dump() << '\n';
    }
  });
}

inline Report read_report_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot open " + path.string());
  Report report;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw ParseError("malformed report line", line_no);
    }
    try {
      report.push_back(CheckRecord{
          j.at("check").get<std::string>(), j.at("location").get<std::string>(),
          j.at("expected").get<std::string>(),
          j.at("actual").get<std::string>(),
          j.at("verdict").get<std::string>()});
    } catch (const std::exception&) {
      throw ParseError("report line missing a field", line_no);
    }
  }
  return report;
}

// -- profile CSV ------------------------------------------------------------

inline void write_profile_csv(const std::filesystem::path& path,
                              const ComplexityProfile& profile) {
  detail::atomic_write(path, [&](std::ostream& out) {
    out << "n,p\n";
    for (std::size_t i = 0; i < profile.p.size(); ++i) {
      out << (i + 1) << ',' << profile.p[i] << '\n';
    }
  });
}

inline std::vector<std::uint64_t> read_profile_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "n,p") {
    throw ParseError("profile CSV must start with the n,p header", 1);
  }
  std::vector<std::uint64_t> p;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError("profile row without a comma", line_no);
    }
    std::uint64_t n = 0, value = 0;
    try {
      n = std::stoull(line.substr(0, comma));
      value = std::stoull(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw ParseError("profile row with non-numeric fields", line_no);
    }
    if (n != p.size() + 1) {
      throw ParseError("profile rows must be consecutive from n=1", line_no);
    }
    p.push_back(value);
  }
  return p;
}

// -- generic CSV (for small tables like the difference-drop example) --------

inline void write_csv(const std::filesystem::path& path,
                      const std::string& header,
                      const std::vector<std::vector<std::string>>& rows) {
  detail::atomic_write(path, [&](std::ostream& out) {
    out << header << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << row[i];
      }
      out << '\n';
    }
  });
}

}  // namespace io
}  // namespace ssf
