// Copyright 2026 The sampled-hr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Rank-file ingestion.
//
// A rank file is UTF-8 CSV with header `user_id,rank` (or
// `user_id,rank,effective_N` for the irrelevant-only scheme), one row per
// user. Blank lines and lines starting with '#' are ignored, so files
// written by the CLI (which carry a commented manifest) read back directly.
// User ids are opaque and may not contain commas.

#ifndef SAMPLED_HR_RANK_FILE_HPP_
#define SAMPLED_HR_RANK_FILE_HPP_

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "sampled_hr/core.hpp"
#include "sampled_hr/errors.hpp"

namespace sampled_hr {

struct RankFile {
  std::vector<std::string> user_ids;
  RankProfile profile;
  // Present iff the file has the effective_N column.
  std::optional<std::vector<Count>> effective_items;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

inline std::int64_t parse_int(std::string_view field, std::string_view name,
                              std::size_t line_no) {
  std::int64_t value = 0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && field.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc{} || ptr != last) {
    throw ParseError("field '" + std::string(name) + "' is not an integer: '" +
                         std::string(field) + "'",
                     line_no);
  }
  return value;
}

}  // namespace detail

// Reads a rank file from `in`. `items` is the catalog size N; every rank must
// lie in [1, N]. Throws ParseError (malformed text, duplicate user id) or
// DomainError (rank out of range, no rows).
inline RankFile read_rank_file(std::istream& in, Count items) {
  if (items < 2) throw DomainError("catalog size N must be >= 2");
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool extended = false;
  std::vector<std::string> ids;
  std::vector<Rank> ranks;
  std::vector<Count> effective;
  std::unordered_set<std::string> seen;

  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = detail::split_csv(text);
    if (!have_header) {
      if (fields.size() == 2 && fields[0] == "user_id" && fields[1] == "rank") {
        extended = false;
      } else if (fields.size() == 3 && fields[0] == "user_id" &&
                 fields[1] == "rank" && fields[2] == "effective_N") {
        extended = true;
      } else {
        throw ParseError(
            "expected header 'user_id,rank' or 'user_id,rank,effective_N'",
            line_no);
      }
      have_header = true;
      continue;
    }
    const std::size_t expected = extended ? 3 : 2;
    if (fields.size() != expected) {
      throw ParseError("expected " + std::to_string(expected) +
                           " fields, found " + std::to_string(fields.size()),
                       line_no);
    }
    if (fields[0].empty()) throw ParseError("empty user_id", line_no);
    const auto rank = detail::parse_int(fields[1], "rank", line_no);
    std::int64_t limit = static_cast<std::int64_t>(items);
    if (extended) {
      const auto eff = detail::parse_int(fields[2], "effective_N", line_no);
      if (eff < 2 || eff > limit) {
        throw DomainError("line " + std::to_string(line_no) +
                          ": effective_N " + std::to_string(eff) +
                          " outside [2, " + std::to_string(items) + "]");
      }
      limit = eff;
      effective.push_back(static_cast<Count>(eff));
    }
    if (rank < 1 || rank > limit) {
      throw DomainError("line " + std::to_string(line_no) + ": rank " +
                        std::to_string(rank) + " outside [1, " +
                        std::to_string(limit) + "]");
    }
    std::string id(fields[0]);
    if (!seen.insert(id).second) {
      throw ParseError("duplicate user_id '" + id + "'", line_no);
    }
    ids.push_back(std::move(id));
    ranks.push_back(static_cast<Rank>(rank));
  }
  if (!have_header) throw DomainError("rank file is empty");
  if (ranks.empty()) throw DomainError("rank file has no user rows");

  RankFile out{std::move(ids), RankProfile(std::move(ranks), items), std::nullopt};
  if (extended) out.effective_items = std::move(effective);
  return out;
}

inline RankFile read_rank_file(const std::string& path, Count items) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rank file '" + path + "'");
  return read_rank_file(in, items);
}

// User order is preserved.
inline RankProfile load_rank_profile(const std::string& path, Count items) {
  return read_rank_file(path, items).profile;
}

// Writes `user_id,rank` rows; ids default to u1..uM when not supplied.
inline void write_rank_file(std::ostream& out, const RankProfile& profile,
                            const std::vector<std::string>& ids = {}) {
  if (!ids.empty() && ids.size() != profile.users()) {
    throw ConfigError("user id count does not match profile size");
  }
  out << "user_id,rank\n";
  for (std::size_t u = 0; u < profile.users(); ++u) {
    if (ids.empty()) {
      out << 'u' << (u + 1);
    } else {
      out << ids[u];
    }
    out << ',' << profile[u] << '\n';
  }
}

}  // namespace sampled_hr

#endif  // SAMPLED_HR_RANK_FILE_HPP_
