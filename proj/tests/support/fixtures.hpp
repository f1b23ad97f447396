// Copyright 2026 The seqlat authors
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

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "seqlat/pstruct.hpp"
#include "seqlat/sequence.hpp"
#include "seqlat/taxonomy.hpp"
#include "seqlat/textform.hpp"

// Shared toy inputs: a two-level hospital hierarchy with two branches, three
// patient trajectories over it, and two small binary contexts.
namespace fixtures {

inline seqlat::Taxonomy hospital_taxonomy() {
  return seqlat::Taxonomy::build("hospitals", "*",
                                 {{"CH", "*"},
                                  {"CL", "*"},
                                  {"H1", "CH"},
                                  {"H2", "CH"},
                                  {"H3", "CL"},
                                  {"H4", "CL"}});
}

inline seqlat::AlphabetSchema hospital_schema() {
  return seqlat::AlphabetSchema(
      {{"hosp", seqlat::FieldKind::taxonomy, hospital_taxonomy()},
       {"procs", seqlat::FieldKind::itemset, {}}});
}

/// Schema with a single itemset field (for the plain itemset alignment toy).
inline seqlat::AlphabetSchema itemset_schema() {
  return seqlat::AlphabetSchema({{"items", seqlat::FieldKind::itemset, {}}});
}

inline seqlat::Sequence seq(const seqlat::AlphabetSchema& schema, std::string_view text) {
  return seqlat::parse_sequence_text(schema, text);
}

inline seqlat::Pattern pat(const seqlat::AlphabetSchema& schema, std::string_view text) {
  return seqlat::parse_pattern_text(schema, text);
}

inline std::vector<std::pair<std::string, seqlat::Sequence>> toy_trajectories(
    const seqlat::AlphabetSchema& schema) {
  return {
      {"p1", seq(schema, "<[H1,{a}];[H1,{c,d}];[H1,{a,b}];[H1,{d}]>")},
      {"p2", seq(schema, "<[H2,{c,d}];[H3,{b,d}];[H3,{a,d}]>")},
      {"p3", seq(schema, "<[H4,{c,d}];[H4,{b}];[H4,{a}];[H4,{a,d}]>")},
  };
}

inline seqlat::FormalContext context_from_rows(std::vector<std::string> objects,
                                               std::vector<std::string> attributes,
                                               const std::vector<std::string>& rows) {
  seqlat::FormalContext ctx;
  ctx.objects = std::move(objects);
  ctx.attributes = std::move(attributes);
  for (const std::string& row : rows) {
    seqlat::AttrSet bits(ctx.attributes.size());
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i] == 'x') bits.set(i);
    ctx.rows.push_back(bits);
  }
  return ctx;
}

/// 4 objects x 4 attributes; mines to 6 concepts.
inline seqlat::FormalContext toy_context() {
  return context_from_rows({"g1", "g2", "g3", "g4"}, {"m1", "m2", "m3", "m4"},
                           {"x..x", "..xx", ".x..", "..xx"});
}

/// 5 objects x 6 attributes; four objects share m6, each has a private
/// attribute; mines to 8 concepts.
inline seqlat::FormalContext shared_attribute_context() {
  return context_from_rows({"g1", "g2", "g3", "g4", "g5"},
                           {"m1", "m2", "m3", "m4", "m5", "m6"},
                           {"x....x", ".x...x", "..x..x", "...x.x", "....x."});
}

inline std::filesystem::path data_dir() { return SEQLAT_DATA_DIR; }

/// Scratch directory removed on destruction.
class TempDir {
public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("seqlat_test_" + std::to_string(rd()) + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
  }

private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace fixtures
