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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "seqlat/errors.hpp"
#include "seqlat/io.hpp"

// Seeded generator for trajectory datasets shaped like hospitalization data:
// a geographic taxonomy, a diagnosis taxonomy, an open procedure vocabulary
// and an optional tendency to repeat the previous event. Identical seeds give
// byte-identical files.

namespace seqlat {

struct SyntheticSpec {
  std::size_t patients = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;

  struct Length {
    std::uint32_t stop_ppm = 350000;  // chance to stop growing past min
    std::size_t min = 2;
    std::size_t max = 8;
  } length;

  struct TaxonomyShape {
    std::size_t levels = 4;               // including the root level
    std::vector<std::size_t> branching;   // per level below the root
  };
  TaxonomyShape geo{4, {2, 3, 4}};
  TaxonomyShape diagnosis{5, {2, 2, 3, 3}};

  struct Procedures {
    std::size_t vocabulary = 12;
    std::size_t max_per_event = 3;
  } procedures;

  std::uint32_t repeat_run_ppm = 250000;  // chance to repeat the previous event
  std::filesystem::path out_dir = "synth";

  void validate() const {
    if (patients == 0) throw ConfigError("patients must be positive");
    if (!seed_set) throw ConfigError("seed is mandatory for reproducibility");
    if (length.min == 0 || length.max < length.min)
      throw ConfigError("length bounds must satisfy 1 <= min <= max");
    for (const auto* shape : {&geo, &diagnosis}) {
      if (shape->levels < 2) throw ConfigError("taxonomies need at least two levels");
      if (shape->branching.size() != shape->levels - 1)
        throw ConfigError("branching needs levels-1 entries");
      for (std::size_t b : shape->branching)
        if (b == 0) throw ConfigError("branching factors must be positive");
    }
    if (procedures.vocabulary == 0) throw ConfigError("procedure vocabulary must be positive");
    if (repeat_run_ppm > 1'000'000) throw ConfigError("repeat_run_ppm must be <= 1000000");
  }
};

inline SyntheticSpec load_synthetic_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open generator spec '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  SyntheticSpec spec;
  try {
    spec.patients = j.at("patients").get<std::size_t>();
    if (j.contains("seed")) {
      spec.seed = j["seed"].get<std::uint64_t>();
      spec.seed_set = true;
    }
    if (j.contains("length")) {
      spec.length.stop_ppm = j["length"].value("stop_ppm", spec.length.stop_ppm);
      spec.length.min = j["length"].value("min", spec.length.min);
      spec.length.max = j["length"].value("max", spec.length.max);
    }
    auto shape = [&](const char* key, SyntheticSpec::TaxonomyShape& out) {
      if (!j.contains(key)) return;
      out.levels = j[key].value("levels", out.levels);
      if (j[key].contains("branching"))
        out.branching = j[key]["branching"].get<std::vector<std::size_t>>();
      else
        out.branching.assign(out.levels - 1, 3);
    };
    shape("geo", spec.geo);
    shape("diagnosis", spec.diagnosis);
    if (j.contains("procedures")) {
      spec.procedures.vocabulary =
          j["procedures"].value("vocabulary", spec.procedures.vocabulary);
      spec.procedures.max_per_event =
          j["procedures"].value("max_per_event", spec.procedures.max_per_event);
    }
    spec.repeat_run_ppm = j.value("repeat_run_ppm", spec.repeat_run_ppm);
    // Output directory resolves against the working directory, not the spec.
    if (j.contains("out_dir")) spec.out_dir = j["out_dir"].get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError("generator spec '" + path.string() + "': " + e.what());
  }
  spec.validate();
  return spec;
}

namespace detail {

struct DetRng {
  std::mt19937_64 engine;

  explicit DetRng(std::uint64_t seed) : engine(seed) {}

  std::uint64_t below(std::uint64_t n) {
    // Rejection sampling keeps the stream implementation-independent.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
      v = engine();
    } while (v >= limit);
    return v % n;
  }

  bool chance_ppm(std::uint32_t ppm) { return below(1'000'000) < ppm; }
};

inline Taxonomy make_taxonomy(const std::string& name,
                              const SyntheticSpec::TaxonomyShape& shape,
                              std::vector<std::string>& leaves_out) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::string> frontier{name};
  for (std::size_t level = 0; level + 1 < shape.levels; ++level) {
    std::vector<std::string> next;
    for (const std::string& parent : frontier) {
      for (std::size_t b = 1; b <= shape.branching[level]; ++b) {
        std::string child = parent + "." + std::to_string(b);
        edges.emplace_back(child, parent);
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }
  leaves_out = frontier;
  return Taxonomy::build(name, name, edges);
}

}  // namespace detail

struct GenResult {
  std::filesystem::path geo_path;
  std::filesystem::path diagnosis_path;
  std::filesystem::path dataset_path;
  std::filesystem::path config_path;
  std::map<std::string, std::string> checksums;  // file name -> fnv1a64 hex
  std::size_t patients = 0;
};

/// FNV-1a 64 of a file's bytes, as 16 hex digits.
inline std::string file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot checksum '" + path.string() + "'");
  std::uint64_t h = 1469598103934665603ull;
  char ch;
  while (in.get(ch)) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline GenResult gen_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  std::filesystem::create_directories(spec.out_dir);

  std::vector<std::string> geo_leaves, diag_leaves;
  const Taxonomy geo = detail::make_taxonomy("geo", spec.geo, geo_leaves);
  const Taxonomy diagnosis = detail::make_taxonomy("diag", spec.diagnosis, diag_leaves);

  const AlphabetSchema schema({{"geo", FieldKind::taxonomy, geo},
                               {"reason", FieldKind::taxonomy, diagnosis},
                               {"procs", FieldKind::itemset, {}},
                               {"reps", FieldKind::interval, {}}});

  detail::DetRng rng(spec.seed);
  auto draw_event = [&]() {
    Element e;
    e.values.emplace_back(geo_leaves[rng.below(geo_leaves.size())]);
    e.values.emplace_back(diag_leaves[rng.below(diag_leaves.size())]);
    ItemSet procs;
    const std::size_t count = rng.below(spec.procedures.max_per_event + 1);
    while (procs.size() < count) {
      std::string item = "mp" + std::to_string(1 + rng.below(spec.procedures.vocabulary));
      if (std::find(procs.begin(), procs.end(), item) == procs.end()) procs.push_back(item);
    }
    std::sort(procs.begin(), procs.end());
    e.values.emplace_back(std::move(procs));
    e.values.emplace_back(Interval{1, 1});
    return e;
  };
  auto equal_events = [](const Element& a, const Element& b) {
    return a.values[0] == b.values[0] && a.values[1] == b.values[1] && a.values[2] == b.values[2];
  };

  std::vector<std::pair<std::string, Sequence>> data;
  for (std::size_t p = 0; p < spec.patients; ++p) {
    std::size_t len = spec.length.min;
    while (len < spec.length.max && !rng.chance_ppm(spec.length.stop_ppm)) ++len;
    Sequence seq;
    while (seq.size() < len) {
      if (!seq.empty() && rng.chance_ppm(spec.repeat_run_ppm)) {
        seq.elements.push_back(seq.elements.back());
        continue;
      }
      Element e = draw_event();
      if (!seq.empty()) {
        // A fresh draw must differ from the previous event so that a zero
        // repeat probability guarantees no consecutive duplicates.
        for (int tries = 0; tries < 8 && equal_events(e, seq.elements.back()); ++tries)
          e = draw_event();
        if (equal_events(e, seq.elements.back())) {
          const std::size_t g = (std::find(geo_leaves.begin(), geo_leaves.end(),
                                           std::get<std::string>(e.values[0])) -
                                 geo_leaves.begin() + 1) %
                                geo_leaves.size();
          e.values[0] = geo_leaves[g];
        }
      }
      seq.elements.push_back(std::move(e));
    }
    data.emplace_back("p" + std::to_string(p + 1), std::move(seq));
  }

  GenResult result;
  result.patients = spec.patients;
  result.geo_path = spec.out_dir / "geo.tax";
  result.diagnosis_path = spec.out_dir / "diag.tax";
  result.dataset_path = spec.out_dir / "patients.jsonl";
  result.config_path = spec.out_dir / "config.json";

  write_taxonomy(result.geo_path, geo);
  write_taxonomy(result.diagnosis_path, diagnosis);
  write_dataset(result.dataset_path, schema, data);

  ojson cfg;
  cfg["version"] = 1;
  cfg["schema"] = {{"max_repetition", 1024},
                   {"fields",
                    ojson::array({{{"name", "geo"}, {"kind", "taxonomy"}, {"taxonomy", "geo.tax"}},
                                  {{"name", "reason"}, {"kind", "taxonomy"}, {"taxonomy", "diag.tax"}},
                                  {{"name", "procs"}, {"kind", "itemset"}},
                                  {{"name", "reps"}, {"kind", "interval"}}})}};
  cfg["dataset"] = "patients.jsonl";
  cfg["projection"] = "GR2";
  cfg["output"] = "concepts.jsonl";
  cfg["rank_by"] = "stability";
  cfg["theta"] = nullptr;
  cfg["limits"] = {{"max_concepts", 1000000}, {"max_objects", 0}};
  {
    std::ofstream out(result.config_path, std::ios::binary);
    if (!out) throw InputError("cannot write config '" + result.config_path.string() + "'");
    out << cfg.dump(2) << '\n';
  }

  for (const auto& p :
       {result.geo_path, result.diagnosis_path, result.dataset_path, result.config_path})
    result.checksums[p.filename().string()] = file_checksum(p);
  return result;
}

}  // namespace seqlat
