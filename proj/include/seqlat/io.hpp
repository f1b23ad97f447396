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
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "seqlat/errors.hpp"
#include "seqlat/lattice.hpp"
#include "seqlat/pstruct.hpp"
#include "seqlat/stability.hpp"
#include "seqlat/textform.hpp"

// File formats (all UTF-8, line oriented; versions stamped in header lines):
//
//   taxonomy   edge list: one `child<TAB>parent` per line, one `root<TAB>-`
//              line declaring the root, `#` comments. Forward references ok.
//   dataset    JSON lines: {"id": "...", "events": [{field: value, ...}]}
//              taxonomy fields take a node string, itemset fields an array,
//              interval fields an integer n (= [n,n]) or a pair [lo,hi];
//              a missing interval field defaults to [1,1]. An optional
//              {"format":"seqlat-dataset",...} header line is skipped.
//   context    cross table (header of attribute names, rows of object name
//              plus x/blank cells, delimiter ; , or TAB) or Burmeister .cxt.
//   concepts   JSON lines: one header record, then one record per concept in
//              ranking order (see write_concepts).
//   lattice    JSON lines keyed by concept id (see dump_lattice).

namespace seqlat {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Taxonomy files.

inline Taxonomy load_taxonomy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open taxonomy file '" + path.string() + "'");
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::string> root;
  std::vector<std::pair<std::string, std::string>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError(path.string(), lineno, "expected 'child<TAB>parent'");
    const std::string child = line.substr(0, tab);
    const std::string parent = line.substr(tab + 1);
    if (child.empty() || parent.empty())
      throw ParseError(path.string(), lineno, "empty node name");
    if (parent == "-") {
      if (root) throw ParseError(path.string(), lineno, "second root declaration");
      root = child;
    } else {
      edges.emplace_back(child, parent);
    }
  }
  if (!root) throw ParseError(path.string(), lineno, "no root declaration ('name<TAB>-')");
  try {
    return Taxonomy::build(path.stem().string(), *root, edges);
  } catch (const InputError& e) {
    throw ParseError(path.string(), lineno, e.what());
  }
}

inline void write_taxonomy(const std::filesystem::path& path, const Taxonomy& tax) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write taxonomy file '" + path.string() + "'");
  out << "# seqlat-taxonomy v1\n";
  out << tax.root() << "\t-\n";
  for (const std::string& node : tax.nodes_sorted())
    if (node != tax.root()) out << node << '\t' << tax.parent(node) << '\n';
}

// ---------------------------------------------------------------------------
// Dataset files (JSON lines).

namespace detail {

inline Value value_from_json(const AlphabetSchema& schema, std::size_t field, const json& v,
                             const std::string& source, std::size_t lineno) {
  const FieldSpec& f = schema.field(field);
  switch (f.kind) {
    case FieldKind::taxonomy:
      if (!v.is_string())
        throw ParseError(source, lineno, "field '" + f.name + "' expects a node string");
      return v.get<std::string>();
    case FieldKind::itemset: {
      if (!v.is_array())
        throw ParseError(source, lineno, "field '" + f.name + "' expects an item array");
      ItemSet items;
      for (const auto& item : v) {
        if (!item.is_string())
          throw ParseError(source, lineno, "field '" + f.name + "' expects string items");
        items.push_back(item.get<std::string>());
      }
      std::sort(items.begin(), items.end());
      items.erase(std::unique(items.begin(), items.end()), items.end());
      return items;
    }
    default: {
      if (v.is_number_unsigned()) {
        const auto n = v.get<std::uint32_t>();
        return Interval{n, n};
      }
      if (v.is_array() && v.size() == 2 && v[0].is_number_unsigned() &&
          v[1].is_number_unsigned())
        return Interval{v[0].get<std::uint32_t>(), v[1].get<std::uint32_t>()};
      throw ParseError(source, lineno, "field '" + f.name + "' expects n or [lo,hi]");
    }
  }
}

inline json value_to_json(const AlphabetSchema& schema, std::size_t field, const Value& v) {
  switch (schema.field(field).kind) {
    case FieldKind::taxonomy:
      return std::get<std::string>(v);
    case FieldKind::itemset:
      return std::get<ItemSet>(v);
    default: {
      const Interval iv = std::get<Interval>(v);
      return json::array({iv.lo, iv.hi});
    }
  }
}

}  // namespace detail

/// Loads object trajectories. Raw events get repetition [1,1] when the field
/// is omitted; max_objects > 0 keeps only the first records (scaling runs).
inline std::vector<std::pair<std::string, Sequence>> load_dataset(
    const std::filesystem::path& path, const AlphabetSchema& schema,
    std::size_t max_objects = 0) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset file '" + path.string() + "'");
  std::vector<std::pair<std::string, Sequence>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(path.string(), lineno, e.what());
    }
    if (record.contains("format")) continue;  // header record
    if (!record.is_object() || !record.contains("id") || !record.contains("events"))
      throw ParseError(path.string(), lineno, "record needs 'id' and 'events'");
    if (max_objects > 0 && out.size() == max_objects) break;
    Sequence seq;
    for (const auto& ev : record["events"]) {
      if (!ev.is_object()) throw ParseError(path.string(), lineno, "event must be an object");
      for (const auto& [key, unused] : ev.items()) {
        bool known = false;
        for (const FieldSpec& f : schema.fields()) known |= f.name == key;
        if (!known) throw ParseError(path.string(), lineno, "unknown field '" + key + "'");
      }
      Element e;
      for (std::size_t i = 0; i < schema.field_count(); ++i) {
        const FieldSpec& f = schema.field(i);
        if (!ev.contains(f.name)) {
          if (f.kind == FieldKind::interval) {
            e.values.emplace_back(Interval{1, 1});
            continue;
          }
          throw ParseError(path.string(), lineno, "missing field '" + f.name + "'");
        }
        e.values.push_back(detail::value_from_json(schema, i, ev[f.name], path.string(), lineno));
      }
      try {
        validate_element(schema, e);
      } catch (const InputError& err) {
        throw ParseError(path.string(), lineno, err.what());
      }
      seq.elements.push_back(std::move(e));
    }
    out.emplace_back(record["id"].get<std::string>(), std::move(seq));
  }
  return out;
}

inline void write_dataset(const std::filesystem::path& path, const AlphabetSchema& schema,
                          const std::vector<std::pair<std::string, Sequence>>& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write dataset file '" + path.string() + "'");
  out << R"({"format":"seqlat-dataset","version":1})" << "\n";
  for (const auto& [id, seq] : data) {
    ojson record;
    record["id"] = id;
    record["events"] = ojson::array();
    for (const Element& e : seq.elements) {
      ojson ev;
      for (std::size_t i = 0; i < schema.field_count(); ++i)
        ev[schema.field(i).name] = detail::value_to_json(schema, i, e.values[i]);
      record["events"].push_back(std::move(ev));
    }
    out << record.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Binary context files.

namespace detail {
inline FormalContext load_context_burmeister(std::ifstream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 1;  // the 'B' line was consumed
  auto next_line = [&]() {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
    return false;
  };
  auto next_nonempty = [&]() {
    while (next_line())
      if (!line.empty()) return true;
    return false;
  };
  if (!next_nonempty()) throw ParseError(source, lineno, "missing object count");
  std::size_t objects = 0, attributes = 0;
  try {
    objects = std::stoul(line);
    if (!next_nonempty()) throw ParseError(source, lineno, "missing attribute count");
    attributes = std::stoul(line);
  } catch (const std::exception&) {
    throw ParseError(source, lineno, "bad count '" + line + "'");
  }
  FormalContext ctx;
  for (std::size_t i = 0; i < objects; ++i) {
    if (!next_nonempty()) throw ParseError(source, lineno, "missing object name");
    ctx.objects.push_back(line);
  }
  for (std::size_t i = 0; i < attributes; ++i) {
    if (!next_nonempty()) throw ParseError(source, lineno, "missing attribute name");
    ctx.attributes.push_back(line);
  }
  for (std::size_t i = 0; i < objects; ++i) {
    if (!next_nonempty()) throw ParseError(source, lineno, "missing incidence row");
    if (line.size() != attributes) throw ParseError(source, lineno, "ragged incidence row");
    AttrSet bits(attributes);
    for (std::size_t j = 0; j < attributes; ++j)
      if (line[j] == 'X' || line[j] == 'x') bits.set(j);
    ctx.rows.push_back(std::move(bits));
  }
  return ctx;
}

inline std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == delim) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}
}  // namespace detail

/// Loads a cross table (attribute header + x/blank cells) or a Burmeister
/// file (first line "B").
inline FormalContext load_context(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open context file '" + path.string() + "'");
  std::string line;
  std::size_t lineno = 0;
  // First significant line decides the dialect.
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    break;
  }
  if (line == "B") return detail::load_context_burmeister(in, path.string());

  const auto delim_pos = line.find_first_of(";\t,");
  if (delim_pos == std::string::npos)
    throw ParseError(path.string(), lineno, "no delimiter (; , or TAB) in header");
  const char delim = line[delim_pos];
  const auto header = detail::split(line, delim);
  FormalContext ctx;
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i].empty()) throw ParseError(path.string(), lineno, "empty attribute name");
    ctx.attributes.push_back(header[i]);
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cells = detail::split(line, delim);
    if (cells.size() != header.size())
      throw ParseError(path.string(), lineno, "ragged row: " + std::to_string(cells.size()) +
                                                  " cells, expected " +
                                                  std::to_string(header.size()));
    ctx.objects.push_back(cells[0]);
    AttrSet bits(ctx.attributes.size());
    for (std::size_t i = 1; i < cells.size(); ++i) {
      const std::string& cell = cells[i];
      if (cell == "x" || cell == "X" || cell == "1")
        bits.set(i - 1);
      else if (!cell.empty() && cell != "." && cell != "0")
        throw ParseError(path.string(), lineno, "bad cell '" + cell + "'");
    }
    ctx.rows.push_back(std::move(bits));
  }
  return ctx;
}

// ---------------------------------------------------------------------------
// Intent serialization.

inline ojson intent_to_json(const AlphabetSchema& schema, const PatternDesc& d) {
  if (d.top) return "TOP";
  ojson seqs = ojson::array();
  for (const Sequence& s : d.pattern.sequences()) {
    ojson seq = ojson::array();
    for (const Element& e : s.elements) {
      ojson ev;
      for (std::size_t i = 0; i < schema.field_count(); ++i)
        ev[schema.field(i).name] = detail::value_to_json(schema, i, e.values[i]);
      seq.push_back(std::move(ev));
    }
    seqs.push_back(std::move(seq));
  }
  return seqs;
}

inline ojson intent_to_json(const FormalContext& ctx, const AttrSet& intent) {
  ojson out = ojson::array();
  for (std::size_t m = intent.find_first(); m != AttrSet::npos; m = intent.find_next(m))
    out.push_back(ctx.attributes[m]);
  return out;
}

// ---------------------------------------------------------------------------
// Concept records.

struct ConceptWriteOptions {
  RankKey rank_by = RankKey::stability;
  std::optional<BigRat> theta;  // keep only concepts passing the bound filter
  bool include_empty_extent = false;
};

namespace detail {

template <typename Desc, typename IntentFn>
std::size_t write_concept_records(std::ostream& out, const BasicLattice<Desc>& lat,
                                  const StabilityReport& report,
                                  const std::vector<std::string>& object_names,
                                  const ConceptWriteOptions& opt, IntentFn&& intent_json) {
  std::vector<ConceptId> ranked = rank_concepts(report, lat, opt.rank_by,
                                                opt.include_empty_extent);
  if (opt.theta) {
    const auto kept = stable_filter(lat, *opt.theta);
    std::vector<char> keep(lat.size(), 0);
    for (ConceptId c : kept) keep[static_cast<std::size_t>(c)] = 1;
    std::erase_if(ranked, [&](ConceptId c) { return !keep[static_cast<std::size_t>(c)]; });
  }

  ojson header;
  header["format"] = "seqlat-concepts";
  header["version"] = 1;
  header["objects"] = lat.object_count;
  header["concepts"] = lat.size();
  header["written"] = ranked.size();
  header["rank_by"] = opt.rank_by == RankKey::stability
                          ? "stability"
                          : (opt.rank_by == RankKey::bound ? "bound" : "support");
  header["theta"] = opt.theta ? ojson(opt.theta->to_decimal()) : ojson(nullptr);
  out << header.dump() << '\n';

  std::size_t rank = 0;
  for (ConceptId c : ranked) {
    const auto& concept_ = lat.concept_at(c);
    const auto& entry = report.per_concept[static_cast<std::size_t>(c)];
    ojson record;
    record["rank"] = ++rank;
    record["id"] = c;
    record["support"] = concept_.support();
    ojson extent = ojson::array();
    for (std::size_t g = concept_.extent.find_first(); g != ObjectSet::npos;
         g = concept_.extent.find_next(g))
      extent.push_back(object_names[g]);
    record["extent"] = std::move(extent);
    record["intent"] = intent_json(concept_.intent);
    record["stability"] = entry.stability().to_decimal();
    record["stability_num"] = entry.stability_num.str();
    record["stability_den"] = entry.stability_den.str();
    record["bound"] = entry.bound.to_decimal();
    record["md"] = entry.md ? ojson(*entry.md) : ojson(nullptr);
    out << record.dump() << '\n';
  }
  return ranked.size();
}

}  // namespace detail

/// Writes ranked concept records; returns the record count. Byte-identical
/// output for identical inputs and options.
inline std::size_t write_concepts(std::ostream& out, const PatternLattice& lat,
                                  const StabilityReport& report, const PatternStructure& ps,
                                  const ConceptWriteOptions& opt = {}) {
  return detail::write_concept_records(
      out, lat, report, ps.object_ids(), opt,
      [&](const PatternDesc& d) { return intent_to_json(ps.schema(), d); });
}

inline std::size_t write_concepts(std::ostream& out, const ContextLattice& lat,
                                  const StabilityReport& report, const FormalContext& ctx,
                                  const ConceptWriteOptions& opt = {}) {
  return detail::write_concept_records(
      out, lat, report, ctx.objects, opt,
      [&](const AttrSet& d) { return intent_to_json(ctx, d); });
}

template <typename... Args>
std::size_t write_concepts_file(const std::filesystem::path& path, Args&&... args) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write concepts file '" + path.string() + "'");
  return write_concepts(out, std::forward<Args>(args)...);
}

// ---------------------------------------------------------------------------
// Lattice dumps (debugging / golden tests).

namespace detail {
template <typename Desc, typename IntentFn>
void dump_lattice_records(std::ostream& out, const BasicLattice<Desc>& lat,
                          const std::vector<std::string>& object_names, IntentFn&& intent_json) {
  ojson header;
  header["format"] = "seqlat-lattice";
  header["version"] = 1;
  header["objects"] = lat.object_count;
  header["concepts"] = lat.size();
  header["top"] = lat.top;
  header["bottom"] = lat.bottom;
  out << header.dump() << '\n';
  for (const auto& c : lat.concepts) {
    ojson record;
    record["id"] = c.id;
    record["support"] = c.support();
    ojson extent = ojson::array();
    for (std::size_t g = c.extent.find_first(); g != ObjectSet::npos; g = c.extent.find_next(g))
      extent.push_back(object_names[g]);
    record["extent"] = std::move(extent);
    record["intent"] = intent_json(c.intent);
    record["parents"] = lat.parents[static_cast<std::size_t>(c.id)];
    out << record.dump() << '\n';
  }
}
}  // namespace detail

inline void dump_lattice(std::ostream& out, const PatternLattice& lat,
                         const PatternStructure& ps) {
  detail::dump_lattice_records(out, lat, ps.object_ids(), [&](const PatternDesc& d) {
    return intent_to_json(ps.schema(), d);
  });
}

inline void dump_lattice(std::ostream& out, const ContextLattice& lat,
                         const FormalContext& ctx) {
  detail::dump_lattice_records(out, lat, ctx.objects,
                               [&](const AttrSet& d) { return intent_to_json(ctx, d); });
}

template <typename... Args>
void dump_lattice_file(const std::filesystem::path& path, Args&&... args) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write lattice dump '" + path.string() + "'");
  dump_lattice(out, std::forward<Args>(args)...);
}

// ---------------------------------------------------------------------------
// Run configuration.

struct RunLimits {
  std::size_t max_concepts = 1'000'000;
  std::size_t max_objects = 0;  // 0 = all
};

struct RunConfig {
  AlphabetSchema schema;
  std::filesystem::path dataset;
  ProjectionSpec projection;
  std::filesystem::path output;
  RankKey rank_by = RankKey::stability;
  std::optional<BigRat> theta;
  RunLimits limits;
  std::optional<std::filesystem::path> dump_lattice_path;
};

namespace detail {
inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}
}  // namespace detail

/// Parses a projection value: a shorthand string ("GR2") or an object with
/// select/require/min_len/rle keys, optionally seeded from "name". Explicit
/// keys override the expansion.
inline ProjectionSpec projection_from_json(const AlphabetSchema& schema, const json& j) {
  if (j.is_string()) return expand_projection_name(schema, j.get<std::string>());
  if (!j.is_object()) throw ConfigError("projection must be a string or an object");
  ProjectionSpec spec;
  if (j.contains("name"))
    spec = expand_projection_name(schema, j["name"].get<std::string>());
  else
    spec = ProjectionSpec{};
  if (j.contains("select")) spec.selected_fields = j["select"].get<std::vector<std::string>>();
  if (j.contains("require")) spec.required_fields = j["require"].get<std::vector<std::string>>();
  if (j.contains("min_len")) spec.min_length = j["min_len"].get<std::size_t>();
  if (j.contains("rle")) spec.use_repetition = j["rle"].get<bool>();
  if (spec.selected_fields.empty() && !j.contains("name"))
    spec.selected_fields = ProjectionSpec::identity(schema).selected_fields;
  return spec;
}

inline AlphabetSchema schema_from_json(const json& j, const std::filesystem::path& base) {
  if (!j.is_object() || !j.contains("fields"))
    throw ConfigError("config 'schema' needs a 'fields' array");
  std::vector<FieldSpec> fields;
  for (const auto& fj : j["fields"]) {
    FieldSpec f;
    f.name = fj.at("name").get<std::string>();
    const std::string kind = fj.at("kind").get<std::string>();
    if (kind == "taxonomy") {
      f.kind = FieldKind::taxonomy;
      f.taxonomy = load_taxonomy(detail::resolve(base, fj.at("taxonomy").get<std::string>()));
    } else if (kind == "itemset") {
      f.kind = FieldKind::itemset;
    } else if (kind == "interval") {
      f.kind = FieldKind::interval;
    } else {
      throw ConfigError("unknown field kind '" + kind + "'");
    }
    fields.push_back(std::move(f));
  }
  const std::uint32_t max_rep = j.value("max_repetition", 1024u);
  return AlphabetSchema(std::move(fields), max_rep);
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  const std::filesystem::path base = path.parent_path();
  RunConfig cfg;
  try {
    cfg.schema = schema_from_json(j.at("schema"), base);
    cfg.dataset = detail::resolve(base, j.at("dataset").get<std::string>());
    cfg.projection = j.contains("projection")
                         ? projection_from_json(cfg.schema, j["projection"])
                         : ProjectionSpec::identity(cfg.schema);
    // Inputs resolve against the config file so configs stay portable;
    // outputs resolve against the working directory.
    cfg.output = j.value("output", std::string("concepts.jsonl"));
    cfg.rank_by = parse_rank_key(j.value("rank_by", std::string("stability")));
    if (j.contains("theta") && !j["theta"].is_null()) {
      const BigRat theta = parse_decimal(j["theta"].is_string()
                                             ? j["theta"].get<std::string>()
                                             : json(j["theta"]).dump());
      cfg.theta = theta;
    }
    if (j.contains("limits")) {
      cfg.limits.max_concepts = j["limits"].value("max_concepts", cfg.limits.max_concepts);
      cfg.limits.max_objects = j["limits"].value("max_objects", cfg.limits.max_objects);
    }
    if (j.contains("dump_lattice") && !j["dump_lattice"].is_null())
      cfg.dump_lattice_path = std::filesystem::path(j["dump_lattice"].get<std::string>());
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path.string() + "': " + e.what());
  }
  return cfg;
}

}  // namespace seqlat
