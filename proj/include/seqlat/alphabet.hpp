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

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "seqlat/errors.hpp"
#include "seqlat/taxonomy.hpp"

namespace seqlat {

enum class FieldKind { taxonomy, itemset, interval };

inline const char* to_string(FieldKind k) {
  switch (k) {
    case FieldKind::taxonomy: return "taxonomy";
    case FieldKind::itemset: return "itemset";
    case FieldKind::interval: return "interval";
  }
  return "?";
}

/// Closed integer interval; the field meet is the convex hull, so wider
/// intervals are the more general values.
struct Interval {
  std::uint32_t lo = 1;
  std::uint32_t hi = 1;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sorted, duplicate-free item identifiers.
using ItemSet = std::vector<std::string>;

/// One field value: taxonomy node id, item set, or interval.
using Value = std::variant<std::string, ItemSet, Interval>;

struct FieldSpec {
  std::string name;
  FieldKind kind = FieldKind::itemset;
  Taxonomy taxonomy;  // meaningful only for taxonomy fields
};

/// The event alphabet: an ordered list of typed fields. Field order is fixed
/// for the lifetime of a run; the canonical element encoding depends on it.
class AlphabetSchema {
public:
  AlphabetSchema() = default;

  explicit AlphabetSchema(std::vector<FieldSpec> fields, std::uint32_t max_repetition = 1024)
      : fields_(std::move(fields)), max_rep_(max_repetition) {
    if (max_rep_ < 1) throw ConfigError("max_repetition must be positive");
    for (std::size_t i = 0; i < fields_.size(); ++i) {
      for (std::size_t j = i + 1; j < fields_.size(); ++j)
        if (fields_[i].name == fields_[j].name)
          throw ConfigError("duplicate field name '" + fields_[i].name + "'");
      if (fields_[i].kind == FieldKind::taxonomy && fields_[i].taxonomy.size() == 0)
        throw ConfigError("taxonomy field '" + fields_[i].name + "' has no taxonomy");
      if (fields_[i].kind == FieldKind::interval) {
        interval_fields_++;
        repetition_field_ = i;
      }
    }
    if (fields_.empty()) throw ConfigError("schema needs at least one field");
  }

  std::size_t field_count() const { return fields_.size(); }
  const FieldSpec& field(std::size_t i) const { return fields_[i]; }
  const std::vector<FieldSpec>& fields() const { return fields_; }
  std::uint32_t max_repetition() const { return max_rep_; }
  Interval universal_interval() const { return Interval{1, max_rep_}; }

  std::size_t field_index(std::string_view name) const {
    for (std::size_t i = 0; i < fields_.size(); ++i)
      if (fields_[i].name == name) return i;
    throw ConfigError("unknown field '" + std::string(name) + "'");
  }

  /// The repetition field: defined when the schema has exactly one interval
  /// field.
  std::optional<std::size_t> repetition_field() const {
    if (interval_fields_ == 1) return repetition_field_;
    return std::nullopt;
  }

private:
  std::vector<FieldSpec> fields_;
  std::uint32_t max_rep_ = 1024;
  std::size_t interval_fields_ = 0;
  std::size_t repetition_field_ = 0;
};

/// One event: a tuple of field values under a declared schema.
struct Element {
  std::vector<Value> values;
  friend bool operator==(const Element&, const Element&) = default;
};

// ---------------------------------------------------------------------------
// Canonical ordering (used for deterministic pattern storage and output).

inline int compare(const Interval& a, const Interval& b) {
  if (a.lo != b.lo) return a.lo < b.lo ? -1 : 1;
  if (a.hi != b.hi) return a.hi < b.hi ? -1 : 1;
  return 0;
}

inline int compare(const Value& a, const Value& b) {
  if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
  switch (a.index()) {
    case 0: {
      const auto& x = std::get<std::string>(a);
      const auto& y = std::get<std::string>(b);
      return x == y ? 0 : (x < y ? -1 : 1);
    }
    case 1: {
      const auto& x = std::get<ItemSet>(a);
      const auto& y = std::get<ItemSet>(b);
      return x == y ? 0 : (x < y ? -1 : 1);
    }
    default:
      return compare(std::get<Interval>(a), std::get<Interval>(b));
  }
}

inline int compare(const Element& a, const Element& b) {
  const std::size_t n = std::min(a.values.size(), b.values.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = compare(a.values[i], b.values[i]); c != 0) return c;
  if (a.values.size() != b.values.size()) return a.values.size() < b.values.size() ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------------------
// Element operations.

inline void validate_element(const AlphabetSchema& schema, const Element& e) {
  if (e.values.size() != schema.field_count())
    throw InputError("element has " + std::to_string(e.values.size()) + " values, schema has " +
                     std::to_string(schema.field_count()) + " fields");
  for (std::size_t i = 0; i < e.values.size(); ++i) {
    const FieldSpec& f = schema.field(i);
    switch (f.kind) {
      case FieldKind::taxonomy: {
        const auto* node = std::get_if<std::string>(&e.values[i]);
        if (!node) throw InputError("field '" + f.name + "' expects a taxonomy node");
        if (!f.taxonomy.contains(*node))
          throw InputError("taxonomy '" + f.taxonomy.name() + "': unknown node '" + *node + "'");
        break;
      }
      case FieldKind::itemset: {
        const auto* items = std::get_if<ItemSet>(&e.values[i]);
        if (!items) throw InputError("field '" + f.name + "' expects an item set");
        if (!std::is_sorted(items->begin(), items->end()) ||
            std::adjacent_find(items->begin(), items->end()) != items->end())
          throw InputError("field '" + f.name + "': item set not sorted/unique");
        break;
      }
      case FieldKind::interval: {
        const auto* iv = std::get_if<Interval>(&e.values[i]);
        if (!iv) throw InputError("field '" + f.name + "' expects an interval");
        if (iv->lo < 1 || iv->lo > iv->hi || iv->hi > schema.max_repetition())
          throw InputError("field '" + f.name + "': interval [" + std::to_string(iv->lo) + "," +
                           std::to_string(iv->hi) + "] outside [1," +
                           std::to_string(schema.max_repetition()) + "]");
        break;
      }
    }
  }
}

/// The most general value of a field: taxonomy root, empty item set, or the
/// universal interval.
inline Value general_value(const AlphabetSchema& schema, std::size_t field) {
  const FieldSpec& f = schema.field(field);
  switch (f.kind) {
    case FieldKind::taxonomy: return f.taxonomy.root();
    case FieldKind::itemset: return ItemSet{};
    default: return schema.universal_interval();
  }
}

inline bool value_is_general(const AlphabetSchema& schema, std::size_t field, const Value& v) {
  const FieldSpec& f = schema.field(field);
  switch (f.kind) {
    case FieldKind::taxonomy: return std::get<std::string>(v) == f.taxonomy.root();
    case FieldKind::itemset: return std::get<ItemSet>(v).empty();
    default: return std::get<Interval>(v) == schema.universal_interval();
  }
}

/// The canonical all-general element ⊥: matches every element under meet.
inline Element bottom_element(const AlphabetSchema& schema) {
  Element e;
  e.values.reserve(schema.field_count());
  for (std::size_t i = 0; i < schema.field_count(); ++i)
    e.values.push_back(general_value(schema, i));
  return e;
}

inline bool is_bottom(const AlphabetSchema& schema, const Element& e) {
  for (std::size_t i = 0; i < e.values.size(); ++i)
    if (!value_is_general(schema, i, e.values[i])) return false;
  return true;
}

namespace detail {
inline ItemSet intersect(const ItemSet& a, const ItemSet& b) {
  ItemSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline void check_same_shape(const AlphabetSchema& schema, const Element& a, const Element& b) {
  if (a.values.size() != schema.field_count() || b.values.size() != schema.field_count())
    throw InputError("element/schema field count mismatch");
  for (std::size_t i = 0; i < schema.field_count(); ++i) {
    const auto want = static_cast<std::size_t>(schema.field(i).kind);
    if (a.values[i].index() != want || b.values[i].index() != want)
      throw InputError("element field kind mismatch at field '" + schema.field(i).name + "'");
  }
}
}  // namespace detail

/// Componentwise meet: taxonomy deepest-common-ancestor, item-set
/// intersection, interval convex hull. Commutative, associative, idempotent.
inline Element element_meet(const AlphabetSchema& schema, const Element& a, const Element& b) {
  detail::check_same_shape(schema, a, b);
  Element out;
  out.values.reserve(schema.field_count());
  for (std::size_t i = 0; i < schema.field_count(); ++i) {
    const FieldSpec& f = schema.field(i);
    switch (f.kind) {
      case FieldKind::taxonomy:
        out.values.emplace_back(
            f.taxonomy.meet(std::get<std::string>(a.values[i]), std::get<std::string>(b.values[i])));
        break;
      case FieldKind::itemset:
        out.values.emplace_back(
            detail::intersect(std::get<ItemSet>(a.values[i]), std::get<ItemSet>(b.values[i])));
        break;
      case FieldKind::interval: {
        const Interval& x = std::get<Interval>(a.values[i]);
        const Interval& y = std::get<Interval>(b.values[i]);
        out.values.emplace_back(Interval{std::min(x.lo, y.lo), std::max(x.hi, y.hi)});
        break;
      }
    }
  }
  return out;
}

/// a ⊑ b (a is the more general element): componentwise taxonomy
/// ancestor-or-equal, item subset, interval superset-or-equal.
inline bool element_leq(const AlphabetSchema& schema, const Element& a, const Element& b) {
  detail::check_same_shape(schema, a, b);
  for (std::size_t i = 0; i < schema.field_count(); ++i) {
    const FieldSpec& f = schema.field(i);
    switch (f.kind) {
      case FieldKind::taxonomy:
        if (!f.taxonomy.leq(std::get<std::string>(a.values[i]), std::get<std::string>(b.values[i])))
          return false;
        break;
      case FieldKind::itemset: {
        const ItemSet& x = std::get<ItemSet>(a.values[i]);
        const ItemSet& y = std::get<ItemSet>(b.values[i]);
        if (!std::includes(y.begin(), y.end(), x.begin(), x.end())) return false;
        break;
      }
      case FieldKind::interval: {
        const Interval& x = std::get<Interval>(a.values[i]);
        const Interval& y = std::get<Interval>(b.values[i]);
        if (!(x.lo <= y.lo && y.hi <= x.hi)) return false;
        break;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Element-level projection (field blanking and required fields).

/// A projection spec resolved against a schema: which fields survive and
/// which must hold information for the element to survive.
struct ElementProjection {
  std::vector<char> keep;      // one flag per schema field
  std::vector<char> required;  // required implies keep

  bool is_identity() const {
    for (char k : keep)
      if (!k) return false;
    for (char r : required)
      if (r) return false;
    return true;
  }
};

/// Blanks every non-kept field to its most general value; if any required
/// field then holds its most general value the whole element collapses to ⊥.
/// Idempotent, contractive, monotone w.r.t. element_leq.
inline Element project_element(const AlphabetSchema& schema, const ElementProjection& proj,
                               const Element& e) {
  Element out = e;
  for (std::size_t i = 0; i < schema.field_count(); ++i)
    if (!proj.keep[i]) out.values[i] = general_value(schema, i);
  for (std::size_t i = 0; i < schema.field_count(); ++i)
    if (proj.required[i] && value_is_general(schema, i, out.values[i]))
      return bottom_element(schema);
  return out;
}

}  // namespace seqlat
