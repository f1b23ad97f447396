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
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "seqlat/alphabet.hpp"
#include "seqlat/errors.hpp"
#include "seqlat/sequence.hpp"

namespace seqlat {

/// Configurable interior operator on patterns: field selection, required
/// fields, and the minimal-length cutoff, applied in that order.
struct ProjectionSpec {
  std::vector<std::string> selected_fields;
  std::vector<std::string> required_fields;
  std::size_t min_length = 0;
  bool use_repetition = false;

  static ProjectionSpec identity(const AlphabetSchema& schema) {
    ProjectionSpec spec;
    for (const FieldSpec& f : schema.fields()) spec.selected_fields.push_back(f.name);
    return spec;
  }
};

/// A spec resolved against a schema; validates names and the
/// required ⊆ selected invariant once.
struct CompiledProjection {
  ElementProjection element;
  std::size_t min_length = 0;
  bool use_repetition = false;

  bool alpha_is_identity() const { return element.is_identity(); }
  bool is_identity() const { return alpha_is_identity() && min_length == 0; }
};

inline CompiledProjection compile_projection(const AlphabetSchema& schema,
                                             const ProjectionSpec& spec) {
  CompiledProjection out;
  out.min_length = spec.min_length;
  out.use_repetition = spec.use_repetition;
  out.element.keep.assign(schema.field_count(), 0);
  out.element.required.assign(schema.field_count(), 0);
  for (const std::string& name : spec.selected_fields)
    out.element.keep[schema.field_index(name)] = 1;
  for (const std::string& name : spec.required_fields) {
    const std::size_t i = schema.field_index(name);
    if (!out.element.keep[i])
      throw ConfigError("required field '" + name + "' is not selected");
    out.element.required[i] = 1;
  }
  return out;
}

/// Minimal-Length Projection: drops maximal sequences shorter than min_len.
inline Pattern apply_mlp(std::size_t min_len, const Pattern& d) {
  if (min_len == 0) return d;
  std::vector<Sequence> keep;
  for (const Sequence& s : d.sequences())
    if (s.size() >= min_len) keep.push_back(s);
  return Pattern::from_antichain_unchecked(std::move(keep));
}

/// Alphabet projection lifted to patterns: project every element, split the
/// result at ⊥ into maximal valid runs, and reduce to the maximal antichain.
/// Monotone, contractive, idempotent.
inline Pattern apply_alphabet_projection(const AlphabetSchema& schema,
                                         const ElementProjection& proj, const Pattern& d) {
  if (proj.is_identity()) return d;
  std::vector<Sequence> collected;
  for (const Sequence& s : d.sequences()) {
    std::vector<Element> projected;
    projected.reserve(s.size());
    for (const Element& e : s.elements) projected.push_back(project_element(schema, proj, e));
    for (Sequence& run : split_at_bottom(schema, projected)) collected.push_back(std::move(run));
  }
  return maximal_antichain(schema, std::move(collected));
}

/// The full configured projection ψ: alphabet projection first (it can only
/// shorten sequences via ⊥-splitting), then the length cutoff.
inline Pattern apply_projection(const AlphabetSchema& schema, const CompiledProjection& psi,
                                const Pattern& d) {
  return apply_mlp(psi.min_length, apply_alphabet_projection(schema, psi.element, d));
}

/// x ⊓_ψ y := ψ(x ⊓ y). On ψ-fixed points this is the semilattice operation
/// of the projected pattern structure.
inline Pattern projected_meet(const AlphabetSchema& schema, const CompiledProjection& psi,
                              const Pattern& x, const Pattern& y) {
  return apply_projection(schema, psi, pattern_meet(schema, x, y));
}

/// Expands shorthand projection names like "GR2" or "RPI3": letters select
/// fields (G → 1st taxonomy field, R → 2nd taxonomy field, P → 1st itemset
/// field, I → the repetition interval field), trailing digits set min_length.
/// The RPI family (R without G) additionally requires the reason field to be
/// non-empty; the presence of I turns repetition encoding on.
inline ProjectionSpec expand_projection_name(const AlphabetSchema& schema,
                                             std::string_view name) {
  ProjectionSpec spec;
  std::size_t pos = 0;
  bool has_g = false, has_r = false;
  std::string r_field;
  auto nth_field_of_kind = [&](FieldKind kind, std::size_t nth) -> std::string {
    std::size_t seen = 0;
    for (const FieldSpec& f : schema.fields())
      if (f.kind == kind && seen++ == nth) return f.name;
    throw ConfigError("projection '" + std::string(name) + "': schema has no " +
                      std::to_string(nth + 1) + ". " + to_string(kind) + " field");
  };
  for (; pos < name.size() && !std::isdigit(static_cast<unsigned char>(name[pos])); ++pos) {
    switch (name[pos]) {
      case 'G':
        spec.selected_fields.push_back(nth_field_of_kind(FieldKind::taxonomy, 0));
        has_g = true;
        break;
      case 'R':
        r_field = nth_field_of_kind(FieldKind::taxonomy, 1);
        spec.selected_fields.push_back(r_field);
        has_r = true;
        break;
      case 'P':
        spec.selected_fields.push_back(nth_field_of_kind(FieldKind::itemset, 0));
        break;
      case 'I': {
        const auto rep = schema.repetition_field();
        if (!rep)
          throw ConfigError("projection '" + std::string(name) +
                            "': schema has no repetition interval field");
        spec.selected_fields.push_back(schema.field(*rep).name);
        spec.use_repetition = true;
        break;
      }
      default:
        throw ConfigError("projection '" + std::string(name) + "': unknown field letter '" +
                          std::string(1, name[pos]) + "'");
    }
  }
  if (spec.selected_fields.empty())
    throw ConfigError("projection '" + std::string(name) + "': no fields selected");
  if (pos < name.size()) {
    std::size_t digits = 0;
    try {
      spec.min_length = std::stoul(std::string(name.substr(pos)), &digits);
    } catch (const std::exception&) {
      throw ConfigError("projection '" + std::string(name) + "': bad length suffix");
    }
    if (pos + digits != name.size())
      throw ConfigError("projection '" + std::string(name) + "': trailing garbage after length");
  }
  if (has_r && !has_g) spec.required_fields.push_back(r_field);
  return spec;
}

}  // namespace seqlat
