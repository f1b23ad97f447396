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

#include <boost/dynamic_bitset.hpp>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seqlat/alphabet.hpp"
#include "seqlat/errors.hpp"
#include "seqlat/projection.hpp"
#include "seqlat/sequence.hpp"
#include "seqlat/textform.hpp"

namespace seqlat {

using ObjectSet = boost::dynamic_bitset<>;

/// A pattern or the synthetic top description ⊤. ⊤ subsumes every pattern
/// (x ⊑ ⊤, ⊤ ⊓ x = x); it seeds lattice construction and is the intent of an
/// empty extent. It is never the description of an object.
struct PatternDesc {
  bool top = false;
  Pattern pattern;

  static PatternDesc top_value() { return PatternDesc{true, {}}; }
  static PatternDesc of(Pattern p) { return PatternDesc{false, std::move(p)}; }
  friend bool operator==(const PatternDesc&, const PatternDesc&) = default;
};

inline std::string to_text(const AlphabetSchema& schema, const PatternDesc& d) {
  return d.top ? "TOP" : to_text(schema, d.pattern);
}

/// Description algebra of the (projected) sequential pattern structure:
/// meets go through ⊓_ψ so every description in play stays a ψ-fixed point.
struct PatternAlgebra {
  const AlphabetSchema* schema = nullptr;
  const CompiledProjection* psi = nullptr;

  using Desc = PatternDesc;

  Desc meet(const Desc& a, const Desc& b) const {
    if (a.top) return b;
    if (b.top) return a;
    return Desc::of(projected_meet(*schema, *psi, a.pattern, b.pattern));
  }

  bool leq(const Desc& a, const Desc& b) const {
    if (b.top) return true;
    if (a.top) return false;
    return pattern_leq(*schema, a.pattern, b.pattern);
  }

  bool equal(const Desc& a, const Desc& b) const { return a == b; }

  Desc empty_meet() const { return Desc::top_value(); }

  std::string digest(const Desc& d) const { return to_text(*schema, d); }
};

/// The pattern structure (G, (D,⊓), δ): an object registry whose descriptions
/// are already projected (δ_ψ = ψ ∘ δ) and the Galois ⋄-operators.
class PatternStructure {
public:
  PatternStructure() = default;

  /// Builds from raw per-object event sequences: optional repetition
  /// encoding, ⊥-splitting (a raw event that is all-general splits the
  /// sequence), then ψ. An object whose sequence vanishes keeps the empty
  /// (most general) description.
  static PatternStructure build(AlphabetSchema schema, ProjectionSpec projection,
                                const std::vector<std::pair<std::string, Sequence>>& raw) {
    PatternStructure ps;
    ps.schema_ = std::move(schema);
    ps.projection_ = std::move(projection);
    ps.compiled_ = compile_projection(ps.schema_, ps.projection_);
    for (const auto& [id, seq] : raw) {
      if (ps.index_.count(id)) throw InputError("duplicate object id '" + id + "'");
      for (const Element& e : seq.elements) validate_element(ps.schema_, e);
      Sequence prepared = seq;
      if (ps.compiled_.use_repetition) prepared = run_length_encode(ps.schema_, prepared);
      Pattern d = maximal_antichain(ps.schema_, split_at_bottom(ps.schema_, prepared.elements));
      d = apply_projection(ps.schema_, ps.compiled_, d);
      ps.index_.emplace(id, ps.ids_.size());
      ps.ids_.push_back(id);
      ps.descriptions_.push_back(std::move(d));
    }
    return ps;
  }

  const AlphabetSchema& schema() const { return schema_; }
  const ProjectionSpec& projection() const { return projection_; }
  const CompiledProjection& compiled() const { return compiled_; }
  PatternAlgebra algebra() const { return PatternAlgebra{&schema_, &compiled_}; }

  std::size_t object_count() const { return ids_.size(); }
  const std::vector<std::string>& object_ids() const { return ids_; }
  const std::string& object_id(std::size_t i) const { return ids_[i]; }
  const Pattern& description(std::size_t i) const { return descriptions_[i]; }

  std::size_t object_index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw InputError("unknown object id '" + id + "'");
    return it->second;
  }

  /// A^⋄: the common description of the objects in A (⊤ for A = ∅).
  PatternDesc extent_to_intent(const ObjectSet& a) const {
    check_extent(a);
    PatternAlgebra alg = algebra();
    PatternDesc d = alg.empty_meet();
    for (std::size_t g = a.find_first(); g != ObjectSet::npos; g = a.find_next(g))
      d = alg.meet(d, PatternDesc::of(descriptions_[g]));
    return d;
  }

  /// d^⋄: every object whose description subsumes d.
  ObjectSet intent_to_extent(const PatternDesc& d) const {
    PatternAlgebra alg = algebra();
    ObjectSet out(object_count());
    for (std::size_t g = 0; g < object_count(); ++g)
      if (alg.leq(d, PatternDesc::of(descriptions_[g]))) out.set(g);
    return out;
  }

  // Convenience overloads on object-id lists.
  PatternDesc extent_to_intent(const std::vector<std::string>& ids) const {
    ObjectSet a(object_count());
    for (const std::string& id : ids) a.set(object_index(id));
    return extent_to_intent(a);
  }

  std::vector<std::string> intent_to_extent_ids(const PatternDesc& d) const {
    const ObjectSet a = intent_to_extent(d);
    std::vector<std::string> out;
    for (std::size_t g = a.find_first(); g != ObjectSet::npos; g = a.find_next(g))
      out.push_back(ids_[g]);
    return out;
  }

private:
  void check_extent(const ObjectSet& a) const {
    if (a.size() != object_count())
      throw InputError("object set size " + std::to_string(a.size()) +
                       " does not match object count " + std::to_string(object_count()));
  }

  AlphabetSchema schema_;
  ProjectionSpec projection_;
  CompiledProjection compiled_;
  std::vector<std::string> ids_;
  std::vector<Pattern> descriptions_;
  std::unordered_map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Binary FCA compatibility mode.

using AttrSet = boost::dynamic_bitset<>;

/// A formal context (G, M, I) with the standard derivation operators.
struct FormalContext {
  std::vector<std::string> objects;
  std::vector<std::string> attributes;
  std::vector<AttrSet> rows;  // one attribute set per object

  std::size_t object_index(const std::string& id) const {
    for (std::size_t i = 0; i < objects.size(); ++i)
      if (objects[i] == id) return i;
    throw InputError("unknown object '" + id + "'");
  }

  std::size_t attribute_index(const std::string& id) const {
    for (std::size_t i = 0; i < attributes.size(); ++i)
      if (attributes[i] == id) return i;
    throw InputError("unknown attribute '" + id + "'");
  }

  /// A' — attributes shared by every object in A.
  AttrSet derive_objects(const ObjectSet& a) const {
    AttrSet out(attributes.size());
    out.set();
    for (std::size_t g = a.find_first(); g != ObjectSet::npos; g = a.find_next(g))
      out &= rows[g];
    return out;
  }

  /// B' — objects carrying every attribute in B.
  ObjectSet derive_attributes(const AttrSet& b) const {
    ObjectSet out(objects.size());
    for (std::size_t g = 0; g < objects.size(); ++g)
      if (b.is_subset_of(rows[g])) out.set(g);
    return out;
  }

  std::vector<std::string> derive_objects_named(const std::vector<std::string>& ids) const {
    ObjectSet a(objects.size());
    for (const auto& id : ids) a.set(object_index(id));
    return attribute_names(derive_objects(a));
  }

  std::vector<std::string> derive_attributes_named(const std::vector<std::string>& ids) const {
    AttrSet b(attributes.size());
    for (const auto& id : ids) b.set(attribute_index(id));
    const ObjectSet a = derive_attributes(b);
    std::vector<std::string> out;
    for (std::size_t g = a.find_first(); g != ObjectSet::npos; g = a.find_next(g))
      out.push_back(objects[g]);
    return out;
  }

  std::vector<std::string> attribute_names(const AttrSet& b) const {
    std::vector<std::string> out;
    for (std::size_t m = b.find_first(); m != AttrSet::npos; m = b.find_next(m))
      out.push_back(attributes[m]);
    return out;
  }
};

/// Standard FCA presented as a pattern structure: descriptions are attribute
/// sets, the meet is set intersection, and the full attribute set is the real
/// top description. Used to validate the generic lattice engine.
struct ContextAlgebra {
  std::size_t attribute_count = 0;

  using Desc = AttrSet;

  Desc meet(const Desc& a, const Desc& b) const { return a & b; }
  bool leq(const Desc& a, const Desc& b) const { return a.is_subset_of(b); }
  bool equal(const Desc& a, const Desc& b) const { return a == b; }

  Desc empty_meet() const {
    Desc d(attribute_count);
    d.set();
    return d;
  }

  std::string digest(const Desc& d) const {
    std::string s;
    boost::to_string(d, s);
    return s;
  }
};

inline ContextAlgebra context_as_pattern_structure(const FormalContext& ctx) {
  return ContextAlgebra{ctx.attributes.size()};
}

}  // namespace seqlat
