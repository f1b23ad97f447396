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
#include <cstddef>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "seqlat/errors.hpp"
#include "seqlat/pstruct.hpp"

namespace seqlat {

using ConceptId = int;

template <typename Desc>
struct BasicConcept {
  ConceptId id = -1;
  ObjectSet extent;
  Desc intent;

  std::size_t support() const { return extent.count(); }
};

/// A concept lattice: concepts in creation order (ids are dense), Hasse cover
/// links in both directions, and the distinguished top/bottom. Immutable
/// after construction; safe for concurrent reads.
template <typename Desc>
struct BasicLattice {
  std::vector<BasicConcept<Desc>> concepts;
  std::vector<std::vector<ConceptId>> parents;   // upper covers (larger extents)
  std::vector<std::vector<ConceptId>> children;  // lower covers
  ConceptId top = -1;
  ConceptId bottom = -1;
  std::size_t object_count = 0;

  std::size_t size() const { return concepts.size(); }

  const BasicConcept<Desc>& concept_at(ConceptId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= concepts.size())
      throw InputError("unknown concept id " + std::to_string(id));
    return concepts[static_cast<std::size_t>(id)];
  }

  const std::vector<ConceptId>& upper_covers(ConceptId id) const {
    concept_at(id);
    return parents[static_cast<std::size_t>(id)];
  }

  /// DD(c): the children along cover edges.
  const std::vector<ConceptId>& direct_descendants(ConceptId id) const {
    concept_at(id);
    return children[static_cast<std::size_t>(id)];
  }
};

struct BuildLimits {
  std::size_t max_concepts = 1'000'000;
};

namespace detail {

/// AddIntent-style incremental construction, generic over the description
/// algebra: set intersections become algebra meets, subset checks become
/// subsumption checks. Maintains the Hasse diagram as it grows.
template <typename Algebra>
class AddIntentBuilder {
public:
  using Desc = typename Algebra::Desc;

  AddIntentBuilder(const Algebra& alg, std::size_t object_count, const BuildLimits& limits)
      : alg_(alg), objects_(object_count), limits_(limits) {
    make_concept(ObjectSet(objects_), alg_.empty_meet());  // bottom seed
  }

  void add_object(std::size_t g, const Desc& description) {
    const ConceptId object_concept = add_intent(description, 0);
    // Add g to the object concept and everything above it.
    std::vector<char> seen(lat_.concepts.size(), 0);
    std::deque<ConceptId> queue{object_concept};
    seen[static_cast<std::size_t>(object_concept)] = 1;
    while (!queue.empty()) {
      const ConceptId c = queue.front();
      queue.pop_front();
      lat_.concepts[static_cast<std::size_t>(c)].extent.set(g);
      for (ConceptId p : lat_.parents[static_cast<std::size_t>(c)]) {
        if (!seen[static_cast<std::size_t>(p)]) {
          seen[static_cast<std::size_t>(p)] = 1;
          queue.push_back(p);
        }
      }
    }
  }

  BasicLattice<Desc> finish() {
    for (auto& v : lat_.parents) std::sort(v.begin(), v.end());
    for (auto& v : lat_.children) std::sort(v.begin(), v.end());
    lat_.object_count = objects_;
    lat_.bottom = 0;
    lat_.top = -1;
    for (const auto& c : lat_.concepts) {
      if (c.extent.count() == objects_) {
        lat_.top = c.id;
        break;
      }
    }
    if (lat_.top == -1) lat_.top = 0;  // no objects: the seed is both ends
    return std::move(lat_);
  }

private:
  ConceptId make_concept(ObjectSet extent, Desc intent) {
    if (lat_.concepts.size() >= limits_.max_concepts)
      throw LimitError("concept limit of " + std::to_string(limits_.max_concepts) +
                       " exceeded; tighten the projection or raise max_concepts");
    const ConceptId id = static_cast<ConceptId>(lat_.concepts.size());
    lat_.concepts.push_back({id, std::move(extent), std::move(intent)});
    lat_.parents.emplace_back();
    lat_.children.emplace_back();
    return id;
  }

  const Desc& intent_of(ConceptId c) const {
    return lat_.concepts[static_cast<std::size_t>(c)].intent;
  }

  void set_link(ConceptId parent, ConceptId child) {
    lat_.parents[static_cast<std::size_t>(child)].push_back(parent);
    lat_.children[static_cast<std::size_t>(parent)].push_back(child);
  }

  void remove_link(ConceptId parent, ConceptId child) {
    auto& ps = lat_.parents[static_cast<std::size_t>(child)];
    auto it = std::find(ps.begin(), ps.end(), parent);
    if (it == ps.end()) return;
    ps.erase(it);
    auto& cs = lat_.children[static_cast<std::size_t>(parent)];
    cs.erase(std::find(cs.begin(), cs.end(), child));
  }

  /// Climbs from `generator` to the most general concept whose intent still
  /// subsumes `intent` from above.
  ConceptId maximal_concept(const Desc& intent, ConceptId generator) const {
    bool moved = true;
    while (moved) {
      moved = false;
      for (ConceptId p : lat_.parents[static_cast<std::size_t>(generator)]) {
        if (alg_.leq(intent, intent_of(p))) {
          generator = p;
          moved = true;
          break;
        }
      }
    }
    return generator;
  }

  ConceptId add_intent(const Desc& intent, ConceptId generator) {
    generator = maximal_concept(intent, generator);
    if (alg_.equal(intent_of(generator), intent)) return generator;

    const std::vector<ConceptId> candidates = lat_.parents[static_cast<std::size_t>(generator)];
    std::vector<ConceptId> new_parents;
    for (ConceptId candidate : candidates) {
      if (!alg_.leq(intent_of(candidate), intent))
        candidate = add_intent(alg_.meet(intent_of(candidate), intent), candidate);
      bool add = true;
      for (auto it = new_parents.begin(); it != new_parents.end();) {
        if (alg_.leq(intent_of(candidate), intent_of(*it))) {
          add = false;
          break;
        }
        if (alg_.leq(intent_of(*it), intent_of(candidate)))
          it = new_parents.erase(it);
        else
          ++it;
      }
      if (add) new_parents.push_back(candidate);
    }

    const ConceptId fresh =
        make_concept(lat_.concepts[static_cast<std::size_t>(generator)].extent, intent);
    for (ConceptId parent : new_parents) {
      remove_link(parent, generator);
      set_link(parent, fresh);
    }
    set_link(fresh, generator);
    return fresh;
  }

  Algebra alg_;
  std::size_t objects_;
  BuildLimits limits_;
  BasicLattice<Desc> lat_;
};

}  // namespace detail

/// Builds the complete concept lattice of the given descriptions under the
/// algebra. Deterministic: objects are processed in input order and concept
/// ids are assigned at creation.
template <typename Algebra>
BasicLattice<typename Algebra::Desc> build_concept_lattice(
    const std::vector<typename Algebra::Desc>& descriptions, const Algebra& alg,
    const BuildLimits& limits = {}) {
  detail::AddIntentBuilder<Algebra> builder(alg, descriptions.size(), limits);
  for (std::size_t g = 0; g < descriptions.size(); ++g) builder.add_object(g, descriptions[g]);
  return builder.finish();
}

using PatternLattice = BasicLattice<PatternDesc>;
using ContextLattice = BasicLattice<AttrSet>;

inline PatternLattice build_lattice(const PatternStructure& ps, const BuildLimits& limits = {}) {
  std::vector<PatternDesc> descs;
  descs.reserve(ps.object_count());
  for (std::size_t g = 0; g < ps.object_count(); ++g)
    descs.push_back(PatternDesc::of(ps.description(g)));
  return build_concept_lattice(descs, ps.algebra(), limits);
}

inline ContextLattice build_lattice(const FormalContext& ctx, const BuildLimits& limits = {}) {
  return build_concept_lattice(ctx.rows, context_as_pattern_structure(ctx), limits);
}

// ---------------------------------------------------------------------------
// Lattice operations.

namespace detail {
template <typename Desc>
std::vector<char> reachable(const BasicLattice<Desc>& lat,
                            const std::vector<std::vector<ConceptId>>& links, ConceptId from) {
  std::vector<char> seen(lat.size(), 0);
  std::deque<ConceptId> queue{from};
  seen[static_cast<std::size_t>(from)] = 1;
  while (!queue.empty()) {
    const ConceptId c = queue.front();
    queue.pop_front();
    for (ConceptId n : links[static_cast<std::size_t>(c)]) {
      if (!seen[static_cast<std::size_t>(n)]) {
        seen[static_cast<std::size_t>(n)] = 1;
        queue.push_back(n);
      }
    }
  }
  return seen;
}
}  // namespace detail

/// Greatest common descendant of two concepts (unique by the lattice
/// property).
template <typename Desc>
ConceptId meet_concepts(const BasicLattice<Desc>& lat, ConceptId a, ConceptId b) {
  lat.concept_at(a);
  lat.concept_at(b);
  const auto below_a = detail::reachable(lat, lat.children, a);
  const auto below_b = detail::reachable(lat, lat.children, b);
  ConceptId best = -1;
  std::size_t best_support = 0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (!below_a[i] || !below_b[i]) continue;
    const std::size_t support = lat.concepts[i].support();
    if (best == -1 || support > best_support) {
      best = static_cast<ConceptId>(i);
      best_support = support;
    }
  }
  return best;
}

/// Least common ancestor of two concepts.
template <typename Desc>
ConceptId join_concepts(const BasicLattice<Desc>& lat, ConceptId a, ConceptId b) {
  lat.concept_at(a);
  lat.concept_at(b);
  const auto above_a = detail::reachable(lat, lat.parents, a);
  const auto above_b = detail::reachable(lat, lat.parents, b);
  ConceptId best = -1;
  std::size_t best_support = 0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (!above_a[i] || !above_b[i]) continue;
    const std::size_t support = lat.concepts[i].support();
    if (best == -1 || support < best_support) {
      best = static_cast<ConceptId>(i);
      best_support = support;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Structural validation.

struct LatticeViolation {
  enum class Kind { closure, cover, reduction, shape };
  Kind kind;
  std::string message;
};

/// Re-derives every concept's closure under the algebra, checks that the
/// cover edges form the transitive reduction of extent inclusion, and checks
/// the unique top/bottom. Violations are data, not errors.
template <typename Algebra>
std::vector<LatticeViolation> validate_lattice(
    const std::vector<typename Algebra::Desc>& descriptions, const Algebra& alg,
    const BasicLattice<typename Algebra::Desc>& lat) {
  using Kind = LatticeViolation::Kind;
  std::vector<LatticeViolation> out;
  const std::size_t n = lat.size();
  const std::size_t objects = descriptions.size();

  auto derive_intent = [&](const ObjectSet& a) {
    auto d = alg.empty_meet();
    for (std::size_t g = a.find_first(); g != ObjectSet::npos; g = a.find_next(g))
      d = alg.meet(d, descriptions[g]);
    return d;
  };
  auto derive_extent = [&](const typename Algebra::Desc& d) {
    ObjectSet a(objects);
    for (std::size_t g = 0; g < objects; ++g)
      if (alg.leq(d, descriptions[g])) a.set(g);
    return a;
  };

  for (const auto& c : lat.concepts) {
    if (!alg.equal(derive_intent(c.extent), c.intent))
      out.push_back({Kind::closure, "concept " + std::to_string(c.id) +
                                        ": intent differs from derived extent closure"});
    if (derive_extent(c.intent) != c.extent)
      out.push_back({Kind::closure, "concept " + std::to_string(c.id) +
                                        ": extent differs from derived intent closure"});
  }

  // Covers: child extent strictly inside parent extent, nothing in between,
  // and every immediate inclusion present as an edge.
  auto strictly_inside = [&](const ObjectSet& x, const ObjectSet& y) {
    return x.is_subset_of(y) && x != y;
  };
  std::vector<std::vector<char>> has_edge(n, std::vector<char>(n, 0));
  for (std::size_t p = 0; p < n; ++p)
    for (ConceptId ch : lat.children[p]) has_edge[p][static_cast<std::size_t>(ch)] = 1;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t c = 0; c < n; ++c) {
      const bool inside = strictly_inside(lat.concepts[c].extent, lat.concepts[p].extent);
      bool between = false;
      if (inside) {
        for (std::size_t z = 0; z < n && !between; ++z)
          between = z != p && z != c &&
                    strictly_inside(lat.concepts[c].extent, lat.concepts[z].extent) &&
                    strictly_inside(lat.concepts[z].extent, lat.concepts[p].extent);
      }
      const bool want = inside && !between;
      if (has_edge[p][c] && !want)
        out.push_back({Kind::reduction, "edge " + std::to_string(p) + "->" + std::to_string(c) +
                                            " is not in the transitive reduction"});
      if (!has_edge[p][c] && want)
        out.push_back({Kind::cover, "missing cover edge " + std::to_string(p) + "->" +
                                        std::to_string(c)});
    }
  }

  std::size_t tops = 0, bottoms = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (lat.parents[i].empty()) {
      ++tops;
      if (lat.concepts[i].extent.count() != objects)
        out.push_back({Kind::shape, "maximal concept " + std::to_string(i) +
                                        " does not have the full extent"});
    }
    if (lat.children[i].empty()) ++bottoms;
  }
  if (n > 0 && tops != 1)
    out.push_back({Kind::shape, "expected one top, found " + std::to_string(tops)});
  if (n > 0 && bottoms != 1)
    out.push_back({Kind::shape, "expected one bottom, found " + std::to_string(bottoms)});
  return out;
}

inline std::vector<LatticeViolation> validate_lattice(const PatternStructure& ps,
                                                      const PatternLattice& lat) {
  std::vector<PatternDesc> descs;
  descs.reserve(ps.object_count());
  for (std::size_t g = 0; g < ps.object_count(); ++g)
    descs.push_back(PatternDesc::of(ps.description(g)));
  return validate_lattice(descs, ps.algebra(), lat);
}

inline std::vector<LatticeViolation> validate_lattice(const FormalContext& ctx,
                                                      const ContextLattice& lat) {
  return validate_lattice(ctx.rows, context_as_pattern_structure(ctx), lat);
}

}  // namespace seqlat
