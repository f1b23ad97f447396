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
#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "seqlat/errors.hpp"
#include "seqlat/lattice.hpp"

namespace seqlat {

using BigInt = boost::multiprecision::cpp_int;

/// Non-negative exact rational. Kept unreduced: stability denominators stay
/// the literal 2^|extent|.
struct BigRat {
  BigInt num = 0;
  BigInt den = 1;

  friend bool operator==(const BigRat& a, const BigRat& b) { return a.num * b.den == b.num * a.den; }
  friend bool operator<(const BigRat& a, const BigRat& b) { return a.num * b.den < b.num * a.den; }
  friend bool operator<=(const BigRat& a, const BigRat& b) { return a.num * b.den <= b.num * a.den; }

  /// Decimal string with fixed digits, round half up. Values are in [0,1+].
  std::string to_decimal(unsigned digits = 6) const {
    BigInt scale = 1;
    for (unsigned i = 0; i < digits; ++i) scale *= 10;
    const BigInt scaled = (num * scale * 2 + den) / (den * 2);
    const BigInt whole = scaled / scale;
    std::string frac = BigInt(scaled % scale).str();
    frac.insert(0, digits - frac.size(), '0');
    return whole.str() + "." + frac;
  }
};

inline BigInt pow2(std::size_t e) { return BigInt(1) << e; }

/// Parses a decimal like "0.97" into an exact rational.
inline BigRat parse_decimal(const std::string& text) {
  const auto dot = text.find('.');
  const std::string whole = dot == std::string::npos ? text : text.substr(0, dot);
  const std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
  for (char ch : whole + frac)
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw InputError("not a non-negative decimal: '" + text + "'");
  if (whole.empty() && frac.empty())
    throw InputError("not a non-negative decimal: '" + text + "'");
  BigRat r;
  r.num = whole.empty() ? BigInt(0) : BigInt(whole);
  for (char ch : frac) {
    r.num = r.num * 10 + (ch - '0');
    r.den *= 10;
  }
  return r;
}

struct ConceptStability {
  BigInt subset_count;                // N(c): subsets of the extent deriving to this intent
  BigInt stability_num;               // = subset_count
  BigInt stability_den;               // = 2^|extent|
  std::optional<std::uint64_t> md;    // min extent delta to a direct descendant
  BigRat bound;                       // 1 - 2^{-md}; 1 when md is undefined

  BigRat stability() const { return BigRat{stability_num, stability_den}; }
};

struct StabilityReport {
  std::vector<ConceptStability> per_concept;  // indexed by concept id
  BigInt total_subsets;                       // sum of N(c); must equal 2^|G|
};

namespace detail {
template <typename Desc>
void check_lattice_sanity(const BasicLattice<Desc>& lat) {
  for (std::size_t p = 0; p < lat.size(); ++p) {
    for (ConceptId c : lat.children[p]) {
      if (c < 0 || static_cast<std::size_t>(c) >= lat.size())
        throw InputError("lattice failed sanity check (bad cover id); run validate_lattice");
      const auto& pe = lat.concepts[p].extent;
      const auto& ce = lat.concepts[static_cast<std::size_t>(c)].extent;
      if (!ce.is_subset_of(pe) || ce == pe)
        throw InputError("lattice failed sanity check (cover edge " + std::to_string(p) + "->" +
                         std::to_string(c) + " extents); run validate_lattice");
    }
  }
}
}  // namespace detail

/// md(c) and the stability bound 1 - 2^{-md(c)}. Concepts without
/// descendants get md = none and bound = 1 (documented convention).
template <typename Desc>
std::pair<std::optional<std::uint64_t>, BigRat> stability_bound(const BasicLattice<Desc>& lat,
                                                                ConceptId c) {
  const auto& dd = lat.direct_descendants(c);
  if (dd.empty()) return {std::nullopt, BigRat{1, 1}};
  std::uint64_t md = std::numeric_limits<std::uint64_t>::max();
  const std::size_t mine = lat.concept_at(c).support();
  for (ConceptId d : dd)
    md = std::min<std::uint64_t>(md, mine - lat.concept_at(d).support());
  const BigInt p = pow2(static_cast<std::size_t>(md));
  return {md, BigRat{p - 1, p}};
}

/// Exact stability of every concept: N(c) = 2^|Ext(c)| - Σ N(d) over all
/// concepts strictly below c, computed bottom-up over the cover graph.
/// σ(c) = N(c) / 2^|Ext(c)| as exact integers.
template <typename Desc>
StabilityReport stability_exact(const BasicLattice<Desc>& lat) {
  detail::check_lattice_sanity(lat);
  const std::size_t n = lat.size();
  StabilityReport report;
  report.per_concept.resize(n);
  report.total_subsets = 0;

  // Process in ascending extent size so every strict descendant is done
  // before its ancestors.
  std::vector<ConceptId> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<ConceptId>(i);
  std::sort(order.begin(), order.end(), [&](ConceptId a, ConceptId b) {
    const auto sa = lat.concepts[static_cast<std::size_t>(a)].support();
    const auto sb = lat.concepts[static_cast<std::size_t>(b)].support();
    return sa != sb ? sa < sb : a < b;
  });

  std::vector<unsigned> stamp(n, 0);
  unsigned epoch = 0;
  for (ConceptId c : order) {
    // Sum N(d) over every concept strictly below c (DFS through covers).
    ++epoch;
    BigInt below = 0;
    std::vector<ConceptId> stack(lat.children[static_cast<std::size_t>(c)].begin(),
                                 lat.children[static_cast<std::size_t>(c)].end());
    for (ConceptId d : stack) stamp[static_cast<std::size_t>(d)] = epoch;
    while (!stack.empty()) {
      const ConceptId d = stack.back();
      stack.pop_back();
      below += report.per_concept[static_cast<std::size_t>(d)].subset_count;
      for (ConceptId e : lat.children[static_cast<std::size_t>(d)]) {
        if (stamp[static_cast<std::size_t>(e)] != epoch) {
          stamp[static_cast<std::size_t>(e)] = epoch;
          stack.push_back(e);
        }
      }
    }
    auto& entry = report.per_concept[static_cast<std::size_t>(c)];
    const std::size_t support = lat.concepts[static_cast<std::size_t>(c)].support();
    entry.subset_count = pow2(support) - below;
    entry.stability_num = entry.subset_count;
    entry.stability_den = pow2(support);
    auto [md, bound] = stability_bound(lat, c);
    entry.md = md;
    entry.bound = bound;
    report.total_subsets += entry.subset_count;
  }
  return report;
}

/// All concepts whose bound clears θ: 1 - 2^{-md(c)} ≥ θ, i.e.
/// md(c) ≥ -log2(1-θ). A superset of the truly θ-stable concepts; concepts
/// without descendants (bound = 1) always qualify. Exact arithmetic.
template <typename Desc>
std::vector<ConceptId> stable_filter(const BasicLattice<Desc>& lat, const BigRat& theta) {
  if (theta.num * 1 >= theta.den || theta.num < 0)
    throw InputError("theta must be in [0,1)");
  std::vector<ConceptId> out;
  for (std::size_t c = 0; c < lat.size(); ++c) {
    const auto [md, bound] = stability_bound(lat, static_cast<ConceptId>(c));
    if (!md) {
      out.push_back(static_cast<ConceptId>(c));
      continue;
    }
    // 1 - 2^{-md} >= p/q  <=>  (q - p) * 2^md >= q
    if ((theta.den - theta.num) * pow2(static_cast<std::size_t>(*md)) >= theta.den)
      out.push_back(static_cast<ConceptId>(c));
  }
  return out;
}

/// The real-valued filter threshold -log2(1-θ); md must reach it (reported
/// for diagnostics; filtering itself is exact).
inline double stable_filter_threshold(const BigRat& theta) {
  const double t = 1.0 - static_cast<double>(theta.num) / static_cast<double>(theta.den);
  return -std::log2(t);
}

enum class RankKey { stability, bound, support };

inline RankKey parse_rank_key(const std::string& key) {
  if (key == "stability") return RankKey::stability;
  if (key == "bound") return RankKey::bound;
  if (key == "support") return RankKey::support;
  throw InputError("unknown ranking key '" + key + "' (stability|bound|support)");
}

/// Concept ids in descending key order; ties broken by support, then id.
/// Concepts with an empty extent (the unrealized bottom) are left out unless
/// asked for.
template <typename Desc>
std::vector<ConceptId> rank_concepts(const StabilityReport& report,
                                     const BasicLattice<Desc>& lat, RankKey key,
                                     bool include_empty_extent = false) {
  std::vector<ConceptId> ids;
  for (std::size_t c = 0; c < lat.size(); ++c)
    if (include_empty_extent || lat.concepts[c].support() > 0)
      ids.push_back(static_cast<ConceptId>(c));
  auto value_less = [&](ConceptId a, ConceptId b) {
    const auto& ra = report.per_concept[static_cast<std::size_t>(a)];
    const auto& rb = report.per_concept[static_cast<std::size_t>(b)];
    switch (key) {
      case RankKey::stability: return ra.stability() < rb.stability();
      case RankKey::bound: return ra.bound < rb.bound;
      default: {
        return lat.concepts[static_cast<std::size_t>(a)].support() <
               lat.concepts[static_cast<std::size_t>(b)].support();
      }
    }
  };
  std::sort(ids.begin(), ids.end(), [&](ConceptId a, ConceptId b) {
    if (value_less(a, b)) return false;
    if (value_less(b, a)) return true;
    const auto sa = lat.concepts[static_cast<std::size_t>(a)].support();
    const auto sb = lat.concepts[static_cast<std::size_t>(b)].support();
    if (sa != sb) return sa > sb;
    return a < b;
  });
  return ids;
}

}  // namespace seqlat
