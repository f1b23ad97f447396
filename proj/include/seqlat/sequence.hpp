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
#include <utility>
#include <vector>

#include "seqlat/alphabet.hpp"
#include "seqlat/errors.hpp"
#include "seqlat/runtime.hpp"

namespace seqlat {

/// An ordered list of events. A sequence stored inside a Pattern is valid:
/// non-empty and free of ⊥ elements.
struct Sequence {
  std::vector<Element> elements;

  std::size_t size() const { return elements.size(); }
  bool empty() const { return elements.empty(); }
  friend bool operator==(const Sequence&, const Sequence&) = default;
};

inline int compare(const Sequence& a, const Sequence& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = compare(a.elements[i], b.elements[i]); c != 0) return c;
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

inline bool sequence_less(const Sequence& a, const Sequence& b) { return compare(a, b) < 0; }

inline bool is_valid_sequence(const AlphabetSchema& schema, const Sequence& s) {
  if (s.empty()) return false;
  for (const Element& e : s.elements)
    if (is_bottom(schema, e)) return false;
  return true;
}

inline void validate_sequence(const AlphabetSchema& schema, const Sequence& s) {
  for (const Element& e : s.elements) validate_element(schema, e);
  if (!is_valid_sequence(schema, s))
    throw InputError("sequence is not valid (empty or contains the all-general element)");
}

/// Subsequence with gaps: an increasing index map j with t_i ⊑ s_{j_i}.
/// Greedy earliest-match is exact for this relation. Utility only — the
/// mining order is the contiguous one below.
inline bool is_subsequence_general(const AlphabetSchema& schema, const Sequence& t,
                                   const Sequence& s) {
  if (t.size() > s.size()) return false;
  std::size_t j = 0;
  for (const Element& te : t.elements) {
    while (j < s.size() && !element_leq(schema, te, s.elements[j])) ++j;
    if (j == s.size()) return false;
    ++j;
  }
  return true;
}

/// Contiguous subsequence: one window offset k with t_i ⊑ s_{k+i} for all i.
inline bool is_subsequence_contiguous(const AlphabetSchema& schema, const Sequence& t,
                                      const Sequence& s) {
  if (t.size() > s.size()) return false;
  for (std::size_t k = 0; k + t.size() <= s.size(); ++k) {
    bool ok = true;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!element_leq(schema, t.elements[i], s.elements[k + i])) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

/// Splits at ⊥ elements into the maximal runs of non-⊥ elements.
inline std::vector<Sequence> split_at_bottom(const AlphabetSchema& schema,
                                             const std::vector<Element>& elements) {
  std::vector<Sequence> runs;
  Sequence cur;
  for (const Element& e : elements) {
    if (is_bottom(schema, e)) {
      if (!cur.empty()) runs.push_back(std::move(cur));
      cur = Sequence{};
    } else {
      cur.elements.push_back(e);
    }
  }
  if (!cur.empty()) runs.push_back(std::move(cur));
  return runs;
}

/// All common contiguous subsequences of s and t that arise from some
/// alignment: for every offset, meet the overlapping elements and split the
/// result at ⊥. The union over offsets is returned unreduced (it is generally
/// not an antichain). Runtime O(|s|·|t|·γ) with γ the element-meet cost.
inline std::vector<Sequence> sequence_meet(const AlphabetSchema& schema, const Sequence& s,
                                           const Sequence& t) {
  std::vector<Sequence> out;
  if (s.empty() || t.empty()) return out;
  const std::ptrdiff_t ns = static_cast<std::ptrdiff_t>(s.size());
  const std::ptrdiff_t nt = static_cast<std::ptrdiff_t>(t.size());
  for (std::ptrdiff_t k = -(ns - 1); k <= nt - 1; ++k) {
    // s_i aligned with t_{i+k}; collect runs directly, splitting at ⊥.
    Sequence cur;
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -k);
    const std::ptrdiff_t hi = std::min(ns, nt - k);
    for (std::ptrdiff_t i = lo; i < hi; ++i) {
      Element m = element_meet(schema, s.elements[static_cast<std::size_t>(i)],
                               t.elements[static_cast<std::size_t>(i + k)]);
      if (is_bottom(schema, m)) {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur = Sequence{};
      } else {
        cur.elements.push_back(std::move(m));
      }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
  }
  return out;
}

/// A canonical antichain of maximal valid sequences: the description type of
/// the sequential pattern structure. The empty antichain is the unique most
/// general description.
class Pattern {
public:
  Pattern() = default;

  const std::vector<Sequence>& sequences() const { return seqs_; }
  bool empty() const { return seqs_.empty(); }
  std::size_t size() const { return seqs_.size(); }
  friend bool operator==(const Pattern&, const Pattern&) = default;

  /// Wraps already-sorted, already-maximal members without re-checking.
  static Pattern from_antichain_unchecked(std::vector<Sequence> seqs) {
    Pattern p;
    p.seqs_ = std::move(seqs);
    return p;
  }

private:
  std::vector<Sequence> seqs_;
};

/// Keeps only the maximal sequences (no member a contiguous subsequence of
/// another) and stores them in canonical order.
inline Pattern maximal_antichain(const AlphabetSchema& schema, std::vector<Sequence> seqs) {
  std::erase_if(seqs, [](const Sequence& s) { return s.empty(); });
  std::sort(seqs.begin(), seqs.end(), sequence_less);
  seqs.erase(std::unique(seqs.begin(), seqs.end()), seqs.end());
  std::vector<Sequence> keep;
  keep.reserve(seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < seqs.size() && !dominated; ++j) {
      if (i == j || seqs[j].size() < seqs[i].size()) continue;
      dominated = is_subsequence_contiguous(schema, seqs[i], seqs[j]);
    }
    if (!dominated) keep.push_back(seqs[i]);
  }
  return Pattern::from_antichain_unchecked(std::move(keep));
}

/// Similarity of two patterns: the maximal sequences among all common
/// contiguous subsequences over every pair of members. Commutative,
/// associative, idempotent.
inline Pattern pattern_meet(const AlphabetSchema& schema, const Pattern& x, const Pattern& y) {
  const std::size_t pairs = x.size() * y.size();
  if (pairs == 0) return Pattern{};
  std::vector<std::vector<Sequence>> per_pair(pairs);
  runtime::parallel_for(pairs, [&](std::size_t idx) {
    const Sequence& sx = x.sequences()[idx / y.size()];
    const Sequence& sy = y.sequences()[idx % y.size()];
    per_pair[idx] = sequence_meet(schema, sx, sy);
  });
  std::vector<Sequence> all;
  for (auto& chunk : per_pair)
    for (auto& s : chunk) all.push_back(std::move(s));
  return maximal_antichain(schema, std::move(all));
}

/// x ⊑ y iff every member of x embeds contiguously in some member of y;
/// equivalently pattern_meet(x, y) == x. The empty antichain is below all.
inline bool pattern_leq(const AlphabetSchema& schema, const Pattern& x, const Pattern& y) {
  for (const Sequence& sx : x.sequences()) {
    bool found = false;
    for (const Sequence& sy : y.sequences()) {
      if (is_subsequence_contiguous(schema, sx, sy)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Repetition encoding.

/// Collapses maximal runs of events that agree on every non-interval field
/// into one event carrying the run length [n,n]. Requires a schema with a
/// repetition field whose raw value is [1,1] on every element.
inline Sequence run_length_encode(const AlphabetSchema& schema, const Sequence& raw) {
  const auto rep = schema.repetition_field();
  if (!rep) throw ConfigError("run-length encoding needs exactly one interval field");
  auto same_run = [&](const Element& a, const Element& b) {
    for (std::size_t f = 0; f < schema.field_count(); ++f) {
      if (f == *rep) continue;
      if (compare(a.values[f], b.values[f]) != 0) return false;
    }
    return true;
  };
  Sequence out;
  for (const Element& e : raw.elements) {
    if (std::get<Interval>(e.values[*rep]) != Interval{1, 1})
      throw InputError("run-length encoding expects repetition [1,1] on raw events");
    if (!out.empty() && same_run(out.elements.back(), e)) {
      Interval& iv = std::get<Interval>(out.elements.back().values[*rep]);
      if (iv.hi >= schema.max_repetition())
        throw InputError("run length exceeds max_repetition " +
                         std::to_string(schema.max_repetition()));
      ++iv.lo;
      ++iv.hi;
    } else {
      out.elements.push_back(e);
    }
  }
  return out;
}

/// Unrolls [n,n] repetition intervals back to n raw events. Inverse of
/// run_length_encode on its outputs.
inline Sequence run_length_decode(const AlphabetSchema& schema, const Sequence& enc) {
  const auto rep = schema.repetition_field();
  if (!rep) throw ConfigError("run-length decoding needs exactly one interval field");
  Sequence out;
  for (const Element& e : enc.elements) {
    const Interval iv = std::get<Interval>(e.values[*rep]);
    if (iv.lo != iv.hi)
      throw InputError("cannot unroll repetition interval [" + std::to_string(iv.lo) + "," +
                       std::to_string(iv.hi) + "]");
    Element unit = e;
    unit.values[*rep] = Interval{1, 1};
    for (std::uint32_t i = 0; i < iv.lo; ++i) out.elements.push_back(unit);
  }
  return out;
}

}  // namespace seqlat
