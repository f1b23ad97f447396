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
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seqlat/errors.hpp"

namespace seqlat {

/// A rooted tree of node ids ordered by generality: the root is the most
/// general node, children refine their parent. Immutable after build().
///
/// meet(a, b) is the deepest common ancestor; leq(a, b) holds iff a is an
/// ancestor of b or equal to it (a is the more general node).
class Taxonomy {
public:
  Taxonomy() = default;

  /// Validates and builds from child->parent edges. The root must not appear
  /// as a child; every other node needs exactly one parent edge; parent names
  /// may be declared in any order but must themselves be reachable from the
  /// root (no cycles, no orphan components).
  static Taxonomy build(std::string name, const std::string& root,
                        const std::vector<std::pair<std::string, std::string>>& edges) {
    Taxonomy t;
    t.name_ = std::move(name);
    t.intern(root);
    for (const auto& [child, parent] : edges) {
      if (child == root)
        throw InputError("taxonomy '" + t.name_ + "': root '" + root +
                         "' redeclared with parent '" + parent + "'");
      const std::uint32_t c = t.intern(child);
      t.intern(parent);
      if (t.parent_[c] != kUnset)
        throw InputError("taxonomy '" + t.name_ + "': duplicate parent edge for node '" +
                         child + "'");
      t.parent_[c] = t.index_.at(parent);
    }
    t.parent_[0] = 0;  // root maps to itself
    for (std::uint32_t i = 1; i < t.parent_.size(); ++i) {
      if (t.parent_[i] == kUnset)
        throw InputError("taxonomy '" + t.name_ + "': node '" + t.nodes_[i] +
                         "' has no parent edge and is not the root");
    }
    t.compute_depths();
    return t;
  }

  const std::string& name() const { return name_; }
  const std::string& root() const { return nodes_.empty() ? name_ : nodes_[0]; }
  std::size_t size() const { return nodes_.size(); }

  bool contains(std::string_view node) const {
    return index_.find(std::string(node)) != index_.end();
  }

  std::uint32_t depth(const std::string& node) const { return depth_[check(node)]; }

  const std::string& parent(const std::string& node) const {
    return nodes_[parent_[check(node)]];
  }

  /// Deepest common ancestor. Commutative, idempotent; meet(root, x) = root.
  const std::string& meet(const std::string& a, const std::string& b) const {
    std::uint32_t x = check(a);
    std::uint32_t y = check(b);
    while (depth_[x] > depth_[y]) x = parent_[x];
    while (depth_[y] > depth_[x]) y = parent_[y];
    while (x != y) {
      x = parent_[x];
      y = parent_[y];
    }
    return nodes_[x];
  }

  /// True iff a is an ancestor-or-equal of b (a ⊓ b = a).
  bool leq(const std::string& a, const std::string& b) const {
    const std::uint32_t x = check(a);
    std::uint32_t y = check(b);
    while (depth_[y] > depth_[x]) y = parent_[y];
    return x == y;
  }

  /// Node names in deterministic (sorted) order.
  std::vector<std::string> nodes_sorted() const {
    std::vector<std::string> out = nodes_;
    std::sort(out.begin(), out.end());
    return out;
  }

private:
  static constexpr std::uint32_t kUnset = 0xffffffffu;

  std::uint32_t intern(const std::string& node) {
    auto [it, fresh] = index_.try_emplace(node, static_cast<std::uint32_t>(nodes_.size()));
    if (fresh) {
      nodes_.push_back(node);
      parent_.push_back(kUnset);
    }
    return it->second;
  }

  std::uint32_t check(const std::string& node) const {
    auto it = index_.find(node);
    if (it == index_.end())
      throw InputError("taxonomy '" + name_ + "': unknown node '" + node + "'");
    return it->second;
  }

  void compute_depths() {
    depth_.assign(nodes_.size(), kUnset);
    depth_[0] = 0;
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
      // Walk up until a known depth; bounded by node count, so a cycle or a
      // component detached from the root is detected instead of looping.
      std::vector<std::uint32_t> chain;
      std::uint32_t cur = i;
      while (depth_[cur] == kUnset) {
        chain.push_back(cur);
        cur = parent_[cur];
        if (chain.size() > nodes_.size())
          throw InputError("taxonomy '" + name_ + "': cycle through node '" + nodes_[i] + "'");
      }
      std::uint32_t d = depth_[cur];
      for (auto it = chain.rbegin(); it != chain.rend(); ++it) depth_[*it] = ++d;
    }
  }

  std::string name_;
  std::vector<std::string> nodes_;        // nodes_[0] is the root
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> depth_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

}  // namespace seqlat
