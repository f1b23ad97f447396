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

#include <catch2/catch_amalgamated.hpp>

#include "seqlat/taxonomy.hpp"
#include "support/fixtures.hpp"

using seqlat::InputError;
using seqlat::Taxonomy;

TEST_CASE("meet is the deepest common ancestor") {
  const Taxonomy t = fixtures::hospital_taxonomy();
  CHECK(t.meet("H1", "H2") == "CH");
  CHECK(t.meet("H3", "H3") == "H3");
  CHECK(t.meet("H1", "H3") == "*");
  CHECK(t.meet("*", "H4") == "*");
  CHECK(t.meet("CH", "H1") == "CH");
}

TEST_CASE("meet agrees with exhaustive ancestor enumeration") {
  const Taxonomy t = fixtures::hospital_taxonomy();
  auto ancestors = [&](std::string n) {
    std::vector<std::string> out{n};
    while (n != t.root()) {
      n = t.parent(n);
      out.push_back(n);
    }
    return out;
  };
  for (const auto& a : t.nodes_sorted()) {
    for (const auto& b : t.nodes_sorted()) {
      const auto ca = ancestors(a);
      const auto cb = ancestors(b);
      std::string deepest;
      std::uint32_t best = 0;
      bool found = false;
      for (const auto& x : ca)
        for (const auto& y : cb)
          if (x == y && (!found || t.depth(x) > best)) {
            deepest = x;
            best = t.depth(x);
            found = true;
          }
      CHECK(t.meet(a, b) == deepest);
      CHECK(t.meet(a, b) == t.meet(b, a));
    }
  }
}

TEST_CASE("leq means ancestor-or-equal") {
  const Taxonomy t = fixtures::hospital_taxonomy();
  CHECK(t.leq("CH", "H1"));
  CHECK(t.leq("H1", "H1"));
  CHECK_FALSE(t.leq("CL", "H2"));
  CHECK(t.leq("*", "H3"));
  CHECK_FALSE(t.leq("H1", "CH"));
  // leq(a,b) <=> meet(a,b) == a, over all pairs.
  for (const auto& a : t.nodes_sorted())
    for (const auto& b : t.nodes_sorted())
      CHECK(t.leq(a, b) == (t.meet(a, b) == a));
}

TEST_CASE("depths follow parent links") {
  const Taxonomy t = fixtures::hospital_taxonomy();
  CHECK(t.depth("*") == 0);
  CHECK(t.depth("CH") == 1);
  CHECK(t.depth("H1") == 2);
  CHECK(t.parent("H4") == "CL");
  CHECK(t.parent("*") == "*");
  CHECK(t.size() == 7);
}

TEST_CASE("unknown nodes are rejected by name") {
  const Taxonomy t = fixtures::hospital_taxonomy();
  CHECK_THROWS_WITH(t.meet("H1", "H9"), Catch::Matchers::ContainsSubstring("H9"));
  CHECK_THROWS_AS(t.leq("nope", "H1"), InputError);
  CHECK_THROWS_AS(t.depth("zz"), InputError);
}

TEST_CASE("malformed taxonomies are rejected") {
  CHECK_THROWS_AS(Taxonomy::build("t", "r", {{"a", "r"}, {"a", "r"}}), InputError);  // duplicate
  CHECK_THROWS_AS(Taxonomy::build("t", "r", {{"a", "b"}, {"b", "a"}}), InputError);  // cycle
  CHECK_THROWS_AS(Taxonomy::build("t", "r", {{"a", "ghost"}}), InputError);  // orphan parent
  CHECK_THROWS_AS(Taxonomy::build("t", "r", {{"r", "a"}}), InputError);      // root as child
  // Forward references are fine: child declared before its parent's edge.
  const Taxonomy ok = Taxonomy::build("t", "r", {{"b", "a"}, {"a", "r"}});
  CHECK(ok.depth("b") == 2);
}
