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
#include <vector>

#include "seqlat/alphabet.hpp"
#include "seqlat/projection.hpp"
#include "seqlat/textform.hpp"
#include "support/fixtures.hpp"

using namespace seqlat;

namespace {

Element el(const AlphabetSchema& schema, std::string_view text) {
  detail::TextCursor cur(text, "element");
  return detail::parse_element(cur, schema);
}

/// Every element over the hospital taxonomy and subsets of the given items.
std::vector<Element> enumerate_elements(const AlphabetSchema& schema,
                                        const std::vector<std::string>& items) {
  std::vector<Element> out;
  const Taxonomy& tax = schema.field(0).taxonomy;
  for (const auto& node : tax.nodes_sorted()) {
    for (std::uint64_t mask = 0; mask < (1ull << items.size()); ++mask) {
      ItemSet set;
      for (std::size_t i = 0; i < items.size(); ++i)
        if (mask & (1ull << i)) set.push_back(items[i]);
      Element e;
      e.values.emplace_back(node);
      e.values.emplace_back(set);
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("element meet is componentwise") {
  const AlphabetSchema schema = fixtures::hospital_schema();
  CHECK(element_meet(schema, el(schema, "[H2,{c,d}]"), el(schema, "[H4,{c,d}]")) ==
        el(schema, "[*,{c,d}]"));
  const Element e = el(schema, "[H3,{a,b}]");
  CHECK(element_meet(schema, e, e) == e);
  CHECK(element_meet(schema, el(schema, "[H2,{c,d}]"), el(schema, "[H3,{b,d}]")) ==
        el(schema, "[*,{d}]"));
  CHECK(element_meet(schema, el(schema, "[H3,{b,d}]"), el(schema, "[H4,{b}]")) ==
        el(schema, "[CL,{b}]"));
}

TEST_CASE("interval fields meet by convex hull") {
  const AlphabetSchema schema({{"hosp", FieldKind::taxonomy, fixtures::hospital_taxonomy()},
                               {"procs", FieldKind::itemset, {}},
                               {"reps", FieldKind::interval, {}}},
                              16);
  const Element a = el(schema, "[H1,{},3..3]");
  const Element b = el(schema, "[H1,{},4..4]");
  const Element m = element_meet(schema, a, b);
  CHECK(std::get<Interval>(m.values[2]) == Interval{3, 4});
  CHECK(element_leq(schema, el(schema, "[H1,{},3..4]"), a));
  CHECK_FALSE(element_leq(schema, a, el(schema, "[H1,{},3..4]")));
  CHECK(is_bottom(schema, el(schema, "[*,{},1..16]")));
  CHECK_FALSE(is_bottom(schema, el(schema, "[*,{},1..4]")));
}

TEST_CASE("element leq matches the meet characterisation exhaustively") {
  const AlphabetSchema schema = fixtures::hospital_schema();
  const auto all = enumerate_elements(schema, {"a", "b", "c"});
  for (const Element& a : all)
    for (const Element& b : all)
      CHECK(element_leq(schema, a, b) == (element_meet(schema, a, b) == a));
}

TEST_CASE("element leq examples") {
  const AlphabetSchema schema = fixtures::hospital_schema();
  CHECK(element_leq(schema, el(schema, "[CH,{c,d}]"), el(schema, "[H1,{c,d}]")));
  CHECK(element_leq(schema, el(schema, "[*,{}]"), el(schema, "[H3,{a}]")));
  CHECK_FALSE(element_leq(schema, el(schema, "[CL,{b}]"), el(schema, "[H2,{b,d}]")));
}

TEST_CASE("meet laws hold exhaustively on a small alphabet") {
  const AlphabetSchema schema = fixtures::hospital_schema();
  const auto all = enumerate_elements(schema, {"a", "b"});
  for (const Element& a : all) {
    CHECK(element_meet(schema, a, a) == a);
    for (const Element& b : all)
      CHECK(element_meet(schema, a, b) == element_meet(schema, b, a));
  }
  for (const Element& a : all)
    for (const Element& b : all)
      for (const Element& c : all)
        CHECK(element_meet(schema, element_meet(schema, a, b), c) ==
              element_meet(schema, a, element_meet(schema, b, c)));
}

TEST_CASE("the all-general element absorbs under meet") {
  const AlphabetSchema schema = fixtures::hospital_schema();
  const Element bot = bottom_element(schema);
  CHECK(is_bottom(schema, bot));
  CHECK_FALSE(is_bottom(schema, el(schema, "[CL,{}]")));
  CHECK_FALSE(is_bottom(schema, el(schema, "[*,{d}]")));
  for (const Element& x : enumerate_elements(schema, {"a", "b", "c"}))
    CHECK(element_meet(schema, bot, x) == bot);
}

TEST_CASE("element projection blanks unselected fields") {
  const AlphabetSchema schema = fixtures::hospital_schema();
  ProjectionSpec spec;
  spec.selected_fields = {"hosp"};
  const ElementProjection proj = compile_projection(schema, spec).element;
  CHECK(project_element(schema, proj, el(schema, "[H1,{a,b}]")) == el(schema, "[H1,{}]"));
}

TEST_CASE("required fields collapse general elements to bottom") {
  const AlphabetSchema schema = fixtures::hospital_schema();
  ProjectionSpec spec;
  spec.selected_fields = {"hosp", "procs"};
  spec.required_fields = {"hosp"};
  const ElementProjection proj = compile_projection(schema, spec).element;
  CHECK(project_element(schema, proj, el(schema, "[*,{c,d}]")) == bottom_element(schema));
  CHECK(project_element(schema, proj, el(schema, "[CL,{c,d}]")) == el(schema, "[CL,{c,d}]"));
}

TEST_CASE("identity projection is the identity") {
  const AlphabetSchema schema = fixtures::hospital_schema();
  const ElementProjection proj =
      compile_projection(schema, ProjectionSpec::identity(schema)).element;
  CHECK(proj.is_identity());
  for (const Element& e : enumerate_elements(schema, {"a", "b"}))
    CHECK(project_element(schema, proj, e) == e);
}

TEST_CASE("element projection axioms hold exhaustively") {
  const AlphabetSchema schema = fixtures::hospital_schema();
  const auto all = enumerate_elements(schema, {"a", "b", "c", "d"});
  std::vector<ElementProjection> projections;
  for (const char* sel : {"hosp", "procs"}) {
    ProjectionSpec spec;
    spec.selected_fields = {sel};
    projections.push_back(compile_projection(schema, spec).element);
  }
  {
    ProjectionSpec spec;
    spec.selected_fields = {"hosp", "procs"};
    spec.required_fields = {"hosp"};
    projections.push_back(compile_projection(schema, spec).element);
    spec.required_fields = {"hosp", "procs"};
    projections.push_back(compile_projection(schema, spec).element);
  }
  for (const auto& proj : projections) {
    for (const Element& e : all) {
      const Element once = project_element(schema, proj, e);
      CHECK(project_element(schema, proj, once) == once);   // idempotent
      CHECK(element_leq(schema, once, e));                  // contractive
    }
    for (const Element& a : all)
      for (const Element& b : all)
        if (element_leq(schema, a, b))
          CHECK(element_leq(schema, project_element(schema, proj, a),
                            project_element(schema, proj, b)));  // monotone
  }
}

TEST_CASE("schema mismatches are input errors") {
  const AlphabetSchema schema = fixtures::hospital_schema();
  Element short_el;
  short_el.values.emplace_back(std::string("H1"));
  CHECK_THROWS_AS(element_meet(schema, short_el, short_el), InputError);
  CHECK_THROWS_AS(validate_element(schema, short_el), InputError);
  Element bad_node = el(schema, "[H1,{a}]");
  bad_node.values[0] = std::string("H9");
  CHECK_THROWS_WITH(validate_element(schema, bad_node),
                    Catch::Matchers::ContainsSubstring("H9"));
  ProjectionSpec bad_spec;
  bad_spec.selected_fields = {"nope"};
  CHECK_THROWS_AS(compile_projection(schema, bad_spec), ConfigError);
  ProjectionSpec unselected_required;
  unselected_required.selected_fields = {"hosp"};
  unselected_required.required_fields = {"procs"};
  CHECK_THROWS_AS(compile_projection(schema, unselected_required), ConfigError);
}
