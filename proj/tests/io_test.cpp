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
#include <sstream>

#include "seqlat/io.hpp"
#include "support/fixtures.hpp"

using namespace seqlat;
using fixtures::data_dir;
using fixtures::TempDir;

TEST_CASE("taxonomy file loads with validation") {
  const Taxonomy t = load_taxonomy(data_dir() / "hospitals.tax");
  CHECK(t.size() == 7);
  CHECK(t.root() == "*");
  CHECK(t.depth("H1") == 2);
  CHECK(t.meet("H1", "H2") == "CH");
}

TEST_CASE("taxonomy parse errors carry line numbers") {
  TempDir tmp;
  const auto two_roots = tmp.write("two_roots.tax", "r\t-\nq\t-\na\tr\n");
  CHECK_THROWS_MATCHES(load_taxonomy(two_roots), ParseError,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("two_roots.tax:2")));
  const auto dup = tmp.write("dup.tax", "r\t-\na\tr\na\tr\n");
  CHECK_THROWS_AS(load_taxonomy(dup), ParseError);
  const auto cycle = tmp.write("cycle.tax", "r\t-\na\tb\nb\ta\n");
  CHECK_THROWS_AS(load_taxonomy(cycle), ParseError);
  const auto orphan = tmp.write("orphan.tax", "r\t-\na\tghost\n");
  CHECK_THROWS_AS(load_taxonomy(orphan), ParseError);
  const auto no_root = tmp.write("no_root.tax", "a\tb\n");
  CHECK_THROWS_AS(load_taxonomy(no_root), ParseError);
  // Forward reference to a parent declared later is fine.
  const auto fwd = tmp.write("fwd.tax", "r\t-\nb\ta\na\tr\n");
  CHECK(load_taxonomy(fwd).depth("b") == 2);
}

TEST_CASE("dataset loads the toy trajectories") {
  const AlphabetSchema schema = fixtures::hospital_schema();
  const auto data = load_dataset(data_dir() / "trajectories_toy.jsonl", schema);
  REQUIRE(data.size() == 3);
  CHECK(data[0].first == "p1");
  CHECK(data[0].second.size() == 4);
  CHECK(data[1].second.size() == 3);
  CHECK(data[2].second.size() == 4);
  CHECK(data[1].second == fixtures::seq(schema, "<[H2,{c,d}];[H3,{b,d}];[H3,{a,d}]>"));
}

TEST_CASE("dataset loader errors are located") {
  const AlphabetSchema schema = fixtures::hospital_schema();
  TempDir tmp;
  const auto bad_node =
      tmp.write("bad.jsonl", R"({"id":"p1","events":[{"hosp":"H9","procs":[]}]})" "\n");
  CHECK_THROWS_MATCHES(load_dataset(bad_node, schema), ParseError,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("H9")));
  const auto missing =
      tmp.write("missing.jsonl", R"({"id":"p1","events":[{"hosp":"H1"}]})" "\n");
  CHECK_THROWS_MATCHES(load_dataset(missing, schema), ParseError,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("procs")));
  const auto unknown_field =
      tmp.write("unk.jsonl", R"({"id":"p1","events":[{"hosp":"H1","procs":[],"x":1}]})" "\n");
  CHECK_THROWS_AS(load_dataset(unknown_field, schema), ParseError);
  const auto garbage = tmp.write("garbage.jsonl", "not json\n");
  CHECK_THROWS_MATCHES(load_dataset(garbage, schema), ParseError,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("garbage.jsonl:1")));
  // Empty events are accepted.
  const auto empty = tmp.write("empty.jsonl", R"({"id":"p1","events":[]})" "\n");
  const auto loaded = load_dataset(empty, schema);
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].second.empty());
}

TEST_CASE("max_objects truncates the load") {
  const AlphabetSchema schema = fixtures::hospital_schema();
  const auto data = load_dataset(data_dir() / "trajectories_toy.jsonl", schema, 2);
  CHECK(data.size() == 2);
}

TEST_CASE("interval fields default to [1,1] and accept n or [lo,hi]") {
  const AlphabetSchema schema({{"hosp", FieldKind::taxonomy, fixtures::hospital_taxonomy()},
                               {"procs", FieldKind::itemset, {}},
                               {"reps", FieldKind::interval, {}}},
                              64);
  TempDir tmp;
  const auto file = tmp.write(
      "d.jsonl",
      R"({"id":"p1","events":[{"hosp":"H1","procs":[]},{"hosp":"H1","procs":[],"reps":3},{"hosp":"H1","procs":[],"reps":[2,5]}]})"
      "\n");
  const auto data = load_dataset(file, schema);
  REQUIRE(data.size() == 1);
  const auto& seq = data[0].second;
  CHECK(std::get<Interval>(seq.elements[0].values[2]) == Interval{1, 1});
  CHECK(std::get<Interval>(seq.elements[1].values[2]) == Interval{3, 3});
  CHECK(std::get<Interval>(seq.elements[2].values[2]) == Interval{2, 5});
  const auto out_of_range =
      tmp.write("oor.jsonl", R"({"id":"p1","events":[{"hosp":"H1","procs":[],"reps":99}]})" "\n");
  CHECK_THROWS_AS(load_dataset(out_of_range, schema), ParseError);
}

TEST_CASE("cross-table context loads") {
  const FormalContext small = load_context(data_dir() / "fca_toy.ctx");
  CHECK(small.objects.size() == 4);
  CHECK(small.attributes.size() == 4);
  std::size_t incidences = 0;
  for (const auto& row : small.rows) incidences += row.count();
  CHECK(incidences == 7);

  const FormalContext shared = load_context(data_dir() / "fca_shared.ctx");
  CHECK(shared.objects.size() == 5);
  CHECK(shared.attributes.size() == 6);
  incidences = 0;
  for (const auto& row : shared.rows) incidences += row.count();
  CHECK(incidences == 9);
}

TEST_CASE("burmeister context loads") {
  TempDir tmp;
  const auto file = tmp.write("b.cxt", "B\n\n2\n2\n\ng1\ng2\nm1\nm2\nX.\n.X\n");
  const FormalContext ctx = load_context(file);
  CHECK(ctx.objects == std::vector<std::string>{"g1", "g2"});
  CHECK(ctx.attributes == std::vector<std::string>{"m1", "m2"});
  CHECK(ctx.rows[0].test(0));
  CHECK_FALSE(ctx.rows[0].test(1));
}

TEST_CASE("context negative fixtures") {
  TempDir tmp;
  const auto ragged = tmp.write("ragged.ctx", ";m1;m2\ng1;x\n");
  CHECK_THROWS_MATCHES(load_context(ragged), ParseError,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("ragged")));
  const auto bad_cell = tmp.write("bad.ctx", ";m1\ng1;q\n");
  CHECK_THROWS_AS(load_context(bad_cell), ParseError);
  // Empty table: header only, no objects.
  const auto empty = tmp.write("empty.ctx", ";m1;m2\n");
  const FormalContext ctx = load_context(empty);
  CHECK(ctx.objects.empty());
  CHECK(ctx.attributes.size() == 2);
}

TEST_CASE("taxonomy and dataset round-trip through files") {
  TempDir tmp;
  const Taxonomy tax = fixtures::hospital_taxonomy();
  write_taxonomy(tmp.path() / "t.tax", tax);
  const Taxonomy back = load_taxonomy(tmp.path() / "t.tax");
  CHECK(back.size() == tax.size());
  for (const auto& n : tax.nodes_sorted()) {
    CHECK(back.depth(n) == tax.depth(n));
    CHECK(back.parent(n) == tax.parent(n));
  }

  const AlphabetSchema schema = fixtures::hospital_schema();
  const auto data = fixtures::toy_trajectories(schema);
  write_dataset(tmp.path() / "d.jsonl", schema, data);
  const auto back_data = load_dataset(tmp.path() / "d.jsonl", schema);
  CHECK(back_data == data);
}

TEST_CASE("run config resolves paths and projections") {
  const RunConfig cfg = load_run_config(data_dir() / "config_toy.json");
  CHECK(cfg.schema.field_count() == 2);
  CHECK(cfg.schema.field(0).name == "hosp");
  CHECK(cfg.schema.field(0).taxonomy.size() == 7);
  CHECK(cfg.dataset.filename() == "trajectories_toy.jsonl");
  CHECK(cfg.dataset.is_absolute() == (data_dir() / "x").is_absolute());
  CHECK(cfg.projection.selected_fields == std::vector<std::string>{"hosp", "procs"});
  CHECK(cfg.rank_by == RankKey::stability);
  CHECK(!cfg.theta.has_value());
  CHECK(cfg.limits.max_concepts == 1000000);
}

TEST_CASE("config errors are config errors") {
  TempDir tmp;
  const auto no_fields = tmp.write("c.json", R"({"schema":{}, "dataset":"d"})");
  CHECK_THROWS_AS(load_run_config(no_fields), ConfigError);
  const auto bad_kind = tmp.write(
      "k.json", R"({"schema":{"fields":[{"name":"a","kind":"nope"}]},"dataset":"d"})");
  CHECK_THROWS_AS(load_run_config(bad_kind), ConfigError);
  CHECK_THROWS_AS(load_run_config(tmp.path() / "missing.json"), InputError);
  const auto bad_json = tmp.write("b.json", "{");
  CHECK_THROWS_AS(load_run_config(bad_json), ParseError);
}

TEST_CASE("concept records are ranked and deterministic") {
  const FormalContext ctx = fixtures::shared_attribute_context();
  const ContextLattice lat = build_lattice(ctx);
  const StabilityReport report = stability_exact(lat);

  std::ostringstream first, second;
  write_concepts(first, lat, report, ctx);
  write_concepts(second, lat, report, ctx);
  CHECK(first.str() == second.str());

  std::istringstream in(first.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  const json header = json::parse(line);
  CHECK(header["format"] == "seqlat-concepts");
  CHECK(header["concepts"] == 8);
  CHECK(header["written"] == 7);  // empty-extent bottom excluded by default
  REQUIRE(std::getline(in, line));
  const json top_record = json::parse(line);
  CHECK(top_record["stability"] == "0.687500");
  CHECK(top_record["intent"] == json::array({"m6"}));
  CHECK(top_record["support"] == 4);
  CHECK(top_record["md"] == 3);
}

TEST_CASE("theta filter can empty the output but keeps the header") {
  const FormalContext ctx = fixtures::toy_context();
  const ContextLattice lat = build_lattice(ctx);
  const StabilityReport report = stability_exact(lat);
  ConceptWriteOptions opt;
  opt.theta = parse_decimal("0.999");
  std::ostringstream out;
  const std::size_t written = write_concepts(out, lat, report, ctx, opt);
  CHECK(written == 0);
  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(json::parse(line)["written"] == 0);
  CHECK_FALSE(std::getline(in, line));
}

TEST_CASE("trajectory concept records serialize intents as event arrays") {
  const AlphabetSchema schema = fixtures::hospital_schema();
  ProjectionSpec spec = ProjectionSpec::identity(schema);
  spec.min_length = 3;
  const PatternStructure ps =
      PatternStructure::build(schema, spec, fixtures::toy_trajectories(schema));
  const PatternLattice lat = build_lattice(ps);
  const StabilityReport report = stability_exact(lat);
  std::ostringstream out;
  write_concepts(out, lat, report, ps);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);  // header
  bool found = false;
  while (std::getline(in, line)) {
    const json record = json::parse(line);
    if (record["extent"] == json::array({"p2", "p3"})) {
      found = true;
      REQUIRE(record["intent"].size() == 1);
      CHECK(record["intent"][0] ==
            json::parse(
                R"([{"hosp":"*","procs":["c","d"]},{"hosp":"CL","procs":["b"]},{"hosp":"CL","procs":["a"]}])"));
    }
  }
  CHECK(found);
}

TEST_CASE("lattice dump is ordered by concept id") {
  const FormalContext ctx = fixtures::toy_context();
  const ContextLattice lat = build_lattice(ctx);
  std::ostringstream out;
  dump_lattice(out, lat, ctx);
  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(json::parse(line)["format"] == "seqlat-lattice");
  int expected = 0;
  while (std::getline(in, line)) {
    const json record = json::parse(line);
    CHECK(record["id"] == expected++);
    CHECK(record.contains("parents"));
  }
  CHECK(expected == 6);
}

TEST_CASE("projection json forms") {
  const AlphabetSchema schema = fixtures::hospital_schema();
  const ProjectionSpec a = projection_from_json(schema, json::parse(R"({"select":["hosp"]})"));
  CHECK(a.selected_fields == std::vector<std::string>{"hosp"});
  const ProjectionSpec b =
      projection_from_json(schema, json::parse(R"({"min_len":2,"rle":false})"));
  CHECK(b.selected_fields == std::vector<std::string>{"hosp", "procs"});
  CHECK(b.min_length == 2);
  CHECK_THROWS_AS(projection_from_json(schema, json::parse("42")), ConfigError);
}
