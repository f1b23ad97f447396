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

// seqlat — pattern-concept lattices over multi-field event sequences.
//
//   seqlat mine      load -> project -> mine -> stability -> rank -> write
//   seqlat meet      similarity of two sequences under a projection
//   seqlat fca-check mine a binary context and cross-check by brute force
//   seqlat gen       seeded synthetic trajectory dataset
//
// Exit codes: 0 success, 1 input/config error, 2 resource-limit abort.

#include <CLI11.hpp>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "seqlat/seqlat.hpp"

namespace {

using namespace seqlat;
using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

struct MineOverrides {
  std::optional<std::size_t> min_len;
  std::optional<std::string> select;
  std::optional<std::string> require;
  std::optional<std::string> projection;
  std::optional<std::string> theta;
  std::optional<std::string> rank_by;
  std::optional<std::size_t> max_concepts;
  std::optional<std::size_t> max_objects;
  std::optional<std::string> output;
  std::optional<std::string> dump_lattice;
  bool rle = false;
  bool no_rle = false;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

void apply_overrides(RunConfig& cfg, const MineOverrides& ov) {
  if (ov.projection) cfg.projection = expand_projection_name(cfg.schema, *ov.projection);
  if (ov.select) cfg.projection.selected_fields = split_list(*ov.select);
  if (ov.require) cfg.projection.required_fields = split_list(*ov.require);
  if (ov.min_len) cfg.projection.min_length = *ov.min_len;
  if (ov.rle) cfg.projection.use_repetition = true;
  if (ov.no_rle) cfg.projection.use_repetition = false;
  if (ov.theta) cfg.theta = parse_decimal(*ov.theta);
  if (ov.rank_by) cfg.rank_by = parse_rank_key(*ov.rank_by);
  if (ov.max_concepts) cfg.limits.max_concepts = *ov.max_concepts;
  if (ov.max_objects) cfg.limits.max_objects = *ov.max_objects;
  if (ov.output) cfg.output = *ov.output;
  if (ov.dump_lattice) cfg.dump_lattice_path = *ov.dump_lattice;
}

int run_mine(const std::string& config_path, const MineOverrides& ov, bool validate,
             bool pretty) {
  RunConfig cfg = load_run_config(config_path);
  apply_overrides(cfg, ov);

  ojson phases;
  auto t0 = Clock::now();
  const auto raw = load_dataset(cfg.dataset, cfg.schema, cfg.limits.max_objects);
  const PatternStructure ps = PatternStructure::build(cfg.schema, cfg.projection, raw);
  phases["load"] = ms_since(t0);

  t0 = Clock::now();
  BuildLimits limits;
  limits.max_concepts = cfg.limits.max_concepts;
  PatternLattice lat;
  try {
    lat = build_lattice(ps, limits);
  } catch (const LimitError& e) {
    ojson summary;
    summary["command"] = "mine";
    summary["status"] = "limit";
    summary["error"] = e.what();
    summary["objects"] = ps.object_count();
    summary["phase_ms"] = phases;
    std::cout << summary.dump() << "\n";
    return 2;
  }
  phases["mine"] = ms_since(t0);

  if (validate) {
    const auto violations = validate_lattice(ps, lat);
    if (!violations.empty()) {
      for (const auto& v : violations) std::cerr << "seqlat: validation: " << v.message << "\n";
      return 1;
    }
  }

  t0 = Clock::now();
  const StabilityReport report = stability_exact(lat);
  phases["stability"] = ms_since(t0);

  t0 = Clock::now();
  ConceptWriteOptions wopt;
  wopt.rank_by = cfg.rank_by;
  wopt.theta = cfg.theta;
  const std::size_t written = write_concepts_file(cfg.output, lat, report, ps, wopt);
  if (cfg.dump_lattice_path) dump_lattice_file(*cfg.dump_lattice_path, lat, ps);
  phases["write"] = ms_since(t0);

  std::size_t max_intent = 0, max_seq_len = 0;
  for (const auto& c : lat.concepts) {
    if (c.intent.top) continue;
    max_intent = std::max(max_intent, c.intent.pattern.size());
    for (const Sequence& s : c.intent.pattern.sequences())
      max_seq_len = std::max(max_seq_len, s.size());
  }

  ojson summary;
  summary["command"] = "mine";
  summary["status"] = "ok";
  summary["objects"] = ps.object_count();
  summary["concepts"] = lat.size();
  summary["written"] = written;
  summary["output"] = cfg.output.string();
  summary["phase_ms"] = phases;
  summary["max_intent_sequences"] = max_intent;
  summary["max_sequence_length"] = max_seq_len;
  summary["threads"] = runtime::max_threads();
  if (pretty) {
    std::cout << "objects:   " << ps.object_count() << "\n"
              << "concepts:  " << lat.size() << "\n"
              << "written:   " << written << " -> " << cfg.output.string() << "\n"
              << "phase ms:  load=" << phases["load"] << " mine=" << phases["mine"]
              << " stability=" << phases["stability"] << " write=" << phases["write"] << "\n";
  } else {
    std::cout << summary.dump() << "\n";
  }
  return 0;
}

int run_meet(const std::string& config_path, const std::string& a_text,
             const std::string& b_text, const MineOverrides& ov) {
  RunConfig cfg = load_run_config(config_path);
  apply_overrides(cfg, ov);
  const CompiledProjection psi = compile_projection(cfg.schema, cfg.projection);

  auto resolve = [&](const std::string& text) -> Sequence {
    if (!text.empty() && text.front() == '<') return parse_sequence_text(cfg.schema, text);
    const auto raw = load_dataset(cfg.dataset, cfg.schema, cfg.limits.max_objects);
    for (const auto& [id, seq] : raw)
      if (id == text) return seq;
    throw InputError("no object '" + text + "' in " + cfg.dataset.string());
  };
  auto describe = [&](Sequence seq) {
    if (psi.use_repetition) seq = run_length_encode(cfg.schema, seq);
    return apply_projection(cfg.schema, psi,
                            maximal_antichain(cfg.schema, split_at_bottom(cfg.schema, seq.elements)));
  };

  const Pattern meet =
      projected_meet(cfg.schema, psi, describe(resolve(a_text)), describe(resolve(b_text)));
  for (const Sequence& s : meet.sequences()) std::cout << to_text(cfg.schema, s) << "\n";
  ojson summary;
  summary["command"] = "meet";
  summary["status"] = "ok";
  summary["sequences"] = meet.size();
  std::cout << summary.dump() << "\n";
  return 0;
}

// Mask-based brute force, independent of the lattice engine.
struct MaskConcepts {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> concepts;  // (extent, intent)
};

MaskConcepts brute_force_concepts(const FormalContext& ctx) {
  const std::size_t n = ctx.objects.size();
  const std::size_t m = ctx.attributes.size();
  std::vector<std::uint64_t> row(n, 0);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t a = ctx.rows[g].find_first(); a != AttrSet::npos;
         a = ctx.rows[g].find_next(a))
      row[g] |= 1ull << a;
  const std::uint64_t full_attrs = m == 64 ? ~0ull : (1ull << m) - 1;
  auto derive_up = [&](std::uint64_t objs) {
    std::uint64_t attrs = full_attrs;
    for (std::size_t g = 0; g < n; ++g)
      if (objs & (1ull << g)) attrs &= row[g];
    return attrs;
  };
  auto derive_down = [&](std::uint64_t attrs) {
    std::uint64_t objs = 0;
    for (std::size_t g = 0; g < n; ++g)
      if ((row[g] & attrs) == attrs) objs |= 1ull << g;
    return objs;
  };
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
  for (std::uint64_t a = 0; a < (1ull << n); ++a) {
    const std::uint64_t intent = derive_up(a);
    const std::uint64_t extent = derive_down(intent);
    if (extent == a) seen.emplace(extent, intent);
  }
  return {std::vector<std::pair<std::uint64_t, std::uint64_t>>(seen.begin(), seen.end())};
}

int run_fca_check(const std::string& context_path, bool pretty) {
  const FormalContext ctx = load_context(context_path);
  if (ctx.objects.size() > 20)
    throw InputError("fca-check brute force is guarded at 20 objects (got " +
                     std::to_string(ctx.objects.size()) + ")");
  if (ctx.attributes.size() > 64)
    throw InputError("fca-check brute force is guarded at 64 attributes");

  const ContextLattice lat = build_lattice(ctx);
  const MaskConcepts oracle = brute_force_concepts(ctx);

  auto mask_of = [](const boost::dynamic_bitset<>& bits) {
    std::uint64_t m = 0;
    for (std::size_t i = bits.find_first(); i != boost::dynamic_bitset<>::npos;
         i = bits.find_next(i))
      m |= 1ull << i;
    return m;
  };
  std::set<std::pair<std::uint64_t, std::uint64_t>> mined;
  for (const auto& c : lat.concepts) mined.emplace(mask_of(c.extent), mask_of(c.intent));
  std::set<std::pair<std::uint64_t, std::uint64_t>> expected(oracle.concepts.begin(),
                                                             oracle.concepts.end());
  if (mined != expected) {
    for (const auto& c : expected)
      if (!mined.count(c))
        std::cerr << "seqlat: missing concept extent=" << c.first << " intent=" << c.second
                  << "\n";
    for (const auto& c : mined)
      if (!expected.count(c))
        std::cerr << "seqlat: extra concept extent=" << c.first << " intent=" << c.second << "\n";
    return 1;
  }

  const StabilityReport report = stability_exact(lat);
  const bool sum_ok = report.total_subsets == pow2(ctx.objects.size());

  if (pretty) {
    std::cout << "id  support  stability  bound     md  intent\n";
    for (const auto& c : lat.concepts) {
      const auto& e = report.per_concept[static_cast<std::size_t>(c.id)];
      std::cout << c.id << "   " << c.support() << "        " << e.stability().to_decimal()
                << "   " << e.bound.to_decimal() << "  "
                << (e.md ? std::to_string(*e.md) : std::string("-")) << "   "
                << intent_to_json(ctx, c.intent).dump() << "\n";
    }
  } else {
    for (const auto& c : lat.concepts) {
      const auto& e = report.per_concept[static_cast<std::size_t>(c.id)];
      ojson record;
      record["id"] = c.id;
      record["support"] = c.support();
      ojson extent = ojson::array();
      for (std::size_t g = c.extent.find_first(); g != ObjectSet::npos;
           g = c.extent.find_next(g))
        extent.push_back(ctx.objects[g]);
      record["extent"] = std::move(extent);
      record["intent"] = intent_to_json(ctx, c.intent);
      record["stability"] = e.stability().to_decimal();
      record["bound"] = e.bound.to_decimal();
      record["md"] = e.md ? ojson(*e.md) : ojson(nullptr);
      std::cout << record.dump() << "\n";
    }
  }

  ojson summary;
  summary["command"] = "fca-check";
  summary["status"] = sum_ok ? "ok" : "error";
  summary["agree"] = true;
  summary["objects"] = ctx.objects.size();
  summary["attributes"] = ctx.attributes.size();
  summary["concepts"] = lat.size();
  summary["sum_subsets_ok"] = sum_ok;
  std::cout << summary.dump() << "\n";
  return sum_ok ? 0 : 1;
}

int run_gen(const std::string& spec_path, std::optional<std::uint64_t> seed_override) {
  SyntheticSpec spec = load_synthetic_spec(spec_path);
  if (seed_override) {
    spec.seed = *seed_override;
    spec.seed_set = true;
  }
  const GenResult result = gen_synthetic(spec);
  ojson summary;
  summary["command"] = "gen";
  summary["status"] = "ok";
  summary["seed"] = spec.seed;
  summary["patients"] = result.patients;
  summary["out_dir"] = spec.out_dir.string();
  ojson files;
  for (const auto& [name, checksum] : result.checksums) files[name] = checksum;
  summary["files"] = files;
  std::cout << summary.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pattern-concept lattices over multi-field event sequences"};
  app.require_subcommand(1);

  std::string config_path, context_path, spec_path, seq_a, seq_b;
  MineOverrides ov;
  bool validate = false, pretty = false;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed_override;

  auto add_projection_flags = [&](CLI::App* cmd) {
    cmd->add_option("--projection", ov.projection, "projection shorthand, e.g. GR2 or RPI3");
    cmd->add_option("--min-len", ov.min_len, "minimal sequence length kept");
    cmd->add_option("--select", ov.select, "comma-separated selected fields");
    cmd->add_option("--require", ov.require, "comma-separated required fields");
    cmd->add_flag("--rle", ov.rle, "run-length encode repeated events at load");
    cmd->add_flag("--no-rle", ov.no_rle, "keep repeated events unencoded");
  };

  CLI::App* mine = app.add_subcommand("mine", "mine a trajectory dataset");
  mine->add_option("--config", config_path, "run config (JSON)")->required();
  add_projection_flags(mine);
  mine->add_option("--theta", ov.theta, "stability-bound filter threshold in [0,1)");
  mine->add_option("--rank-by", ov.rank_by, "stability|bound|support");
  mine->add_option("--max-concepts", ov.max_concepts, "concept limit (abort with exit 2)");
  mine->add_option("--max-objects", ov.max_objects, "load only the first N objects");
  mine->add_option("--output", ov.output, "concepts output path");
  mine->add_option("--dump-lattice", ov.dump_lattice, "also dump the lattice structure");
  mine->add_flag("--validate", validate, "re-derive closures and covers before writing");

  CLI::App* meet = app.add_subcommand("meet", "meet of two sequences");
  meet->add_option("--config", config_path, "run config (JSON)")->required();
  meet->add_option("--a", seq_a, "sequence text '<...>' or object id")->required();
  meet->add_option("--b", seq_b, "sequence text '<...>' or object id")->required();
  add_projection_flags(meet);

  CLI::App* fca = app.add_subcommand("fca-check", "self-test on a binary context");
  fca->add_option("--context", context_path, "cross table or Burmeister file")->required();

  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  gen->add_option("--spec", spec_path, "generator spec (JSON)")->required();
  gen->add_option("--seed", seed_override, "override the spec seed");

  for (CLI::App* cmd : {mine, meet, fca, gen}) {
    cmd->add_flag("--pretty", pretty, "human-readable output");
    cmd->add_option("--threads", threads, "worker thread cap (0 = machine parallelism)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  runtime::set_max_threads(threads);
  try {
    if (mine->parsed()) return run_mine(config_path, ov, validate, pretty);
    if (meet->parsed()) return run_meet(config_path, seq_a, seq_b, ov);
    if (fca->parsed()) return run_fca_check(context_path, pretty);
    if (gen->parsed()) return run_gen(spec_path, seed_override);
  } catch (const LimitError& e) {
    std::cerr << "seqlat: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "seqlat: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "seqlat: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
