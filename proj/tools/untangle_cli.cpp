#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "untangle/errors.hpp"
#include "untangle/harness.hpp"
#include "untangle/oracle.hpp"
#include "untangle/strategies.hpp"
#include "untangle/trace_io.hpp"

namespace fs = std::filesystem;
using namespace untangle;

namespace {

constexpr int kOk = 0;
constexpr int kIo = 1;
constexpr int kInvalid = 2;
constexpr int kPrecondition = 3;

int exit_code(const UntangleError& e) {
  switch (e.kind()) {
    case ErrorKind::precondition:
      return kPrecondition;
    case ErrorKind::io:
      return kIo;
    default:
      return kInvalid;
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
  } else {
    write_file(path, text + "\n");
  }
}

Instance load_instance_file(const fs::path& path) {
  return load_instance_json(read_file(path));
}

struct GenArgs {
  std::string geometry_class = "convex";
  std::string property = "matching";
  std::string family = "random";
  int n = 8;
  int t = 0;
  std::uint64_t seed = 1;
  Coord radius = 1'000'000;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  harness::GeneratorSpec spec;
  spec.geometry_class = parse_geometry_class(a.geometry_class);
  spec.property = parse_property(a.property);
  spec.family = harness::parse_family(a.family);
  spec.n = a.n;
  spec.t = a.t;
  spec.seed = a.seed;
  spec.radius = a.radius;
  emit(a.out, instance_to_json(harness::generate(spec), 2));
  return kOk;
}

struct RunArgs {
  std::string strategy;
  std::string input;
  std::string trace;
  std::string snapshots = "off";
  int t_cap = 8;
  std::vector<int> target;
};

int cmd_run(const RunArgs& a) {
  const StrategyId id = parse_strategy(a.strategy);
  const Instance inst = load_instance_file(a.input);
  StrategyOptions opts;
  opts.snapshots = a.snapshots == "on";
  opts.t_cap = a.t_cap;
  if (a.target.size() == 2) opts.target = Segment(a.target[0], a.target[1]);
  check_precondition(id, inst, opts);
  const harness::RunOutcome out = harness::run(id, inst, opts);
  if (!a.trace.empty()) write_file(a.trace, trace_to_json(out.trace, 2) + "\n");
  std::cout << harness::csv_header() << '\n' << harness::csv_line(out.row) << '\n';
  for (const std::string& note : out.trace.notes) std::cerr << "note: " << note << '\n';
  if (!out.ok()) {
    std::cerr << "model: " << out.trace.verdict
              << "\noracle: " << out.oracle.to_string() << '\n';
    return kInvalid;
  }
  return kOk;
}

struct BenchArgs {
  std::string config;
  std::string csv;
  int jobs = 1;
};

int cmd_bench(const BenchArgs& a) {
  const harness::BenchConfig cfg = harness::parse_bench_config(read_file(a.config));
  const harness::BenchResult res = harness::bench(cfg, a.jobs);
  std::string text = harness::csv_header() + "\n";
  for (const harness::BenchRow& r : res.rows) text += harness::csv_line(r) + "\n";
  if (a.csv.empty() || a.csv == "-") {
    std::cout << text;
  } else {
    write_file(a.csv, text);
  }
  std::cerr << harness::summary_text(res.summary);
  if (res.abort_reason) {
    std::cerr << "aborted: invalid trace for " << *res.abort_reason << '\n';
    return kInvalid;
  }
  return kOk;
}

struct OracleArgs {
  std::string input;
  std::string trace;
  std::size_t cap = 1'000'000;
};

int cmd_oracle(const OracleArgs& a) {
  if (!a.trace.empty()) {
    const fs::path path(a.trace);
    const UntangleTrace trace = load_trace_json(read_file(path), path.parent_path());
    const oracle::Verdict v = oracle::validate_trace(trace);
    std::cout << "trace: " << v.to_string() << '\n';
    if (!v.valid) return kInvalid;
    if (a.input.empty()) return kOk;
  }
  if (a.input.empty()) {
    std::cerr << "oracle needs --input or --trace\n";
    return kIo;
  }
  const Instance inst = load_instance_file(a.input);
  const oracle::SearchResult r = oracle::min_flips_bfs(inst, a.cap);
  if (r.flips) {
    std::cout << "min_flips " << *r.flips << " states " << r.states << '\n';
  } else {
    std::cout << "min_flips exceeds cap " << a.cap << " states " << r.states << '\n';
  }
  return kOk;
}

struct RenderArgs {
  std::string trace;
  std::string out;
};

int cmd_render(const RenderArgs& a) {
  const fs::path path(a.trace);
  const UntangleTrace trace = load_trace_json(read_file(path), path.parent_path());
  const int frames = harness::render(trace, a.out);
  std::cout << frames << " frames written to " << a.out << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flip-based untangling of segment multisets"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate an instance");
  g->add_option("--class", gen.geometry_class, "Geometry class");
  g->add_option("--property", gen.property, "Graph property");
  g->add_option("--family", gen.family, "random, stress_tour, crossed_segment or separating_line");
  g->add_option("--n", gen.n, "Number of segments");
  g->add_option("--t", gen.t, "T-segments (multigraph) or |T|");
  g->add_option("--seed", gen.seed, "Seed");
  g->add_option("--radius", gen.radius, "Circle radius");
  g->add_option("-o,--out", gen.out, "Output file (stdout when absent)");

  RunArgs run;
  auto* r = app.add_subcommand("run", "Untangle an instance with one strategy");
  r->add_option("--strategy", run.strategy, "Strategy id")->required();
  r->add_option("--input", run.input, "Instance JSON")->required();
  r->add_option("--trace", run.trace, "Trace output file");
  r->add_option("--snapshots", run.snapshots, "Record potentials per flip")
      ->check(CLI::IsMember({"on", "off"}));
  r->add_option("--t-cap", run.t_cap, "Largest T-degree sum for two_outside_removal");
  r->add_option("--target", run.target, "Distinguished segment as two point ids")
      ->expected(2);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run a benchmark sweep");
  b->add_option("--config", bench.config, "Sweep config JSON")->required();
  b->add_option("--csv", bench.csv, "CSV output file (stdout when absent)");
  b->add_option("--jobs", bench.jobs, "Worker threads");

  OracleArgs orc;
  auto* o = app.add_subcommand("oracle", "Exact minimum flips, or check a trace");
  o->add_option("--input", orc.input, "Instance JSON (n <= 6)");
  o->add_option("--cap", orc.cap, "State cap for the search");
  o->add_option("--trace", orc.trace, "Trace to re-validate");

  RenderArgs ren;
  auto* v = app.add_subcommand("render", "Write one SVG per trace state");
  v->add_option("--trace", ren.trace, "Trace JSON")->required();
  v->add_option("--out", ren.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kIo;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*r) return cmd_run(run);
    if (*b) return cmd_bench(bench);
    if (*o) return cmd_oracle(orc);
    if (*v) return cmd_render(ren);
  } catch (const UntangleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  }
  return kOk;
}
