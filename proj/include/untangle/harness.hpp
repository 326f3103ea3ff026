#pragma once

// Instance generators, the batch runner with bound fitting, and SVG frames.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "untangle/model.hpp"
#include "untangle/oracle.hpp"
#include "untangle/strategies.hpp"

namespace untangle::harness {

/// Bounded draws on top of mt19937_64 with explicit rejection, so a seed gives
/// the same numbers on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t next() { return gen_(); }
  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [0, 1).
  double unit();
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 gen_;
};

enum class Family {
  random,
  /// Tour on an odd number of convex points joining each point to the one
  /// (N - 1) / 2 steps ahead; every pair of non-adjacent segments crosses.
  stress_tour,
  /// Crossing-free matching on convex points plus one extra segment s with an
  /// endpoint in C; s is a chord for the convex class, otherwise it joins a
  /// single T point placed anywhere. Input of farthest_first.
  crossed_segment,
  /// Matching on convex points plus a segment pq whose endpoints lie outside
  /// the hull and whose line crosses it. Input of liberate_line.
  separating_line,
};

std::string_view to_string(Family f);
Family parse_family(std::string_view s);

struct GeneratorSpec {
  GeometryClass geometry_class = GeometryClass::convex;
  Property property = Property::matching;
  /// Number of segments.
  int n = 8;
  /// Number of T-segments for multigraphs with a fixed |T|; |T| itself for
  /// parallel_separated, T_outside_hull and general.
  int t = 0;
  std::uint64_t seed = 1;
  /// Circle radius for C; raised automatically when |C| is large.
  Coord radius = 1'000'000;
  Family family = Family::random;
};

/// Throws UntangleError(precondition) for infeasible specs.
Instance generate(const GeneratorSpec& spec);

/// n * (floor(log2 |C|) + 1): the flip budget this artifact achieves for n
/// segments in convex position.
double d_conv(int n, int c);

struct BoundModel {
  std::string formula;
  double value = 1;
};
BoundModel bound_for(StrategyId id, const Instance& inst);

struct BenchRow {
  std::string strategy;
  std::string geometry_class;
  std::string property;
  std::string family;
  int n = 0;
  int t = 0;
  int points = 0;
  int convex = 0;
  std::uint64_t seed = 0;
  long flips = 0;
  double wall_ms = 0;
  std::string bound_formula;
  double bound = 1;
  double ratio = 0;
  /// "ok", "precondition: ...", or "invalid: ...".
  std::string status = "ok";
};

std::string csv_header();
std::string csv_line(const BenchRow& row);

struct RunOutcome {
  UntangleTrace trace;
  oracle::Verdict oracle;
  BenchRow row;
  bool ok() const { return trace.verdict == "valid" && oracle.valid; }
};

/// Checks the precondition (throws on mismatch), untangles, and validates
/// with both validators.
RunOutcome run(StrategyId id, const Instance& inst, const StrategyOptions& opts);

struct BenchConfig {
  struct Sweep {
    GeneratorSpec base;
    std::vector<int> n;
    std::vector<int> t;
    std::vector<std::uint64_t> seeds;
  };
  std::vector<StrategyId> strategies;
  std::vector<Sweep> sweeps;
  int t_cap = 8;
};

BenchConfig parse_bench_config(std::string_view json_text);

struct StrategySummary {
  std::string strategy;
  int rows = 0;
  double max_ratio = 0;
  double mean_ratio = 0;
  /// Least-squares slope of log(flips) against log(n), over rows with flips.
  std::optional<double> exponent;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<StrategySummary> summary;
  /// Set when an invalid trace stopped the sweep.
  std::optional<std::string> abort_reason;
};

BenchResult bench(const BenchConfig& config, int jobs = 1);
std::vector<StrategySummary> summarize(const std::vector<BenchRow>& rows);
std::string summary_text(const std::vector<StrategySummary>& summary);

/// Slope of the least-squares line through (log x, log y).
std::optional<double> fit_exponent(const std::vector<double>& x,
                                   const std::vector<double>& y);

/// One SVG per state: frame 0 is the initial state, frame k follows flip k
/// with the removed pair dashed and the inserted pair bold.
std::vector<std::string> render_frames(const UntangleTrace& trace);
/// Writes frame_0000.svg, frame_0001.svg, ... and returns the frame count.
int render(const UntangleTrace& trace, const std::filesystem::path& dir);

}  // namespace untangle::harness
