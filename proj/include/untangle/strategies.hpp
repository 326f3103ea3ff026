#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "untangle/geometry.hpp"
#include "untangle/model.hpp"
#include "untangle/potentials.hpp"

namespace untangle {

enum class StrategyId {
  baseline_noclice,
  convex_insertion,
  separated_insertion,
  convex_removal,
  farthest_first,
  one_point_removal,
  two_outside_removal,
  two_inside_removal,
  one_in_one_out_removal,
  separated_removal_insertion,
  liberate_line,
  outside_matching_RI,
};

std::string_view to_string(StrategyId id);
StrategyId parse_strategy(std::string_view s);
const std::vector<StrategyId>& all_strategies();

struct StrategyOptions {
  /// Largest sum of T-degrees accepted by two_outside_removal.
  int t_cap = 8;
  /// Record a PotentialReport list before the first flip and after each flip.
  bool snapshots = false;
  /// The distinguished segment of farthest_first (s) and liberate_line (pq).
  /// Detected from the instance when absent.
  std::optional<Segment> target;
};

struct UntangleTrace {
  Instance initial;
  StrategyId strategy = StrategyId::baseline_noclice;
  std::vector<FlipEvent> events;
  std::vector<std::vector<PotentialReport>> snapshots;
  /// "valid" or "invalid: <reason> at <index>".
  std::string verdict = "valid";
  /// Runtime observations: normalizations applied, postcondition checks that
  /// failed, fallbacks taken.
  std::vector<std::string> notes;
};

/// Throws UntangleError(precondition) when the strategy does not apply.
void check_precondition(StrategyId id, const Instance& inst,
                        const StrategyOptions& opts = {});

/// Runs the strategy and validates the result by replaying it with
/// apply_flip. Fragments (farthest_first, liberate_line) are validated against
/// their own postcondition instead of a crossing-free end state.
UntangleTrace untangle(StrategyId id, const Instance& inst,
                       const StrategyOptions& opts = {});

/// Replays events with apply_flip. Returns "valid" or "invalid: <reason> at
/// <index>"; a final state with crossings is reported at index = event count
/// when require_crossing_free is set.
std::string replay_verdict(const Instance& inst,
                           std::span<const FlipEvent> events,
                           bool require_crossing_free,
                           Instance* final_state = nullptr);

/// The segment the fragment strategies operate on, when not given explicitly.
std::optional<Segment> default_target(StrategyId id, const Instance& inst);

/// First segment in {pa, pb, pc, qa, qb, qc} whose relative interior meets the
/// open triangle abc. Requires pq to meet the open triangle.
Segment triangle_hide_pick(const Point& a, const Point& b, const Point& c,
                           const Point& p, const Point& q);

/// For crossing segments p1p2 and p3p4 and a line through p1 crossing p3p4,
/// the reconnection neither of whose segments crosses the line.
InsertionPair icritical_choice(std::span<const Point> points,
                               const Segment& p1p2, const Segment& p3p4,
                               int p1, const OrientedLine& l);

struct CriticalLine {
  OrientedLine line;
  int through = -1;  // id among q1, q2, q3 the line passes through
};

/// Among the six tangents to the hull from q1, q2, q3, the first that crosses
/// q1q3 or q2q4 (ids). Throws UntangleError(precondition, "lemma precondition
/// violated") when none does.
CriticalLine critical_tangent_line(std::span<const Point> hull,
                                   std::span<const Point> points, int q1,
                                   int q2, int q3, int q4);

/// Insertion choice for convex flips: relabel the endpoints by
/// counterclockwise rank a < c < b < d, insert (ac, bd) when
/// d(ac) <= d(cb) or d(bd) <= d(cb) and (ad, cb) otherwise.
InsertionPair convex_insertion_choice(const Instance& inst, const Segment& s1,
                                      const Segment& s2);

/// Top-two / bottom-two pairing in the vertical order.
InsertionPair vertical_insertion_choice(const std::vector<int>& vrank,
                                        const Segment& s1, const Segment& s2);

}  // namespace untangle
