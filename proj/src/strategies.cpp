#include "untangle/strategies.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "strategy_support.hpp"
#include "untangle/errors.hpp"

namespace untangle {
namespace {

constexpr std::array<std::pair<StrategyId, std::string_view>, 12> kNames{{
    {StrategyId::baseline_noclice, "baseline_noclice"},
    {StrategyId::convex_insertion, "convex_insertion"},
    {StrategyId::separated_insertion, "separated_insertion"},
    {StrategyId::convex_removal, "convex_removal"},
    {StrategyId::farthest_first, "farthest_first"},
    {StrategyId::one_point_removal, "one_point_removal"},
    {StrategyId::two_outside_removal, "two_outside_removal"},
    {StrategyId::two_inside_removal, "two_inside_removal"},
    {StrategyId::one_in_one_out_removal, "one_in_one_out_removal"},
    {StrategyId::separated_removal_insertion, "separated_removal_insertion"},
    {StrategyId::liberate_line, "liberate_line"},
    {StrategyId::outside_matching_RI, "outside_matching_RI"},
}};

[[noreturn]] void unmet(StrategyId id, const std::string& why) {
  fail(ErrorKind::precondition,
       std::string(to_string(id)) + " precondition violated: " + why);
}

bool insertion_choice_property(Property p) {
  return p == Property::multigraph || p == Property::matching;
}

bool is_matching(const Instance& inst) {
  std::vector<int> deg(inst.points.size(), 0);
  for (const auto& [s, c] : inst.segments.counts()) {
    deg[size_t(s.a)] += c;
    deg[size_t(s.b)] += c;
  }
  return std::all_of(deg.begin(), deg.end(), [](int d) { return d <= 1; });
}

bool all_cc_except(const Instance& inst, const Segment& s) {
  for (const auto& [seg, c] : inst.segments.counts()) {
    const int copies = seg == s ? c - 1 : c;
    if (copies > 0 &&
        (inst.convex_rank(seg.a) < 0 || inst.convex_rank(seg.b) < 0)) {
      return false;
    }
  }
  return true;
}

bool crossing_free_except(const Instance& inst, const Segment& s) {
  bool skipped = false;
  std::vector<Segment> rest;
  for (const Segment& seg : inst.segments.expanded()) {
    if (!skipped && seg == s) {
      skipped = true;
      continue;
    }
    rest.push_back(seg);
  }
  for (size_t i = 0; i < rest.size(); ++i) {
    for (size_t j = i + 1; j < rest.size(); ++j) {
      if (crossing(inst, rest[i], rest[j])) return false;
    }
  }
  return true;
}

// The endpoint of the farthest-first segment that plays the role of q.
int farthest_first_apex(const Instance& inst, const Segment& s) {
  if (inst.in_t(s.a)) return s.a;
  if (inst.in_t(s.b)) return s.b;
  return s.a;
}

}  // namespace

std::string_view to_string(StrategyId id) {
  for (auto [k, v] : kNames) {
    if (k == id) return v;
  }
  return "?";
}

StrategyId parse_strategy(std::string_view s) {
  for (auto [k, v] : kNames) {
    if (v == s) return k;
  }
  fail(ErrorKind::precondition, "unknown strategy '" + std::string(s) + "'");
}

const std::vector<StrategyId>& all_strategies() {
  static const std::vector<StrategyId> ids = [] {
    std::vector<StrategyId> v;
    for (auto [k, name] : kNames) v.push_back(k);
    return v;
  }();
  return ids;
}

std::optional<Segment> default_target(StrategyId id, const Instance& inst) {
  if (id == StrategyId::farthest_first) {
    std::vector<Segment> touching_t;
    for (const Segment& s : inst.segments.expanded()) {
      if (inst.in_t(s.a) || inst.in_t(s.b)) touching_t.push_back(s);
    }
    if (touching_t.size() == 1) return touching_t.front();
    if (!touching_t.empty()) return std::nullopt;
    // Convex instance: the segment on which every crossing lies.
    std::vector<SegmentPair> pairs = crossing_pairs(inst);
    if (pairs.empty()) {
      if (inst.segments.empty()) return std::nullopt;
      return inst.segments.counts().begin()->first;
    }
    for (const Segment& cand : {pairs[0].first, pairs[0].second}) {
      if (std::all_of(pairs.begin(), pairs.end(), [&](const SegmentPair& p) {
            return p.first == cand || p.second == cand;
          })) {
        return cand;
      }
    }
    return std::nullopt;
  }
  if (id == StrategyId::liberate_line) {
    const std::vector<Point> hull = inst.convex_points();
    for (const auto& [s, c] : inst.segments.counts()) {
      if (inst.in_t(s.a) && inst.in_t(s.b) &&
          segment_meets_convex_interior(inst.point(s.a), inst.point(s.b),
                                        hull)) {
        return s;
      }
    }
  }
  return std::nullopt;
}

void check_precondition(StrategyId id, const Instance& inst,
                        const StrategyOptions& opts) {
  auto need_class = [&](GeometryClass cls) {
    if (!satisfies_class(inst, cls)) {
      unmet(id, "geometry is not " + std::string(to_string(cls)));
    }
  };
  auto need_insertion_choice = [&] {
    if (!insertion_choice_property(inst.property)) {
      unmet(id, "property " + std::string(to_string(inst.property)) +
                    " offers no insertion choice");
    }
  };
  const std::vector<Point> hull = inst.convex_points();
  switch (id) {
    case StrategyId::baseline_noclice:
      return;
    case StrategyId::convex_insertion:
      need_class(GeometryClass::convex);
      need_insertion_choice();
      return;
    case StrategyId::separated_insertion:
    case StrategyId::separated_removal_insertion:
      need_class(GeometryClass::parallel_separated);
      need_insertion_choice();
      return;
    case StrategyId::convex_removal:
      need_class(GeometryClass::convex);
      return;
    case StrategyId::farthest_first: {
      std::optional<Segment> s = opts.target ? opts.target
                                             : default_target(id, inst);
      if (!s || inst.segments.count(*s) == 0) {
        unmet(id, "no distinguished segment s in S");
      }
      if (!all_cc_except(inst, *s)) {
        unmet(id, "segments other than s must have both endpoints in C");
      }
      if (inst.convex_rank(s->a) < 0 && inst.convex_rank(s->b) < 0) {
        unmet(id, "s needs an endpoint in C");
      }
      if (!crossing_free_except(inst, *s)) {
        unmet(id, "segments other than s must be crossing-free");
      }
      return;
    }
    case StrategyId::one_point_removal:
      need_class(GeometryClass::one_T_point);
      return;
    case StrategyId::two_outside_removal:
      if (inst.t_ids.size() > 2) unmet(id, "more than two T points");
      need_class(GeometryClass::T_outside_hull);
      if (inst.t_degree_sum() > opts.t_cap) {
        unmet(id, "sum of T-degrees " + std::to_string(inst.t_degree_sum()) +
                      " exceeds the cap " + std::to_string(opts.t_cap));
      }
      return;
    case StrategyId::two_inside_removal:
      need_class(GeometryClass::two_T_inside);
      return;
    case StrategyId::one_in_one_out_removal:
      need_class(GeometryClass::one_in_one_out);
      return;
    case StrategyId::liberate_line: {
      if (inst.property == Property::redblue_matching ||
          (inst.property != Property::matching && !is_matching(inst))) {
        fail(ErrorKind::precondition,
             inst.property == Property::redblue_matching
                 ? "not a matching: red-blue matchings restrict the insertion"
                 : "not a matching");
      }
      std::optional<Segment> s = opts.target ? opts.target
                                             : default_target(id, inst);
      if (!s || inst.segments.count(*s) == 0) {
        unmet(id, "no segment pq in S");
      }
      if (!all_cc_except(inst, *s)) {
        unmet(id, "segments other than pq must have both endpoints in C");
      }
      if (hull.size() < 3 || !segment_meets_convex_interior(
                                 inst.point(s->a), inst.point(s->b), hull)) {
        unmet(id, "pq does not separate C");
      }
      for (int id2 : {s->a, s->b}) {
        if (!strictly_outside_convex(hull, inst.point(id2))) {
          unmet(id, "p and q must lie outside the hull of C");
        }
      }
      return;
    }
    case StrategyId::outside_matching_RI:
      if (inst.property != Property::matching) unmet(id, "not a matching");
      need_class(GeometryClass::T_outside_hull);
      return;
  }
}

std::string replay_verdict(const Instance& inst,
                           std::span<const FlipEvent> events,
                           bool require_crossing_free, Instance* final_state) {
  Instance cur = inst;
  for (size_t i = 0; i < events.size(); ++i) {
    try {
      cur = apply_flip(cur, events[i]);
    } catch (const UntangleError& e) {
      return "invalid: " + std::string(e.what()) + " at " + std::to_string(i);
    }
  }
  if (final_state) *final_state = cur;
  if (require_crossing_free && !crossing_pairs(cur).empty()) {
    return "invalid: final state has crossings at " +
           std::to_string(events.size());
  }
  return "valid";
}

UntangleTrace untangle(StrategyId id, const Instance& inst,
                       const StrategyOptions& opts) {
  check_precondition(id, inst, opts);
  Workspace ws(inst);
  bool require_crossing_free = true;
  std::optional<Segment> target;

  switch (id) {
    case StrategyId::baseline_noclice:
      detail::baseline(ws, "baseline");
      break;
    case StrategyId::convex_insertion:
      detail::convex_insertion(ws, "convex_insertion");
      break;
    case StrategyId::separated_insertion:
      detail::run_separated_insertion(ws);
      break;
    case StrategyId::convex_removal:
      detail::convex_removal(ws, inst.convex_ids, "convex_removal");
      break;
    case StrategyId::farthest_first: {
      target = opts.target ? opts.target : default_target(id, inst);
      const int apex = farthest_first_apex(inst, *target);
      detail::farthest_first(ws, detail::slot_of(ws, *target), apex,
                             "farthest_first");
      break;
    }
    case StrategyId::one_point_removal:
      detail::run_one_point_removal(ws);
      break;
    case StrategyId::two_outside_removal:
      detail::run_two_outside_removal(ws, opts.t_cap);
      break;
    case StrategyId::two_inside_removal:
      detail::run_two_inside_removal(ws);
      break;
    case StrategyId::one_in_one_out_removal:
      detail::run_one_in_one_out_removal(ws);
      break;
    case StrategyId::separated_removal_insertion:
      detail::run_separated_removal_insertion(ws);
      break;
    case StrategyId::liberate_line:
      target = opts.target ? opts.target : default_target(id, inst);
      detail::run_liberate_line(ws, detail::slot_of(ws, *target));
      require_crossing_free = false;
      break;
    case StrategyId::outside_matching_RI:
      detail::run_outside_matching(ws);
      break;
  }

  UntangleTrace trace;
  trace.initial = inst;
  trace.strategy = id;
  trace.events = ws.events();
  trace.notes = ws.notes();
  Instance final_state;
  trace.verdict =
      replay_verdict(inst, trace.events, require_crossing_free, &final_state);
  if (trace.verdict == "valid") {
    for (const std::string& note : trace.notes) {
      if (note.find("postcondition violated") != std::string::npos) {
        trace.verdict = "invalid: " + note + " at " +
                        std::to_string(trace.events.size());
        break;
      }
    }
  }
  if (id == StrategyId::liberate_line && trace.verdict == "valid") {
    const OrientedLine l =
        OrientedLine::through(inst.point(target->a), inst.point(target->b));
    if (line_lambda(final_state, l) != 0) {
      trace.verdict = "invalid: line pq still crossed at " +
                      std::to_string(trace.events.size());
    }
  }
  if (opts.snapshots) {
    Instance cur = inst;
    trace.snapshots.push_back(snapshot(cur));
    for (const FlipEvent& e : trace.events) {
      cur = apply_flip(cur, e);
      trace.snapshots.push_back(snapshot(cur));
    }
  }
  return trace;
}

namespace detail {

void run_separated_insertion(Workspace& ws) {
  const Instance& inst = ws.instance();
  const std::vector<int> vrank = vertical_rank(inst);
  // Earliest crossing pair in slot order with a segment touching T. Only the
  // T-touching side needs a partner scan.
  auto first_t_pair = [&]() -> std::optional<std::pair<int, int>> {
    const std::vector<int> order = ws.slots();
    std::vector<int> pos(size_t(ws.slot_count()), -1);
    for (size_t i = 0; i < order.size(); ++i) pos[size_t(order[i])] = int(i);
    std::optional<std::pair<int, int>> best;
    for (int s : order) {
      if (is_cc(ws, s) || ws.crossings(s) == 0) continue;
      for (int o : ws.partners(s)) {
        std::pair<int, int> cand = pos[size_t(s)] < pos[size_t(o)]
                                       ? std::pair{s, o}
                                       : std::pair{o, s};
        if (!best || std::pair{pos[size_t(cand.first)], pos[size_t(cand.second)]} <
                         std::pair{pos[size_t(best->first)], pos[size_t(best->second)]}) {
          best = cand;
        }
      }
    }
    return best;
  };
  while (!ws.crossing_free()) {
    if (auto pick = first_t_pair()) {
      auto [s1, s2] = *pick;
      ws.flip(s1, s2,
              vertical_insertion_choice(vrank, ws.segment(s1), ws.segment(s2)),
              "separated_insertion/vertical");
      continue;
    }
    auto [s1, s2] = *ws.first_crossing_pair();
    ws.flip(s1, s2,
            convex_insertion_choice(inst, ws.segment(s1), ws.segment(s2)),
            "separated_insertion/depth-product");
  }
}

void run_separated_removal_insertion(Workspace& ws) {
  const Instance& inst = ws.instance();
  const std::vector<int> vrank = vertical_rank(inst);
  auto touches_t = [&](int a, int b) { return !is_cc(ws, a) || !is_cc(ws, b); };
  while (auto pick = first_pair(ws, touches_t)) {
    auto [s1, s2] = *pick;
    ws.flip(s1, s2,
            vertical_insertion_choice(vrank, ws.segment(s1), ws.segment(s2)),
            "separated_ri/phase1");
  }
  // Only CC x CC crossings remain, and flipping them cannot create crossings
  // with the T-segments.
  convex_insertion(ws, "separated_ri/phase2");
}

void run_one_point_removal(Workspace& ws) {
  const Instance& inst = ws.instance();
  const int q = inst.t_ids.front();
  {
    ActiveScope cc(ws, select(ws, [&](int s) { return is_cc(ws, s); }));
    convex_removal(ws, inst.convex_ids, "one_point/preprocess");
  }
  bool progress = true;
  while (progress) {
    progress = false;
    for (int s : ws.slots()) {
      if (ws.segment(s).has(q) && ws.crossings(s) > 0) {
        farthest_first(ws, s, q, "one_point");
        progress = true;
      }
    }
  }
  fallback(ws, "one_point_removal left crossings");
}

}  // namespace detail
}  // namespace untangle
