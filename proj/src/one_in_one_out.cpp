// Removal-only untangling with q outside and q' inside the convex hull of C.

#include "strategy_support.hpp"

namespace untangle::detail {
namespace {

constexpr std::string_view kTag = "one_in_one_out";

// Farthest-first on every segment incident to `apex` that has crossings.
void drain_apex(Workspace& ws, int apex, const std::string& t, int limit) {
  for (int round = 0; round <= limit; ++round) {
    int s = -1;
    for (int k : ws.slots()) {
      if (ws.segment(k).has(apex) && ws.crossings(k) > 0) {
        s = k;
        break;
      }
    }
    if (s < 0) return;
    farthest_first(ws, s, apex, t);
  }
  ws.note("one_in_one_out: " + t + " did not finish");
}

}  // namespace

void run_one_in_one_out_removal(Workspace& ws) {
  const Instance& inst = ws.instance();
  const std::vector<Point> hull = inst.convex_points();
  int q = inst.t_ids[0], q2 = inst.t_ids[1];
  if (!strictly_outside_convex(hull, inst.point(q))) std::swap(q, q2);
  const Point& Q = ws.point(q);
  const Point& Q2 = ws.point(q2);
  const int limit = 4 * ws.slot_count() + 16;

  {
    ActiveScope cc(ws, select(ws, [&](int s) { return is_cc(ws, s); }));
    convex_removal(ws, inst.convex_ids, tag(kTag, "phase1"));
  }
  {
    ActiveScope inner(ws, select(ws, [&](int s) {
                        return is_cc(ws, s) || (is_ct(ws, s) &&
                                                ws.segment(s).has(q2));
                      }));
    drain_apex(ws, q2, tag(kTag, "phase2"), limit);
  }

  // Each CT-segment at q, one at a time: flip with the farthest crossing
  // until it is crossing-free or becomes qq'.
  const std::string p3 = tag(kTag, "phase3");
  for (int round = 0; round <= limit; ++round) {
    int s = -1;
    for (int k : ws.slots()) {
      if (is_ct(ws, k) && ws.segment(k).has(q) && ws.crossings(k) > 0) {
        s = k;
        break;
      }
    }
    if (s < 0) break;
    for (int step = 0; ws.crossings(s) > 0 && !is_tt(ws, s); ++step) {
      if (step > 4 * limit) {
        ws.note("one_in_one_out: phase 3 segment did not finish");
        break;
      }
      const int other = partner_by_distance(ws, s, q, true);
      const bool cc = is_cc(ws, other);
      const Segment removed = ws.segment(other);
      const Segment sseg = ws.segment(s);
      InsertionPair ins = first_legal(ws, s, other);
      if (!cc) {
        const Segment tt(q, q2);
        const Segment rest(sseg.other(q), removed.other(q2));
        ins = prefer(ws, s, other, {tt, rest});
      }
      s = ws.flip_keeping(s, other, ins, p3, q);
      if (!cc) continue;
      // The line of the removed CC-segment is now crossing-free. When it
      // separates q from q', the side of q' is a one-point problem.
      const Point& a = ws.point(removed.a);
      const Point& b = ws.point(removed.b);
      if (orient(a, b, Q) * orient(a, b, Q2) >= 0) continue;
      const int q2_side = orient(a, b, Q2);
      ActiveScope side(ws, select(ws, [&](int k) {
                         const Segment& seg = ws.segment(k);
                         return orient(a, b, ws.point(seg.a)) != -q2_side &&
                                orient(a, b, ws.point(seg.b)) != -q2_side;
                       }));
      drain_apex(ws, q2, tag(kTag, "phase3-split"), limit);
    }
  }

  // Only copies of qq' are crossed now; the C endpoints involved together
  // with q' are in convex position.
  // Flips at q can cross segments outside the first crossed set, so the
  // crossed set is recomputed until it is empty or free of q-segments.
  for (int round = 0; round <= limit; ++round) {
    ActiveScope crossed(
        ws, select(ws, [&](int k) { return ws.crossings(k) > 0; }));
    const std::vector<int> active = ws.slots();
    if (std::none_of(active.begin(), active.end(),
                     [&](int k) { return ws.segment(k).has(q); })) {
      break;
    }
    if (round == 1) ws.note("one_in_one_out: phase 4 crossed set grew");
    drain_apex(ws, q, tag(kTag, "phase4"), limit);
  }
  fallback(ws, "one_in_one_out_removal left crossings");
}

}  // namespace untangle::detail
