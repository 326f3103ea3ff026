// Matchings with T outside the hull of C, using removal and insertion
// choices, plus the line-liberation subroutine and its geometric helpers.

#include <algorithm>

#include "strategy_support.hpp"
#include "untangle/errors.hpp"

namespace untangle {

Segment triangle_hide_pick(const Point& a, const Point& b, const Point& c,
                           const Point& p, const Point& q) {
  const std::vector<OpenHalfPlane> tri = open_triangle(a, b, c);
  if (orient(a, b, c) == 0) {
    fail(ErrorKind::precondition, "degenerate triangle");
  }
  if (!segment_meets_open_region(p, q, tri)) {
    fail(ErrorKind::precondition, "pq does not meet the triangle interior");
  }
  for (const Point* u : {&p, &q}) {
    for (const Point* v : {&a, &b, &c}) {
      if (segment_meets_open_region(*u, *v, tri)) return Segment(u->id, v->id);
    }
  }
  fail(ErrorKind::precondition, "no candidate segment meets the triangle");
}

InsertionPair icritical_choice(std::span<const Point> points,
                               const Segment& p1p2, const Segment& p3p4,
                               int p1, const OrientedLine& l) {
  if (!p1p2.has(p1)) fail(ErrorKind::precondition, "p1 is not on p1p2");
  const Point& a = points[size_t(p1)];
  if (l.side(a) != Side::on) {
    fail(ErrorKind::precondition, "line does not contain p1");
  }
  if (!line_crosses_segment(l, points[size_t(p3p4.a)], points[size_t(p3p4.b)])) {
    fail(ErrorKind::precondition, "line does not cross p3p4");
  }
  const int p2 = p1p2.other(p1);
  auto clear = [&](int u, int v) {
    return !line_crosses_segment(l, points[size_t(u)], points[size_t(v)]);
  };
  for (const auto& [x, y] : {std::pair{p3p4.a, p3p4.b}, {p3p4.b, p3p4.a}}) {
    if (clear(p1, x) && clear(p2, y)) {
      return normalized({Segment(p1, x), Segment(p2, y)});
    }
  }
  fail(ErrorKind::precondition, "no reconnection avoids the line");
}

CriticalLine critical_tangent_line(std::span<const Point> hull,
                                   std::span<const Point> points, int q1,
                                   int q2, int q3, int q4) {
  const Point& a = points[size_t(q1)];
  const Point& b = points[size_t(q2)];
  const Point& c = points[size_t(q3)];
  const Point& d = points[size_t(q4)];
  for (int id : {q1, q2, q3}) {
    std::pair<OrientedLine, OrientedLine> tangents =
        [&]() -> std::pair<OrientedLine, OrientedLine> {
      try {
        return tangents_from_point(points[size_t(id)], hull);
      } catch (const UntangleError&) {
        fail(ErrorKind::precondition, "lemma precondition violated");
      }
    }();
    for (const OrientedLine& l : {tangents.first, tangents.second}) {
      if (line_crosses_segment(l, a, c) || line_crosses_segment(l, b, d)) {
        return {l, id};
      }
    }
  }
  fail(ErrorKind::precondition, "lemma precondition violated");
}

namespace detail {
namespace {

constexpr std::string_view kLib = "liberate_line";

}  // namespace

void run_liberate_line(Workspace& ws, int pq_slot) {
  const Segment pq = ws.segment(pq_slot);
  const int p = pq.a, q = pq.b;
  const Point& P = ws.point(p);
  const Point& Q = ws.point(q);
  const OrientedLine line = OrientedLine::through(P, Q);
  auto crosses_line = [&](int slot) {
    const Segment& s = ws.segment(slot);
    return line_crosses_segment(line, ws.point(s.a), ws.point(s.b));
  };
  auto working = [&] {
    return select(ws, [&](int s) {
      return s != pq_slot && is_cc(ws, s) && crosses_line(s);
    });
  };

  // Pairs of crossing chords are reconnected on each side of the line.
  const std::string pre_tag = tag(kLib, "preprocess");
  for (bool again = true; again;) {
    again = false;
    const std::vector<int> w = working();
    for (int s : w) {
      for (int o : ws.partners(s)) {
        if (std::find(w.begin(), w.end(), o) == w.end()) continue;
        const Segment& a = ws.segment(s);
        const Segment& b = ws.segment(o);
        const int b_same = line.side(ws.point(b.a)) == line.side(ws.point(a.a))
                               ? b.a
                               : b.b;
        const InsertionPair same{Segment(a.a, b_same),
                                 Segment(a.b, b.other(b_same))};
        ws.flip(s, o, prefer(ws, s, o, same), pre_tag);
        again = true;
        break;
      }
      if (again) break;
    }
  }

  std::vector<int> w = working();
  const int m = int(w.size());
  if (m == 0) return;
  std::sort(w.begin(), w.end(), [&](int x, int y) {
    const Segment& sx = ws.segment(x);
    const Segment& sy = ws.segment(y);
    return compare_params(crossing_param(P, Q, ws.point(sx.a), ws.point(sx.b)),
                          crossing_param(P, Q, ws.point(sy.a), ws.point(sy.b))) <
           0;
  });
  if (m == 1) {
    ws.flip(pq_slot, w[0], first_legal(ws, pq_slot, w[0]), tag(kLib, "single"));
    return;
  }

  auto split = [&](int slot, Side side) {
    const Segment& s = ws.segment(slot);
    const bool a_on = line.side(ws.point(s.a)) == side;
    return std::pair{a_on ? s.a : s.b, a_on ? s.b : s.a};
  };
  const auto [u1, l1] = split(w.front(), Side::left);
  const auto [um, lm] = split(w.back(), Side::left);

  // Which of p u_m, q u_1, q l_1 enters the triangle u_1 l_1 u_m decides the
  // first flip; the chain is then relabelled so the apex comes first.
  const Segment pick = triangle_hide_pick(ws.point(u1), ws.point(l1),
                                          ws.point(um), P, Q);
  int apex, anchor;
  std::vector<int> chain;
  InsertionPair first;
  int first_chord;
  Side anchor_side;
  if (pick == Segment(p, um)) {
    apex = p;
    anchor = um;
    anchor_side = Side::left;
    first_chord = w.back();
    first = {Segment(p, um), Segment(q, lm)};
    chain.assign(w.begin(), w.end() - 1);
    ws.note("liberate_line: first flip at the far chord from p");
  } else if (pick == Segment(q, u1)) {
    apex = q;
    anchor = u1;
    anchor_side = Side::left;
    first_chord = w.front();
    first = {Segment(q, u1), Segment(p, l1)};
    chain.assign(w.rbegin(), w.rend() - 1);
    ws.note("liberate_line: first flip at the far chord from q, order reversed");
  } else if (pick == Segment(q, l1)) {
    apex = q;
    anchor = l1;
    anchor_side = Side::right;
    first_chord = w.front();
    first = {Segment(q, l1), Segment(p, u1)};
    chain.assign(w.rbegin(), w.rend() - 1);
    ws.note(
        "liberate_line: first flip at the far chord from q, order reversed and "
        "sides swapped");
  } else {
    fail(ErrorKind::precondition, "triangle pick outside the expected three");
  }

  int s = ws.flip_keeping(pq_slot, first_chord, normalized(first),
                          tag(kLib, "first"), anchor);
  int x = apex;
  for (size_t i = 0; i < chain.size(); ++i) {
    const auto [y, z] = split(chain[i], anchor_side);
    if (!ws.crosses(s, chain[i])) {
      ws.note("liberate_line: chain broken at chord " + std::to_string(i + 1));
      return;
    }
    InsertionPair ins;
    if (i == 0) {
      ins = m % 2 == 1 ? InsertionPair{Segment(x, y), Segment(z, anchor)}
                       : InsertionPair{Segment(x, z), Segment(y, anchor)};
    } else {
      const bool same = line.side(ws.point(x)) == anchor_side;
      ins = same ? InsertionPair{Segment(x, y), Segment(z, anchor)}
                 : InsertionPair{Segment(x, z), Segment(y, anchor)};
    }
    s = ws.flip_keeping(s, chain[i], normalized(ins),
                        tag(kLib, i == 0 ? "second" : "chain"), anchor);
    x = ws.segment(s).other(anchor);
  }
}

namespace {

constexpr std::string_view kRi = "outside_matching";

bool meets_hull(const Workspace& ws, const std::vector<Point>& hull, int slot) {
  const Segment& s = ws.segment(slot);
  return segment_meets_convex_interior(ws.point(s.a), ws.point(s.b), hull);
}

}  // namespace

void run_outside_matching(Workspace& ws) {
  const Instance& inst = ws.instance();
  const std::vector<Point> hull = inst.convex_points();
  const int t = int(inst.t_ids.size());
  const long n = ws.slot_count();
  const long limit = 64 * long(t + 1) * (t + 1) * (t + 1) * (n + 1) + 64;
  std::vector<Point> pts = inst.points;

  for (long round = 0;; ++round) {
    if (round > limit) {
      fallback(ws, "outside_matching_RI did not finish");
      return;
    }
    int lib = -1;
    for (int s : ws.slots()) {
      if (is_tt(ws, s) && ws.crossings(s) > t && meets_hull(ws, hull, s)) {
        lib = s;
        break;
      }
    }
    if (lib >= 0) {
      run_liberate_line(ws, lib);
      continue;
    }
    auto pick = first_pair(ws, [&](int a, int b) {
      return !is_cc(ws, a) || !is_cc(ws, b);
    });
    if (!pick) break;
    auto [s1, s2] = *pick;
    const Segment a = ws.segment(s1);
    const Segment b = ws.segment(s2);

    const bool tto1 = is_tt(ws, s1) && !meets_hull(ws, hull, s1);
    const bool tto2 = is_tt(ws, s2) && !meets_hull(ws, hull, s2);
    if (tto1 || tto2) {
      // Tangent lines from the T endpoints certify a decreasing line
      // potential.
      const Segment& tto = tto1 ? a : b;
      const Segment& other = tto1 ? b : a;
      const int o_t = ws.in_t(other.a) ? other.a : other.b;
      const int o_p = other.other(o_t);
      const CriticalLine cl =
          critical_tangent_line(hull, pts, tto.a, o_t, tto.b, o_p);
      const Segment& own = tto.has(cl.through) ? tto : other;
      const Segment& crossed = tto.has(cl.through) ? other : tto;
      const InsertionPair ins =
          icritical_choice(pts, own, crossed, cl.through, cl.line);
      ws.flip(s1, s2, ins, tag(kRi, "tto"));
      continue;
    }
    if (is_tt(ws, s1) || is_tt(ws, s2)) {
      const Segment& tti = is_tt(ws, s1) ? a : b;
      const Segment& other = is_tt(ws, s1) ? b : a;
      const OrientedLine l =
          OrientedLine::through(ws.point(tti.a), ws.point(tti.b));
      ws.flip(s1, s2, icritical_choice(pts, tti, other, tti.a, l),
              tag(kRi, "tti"));
      continue;
    }
    if (is_ct(ws, s1) && is_ct(ws, s2)) {
      const int qa = t_end(ws, s1), qb = t_end(ws, s2);
      const InsertionPair tt{Segment(qa, qb),
                             Segment(c_end(ws, s1), c_end(ws, s2))};
      ws.flip(s1, s2, prefer(ws, s1, s2, tt), tag(kRi, "ct-ct"));
      continue;
    }
    // CT x CC: keep the CT-segment nearest to the hull in direction v(q).
    const int ct = is_ct(ws, s1) ? s1 : s2;
    const int cc = ct == s1 ? s2 : s1;
    const int q = t_end(ws, ct);
    const int px = c_end(ws, ct);
    const Segment& c = ws.segment(cc);
    const int e1 = directional_eta(inst, Segment(q, c.a));
    const int e2 = directional_eta(inst, Segment(q, c.b));
    const int near = e1 <= e2 ? c.a : c.b;
    const InsertionPair ins{Segment(q, near), Segment(px, c.other(near))};
    ws.flip(s1, s2, prefer(ws, s1, s2, ins), tag(kRi, "ct-cc"));
  }
  // Only CC x CC crossings remain; flipping them cannot disturb the rest.
  convex_insertion(ws, tag(kRi, "cc"));
}

}  // namespace detail
}  // namespace untangle
