// Removal-only untangling with at most two points outside the convex hull of
// C. Recursive on the sum t of T-degrees: drop one T-segment and recurse, then
// look for a crossing-free line that splits the T-segments into strictly
// smaller sub-problems, creating one with a few flips when none exists.

#include <algorithm>
#include <climits>

#include "strategy_support.hpp"
#include "untangle/errors.hpp"

namespace untangle::detail {
namespace {

constexpr std::string_view kTag = "two_outside";

class TwoOutside {
 public:
  TwoOutside(Workspace& ws, int t_cap)
      : ws_(ws), hull_(ws.instance().convex_points()), t_cap_(t_cap) {}

  void solve(const std::vector<int>& slots, int parent_t, int depth) {
    ActiveScope scope(ws_, slots);
    if (ws_.crossing_free()) return;
    const int t = active_t(ws_);
    if (t >= parent_t) {
      ws_.note("two_outside: recursion parameter did not decrease (" +
               std::to_string(parent_t) + " -> " + std::to_string(t) + ")");
    }
    if (depth > 2 * t_cap_ + 4) {
      fail(ErrorKind::precondition, "recursion-depth cap exceeded");
    }
    if (t == 0) {
      convex_removal(ws_, ws_.instance().convex_ids, tag(kTag, "base"));
      return;
    }

    // Untangle everything but one T-segment first.
    const std::vector<int> active = ws_.slots();
    const auto first_t = std::find_if(active.begin(), active.end(),
                                      [&](int s) { return !is_cc(ws_, s); });
    std::vector<int> rest(active.begin(), active.end());
    rest.erase(rest.begin() + (first_t - active.begin()));
    solve(rest, t, depth + 1);

    std::vector<OrientedLine> hints;
    const int limit = 4 * ws_.slot_count() + 16;
    for (int round = 0; !ws_.crossing_free(); ++round) {
      if (round > limit) {
        fallback(ws_, "two_outside: no progress");
        return;
      }
      if (split(t, hints, depth)) return;
      if (drop_uncrossable(t, depth)) return;

      const int s = carrier();
      if (s < 0) {
        fallback(ws_, "two_outside: crossings not on a single segment");
        return;
      }
      if (is_tt(ws_, s)) {
        // The CC-segment crossed by s turns into a splitter after one flip.
        const int other = ws_.partners(s).front();
        hint(hints, s);
        hint(hints, other);
        ws_.flip(s, other, first_legal(ws_, s, other), tag(kTag, "tt-cc"));
        continue;
      }
      if (is_cc(ws_, s)) {
        fallback(ws_, "two_outside: crossings carried by a CC-segment");
        return;
      }
      const int q = t_end(ws_, s);
      const int far = farthest_first(ws_, s, q, tag(kTag, "ct"),
                                     [&](int o) { return is_cc(ws_, o); });
      if (ws_.crossings(far) == 0) continue;
      const int other = partner_by_distance(ws_, far, q, true);
      hint(hints, far);
      hint(hints, other);
      auto [n1, n2] =
          ws_.flip(far, other, first_legal(ws_, far, other), tag(kTag, "ct-ct"));
      const int tt = is_tt(ws_, n1) ? n1 : is_tt(ws_, n2) ? n2 : -1;
      if (tt < 0 || ws_.crossings(tt) == 0) continue;
      const int pp = ws_.partners(tt).front();
      hint(hints, pp);
      auto [m1, m2] =
          ws_.flip(tt, pp, first_legal(ws_, tt, pp), tag(kTag, "tt-any"));
      restrict_to_quadrilateral(t, hints, depth);
      (void)m1;
      (void)m2;
    }
  }

 private:
  void hint(std::vector<OrientedLine>& hints, int slot) {
    const Segment& s = ws_.segment(slot);
    hints.push_back(OrientedLine::through(ws_.point(s.a), ws_.point(s.b)));
  }

  // The slot on which every active crossing lies, preferring T-segments.
  int carrier() const {
    int found = -1;
    for (int s : ws_.slots()) {
      if (ws_.crossings(s) != ws_.total_crossings()) continue;
      if (found < 0 || (is_cc(ws_, found) && !is_cc(ws_, s))) found = s;
    }
    return found;
  }

  bool line_crossed(const OrientedLine& l) const {
    for (int s : ws_.slots()) {
      const Segment& seg = ws_.segment(s);
      if (line_crosses_segment(l, ws_.point(seg.a), ws_.point(seg.b))) {
        return true;
      }
    }
    return false;
  }

  // Looks for a crossing-free line that contains a T-segment or has
  // T-segments on both sides, and solves each side recursively.
  bool split(int t, const std::vector<OrientedLine>& hints, int depth) {
    std::vector<OrientedLine> lines = hints;
    for (int s : ws_.slots()) {
      const Segment& seg = ws_.segment(s);
      lines.push_back(OrientedLine::through(ws_.point(seg.a), ws_.point(seg.b)));
    }
    for (const OrientedLine& l : lines) {
      std::vector<int> plus, minus;
      int t_plus = 0, t_minus = 0, t_on = 0;
      bool crossed = false;
      for (int s : ws_.slots()) {
        const Segment& seg = ws_.segment(s);
        const int sa = int(l.side(ws_.point(seg.a)));
        const int sb = int(l.side(ws_.point(seg.b)));
        if (sa * sb < 0) {
          crossed = true;
          break;
        }
        const int side = sa != 0 ? sa : sb;
        const int td = t_degree(ws_, s);
        if (side > 0) {
          plus.push_back(s);
          t_plus += td;
        } else if (side < 0) {
          minus.push_back(s);
          t_minus += td;
        } else {
          t_on += td;
        }
      }
      if (crossed) continue;
      if (t_on == 0 && (t_plus == 0 || t_minus == 0)) continue;
      if (t_plus + t_minus > t || t_plus >= t || t_minus >= t) {
        ws_.note("two_outside: invalid split (" + std::to_string(t_plus) +
                 " + " + std::to_string(t_minus) + " > " + std::to_string(t) +
                 ")");
        continue;
      }
      solve(plus, t, depth + 1);
      solve(minus, t, depth + 1);
      return true;
    }
    return false;
  }

  // Crossing-free T-segments that no flip can ever cross are set aside and
  // the rest is solved with a smaller t.
  bool drop_uncrossable(int t, int depth) {
    const Instance& inst = ws_.instance();
    const std::vector<int> active = ws_.slots();
    int drop = -1;
    for (int s : active) {
      if (!is_tt(ws_, s) || ws_.crossings(s) > 0) continue;
      const Segment& seg = ws_.segment(s);
      const Point& a = ws_.point(seg.a);
      const Point& b = ws_.point(seg.b);
      if (segment_meets_convex_interior(a, b, hull_)) continue;
      if (line_crossed(OrientedLine::through(a, b))) {
        drop = s;
        break;
      }
    }
    if (drop < 0 && inst.t_ids.size() == 2 &&
        segment_meets_convex_interior(ws_.point(inst.t_ids[0]),
                                      ws_.point(inst.t_ids[1]), hull_)) {
      for (int s : active) {
        if (!is_ct(ws_, s) || ws_.crossings(s) > 0) continue;
        const Segment& seg = ws_.segment(s);
        if (!segment_meets_convex_interior(ws_.point(seg.a), ws_.point(seg.b),
                                           hull_)) {
          drop = s;
          break;
        }
      }
    }
    if (drop < 0) return false;
    if (!is_uncrossable(inst, ws_.segment(drop))) {
      ws_.note("two_outside: dropped segment is crossable");
    }
    std::vector<int> rest;
    for (int s : active) {
      if (s != drop) rest.push_back(s);
    }
    solve(rest, t, depth + 1);
    return true;
  }

  // After qq' was inserted and flipped, only segments inside the quadrilateral
  // q p_lower q' p_upper can still cross; the line of the last CC-segment
  // then splits them.
  void restrict_to_quadrilateral(int t, const std::vector<OrientedLine>& hints,
                                 int depth) {
    const Instance& inst = ws_.instance();
    if (inst.t_ids.size() != 2) return;
    const Point& q = ws_.point(inst.t_ids[0]);
    const Point& q2 = ws_.point(inst.t_ids[1]);
    int upper = -1, lower = -1;
    i128 du = 0, dl = 0;
    for (int s : ws_.slots()) {
      if (!is_ct(ws_, s)) continue;
      const Segment& seg = ws_.segment(s);
      if (!segment_meets_convex_interior(ws_.point(seg.a), ws_.point(seg.b),
                                         hull_)) {
        continue;
      }
      const int p = c_end(ws_, s);
      const i128 c = cross(q, q2, ws_.point(p));
      const i128 dist = c < 0 ? -c : c;
      if (c > 0 && (upper < 0 || dist < du)) {
        upper = p;
        du = dist;
      } else if (c < 0 && (lower < 0 || dist < dl)) {
        lower = p;
        dl = dist;
      }
    }
    if (upper < 0 || lower < 0) {
      split(t, hints, depth);
      return;
    }
    // Counterclockwise: q, p_lower, q', p_upper.
    const std::array<Point, 4> quad{q, ws_.point(lower), q2, ws_.point(upper)};
    auto inside = [&](const Point& p) {
      for (size_t i = 0; i < 4; ++i) {
        if (orient(quad[i], quad[(i + 1) % 4], p) < 0) return false;
      }
      return true;
    };
    std::vector<int> keep;
    for (int s : ws_.slots()) {
      const Segment& seg = ws_.segment(s);
      if (inside(ws_.point(seg.a)) && inside(ws_.point(seg.b))) {
        keep.push_back(s);
      } else if (ws_.crossings(s) > 0) {
        ws_.note("two_outside: crossing segment outside the quadrilateral");
        split(t, hints, depth);
        return;
      }
    }
    ActiveScope quad_scope(ws_, keep);
    if (!split(t, hints, depth)) {
      ws_.note("two_outside: quadrilateral without splitter");
    }
  }

  Workspace& ws_;
  std::vector<Point> hull_;
  int t_cap_;
};

}  // namespace

void run_two_outside_removal(Workspace& ws, int t_cap) {
  TwoOutside solver(ws, t_cap);
  solver.solve(ws.all_slots(), INT_MAX, 0);
  fallback(ws, "two_outside_removal left crossings");
}

}  // namespace untangle::detail
