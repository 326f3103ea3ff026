#include "strategy_support.hpp"

#include <algorithm>

#include "untangle/errors.hpp"

namespace untangle {

InsertionPair convex_insertion_choice(const Instance& inst, const Segment& s1,
                                      const Segment& s2) {
  std::array<int, 4> ids{s1.a, s1.b, s2.a, s2.b};
  std::array<int, 4> r{};
  for (size_t i = 0; i < 4; ++i) {
    r[i] = inst.convex_rank(ids[i]);
    if (r[i] < 0) fail(ErrorKind::precondition, "endpoint not in C");
  }
  std::array<size_t, 4> by_rank{0, 1, 2, 3};
  std::sort(by_rank.begin(), by_rank.end(),
            [&](size_t x, size_t y) { return r[x] < r[y]; });
  const int a = ids[by_rank[0]], c = ids[by_rank[1]];
  const int b = ids[by_rank[2]], d = ids[by_rank[3]];
  const int ra = r[by_rank[0]], rc = r[by_rank[1]];
  const int rb = r[by_rank[2]], rd = r[by_rank[3]];
  if (rc - ra <= rb - rc || rd - rb <= rb - rc) {
    return normalized({Segment(a, c), Segment(b, d)});
  }
  return normalized({Segment(a, d), Segment(c, b)});
}

InsertionPair vertical_insertion_choice(const std::vector<int>& vrank,
                                        const Segment& s1, const Segment& s2) {
  std::array<int, 4> ids{s1.a, s1.b, s2.a, s2.b};
  std::sort(ids.begin(), ids.end(), [&](int x, int y) {
    return vrank[size_t(x)] < vrank[size_t(y)];
  });
  return normalized({Segment(ids[0], ids[1]), Segment(ids[2], ids[3])});
}

namespace detail {

int active_t(const Workspace& ws) {
  int t = 0;
  for (int s : ws.slots()) t += t_degree(ws, s);
  return t;
}

std::vector<int> select(const Workspace& ws,
                        const std::function<bool(int)>& pred) {
  std::vector<int> out;
  for (int s : ws.slots()) {
    if (pred(s)) out.push_back(s);
  }
  return out;
}

std::optional<std::pair<int, int>> first_pair(
    const Workspace& ws, const std::function<bool(int, int)>& accept) {
  const std::vector<int> order = ws.slots();
  std::vector<int> pos(size_t(ws.slot_count()), -1);
  for (size_t i = 0; i < order.size(); ++i) pos[size_t(order[i])] = int(i);
  for (int s : order) {
    if (ws.crossings(s) == 0) continue;
    for (int o : ws.partners(s)) {
      if (pos[size_t(o)] > pos[size_t(s)] && accept(s, o)) {
        return std::make_pair(s, o);
      }
    }
  }
  return std::nullopt;
}

int slot_of(const Workspace& ws, const Segment& s) {
  for (int k : ws.all_slots()) {
    if (ws.segment(k) == s) return k;
  }
  return -1;
}

std::vector<int> convex_order(const Workspace& ws, std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<Point> pts;
  for (int id : ids) pts.push_back(ws.point(id));
  ConvexPositionResult res = convex_position(pts);
  if (!res.convex && !res.trivial) {
    fail(ErrorKind::precondition, "sub-problem is not in convex position");
  }
  return res.order;
}

int partner_by_distance(const Workspace& ws, int slot, int from, bool farthest,
                        const std::function<bool(int)>& accept) {
  const Segment& s = ws.segment(slot);
  const Point& a = ws.point(from);
  const Point& b = ws.point(s.other(from));
  int best = -1;
  SegmentParam best_t;
  for (int other : ws.partners(slot)) {
    if (accept && !accept(other)) continue;
    const Segment& o = ws.segment(other);
    SegmentParam t = crossing_param(a, b, ws.point(o.a), ws.point(o.b));
    if (best < 0) {
      best = other;
      best_t = t;
      continue;
    }
    const int cmp = compare_params(t, best_t);
    if (farthest ? cmp > 0 : cmp < 0) {
      best = other;
      best_t = t;
    }
  }
  return best;
}

InsertionPair first_legal(const Workspace& ws, int s1, int s2) {
  std::vector<InsertionPair> legal = ws.legal_insertions(s1, s2);
  if (legal.empty()) {
    fail(ErrorKind::flip, "no legal insertion for a crossing pair");
  }
  return legal.front();
}

InsertionPair prefer(const Workspace& ws, int s1, int s2,
                     const InsertionPair& wanted) {
  std::vector<InsertionPair> legal = ws.legal_insertions(s1, s2);
  if (legal.empty()) {
    fail(ErrorKind::flip, "no legal insertion for a crossing pair");
  }
  const InsertionPair w = normalized(wanted);
  for (const InsertionPair& ins : legal) {
    if (ins == w) return ins;
  }
  return legal.front();
}

std::string tag(std::string_view base, std::string_view step) {
  std::string out(base);
  out += '/';
  out += step;
  return out;
}

void baseline(Workspace& ws, std::string_view t) {
  while (auto pair = ws.first_crossing_pair()) {
    auto [s1, s2] = *pair;
    ws.flip(s1, s2, first_legal(ws, s1, s2), std::string(t));
  }
}

void fallback(Workspace& ws, const std::string& why) {
  if (ws.crossing_free()) return;
  ws.note("fallback to baseline: " + why);
  baseline(ws, "fallback");
}

void convex_removal(Workspace& ws, std::span<const int> order,
                    std::string_view base) {
  const size_t np = ws.instance().points.size();
  std::vector<int> rank(np, -1);
  for (size_t r = 0; r < order.size(); ++r) rank[size_t(order[r])] = int(r);
  const std::string flip_tag = tag(base, "halve");

  std::vector<char> mark(np);
  std::vector<int> prefix(order.size() + 1);
  while (!ws.crossing_free()) {
    const std::vector<int> active = ws.slots();
    std::fill(mark.begin(), mark.end(), 0);
    for (int s : active) {
      if (ws.crossings(s) == 0) continue;
      mark[size_t(ws.segment(s).a)] = 1;
      mark[size_t(ws.segment(s).b)] = 1;
    }
    for (size_t r = 0; r < order.size(); ++r) {
      prefix[r + 1] = prefix[r] + mark[size_t(order[r])];
    }

    int best = -1, best_k = 0, best_lo = 0, best_hi = 0;
    for (int s : active) {
      if (ws.crossings(s) == 0) continue;
      int lo = rank[size_t(ws.segment(s).a)], hi = rank[size_t(ws.segment(s).b)];
      if (lo < 0 || hi < 0) {
        fail(ErrorKind::precondition, "endpoint outside the convex sub-problem");
      }
      if (lo > hi) std::swap(lo, hi);
      const int k = prefix[size_t(hi)] - prefix[size_t(lo) + 1];
      if (best < 0 || k < best_k) {
        best = s;
        best_k = k;
        best_lo = lo;
        best_hi = hi;
      }
    }

    const int i = (best_k + 1) / 2;
    int qi = -1;
    for (int r = best_lo + 1, seen = 0; r < best_hi; ++r) {
      if (mark[size_t(order[size_t(r)])] && ++seen == i) {
        qi = order[size_t(r)];
        break;
      }
    }
    int partner = -1;
    for (int o : ws.partners(best)) {
      if (qi >= 0 && ws.segment(o).has(qi)) {
        partner = o;
        break;
      }
    }
    if (partner < 0) {
      fail(ErrorKind::precondition,
           "no segment at the halving point crosses the minimum-depth segment");
    }
    const int pa = order[size_t(best_lo)], pb = order[size_t(best_hi)];
    const int pc = ws.segment(partner).other(qi);
    const InsertionPair near{Segment(qi, pa), Segment(pc, pb)};
    ws.flip(best, partner, prefer(ws, best, partner, near), flip_tag);
  }
}

void convex_insertion(Workspace& ws, std::string_view base) {
  const std::string flip_tag = tag(base, "depth-product");
  while (auto pair = ws.first_crossing_pair()) {
    auto [s1, s2] = *pair;
    ws.flip(s1, s2,
            convex_insertion_choice(ws.instance(), ws.segment(s1),
                                    ws.segment(s2)),
            flip_tag);
  }
}

int farthest_first(Workspace& ws, int slot, int q, std::string_view base,
                   const std::function<bool(int)>& keep_going) {
  const std::string flip_tag = tag(base, "farthest");
  while (ws.crossings(slot) > 0) {
    const int other = partner_by_distance(ws, slot, q, true);
    if (keep_going && !keep_going(other)) break;
    slot = ws.flip_keeping(slot, other, first_legal(ws, slot, other), flip_tag,
                           q);
  }
  return slot;
}

}  // namespace detail
}  // namespace untangle
