#include "untangle/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "untangle/errors.hpp"

namespace untangle::oracle {
namespace {

using boost::multiprecision::cpp_int;
using Edge = std::pair<int, int>;
using State = std::vector<Edge>;  // sorted, repeated for multiplicity

Edge edge(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

struct Geometry {
  std::span<const Point> pts;

  int sign(int a, int b, int c) const {
    const Point& p = pts[size_t(a)];
    const Point& q = pts[size_t(b)];
    const Point& r = pts[size_t(c)];
    cpp_int d = (cpp_int(q.x) - p.x) * (cpp_int(r.y) - p.y) -
                (cpp_int(q.y) - p.y) * (cpp_int(r.x) - p.x);
    return d > 0 ? 1 : d < 0 ? -1 : 0;
  }

  // Open segments share exactly one point; inputs are in general position.
  bool cross(Edge s, Edge t) const {
    if (s.first == t.first || s.first == t.second || s.second == t.first ||
        s.second == t.second) {
      return false;
    }
    return sign(s.first, s.second, t.first) * sign(s.first, s.second, t.second) <
               0 &&
           sign(t.first, t.second, s.first) * sign(t.first, t.second, s.second) <
               0;
  }

  cpp_int len2(Edge s) const {
    const Point& p = pts[size_t(s.first)];
    const Point& q = pts[size_t(s.second)];
    cpp_int dx = cpp_int(q.x) - p.x, dy = cpp_int(q.y) - p.y;
    return dx * dx + dy * dy;
  }

  // Sign of (sqrt(a) + sqrt(b)) - (sqrt(c) + sqrt(d)).
  static int compare_root_sums(const cpp_int& a, const cpp_int& b,
                               const cpp_int& c, const cpp_int& d) {
    // Squaring both sides: a + b + 2 sqrt(ab) vs c + d + 2 sqrt(cd), i.e.
    // D + sqrt(v) vs sqrt(u) with D = a + b - c - d, v = 4ab, u = 4cd.
    const cpp_int D = a + b - c - d;
    const cpp_int v = 4 * a * b;
    const cpp_int u = 4 * c * d;
    if (D >= 0) {
      const cpp_int w = u - D * D - v;  // compare 2 D sqrt(v) with w
      if (w < 0) return 1;
      const cpp_int lhs = 4 * D * D * v, rhs = w * w;
      return lhs > rhs ? 1 : lhs < rhs ? -1 : 0;
    }
    if (v < D * D) return -1;
    const cpp_int w = D * D + v - u;  // compare w with 2 |D| sqrt(v)
    if (w < 0) return -1;
    const cpp_int lhs = w * w, rhs = 4 * D * D * v;
    return lhs > rhs ? 1 : lhs < rhs ? -1 : 0;
  }
};

int find(std::vector<int>& parent, int x) {
  while (parent[size_t(x)] != x) {
    parent[size_t(x)] = parent[size_t(parent[size_t(x)])];
    x = parent[size_t(x)];
  }
  return x;
}

bool property_ok(std::span<const Point> pts, const State& s, Property prop) {
  const size_t np = pts.size();
  std::vector<int> deg(np, 0);
  for (auto [a, b] : s) {
    ++deg[size_t(a)];
    ++deg[size_t(b)];
  }
  auto components = [&] {
    std::vector<int> parent(np);
    std::iota(parent.begin(), parent.end(), 0);
    size_t comps = np;
    for (auto [a, b] : s) {
      const int ra = find(parent, a), rb = find(parent, b);
      if (ra != rb) {
        parent[size_t(ra)] = rb;
        --comps;
      }
    }
    return comps;
  };
  switch (prop) {
    case Property::multigraph:
      return true;
    case Property::matching:
      return std::all_of(deg.begin(), deg.end(), [](int d) { return d <= 1; });
    case Property::redblue_matching:
      if (!std::all_of(deg.begin(), deg.end(), [](int d) { return d <= 1; })) {
        return false;
      }
      return std::all_of(s.begin(), s.end(), [&](Edge e) {
        const Color ca = pts[size_t(e.first)].color;
        const Color cb = pts[size_t(e.second)].color;
        return ca != Color::none && cb != Color::none && ca != cb;
      });
    case Property::tour:
      return np >= 3 && s.size() == np &&
             std::all_of(deg.begin(), deg.end(), [](int d) { return d == 2; }) &&
             components() == 1;
    case Property::tree:
      return np > 0 && s.size() + 1 == np && components() == 1;
  }
  return false;
}

State state_of(const Instance& inst) {
  State s;
  for (const auto& [seg, c] : inst.segments.counts()) {
    for (int i = 0; i < c; ++i) s.push_back(edge(seg.a, seg.b));
  }
  std::sort(s.begin(), s.end());
  return s;
}

bool crossing_free(const Geometry& g, const State& s) {
  for (size_t i = 0; i < s.size(); ++i) {
    for (size_t j = i + 1; j < s.size(); ++j) {
      if (g.cross(s[i], s[j])) return false;
    }
  }
  return true;
}

// Removes one copy of e; false when absent.
bool take(State& s, Edge e) {
  auto it = std::lower_bound(s.begin(), s.end(), e);
  if (it == s.end() || *it != e) return false;
  s.erase(it);
  return true;
}

void put(State& s, Edge e) { s.insert(std::upper_bound(s.begin(), s.end(), e), e); }

}  // namespace

std::string Verdict::to_string() const {
  if (valid) return "valid";
  return "invalid: " + reason + " at " + std::to_string(index);
}

Verdict validate(const Instance& initial, std::span<const FlipEvent> events,
                 bool require_crossing_free) {
  const Geometry g{initial.points};
  State s = state_of(initial);
  auto bad = [](size_t i, std::string why) {
    return Verdict{false, i, std::move(why)};
  };
  for (size_t i = 0; i < events.size(); ++i) {
    const FlipEvent& e = events[i];
    const Edge r1 = edge(e.removed[0].a, e.removed[0].b);
    const Edge r2 = edge(e.removed[1].a, e.removed[1].b);
    const Edge i1 = edge(e.inserted[0].a, e.inserted[0].b);
    const Edge i2 = edge(e.inserted[1].a, e.inserted[1].b);
    State next = s;
    if (!take(next, r1) || !take(next, r2)) return bad(i, "removed segment missing");
    if (!g.cross(r1, r2)) return bad(i, "removed segments do not cross");
    std::multiset<int> before{r1.first, r1.second, r2.first, r2.second};
    std::multiset<int> after{i1.first, i1.second, i2.first, i2.second};
    if (before != after || before.size() != 4 ||
        std::set<int>(before.begin(), before.end()).size() != 4) {
      return bad(i, "inserted endpoints differ from removed endpoints");
    }
    // A 4-cycle alternates removed and inserted edges: each inserted segment
    // joins one endpoint of r1 to one endpoint of r2.
    auto joins = [&](Edge x) {
      const bool a1 = x.first == r1.first || x.first == r1.second;
      const bool b1 = x.second == r1.first || x.second == r1.second;
      return a1 != b1;
    };
    if (!joins(i1) || !joins(i2)) return bad(i, "inserted pair is not a 4-cycle");
    if (g.cross(i1, i2)) return bad(i, "inserted segments cross");
    if (Geometry::compare_root_sums(g.len2(i1), g.len2(i2), g.len2(r1),
                                    g.len2(r2)) >= 0) {
      return bad(i, "length not decreased");
    }
    put(next, i1);
    put(next, i2);
    if (!property_ok(initial.points, next, initial.property)) {
      return bad(i, "property lost");
    }
    s = std::move(next);
  }
  if (require_crossing_free && !crossing_free(g, s)) {
    return bad(events.size(), "final state not crossing-free");
  }
  return {};
}

Verdict validate_trace(const UntangleTrace& trace) {
  const bool fragment = trace.strategy == StrategyId::farthest_first ||
                        trace.strategy == StrategyId::liberate_line;
  return validate(trace.initial, trace.events, !fragment);
}

SearchResult min_flips_bfs(const Instance& inst, std::size_t cap) {
  if (inst.n() > kMaxBfsSegments) {
    fail(ErrorKind::precondition, "exhaustive search needs n <= " +
                                      std::to_string(kMaxBfsSegments));
  }
  const Geometry g{inst.points};
  SearchResult out;
  std::map<State, int> dist;
  std::deque<State> queue;
  State start = state_of(inst);
  dist.emplace(start, 0);
  queue.push_back(std::move(start));
  while (!queue.empty()) {
    State s = std::move(queue.front());
    queue.pop_front();
    ++out.states;
    const int d = dist.at(s);
    if (crossing_free(g, s)) {
      out.flips = d;
      return out;
    }
    if (out.states > cap) return out;
    for (size_t i = 0; i < s.size(); ++i) {
      for (size_t j = i + 1; j < s.size(); ++j) {
        if (!g.cross(s[i], s[j])) continue;
        const auto [a, b] = s[i];
        const auto [c, e] = s[j];
        for (const auto& [x, y] :
             {std::pair{edge(a, c), edge(b, e)}, {edge(a, e), edge(b, c)}}) {
          if (g.cross(x, y)) continue;
          State next = s;
          next.erase(next.begin() + long(j));
          next.erase(next.begin() + long(i));
          put(next, x);
          put(next, y);
          if (!property_ok(inst.points, next, inst.property)) continue;
          if (dist.emplace(next, d + 1).second) queue.push_back(std::move(next));
        }
      }
    }
  }
  return out;
}

}  // namespace untangle::oracle
