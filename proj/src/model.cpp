#include "untangle/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "untangle/errors.hpp"
#include "untangle/union_find.hpp"

namespace untangle {
namespace {

constexpr std::array<std::pair<Property, std::string_view>, 5> kProperties{{
    {Property::multigraph, "multigraph"},
    {Property::matching, "matching"},
    {Property::redblue_matching, "redblue_matching"},
    {Property::tour, "tour"},
    {Property::tree, "tree"},
}};

constexpr std::array<std::pair<GeometryClass, std::string_view>, 8> kClasses{{
    {GeometryClass::convex, "convex"},
    {GeometryClass::one_T_point, "one_T_point"},
    {GeometryClass::two_T_outside, "two_T_outside"},
    {GeometryClass::two_T_inside, "two_T_inside"},
    {GeometryClass::one_in_one_out, "one_in_one_out"},
    {GeometryClass::parallel_separated, "parallel_separated"},
    {GeometryClass::T_outside_hull, "T_outside_hull"},
    {GeometryClass::general, "general"},
}};

std::string segment_text(const Segment& s) {
  std::ostringstream os;
  os << "[" << s.a << "," << s.b << "]";
  return os.str();
}

}  // namespace

std::string_view to_string(Property p) {
  for (auto [k, v] : kProperties) {
    if (k == p) return v;
  }
  return "?";
}

std::string_view to_string(GeometryClass g) {
  for (auto [k, v] : kClasses) {
    if (k == g) return v;
  }
  return "?";
}

Property parse_property(std::string_view s) {
  for (auto [k, v] : kProperties) {
    if (v == s) return k;
  }
  fail(ErrorKind::load, "unknown property '" + std::string(s) + "'");
}

GeometryClass parse_geometry_class(std::string_view s) {
  for (auto [k, v] : kClasses) {
    if (v == s) return k;
  }
  fail(ErrorKind::load, "unknown geometry class '" + std::string(s) + "'");
}

SegmentMultiset::SegmentMultiset(std::span<const Segment> segments) {
  for (const Segment& s : segments) add(s);
}

void SegmentMultiset::add(const Segment& s, int copies) {
  counts_[s] += copies;
  size_ += copies;
}

bool SegmentMultiset::remove(const Segment& s) {
  auto it = counts_.find(s);
  if (it == counts_.end()) return false;
  if (--it->second == 0) counts_.erase(it);
  --size_;
  return true;
}

int SegmentMultiset::count(const Segment& s) const {
  auto it = counts_.find(s);
  return it == counts_.end() ? 0 : it->second;
}

std::vector<Segment> SegmentMultiset::expanded() const {
  std::vector<Segment> out;
  out.reserve(static_cast<size_t>(size_));
  for (const auto& [s, c] : counts_) out.insert(out.end(), c, s);
  return out;
}

int Instance::t() const {
  int count = 0;
  for (const auto& [s, c] : segments.counts()) {
    if (in_t(s.a) || in_t(s.b)) count += c;
  }
  return count;
}

int Instance::t_degree_sum() const {
  int sum = 0;
  for (const auto& [s, c] : segments.counts()) {
    sum += c * (int(in_t(s.a)) + int(in_t(s.b)));
  }
  return sum;
}

bool Instance::in_t(int id) const {
  return id >= 0 && static_cast<size_t>(id) < is_t_.size() &&
         is_t_[static_cast<size_t>(id)];
}

int Instance::convex_rank(int id) const {
  if (id < 0 || static_cast<size_t>(id) >= rank_.size()) return -1;
  return rank_[static_cast<size_t>(id)];
}

std::vector<Point> Instance::convex_points() const {
  std::vector<Point> out;
  out.reserve(convex_ids.size());
  for (int id : convex_ids) out.push_back(point(id));
  return out;
}

void Instance::index() {
  rank_.assign(points.size(), -1);
  is_t_.assign(points.size(), 0);
  for (size_t i = 0; i < convex_ids.size(); ++i) {
    rank_[static_cast<size_t>(convex_ids[i])] = static_cast<int>(i);
  }
  for (int id : t_ids) is_t_[static_cast<size_t>(id)] = 1;
}

InsertionPair normalized(const InsertionPair& p) {
  return p[0] <= p[1] ? p : InsertionPair{p[1], p[0]};
}

std::array<InsertionPair, 2> reconnections(const Segment& s1,
                                           const Segment& s2) {
  return {normalized({Segment(s1.a, s2.a), Segment(s1.b, s2.b)}),
          normalized({Segment(s1.a, s2.b), Segment(s1.b, s2.a)})};
}

std::optional<std::array<int, 3>> find_degeneracy(
    std::span<const Point> points) {
  struct Dir {
    Coord dx, dy;
    int id;
  };
  std::vector<Dir> dirs;
  for (const Point& p : points) {
    dirs.clear();
    for (const Point& q : points) {
      if (q.id == p.id) continue;
      Coord dx = q.x - p.x, dy = q.y - p.y;
      if (dx == 0 && dy == 0) return std::array<int, 3>{p.id, q.id, q.id};
      Coord g = std::gcd(dx, dy);
      dx /= g;
      dy /= g;
      if (dx < 0 || (dx == 0 && dy < 0)) {
        dx = -dx;
        dy = -dy;
      }
      dirs.push_back({dx, dy, q.id});
    }
    std::sort(dirs.begin(), dirs.end(), [](const Dir& u, const Dir& v) {
      return u.dx != v.dx ? u.dx < v.dx : u.dy < v.dy;
    });
    for (size_t i = 1; i < dirs.size(); ++i) {
      if (dirs[i].dx == dirs[i - 1].dx && dirs[i].dy == dirs[i - 1].dy) {
        return std::array<int, 3>{p.id, dirs[i - 1].id, dirs[i].id};
      }
    }
  }
  return std::nullopt;
}

void check_property(std::span<const Point> points, const SegmentMultiset& s,
                    Property property) {
  const size_t np = points.size();
  std::vector<int> degree(np, 0);
  for (const auto& [seg, c] : s.counts()) {
    degree[static_cast<size_t>(seg.a)] += c;
    degree[static_cast<size_t>(seg.b)] += c;
  }
  auto connected_components = [&] {
    UnionFind uf(np);
    for (const auto& [seg, c] : s.counts()) uf.unite(seg.a, seg.b);
    return uf.components();
  };
  switch (property) {
    case Property::multigraph:
      return;
    case Property::matching:
    case Property::redblue_matching:
      for (size_t i = 0; i < np; ++i) {
        if (degree[i] > 1) fail(ErrorKind::load, "not a matching");
      }
      if (property == Property::redblue_matching) {
        for (const auto& [seg, c] : s.counts()) {
          Color ca = points[static_cast<size_t>(seg.a)].color;
          Color cb = points[static_cast<size_t>(seg.b)].color;
          if (ca == Color::none || cb == Color::none || ca == cb) {
            fail(ErrorKind::load, "not a red-blue matching: segment " +
                                      segment_text(seg));
          }
        }
      }
      return;
    case Property::tour:
      if (np < 3 || static_cast<size_t>(s.size()) != np) {
        fail(ErrorKind::load, "not a tour");
      }
      for (size_t i = 0; i < np; ++i) {
        if (degree[i] != 2) fail(ErrorKind::load, "not a tour");
      }
      if (connected_components() != 1) fail(ErrorKind::load, "not a tour");
      return;
    case Property::tree:
      if (np == 0 || static_cast<size_t>(s.size()) + 1 != np ||
          connected_components() != 1) {
        fail(ErrorKind::load, "not a tree");
      }
      return;
  }
}

bool property_holds(std::span<const Point> points, const SegmentMultiset& s,
                    Property property) {
  try {
    check_property(points, s, property);
    return true;
  } catch (const UntangleError&) {
    return false;
  }
}

bool satisfies_class(const Instance& inst, GeometryClass cls) {
  const std::vector<Point> hull = inst.convex_points();
  auto outside = [&](int id) {
    return strictly_outside_convex(hull, inst.point(id));
  };
  auto inside = [&](int id) {
    return strictly_inside_convex(hull, inst.point(id));
  };
  const auto& t = inst.t_ids;
  switch (cls) {
    case GeometryClass::convex:
      return t.empty();
    case GeometryClass::one_T_point:
      return t.size() == 1;
    case GeometryClass::two_T_outside:
      return t.size() == 2 && outside(t[0]) && outside(t[1]);
    case GeometryClass::two_T_inside:
      return t.size() == 2 && inside(t[0]) && inside(t[1]);
    case GeometryClass::one_in_one_out:
      return t.size() == 2 && ((inside(t[0]) && outside(t[1])) ||
                               (outside(t[0]) && inside(t[1])));
    case GeometryClass::parallel_separated: {
      if (inst.convex_ids.empty()) return false;
      Coord lo = inst.point(inst.convex_ids[0]).y, hi = lo;
      for (int id : inst.convex_ids) {
        lo = std::min(lo, inst.point(id).y);
        hi = std::max(hi, inst.point(id).y);
      }
      for (int id : t) {
        Coord y = inst.point(id).y;
        if (!(y > hi || y < lo)) return false;
      }
      std::set<Coord> ys;
      for (const Point& p : inst.points) ys.insert(p.y);
      return ys.size() == inst.points.size();
    }
    case GeometryClass::T_outside_hull:
      return std::all_of(t.begin(), t.end(), outside);
    case GeometryClass::general:
      return true;
  }
  return false;
}

GeometryClass infer_class(const Instance& inst) {
  for (GeometryClass cls :
       {GeometryClass::convex, GeometryClass::one_T_point,
        GeometryClass::two_T_outside, GeometryClass::two_T_inside,
        GeometryClass::one_in_one_out, GeometryClass::parallel_separated,
        GeometryClass::T_outside_hull}) {
    if (satisfies_class(inst, cls)) return cls;
  }
  return GeometryClass::general;
}

Instance load_instance(const InstanceDocument& doc) {
  Instance inst;
  inst.property = parse_property(doc.property);

  std::vector<Point> pts = doc.points;
  std::sort(pts.begin(), pts.end(),
            [](const Point& p, const Point& q) { return p.id < q.id; });
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i > 0 && pts[i].id == pts[i - 1].id) {
      fail(ErrorKind::load, "duplicate id " + std::to_string(pts[i].id));
    }
  }
  for (size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].id != static_cast<int>(i)) {
      fail(ErrorKind::load, "ids must be dense 0..N-1");
    }
    if (std::abs(pts[i].x) > kMaxCoord || std::abs(pts[i].y) > kMaxCoord) {
      fail(ErrorKind::load,
           "coordinate overflow at id " + std::to_string(pts[i].id));
    }
  }
  if (auto bad = find_degeneracy(pts)) {
    fail(ErrorKind::load, "general position violated by ids " +
                              std::to_string((*bad)[0]) + "," +
                              std::to_string((*bad)[1]) + "," +
                              std::to_string((*bad)[2]));
  }
  inst.points = std::move(pts);
  const int np = static_cast<int>(inst.points.size());

  for (auto [a, b] : doc.segments) {
    if (a < 0 || b < 0 || a >= np || b >= np) {
      fail(ErrorKind::load, "segment endpoint out of range");
    }
    if (a == b) fail(ErrorKind::load, "segment endpoints must differ");
    inst.segments.add(Segment(a, b));
  }

  std::vector<char> in_c(static_cast<size_t>(np), 0);
  auto mark = [&](const std::vector<int>& ids, char v) {
    for (int id : ids) {
      if (id < 0 || id >= np) fail(ErrorKind::load, "unknown id in subset");
      in_c[static_cast<size_t>(id)] = v;
    }
  };
  if (doc.convex_ids) {
    mark(*doc.convex_ids, 1);
    if (doc.t_ids) {
      std::set<int> c(doc.convex_ids->begin(), doc.convex_ids->end());
      std::set<int> t(doc.t_ids->begin(), doc.t_ids->end());
      if (c.size() + t.size() != static_cast<size_t>(np)) {
        fail(ErrorKind::load, "convex_ids and t_ids must partition the points");
      }
      for (int id : t) {
        if (c.count(id)) {
          fail(ErrorKind::load, "convex_ids and t_ids must be disjoint");
        }
      }
    }
  } else if (doc.t_ids) {
    std::fill(in_c.begin(), in_c.end(), 1);
    mark(*doc.t_ids, 0);
  } else {
    std::vector<Point> hull = convex_hull(inst.points);
    for (const Point& p : hull) in_c[static_cast<size_t>(p.id)] = 1;
  }
  std::vector<Point> c_points;
  for (int id = 0; id < np; ++id) {
    if (in_c[static_cast<size_t>(id)]) {
      c_points.push_back(inst.point(id));
    } else {
      inst.t_ids.push_back(id);
    }
  }
  ConvexPositionResult conv = convex_position(c_points);
  if (!conv.convex) fail(ErrorKind::load, "C is not in convex position");
  inst.convex_ids = conv.order;
  inst.index();

  check_property(inst.points, inst.segments, inst.property);

  GeometryClass inferred = infer_class(inst);
  if (doc.geometry_class) {
    GeometryClass claimed = parse_geometry_class(*doc.geometry_class);
    if (!satisfies_class(inst, claimed)) {
      fail(ErrorKind::load, "geometry_class '" + *doc.geometry_class +
                                "' inconsistent with coordinates");
    }
    inst.geometry_class = claimed;
  } else {
    inst.geometry_class = inferred;
  }
  return inst;
}

bool crossing(const Instance& inst, const Segment& s1, const Segment& s2) {
  return segments_cross(inst.point(s1.a), inst.point(s1.b), inst.point(s2.a),
                        inst.point(s2.b));
}

std::vector<SegmentPair> crossing_pairs(const Instance& inst) {
  std::vector<Segment> segs = inst.segments.expanded();
  std::vector<SegmentPair> out;
  for (size_t i = 0; i < segs.size(); ++i) {
    for (size_t j = i + 1; j < segs.size(); ++j) {
      if (crossing(inst, segs[i], segs[j])) out.emplace_back(segs[i], segs[j]);
    }
  }
  return out;
}

namespace {

bool insertion_legal(const Instance& inst, const Segment& s1,
                     const Segment& s2, const InsertionPair& ins) {
  switch (inst.property) {
    case Property::multigraph:
    case Property::matching:
      return true;
    case Property::redblue_matching:
      return inst.point(ins[0].a).color != inst.point(ins[0].b).color &&
             inst.point(ins[1].a).color != inst.point(ins[1].b).color;
    case Property::tour:
    case Property::tree: {
      SegmentMultiset after = inst.segments;
      after.remove(s1);
      after.remove(s2);
      after.add(ins[0]);
      after.add(ins[1]);
      return property_holds(inst.points, after, inst.property);
    }
  }
  return false;
}

}  // namespace

std::vector<InsertionPair> legal_insertions(const Instance& inst,
                                            const Segment& s1,
                                            const Segment& s2) {
  if (inst.segments.count(s1) == 0 || inst.segments.count(s2) == 0 ||
      (s1 == s2 && inst.segments.count(s1) < 2)) {
    fail(ErrorKind::flip, "segments not in S");
  }
  if (!crossing(inst, s1, s2)) fail(ErrorKind::flip, "segments do not cross");
  std::vector<InsertionPair> out;
  for (const InsertionPair& ins : reconnections(s1, s2)) {
    if (insertion_legal(inst, s1, s2, ins)) out.push_back(ins);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int compare_flip_length(const Instance& inst, const FlipEvent& e) {
  auto len2 = [&](const Segment& s) {
    return squared_length(inst.point(s.a), inst.point(s.b));
  };
  return compare_length_sums(len2(e.inserted[0]), len2(e.inserted[1]),
                             len2(e.removed[0]), len2(e.removed[1]));
}

Instance apply_flip(const Instance& inst, const FlipEvent& e) {
  const Segment& r1 = e.removed[0];
  const Segment& r2 = e.removed[1];
  int need1 = r1 == r2 ? 2 : 1;
  if (inst.segments.count(r1) < need1 || inst.segments.count(r2) < 1) {
    fail(ErrorKind::flip, "removed segment not present");
  }
  if (!crossing(inst, r1, r2)) {
    fail(ErrorKind::flip, "removed pair does not cross");
  }
  InsertionPair ins = normalized(e.inserted);
  auto options = reconnections(r1, r2);
  if (ins != options[0] && ins != options[1]) {
    fail(ErrorKind::flip,
         "inserted pair is not a 4-cycle on the removed endpoints");
  }
  if (crossing(inst, ins[0], ins[1])) {
    fail(ErrorKind::flip, "inserted pair crosses");
  }
  if (compare_flip_length(inst, e) >= 0) {
    fail(ErrorKind::flip, "total length does not decrease");
  }
  Instance out = inst;
  out.segments.remove(r1);
  out.segments.remove(r2);
  out.segments.add(ins[0]);
  out.segments.add(ins[1]);
  if (!property_holds(out.points, out.segments, out.property)) {
    fail(ErrorKind::flip, "property violated");
  }
  return out;
}

std::vector<Instance> split_components(const Instance& inst) {
  std::vector<Segment> segs = inst.segments.expanded();
  const size_t m = segs.size();
  UnionFind parts(m);
  auto endpoints_of = [&](size_t root) {
    std::set<int> pts;
    for (size_t i = 0; i < m; ++i) {
      if (parts.find(i) == root) {
        pts.insert(segs[i].a);
        pts.insert(segs[i].b);
      }
    }
    return std::vector<int>(pts.begin(), pts.end());
  };
  auto candidates_cross = [&](const std::vector<int>& p1,
                              const std::vector<int>& p2) {
    for (size_t i = 0; i < p1.size(); ++i) {
      for (size_t j = i + 1; j < p1.size(); ++j) {
        for (size_t k = 0; k < p2.size(); ++k) {
          for (size_t l = k + 1; l < p2.size(); ++l) {
            if (segments_cross(inst.point(p1[i]), inst.point(p1[j]),
                               inst.point(p2[k]), inst.point(p2[l]))) {
              return true;
            }
          }
        }
      }
    }
    return false;
  };
  bool merged = true;
  while (merged) {
    merged = false;
    std::vector<size_t> roots;
    for (size_t i = 0; i < m; ++i) {
      if (parts.find(i) == i) roots.push_back(i);
    }
    std::vector<std::vector<int>> pts;
    for (size_t r : roots) pts.push_back(endpoints_of(r));
    for (size_t i = 0; i < roots.size() && !merged; ++i) {
      for (size_t j = i + 1; j < roots.size() && !merged; ++j) {
        if (candidates_cross(pts[i], pts[j])) {
          parts.unite(roots[i], roots[j]);
          merged = true;
        }
      }
    }
  }
  std::map<size_t, Instance> by_root;
  for (size_t i = 0; i < m; ++i) {
    size_t r = parts.find(i);
    auto [it, fresh] = by_root.try_emplace(r);
    if (fresh) {
      it->second = inst;
      it->second.segments = SegmentMultiset{};
    }
    it->second.segments.add(segs[i]);
  }
  std::vector<Instance> out;
  for (auto& [r, part] : by_root) out.push_back(std::move(part));
  std::sort(out.begin(), out.end(), [](const Instance& x, const Instance& y) {
    return x.segments.counts().begin()->first <
           y.segments.counts().begin()->first;
  });
  return out;
}

bool is_uncrossable(const Instance& inst, const Segment& s) {
  const Point& a = inst.point(s.a);
  const Point& b = inst.point(s.b);
  const size_t np = inst.points.size();
  for (size_t i = 0; i < np; ++i) {
    for (size_t j = i + 1; j < np; ++j) {
      if (segments_cross(a, b, inst.points[i], inst.points[j])) return false;
    }
  }
  return true;
}

}  // namespace untangle
