#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "untangle/errors.hpp"
#include "untangle/harness.hpp"

namespace untangle::harness {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) fail(ErrorKind::precondition, "empty range");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v;
  do {
    v = gen_();
  } while (v >= limit);
  return v % n;
}

double Rng::unit() { return double(gen_() >> 11) * 0x1.0p-53; }

namespace {

constexpr std::pair<Family, std::string_view> kFamilies[] = {
    {Family::random, "random"},
    {Family::stress_tour, "stress_tour"},
    {Family::crossed_segment, "crossed_segment"},
    {Family::separating_line, "separating_line"},
};

}  // namespace

std::string_view to_string(Family f) {
  for (auto [k, v] : kFamilies) {
    if (k == f) return v;
  }
  return "?";
}

Family parse_family(std::string_view s) {
  for (auto [k, v] : kFamilies) {
    if (v == s) return k;
  }
  fail(ErrorKind::load, "unknown family '" + std::string(s) + "'");
}

namespace {

constexpr int kAttempts = 200;

Point polar(double r, double theta) {
  return {0, std::llround(r * std::cos(theta)), std::llround(r * std::sin(theta)),
          Color::none};
}

// Consecutive points on the circle keep a visible turn after rounding.
Coord auto_radius(int k, Coord requested) {
  const double needed = 32.0 * double(k) * double(k);
  const double r = std::max(double(requested), needed);
  return Coord(std::min(r, double(kMaxCoord / 4)));
}

std::vector<Point> circle_points(Rng& rng, int k, Coord radius) {
  const double step = 2 * std::numbers::pi / k;
  const double phase = rng.unit() * step;
  std::vector<Point> pts;
  for (int i = 0; i < k; ++i) {
    pts.push_back(polar(double(radius), phase + (i + 0.1 + 0.8 * rng.unit()) * step));
  }
  return pts;
}

// Strict convex position; collinear triples elsewhere are rejected later by
// the full general-position check.
bool strictly_convex(const std::vector<Point>& pts) {
  std::vector<Point> tmp = pts;
  for (size_t i = 0; i < tmp.size(); ++i) tmp[i].id = int(i);
  return convex_position(tmp).convex;
}

enum class Where { inside, outside, above_below, anywhere };

Point place(Rng& rng, Where where, Coord radius) {
  const double r = double(radius);
  const double theta = rng.unit() * 2 * std::numbers::pi;
  switch (where) {
    case Where::inside:
      return polar(r * 0.5 * std::sqrt(rng.unit()), theta);
    case Where::outside:
      return polar(r * (1.1 + 0.8 * rng.unit()), theta);
    case Where::above_below: {
      const double y = r * (1.05 + 0.8 * rng.unit());
      return {0, std::llround(r * (3.6 * rng.unit() - 1.8)),
              std::llround(rng.below(2) ? y : -y), Color::none};
    }
    case Where::anywhere:
      return place(rng, rng.below(2) ? Where::inside : Where::outside, radius);
  }
  return {};
}

struct Layout {
  int c = 0;
  std::vector<Where> t;
};

Layout layout(const GeneratorSpec& spec, Rng& rng) {
  const int n = spec.n;
  int t_points = 0;
  std::vector<Where> where;
  switch (spec.geometry_class) {
    case GeometryClass::convex:
      break;
    case GeometryClass::one_T_point:
      where = {rng.below(2) ? Where::inside : Where::outside};
      break;
    case GeometryClass::two_T_outside:
      where = {Where::outside, Where::outside};
      break;
    case GeometryClass::two_T_inside:
      where = {Where::inside, Where::inside};
      break;
    case GeometryClass::one_in_one_out:
      where = {Where::inside, Where::outside};
      break;
    case GeometryClass::parallel_separated:
      where.assign(size_t(std::max(spec.t, 0)), Where::above_below);
      break;
    case GeometryClass::T_outside_hull:
      where.assign(size_t(std::max(spec.t, 0)), Where::outside);
      break;
    case GeometryClass::general:
      where.assign(size_t(std::max(spec.t, 0)), Where::anywhere);
      break;
  }
  t_points = int(where.size());
  int total = 0;
  switch (spec.property) {
    case Property::multigraph:
      total = std::max(4, n) + t_points;
      break;
    case Property::matching:
    case Property::redblue_matching:
      total = 2 * n;
      break;
    case Property::tour:
      total = n;
      break;
    case Property::tree:
      total = n + 1;
      break;
  }
  Layout out{total - t_points, std::move(where)};
  if (out.c < 4) {
    fail(ErrorKind::precondition,
         "spec leaves fewer than 4 convex points (n=" + std::to_string(n) + ")");
  }
  return out;
}

std::vector<Segment> segments_for(const GeneratorSpec& spec, Rng& rng,
                                  const std::vector<int>& c_ids,
                                  const std::vector<int>& t_ids,
                                  std::vector<Point>& pts) {
  std::vector<int> all(c_ids);
  all.insert(all.end(), t_ids.begin(), t_ids.end());
  std::sort(all.begin(), all.end());
  std::vector<Segment> segs;
  auto random_c = [&] { return c_ids[rng.below(c_ids.size())]; };
  switch (spec.property) {
    case Property::multigraph: {
      const int t_segs = t_ids.empty() ? 0 : std::clamp(spec.t, 0, spec.n);
      for (int i = 0; i < t_segs; ++i) {
        segs.emplace_back(t_ids[size_t(i) % t_ids.size()], random_c());
      }
      while (int(segs.size()) < spec.n) {
        const int a = random_c(), b = random_c();
        if (a != b) segs.emplace_back(a, b);
      }
      break;
    }
    case Property::matching:
      rng.shuffle(all);
      for (size_t i = 0; i + 1 < all.size(); i += 2) segs.emplace_back(all[i], all[i + 1]);
      break;
    case Property::redblue_matching: {
      rng.shuffle(all);
      const size_t half = all.size() / 2;
      for (size_t i = 0; i < all.size(); ++i) {
        pts[size_t(all[i])].color = i < half ? Color::red : Color::blue;
      }
      std::vector<int> blue(all.begin() + long(half), all.end());
      rng.shuffle(blue);
      for (size_t i = 0; i < half; ++i) segs.emplace_back(all[i], blue[i]);
      break;
    }
    case Property::tour:
      rng.shuffle(all);
      for (size_t i = 0; i < all.size(); ++i) {
        segs.emplace_back(all[i], all[(i + 1) % all.size()]);
      }
      break;
    case Property::tree:
      rng.shuffle(all);
      for (size_t i = 1; i < all.size(); ++i) {
        segs.emplace_back(all[i], all[rng.below(i)]);
      }
      break;
  }
  return segs;
}

Instance to_instance(const std::vector<Point>& pts, const std::vector<Segment>& segs,
                     const std::vector<int>& c_ids, const std::vector<int>& t_ids,
                     const GeneratorSpec& spec) {
  InstanceDocument doc;
  doc.points = pts;
  for (const Segment& s : segs) doc.segments.emplace_back(s.a, s.b);
  doc.property = std::string(to_string(spec.property));
  doc.geometry_class = std::string(to_string(spec.geometry_class));
  doc.convex_ids = c_ids;
  doc.t_ids = t_ids;
  return load_instance(doc);
}

Instance stress_tour(const GeneratorSpec& spec, Rng& rng) {
  const int k = spec.n | 1;
  if (k < 5) fail(ErrorKind::precondition, "stress family needs n >= 5");
  const Coord radius = auto_radius(k, spec.radius);
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::vector<Point> pts = circle_points(rng, k, radius);
    if (!strictly_convex(pts)) continue;
    for (int i = 0; i < k; ++i) pts[size_t(i)].id = i;
    std::vector<Segment> segs;
    const int step = (k - 1) / 2;
    for (int i = 0; i < k; ++i) segs.emplace_back(i, (i + step) % k);
    std::vector<int> c_ids(static_cast<size_t>(k));
    std::iota(c_ids.begin(), c_ids.end(), 0);
    GeneratorSpec s = spec;
    s.geometry_class = GeometryClass::convex;
    s.property = Property::tour;
    return to_instance(pts, segs, c_ids, {}, s);
  }
  fail(ErrorKind::precondition, "could not sample convex points");
}

// Uniformly random non-crossing perfect matching of positions 0..m-1 on a
// circle (m even), as index pairs.
std::vector<std::pair<int, int>> noncrossing_matching(Rng& rng, int m) {
  std::vector<std::pair<int, int>> out;
  std::vector<std::pair<int, int>> ranges{{0, m}};
  while (!ranges.empty()) {
    auto [lo, hi] = ranges.back();
    ranges.pop_back();
    if (hi - lo < 2) continue;
    const int mate = lo + 1 + 2 * int(rng.below(std::uint64_t(hi - lo) / 2));
    out.emplace_back(lo, mate);
    ranges.emplace_back(lo + 1, mate);
    ranges.emplace_back(mate + 1, hi);
  }
  return out;
}

Instance crossed_segment(const GeneratorSpec& spec, Rng& rng) {
  if (spec.n < 2) fail(ErrorKind::precondition, "crossed_segment needs n >= 2");
  const bool chord = spec.geometry_class == GeometryClass::convex;
  if (!chord && spec.geometry_class != GeometryClass::one_T_point) {
    fail(ErrorKind::precondition,
         "crossed_segment supports the convex and one_T_point classes");
  }
  // n - 1 matched chords, then s: either a chord or a T point to one more C point.
  const int k = 2 * (spec.n - 1) + (chord ? 2 : 1);
  const Coord radius = auto_radius(k, spec.radius);
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::vector<Point> pts = circle_points(rng, k, radius);
    if (!strictly_convex(pts)) continue;
    // Endpoints of s at random positions; the matched chords use the rest in
    // circular order, so they stay crossing-free.
    const int s1 = int(rng.below(std::uint64_t(k)));
    int s2 = -1;
    if (chord) {
      s2 = int((s1 + 1 + rng.below(std::uint64_t(k - 1))) % std::uint64_t(k));
    } else {
      pts.push_back(place(rng, Where::anywhere, radius));
    }
    std::vector<int> rest;
    for (int i = 1; i <= k; ++i) {
      const int v = (s1 + i) % k;
      if (v != s1 && v != s2) rest.push_back(v);
    }
    std::vector<Segment> segs;
    for (auto [a, b] : noncrossing_matching(rng, int(rest.size()))) {
      segs.emplace_back(rest[size_t(a)], rest[size_t(b)]);
    }
    segs.emplace_back(s1, chord ? s2 : k);
    for (size_t i = 0; i < pts.size(); ++i) pts[i].id = int(i);
    if (find_degeneracy(pts)) continue;
    std::vector<int> c_ids(static_cast<size_t>(k)), t_ids;
    std::iota(c_ids.begin(), c_ids.end(), 0);
    if (!chord) t_ids.push_back(k);
    GeneratorSpec s = spec;
    s.property = Property::matching;
    return to_instance(pts, segs, c_ids, t_ids, s);
  }
  fail(ErrorKind::precondition, "could not sample an instance in general position");
}

Instance separating_line(const GeneratorSpec& spec, Rng& rng) {
  if (spec.n < 2) fail(ErrorKind::precondition, "separating_line needs n >= 2");
  const int k = 2 * (spec.n - 1);
  const Coord radius = auto_radius(std::max(k, 4), spec.radius);
  const double r = double(radius);
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::vector<Point> pts = circle_points(rng, k, radius);
    if (k >= 3 && !strictly_convex(pts)) continue;
    // p and q beyond the circle, on a line passing within r/2 of the centre.
    const double theta = rng.unit() * 2 * std::numbers::pi;
    const double offset = (rng.unit() - 0.5) * r;
    const double nx = -std::sin(theta), ny = std::cos(theta);
    for (double along : {1.2 + 0.6 * rng.unit(), -(1.2 + 0.6 * rng.unit())}) {
      pts.push_back({0, std::llround(r * along * std::cos(theta) + offset * nx),
                     std::llround(r * along * std::sin(theta) + offset * ny),
                     Color::none});
    }
    std::vector<int> ids(static_cast<size_t>(k));
    std::iota(ids.begin(), ids.end(), 0);
    rng.shuffle(ids);
    std::vector<Segment> segs;
    for (size_t i = 0; i + 1 < ids.size(); i += 2) segs.emplace_back(ids[i], ids[i + 1]);
    segs.emplace_back(k, k + 1);
    for (size_t i = 0; i < pts.size(); ++i) pts[i].id = int(i);
    if (find_degeneracy(pts)) continue;
    std::vector<int> c_ids(static_cast<size_t>(k));
    std::iota(c_ids.begin(), c_ids.end(), 0);
    GeneratorSpec s = spec;
    s.geometry_class = GeometryClass::T_outside_hull;
    s.property = Property::matching;
    return to_instance(pts, segs, c_ids, {k, k + 1}, s);
  }
  fail(ErrorKind::precondition, "could not sample an instance in general position");
}

}  // namespace

Instance generate(const GeneratorSpec& spec) {
  Rng rng(spec.seed);
  if (spec.family == Family::stress_tour) return stress_tour(spec, rng);
  if (spec.family == Family::crossed_segment) return crossed_segment(spec, rng);
  if (spec.family == Family::separating_line) return separating_line(spec, rng);
  if (spec.n < 1) fail(ErrorKind::precondition, "n must be positive");
  const Layout lay = layout(spec, rng);
  const Coord radius = auto_radius(lay.c, spec.radius);
  const bool distinct_y = spec.geometry_class == GeometryClass::parallel_separated;

  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::vector<Point> c_pts = circle_points(rng, lay.c, radius);
    if (!strictly_convex(c_pts)) continue;
    std::vector<Point> pts = c_pts;
    bool placed = true;
    for (Where w : lay.t) {
      bool ok = false;
      for (int tries = 0; tries < kAttempts && !ok; ++tries) {
        Point p = place(rng, w, radius);
        ok = std::none_of(pts.begin(), pts.end(), [&](const Point& o) {
          return (o.x == p.x && o.y == p.y) || (distinct_y && o.y == p.y);
        });
        if (ok) pts.push_back(p);
      }
      placed = placed && ok;
    }
    if (!placed) continue;
    if (distinct_y) {
      std::set<Coord> ys;
      for (const Point& p : pts) ys.insert(p.y);
      if (ys.size() != pts.size()) continue;
    }
    // Random ids, so id order carries no geometric meaning.
    std::vector<int> ids(pts.size());
    for (size_t i = 0; i < ids.size(); ++i) ids[i] = int(i);
    rng.shuffle(ids);
    std::vector<Point> by_id(pts.size());
    std::vector<int> c_ids, t_ids;
    for (size_t i = 0; i < pts.size(); ++i) {
      Point p = pts[i];
      p.id = ids[i];
      by_id[size_t(p.id)] = p;
      (i < size_t(lay.c) ? c_ids : t_ids).push_back(p.id);
    }
    if (find_degeneracy(by_id)) continue;
    std::vector<Segment> segs = segments_for(spec, rng, c_ids, t_ids, by_id);
    std::sort(c_ids.begin(), c_ids.end());
    std::sort(t_ids.begin(), t_ids.end());
    return to_instance(by_id, segs, c_ids, t_ids, spec);
  }
  fail(ErrorKind::precondition, "could not sample an instance in general position");
}

}  // namespace untangle::harness
