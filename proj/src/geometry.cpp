#include "untangle/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "untangle/errors.hpp"

namespace untangle {
namespace {

using boost::multiprecision::cpp_int;

int sign_of(i128 v) { return (v > 0) - (v < 0); }
int sign_of(const i256& v) { return (v > 0) - (v < 0); }
int sign_of(const cpp_int& v) { return (v > 0) - (v < 0); }

i128 cross_vec(i128 ux, i128 uy, i128 vx, i128 vy) { return ux * vy - uy * vx; }

cpp_int to_big(i128 v) {
  bool neg = v < 0;
  unsigned __int128 mag = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                              : static_cast<unsigned __int128>(v);
  cpp_int out = static_cast<std::uint64_t>(mag >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(mag);
  return neg ? cpp_int(-out) : out;
}

i256 to_wide(i128 v) {
  bool neg = v < 0;
  unsigned __int128 mag = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                              : static_cast<unsigned __int128>(v);
  i256 out = static_cast<std::uint64_t>(mag >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(mag);
  return neg ? i256(-out) : out;
}

// Fraction with positive denominator used for parameter bounds.
struct Bound {
  i128 num;
  i128 den;
  bool strict;
};

int compare_fractions(i128 n1, i128 d1, i128 n2, i128 d2) {
  return sign_of(to_wide(n1) * to_wide(d2) - to_wide(n2) * to_wide(d1));
}

}  // namespace

i128 cross(const Point& a, const Point& b, const Point& c) {
  return cross_vec(i128{b.x} - a.x, i128{b.y} - a.y, i128{c.x} - a.x,
                   i128{c.y} - a.y);
}

int orient(const Point& a, const Point& b, const Point& c) {
  return sign_of(cross(a, b, c));
}

bool segments_cross(const Point& a, const Point& b, const Point& c,
                    const Point& d) {
  if (a.id == c.id || a.id == d.id || b.id == c.id || b.id == d.id) {
    return false;
  }
  return orient(a, b, c) * orient(a, b, d) < 0 &&
         orient(c, d, a) * orient(c, d, b) < 0;
}

i128 squared_length(const Point& a, const Point& b) {
  i128 dx = i128{b.x} - a.x;
  i128 dy = i128{b.y} - a.y;
  return dx * dx + dy * dy;
}

OrientedLine::OrientedLine(Coord ax, Coord ay, Coord dx, Coord dy)
    : ax_(ax), ay_(ay) {
  if (dx == 0 && dy == 0) {
    fail(ErrorKind::geometry, "line direction must be non-zero");
  }
  Coord g = std::gcd(dx, dy);
  dx /= g;
  dy /= g;
  if (dx < 0 || (dx == 0 && dy < 0)) {
    dx = -dx;
    dy = -dy;
  }
  dx_ = dx;
  dy_ = dy;
}

OrientedLine OrientedLine::through(const Point& p, const Point& q) {
  return OrientedLine(p.x, p.y, q.x - p.x, q.y - p.y);
}

i128 OrientedLine::signed_offset(const Point& p) const {
  return cross_vec(dx_, dy_, i128{p.x} - ax_, i128{p.y} - ay_);
}

Side OrientedLine::side(const Point& p) const {
  return static_cast<Side>(sign_of(signed_offset(p)));
}

bool operator==(const OrientedLine& l, const OrientedLine& m) {
  return l.dx_ == m.dx_ && l.dy_ == m.dy_ &&
         cross_vec(l.dx_, l.dy_, i128{m.ax_} - l.ax_, i128{m.ay_} - l.ay_) == 0;
}

bool line_crosses_segment(const OrientedLine& l, const Point& a,
                          const Point& b) {
  return static_cast<int>(l.side(a)) * static_cast<int>(l.side(b)) < 0;
}

std::vector<Point> convex_hull(std::span<const Point> points) {
  std::vector<Point> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Point& p, const Point& q) {
    return p.x != q.x ? p.x < q.x : p.y < q.y;
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point& p, const Point& q) {
                          return p.x == q.x && p.y == q.y;
                        }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Point& p = pts[i];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  auto start = std::min_element(hull.begin(), hull.end(),
                                [](const Point& p, const Point& q) {
                                  return p.y != q.y ? p.y < q.y : p.x < q.x;
                                });
  std::rotate(hull.begin(), start, hull.end());
  return hull;
}

ConvexPositionResult convex_position(std::span<const Point> points) {
  ConvexPositionResult out;
  if (points.size() < 3) {
    out.convex = true;
    out.trivial = true;
    for (const Point& p : points) out.order.push_back(p.id);
    return out;
  }
  std::vector<Point> hull = convex_hull(points);
  out.convex = hull.size() == points.size();
  for (const Point& p : hull) out.order.push_back(p.id);
  return out;
}

bool strictly_inside_convex(std::span<const Point> hull, const Point& p) {
  if (hull.size() < 3) return false;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (cross(hull[i], hull[(i + 1) % hull.size()], p) <= 0) return false;
  }
  return true;
}

bool strictly_outside_convex(std::span<const Point> hull, const Point& p) {
  if (hull.size() < 3) return true;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (cross(hull[i], hull[(i + 1) % hull.size()], p) < 0) return true;
  }
  return false;
}

std::pair<Point, Point> tangent_vertices(const Point& q,
                                         std::span<const Point> hull) {
  if (!strictly_outside_convex(hull, q)) {
    fail(ErrorKind::geometry, "not exterior");
  }
  const std::size_t h = hull.size();
  std::optional<Point> left_of, right_of;
  for (std::size_t i = 0; i < h; ++i) {
    const Point& v = hull[i];
    if (h == 1) {
      left_of = right_of = v;
      break;
    }
    int prev = orient(q, v, hull[(i + h - 1) % h]);
    int next = orient(q, v, hull[(i + 1) % h]);
    // Hull weakly to the left of q->v, touching at v.
    if (prev >= 0 && next >= 0 && !left_of) left_of = v;
    if (prev <= 0 && next <= 0 && !right_of) right_of = v;
  }
  if (!left_of || !right_of) {
    fail(ErrorKind::geometry, "tangent search failed");
  }
  return {*left_of, *right_of};
}

std::pair<OrientedLine, OrientedLine> tangents_from_point(
    const Point& q, std::span<const Point> hull) {
  auto [l, r] = tangent_vertices(q, hull);
  return {OrientedLine::through(q, l), OrientedLine::through(q, r)};
}

bool segment_meets_convex_interior(const Point& u, const Point& v,
                                   std::span<const Point> hull) {
  const std::size_t h = hull.size();
  if (h < 3) return false;
  for (std::size_t i = 0; i < h; ++i) {
    const Point& a = hull[i];
    const Point& b = hull[(i + 1) % h];
    if (cross(a, b, u) <= 0 && cross(a, b, v) <= 0) return false;
  }
  bool any_left = false, any_right = false;
  for (const Point& w : hull) {
    int s = orient(u, v, w);
    any_left |= s > 0;
    any_right |= s < 0;
  }
  return any_left && any_right;
}

bool segment_meets_open_region(const Point& u, const Point& v,
                               std::span<const OpenHalfPlane> region) {
  Bound lo{0, 1, false};
  Bound hi{1, 1, false};
  for (const OpenHalfPlane& hp : region) {
    i128 f0 = hp.sign * cross(hp.a, hp.b, u);
    i128 f1 = hp.sign * cross(hp.a, hp.b, v);
    i128 slope = f1 - f0;
    if (slope == 0) {
      if (f0 <= 0) return false;
      continue;
    }
    if (slope > 0) {
      // s > -f0 / slope
      Bound cand{-f0, slope, true};
      int c = compare_fractions(cand.num, cand.den, lo.num, lo.den);
      if (c > 0 || (c == 0 && !lo.strict)) lo = cand;
    } else {
      // s < f0 / -slope
      Bound cand{f0, -slope, true};
      int c = compare_fractions(cand.num, cand.den, hi.num, hi.den);
      if (c < 0 || (c == 0 && !hi.strict)) hi = cand;
    }
  }
  int c = compare_fractions(lo.num, lo.den, hi.num, hi.den);
  return c < 0 || (c == 0 && !lo.strict && !hi.strict);
}

std::vector<OpenHalfPlane> open_triangle(const Point& a, const Point& b,
                                         const Point& c) {
  return {{a, b, orient(a, b, c)}, {b, c, orient(b, c, a)},
          {c, a, orient(c, a, b)}};
}

SegmentParam crossing_param(const Point& a, const Point& b, const Point& c,
                            const Point& d) {
  i128 rx = i128{b.x} - a.x, ry = i128{b.y} - a.y;
  i128 sx = i128{d.x} - c.x, sy = i128{d.y} - c.y;
  i128 den = cross_vec(rx, ry, sx, sy);
  i128 num = cross_vec(i128{c.x} - a.x, i128{c.y} - a.y, sx, sy);
  if (den == 0) fail(ErrorKind::geometry, "parallel segments have no crossing");
  if (den < 0) {
    den = -den;
    num = -num;
  }
  return {num, den};
}

int compare_params(const SegmentParam& s, const SegmentParam& t) {
  return sign_of(s.num * t.den - t.num * s.den);
}

LineDistance crossing_distance_from_line(const Point& q, const Point& q2,
                                         const Point& a, const Point& b,
                                         const Point& c, const Point& d) {
  SegmentParam t = crossing_param(a, b, c, d);
  i128 c0 = cross(q, q2, a);
  i128 c1 = cross_vec(i128{q2.x} - q.x, i128{q2.y} - q.y, i128{b.x} - a.x,
                      i128{b.y} - a.y);
  i256 num = to_wide(c0) * to_wide(t.den) + to_wide(t.num) * to_wide(c1);
  if (num < 0) num = -num;
  return {num, to_wide(t.den)};
}

int compare_line_distances(const LineDistance& s, const LineDistance& t) {
  // Numerators stay below 2^128 and denominators below 2^64.
  return sign_of(s.num * t.den - t.num * s.den);
}

int compare_length_sums(i128 ab2, i128 cd2, i128 ef2, i128 gh2) {
  long double lhs = std::sqrt(static_cast<long double>(ab2)) +
                    std::sqrt(static_cast<long double>(cd2));
  long double rhs = std::sqrt(static_cast<long double>(ef2)) +
                    std::sqrt(static_cast<long double>(gh2));
  long double gap = lhs - rhs;
  if (std::fabs(gap) > 1e-12L * (lhs + rhs) + 1e-9L) return gap > 0 ? 1 : -1;

  // sqrt(A) + sqrt(B) vs sqrt(C) + sqrt(D): square once, then isolate the
  // remaining radicals and square again.
  cpp_int a = to_big(ab2), b = to_big(cd2), c = to_big(ef2), d = to_big(gh2);
  cpp_int k = a + b - c - d;
  cpp_int x = 4 * a * b;
  cpp_int y = 4 * c * d;
  int sk = sign_of(k);
  int sxy = sign_of(cpp_int(x - y));
  if (sk >= 0 && sxy >= 0) return (sk == 0 && sxy == 0) ? 0 : 1;
  if (sk <= 0 && sxy <= 0) return -1;
  cpp_int m = x + y - k * k;
  int inner;  // sign(2 sqrt(xy) - m)
  if (m < 0) {
    inner = 1;
  } else {
    inner = sign_of(cpp_int(4 * x * y - m * m));
  }
  return sk > 0 ? inner : -inner;
}

}  // namespace untangle
