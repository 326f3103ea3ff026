#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace untangle {

using Coord = std::int64_t;
using i128 = __int128;
using i256 = boost::multiprecision::int256_t;

/// Largest admissible |coordinate|. Every orientation determinant of three
/// such points fits in a signed 128-bit integer.
inline constexpr Coord kMaxCoord = Coord{1} << 30;

enum class Color : std::uint8_t { none, red, blue };

struct Point {
  int id = 0;
  Coord x = 0;
  Coord y = 0;
  Color color = Color::none;
};

/// Undirected segment between two endpoint ids, stored with a < b.
struct Segment {
  int a = 0;
  int b = 0;

  Segment() = default;
  Segment(int u, int v) : a(u < v ? u : v), b(u < v ? v : u) {}

  bool has(int id) const { return a == id || b == id; }
  int other(int id) const { return a == id ? b : a; }
  bool shares_endpoint(const Segment& s) const {
    return has(s.a) || has(s.b);
  }

  auto operator<=>(const Segment&) const = default;
};

/// Sign of the exact determinant of (b - a, c - a).
int orient(const Point& a, const Point& b, const Point& c);

/// Exact cross product (b - a) x (c - a).
i128 cross(const Point& a, const Point& b, const Point& c);

/// Proper crossing: the open segments share exactly one point. Segments with a
/// common endpoint never cross.
bool segments_cross(const Point& a, const Point& b, const Point& c,
                    const Point& d);

/// Squared Euclidean length.
i128 squared_length(const Point& a, const Point& b);

enum class Side : int { right = -1, on = 0, left = 1 };

/// A line through an anchor with a gcd-reduced integer direction. The direction
/// sign is canonical (dx > 0, or dx == 0 and dy > 0), so the same line always
/// carries the same direction; equality compares the point sets.
class OrientedLine {
 public:
  OrientedLine(Coord ax, Coord ay, Coord dx, Coord dy);
  static OrientedLine through(const Point& p, const Point& q);

  Side side(const Point& p) const;
  /// Signed cross product dir x (p - anchor); zero on the line.
  i128 signed_offset(const Point& p) const;

  Coord anchor_x() const { return ax_; }
  Coord anchor_y() const { return ay_; }
  Coord dx() const { return dx_; }
  Coord dy() const { return dy_; }

  friend bool operator==(const OrientedLine& l, const OrientedLine& m);

 private:
  Coord ax_, ay_, dx_, dy_;
};

bool line_crosses_segment(const OrientedLine& l, const Point& a,
                          const Point& b);

/// Result of a convex-position query. `order` lists ids counterclockwise,
/// starting from the lowest-then-leftmost point.
struct ConvexPositionResult {
  bool convex = false;
  bool trivial = false;
  std::vector<int> order;
};

ConvexPositionResult convex_position(std::span<const Point> points);

/// Strictly convex hull vertices in counterclockwise order.
std::vector<Point> convex_hull(std::span<const Point> points);

/// Point strictly inside a counterclockwise convex polygon.
bool strictly_inside_convex(std::span<const Point> hull, const Point& p);
/// Point strictly outside a counterclockwise convex polygon.
bool strictly_outside_convex(std::span<const Point> hull, const Point& p);

/// The two lines through q tangent to the counterclockwise hull. Throws
/// GeometryError("not exterior") when q is not strictly outside.
std::pair<OrientedLine, OrientedLine> tangents_from_point(
    const Point& q, std::span<const Point> hull);

/// Hull vertices touched by the two tangents from q, in the same order as
/// tangents_from_point.
std::pair<Point, Point> tangent_vertices(const Point& q,
                                         std::span<const Point> hull);

/// True iff the segment uv meets the open interior of the convex polygon.
bool segment_meets_convex_interior(const Point& u, const Point& v,
                                   std::span<const Point> hull);

/// An open half-plane: points strictly on `sign` side of the line a->b.
struct OpenHalfPlane {
  Point a;
  Point b;
  int sign = 1;
};

/// True iff some point of the closed segment uv lies in the intersection of
/// the given open half-planes.
bool segment_meets_open_region(const Point& u, const Point& v,
                               std::span<const OpenHalfPlane> region);

/// Open triangle abc expressed as three half-planes (any orientation).
std::vector<OpenHalfPlane> open_triangle(const Point& a, const Point& b,
                                         const Point& c);

/// Position of the crossing point of ab with cd along ab, as the exact
/// fraction num/den in (0, 1) with den > 0. Requires the segments to cross.
struct SegmentParam {
  i128 num = 0;
  i128 den = 1;
};
SegmentParam crossing_param(const Point& a, const Point& b, const Point& c,
                            const Point& d);
/// Three-way comparison of two parameters on the same segment.
int compare_params(const SegmentParam& s, const SegmentParam& t);

/// Unsigned distance, up to a positive factor common to all calls with the same
/// line (q, q2), of the crossing point of ab with cd from the line q q2.
/// Returned as an exact fraction to be compared with compare_line_distances.
struct LineDistance {
  i256 num = 0;
  i256 den = 1;
};
LineDistance crossing_distance_from_line(const Point& q, const Point& q2,
                                         const Point& a, const Point& b,
                                         const Point& c, const Point& d);
int compare_line_distances(const LineDistance& s, const LineDistance& t);

/// Exact three-way comparison of |ab| + |cd| against |ef| + |gh|.
int compare_length_sums(i128 ab2, i128 cd2, i128 ef2, i128 gh2);

}  // namespace untangle
