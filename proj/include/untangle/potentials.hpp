#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "untangle/geometry.hpp"
#include "untangle/model.hpp"

namespace untangle {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class PotentialKind {
  line_lambda,
  depth,
  product_phi,
  crossing_depth,
  index_eta,
  eta_T_sum,
  out_depth,
  directional_eta,
  crossing_count_chi,
  ratio_g,
};

std::string_view to_string(PotentialKind k);

struct PotentialReport {
  PotentialKind kind = PotentialKind::line_lambda;
  Rational value = 0;
  /// Set instead of an exact value when the exact one would be too large.
  std::optional<double> log2_value;
  std::string context;
};

/// Number of segments crossed by the line.
int line_lambda(std::span<const Point> points, std::span<const Segment> segments,
                const OrientedLine& l);
int line_lambda(const Instance& inst, const OrientedLine& l);

/// |b - a| for the counterclockwise ranks of the endpoints in C.
int depth(const Instance& inst, const Segment& s);

/// Product of depths over the CC-segments.
BigInt product_phi(const Instance& inst);
/// product_phi, reported exactly below 4096 bits and as log2 above.
PotentialReport product_phi_report(const Instance& inst);

/// Per-id flag: the point is an endpoint of a segment with a crossing.
std::vector<char> crossing_endpoints(const Instance& inst);
/// Marked points strictly between the endpoints of s in the counterclockwise
/// order of C.
int crossing_depth(const Instance& inst, const Segment& s);
int crossing_depth(const Instance& inst, const Segment& s,
                   const std::vector<char>& marks);
/// Smallest positive crossing depth over CC-segments with crossings, 0 if
/// none.
int min_positive_crossing_depth(const Instance& inst);

/// Point ids sorted top to bottom; equal heights are ordered by x.
std::vector<int> vertical_order(const Instance& inst);
/// Inverse of vertical_order.
std::vector<int> vertical_rank(const Instance& inst);
int index_eta(const std::vector<int>& rank, const Segment& s);
int index_eta(const Instance& inst, const Segment& s);
/// Sum of index_eta over the segments with an endpoint in T.
long eta_T_sum(const Instance& inst);

/// Points of C strictly on the side of line pp' away from T. Requires
/// |T| = 2 and pp' a CC-segment not crossing the segment qq'.
int out_depth(const Instance& inst, const Segment& s);

enum class CcKind { central, peripheral, outermost };
/// Classification of a CC-segment against the T pair (q, q').
CcKind classify_cc(const Point& q, const Point& q2, const Point& p,
                   const Point& p2);

/// Integer vector v with v.q < v.p for every p in C: the inward normal of the
/// hull edge that q lies farthest beyond.
std::pair<Coord, Coord> direction_toward_hull(const Instance& inst, int q);
/// Points p of C with v(q).p < v(q).p_x for the CT-segment p_x q.
int directional_eta(const Instance& inst, const Segment& s);
long directional_eta_sum(const Instance& inst);

enum class ChiScope { noncentral_cc_x_ct, central_cc_x_ct_plus_ct_x_ct };
/// Crossing counts used by the two-inside procedure. Requires |T| = 2.
long crossing_count_chi(const Instance& inst, ChiScope scope);

/// (1 + x + y) / ((1 + x)(1 + y)) for x, y >= 1.
Rational ratio_g(const Rational& x, const Rational& y);

/// The reports recorded per flip in traces: every potential meaningful for the
/// instance's class.
std::vector<PotentialReport> snapshot(const Instance& inst);

}  // namespace untangle
