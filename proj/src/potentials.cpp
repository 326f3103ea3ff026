#include "untangle/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "untangle/errors.hpp"

namespace untangle {

std::string_view to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::line_lambda:
      return "line_lambda";
    case PotentialKind::depth:
      return "depth";
    case PotentialKind::product_phi:
      return "product_phi";
    case PotentialKind::crossing_depth:
      return "crossing_depth";
    case PotentialKind::index_eta:
      return "index_eta";
    case PotentialKind::eta_T_sum:
      return "eta_T_sum";
    case PotentialKind::out_depth:
      return "out_depth";
    case PotentialKind::directional_eta:
      return "directional_eta";
    case PotentialKind::crossing_count_chi:
      return "crossing_count_chi";
    case PotentialKind::ratio_g:
      return "ratio_g";
  }
  return "?";
}

int line_lambda(std::span<const Point> points, std::span<const Segment> segments,
                const OrientedLine& l) {
  int count = 0;
  for (const Segment& s : segments) {
    if (line_crosses_segment(l, points[size_t(s.a)], points[size_t(s.b)])) {
      ++count;
    }
  }
  return count;
}

int line_lambda(const Instance& inst, const OrientedLine& l) {
  int count = 0;
  for (const auto& [s, c] : inst.segments.counts()) {
    if (line_crosses_segment(l, inst.point(s.a), inst.point(s.b))) count += c;
  }
  return count;
}

int depth(const Instance& inst, const Segment& s) {
  const int ra = inst.convex_rank(s.a), rb = inst.convex_rank(s.b);
  if (ra < 0 || rb < 0) fail(ErrorKind::precondition, "endpoint not in C");
  return std::abs(rb - ra);
}

BigInt product_phi(const Instance& inst) {
  BigInt phi = 1;
  for (const auto& [s, c] : inst.segments.counts()) {
    if (inst.convex_rank(s.a) < 0 || inst.convex_rank(s.b) < 0) continue;
    for (int k = 0; k < c; ++k) phi *= depth(inst, s);
  }
  return phi;
}

PotentialReport product_phi_report(const Instance& inst) {
  PotentialReport r{PotentialKind::product_phi, 0, std::nullopt, "CC"};
  BigInt phi = product_phi(inst);
  if (boost::multiprecision::msb(phi) < 4096) {
    r.value = Rational(phi);
  } else {
    double bits = 0;
    for (const auto& [s, c] : inst.segments.counts()) {
      if (inst.convex_rank(s.a) < 0 || inst.convex_rank(s.b) < 0) continue;
      bits += c * std::log2(double(depth(inst, s)));
    }
    r.log2_value = bits;
  }
  return r;
}

std::vector<char> crossing_endpoints(const Instance& inst) {
  std::vector<char> marks(inst.points.size(), 0);
  for (const auto& [s1, s2] : crossing_pairs(inst)) {
    for (int id : {s1.a, s1.b, s2.a, s2.b}) marks[size_t(id)] = 1;
  }
  return marks;
}

int crossing_depth(const Instance& inst, const Segment& s,
                   const std::vector<char>& marks) {
  int ra = inst.convex_rank(s.a), rb = inst.convex_rank(s.b);
  if (ra < 0 || rb < 0) fail(ErrorKind::precondition, "endpoint not in C");
  if (ra > rb) std::swap(ra, rb);
  int count = 0;
  for (int r = ra + 1; r < rb; ++r) {
    count += marks[size_t(inst.convex_ids[size_t(r)])];
  }
  return count;
}

int crossing_depth(const Instance& inst, const Segment& s) {
  return crossing_depth(inst, s, crossing_endpoints(inst));
}

int min_positive_crossing_depth(const Instance& inst) {
  const std::vector<char> marks = crossing_endpoints(inst);
  const std::vector<Segment> segs = inst.segments.expanded();
  int best = 0;
  for (size_t i = 0; i < segs.size(); ++i) {
    if (inst.convex_rank(segs[i].a) < 0 || inst.convex_rank(segs[i].b) < 0) continue;
    bool crossed = false;
    for (size_t j = 0; j < segs.size() && !crossed; ++j) {
      crossed = j != i && crossing(inst, segs[i], segs[j]);
    }
    if (!crossed) continue;
    int d = crossing_depth(inst, segs[i], marks);
    if (d > 0 && (best == 0 || d < best)) best = d;
  }
  return best;
}

std::vector<int> vertical_order(const Instance& inst) {
  std::vector<int> ids(inst.points.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::sort(ids.begin(), ids.end(), [&](int u, int v) {
    const Point& a = inst.point(u);
    const Point& b = inst.point(v);
    if (a.y != b.y) return a.y > b.y;
    return a.x < b.x;
  });
  return ids;
}

std::vector<int> vertical_rank(const Instance& inst) {
  std::vector<int> order = vertical_order(inst);
  std::vector<int> rank(order.size());
  for (size_t i = 0; i < order.size(); ++i) rank[size_t(order[i])] = int(i);
  return rank;
}

int index_eta(const std::vector<int>& rank, const Segment& s) {
  return std::abs(rank[size_t(s.a)] - rank[size_t(s.b)]);
}

int index_eta(const Instance& inst, const Segment& s) {
  return index_eta(vertical_rank(inst), s);
}

long eta_T_sum(const Instance& inst) {
  const std::vector<int> rank = vertical_rank(inst);
  long sum = 0;
  for (const auto& [s, c] : inst.segments.counts()) {
    if (inst.in_t(s.a) || inst.in_t(s.b)) sum += long(c) * index_eta(rank, s);
  }
  return sum;
}

CcKind classify_cc(const Point& q, const Point& q2, const Point& p,
                   const Point& p2) {
  if (segments_cross(q, q2, p, p2)) return CcKind::central;
  const int sp = orient(q, q2, p), sp2 = orient(q, q2, p2);
  return sp * sp2 < 0 ? CcKind::peripheral : CcKind::outermost;
}

int out_depth(const Instance& inst, const Segment& s) {
  if (inst.t_ids.size() != 2) {
    fail(ErrorKind::precondition, "out-depth needs exactly two T points");
  }
  const Point& q = inst.point(inst.t_ids[0]);
  const Point& q2 = inst.point(inst.t_ids[1]);
  const Point& p = inst.point(s.a);
  const Point& p2 = inst.point(s.b);
  if (classify_cc(q, q2, p, p2) == CcKind::central) {
    fail(ErrorKind::precondition, "segment is central");
  }
  const int t_side = orient(p, p2, q);
  int count = 0;
  for (int id : inst.convex_ids) {
    const int side = orient(p, p2, inst.point(id));
    if (side != 0 && side != t_side) ++count;
  }
  return count;
}

std::pair<Coord, Coord> direction_toward_hull(const Instance& inst, int q) {
  const std::vector<Point> hull = inst.convex_points();
  const Point& pq = inst.point(q);
  const size_t h = hull.size();
  if (h < 2) fail(ErrorKind::precondition, "hull too small for a direction");
  // Beyond-ness of q past edge e is cross_e / |e|; compare cross^2 / len^2.
  std::optional<size_t> best;
  i256 best_c2 = 0, best_l2 = 1;
  for (size_t i = 0; i < h; ++i) {
    const Point& a = hull[i];
    const Point& b = hull[(i + 1) % h];
    const i128 c = -cross(a, b, pq);  // positive when q is right of a->b
    if (c <= 0) continue;
    const i256 c2 = i256(c) * i256(c);
    const i256 l2 = i256(squared_length(a, b));
    if (!best || c2 * best_l2 > best_c2 * l2) {
      best = i;
      best_c2 = c2;
      best_l2 = l2;
    }
  }
  if (!best) fail(ErrorKind::precondition, "point is not outside the hull");
  const Point& a = hull[*best];
  const Point& b = hull[(*best + 1) % h];
  return {-(b.y - a.y), b.x - a.x};
}

int directional_eta(const Instance& inst, const Segment& s) {
  int q = -1, px = -1;
  if (inst.in_t(s.a) && inst.convex_rank(s.b) >= 0) {
    q = s.a;
    px = s.b;
  } else if (inst.in_t(s.b) && inst.convex_rank(s.a) >= 0) {
    q = s.b;
    px = s.a;
  } else {
    fail(ErrorKind::precondition, "not a CT-segment");
  }
  const auto [vx, vy] = direction_toward_hull(inst, q);
  auto dot = [&](const Point& p) { return i128(vx) * p.x + i128(vy) * p.y; };
  const i128 ref = dot(inst.point(px));
  int count = 0;
  for (int id : inst.convex_ids) {
    if (dot(inst.point(id)) < ref) ++count;
  }
  return count;
}

long directional_eta_sum(const Instance& inst) {
  long sum = 0;
  for (const auto& [s, c] : inst.segments.counts()) {
    if (inst.in_t(s.a) != inst.in_t(s.b)) {
      sum += long(c) * directional_eta(inst, s);
    }
  }
  return sum;
}

long crossing_count_chi(const Instance& inst, ChiScope scope) {
  if (inst.t_ids.size() != 2) {
    fail(ErrorKind::precondition, "chi needs exactly two T points");
  }
  const Point& q = inst.point(inst.t_ids[0]);
  const Point& q2 = inst.point(inst.t_ids[1]);
  auto is_ct = [&](const Segment& s) { return inst.in_t(s.a) != inst.in_t(s.b); };
  auto is_cc = [&](const Segment& s) { return !inst.in_t(s.a) && !inst.in_t(s.b); };
  auto central = [&](const Segment& s) {
    return classify_cc(q, q2, inst.point(s.a), inst.point(s.b)) ==
           CcKind::central;
  };
  long chi = 0;
  for (const auto& [s1, s2] : crossing_pairs(inst)) {
    for (int flip = 0; flip < 2; ++flip) {
      const Segment& cc = flip ? s2 : s1;
      const Segment& ct = flip ? s1 : s2;
      if (!is_cc(cc) || !is_ct(ct)) continue;
      const bool c = central(cc);
      if (scope == ChiScope::noncentral_cc_x_ct ? !c : c) ++chi;
    }
    if (scope == ChiScope::central_cc_x_ct_plus_ct_x_ct && is_ct(s1) &&
        is_ct(s2)) {
      ++chi;
    }
  }
  return chi;
}

Rational ratio_g(const Rational& x, const Rational& y) {
  if (x < 1 || y < 1) fail(ErrorKind::precondition, "g needs x, y >= 1");
  return (1 + x + y) / ((1 + x) * (1 + y));
}

std::vector<PotentialReport> snapshot(const Instance& inst) {
  std::vector<PotentialReport> out;
  out.push_back(product_phi_report(inst));
  out.push_back({PotentialKind::crossing_depth,
                 min_positive_crossing_depth(inst), std::nullopt,
                 "min positive"});
  if (!inst.t_ids.empty()) {
    out.push_back(
        {PotentialKind::eta_T_sum, eta_T_sum(inst), std::nullopt, "T"});
  }
  const std::vector<Point> hull = inst.convex_points();
  const bool all_outside =
      !inst.t_ids.empty() && hull.size() >= 3 &&
      std::all_of(inst.t_ids.begin(), inst.t_ids.end(), [&](int id) {
        return strictly_outside_convex(hull, inst.point(id));
      });
  if (all_outside) {
    out.push_back({PotentialKind::directional_eta, directional_eta_sum(inst),
                   std::nullopt, "CT sum"});
  }
  if (inst.t_ids.size() == 2 && hull.size() >= 3 &&
      strictly_inside_convex(hull, inst.point(inst.t_ids[0])) &&
      strictly_inside_convex(hull, inst.point(inst.t_ids[1]))) {
    out.push_back({PotentialKind::crossing_count_chi,
                   crossing_count_chi(inst, ChiScope::noncentral_cc_x_ct),
                   std::nullopt, "noncentral CC x CT"});
    out.push_back(
        {PotentialKind::crossing_count_chi,
         crossing_count_chi(inst, ChiScope::central_cc_x_ct_plus_ct_x_ct),
         std::nullopt, "central CC x CT + CT x CT"});
  }
  return out;
}

}  // namespace untangle
