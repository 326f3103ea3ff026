// Removal-only untangling with two points q, q' strictly inside the convex
// hull of C, in five phases ordered by the type of crossing they remove.

#include <algorithm>
#include <tuple>

#include "strategy_support.hpp"
#include "untangle/errors.hpp"

namespace untangle::detail {
namespace {

constexpr std::string_view kTag = "two_inside";

enum CrossingType : unsigned {
  ct_ct = 1,
  cc_cc = 2,
  ct_noncentral = 4,
  ct_central = 8,
  tt_cc = 16,
};

class TwoInside {
 public:
  explicit TwoInside(Workspace& ws)
      : ws_(ws),
        q_(ws.instance().t_ids[0]),
        q2_(ws.instance().t_ids[1]),
        Q_(ws.point(q_)),
        Q2_(ws.point(q2_)) {}

  void run() {
    phase1();
    check_absent(ct_ct, 1);
    phase2();
    check_absent(ct_ct | cc_cc, 2);
    phase3();
    check_absent(ct_ct | cc_cc | ct_noncentral, 3);
    phase4();
    check_absent(ct_ct | cc_cc | ct_noncentral | ct_central, 4);
    phase5();
    fallback(ws_, "two_inside_removal left crossings");
  }

 private:
  bool central(int slot) const {
    const Segment& s = ws_.segment(slot);
    return classify_cc(Q_, Q2_, ws_.point(s.a), ws_.point(s.b)) ==
           CcKind::central;
  }

  unsigned type_of(int s1, int s2) const {
    if (is_ct(ws_, s1) && is_ct(ws_, s2)) return ct_ct;
    if (is_cc(ws_, s1) && is_cc(ws_, s2)) return cc_cc;
    const int cc = is_cc(ws_, s1) ? s1 : s2;
    const int other = cc == s1 ? s2 : s1;
    if (is_tt(ws_, other)) return tt_cc;
    return central(cc) ? ct_central : ct_noncentral;
  }

  unsigned present_types() const {
    unsigned mask = 0;
    for (int s : ws_.slots()) {
      for (int o : ws_.partners(s)) mask |= type_of(s, o);
    }
    return mask;
  }

  void check_absent(unsigned types, int phase) {
    const unsigned bad = present_types() & types;
    if (bad == 0) return;
    static constexpr std::pair<unsigned, const char*> kNames[] = {
        {ct_ct, "CTxCT"},
        {cc_cc, "CCxCC"},
        {ct_noncentral, "CTxnon-central CC"},
        {ct_central, "CTxcentral CC"},
        {tt_cc, "TTxCC"}};
    std::string what;
    for (const auto& [bit, name] : kNames) {
      if (bad & bit) what += std::string(what.empty() ? "" : ", ") + name;
    }
    ws_.note("two_inside: phase " + std::to_string(phase) +
             " postcondition violated: " + what);
  }

  // CT-segments on each side of line qq' form a convex sub-problem together
  // with q and q'.
  void phase1(const std::string& label = "phase1") {
    for (int side : {1, -1}) {
      std::vector<int> keep;
      std::vector<int> ids{q_, q2_};
      for (int s : ws_.slots()) {
        if (!is_ct(ws_, s)) continue;
        const int p = c_end(ws_, s);
        if (orient(Q_, Q2_, ws_.point(p)) != side) continue;
        keep.push_back(s);
        ids.push_back(p);
      }
      ActiveScope scope(ws_, keep);
      if (ws_.crossing_free()) continue;
      const std::vector<int> order = convex_order(ws_, ids);
      convex_removal(ws_, order, tag(kTag, label));
    }
  }

  void phase2(const std::string& label = "phase2") {
    ActiveScope scope(ws_, select(ws_, [&](int s) { return is_cc(ws_, s); }));
    convex_removal(ws_, ws_.instance().convex_ids, tag(kTag, label));
  }

  // First CT-slot among `fresh` crossing another CT-segment.
  int ct_crossing_ct(const std::array<int, 2>& fresh) const {
    for (int s : fresh) {
      if (!is_ct(ws_, s)) continue;
      for (int o : ws_.partners(s)) {
        if (is_ct(ws_, o)) return s;
      }
    }
    return -1;
  }

  // A repair flip may insert a CC-segment crossing another CC-segment, or
  // leave CT-segments crossing. Both are removed before the next step.
  void restore_invariants() {
    const unsigned bad = present_types() & (ct_ct | cc_cc);
    if (bad == 0) return;
    if (!invariant_flagged_) {
      ws_.note("two_inside: phase 3 invariant restored by extra flips");
      invariant_flagged_ = true;
    }
    for (int round = 0; round < 4; ++round) {
      if (present_types() & cc_cc) phase2("phase3-restore");
      if (present_types() & ct_ct) phase1("phase3-restore");
      if ((present_types() & (ct_ct | cc_cc)) == 0) return;
    }
    ws_.note("two_inside: phase 3 invariant violated");
  }

  void phase3() {
    const std::string main_tag = tag(kTag, "phase3");
    const std::string repair_tag = tag(kTag, "phase3-repair");
    const int limit = 16 * (ws_.slot_count() + 1) * (ws_.slot_count() + 1);
    for (int step = 0;; ++step) {
      if (step > limit) {
        ws_.note("two_inside: phase 3 did not finish");
        return;
      }
      int best = -1, best_depth = 0;
      for (int s : ws_.slots()) {
        if (!is_cc(ws_, s) || central(s)) continue;
        const std::vector<int> ps = ws_.partners(s);
        if (std::none_of(ps.begin(), ps.end(),
                         [&](int o) { return is_ct(ws_, o); })) {
          continue;
        }
        const int d = out_depth(ws_.instance(), ws_.segment(s));
        if (best < 0 || d < best_depth) {
          best = s;
          best_depth = d;
        }
      }
      if (best < 0) return;
      const int p = ws_.segment(best).a;
      const int ct = partner_by_distance(ws_, best, p, false,
                                         [&](int o) { return is_ct(ws_, o); });
      auto [n1, n2] =
          ws_.flip(best, ct, first_legal(ws_, best, ct), main_tag);
      std::array<int, 2> fresh{n1, n2};
      int repairs = 0;
      for (int s = ct_crossing_ct(fresh); s >= 0; s = ct_crossing_ct(fresh)) {
        if (++repairs == 2) {
          ws_.note("two_inside: phase 3 step needed more than one repair");
        }
        if (repairs > ws_.slot_count()) break;
        const int o = partner_by_distance(ws_, s, t_end(ws_, s), false,
                                          [&](int x) { return is_ct(ws_, x); });
        auto [m1, m2] = ws_.flip(s, o, first_legal(ws_, s, o), repair_tag);
        fresh = {m1, m2};
      }
      restore_invariants();
    }
  }

  struct EarCandidate {
    bool both_ct;
    LineDistance dist;
    int ct;     // p''q''
    int other;  // xp
    int p;
  };

  bool has_ear(const EarCandidate& e) const {
    const Segment& a = ws_.segment(e.ct);
    const Segment& b = ws_.segment(e.other);
    const int qq = t_end(ws_, e.ct);
    const int pp = a.other(qq);
    const int x = b.other(e.p);
    const Point& P = ws_.point(e.p);
    const Point& PP = ws_.point(pp);
    const Point& QQ = ws_.point(qq);
    const Point& X = ws_.point(x);
    const std::array<OpenHalfPlane, 3> ear{
        OpenHalfPlane{P, PP, orient(P, PP, QQ)},
        OpenHalfPlane{PP, QQ, orient(PP, QQ, P)},
        OpenHalfPlane{X, P, orient(X, P, PP)}};
    for (int s : ws_.slots()) {
      if (s == e.ct || s == e.other) continue;
      const Segment& seg = ws_.segment(s);
      if (segment_meets_open_region(ws_.point(seg.a), ws_.point(seg.b), ear)) {
        return false;
      }
    }
    return true;
  }

  std::vector<EarCandidate> ear_candidates() const {
    std::vector<EarCandidate> out;
    for (int s : ws_.slots()) {
      if (!is_ct(ws_, s)) continue;
      const Segment& a = ws_.segment(s);
      for (int o : ws_.partners(s)) {
        if (is_tt(ws_, o)) continue;
        const Segment& b = ws_.segment(o);
        const LineDistance d =
            crossing_distance_from_line(Q_, Q2_, ws_.point(a.a), ws_.point(a.b),
                                        ws_.point(b.a), ws_.point(b.b));
        if (is_ct(ws_, o)) {
          out.push_back({true, d, s, o, c_end(ws_, o)});
        } else {
          out.push_back({false, d, s, o, b.a});
          out.push_back({false, d, s, o, b.b});
        }
      }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const EarCandidate& x, const EarCandidate& y) {
                       if (x.both_ct != y.both_ct) return x.both_ct;
                       return compare_line_distances(x.dist, y.dist) > 0;
                     });
    return out;
  }

  void phase4() {
    const std::string ear_tag = tag(kTag, "phase4-ear");
    const std::string loop_tag = tag(kTag, "phase4-loop");
    const int limit = 16 * (ws_.slot_count() + 1) * (ws_.slot_count() + 1);
    for (int step = 0;; ++step) {
      if (step > limit) {
        ws_.note("two_inside: phase 4 did not finish");
        return;
      }
      const std::vector<EarCandidate> cands = ear_candidates();
      if (cands.empty()) return;
      const auto ear = std::find_if(cands.begin(), cands.end(),
                                    [&](const EarCandidate& e) { return has_ear(e); });
      if (ear == cands.end()) {
        ws_.note("two_inside: phase 4 found no ear");
        return;
      }
      const int qq = t_end(ws_, ear->ct);
      const int pp = ws_.segment(ear->ct).other(qq);
      const int x = ws_.segment(ear->other).other(ear->p);
      const InsertionPair wanted{Segment(ear->p, pp), Segment(qq, x)};
      ws_.flip(ear->ct, ear->other,
               prefer(ws_, ear->ct, ear->other, wanted), ear_tag);
      drain_noncentral(loop_tag, limit);
    }
  }

  // While a non-central CC-segment has crossings, flip it with the CT-segment
  // incident to the T point farther from its line, crossing farthest from qq'.
  void drain_noncentral(const std::string& loop_tag, int limit) {
    for (int round = 0; round <= limit; ++round) {
      int s = -1;
      for (int k : ws_.slots()) {
        if (is_cc(ws_, k) && ws_.crossings(k) > 0 && !central(k)) {
          s = k;
          break;
        }
      }
      if (s < 0) return;
      const Segment& seg = ws_.segment(s);
      const Point& a = ws_.point(seg.a);
      const Point& b = ws_.point(seg.b);
      auto abs128 = [](i128 v) { return v < 0 ? -v : v; };
      const int far =
          abs128(cross(a, b, Q_)) >= abs128(cross(a, b, Q2_)) ? q_ : q2_;
      int best = -1;
      LineDistance best_d;
      bool best_far = false;
      for (int o : ws_.partners(s)) {
        if (!is_ct(ws_, o)) continue;
        const Segment& os = ws_.segment(o);
        const LineDistance d = crossing_distance_from_line(
            Q_, Q2_, a, b, ws_.point(os.a), ws_.point(os.b));
        const bool is_far = t_end(ws_, o) == far;
        if (best < 0 || (is_far && !best_far) ||
            (is_far == best_far && compare_line_distances(d, best_d) > 0)) {
          best = o;
          best_d = d;
          best_far = is_far;
        }
      }
      if (best < 0) {
        ws_.note("two_inside: non-central CC-segment crossed by no CT-segment");
        return;
      }
      ws_.flip(s, best, first_legal(ws_, s, best), loop_tag);
    }
    ws_.note("two_inside: phase 4 loop did not finish");
  }

  // The remaining crossings are between copies of qq' and central
  // CC-segments, whose endpoints are in convex position.
  void phase5() {
    std::vector<int> keep, ids;
    for (int s : ws_.slots()) {
      if (ws_.crossings(s) == 0) continue;
      keep.push_back(s);
      ids.push_back(ws_.segment(s).a);
      ids.push_back(ws_.segment(s).b);
    }
    if (keep.empty()) return;
    ActiveScope scope(ws_, keep);
    std::vector<int> order;
    try {
      order = convex_order(ws_, ids);
    } catch (const UntangleError&) {
      ws_.note("two_inside: phase 5 endpoints not in convex position");
      return;
    }
    convex_removal(ws_, order, tag(kTag, "phase5"));
  }

  Workspace& ws_;
  int q_, q2_;
  Point Q_, Q2_;
  bool invariant_flagged_ = false;
};

}  // namespace

void run_two_inside_removal(Workspace& ws) { TwoInside(ws).run(); }

}  // namespace untangle::detail
