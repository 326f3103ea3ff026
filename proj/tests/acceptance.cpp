// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "untangle/errors.hpp"
#include "untangle/harness.hpp"
#include "untangle/oracle.hpp"
#include "untangle/potentials.hpp"
#include "untangle/strategies.hpp"

using namespace untangle;
using harness::Family;
using harness::GeneratorSpec;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void parallel_for(int count, const std::function<void(int)>& body) {
  const int workers = std::max(1, int(std::thread::hardware_concurrency()));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) body(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

struct Result {
  std::string name;
  bool pass = true;
  std::string detail;
};

std::vector<Result> results;

void report(const std::string& name, bool pass, const std::string& detail) {
  results.push_back({name, pass, detail});
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double x, int prec = 3) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

bool has_tag(const FlipEvent& e, std::string_view step) {
  const std::string& t = e.tag;
  return t.size() >= step.size() && t.compare(t.size() - step.size(), step.size(), step) == 0;
}

std::vector<int> degrees(const Instance& inst) {
  std::vector<int> d(inst.points.size());
  for (const Segment& s : inst.segments.expanded()) ++d[size_t(s.a)], ++d[size_t(s.b)];
  return d;
}

bool is_fragment(StrategyId id) {
  return id == StrategyId::farthest_first || id == StrategyId::liberate_line;
}

// Replays the trace, calling visit(before, event, after) per flip.
Instance replay(const UntangleTrace& tr,
                const std::function<void(const Instance&, const FlipEvent&, const Instance&)>& visit) {
  Instance cur = tr.initial;
  for (const FlipEvent& e : tr.events) {
    Instance next = apply_flip(cur, e);
    visit(cur, e, next);
    cur = std::move(next);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Lines for the crossing-count check. Lines through points of P are treated
// as shifted infinitesimally away from C, so every line avoids P.

struct TestLine {
  OrientedLine line;
  Side on_side;  // side assigned to points on the line
};

Side side_of(const TestLine& l, const Point& p) {
  const Side s = l.line.side(p);
  return s == Side::on ? l.on_side : s;
}

bool line_cuts(const TestLine& l, const Point& a, const Point& b) {
  return int(side_of(l, a)) * int(side_of(l, b)) < 0;
}

Side away_from(const OrientedLine& l, std::span<const Point> hull) {
  for (const Point& p : hull) {
    const Side s = l.side(p);
    if (s != Side::on) return s == Side::left ? Side::right : Side::left;
  }
  return Side::left;
}

std::vector<TestLine> test_lines(const Instance& inst, std::uint64_t seed) {
  std::vector<TestLine> out;
  Coord lo_x = inst.points[0].x, hi_x = lo_x, lo_y = inst.points[0].y, hi_y = lo_y;
  for (const Point& p : inst.points) {
    lo_x = std::min(lo_x, p.x), hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y), hi_y = std::max(hi_y, p.y);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Coord> ux(lo_x, hi_x), uy(lo_y, hi_y), ud(-1000, 1000);
  while (out.size() < 64) {
    Coord dx = ud(rng), dy = ud(rng);
    if (dx == 0 && dy == 0) continue;
    OrientedLine l(ux(rng), uy(rng), dx, dy);
    const bool clear = std::none_of(inst.points.begin(), inst.points.end(),
                                    [&](const Point& p) { return l.side(p) == Side::on; });
    if (clear) out.push_back({l, Side::left});
  }
  const std::vector<Point> hull = inst.convex_points();
  if (hull.size() >= 3) {
    for (size_t i = 0; i < hull.size(); ++i) {
      const OrientedLine l = OrientedLine::through(hull[i], hull[(i + 1) % hull.size()]);
      out.push_back({l, away_from(l, hull)});
    }
    for (int q : inst.t_ids) {
      if (!strictly_outside_convex(hull, inst.point(q))) continue;
      const auto [l1, l2] = tangents_from_point(inst.point(q), hull);
      out.push_back({l1, away_from(l1, hull)});
      out.push_back({l2, away_from(l2, hull)});
    }
  }
  return out;
}

// Counts flips at which some line is crossed by more inserted than removed
// segments.
long lambda_violations(const UntangleTrace& tr, std::uint64_t seed) {
  const std::vector<TestLine> lines = test_lines(tr.initial, seed);
  const Instance& inst = tr.initial;
  long bad = 0;
  for (const FlipEvent& e : tr.events) {
    for (const TestLine& l : lines) {
      int before = 0, after = 0;
      for (const Segment& s : e.removed) before += line_cuts(l, inst.point(s.a), inst.point(s.b));
      for (const Segment& s : e.inserted) after += line_cuts(l, inst.point(s.a), inst.point(s.b));
      if (after > before) {
        ++bad;
        break;
      }
    }
  }
  return bad;
}

// ---------------------------------------------------------------------------
// Criterion 1 corpus: per strategy, instances cycling over the class and
// property options it accepts.

struct Option {
  GeometryClass cls;
  Property prop;
  Family family = Family::random;
};

std::vector<Option> options_for(StrategyId id) {
  using G = GeometryClass;
  using P = Property;
  const std::vector<P> all = {P::multigraph, P::matching, P::redblue_matching, P::tour, P::tree};
  auto every = [&](G cls) {
    std::vector<Option> out;
    for (P p : all) out.push_back({cls, p});
    return out;
  };
  switch (id) {
    case StrategyId::baseline_noclice: {
      std::vector<Option> out;
      for (G cls : {G::convex, G::one_T_point, G::two_T_inside, G::general}) {
        for (P p : all) out.push_back({cls, p});
      }
      return out;
    }
    case StrategyId::convex_insertion:
      return {{G::convex, P::multigraph}, {G::convex, P::matching}};
    case StrategyId::separated_insertion:
    case StrategyId::separated_removal_insertion:
      return {{G::parallel_separated, P::multigraph}, {G::parallel_separated, P::matching}};
    case StrategyId::convex_removal:
      return every(G::convex);
    case StrategyId::farthest_first:
      return {{G::convex, P::matching, Family::crossed_segment},
              {G::one_T_point, P::matching, Family::crossed_segment}};
    case StrategyId::one_point_removal:
      return every(G::one_T_point);
    case StrategyId::two_outside_removal: {
      std::vector<Option> out = every(G::two_T_outside);
      out.push_back({G::T_outside_hull, P::multigraph});
      out.push_back({G::T_outside_hull, P::matching});
      return out;
    }
    case StrategyId::two_inside_removal:
      return every(G::two_T_inside);
    case StrategyId::one_in_one_out_removal:
      return every(G::one_in_one_out);
    case StrategyId::liberate_line:
      return {{G::T_outside_hull, P::matching, Family::separating_line}};
    case StrategyId::outside_matching_RI:
      return {{G::T_outside_hull, P::matching}};
  }
  return {};
}

const int kLadder[] = {8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256};

GeneratorSpec corpus_spec(StrategyId id, int i, std::uint64_t salt) {
  const std::vector<Option> opts = options_for(id);
  const Option& o = opts[size_t(i) % opts.size()];
  GeneratorSpec s;
  s.geometry_class = o.cls;
  s.property = o.prop;
  s.family = o.family;
  s.n = i % 25 == 24 ? 512 : kLadder[size_t(i / int(opts.size()) + i) % std::size(kLadder)];
  s.t = 1 + i % 8;
  if (id == StrategyId::two_outside_removal) {
    s.t = o.cls == GeometryClass::T_outside_hull ? 1 + i % 2 : 1 + i % 6;
  }
  s.seed = 1 + std::uint64_t(i) + salt;
  return s;
}

struct Criterion1Stats {
  int runs = 0, skipped = 0;
  std::vector<std::string> failures;
  long lambda_bad = 0;
  long flips = 0;
};

void criteria_1_and_2() {
  const auto t0 = Clock::now();
  const std::vector<StrategyId>& ids = all_strategies();
  const int per = 100;
  std::mutex mu;
  Criterion1Stats st;
  std::map<std::string, double> slowest;
  parallel_for(int(ids.size()) * per, [&](int job) {
    const StrategyId id = ids[size_t(job / per)];
    const int i = job % per;
    std::optional<Instance> inst;
    int skips = 0;
    for (std::uint64_t salt = 0; salt < 5000 && !inst; salt += 1000) {
      try {
        Instance cand = harness::generate(corpus_spec(id, i, salt));
        check_precondition(id, cand);
        inst = std::move(cand);
      } catch (const UntangleError&) {
        ++skips;
      }
    }
    std::string failure;
    long bad = 0, flips = 0;
    const auto r0 = Clock::now();
    if (!inst) {
      failure = "no applicable instance for case " + std::to_string(i);
    } else {
      try {
        const harness::RunOutcome out = harness::run(id, *inst, {});
        flips = long(out.trace.events.size());
        Instance final_state;
        const std::string model = replay_verdict(*inst, out.trace.events,
                                                 !is_fragment(id), &final_state);
        const oracle::Verdict o = oracle::validate(*inst, out.trace.events, !is_fragment(id));
        if (!out.ok() || model != "valid" || !o.valid) {
          failure = out.trace.verdict + " / " + o.to_string();
        } else if (degrees(final_state) != degrees(*inst)) {
          failure = "degrees changed";
        } else if (!is_fragment(id) && !crossing_pairs(final_state).empty()) {
          failure = "crossings left";
        }
        bad = lambda_violations(out.trace, 77 + std::uint64_t(job));
      } catch (const std::exception& e) {
        failure = e.what();
      }
    }
    const double secs = seconds_since(r0);
    std::lock_guard lock(mu);
    ++st.runs;
    st.skipped += skips;
    st.flips += flips;
    st.lambda_bad += bad;
    double& slow = slowest[std::string(to_string(id))];
    slow = std::max(slow, secs);
    if (!failure.empty()) {
      st.failures.push_back(std::string(to_string(id)) + " case " + std::to_string(i) + ": " +
                            failure);
    }
  });
  const double secs = seconds_since(t0);
  for (size_t k = 0; k < std::min<size_t>(st.failures.size(), 5); ++k) {
    std::printf("  %s\n", st.failures[k].c_str());
  }
  std::string slow_note;
  for (const auto& [name, s] : slowest) {
    if (s > 5) slow_note += " " + name + "=" + fmt(s) + "s";
  }
  report("1 validity suite", st.failures.empty() && secs < 300,
         std::to_string(st.runs) + " runs, " + std::to_string(st.flips) + " flips, " +
             std::to_string(st.failures.size()) + " failures, " + std::to_string(st.skipped) +
             " regenerated specs, " + fmt(secs) + " s" +
             (slow_note.empty() ? "" : "; slowest:" + slow_note));
  report("2 line crossing counts never increase", st.lambda_bad == 0,
         std::to_string(st.lambda_bad) + " violating flips over " + std::to_string(st.flips) +
             " flips (64 random lines, hull edge lines and tangents from outer T points)");
}

// ---------------------------------------------------------------------------

std::vector<Instance> convex_corpus() {
  std::vector<Instance> out(200);
  parallel_for(200, [&](int i) {
    GeneratorSpec s;
    s.geometry_class = GeometryClass::convex;
    s.property = i % 2 ? Property::matching : Property::multigraph;
    s.n = kLadder[size_t(i) % std::size(kLadder)];
    s.seed = 5000 + std::uint64_t(i);
    out[size_t(i)] = harness::generate(s);
  });
  return out;
}

void criterion_3(const std::vector<Instance>& corpus) {
  std::mutex mu;
  long flips = 0, factor_bad = 0, length_bad = 0, invalid = 0;
  Rational worst = 0;
  parallel_for(int(corpus.size()), [&](int i) {
    const Instance& inst = corpus[size_t(i)];
    const UntangleTrace tr = untangle::untangle(StrategyId::convex_insertion, inst);
    long bad = 0;
    Rational w = 0;
    for (const FlipEvent& e : tr.events) {
      const Rational f = Rational(depth(inst, e.inserted[0]) * depth(inst, e.inserted[1]),
                                  depth(inst, e.removed[0]) * depth(inst, e.removed[1]));
      w = std::max(w, f);
      bad += f > Rational(3, 4);
    }
    const double c = double(inst.convex_ids.size());
    const double limit = std::floor(inst.n() * std::log(c) / std::log(4.0 / 3.0)) + 1;
    std::lock_guard lock(mu);
    flips += long(tr.events.size());
    factor_bad += bad;
    length_bad += double(tr.events.size()) > limit;
    invalid += tr.verdict != "valid" || !oracle::validate_trace(tr).valid;
    worst = std::max(worst, w);
  });
  report("3 convex insertion depth-product factor", factor_bad == 0 && length_bad == 0 && invalid == 0,
         std::to_string(flips) + " flips on " + std::to_string(corpus.size()) +
             " instances; largest factor " + worst.str() + " (limit 3/4), " +
             std::to_string(factor_bad) + " above; " + std::to_string(length_bad) +
             " traces over log_{4/3}(|C|^n)+1; " + std::to_string(invalid) + " invalid");
}

void criterion_4(const std::vector<Instance>& corpus) {
  std::mutex mu;
  long flips = 0, halve_bad = 0, length_bad = 0, invalid = 0;
  double worst_ratio = 0;
  parallel_for(int(corpus.size()), [&](int i) {
    const Instance& inst = corpus[size_t(i)];
    const UntangleTrace tr = untangle::untangle(StrategyId::convex_removal, inst);
    long bad = 0;
    replay(tr, [&](const Instance& before, const FlipEvent& e, const Instance& after) {
      if (!has_tag(e, "/halve")) return;
      const int dmin = min_positive_crossing_depth(before);
      const int got = std::min(crossing_depth(after, e.inserted[0]),
                               crossing_depth(after, e.inserted[1]));
      bad += got > dmin / 2;
    });
    const double bound = harness::d_conv(inst.n(), int(inst.convex_ids.size()));
    std::lock_guard lock(mu);
    flips += long(tr.events.size());
    halve_bad += bad;
    length_bad += double(tr.events.size()) > bound;
    worst_ratio = std::max(worst_ratio, double(tr.events.size()) / bound);
    invalid += tr.verdict != "valid" || !oracle::validate_trace(tr).valid;
  });
  report("4 convex removal halving", halve_bad == 0 && length_bad == 0 && invalid == 0,
         std::to_string(flips) + " flips; " + std::to_string(halve_bad) +
             " flips without a halved segment; " + std::to_string(length_bad) +
             " traces over n*(floor(log2|C|)+1), largest ratio " + fmt(worst_ratio) + "; " +
             std::to_string(invalid) + " invalid");
}

// With q inside conv(C) or on it, each flip leaves q's segment inside the
// triangle cut from the old one, so the count is at most the initial crossings
// of s. With q outside, C points can lie in that triangle; there the bound is
// one flip per segment of S, since every flip inserts a CC-segment that is
// never flipped again.
void criterion_5() {
  std::mutex mu;
  int bad = 0, invalid = 0, outside = 0, outside_over_start = 0;
  long flips = 0, crossings = 0;
  parallel_for(100, [&](int i) {
    GeneratorSpec s;
    s.geometry_class = i % 2 ? GeometryClass::one_T_point : GeometryClass::convex;
    s.property = Property::matching;
    s.family = Family::crossed_segment;
    s.n = kLadder[size_t(i) % std::size(kLadder)];
    s.seed = 7000 + std::uint64_t(i);
    const Instance inst = harness::generate(s);
    const Segment target = *default_target(StrategyId::farthest_first, inst);
    int start = 0;
    for (const Segment& o : inst.segments.expanded()) start += crossing(inst, target, o);
    const std::vector<Point> hull = inst.convex_points();
    const bool q_outside = std::any_of(inst.t_ids.begin(), inst.t_ids.end(), [&](int q) {
      return strictly_outside_convex(hull, inst.point(q));
    });
    const harness::RunOutcome out = harness::run(StrategyId::farthest_first, inst, {});
    const int count = int(out.trace.events.size());
    std::lock_guard lock(mu);
    bad += count > (q_outside ? inst.n() - 1 : start);
    outside += q_outside;
    outside_over_start += q_outside && count > start;
    invalid += !out.ok();
    flips += count;
    crossings += start;
  });
  report("5 farthest-first flip count", bad == 0 && invalid == 0,
         std::to_string(flips) + " flips against " + std::to_string(crossings) +
             " initial crossings of s over 100 instances; " + std::to_string(bad) +
             " over their bound; q outside the hull in " + std::to_string(outside) +
             " instances, checked against |S|, of which " + std::to_string(outside_over_start) +
             " exceed the initial crossings of s; " + std::to_string(invalid) + " invalid");
}

// ---------------------------------------------------------------------------

double log_c(const Instance& inst) { return std::log2(2.0 + double(inst.convex_ids.size())); }

struct SeparatedRun {
  double ins_flips = 0, ins_x = 0;
  double ri_flips = 0, ri_x = 0;
};

void criterion_6() {
  std::mutex mu;
  long eta_bad = 0, t_flips = 0, phase1_bad = 0, invalid = 0;
  std::vector<SeparatedRun> corpora[2];
  for (int k = 0; k < 2; ++k) corpora[k].resize(100);
  parallel_for(200, [&](int job) {
    const int k = job / 100, i = job % 100;
    GeneratorSpec s;
    s.geometry_class = GeometryClass::parallel_separated;
    s.property = i % 2 ? Property::matching : Property::multigraph;
    s.n = kLadder[size_t(i) % std::size(kLadder)];
    s.t = 1 + i % 8;
    s.seed = (k == 0 ? 1 : 1001) + std::uint64_t(i);
    const Instance inst = harness::generate(s);
    const double t = inst.t();
    const double p = double(inst.points.size());
    long bad = 0, tf = 0, phase1 = 0;
    auto check_eta = [&](const Instance& before, const FlipEvent& e, const Instance& after) {
      const bool t_flip = std::any_of(e.removed.begin(), e.removed.end(), [&](const Segment& r) {
        return before.in_t(r.a) || before.in_t(r.b);
      });
      if (!t_flip) return;
      ++tf;
      bad += eta_T_sum(after) >= eta_T_sum(before);
    };
    const UntangleTrace ins = untangle::untangle(StrategyId::separated_insertion, inst);
    replay(ins, check_eta);
    const UntangleTrace ri = untangle::untangle(StrategyId::separated_removal_insertion, inst);
    replay(ri, check_eta);
    for (const FlipEvent& e : ri.events) phase1 += has_tag(e, "/phase1");
    SeparatedRun& run = corpora[k][size_t(i)];
    run.ins_flips = double(ins.events.size());
    run.ins_x = (t * p + inst.n()) * log_c(inst);
    run.ri_flips = double(ri.events.size());
    run.ri_x = inst.n() + t * p;
    std::lock_guard lock(mu);
    eta_bad += bad;
    t_flips += tf;
    phase1_bad += double(phase1) > t * p;
    invalid += ins.verdict != "valid" || ri.verdict != "valid" ||
               !oracle::validate_trace(ins).valid || !oracle::validate_trace(ri).valid;
  });
  // Least-squares c through the origin for flips ~ c * x.
  auto fit = [](const std::vector<SeparatedRun>& runs, bool ri) {
    double num = 0, den = 0;
    for (const SeparatedRun& r : runs) {
      const double x = ri ? r.ri_x : r.ins_x, y = ri ? r.ri_flips : r.ins_flips;
      num += x * y;
      den += x * x;
    }
    return num / den;
  };
  const double ci[2] = {fit(corpora[0], false), fit(corpora[1], false)};
  const double cr[2] = {fit(corpora[0], true), fit(corpora[1], true)};
  auto stable = [](const double* c) {
    return c[0] > 0 && c[1] > 0 && std::max(c[0], c[1]) <= 1.2 * std::min(c[0], c[1]);
  };
  report("6 separated strategies", eta_bad == 0 && phase1_bad == 0 && invalid == 0 &&
                                      stable(ci) && stable(cr),
         std::to_string(t_flips) + " T-flips, " + std::to_string(eta_bad) +
             " without eta_T decrease; " + std::to_string(phase1_bad) +
             " traces with phase-1 count over t*|P|; insertion c = " + fmt(ci[0], 4) + " / " +
             fmt(ci[1], 4) + ", removal+insertion c = " + fmt(cr[0], 4) + " / " +
             fmt(cr[1], 4) + "; " + std::to_string(invalid) + " invalid");
}

void criterion_7() {
  std::mutex mu;
  int invalid = 0, bad_notes = 0, runs = 0;
  double c = 0;
  parallel_for(6 * 40, [&](int job) {
    const int t = 1 + job / 40, i = job % 40;
    GeneratorSpec s;
    s.geometry_class = GeometryClass::two_T_outside;
    s.property = Property::multigraph;
    s.n = kLadder[size_t(i) % std::size(kLadder)];
    s.t = t;
    s.seed = 9000 + std::uint64_t(job);
    const Instance inst = harness::generate(s);
    const harness::RunOutcome out = harness::run(StrategyId::two_outside_removal, inst, {});
    int notes = 0;
    for (const std::string& n : out.trace.notes) {
      notes += n.find("invalid split") != std::string::npos ||
               n.find("recursion parameter") != std::string::npos ||
               n.find("fallback") != std::string::npos;
    }
    const double bound = std::ldexp(harness::d_conv(inst.n(), int(inst.convex_ids.size())),
                                    inst.t_degree_sum());
    std::lock_guard lock(mu);
    ++runs;
    invalid += !out.ok();
    bad_notes += notes > 0;
    c = std::max(c, double(out.trace.events.size()) / bound);
  });
  report("7 two outside points", invalid == 0 && bad_notes == 0,
         std::to_string(runs) + " runs for t = 1..6; " + std::to_string(invalid) + " invalid, " +
             std::to_string(bad_notes) +
             " with an invalid split, a non-decreasing recursion parameter or a fallback; "
             "fitted c = max flips/(2^t*d_conv) = " + fmt(c, 4));
}

// ---------------------------------------------------------------------------

enum : unsigned { k_ct_ct = 1, k_cc_cc = 2, k_ct_noncentral = 4, k_ct_central = 8, k_tt_cc = 16 };

int t_ends(const Instance& inst, const Segment& s) {
  return int(inst.in_t(s.a)) + int(inst.in_t(s.b));
}

unsigned crossing_types(const Instance& inst) {
  const Point& q = inst.point(inst.t_ids[0]);
  const Point& q2 = inst.point(inst.t_ids[1]);
  unsigned mask = 0;
  for (const auto& [a, b] : crossing_pairs(inst)) {
    const int ka = t_ends(inst, a), kb = t_ends(inst, b);
    if (ka == 1 && kb == 1) {
      mask |= k_ct_ct;
    } else if (ka == 0 && kb == 0) {
      mask |= k_cc_cc;
    } else if (ka == 0 || kb == 0) {
      const Segment& cc = ka == 0 ? a : b;
      const int other = ka == 0 ? kb : ka;
      if (other == 2) {
        mask |= k_tt_cc;
      } else {
        const bool central = classify_cc(q, q2, inst.point(cc.a), inst.point(cc.b)) == CcKind::central;
        mask |= central ? k_ct_central : k_ct_noncentral;
      }
    }
  }
  return mask;
}

int phase_of(const FlipEvent& e) {
  for (int k = 5; k >= 1; --k) {
    if (e.tag.find("phase" + std::to_string(k)) != std::string::npos) return k;
  }
  return 6;
}

bool contains(const FlipEvent& e, std::string_view part) {
  return e.tag.find(part) != std::string::npos;
}

void criterion_8() {
  std::mutex mu;
  int runs = 0, invalid = 0, bad_notes = 0;
  long post_bad = 0, chi_bad = 0, chi_rises = 0, steps = 0, phase4_bad = 0, phase4_steps = 0;
  double c = 0;
  const Property props[] = {Property::multigraph, Property::matching, Property::tour,
                            Property::tree, Property::redblue_matching};
  parallel_for(150, [&](int i) {
    GeneratorSpec s;
    s.geometry_class = GeometryClass::two_T_inside;
    s.property = props[i % 5];
    s.n = kLadder[size_t(i) % std::size(kLadder)];
    s.t = 1 + i % 8;
    s.seed = 11000 + std::uint64_t(i);
    const Instance inst = harness::generate(s);
    const harness::RunOutcome out = harness::run(StrategyId::two_inside_removal, inst, {});
    int notes = 0;
    for (const std::string& n : out.trace.notes) {
      notes += n.find("postcondition violated") != std::string::npos ||
               n.find("invariant violated") != std::string::npos ||
               n.find("did not finish") != std::string::npos ||
               n.find("fallback") != std::string::npos;
    }
    // Crossing types removed by phases 1..5, cumulatively.
    const unsigned done_after[] = {0, k_ct_ct, k_ct_ct | k_cc_cc,
                                   k_ct_ct | k_cc_cc | k_ct_noncentral,
                                   k_ct_ct | k_cc_cc | k_ct_noncentral | k_ct_central,
                                   k_ct_ct | k_cc_cc | k_ct_noncentral | k_ct_central | k_tt_cc};
    // Phase ends: every type removed so far is absent. Phase-3 step ends: no
    // CCxCC and no CTxCT crossing, and chi rises only after a CC+TT insertion.
    // Phase-4 step ends: central CCxCT plus CTxCT crossings went down.
    long pbad = 0, cbad = 0, rises = 0, nsteps = 0, p4bad = 0, p4steps = 0;
    const std::vector<FlipEvent>& ev = out.trace.events;
    Instance cur = inst;
    int phase = 1;
    long chi3 = -1, chi4 = -1;
    bool cc_tt = false;
    auto close_steps = [&] {
      if (chi3 >= 0) {
        if (crossing_types(cur) & (k_ct_ct | k_cc_cc)) ++pbad;
        const long now = crossing_count_chi(cur, ChiScope::noncentral_cc_x_ct);
        if (now > chi3) {
          ++rises;
          if (!cc_tt || now - chi3 > inst.t()) ++cbad;
        }
      }
      if (chi4 >= 0) {
        p4bad += crossing_count_chi(cur, ChiScope::central_cc_x_ct_plus_ct_x_ct) >= chi4;
      }
      chi3 = chi4 = -1;
    };
    for (const FlipEvent& e : ev) {
      const bool continues = contains(e, "-repair") || contains(e, "-restore") || contains(e, "-loop");
      if (!continues) close_steps();
      const int p = phase_of(e);
      if (p > phase) {
        if (crossing_types(cur) & done_after[size_t(p - 1)]) ++pbad;
        phase = p;
      }
      if (has_tag(e, "/phase3")) {
        ++nsteps;
        chi3 = crossing_count_chi(cur, ChiScope::noncentral_cc_x_ct);
        const int a = t_ends(cur, e.inserted[0]), b = t_ends(cur, e.inserted[1]);
        cc_tt = (a == 0 && b == 2) || (a == 2 && b == 0);
      }
      if (has_tag(e, "/phase4-ear")) {
        ++p4steps;
        chi4 = crossing_count_chi(cur, ChiScope::central_cc_x_ct_plus_ct_x_ct);
      }
      cur = apply_flip(cur, e);
    }
    close_steps();
    if (crossing_types(cur) != 0) ++pbad;
    const double bound = harness::d_conv(inst.n(), int(inst.convex_ids.size())) +
                         double(inst.t_degree_sum()) * inst.n();
    std::lock_guard lock(mu);
    ++runs;
    invalid += !out.ok();
    bad_notes += notes > 0;
    post_bad += pbad;
    chi_bad += cbad;
    phase4_bad += p4bad;
    phase4_steps += p4steps;
    chi_rises += rises;
    steps += nsteps;
    c = std::max(c, double(ev.size()) / bound);
  });
  report("8 two inside points",
         invalid == 0 && bad_notes == 0 && post_bad == 0 && chi_bad == 0 && phase4_bad == 0,
         std::to_string(runs) + " runs; " + std::to_string(post_bad) +
             " phase or phase-3 step ends with a removed crossing type present; " +
             std::to_string(steps) + " phase-3 steps, " + std::to_string(chi_rises) +
             " chi increases, " + std::to_string(chi_bad) +
             " not explained by a CC+TT insertion of at most t; " + std::to_string(phase4_steps) +
             " phase-4 steps, " + std::to_string(phase4_bad) + " without a chi decrease; " +
             std::to_string(bad_notes) + " traces with failure notes; " +
             std::to_string(invalid) + " invalid; fitted c = max flips/(d_conv+t*n) = " + fmt(c, 4));
}

void criterion_9() {
  std::mutex mu;
  int invalid = 0, line_bad = 0, count_bad = 0;
  long flips = 0;
  parallel_for(100, [&](int i) {
    GeneratorSpec s;
    s.geometry_class = GeometryClass::T_outside_hull;
    s.property = Property::matching;
    s.family = Family::separating_line;
    s.n = 4 + int((std::uint64_t(i) * 2654435761u) % 253);
    s.seed = 13000 + std::uint64_t(i);
    const Instance inst = harness::generate(s);
    const Segment pq = *default_target(StrategyId::liberate_line, inst);
    const harness::RunOutcome out = harness::run(StrategyId::liberate_line, inst, {});
    Instance final_state;
    replay_verdict(inst, out.trace.events, false, &final_state);
    const OrientedLine l = OrientedLine::through(inst.point(pq.a), inst.point(pq.b));
    long after_pre = 0;
    for (const FlipEvent& e : out.trace.events) after_pre += !has_tag(e, "/preprocess");
    std::lock_guard lock(mu);
    invalid += !out.ok();
    line_bad += line_lambda(final_state, l) != 0;
    count_bad += after_pre > (inst.n() - 1) + 2;
    flips += long(out.trace.events.size());
  });
  // n copies of one chord plus pq.
  std::string rejection = "accepted";
  {
    InstanceDocument doc;
    const std::vector<std::pair<Coord, Coord>> xy = {{0, -10}, {0, 10}, {10, 10}, {10, -10}, {-30, 1}, {40, -1}};
    for (size_t k = 0; k < xy.size(); ++k) doc.points.push_back({int(k), xy[k].first, xy[k].second, Color::none});
    for (int k = 0; k < 8; ++k) doc.segments.emplace_back(1, 2);
    doc.segments.emplace_back(4, 5);
    doc.property = "multigraph";
    doc.geometry_class = "T_outside_hull";
    doc.convex_ids = std::vector<int>{0, 3, 2, 1};
    doc.t_ids = std::vector<int>{4, 5};
    try {
      check_precondition(StrategyId::liberate_line, load_instance(doc));
    } catch (const UntangleError& e) {
      rejection = e.what();
    }
  }
  const bool rejected = rejection.find("not a matching") != std::string::npos;
  report("9 liberating a line", invalid == 0 && line_bad == 0 && count_bad == 0 && rejected,
         "100 matchings with n <= 256, " + std::to_string(flips) + " flips; " +
             std::to_string(line_bad) + " with segments still crossing line pq; " +
             std::to_string(count_bad) + " over |S|+2 flips after preprocessing; multiset: " +
             rejection + "; " + std::to_string(invalid) + " invalid");
}

// ---------------------------------------------------------------------------

Point pt(Coord x, Coord y, int id) { return {id, x, y, Color::none}; }

void criterion_10() {
  const int want = 10000;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<Coord> d(-1000, 1000);
  int errors[3] = {0, 0, 0}, wrong[3] = {0, 0, 0}, done[3] = {0, 0, 0};

  while (done[0] < want) {
    const Point a = pt(d(rng), d(rng), 0), b = pt(d(rng), d(rng), 1), c = pt(d(rng), d(rng), 2);
    const Point p = pt(d(rng), d(rng), 3), q = pt(d(rng), d(rng), 4);
    const std::vector<Point> all = {a, b, c, p, q};
    if (find_degeneracy(all)) continue;
    const auto tri = open_triangle(a, b, c);
    if (!segment_meets_open_region(p, q, tri)) continue;
    if (segment_meets_open_region(p, p, tri) || segment_meets_open_region(q, q, tri)) continue;
    ++done[0];
    try {
      const Segment s = triangle_hide_pick(a, b, c, p, q);
      const int inner = s.has(3) ? 3 : 4;
      wrong[0] += !segment_meets_open_region(all[size_t(inner)], all[size_t(s.other(inner))], tri);
    } catch (const UntangleError&) {
      ++errors[0];
    }
  }

  while (done[1] < want) {
    std::vector<Point> pts;
    for (int i = 0; i < 4; ++i) pts.push_back(pt(d(rng), d(rng), i));
    if (find_degeneracy(pts) || !segments_cross(pts[0], pts[1], pts[2], pts[3])) continue;
    const Coord dx = d(rng), dy = d(rng);
    if (dx == 0 && dy == 0) continue;
    const OrientedLine l(pts[0].x, pts[0].y, dx, dy);
    if (l.side(pts[1]) == Side::on || l.side(pts[2]) == Side::on || l.side(pts[3]) == Side::on) continue;
    if (!line_crosses_segment(l, pts[2], pts[3])) continue;
    ++done[1];
    try {
      const InsertionPair ins = icritical_choice(pts, Segment(0, 1), Segment(2, 3), 0, l);
      for (const Segment& s : ins) wrong[1] += line_crosses_segment(l, pts[size_t(s.a)], pts[size_t(s.b)]);
    } catch (const UntangleError&) {
      ++errors[1];
    }
  }

  while (done[2] < want) {
    const int k = 5 + int(rng() % 6);
    std::vector<Point> pts;
    for (int i = 0; i < k; ++i) {
      const double th = 2 * std::numbers::pi * (i + 0.4 * double(rng() % 100) / 100.0) / k;
      pts.push_back(pt(std::llround(1e4 * std::cos(th)), std::llround(1e4 * std::sin(th)), i));
    }
    for (int i = 0; i < 4; ++i) {
      const double th = double(rng() % 6283) / 1000.0;
      const double r = (i == 3 ? 0.9e4 : 1.1e4) + double(rng() % 20000);
      pts.push_back(pt(std::llround(r * std::cos(th)), std::llround(r * std::sin(th)), k + i));
    }
    if (find_degeneracy(pts)) continue;
    const std::vector<Point> hull = convex_hull(std::vector<Point>(pts.begin(), pts.begin() + k));
    if (hull.size() != size_t(k)) continue;
    const Point &q1 = pts[size_t(k)], &q2 = pts[size_t(k + 1)], &q3 = pts[size_t(k + 2)],
                &q4 = pts[size_t(k + 3)];
    if (!segments_cross(q1, q3, q2, q4)) continue;
    if (!strictly_outside_convex(hull, q1) || !strictly_outside_convex(hull, q2) ||
        !strictly_outside_convex(hull, q3) || strictly_inside_convex(hull, q4)) {
      continue;
    }
    if (segment_meets_convex_interior(q1, q3, hull)) continue;
    ++done[2];
    try {
      const CriticalLine cl = critical_tangent_line(hull, pts, k, k + 1, k + 2, k + 3);
      wrong[2] += !line_crosses_segment(cl.line, q1, q3) && !line_crosses_segment(cl.line, q2, q4);
    } catch (const UntangleError&) {
      ++errors[2];
    }
  }
  const bool pass = errors[0] + errors[1] + errors[2] + wrong[0] + wrong[1] + wrong[2] == 0;
  auto part = [&](const char* name, int k) {
    return std::string(name) + " " + std::to_string(done[k]) + " trials, " +
           std::to_string(errors[k]) + " none-found, " + std::to_string(wrong[k]) + " wrong";
  };
  report("10 geometric lemma fuzz", pass,
         part("triangle_hide_pick", 0) + "; " + part("icritical_choice", 1) + "; " +
             part("critical_tangent_line", 2));
}

// ---------------------------------------------------------------------------
// Criterion 11: every segment multiset of size <= 4 covering all points of a
// small configuration, for every property the multiset satisfies.

struct Config {
  std::string cls;
  std::vector<std::pair<Coord, Coord>> xy;
  std::vector<int> convex_ids, t_ids;
};

std::vector<std::pair<Coord, Coord>> ngon(int k, double r = 1000, double phase = 0.3) {
  std::vector<std::pair<Coord, Coord>> out;
  for (int i = 0; i < k; ++i) {
    const double th = phase + 2 * std::numbers::pi * i / k;
    out.push_back({std::llround(r * std::cos(th)), std::llround(r * std::sin(th))});
  }
  return out;
}

std::vector<Config> small_configs() {
  std::vector<Config> out;
  for (int k = 4; k <= 8; ++k) {
    Config c{"convex", ngon(k), {}, {}};
    for (int i = 0; i < k; ++i) c.convex_ids.push_back(i);
    out.push_back(c);
  }
  auto with_t = [&](const std::string& cls, int k, std::vector<std::pair<Coord, Coord>> extra) {
    Config c{cls, ngon(k), {}, {}};
    for (int i = 0; i < k; ++i) c.convex_ids.push_back(i);
    for (const auto& p : extra) {
      c.t_ids.push_back(int(c.xy.size()));
      c.xy.push_back(p);
    }
    out.push_back(c);
  };
  with_t("one_T_point", 4, {{37, 101}});
  with_t("one_T_point", 5, {{-71, 43}});
  with_t("one_T_point", 4, {{2311, 187}});
  with_t("one_T_point", 5, {{-123, 2203}});
  with_t("two_T_inside", 4, {{-97, 211}, {173, -89}});
  with_t("two_T_inside", 6, {{-31, 302}, {251, -113}});
  with_t("two_T_outside", 4, {{2311, 187}, {-1907, -613}});
  with_t("two_T_outside", 6, {{91, 2417}, {1703, -1289}});
  with_t("one_in_one_out", 4, {{61, -103}, {-2203, 347}});
  with_t("one_in_one_out", 6, {{-113, 59}, {1511, 1789}});
  with_t("parallel_separated", 4, {{113, 3001}, {-97, -2999}});
  with_t("parallel_separated", 5, {{211, 2993}});
  with_t("T_outside_hull", 4, {{2311, 187}, {-1907, -613}, {97, 2503}});
  return out;
}

void enumerate_multisets(int k, int max_size, const std::function<void(const std::vector<std::pair<int, int>>&)>& f) {
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) edges.emplace_back(a, b);
  }
  std::vector<std::pair<int, int>> cur;
  std::function<void(size_t)> rec = [&](size_t from) {
    if (!cur.empty()) {
      std::vector<char> used(size_t(k), 0);
      for (const auto& [a, b] : cur) used[size_t(a)] = used[size_t(b)] = 1;
      if (std::all_of(used.begin(), used.end(), [](char u) { return u != 0; })) f(cur);
    }
    if (int(cur.size()) == max_size) return;
    for (size_t e = from; e < edges.size(); ++e) {
      cur.push_back(edges[e]);
      rec(e);
      cur.pop_back();
    }
  };
  rec(0);
}

// Trace mutations the validators must both reject or both accept.
std::vector<std::vector<FlipEvent>> mutations(const std::vector<FlipEvent>& ev) {
  std::vector<std::vector<FlipEvent>> out;
  if (ev.empty()) return out;
  out.push_back(std::vector<FlipEvent>(ev.begin(), ev.end() - 1));
  std::vector<FlipEvent> swapped = ev;
  const auto recon = reconnections(swapped[0].removed[0], swapped[0].removed[1]);
  swapped[0].inserted = normalized(recon[0]) == normalized(swapped[0].inserted) ? recon[1] : recon[0];
  out.push_back(swapped);
  std::vector<FlipEvent> doubled = ev;
  doubled.push_back(ev.back());
  out.push_back(doubled);
  return out;
}

void criterion_11() {
  const std::vector<Config> configs = small_configs();
  struct Job {
    size_t config;
    std::vector<std::pair<int, int>> segs;
    std::string property;
    std::vector<Color> colors;
  };
  std::vector<Job> jobs;
  const char* props[] = {"multigraph", "matching", "tour", "tree"};
  for (size_t c = 0; c < configs.size(); ++c) {
    const int k = int(configs[c].xy.size());
    enumerate_multisets(k, 4, [&](const std::vector<std::pair<int, int>>& segs) {
      for (const char* p : props) jobs.push_back({c, segs, p, {}});
      // Red-blue: every colouring that makes the matching bichromatic.
      if (int(segs.size()) * 2 == k) {
        const int m = int(segs.size());
        for (int mask = 0; mask < (1 << m); ++mask) {
          std::vector<Color> col(static_cast<size_t>(k));
          for (int i = 0; i < m; ++i) {
            const bool flip = (mask >> i) & 1;
            col[size_t(segs[size_t(i)].first)] = flip ? Color::blue : Color::red;
            col[size_t(segs[size_t(i)].second)] = flip ? Color::red : Color::blue;
          }
          jobs.push_back({c, segs, "redblue_matching", col});
        }
      }
    });
  }
  std::mutex mu;
  long instances = 0, runs = 0, below = 0, disagree = 0, invalid = 0, capped = 0, checked = 0;
  std::vector<std::string> examples;
  parallel_for(int(jobs.size()), [&](int j) {
    const Job& job = jobs[size_t(j)];
    const Config& cfg = configs[job.config];
    InstanceDocument doc;
    for (size_t i = 0; i < cfg.xy.size(); ++i) {
      doc.points.push_back({int(i), cfg.xy[i].first, cfg.xy[i].second,
                            job.colors.empty() ? Color::none : job.colors[i]});
    }
    doc.segments = job.segs;
    doc.property = job.property;
    doc.geometry_class = cfg.cls;
    doc.convex_ids = cfg.convex_ids;
    doc.t_ids = cfg.t_ids;
    Instance inst;
    try {
      inst = load_instance(doc);
    } catch (const UntangleError&) {
      return;  // the multiset does not have this property
    }
    const oracle::SearchResult best = oracle::min_flips_bfs(inst, 2'000'000);
    long r = 0, b = 0, d = 0, inv = 0, chk = 0;
    std::string example;
    for (StrategyId id : all_strategies()) {
      try {
        check_precondition(id, inst);
      } catch (const UntangleError&) {
        continue;
      }
      UntangleTrace tr;
      ++r;
      try {
        tr = untangle::untangle(id, inst);
      } catch (const UntangleError& e) {
        ++inv;
        example = std::string(to_string(id)) + " threw '" + e.what() + "' on " +
                  instance_to_json(inst);
        continue;
      }
      const bool crossing_free_end = tr.verdict == "valid" && !is_fragment(id);
      inv += tr.verdict != "valid";
      if (crossing_free_end && best.flips && int(tr.events.size()) < *best.flips) {
        ++b;
        example = std::string(to_string(id)) + " on " + instance_to_json(inst);
      }
      std::vector<std::vector<FlipEvent>> variants = mutations(tr.events);
      variants.push_back(tr.events);
      for (const auto& ev : variants) {
        for (bool final_check : {false, true}) {
          ++chk;
          const bool model = replay_verdict(inst, ev, final_check) == "valid";
          if (model != oracle::validate(inst, ev, final_check).valid) {
            ++d;
            example = std::string(to_string(id)) + " disagreement on " + instance_to_json(inst);
          }
        }
      }
    }
    std::lock_guard lock(mu);
    ++instances;
    runs += r;
    below += b;
    disagree += d;
    invalid += inv;
    checked += chk;
    capped += !best.flips;
    if (!example.empty() && examples.size() < 3) examples.push_back(example);
  });
  for (const std::string& e : examples) std::printf("  %s\n", e.c_str());
  report("11 exhaustive small instances", below == 0 && disagree == 0 && invalid == 0 && capped == 0,
         std::to_string(instances) + " instances on " + std::to_string(configs.size()) +
             " point configurations, " + std::to_string(runs) + " strategy runs; " +
             std::to_string(below) + " shorter than the exact minimum; " +
             std::to_string(checked) + " validator comparisons, " + std::to_string(disagree) +
             " disagreements; " + std::to_string(invalid) + " invalid; " +
             std::to_string(capped) + " searches capped");
}

// ---------------------------------------------------------------------------

void criterion_12() {
  const std::vector<int> sizes = {32, 64, 128, 256, 512};
  std::vector<harness::BenchRow> rows(sizes.size() * 2);
  parallel_for(int(rows.size()), [&](int j) {
    GeneratorSpec s;
    s.geometry_class = GeometryClass::convex;
    s.property = Property::tour;
    s.family = Family::stress_tour;
    s.n = sizes[size_t(j / 2)];
    s.seed = 1;
    const Instance inst = harness::generate(s);
    const StrategyId id = j % 2 ? StrategyId::convex_removal : StrategyId::baseline_noclice;
    rows[size_t(j)] = harness::run(id, inst, {}).row;
    rows[size_t(j)].family = "stress_tour";
  });
  std::ofstream csv("acceptance_scaling.csv");
  csv << harness::csv_header() << "\n";
  for (const harness::BenchRow& r : rows) csv << harness::csv_line(r) << "\n";
  const std::vector<harness::StrategySummary> summary = harness::summarize(rows);
  std::ofstream("acceptance_scaling_summary.txt") << harness::summary_text(summary);

  std::vector<double> x, y;
  bool removal_ok = true, all_ok = true;
  std::string flips_text;
  for (const harness::BenchRow& r : rows) {
    all_ok &= r.status == "ok";
    if (r.strategy == "baseline_noclice") {
      x.push_back(r.n);
      y.push_back(double(r.flips));
      flips_text += (flips_text.empty() ? "" : ",") + std::to_string(r.flips);
    } else {
      removal_ok &= double(r.flips) <= harness::d_conv(r.n, r.convex);
    }
  }
  double removal_ratio = 0;
  for (const harness::BenchRow& r : rows) {
    if (r.strategy == "convex_removal") removal_ratio = std::max(removal_ratio, r.ratio);
  }
  const double exponent = harness::fit_exponent(x, y).value_or(0);
  report("12 scaling on the stress tours", all_ok && removal_ok && exponent >= 1.8,
         "baseline flips " + flips_text + " for n = 33..513, fitted exponent " +
             fmt(exponent) + " (need >= 1.8); convex_removal within n*(floor(log2|C|)+1): " +
             (removal_ok ? "yes" : "no") + ", largest ratio " + fmt(removal_ratio) +
             "; CSV acceptance_scaling.csv, summary acceptance_scaling_summary.txt");
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criteria_1_and_2();
  const std::vector<Instance> corpus = convex_corpus();
  criterion_3(corpus);
  criterion_4(corpus);
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  int failed = 0;
  for (const Result& r : results) failed += !r.pass;
  std::printf("%d of %zu criteria passed in %.1f s\n", int(results.size()) - failed,
              results.size(), seconds_since(t0));
  return failed == 0 ? 0 : 1;
}
