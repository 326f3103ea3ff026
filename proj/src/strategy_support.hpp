#pragma once

// Building blocks shared by the strategy implementations. Everything here
// works on a Workspace and only looks at active slots unless stated otherwise.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "untangle/strategies.hpp"
#include "untangle/workspace.hpp"

namespace untangle::detail {

inline int t_degree(const Workspace& ws, int slot) {
  const Segment& s = ws.segment(slot);
  return int(ws.in_t(s.a)) + int(ws.in_t(s.b));
}
inline bool is_cc(const Workspace& ws, int slot) {
  return t_degree(ws, slot) == 0;
}
inline bool is_ct(const Workspace& ws, int slot) {
  return t_degree(ws, slot) == 1;
}
inline bool is_tt(const Workspace& ws, int slot) {
  return t_degree(ws, slot) == 2;
}
/// The T endpoint of a CT-segment.
inline int t_end(const Workspace& ws, int slot) {
  const Segment& s = ws.segment(slot);
  return ws.in_t(s.a) ? s.a : s.b;
}
/// The C endpoint of a CT-segment.
inline int c_end(const Workspace& ws, int slot) {
  const Segment& s = ws.segment(slot);
  return ws.in_t(s.a) ? s.b : s.a;
}

/// Sum of T-degrees over the active slots.
int active_t(const Workspace& ws);

/// Active slots satisfying the predicate, ordered by (segment, slot).
std::vector<int> select(const Workspace& ws,
                        const std::function<bool(int)>& pred);

/// Lexicographically first crossing pair (by segment, then slot) accepted by
/// the predicate.
std::optional<std::pair<int, int>> first_pair(
    const Workspace& ws, const std::function<bool(int, int)>& accept);

/// First slot (any activity) holding the segment, or -1.
int slot_of(const Workspace& ws, const Segment& s);

/// Counterclockwise order of the given points, which must be in convex
/// position.
std::vector<int> convex_order(const Workspace& ws, std::vector<int> ids);

/// Partner of `slot` whose crossing lies farthest from (or closest to) the
/// endpoint `from` along the segment, restricted to partners accepted by the
/// filter. Returns -1 when there is none.
int partner_by_distance(const Workspace& ws, int slot, int from, bool farthest,
                        const std::function<bool(int)>& accept = {});

/// Prefers `wanted` when legal, else the first legal insertion.
InsertionPair prefer(const Workspace& ws, int s1, int s2,
                     const InsertionPair& wanted);
InsertionPair first_legal(const Workspace& ws, int s1, int s2);

/// Flip the lexicographically first crossing pair with the first legal
/// insertion until the active slots are crossing-free.
void baseline(Workspace& ws, std::string_view tag);

/// Untangles the active slots, whose endpoints must all appear in `order`
/// (counterclockwise, convex position), by repeatedly halving the smallest
/// positive crossing depth.
void convex_removal(Workspace& ws, std::span<const int> order,
                    std::string_view tag);

/// Flips with the lexicographically first crossing pair and the convex
/// insertion rule until the active slots are crossing-free. All endpoints must
/// be in C.
void convex_insertion(Workspace& ws, std::string_view tag);

/// Repeatedly flips `slot` with the partner crossing it farthest from its
/// endpoint q, following the inserted segment incident to q, while
/// `keep_going` accepts the partner. Returns the slot now incident to q.
int farthest_first(Workspace& ws, int slot, int q, std::string_view tag,
                   const std::function<bool(int)>& keep_going = {});

/// Notes a failure, then finishes with the baseline so the trace ends
/// crossing-free.
void fallback(Workspace& ws, const std::string& why);

std::string tag(std::string_view base, std::string_view step);

// Strategy bodies. Each expects the precondition to have been checked.
void run_separated_insertion(Workspace& ws);
void run_separated_removal_insertion(Workspace& ws);
void run_one_point_removal(Workspace& ws);
void run_two_outside_removal(Workspace& ws, int t_cap);
void run_two_inside_removal(Workspace& ws);
void run_one_in_one_out_removal(Workspace& ws);
void run_liberate_line(Workspace& ws, int pq_slot);
void run_outside_matching(Workspace& ws);

}  // namespace untangle::detail
