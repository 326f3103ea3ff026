#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "untangle/model.hpp"

namespace untangle {

/// Mutable untangling state shared by the strategies.
///
/// Segments live in numbered slots. A flip reuses the two slots of the removed
/// pair for the inserted pair, so strategies can follow "the segment incident
/// to q" across flips. Slots can be deactivated to solve independent
/// sub-problems: crossing counts only consider active slots, while property
/// checks always see the whole multiset.
class Workspace {
 public:
  explicit Workspace(const Instance& inst);

  const Instance& instance() const { return initial_; }
  const Point& point(int id) const { return initial_.point(id); }
  bool in_t(int id) const { return initial_.in_t(id); }
  bool in_c(int id) const { return initial_.convex_rank(id) >= 0; }

  int slot_count() const { return static_cast<int>(slots_.size()); }
  const Segment& segment(int slot) const { return slots_[idx(slot)].seg; }
  bool active(int slot) const { return slots_[idx(slot)].active; }
  /// Number of active slots crossing this one (0 when inactive).
  int crossings(int slot) const { return slots_[idx(slot)].crossings; }

  /// Active slots ordered by (segment, slot).
  std::vector<int> slots() const;
  /// All slots ordered by (segment, slot), active or not.
  std::vector<int> all_slots() const;
  /// Active slots crossing `slot`, ordered by (segment, slot).
  std::vector<int> partners(int slot) const;

  bool crosses(int s1, int s2) const;
  bool segment_crosses(const Segment& s1, const Segment& s2) const;
  bool crossing_free() const { return total_crossings_ == 0; }
  long total_crossings() const { return total_crossings_; }
  /// Lexicographically first crossing pair among active slots.
  std::optional<std::pair<int, int>> first_crossing_pair() const;

  void set_active(int slot, bool on);
  /// Makes exactly the given slots active; returns the previous mask.
  std::vector<char> restrict_to(const std::vector<int>& keep);
  void restore(const std::vector<char>& mask);

  /// Reconnections of the two slots that keep the property, sorted.
  std::vector<InsertionPair> legal_insertions(int s1, int s2) const;
  /// Performs the flip and returns the slots now holding ins[0] and ins[1].
  /// Throws UntangleError(flip) if the pair does not cross or the insertion
  /// is illegal.
  std::pair<int, int> flip(int s1, int s2, const InsertionPair& ins,
                           std::string tag);
  /// Flip and return the slot of the inserted segment incident to `endpoint`.
  int flip_keeping(int s1, int s2, const InsertionPair& ins, std::string tag,
                   int endpoint);

  const std::vector<FlipEvent>& events() const { return events_; }
  int flip_count() const { return static_cast<int>(events_.size()); }
  Instance current() const;

  void note(std::string text) { notes_.push_back(std::move(text)); }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  struct Slot {
    Segment seg;
    bool active = true;
    int crossings = 0;
  };

  static size_t idx(int slot) { return static_cast<size_t>(slot); }
  bool property_ok_after(int s1, int s2, const InsertionPair& ins) const;
  void add_crossings(int slot, int sign);

  Instance initial_;
  std::vector<Slot> slots_;
  std::set<std::pair<Segment, int>> order_;
  long total_crossings_ = 0;
  std::vector<FlipEvent> events_;
  std::vector<std::string> notes_;
};

/// Restricts a workspace to a subset of slots for the lifetime of the scope.
class ActiveScope {
 public:
  ActiveScope(Workspace& ws, const std::vector<int>& keep)
      : ws_(ws), saved_(ws.restrict_to(keep)) {}
  ~ActiveScope() { ws_.restore(saved_); }
  ActiveScope(const ActiveScope&) = delete;
  ActiveScope& operator=(const ActiveScope&) = delete;

 private:
  Workspace& ws_;
  std::vector<char> saved_;
};

}  // namespace untangle
