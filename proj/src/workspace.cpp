#include "untangle/workspace.hpp"

#include <algorithm>

#include "untangle/errors.hpp"
#include "untangle/union_find.hpp"

namespace untangle {

Workspace::Workspace(const Instance& inst) : initial_(inst) {
  for (const Segment& s : inst.segments.expanded()) {
    slots_.push_back({s, true, 0});
  }
  for (int i = 0; i < slot_count(); ++i) order_.emplace(segment(i), i);
  for (int i = 0; i < slot_count(); ++i) {
    for (int j = i + 1; j < slot_count(); ++j) {
      if (crosses(i, j)) {
        ++slots_[idx(i)].crossings;
        ++slots_[idx(j)].crossings;
        ++total_crossings_;
      }
    }
  }
}

bool Workspace::segment_crosses(const Segment& s1, const Segment& s2) const {
  return segments_cross(point(s1.a), point(s1.b), point(s2.a), point(s2.b));
}

bool Workspace::crosses(int s1, int s2) const {
  return segment_crosses(segment(s1), segment(s2));
}

std::vector<int> Workspace::slots() const {
  std::vector<int> out;
  for (const auto& [seg, slot] : order_) {
    if (active(slot)) out.push_back(slot);
  }
  return out;
}

std::vector<int> Workspace::all_slots() const {
  std::vector<int> out;
  for (const auto& [seg, slot] : order_) out.push_back(slot);
  return out;
}

std::vector<int> Workspace::partners(int slot) const {
  std::vector<int> out;
  if (!active(slot) || crossings(slot) == 0) return out;
  for (const auto& [seg, other] : order_) {
    if (other != slot && active(other) && crosses(slot, other)) {
      out.push_back(other);
    }
  }
  return out;
}

std::optional<std::pair<int, int>> Workspace::first_crossing_pair() const {
  if (total_crossings_ == 0) return std::nullopt;
  for (const auto& [seg, slot] : order_) {
    if (!active(slot) || crossings(slot) == 0) continue;
    for (const auto& [seg2, other] : order_) {
      if (other != slot && active(other) && crosses(slot, other)) {
        return std::make_pair(slot, other);
      }
    }
  }
  return std::nullopt;
}

void Workspace::add_crossings(int slot, int sign) {
  Slot& me = slots_[idx(slot)];
  for (int k = 0; k < slot_count(); ++k) {
    if (k == slot || !active(k)) continue;
    if (crosses(slot, k)) {
      slots_[idx(k)].crossings += sign;
      me.crossings += sign;
      total_crossings_ += sign;
    }
  }
}

void Workspace::set_active(int slot, bool on) {
  Slot& s = slots_[idx(slot)];
  if (s.active == on) return;
  if (on) {
    s.active = true;
    s.crossings = 0;
    add_crossings(slot, +1);
  } else {
    add_crossings(slot, -1);
    s.active = false;
    s.crossings = 0;
  }
}

std::vector<char> Workspace::restrict_to(const std::vector<int>& keep) {
  std::vector<char> saved(slots_.size());
  std::vector<char> want(slots_.size(), 0);
  for (size_t i = 0; i < slots_.size(); ++i) saved[i] = slots_[i].active;
  for (int k : keep) want[idx(k)] = 1;
  restore(want);
  return saved;
}

void Workspace::restore(const std::vector<char>& mask) {
  // Deactivate first so counts never include pairs that vanish anyway.
  for (int i = 0; i < slot_count(); ++i) {
    if (!mask[idx(i)]) set_active(i, false);
  }
  for (int i = 0; i < slot_count(); ++i) {
    if (mask[idx(i)]) set_active(i, true);
  }
}

bool Workspace::property_ok_after(int s1, int s2,
                                  const InsertionPair& ins) const {
  const Property prop = initial_.property;
  switch (prop) {
    case Property::multigraph:
    case Property::matching:
      return true;
    case Property::redblue_matching:
      return point(ins[0].a).color != point(ins[0].b).color &&
             point(ins[1].a).color != point(ins[1].b).color;
    case Property::tour:
    case Property::tree: {
      UnionFind uf(initial_.points.size());
      bool acyclic = true;
      for (int k = 0; k < slot_count(); ++k) {
        if (k == s1 || k == s2) continue;
        acyclic &= uf.unite(idx(segment(k).a), idx(segment(k).b));
      }
      for (const Segment& s : ins) acyclic &= uf.unite(idx(s.a), idx(s.b));
      if (uf.components() != 1) return false;
      // Degrees are preserved by every reconnection, so a connected 2-regular
      // graph is a Hamiltonian cycle and a connected graph on |P|-1 edges is a
      // spanning tree.
      return prop == Property::tour || acyclic;
    }
  }
  return false;
}

std::vector<InsertionPair> Workspace::legal_insertions(int s1, int s2) const {
  std::vector<InsertionPair> out;
  for (const InsertionPair& ins : reconnections(segment(s1), segment(s2))) {
    if (property_ok_after(s1, s2, ins)) out.push_back(ins);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<int, int> Workspace::flip(int s1, int s2, const InsertionPair& ins,
                                    std::string tag) {
  if (s1 == s2 || !crosses(s1, s2)) {
    fail(ErrorKind::flip, "removed pair does not cross (" + tag + ")");
  }
  const InsertionPair norm = normalized(ins);
  const auto options = reconnections(segment(s1), segment(s2));
  if (norm != options[0] && norm != options[1]) {
    fail(ErrorKind::flip, "inserted pair is not a reconnection (" + tag + ")");
  }
  if (!property_ok_after(s1, s2, norm)) {
    fail(ErrorKind::flip, "insertion breaks the property (" + tag + ")");
  }
  FlipEvent ev{{segment(s1), segment(s2)}, ins, std::move(tag)};

  const bool was_active1 = active(s1), was_active2 = active(s2);
  set_active(s1, false);
  set_active(s2, false);
  order_.erase({segment(s1), s1});
  order_.erase({segment(s2), s2});
  slots_[idx(s1)].seg = ins[0];
  slots_[idx(s2)].seg = ins[1];
  order_.emplace(ins[0], s1);
  order_.emplace(ins[1], s2);
  set_active(s1, was_active1 || was_active2);
  set_active(s2, was_active1 || was_active2);

  events_.push_back(std::move(ev));
  return {s1, s2};
}

int Workspace::flip_keeping(int s1, int s2, const InsertionPair& ins,
                            std::string tag, int endpoint) {
  auto [n1, n2] = flip(s1, s2, ins, std::move(tag));
  return segment(n1).has(endpoint) ? n1 : n2;
}

Instance Workspace::current() const {
  Instance out = initial_;
  out.segments = SegmentMultiset{};
  for (const Slot& s : slots_) out.segments.add(s.seg);
  return out;
}

}  // namespace untangle
