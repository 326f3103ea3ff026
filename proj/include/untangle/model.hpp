#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "untangle/geometry.hpp"

namespace untangle {

enum class Property { multigraph, matching, redblue_matching, tour, tree };

enum class GeometryClass {
  convex,
  one_T_point,
  two_T_outside,
  two_T_inside,
  one_in_one_out,
  parallel_separated,
  T_outside_hull,
  general,
};

std::string_view to_string(Property p);
std::string_view to_string(GeometryClass g);
Property parse_property(std::string_view s);
GeometryClass parse_geometry_class(std::string_view s);

/// Multiset of segments keyed by sorted endpoint pair with multiplicities.
class SegmentMultiset {
 public:
  SegmentMultiset() = default;
  explicit SegmentMultiset(std::span<const Segment> segments);

  void add(const Segment& s, int copies = 1);
  /// Removes one copy; returns false when absent.
  bool remove(const Segment& s);
  int count(const Segment& s) const;
  int size() const { return size_; }
  bool empty() const { return size_ == 0; }

  /// Every copy, in lexicographic order.
  std::vector<Segment> expanded() const;
  const std::map<Segment, int>& counts() const { return counts_; }

  friend bool operator==(const SegmentMultiset&, const SegmentMultiset&) =
      default;

 private:
  std::map<Segment, int> counts_;
  int size_ = 0;
};

/// A validated point set P = C u T with a segment multiset S.
struct Instance {
  std::vector<Point> points;    // indexed by id
  std::vector<int> convex_ids;  // C, counterclockwise
  std::vector<int> t_ids;       // T, ascending
  SegmentMultiset segments;
  Property property = Property::multigraph;
  GeometryClass geometry_class = GeometryClass::general;

  const Point& point(int id) const { return points[static_cast<size_t>(id)]; }
  int n() const { return segments.size(); }
  /// Number of segments with at least one endpoint in T.
  int t() const;
  /// Sum of the degrees of the points of T (TT-segments count twice).
  int t_degree_sum() const;
  bool in_t(int id) const;
  /// Rank of id in the counterclockwise order of C, or -1.
  int convex_rank(int id) const;
  std::vector<Point> convex_points() const;

  /// Recomputes derived lookup tables. Called by the loader.
  void index();

 private:
  std::vector<int> rank_;
  std::vector<char> is_t_;
};

struct FlipEvent {
  std::array<Segment, 2> removed;
  std::array<Segment, 2> inserted;
  std::string tag;

  friend bool operator==(const FlipEvent&, const FlipEvent&) = default;
};

using InsertionPair = std::array<Segment, 2>;

/// Ordered pair of normalized segments (first <= second).
InsertionPair normalized(const InsertionPair& p);

/// The two reconnections {ac, bd} and {ad, bc} of s1 = ab, s2 = cd.
std::array<InsertionPair, 2> reconnections(const Segment& s1,
                                           const Segment& s2);

/// Everything checked at load time, exposed for generators and tests.
bool satisfies_class(const Instance& inst, GeometryClass cls);
GeometryClass infer_class(const Instance& inst);
/// Throws UntangleError(load) describing the first property violation.
void check_property(std::span<const Point> points, const SegmentMultiset& s,
                    Property property);
bool property_holds(std::span<const Point> points, const SegmentMultiset& s,
                    Property property);
/// First collinear or coincident triple found, if any.
std::optional<std::array<int, 3>> find_degeneracy(std::span<const Point> points);

/// Raw document before validation.
struct InstanceDocument {
  std::vector<Point> points;
  std::vector<std::pair<int, int>> segments;
  std::string property;
  std::optional<std::string> geometry_class;
  std::optional<std::vector<int>> convex_ids;
  std::optional<std::vector<int>> t_ids;
};

Instance load_instance(const InstanceDocument& doc);
Instance load_instance_json(std::string_view text);
std::string instance_to_json(const Instance& inst, int indent = -1);

/// A crossing pair, lexicographically ordered (first <= second).
using SegmentPair = std::pair<Segment, Segment>;

bool crossing(const Instance& inst, const Segment& s1, const Segment& s2);
std::vector<SegmentPair> crossing_pairs(const Instance& inst);

std::vector<InsertionPair> legal_insertions(const Instance& inst,
                                            const Segment& s1,
                                            const Segment& s2);

/// Returns the post-flip instance or throws UntangleError(flip) naming the
/// violated clause.
Instance apply_flip(const Instance& inst, const FlipEvent& event);

std::vector<Instance> split_components(const Instance& inst);

bool is_uncrossable(const Instance& inst, const Segment& s);

/// Exact comparison of total Euclidean length change: negative when the
/// inserted pair is shorter than the removed pair.
int compare_flip_length(const Instance& inst, const FlipEvent& event);

}  // namespace untangle
