#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "untangle/model.hpp"

namespace untangle::testing {

struct XY {
  Coord x, y;
};

inline Instance make_instance(const std::vector<XY>& xy,
                              const std::vector<std::pair<int, int>>& segs,
                              const std::string& property = "matching",
                              std::optional<std::string> cls = std::nullopt,
                              std::optional<std::vector<int>> convex_ids = std::nullopt,
                              std::optional<std::vector<int>> t_ids = std::nullopt) {
  InstanceDocument doc;
  for (size_t i = 0; i < xy.size(); ++i) {
    doc.points.push_back({int(i), xy[i].x, xy[i].y, Color::none});
  }
  doc.segments = segs;
  doc.property = property;
  doc.geometry_class = std::move(cls);
  doc.convex_ids = std::move(convex_ids);
  doc.t_ids = std::move(t_ids);
  return load_instance(doc);
}

// Regular-ish hexagon with integer corners, counterclockwise from (10, 0).
inline std::vector<XY> hexagon() {
  return {{10, 0}, {5, 9}, {-5, 9}, {-10, 0}, {-5, -9}, {5, -9}};
}

}  // namespace untangle::testing
