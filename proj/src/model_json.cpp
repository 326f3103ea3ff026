#include <json.hpp>

#include "untangle/errors.hpp"
#include "untangle/model.hpp"

namespace untangle {

using nlohmann::json;

namespace {

Color parse_color(const json& j) {
  if (j.is_null()) return Color::none;
  const std::string s = j.get<std::string>();
  if (s == "red") return Color::red;
  if (s == "blue") return Color::blue;
  fail(ErrorKind::load, "unknown color '" + s + "'");
}

json color_json(Color c) {
  switch (c) {
    case Color::red:
      return "red";
    case Color::blue:
      return "blue";
    case Color::none:
      break;
  }
  return nullptr;
}

}  // namespace

Instance load_instance_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::load, std::string("malformed instance document: ") + e.what());
  }
  try {
    InstanceDocument raw;
    for (const json& p : doc.at("points")) {
      Point pt;
      pt.id = p.at("id").get<int>();
      pt.x = p.at("x").get<Coord>();
      pt.y = p.at("y").get<Coord>();
      pt.color = p.contains("color") ? parse_color(p["color"]) : Color::none;
      raw.points.push_back(pt);
    }
    for (const json& s : doc.at("segments")) {
      if (!s.is_array() || s.size() != 2) {
        fail(ErrorKind::load, "segment must be a pair of ids");
      }
      raw.segments.emplace_back(s[0].get<int>(), s[1].get<int>());
    }
    raw.property = doc.at("property").get<std::string>();
    if (doc.contains("geometry_class") && !doc["geometry_class"].is_null()) {
      raw.geometry_class = doc["geometry_class"].get<std::string>();
    }
    if (doc.contains("convex_ids") && !doc["convex_ids"].is_null()) {
      raw.convex_ids = doc["convex_ids"].get<std::vector<int>>();
    }
    if (doc.contains("t_ids") && !doc["t_ids"].is_null()) {
      raw.t_ids = doc["t_ids"].get<std::vector<int>>();
    }
    return load_instance(raw);
  } catch (const json::exception& e) {
    fail(ErrorKind::load, std::string("malformed instance document: ") + e.what());
  }
}

std::string instance_to_json(const Instance& inst, int indent) {
  json doc;
  json pts = json::array();
  for (const Point& p : inst.points) {
    pts.push_back({{"id", p.id}, {"x", p.x}, {"y", p.y}, {"color", color_json(p.color)}});
  }
  json segs = json::array();
  for (const Segment& s : inst.segments.expanded()) segs.push_back({s.a, s.b});
  doc["points"] = std::move(pts);
  doc["segments"] = std::move(segs);
  doc["property"] = std::string(to_string(inst.property));
  doc["geometry_class"] = std::string(to_string(inst.geometry_class));
  doc["convex_ids"] = inst.convex_ids;
  doc["t_ids"] = inst.t_ids;
  return doc.dump(indent);
}

}  // namespace untangle
