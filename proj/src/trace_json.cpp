#include <fstream>
#include <sstream>

#include <json.hpp>

#include "untangle/errors.hpp"
#include "untangle/trace_io.hpp"

namespace untangle {

using nlohmann::json;

namespace {

json pair_json(const Segment& a, const Segment& b) {
  return json::array({json::array({a.a, a.b}), json::array({b.a, b.b})});
}

std::array<Segment, 2> pair_from(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    fail(ErrorKind::load, "flip event needs two segments");
  }
  std::array<Segment, 2> out;
  for (size_t i = 0; i < 2; ++i) {
    if (!j[i].is_array() || j[i].size() != 2) {
      fail(ErrorKind::load, "segment must be a pair of ids");
    }
    out[i] = Segment(j[i][0].get<int>(), j[i][1].get<int>());
  }
  return out;
}

PotentialKind parse_kind(const std::string& s) {
  for (int k = 0; k <= int(PotentialKind::ratio_g); ++k) {
    if (to_string(PotentialKind(k)) == s) return PotentialKind(k);
  }
  fail(ErrorKind::load, "unknown potential kind '" + s + "'");
}

}  // namespace

std::string trace_to_json(const UntangleTrace& trace, int indent) {
  json doc;
  doc["instance"] = json::parse(instance_to_json(trace.initial));
  doc["strategy"] = std::string(to_string(trace.strategy));
  json events = json::array();
  for (const FlipEvent& e : trace.events) {
    events.push_back({{"removed", pair_json(e.removed[0], e.removed[1])},
                      {"inserted", pair_json(e.inserted[0], e.inserted[1])},
                      {"tag", e.tag}});
  }
  doc["events"] = std::move(events);
  doc["verdict"] = trace.verdict;
  doc["notes"] = trace.notes;
  if (!trace.snapshots.empty()) {
    json snaps = json::array();
    for (const auto& reports : trace.snapshots) {
      json row = json::array();
      for (const PotentialReport& r : reports) {
        json item{{"kind", std::string(to_string(r.kind))},
                  {"context", r.context}};
        if (r.log2_value) {
          item["value"] = nullptr;
          item["log2"] = *r.log2_value;
        } else {
          item["value"] = r.value.str();
          item["log2"] = nullptr;
        }
        row.push_back(std::move(item));
      }
      snaps.push_back(std::move(row));
    }
    doc["snapshots"] = std::move(snaps);
  }
  return doc.dump(indent);
}

UntangleTrace load_trace_json(std::string_view text,
                              const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::load, std::string("malformed trace document: ") + e.what());
  }
  try {
    UntangleTrace trace;
    const json& inst = doc.at("instance");
    if (inst.is_string()) {
      std::filesystem::path p = inst.get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      trace.initial = load_instance_json(read_file(p));
    } else {
      trace.initial = load_instance_json(inst.dump());
    }
    if (doc.contains("strategy")) {
      trace.strategy = parse_strategy(doc["strategy"].get<std::string>());
    }
    for (const json& e : doc.at("events")) {
      FlipEvent ev;
      ev.removed = pair_from(e.at("removed"));
      ev.inserted = pair_from(e.at("inserted"));
      ev.tag = e.value("tag", std::string());
      trace.events.push_back(std::move(ev));
    }
    trace.verdict = doc.value("verdict", std::string("valid"));
    if (doc.contains("notes")) {
      trace.notes = doc["notes"].get<std::vector<std::string>>();
    }
    if (doc.contains("snapshots")) {
      for (const json& row : doc["snapshots"]) {
        std::vector<PotentialReport> reports;
        for (const json& item : row) {
          PotentialReport r;
          r.kind = parse_kind(item.at("kind").get<std::string>());
          r.context = item.value("context", std::string());
          if (!item.at("value").is_null()) {
            r.value = Rational(item["value"].get<std::string>());
          }
          if (item.contains("log2") && !item["log2"].is_null()) {
            r.log2_value = item["log2"].get<double>();
          }
          reports.push_back(std::move(r));
        }
        trace.snapshots.push_back(std::move(reports));
      }
    }
    return trace;
  } catch (const json::exception& e) {
    fail(ErrorKind::load, std::string("malformed trace document: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
}

}  // namespace untangle
