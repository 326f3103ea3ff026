#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "untangle/errors.hpp"
#include "untangle/harness.hpp"
#include "untangle/oracle.hpp"
#include "untangle/strategies.hpp"
#include "untangle/trace_io.hpp"

namespace py = pybind11;
using namespace untangle;

namespace {

py::list segment_list(const std::vector<Segment>& segs) {
  py::list out;
  for (const Segment& s : segs) out.append(py::make_tuple(s.a, s.b));
  return out;
}

py::dict event_dict(const FlipEvent& e) {
  py::dict d;
  d["removed"] = segment_list({e.removed[0], e.removed[1]});
  d["inserted"] = segment_list({e.inserted[0], e.inserted[1]});
  d["tag"] = e.tag;
  return d;
}

Instance generate(const std::string& cls, const std::string& property, int n, int t,
                  std::uint64_t seed, const std::string& family) {
  harness::GeneratorSpec spec;
  spec.geometry_class = parse_geometry_class(cls);
  spec.property = parse_property(property);
  spec.n = n;
  spec.t = t;
  spec.seed = seed;
  spec.family = harness::parse_family(family);
  return harness::generate(spec);
}

}  // namespace

PYBIND11_MODULE(_untangle, m) {
  m.doc() = "Flip sequences that untangle segment multisets";
  py::register_exception<UntangleError>(m, "UntangleError", PyExc_ValueError);

  py::class_<Instance>(m, "Instance")
      .def_property_readonly("n", &Instance::n)
      .def_property_readonly("t", &Instance::t)
      .def_property_readonly("property",
                             [](const Instance& i) { return std::string(to_string(i.property)); })
      .def_property_readonly("geometry_class", [](const Instance& i) {
        return std::string(to_string(i.geometry_class));
      })
      .def_property_readonly("points", [](const Instance& i) {
        py::list out;
        for (const Point& p : i.points) out.append(py::make_tuple(p.id, p.x, p.y));
        return out;
      })
      .def_property_readonly("segments",
                             [](const Instance& i) { return segment_list(i.segments.expanded()); })
      .def_readonly("convex_ids", &Instance::convex_ids)
      .def_readonly("t_ids", &Instance::t_ids)
      .def("crossing_count", [](const Instance& i) { return crossing_pairs(i).size(); })
      .def("to_json", [](const Instance& i) { return instance_to_json(i); });

  py::class_<UntangleTrace>(m, "Trace")
      .def_property_readonly("strategy",
                             [](const UntangleTrace& t) { return std::string(to_string(t.strategy)); })
      .def_readonly("initial", &UntangleTrace::initial)
      .def_readonly("verdict", &UntangleTrace::verdict)
      .def_readonly("notes", &UntangleTrace::notes)
      .def_property_readonly("events",
                             [](const UntangleTrace& t) {
                               py::list out;
                               for (const FlipEvent& e : t.events) out.append(event_dict(e));
                               return out;
                             })
      .def("__len__", [](const UntangleTrace& t) { return t.events.size(); })
      .def("to_json", [](const UntangleTrace& t) { return trace_to_json(t); });

  m.def("load_instance", [](const std::string& text) { return load_instance_json(text); },
        py::arg("json"));
  m.def("load_trace", [](const std::string& text) { return load_trace_json(text); },
        py::arg("json"));
  m.def("generate", &generate, py::arg("geometry_class") = "convex",
        py::arg("property") = "matching", py::arg("n") = 8, py::arg("t") = 0,
        py::arg("seed") = 1, py::arg("family") = "random");
  m.def("strategies", [] {
    std::vector<std::string> out;
    for (StrategyId id : all_strategies()) out.emplace_back(to_string(id));
    return out;
  });
  m.def(
      "untangle",
      [](const std::string& strategy, const Instance& inst, bool snapshots) {
        StrategyOptions opts;
        opts.snapshots = snapshots;
        py::gil_scoped_release release;
        return untangle::untangle(parse_strategy(strategy), inst, opts);
      },
      py::arg("strategy"), py::arg("instance"), py::arg("snapshots") = false);
  m.def(
      "validate",
      [](const UntangleTrace& t) {
        const oracle::Verdict v = oracle::validate_trace(t);
        return py::make_tuple(v.valid, v.index, v.reason);
      },
      py::arg("trace"));
  m.def(
      "min_flips",
      [](const Instance& inst, std::size_t cap) -> std::optional<int> {
        return oracle::min_flips_bfs(inst, cap).flips;
      },
      py::arg("instance"), py::arg("cap") = 1'000'000);
}
