#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "untangle/errors.hpp"
#include "untangle/harness.hpp"
#include "untangle/trace_io.hpp"

namespace untangle::harness {
namespace {

constexpr double kSize = 800;
constexpr double kMargin = 24;

struct Frame {
  double min_x, max_y, scale;

  std::string x(Coord v) const { return fmt((double(v) - min_x) * scale + kMargin); }
  std::string y(Coord v) const { return fmt((max_y - double(v)) * scale + kMargin); }

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }
};

Frame frame_for(const Instance& inst) {
  Coord lx = 0, hx = 0, ly = 0, hy = 0;
  for (size_t i = 0; i < inst.points.size(); ++i) {
    const Point& p = inst.points[i];
    if (i == 0 || p.x < lx) lx = p.x;
    if (i == 0 || p.x > hx) hx = p.x;
    if (i == 0 || p.y < ly) ly = p.y;
    if (i == 0 || p.y > hy) hy = p.y;
  }
  const double span = std::max<double>({double(hx - lx), double(hy - ly), 1.0});
  return {double(lx), double(hy), (kSize - 2 * kMargin) / span};
}

void line(std::ostringstream& os, const Frame& f, const Instance& inst,
          const Segment& s, const char* style) {
  const Point& a = inst.point(s.a);
  const Point& b = inst.point(s.b);
  os << "<line x1=\"" << f.x(a.x) << "\" y1=\"" << f.y(a.y) << "\" x2=\""
     << f.x(b.x) << "\" y2=\"" << f.y(b.y) << "\" " << style << "/>\n";
}

std::string svg(const Instance& state, const Frame& f, const FlipEvent* e,
                size_t index) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"840\" "
        "viewBox=\"0 0 800 840\">\n"
     << "<rect width=\"800\" height=\"840\" fill=\"white\"/>\n";
  for (const Segment& s : state.segments.expanded()) {
    if (e && (s == e->inserted[0] || s == e->inserted[1])) continue;
    line(os, f, state, s, "stroke=\"#555\" stroke-width=\"1.2\"");
  }
  if (e) {
    for (const Segment& s : e->removed) {
      line(os, f, state, s,
           "stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"");
    }
    for (const Segment& s : e->inserted) {
      line(os, f, state, s, "stroke=\"#1f77b4\" stroke-width=\"3.5\"");
    }
  }
  for (const Point& p : state.points) {
    const bool t = state.in_t(p.id);
    os << "<circle cx=\"" << f.x(p.x) << "\" cy=\"" << f.y(p.y) << "\" r=\""
       << (t ? 5 : 3) << "\" fill=\"" << (t ? "#d62728" : "black") << "\"/>\n";
  }
  os << "<text x=\"12\" y=\"828\" font-family=\"monospace\" font-size=\"14\">"
     << "state " << index;
  if (e) os << ": " << e->tag;
  os << "</text>\n</svg>\n";
  return os.str();
}

}  // namespace

std::vector<std::string> render_frames(const UntangleTrace& trace) {
  const Frame f = frame_for(trace.initial);
  std::vector<std::string> out;
  Instance state = trace.initial;
  out.push_back(svg(state, f, nullptr, 0));
  for (size_t i = 0; i < trace.events.size(); ++i) {
    state = apply_flip(state, trace.events[i]);
    out.push_back(svg(state, f, &trace.events[i], i + 1));
  }
  return out;
}

int render(const UntangleTrace& trace, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, "cannot create " + dir.string());
  const std::vector<std::string> frames = render_frames(trace);
  for (size_t i = 0; i < frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.svg", i);
    write_file(dir / name, frames[i]);
  }
  return int(frames.size());
}

}  // namespace untangle::harness
