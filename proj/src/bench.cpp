#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "untangle/errors.hpp"
#include "untangle/harness.hpp"

namespace untangle::harness {

using nlohmann::json;

double d_conv(int n, int c) {
  return double(n) * (std::floor(std::log2(std::max(c, 1))) + 1);
}

BoundModel bound_for(StrategyId id, const Instance& inst) {
  const double n = inst.n();
  const double t = inst.t_degree_sum();
  const double tp = double(inst.t_ids.size());
  const double p = double(inst.points.size());
  const int c = int(inst.convex_ids.size());
  const double logc = std::floor(std::log2(std::max(c, 1))) + 1;
  const double dc = d_conv(inst.n(), c);
  BoundModel b;
  switch (id) {
    case StrategyId::baseline_noclice:
      b = {"n^3", n * n * n};
      break;
    case StrategyId::convex_insertion:
    case StrategyId::convex_removal:
      b = {"n*(log2|C|+1)", dc};
      break;
    case StrategyId::separated_insertion:
      b = {"(t*|P|+n)*(log2|C|+1)", (t * p + n) * logc};
      break;
    case StrategyId::separated_removal_insertion:
      b = {"t*|P|+n*(log2|C|+1)", t * p + dc};
      break;
    case StrategyId::farthest_first:
      b = {"n", n};
      break;
    case StrategyId::one_point_removal:
    case StrategyId::two_inside_removal:
      b = {"d_conv+t*n", dc + t * n};
      break;
    case StrategyId::two_outside_removal:
      b = {"2^t*d_conv", std::ldexp(dc, int(t))};
      break;
    case StrategyId::one_in_one_out_removal:
      b = {"d_conv+t^2*n", dc + t * t * n};
      break;
    case StrategyId::liberate_line:
      b = {"n+2", n + 2};
      break;
    case StrategyId::outside_matching_RI:
      b = {"(|T|+1)^3*n*(log2|C|+1)", std::pow(tp + 1, 3) * n * logc};
      break;
  }
  b.value = std::max(b.value, 1.0);
  return b;
}

std::string csv_header() {
  return "strategy,class,property,family,n,t,points,convex,seed,flips,wall_ms,"
         "bound_formula,bound,ratio,status";
}

namespace {

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string csv_line(const BenchRow& r) {
  std::ostringstream os;
  os << r.strategy << ',' << r.geometry_class << ',' << r.property << ','
     << r.family << ',' << r.n << ',' << r.t << ',' << r.points << ','
     << r.convex << ',' << r.seed << ',' << r.flips << ',' << num(r.wall_ms)
     << ',' << quoted(r.bound_formula) << ',' << num(r.bound) << ','
     << num(r.ratio) << ',' << quoted(r.status);
  return os.str();
}

RunOutcome run(StrategyId id, const Instance& inst, const StrategyOptions& opts) {
  RunOutcome out;
  const auto start = std::chrono::steady_clock::now();
  out.trace = untangle::untangle(id, inst, opts);
  const auto stop = std::chrono::steady_clock::now();
  out.oracle = oracle::validate_trace(out.trace);
  const BoundModel b = bound_for(id, inst);
  BenchRow& r = out.row;
  r.strategy = std::string(to_string(id));
  r.geometry_class = std::string(to_string(inst.geometry_class));
  r.property = std::string(to_string(inst.property));
  r.n = inst.n();
  r.t = inst.t_degree_sum();
  r.points = int(inst.points.size());
  r.convex = int(inst.convex_ids.size());
  r.flips = long(out.trace.events.size());
  r.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  r.bound_formula = b.formula;
  r.bound = b.value;
  r.ratio = double(r.flips) / b.value;
  if (out.trace.verdict != "valid") {
    r.status = out.trace.verdict;
  } else if (!out.oracle.valid) {
    r.status = "oracle " + out.oracle.to_string();
  }
  return out;
}

namespace {

template <class T>
std::vector<T> one_or_many(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return {fallback};
  if (j[key].is_array()) return j[key].get<std::vector<T>>();
  return {j[key].get<T>()};
}

}  // namespace

BenchConfig parse_bench_config(std::string_view text) {
  BenchConfig cfg;
  try {
    const json doc = json::parse(text);
    for (const json& s : doc.value("strategies", json::array())) {
      cfg.strategies.push_back(parse_strategy(s.get<std::string>()));
    }
    if (doc.contains("params") && doc["params"].contains("two_outside_removal")) {
      cfg.t_cap = doc["params"]["two_outside_removal"].value("t_cap", cfg.t_cap);
    }
    for (const json& s : doc.value("specs", json::array())) {
      BenchConfig::Sweep sw;
      sw.base.geometry_class = parse_geometry_class(s.value("class", "convex"));
      sw.base.property = parse_property(s.value("property", "matching"));
      sw.base.radius = s.value("radius", sw.base.radius);
      sw.base.family = parse_family(s.value("family", "random"));
      sw.n = one_or_many<int>(s, "n", sw.base.n);
      sw.t = one_or_many<int>(s, "t", 0);
      if (s.contains("seed_count")) {
        const std::uint64_t first = s.value("seed_base", std::uint64_t{1});
        for (std::uint64_t i = 0; i < s["seed_count"].get<std::uint64_t>(); ++i) {
          sw.seeds.push_back(first + i);
        }
      } else {
        sw.seeds = one_or_many<std::uint64_t>(s, "seeds", 1);
      }
      cfg.sweeps.push_back(std::move(sw));
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::load, std::string("malformed bench config: ") + e.what());
  }
  return cfg;
}

BenchResult bench(const BenchConfig& config, int jobs) {
  struct Task {
    GeneratorSpec spec;
    StrategyId id;
  };
  std::vector<Task> tasks;
  for (const auto& sw : config.sweeps) {
    for (int n : sw.n) {
      for (int t : sw.t) {
        for (std::uint64_t seed : sw.seeds) {
          GeneratorSpec spec = sw.base;
          spec.n = n;
          spec.t = t;
          spec.seed = seed;
          for (StrategyId id : config.strategies) tasks.push_back({spec, id});
        }
      }
    }
  }

  std::vector<BenchRow> rows(tasks.size());
  std::vector<char> invalid(tasks.size(), 0);
  std::atomic<size_t> next{0};
  std::atomic<bool> stop{false};
  auto worker = [&] {
    for (size_t i = next++; i < tasks.size() && !stop; i = next++) {
      const Task& task = tasks[i];
      BenchRow& row = rows[i];
      StrategyOptions opts;
      opts.t_cap = config.t_cap;
      try {
        const Instance inst = generate(task.spec);
        try {
          check_precondition(task.id, inst, opts);
        } catch (const UntangleError& e) {
          row.strategy = std::string(to_string(task.id));
          row.geometry_class = std::string(to_string(inst.geometry_class));
          row.property = std::string(to_string(inst.property));
          row.n = inst.n();
          row.t = inst.t_degree_sum();
          row.points = int(inst.points.size());
          row.convex = int(inst.convex_ids.size());
          row.status = std::string("precondition: ") + e.what();
          row.bound_formula = bound_for(task.id, inst).formula;
          continue;
        }
        RunOutcome out = run(task.id, inst, opts);
        row = out.row;
        if (!out.ok()) {
          invalid[i] = 1;
          stop = true;
        }
      } catch (const UntangleError& e) {
        row.strategy = std::string(to_string(task.id));
        row.status = std::string("error: ") + e.what();
        if (e.kind() != ErrorKind::precondition) {
          invalid[i] = 1;
          stop = true;
        }
      }
      row.family = std::string(to_string(task.spec.family));
      row.seed = task.spec.seed;
    }
  };
  const int workers = std::max(1, jobs);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  BenchResult result;
  for (size_t i = 0; i < tasks.size(); ++i) {
    if (rows[i].strategy.empty()) break;  // not reached after an abort
    result.rows.push_back(rows[i]);
    if (invalid[i] && !result.abort_reason) {
      result.abort_reason = rows[i].strategy + " seed " +
                            std::to_string(tasks[i].spec.seed) + " n " +
                            std::to_string(tasks[i].spec.n) + ": " +
                            rows[i].status;
    }
  }
  result.summary = summarize(result.rows);
  return result;
}

std::optional<double> fit_exponent(const std::vector<double>& x,
                                   const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  const double den = m * sxx - sx * sx;
  if (m < 2 || std::abs(den) < 1e-12) return std::nullopt;
  return (m * sxy - sx * sy) / den;
}

std::vector<StrategySummary> summarize(const std::vector<BenchRow>& rows) {
  std::map<std::string, std::vector<const BenchRow*>> by;
  std::vector<std::string> order;
  for (const BenchRow& r : rows) {
    if (r.status != "ok") continue;
    if (!by.count(r.strategy)) order.push_back(r.strategy);
    by[r.strategy].push_back(&r);
  }
  std::vector<StrategySummary> out;
  for (const std::string& name : order) {
    StrategySummary s;
    s.strategy = name;
    std::vector<double> xs, ys;
    double total = 0;
    for (const BenchRow* r : by[name]) {
      ++s.rows;
      s.max_ratio = std::max(s.max_ratio, r->ratio);
      total += r->ratio;
      xs.push_back(r->n);
      ys.push_back(double(r->flips));
    }
    s.mean_ratio = s.rows ? total / s.rows : 0;
    s.exponent = fit_exponent(xs, ys);
    out.push_back(s);
  }
  return out;
}

std::string summary_text(const std::vector<StrategySummary>& summary) {
  std::ostringstream os;
  for (const StrategySummary& s : summary) {
    os << s.strategy << ": rows=" << s.rows << " fitted_c=" << num(s.max_ratio)
       << " mean_ratio=" << num(s.mean_ratio) << " exponent="
       << (s.exponent ? num(*s.exponent) : std::string("n/a")) << '\n';
  }
  return os.str();
}

}  // namespace untangle::harness
