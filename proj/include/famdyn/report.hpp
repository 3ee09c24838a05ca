#pragma once

// Deterministic report serialization. The JSON writer is hand rolled so the
// byte stream is fully pinned: fixed key order, 2-space indent, doubles via
// %.17g (round-trip exact), measured maps in sorted key order. Reruns with
// the same inputs produce identical bytes regardless of worker count, which
// is why the worker knob and other resource caps never appear in a report.
// Timings are emitted only on request since they are inherently nondeterministic.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "famdyn/comparisons.hpp"
#include "famdyn/dynamics.hpp"
#include "famdyn/space.hpp"
#include "famdyn/verdict.hpp"
#include "famdyn/version.hpp"

namespace famdyn {

namespace report_detail {

inline void append_number(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "\"nan\"";
    return;
  }
  if (std::isinf(v)) {
    out += v > 0 ? "\"inf\"" : "\"-inf\"";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

inline void append_escaped(std::string& out, std::string_view s) {
  out += '"';
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(ch));
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

}  // namespace report_detail

class JsonWriter {
 public:
  void begin_object() { begin_container('{'); }
  void end_object() { end_container('}'); }
  void begin_array() { begin_container('['); }
  void end_array() { end_container(']'); }

  void key(std::string_view k) {
    if (nonempty_.back()) out_ += ',';
    newline_indent(nonempty_.size());
    nonempty_.back() = true;
    report_detail::append_escaped(out_, k);
    out_ += ": ";
    after_key_ = true;
  }

  void value(std::string_view s) {
    place();
    report_detail::append_escaped(out_, s);
  }
  void value(const char* s) { value(std::string_view(s)); }
  void value(const std::string& s) { value(std::string_view(s)); }
  void value(double v) {
    place();
    report_detail::append_number(out_, v);
  }
  void value(long v) {
    place();
    out_ += std::to_string(v);
  }
  void value(int v) { value(static_cast<long>(v)); }
  void value(std::uint64_t v) {
    place();
    out_ += std::to_string(v);
  }
  void value(bool b) {
    place();
    out_ += b ? "true" : "false";
  }

  std::string take() {
    out_ += '\n';
    return std::move(out_);
  }

 private:
  std::string out_;
  std::vector<bool> nonempty_;
  bool after_key_ = false;

  void newline_indent(std::size_t depth) {
    out_ += '\n';
    out_.append(2 * depth, ' ');
  }

  void place() {
    if (after_key_) {
      after_key_ = false;
      return;
    }
    if (!nonempty_.empty()) {
      if (nonempty_.back()) out_ += ',';
      newline_indent(nonempty_.size());
      nonempty_.back() = true;
    }
  }

  void begin_container(char open) {
    place();
    out_ += open;
    nonempty_.push_back(false);
  }

  void end_container(char close) {
    const bool had = nonempty_.back();
    nonempty_.pop_back();
    if (had) newline_indent(nonempty_.size());
    out_ += close;
  }
};

inline std::string digest_hex(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
  return std::string(buf);
}

inline std::string point_literal(const Point& p) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%d:%.17g", p.component, p.coord);
  return std::string(buf);
}

inline void write_point(JsonWriter& w, const Point& p) {
  w.begin_object();
  w.key("component");
  w.value(p.component);
  w.key("coord");
  w.value(p.coord);
  w.end_object();
}

inline void write_verdict_fields(JsonWriter& w, const Verdict& v) {
  w.key("status");
  w.value(to_string(v.status));
  w.key("detector");
  w.value(v.detector);
  w.key("witness");
  w.begin_object();
  w.key("points");
  w.begin_array();
  for (const Point& p : v.witness.points) write_point(w, p);
  w.end_array();
  w.key("indices");
  w.begin_array();
  for (long n : v.witness.indices) w.value(n);
  w.end_array();
  w.key("note");
  w.value(v.witness.note);
  w.end_object();
  w.key("measured");
  w.begin_object();
  for (const auto& [k, val] : v.measured) {
    w.key(k);
    w.value(val);
  }
  w.end_object();
}

inline void write_comparison(JsonWriter& w, const ComparisonReport& c) {
  w.begin_object();
  w.key("claim");
  w.value(c.claim);
  w.key("statement");
  w.value(c.statement);
  w.key("connected");
  w.value(c.connected);
  w.key("k");
  w.value(static_cast<long>(c.k));
  w.key("agreement");
  w.value(to_string(c.agreement));
  w.key("rationale");
  w.value(c.rationale);
  w.key("aggregate");
  w.begin_object();
  for (const auto& [k, val] : c.aggregate) {
    w.key(k);
    w.value(val);
  }
  w.end_object();
  w.key("family");
  w.begin_object();
  write_verdict_fields(w, c.side_family);
  w.end_object();
  w.key("composed");
  w.begin_object();
  write_verdict_fields(w, c.side_composed);
  w.end_object();
  w.end_object();
}

struct Report {
  std::string system;
  std::uint64_t digest = 0;
  HorizonParams params;
  double eps = 0.05;
  std::vector<std::pair<std::string, Verdict>> verdicts;
  std::vector<ComparisonReport> comparisons;
  std::vector<std::pair<std::string, double>> timings_ms;
  bool include_timings = false;
};

inline void write_report_params(JsonWriter& w, const Report& r) {
  w.key("params");
  w.begin_object();
  w.key("N");
  w.value(r.params.N);
  w.key("eps");
  w.value(r.eps);
  w.key("grid");
  w.value(r.params.eps_grid);
  w.key("tau");
  w.value(r.params.tau);
  w.key("delta");
  w.value(r.params.delta);
  w.key("window");
  w.value(r.params.resolved_window());
  w.key("seed");
  w.value(r.params.seed);
  w.end_object();
}

inline std::string report_json(const Report& r) {
  JsonWriter w;
  w.begin_object();
  w.key("version");
  w.value(FAMDYN_VERSION);
  w.key("system");
  w.value(r.system);
  w.key("digest");
  w.value(digest_hex(r.digest));
  write_report_params(w, r);
  w.key("verdicts");
  w.begin_array();
  for (const auto& [name, v] : r.verdicts) {
    w.begin_object();
    w.key("name");
    w.value(name);
    write_verdict_fields(w, v);
    w.end_object();
  }
  w.end_array();
  w.key("comparisons");
  w.begin_array();
  for (const ComparisonReport& c : r.comparisons) write_comparison(w, c);
  w.end_array();
  if (r.include_timings) {
    w.key("timings_ms");
    w.begin_object();
    for (const auto& [name, ms] : r.timings_ms) {
      w.key(name);
      w.value(ms);
    }
    w.end_object();
  }
  w.end_object();
  return w.take();
}

namespace report_detail {

inline std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

inline void csv_row(std::string& out, std::string_view record, std::string_view field,
                    std::string_view value) {
  auto cell = [&out](std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
      out += s;
      return;
    }
    out += '"';
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
  };
  cell(record);
  out += ',';
  cell(field);
  out += ',';
  cell(value);
  out += '\n';
}

inline void csv_verdict(std::string& out, const std::string& record, const Verdict& v) {
  csv_row(out, record, "status", to_string(v.status));
  csv_row(out, record, "detector", v.detector);
  if (!v.witness.points.empty()) {
    std::string pts;
    for (std::size_t i = 0; i < v.witness.points.size(); ++i) {
      if (i) pts += ';';
      pts += point_literal(v.witness.points[i]);
    }
    csv_row(out, record, "witness.points", pts);
  }
  if (!v.witness.indices.empty()) {
    std::string idx;
    for (std::size_t i = 0; i < v.witness.indices.size(); ++i) {
      if (i) idx += ';';
      idx += std::to_string(v.witness.indices[i]);
    }
    csv_row(out, record, "witness.indices", idx);
  }
  if (!v.witness.note.empty()) csv_row(out, record, "witness.note", v.witness.note);
  for (const auto& [k, val] : v.measured) {
    csv_row(out, record, "measured." + k, fmt_double(val));
  }
}

}  // namespace report_detail

inline std::string report_csv(const Report& r) {
  using report_detail::csv_row;
  using report_detail::fmt_double;
  std::string out = "record,field,value\n";
  csv_row(out, "report", "version", FAMDYN_VERSION);
  csv_row(out, "report", "system", r.system);
  csv_row(out, "report", "digest", digest_hex(r.digest));
  csv_row(out, "report", "params.N", std::to_string(r.params.N));
  csv_row(out, "report", "params.eps", fmt_double(r.eps));
  csv_row(out, "report", "params.grid", fmt_double(r.params.eps_grid));
  csv_row(out, "report", "params.tau", fmt_double(r.params.tau));
  csv_row(out, "report", "params.delta", fmt_double(r.params.delta));
  csv_row(out, "report", "params.window", std::to_string(r.params.resolved_window()));
  csv_row(out, "report", "params.seed", std::to_string(r.params.seed));
  for (const auto& [name, v] : r.verdicts) {
    report_detail::csv_verdict(out, "verdict:" + name, v);
  }
  for (const ComparisonReport& c : r.comparisons) {
    const std::string rec = "comparison:" + c.claim;
    csv_row(out, rec, "agreement", to_string(c.agreement));
    csv_row(out, rec, "rationale", c.rationale);
    csv_row(out, rec, "connected", c.connected ? "true" : "false");
    csv_row(out, rec, "k", std::to_string(c.k));
    for (const auto& [k, val] : c.aggregate) {
      csv_row(out, rec, "aggregate." + k, fmt_double(val));
    }
    report_detail::csv_verdict(out, rec + ":family", c.side_family);
    report_detail::csv_verdict(out, rec + ":composed", c.side_composed);
  }
  if (r.include_timings) {
    for (const auto& [name, ms] : r.timings_ms) {
      csv_row(out, "timings_ms", name, fmt_double(ms));
    }
  }
  return out;
}

// Orbit table. Planar points also get ambient x,y columns; other components
// leave them blank.
inline std::string orbit_csv(const Family& family, const Orbit& orbit) {
  std::string out = "n,component,coord,x,y\n";
  for (std::size_t i = 0; i < orbit.points.size(); ++i) {
    const Point& p = orbit.points[i];
    const long n = orbit.offset + static_cast<long>(i) * orbit.stride;
    const ComponentSpec& comp = family.space.components[static_cast<std::size_t>(p.component)];
    out += std::to_string(n);
    out += ',';
    out += std::to_string(p.component);
    out += ',';
    out += report_detail::fmt_double(p.coord);
    if (comp.kind == ComponentKind::planar_circle) {
      out += ',';
      out += report_detail::fmt_double(comp.radius * std::cos(p.coord));
      out += ',';
      out += report_detail::fmt_double(comp.radius * std::sin(p.coord));
    } else {
      out += ",,";
    }
    out += '\n';
  }
  return out;
}

inline std::string orbit_json(const std::string& system, const Family& family,
                              const Orbit& orbit) {
  JsonWriter w;
  w.begin_object();
  w.key("version");
  w.value(FAMDYN_VERSION);
  w.key("system");
  w.value(system);
  w.key("stride");
  w.value(orbit.stride);
  w.key("offset");
  w.value(orbit.offset);
  w.key("orbit");
  w.begin_array();
  for (std::size_t i = 0; i < orbit.points.size(); ++i) {
    const Point& p = orbit.points[i];
    const long n = orbit.offset + static_cast<long>(i) * orbit.stride;
    const ComponentSpec& comp = family.space.components[static_cast<std::size_t>(p.component)];
    w.begin_object();
    w.key("n");
    w.value(n);
    w.key("component");
    w.value(p.component);
    w.key("coord");
    w.value(p.coord);
    if (comp.kind == ComponentKind::planar_circle) {
      w.key("x");
      w.value(comp.radius * std::cos(p.coord));
      w.key("y");
      w.value(comp.radius * std::sin(p.coord));
    }
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

}  // namespace famdyn
