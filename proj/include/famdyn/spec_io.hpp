#pragma once

// System spec files: a strict JSON schema describing a space, a map family,
// and optional default parameters.
//
//   {
//     "name": "my-system",
//     "space": {"components": [{"kind": "wrap_circle"}]},
//     "family": [{"kind": "rigid_rotation", "angles": ["irrational"]}],
//     "params": {"N": 1000, "grid": 0.001}
//   }
//
// Unknown keys are rejected. Validation walks the whole document and
// collects every issue with line:col (derived from byte offsets) and a
// JSON-pointer path, instead of stopping at the first problem. Rotation
// angles may be numbers or the strings "irrational" / "<int>*irrational",
// which resolve to golden-ratio multiples in the target component's units
// (radians on planar circles, turns on wrap circles).

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "famdyn/corpus.hpp"
#include "famdyn/dynamics.hpp"
#include "famdyn/errors.hpp"
#include "famdyn/space.hpp"
#include "famdyn/verdict.hpp"

namespace famdyn {

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct SpecIssue {
  std::string path;
  std::string message;
  long line = 0;
  long col = 0;
};

class SpecParseError : public InvalidInputError {
 public:
  SpecParseError(const std::string& origin, std::vector<SpecIssue> list)
      : InvalidInputError(format(origin, list)), issues(std::move(list)) {}

  std::vector<SpecIssue> issues;

 private:
  static std::string format(const std::string& origin, const std::vector<SpecIssue>& list) {
    std::ostringstream os;
    os << "invalid system spec: " << list.size() << (list.size() == 1 ? " issue" : " issues");
    for (const SpecIssue& it : list) {
      os << "\n  " << origin << ':' << it.line << ':' << it.col << ": " << it.path << ": "
         << it.message;
    }
    return os.str();
  }
};

struct SystemSpecFile {
  std::string name;
  Family family;
  HorizonParams params;
  double eps = 0.05;
  std::uint64_t digest = 0;
};

namespace spec_detail {

inline std::pair<long, long> line_col(std::string_view text, std::size_t off) {
  long line = 1, col = 1;
  for (std::size_t i = 0; i < off && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Byte offset of every element in an already-parsed JSON text, keyed by
// JSON-pointer path. Powers line:col output for semantic issues.
class ElementLocator {
 public:
  explicit ElementLocator(std::string_view text) : s_(text) { value(""); }

  std::size_t offset_of(const std::string& path) const {
    auto it = offsets_.find(path.empty() ? std::string("/") : path);
    return it == offsets_.end() ? 0 : it->second;
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
  std::map<std::string, std::size_t> offsets_;

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  std::string string_token() {
    ++i_;
    std::string out;
    while (i_ < s_.size() && s_[i_] != '"') {
      if (s_[i_] == '\\' && i_ + 1 < s_.size()) {
        out += s_[i_ + 1];
        i_ += 2;
      } else {
        out += s_[i_];
        ++i_;
      }
    }
    if (i_ < s_.size()) ++i_;
    return out;
  }

  void value(const std::string& path) {
    skip_ws();
    offsets_[path.empty() ? std::string("/") : path] = i_;
    if (i_ >= s_.size()) return;
    const char c = s_[i_];
    if (c == '{') {
      ++i_;
      while (true) {
        skip_ws();
        if (i_ >= s_.size()) return;
        if (s_[i_] == '}') {
          ++i_;
          return;
        }
        if (s_[i_] == ',') {
          ++i_;
          continue;
        }
        const std::string key = string_token();
        skip_ws();
        if (i_ < s_.size() && s_[i_] == ':') ++i_;
        value(path + "/" + key);
      }
    } else if (c == '[') {
      ++i_;
      std::size_t idx = 0;
      while (true) {
        skip_ws();
        if (i_ >= s_.size()) return;
        if (s_[i_] == ']') {
          ++i_;
          return;
        }
        if (s_[i_] == ',') {
          ++i_;
          continue;
        }
        value(path + "/" + std::to_string(idx));
        ++idx;
      }
    } else if (c == '"') {
      string_token();
    } else {
      while (i_ < s_.size() && s_[i_] != ',' && s_[i_] != ']' && s_[i_] != '}' &&
             !std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      }
    }
  }
};

inline bool parse_irrational_multiple(const std::string& s, double& mult) {
  if (s == "irrational") {
    mult = 1.0;
    return true;
  }
  const std::string tail = "*irrational";
  if (s.size() <= tail.size() || s.compare(s.size() - tail.size(), tail.size(), tail) != 0) {
    return false;
  }
  const std::string head = s.substr(0, s.size() - tail.size());
  std::size_t pos = 0;
  bool neg = false;
  if (head[0] == '-') {
    neg = true;
    pos = 1;
  }
  if (pos >= head.size()) return false;
  long long n = 0;
  for (; pos < head.size(); ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(head[pos]))) return false;
    n = n * 10 + (head[pos] - '0');
    if (n > 1'000'000) return false;
  }
  if (n == 0) return false;
  mult = static_cast<double>(neg ? -n : n);
  return true;
}

class SpecReader {
 public:
  SpecReader(const nlohmann::json& root, const ElementLocator& loc, std::string_view text,
             std::string origin)
      : root_(root), loc_(loc), text_(text), origin_(std::move(origin)) {}

  void read(SystemSpecFile& out) {
    if (!root_.is_object()) {
      issue("", "top level must be an object");
      throw_if_issues();
    }
    check_keys(root_, "", {"name", "space", "family", "params"});

    if (const nlohmann::json* name = require_field(root_, "", "name")) {
      if (name->is_string() && !name->get<std::string>().empty()) {
        out.name = name->get<std::string>();
      } else {
        issue("/name", "name must be a non-empty string");
      }
    }

    bool space_ok = false;
    SpaceSpec space = read_space(space_ok);
    std::vector<MapSpec> maps = read_family(space, space_ok);
    read_params(out);
    throw_if_issues();
    out.family = make_family(space, maps);
  }

 private:
  const nlohmann::json& root_;
  const ElementLocator& loc_;
  std::string_view text_;
  std::string origin_;
  std::vector<SpecIssue> issues_;

  void issue(const std::string& path, std::string msg) {
    auto [line, col] = line_col(text_, loc_.offset_of(path));
    issues_.push_back({path.empty() ? std::string("/") : path, std::move(msg), line, col});
  }

  void throw_if_issues() {
    if (!issues_.empty()) throw SpecParseError(origin_, std::move(issues_));
  }

  void check_keys(const nlohmann::json& obj, const std::string& path,
                  std::initializer_list<std::string_view> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool ok = false;
      for (std::string_view a : allowed) {
        if (it.key() == a) {
          ok = true;
          break;
        }
      }
      if (!ok) issue(path + "/" + it.key(), "unknown key \"" + it.key() + "\"");
    }
  }

  const nlohmann::json* require_field(const nlohmann::json& obj, const std::string& path,
                                      const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      issue(path, std::string("missing required key \"") + key + "\"");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> finite_number(const nlohmann::json& v, const std::string& path,
                                      const char* what) {
    if (!v.is_number()) {
      issue(path, std::string(what) + " must be a number");
      return std::nullopt;
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      issue(path, std::string(what) + " must be finite");
      return std::nullopt;
    }
    return d;
  }

  SpaceSpec read_space(bool& space_ok) {
    SpaceSpec space;
    const nlohmann::json* sp = require_field(root_, "", "space");
    if (!sp) return space;
    if (!sp->is_object()) {
      issue("/space", "space must be an object");
      return space;
    }
    check_keys(*sp, "/space", {"components"});
    const nlohmann::json* comps = require_field(*sp, "/space", "components");
    if (!comps) return space;
    if (!comps->is_array() || comps->empty()) {
      issue("/space/components", "components must be a non-empty array");
      return space;
    }
    bool all_ok = true;
    for (std::size_t i = 0; i < comps->size(); ++i) {
      const std::string path = "/space/components/" + std::to_string(i);
      const nlohmann::json& c = (*comps)[i];
      if (!c.is_object()) {
        issue(path, "component must be an object");
        all_ok = false;
        continue;
      }
      auto kind_it = c.find("kind");
      if (kind_it == c.end() || !kind_it->is_string()) {
        issue(path, "component needs a string \"kind\"");
        all_ok = false;
        continue;
      }
      const std::string kind = kind_it->get<std::string>();
      if (kind == "planar_circle") {
        check_keys(c, path, {"kind", "radius"});
        const nlohmann::json* rj = require_field(c, path, "radius");
        std::optional<double> r =
            rj ? finite_number(*rj, path + "/radius", "radius") : std::nullopt;
        if (r && *r > 0.0) {
          space.components.push_back(ComponentSpec::planar_circle(*r));
        } else {
          if (r) issue(path + "/radius", "radius must be positive");
          all_ok = false;
        }
      } else if (kind == "wrap_circle") {
        check_keys(c, path, {"kind"});
        space.components.push_back(ComponentSpec::wrap_circle());
      } else if (kind == "interval") {
        check_keys(c, path, {"kind", "a", "b"});
        const nlohmann::json* aj = require_field(c, path, "a");
        const nlohmann::json* bj = require_field(c, path, "b");
        std::optional<double> a = aj ? finite_number(*aj, path + "/a", "a") : std::nullopt;
        std::optional<double> b = bj ? finite_number(*bj, path + "/b", "b") : std::nullopt;
        if (a && b && *b > *a) {
          space.components.push_back(ComponentSpec::interval(*a, *b));
        } else {
          if (a && b) issue(path, "interval needs b > a");
          all_ok = false;
        }
      } else {
        issue(path + "/kind",
              "unknown component kind \"" + kind +
                  "\" (expected planar_circle, wrap_circle, or interval)");
        all_ok = false;
      }
    }
    if (all_ok) {
      try {
        space.validate();
        space_ok = true;
      } catch (const InvalidInputError& ex) {
        issue("/space", ex.what());
      }
    }
    return space;
  }

  std::optional<double> resolve_angle(const nlohmann::json& v, ComponentKind kind,
                                      const std::string& path) {
    if (v.is_number()) return finite_number(v, path, "angle");
    if (v.is_string()) {
      double mult = 0.0;
      if (!parse_irrational_multiple(v.get<std::string>(), mult)) {
        issue(path, "angle string must be \"irrational\" or \"<int>*irrational\"");
        return std::nullopt;
      }
      if (kind == ComponentKind::interval) {
        issue(path, "interval components take no irrational angle");
        return std::nullopt;
      }
      return mult * (kind == ComponentKind::planar_circle ? golden_angle() : golden_turn());
    }
    issue(path, "angle must be a number or an irrational-multiple string");
    return std::nullopt;
  }

  std::vector<MapSpec> read_family(const SpaceSpec& space, bool space_ok) {
    std::vector<MapSpec> maps;
    const nlohmann::json* fam = require_field(root_, "", "family");
    if (!fam) return maps;
    if (!fam->is_array() || fam->empty()) {
      issue("/family", "family must be a non-empty array of maps");
      return maps;
    }
    for (std::size_t i = 0; i < fam->size(); ++i) {
      const std::string path = "/family/" + std::to_string(i);
      const nlohmann::json& m = (*fam)[i];
      if (!m.is_object()) {
        issue(path, "map must be an object");
        continue;
      }
      auto kind_it = m.find("kind");
      if (kind_it == m.end() || !kind_it->is_string()) {
        issue(path, "map needs a string \"kind\"");
        continue;
      }
      const std::string kind = kind_it->get<std::string>();
      try {
        if (kind == "rotation_swap") {
          read_rotation_swap(m, path, space, space_ok, maps);
        } else if (kind == "rigid_rotation") {
          read_rigid_rotation(m, path, space, space_ok, maps);
        } else if (kind == "doubling") {
          check_keys(m, path, {"kind"});
          if (space_ok) maps.push_back(MapSpec::doubling(space));
        } else if (kind == "tent") {
          check_keys(m, path, {"kind"});
          if (space_ok) maps.push_back(MapSpec::tent(space));
        } else if (kind == "affine") {
          check_keys(m, path, {"kind", "slope", "intercept"});
          const nlohmann::json* sj = require_field(m, path, "slope");
          const nlohmann::json* cj = require_field(m, path, "intercept");
          std::optional<double> slope =
              sj ? finite_number(*sj, path + "/slope", "slope") : std::nullopt;
          std::optional<double> icpt =
              cj ? finite_number(*cj, path + "/intercept", "intercept") : std::nullopt;
          if (slope && icpt && space_ok) maps.push_back(MapSpec::affine(space, *slope, *icpt));
        } else {
          issue(path + "/kind",
                "unknown map kind \"" + kind +
                    "\" (expected rotation_swap, rigid_rotation, doubling, tent, or affine)");
        }
      } catch (const InvalidInputError& ex) {
        issue(path, ex.what());
      }
    }
    return maps;
  }

  void read_rotation_swap(const nlohmann::json& m, const std::string& path,
                          const SpaceSpec& space, bool space_ok, std::vector<MapSpec>& maps) {
    check_keys(m, path, {"kind", "rules"});
    const nlohmann::json* rules = require_field(m, path, "rules");
    if (!rules) return;
    if (!rules->is_array() || rules->empty()) {
      issue(path + "/rules", "rules must be a non-empty array, one per component");
      return;
    }
    std::vector<SwapRule> parsed;
    bool ok = true;
    for (std::size_t j = 0; j < rules->size(); ++j) {
      const std::string rpath = path + "/rules/" + std::to_string(j);
      const nlohmann::json& r = (*rules)[j];
      if (!r.is_object()) {
        issue(rpath, "rule must be an object");
        ok = false;
        continue;
      }
      check_keys(r, rpath, {"target", "angle"});
      const nlohmann::json* tj = require_field(r, rpath, "target");
      const nlohmann::json* aj = require_field(r, rpath, "angle");
      if (!tj || !aj) {
        ok = false;
        continue;
      }
      if (!tj->is_number_integer()) {
        issue(rpath + "/target", "target must be a component index");
        ok = false;
        continue;
      }
      const long long target = tj->get<long long>();
      if (!space_ok || target < 0 ||
          target >= static_cast<long long>(space.components.size())) {
        if (space_ok) issue(rpath + "/target", "target component index out of range");
        ok = false;
        continue;
      }
      std::optional<double> angle = resolve_angle(
          *aj, space.components[static_cast<std::size_t>(target)].kind, rpath + "/angle");
      if (!angle) {
        ok = false;
        continue;
      }
      parsed.push_back(SwapRule{static_cast<int>(target), *angle});
    }
    if (ok && space_ok) maps.push_back(MapSpec::rotation_swap(space, parsed));
  }

  void read_rigid_rotation(const nlohmann::json& m, const std::string& path,
                           const SpaceSpec& space, bool space_ok, std::vector<MapSpec>& maps) {
    check_keys(m, path, {"kind", "angles"});
    const nlohmann::json* angles = require_field(m, path, "angles");
    if (!angles) return;
    if (!angles->is_array() || angles->empty()) {
      issue(path + "/angles", "angles must be a non-empty array, one per component");
      return;
    }
    std::vector<double> parsed;
    bool ok = true;
    for (std::size_t j = 0; j < angles->size(); ++j) {
      const std::string apath = path + "/angles/" + std::to_string(j);
      const ComponentKind kind = (space_ok && j < space.components.size())
                                     ? space.components[j].kind
                                     : ComponentKind::wrap_circle;
      std::optional<double> a = resolve_angle((*angles)[j], kind, apath);
      if (!a) {
        ok = false;
        continue;
      }
      parsed.push_back(*a);
    }
    if (ok && space_ok) maps.push_back(MapSpec::rigid_rotation(space, parsed));
  }

  void read_params(SystemSpecFile& out) {
    auto it = root_.find("params");
    if (it == root_.end()) return;
    const nlohmann::json& p = *it;
    if (!p.is_object()) {
      issue("/params", "params must be an object");
      return;
    }
    check_keys(p, "/params", {"N", "eps", "grid", "tau", "delta", "window", "seed"});
    if (auto n = p.find("N"); n != p.end()) {
      if (n->is_number_integer() && n->get<long long>() >= 1) {
        out.params.N = n->get<long>();
      } else {
        issue("/params/N", "N must be an integer >= 1");
      }
    }
    auto positive = [&](const char* key, double& dst) {
      if (auto v = p.find(key); v != p.end()) {
        std::optional<double> d = finite_number(*v, std::string("/params/") + key, key);
        if (d && *d > 0.0) {
          dst = *d;
        } else if (d) {
          issue(std::string("/params/") + key, std::string(key) + " must be positive");
        }
      }
    };
    positive("eps", out.eps);
    positive("grid", out.params.eps_grid);
    positive("tau", out.params.tau);
    positive("delta", out.params.delta);
    if (auto w = p.find("window"); w != p.end()) {
      if (w->is_number_integer() && w->get<long long>() >= -1) {
        out.params.window = w->get<long>();
      } else {
        issue("/params/window", "window must be an integer >= -1 (-1 means N/2)");
      }
    }
    if (auto s = p.find("seed"); s != p.end()) {
      if (s->is_number_unsigned() || (s->is_number_integer() && s->get<long long>() >= 0)) {
        out.params.seed = s->get<std::uint64_t>();
      } else {
        issue("/params/seed", "seed must be a non-negative integer");
      }
    }
  }
};

}  // namespace spec_detail

inline SystemSpecFile parse_system_spec(const std::string& text,
                                        const std::string& origin = "spec") {
  SystemSpecFile out;
  out.digest = fnv1a64(text);
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    const std::size_t off = ex.byte > 0 ? ex.byte - 1 : 0;
    auto [line, col] = spec_detail::line_col(text, off);
    throw SpecParseError(origin,
                         {{"/", std::string("JSON syntax error: ") + ex.what(), line, col}});
  }
  spec_detail::ElementLocator loc(text);
  spec_detail::SpecReader reader(root, loc, text, origin);
  reader.read(out);
  return out;
}

inline SystemSpecFile load_system_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system_spec(buf.str(), path);
}

// Spec-file text for a built-in system; parsing it back yields the same
// space and maps. Golden-ratio angles are emitted as irrational-multiple
// strings so the round trip is exact.
inline std::string corpus_spec_json(const std::string& name) {
  using ojson = nlohmann::ordered_json;
  const Family fam = corpus_system(name);

  auto angle_json = [](double angle, ComponentKind kind) -> ojson {
    const double base =
        kind == ComponentKind::planar_circle ? golden_angle() : golden_turn();
    if (kind != ComponentKind::interval) {
      for (int mult = 1; mult <= 4; ++mult) {
        if (angle == static_cast<double>(mult) * base) {
          return mult == 1 ? ojson("irrational") : ojson(std::to_string(mult) + "*irrational");
        }
      }
    }
    return ojson(angle);
  };

  ojson root;
  root["name"] = name;
  ojson comps = ojson::array();
  for (const ComponentSpec& c : fam.space.components) {
    switch (c.kind) {
      case ComponentKind::planar_circle:
        comps.push_back({{"kind", "planar_circle"}, {"radius", c.radius}});
        break;
      case ComponentKind::wrap_circle:
        comps.push_back({{"kind", "wrap_circle"}});
        break;
      case ComponentKind::interval:
        comps.push_back({{"kind", "interval"}, {"a", c.a}, {"b", c.b}});
        break;
    }
  }
  root["space"] = ojson{{"components", comps}};

  ojson maps = ojson::array();
  for (const MapSpec& m : fam.maps) {
    ojson mj;
    switch (m.kind) {
      case MapKind::rotation_swap: {
        mj["kind"] = "rotation_swap";
        ojson rules = ojson::array();
        for (const SwapRule& r : m.rules) {
          const ComponentKind tk = fam.space.components[static_cast<std::size_t>(r.target)].kind;
          rules.push_back({{"target", r.target}, {"angle", angle_json(r.angle, tk)}});
        }
        mj["rules"] = rules;
        break;
      }
      case MapKind::rigid_rotation: {
        mj["kind"] = "rigid_rotation";
        ojson angles = ojson::array();
        for (std::size_t i = 0; i < m.angles.size(); ++i) {
          angles.push_back(angle_json(m.angles[i], fam.space.components[i].kind));
        }
        mj["angles"] = angles;
        break;
      }
      case MapKind::doubling:
        mj["kind"] = "doubling";
        break;
      case MapKind::tent:
        mj["kind"] = "tent";
        break;
      case MapKind::affine:
        mj["kind"] = "affine";
        mj["slope"] = m.slope;
        mj["intercept"] = m.intercept;
        break;
      case MapKind::composition:
        throw InvalidInputError("composition maps have no spec-file form");
    }
    maps.push_back(mj);
  }
  root["family"] = maps;
  return root.dump(2) + "\n";
}

}  // namespace famdyn
