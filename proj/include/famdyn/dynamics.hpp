#pragma once

// Maps, finite families, orbits. A family F = {f_1, ..., f_k} generates the
// non-autonomous trajectory
//   omega_0(x) = x,   omega_n(x) = f_{((n-1) mod k) + 1}(omega_{n-1}(x)),
// i.e. the maps are applied cyclically, f_1 first. composed(F) is the block
// map f_k o ... o f_1 evaluated as the same primitive application sequence,
// so omega_{nk}(x) and iterating composed(F) agree bit for bit.

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "famdyn/errors.hpp"
#include "famdyn/space.hpp"
#include "famdyn/verdict.hpp"

namespace famdyn {

inline constexpr std::uint64_t kDefaultStepCap = 1'000'000'000ULL;

enum class MapKind : std::uint8_t {
  rotation_swap,
  rigid_rotation,
  doubling,
  tent,
  affine,
  composition,
};

inline const char* to_string(MapKind k) {
  switch (k) {
    case MapKind::rotation_swap: return "rotation_swap";
    case MapKind::rigid_rotation: return "rigid_rotation";
    case MapKind::doubling: return "doubling";
    case MapKind::tent: return "tent";
    case MapKind::affine: return "affine";
    case MapKind::composition: return "composition";
  }
  return "?";
}

// Per-component rule of a rotation_swap: send the component to `target`,
// adding `angle` to the coordinate (radians on planar circles, turns on
// wrap circles; source and target must be circles of the same kind).
struct SwapRule {
  int target = 0;
  double angle = 0.0;
  friend bool operator==(const SwapRule&, const SwapRule&) = default;
};

struct MapSpec {
  MapKind kind = MapKind::rigid_rotation;
  SpaceSpec space;
  std::vector<SwapRule> rules;   // rotation_swap
  std::vector<double> angles;    // rigid_rotation
  double slope = 1.0;            // affine
  double intercept = 0.0;        // affine
  std::vector<MapSpec> chain;    // composition, in application order

  static MapSpec rotation_swap(SpaceSpec space, std::vector<SwapRule> rules);
  static MapSpec rigid_rotation(SpaceSpec space, std::vector<double> angles);
  static MapSpec doubling(SpaceSpec space);
  static MapSpec tent(SpaceSpec space);
  static MapSpec affine(SpaceSpec space, double slope, double intercept);
  static MapSpec composition(std::vector<MapSpec> chain);

  friend bool operator==(const MapSpec& x, const MapSpec& y) {
    return x.kind == y.kind && x.space == y.space && x.rules == y.rules &&
           x.angles == y.angles && x.slope == y.slope && x.intercept == y.intercept &&
           x.chain == y.chain;
  }
};

inline MapSpec MapSpec::rotation_swap(SpaceSpec space, std::vector<SwapRule> rules) {
  space.validate();
  const std::size_t n = space.components.size();
  if (rules.size() != n)
    throw InvalidInputError("rotation_swap needs exactly one rule per component");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = rules[i];
    if (r.target < 0 || r.target >= static_cast<int>(n))
      throw InvalidInputError("rotation_swap rule " + std::to_string(i) +
                              " targets missing component " + std::to_string(r.target));
    const auto& src = space.components[i];
    const auto& dst = space.components[static_cast<std::size_t>(r.target)];
    if (!src.is_circle() || src.kind != dst.kind)
      throw InvalidInputError("rotation_swap rule " + std::to_string(i) +
                              " needs circle components of matching kind");
    if (!std::isfinite(r.angle))
      throw InvalidInputError("rotation_swap angle must be finite");
  }
  MapSpec m;
  m.kind = MapKind::rotation_swap;
  m.space = std::move(space);
  m.rules = std::move(rules);
  return m;
}

inline MapSpec MapSpec::rigid_rotation(SpaceSpec space, std::vector<double> angles) {
  space.validate();
  if (angles.size() != space.components.size())
    throw InvalidInputError("rigid_rotation needs exactly one angle per component");
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (!std::isfinite(angles[i]))
      throw InvalidInputError("rigid_rotation angle must be finite");
    if (!space.components[i].is_circle() && angles[i] != 0.0)
      throw InvalidInputError("rigid_rotation on an interval component needs angle 0");
  }
  MapSpec m;
  m.kind = MapKind::rigid_rotation;
  m.space = std::move(space);
  m.angles = std::move(angles);
  return m;
}

inline MapSpec MapSpec::doubling(SpaceSpec space) {
  space.validate();
  for (const auto& c : space.components)
    if (!c.is_circle())
      throw InvalidInputError("doubling is defined on circle components only");
  MapSpec m;
  m.kind = MapKind::doubling;
  m.space = std::move(space);
  return m;
}

inline MapSpec MapSpec::tent(SpaceSpec space) {
  space.validate();
  MapSpec m;
  m.kind = MapKind::tent;
  m.space = std::move(space);
  return m;
}

inline MapSpec MapSpec::affine(SpaceSpec space, double slope, double intercept) {
  space.validate();
  if (!std::isfinite(slope) || !std::isfinite(intercept))
    throw InvalidInputError("affine coefficients must be finite");
  for (const auto& c : space.components) {
    if (c.is_circle() && slope != std::rint(slope))
      throw InvalidInputError("affine on a circle needs an integer slope to stay continuous");
    if (c.kind == ComponentKind::interval) {
      // The image of [a, b] is spanned by the endpoint images; both must stay inside.
      const double lo_img = slope * c.a + intercept;
      const double hi_img = slope * c.b + intercept;
      if (std::min(lo_img, hi_img) < c.a - kIntervalSlack ||
          std::max(lo_img, hi_img) > c.b + kIntervalSlack)
        throw InvalidInputError("affine image leaves interval [" + std::to_string(c.a) +
                                ", " + std::to_string(c.b) + "]");
    }
  }
  MapSpec m;
  m.kind = MapKind::affine;
  m.space = std::move(space);
  m.slope = slope;
  m.intercept = intercept;
  return m;
}

inline MapSpec MapSpec::composition(std::vector<MapSpec> chain) {
  if (chain.empty()) throw InvalidInputError("composition needs at least one map");
  for (const auto& link : chain)
    if (!(link.space == chain.front().space))
      throw InvalidInputError("composition links must share one space");
  MapSpec m;
  m.kind = MapKind::composition;
  m.space = chain.front().space;
  m.chain = std::move(chain);
  return m;
}

inline Point apply(const MapSpec& map, const Point& x) {
  Point p = normalize(map.space, x);
  switch (map.kind) {
    case MapKind::rotation_swap: {
      const SwapRule& r = map.rules[static_cast<std::size_t>(p.component)];
      return normalize(map.space, Point{r.target, p.coord + r.angle});
    }
    case MapKind::rigid_rotation:
      return normalize(map.space,
                       Point{p.component, p.coord + map.angles[static_cast<std::size_t>(p.component)]});
    case MapKind::doubling:
      return normalize(map.space, Point{p.component, 2.0 * p.coord});
    case MapKind::tent: {
      const ComponentSpec& c = map.space.component_of(p);
      const double span = c.coord_span();
      const double lo = (c.kind == ComponentKind::interval) ? c.a : 0.0;
      const double u = (p.coord - lo) / span;
      const double v = (u < 0.5) ? 2.0 * u : 2.0 - 2.0 * u;
      return normalize(map.space, Point{p.component, lo + v * span});
    }
    case MapKind::affine: {
      const ComponentSpec& c = map.space.component_of(p);
      const double v = map.slope * p.coord + map.intercept;
      if (c.kind == ComponentKind::interval && (v < c.a - kIntervalSlack || v > c.b + kIntervalSlack))
        throw InvalidInputError("affine image " + std::to_string(v) + " leaves interval [" +
                                std::to_string(c.a) + ", " + std::to_string(c.b) + "]");
      return normalize(map.space, Point{p.component, v});
    }
    case MapKind::composition: {
      for (const auto& link : map.chain) p = apply(link, p);
      return p;
    }
  }
  return p;
}

// Component index the map sends `comp` to; coordinate-independent for every
// built-in kind, which is what makes structural component-reachability
// arguments exact.
inline int component_action(const MapSpec& map, int comp) {
  switch (map.kind) {
    case MapKind::rotation_swap:
      return map.rules[static_cast<std::size_t>(comp)].target;
    case MapKind::composition: {
      int c = comp;
      for (const auto& link : map.chain) c = component_action(link, c);
      return c;
    }
    default:
      return comp;
  }
}

struct Family {
  SpaceSpec space;
  std::vector<MapSpec> maps;

  std::size_t k() const { return maps.size(); }

  void validate() const {
    space.validate();
    if (maps.empty()) throw InvalidInputError("family needs at least one map");
    for (const auto& m : maps)
      if (!(m.space == space))
        throw InvalidInputError("family maps must share the family space");
  }

  const MapSpec& map_at_step(long n) const {
    // Map applied between omega_n and omega_{n+1}.
    return maps[static_cast<std::size_t>(n % static_cast<long>(maps.size()))];
  }
};

inline Family make_family(SpaceSpec space, std::vector<MapSpec> maps) {
  Family f{std::move(space), std::move(maps)};
  f.validate();
  return f;
}

inline Point omega(const Family& family, long n, const Point& x) {
  if (n < 0) throw InvalidInputError("omega index must be >= 0");
  Point p = normalize(family.space, x);
  for (long i = 0; i < n; ++i) p = apply(family.map_at_step(i), p);
  return p;
}

inline MapSpec composed(const Family& family) {
  family.validate();
  return MapSpec::composition(family.maps);
}

// g_r = f_r o ... o f_1 for r in [1, k].
inline MapSpec prefix_block(const Family& family, std::size_t r) {
  family.validate();
  if (r < 1 || r > family.k())
    throw InvalidInputError("prefix_block index must lie in [1, k]");
  return MapSpec::composition(
      std::vector<MapSpec>(family.maps.begin(), family.maps.begin() + static_cast<long>(r)));
}

// h_r = f_k o ... o f_{k-r} for r in [0, k-1].
inline MapSpec suffix_block(const Family& family, std::size_t r) {
  family.validate();
  if (r >= family.k())
    throw InvalidInputError("suffix_block index must lie in [0, k-1]");
  return MapSpec::composition(
      std::vector<MapSpec>(family.maps.end() - static_cast<long>(r) - 1, family.maps.end()));
}

inline MapSpec power(const MapSpec& map, std::size_t m) {
  if (m < 1) throw InvalidInputError("power exponent must be >= 1");
  if (m == 1) return map;
  return MapSpec::composition(std::vector<MapSpec>(m, map));
}

struct Orbit {
  Point start;
  long stride = 1;
  long offset = 0;
  std::vector<Point> points;  // points[i] = omega_{offset + i * stride}(start)
};

inline Orbit orbit_segment(const Family& family, const Point& x, long N, long stride = 1,
                           long offset = 0, std::uint64_t step_cap = kDefaultStepCap) {
  family.validate();
  if (N < 0) throw InvalidInputError("orbit horizon must be >= 0");
  if (stride < 1) throw InvalidInputError("orbit stride must be >= 1");
  if (offset < 0) throw InvalidInputError("orbit offset must be >= 0");
  // N + 1 samples at indices offset, offset + stride, ..., offset + N * stride.
  const std::uint64_t steps =
      static_cast<std::uint64_t>(offset) +
      static_cast<std::uint64_t>(N) * static_cast<std::uint64_t>(stride);
  if (steps > step_cap)
    throw ResourceLimitError("orbit would need " + std::to_string(steps) +
                             " map applications, over step cap " + std::to_string(step_cap));
  Orbit orbit;
  orbit.start = normalize(family.space, x);
  orbit.stride = stride;
  orbit.offset = offset;
  orbit.points.reserve(static_cast<std::size_t>(N) + 1);
  Point p = orbit.start;
  long t = 0;
  for (; t < offset; ++t) p = apply(family.map_at_step(t), p);
  orbit.points.push_back(p);
  for (long i = 1; i <= N; ++i) {
    for (long s = 0; s < stride; ++s, ++t) p = apply(family.map_at_step(t), p);
    orbit.points.push_back(p);
  }
  return orbit;
}

// Evidence-style surjectivity probe: the image of an (eps/2)-net must leave
// no point of that net farther than eps from the image set.
inline Verdict check_surjectivity(const MapSpec& map, double eps,
                                  std::size_t net_cap = kDefaultNetCap,
                                  std::uint64_t work_cap = 4'000'000'000ULL) {
  if (!(eps > 0.0)) throw InvalidInputError("check_surjectivity requires eps > 0");
  const Net net = build_epsilon_net(map.space, eps / 2.0, net_cap);
  const std::size_t n = net.points.size();
  if (static_cast<std::uint64_t>(n) * n > work_cap)
    throw ResourceLimitError("surjectivity scan needs " + std::to_string(n) + "^2 distances, over work cap " +
                             std::to_string(work_cap));
  std::vector<Point> image(n);
  for (std::size_t i = 0; i < n; ++i) image[i] = apply(map, net.points[i]);

  Verdict v;
  v.detector = "surjectivity";
  double worst_gap = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = distance(map.space, net.points[t], image[i]);
      if (best < 0.0 || d < best) best = d;
    }
    if (best > eps) {
      v.status = Status::refuted;
      v.witness.points = {net.points[t]};
      v.witness.indices = {static_cast<long>(t)};
      v.witness.note = "net point with no image within eps";
      v.measured["gap"] = best;
      v.measured["eps"] = eps;
      return v;
    }
    worst_gap = std::max(worst_gap, best);
  }
  v.status = Status::witnessed;
  v.witness.note = "image of the eps/2 net is eps-dense over that net";
  v.measured["worst_gap"] = worst_gap;
  v.measured["eps"] = eps;
  return v;
}

}  // namespace famdyn
