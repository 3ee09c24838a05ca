#pragma once

// Compact metric spaces assembled from a finite component list:
//   planar_circle  angle in radians, radius r, embedded at (r cos t, r sin t)
//                  in one shared plane; metric is ambient Euclidean (chord).
//   wrap_circle    coordinate in [0,1), circumference 1, shortest-arc metric
//                  min(|x-y|, 1-|x-y|).
//   interval       coordinate in [a,b], metric |x-y|.
//
// Cross-component distances:
//   * planar vs planar: ambient Euclidean between the concentric embeddings.
//   * any other pair: routed through a hub, d = anchor(p) + gap + anchor(q),
//     where anchor() is the distance to the component's reference point
//     (coordinate 0 for circles, the left endpoint for intervals; for planar
//     circles the constant radius, i.e. distance to the plane origin).
//     anchor() is 1-Lipschitz inside each component and the hub legs dominate
//     the direct planar chords, so the triangle inequality holds for every
//     mixed triple.
//
// Two planar circles with equal radii would coincide in the plane, so
// validation rejects duplicate planar radii.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "famdyn/errors.hpp"

namespace famdyn {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;
// Gap between components that are not both planar circles.
inline constexpr double kComponentGap = 1.0;
// Default cap on epsilon-net size.
inline constexpr std::size_t kDefaultNetCap = 10'000'000;
// Intervals admit map images this far outside [a,b] (clamped afterwards).
inline constexpr double kIntervalSlack = 1e-9;
// Relative slack when collecting net points inside a metric ball, so grids
// whose spacing equals the radius up to rounding keep their neighbors.
inline constexpr double kBallSlack = 1e-9;

enum class ComponentKind : std::uint8_t { planar_circle, wrap_circle, interval };

inline const char* to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::planar_circle: return "planar_circle";
    case ComponentKind::wrap_circle: return "wrap_circle";
    case ComponentKind::interval: return "interval";
  }
  return "?";
}

struct ComponentSpec {
  ComponentKind kind = ComponentKind::wrap_circle;
  double radius = 1.0;  // planar_circle only
  double a = 0.0;       // interval only
  double b = 1.0;       // interval only

  static ComponentSpec planar_circle(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius))
      throw InvalidInputError("planar_circle radius must be finite and > 0");
    ComponentSpec c;
    c.kind = ComponentKind::planar_circle;
    c.radius = radius;
    return c;
  }
  static ComponentSpec wrap_circle() {
    ComponentSpec c;
    c.kind = ComponentKind::wrap_circle;
    return c;
  }
  static ComponentSpec interval(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
      throw InvalidInputError("interval requires finite endpoints with a < b");
    ComponentSpec c;
    c.kind = ComponentKind::interval;
    c.a = a;
    c.b = b;
    return c;
  }

  bool is_circle() const { return kind != ComponentKind::interval; }
  // Full coordinate span: 2*pi for planar circles, 1 for wrap, b-a for intervals.
  double coord_span() const {
    switch (kind) {
      case ComponentKind::planar_circle: return kTwoPi;
      case ComponentKind::wrap_circle: return 1.0;
      case ComponentKind::interval: return b - a;
    }
    return 0.0;
  }
  // Largest distance between two of this component's points.
  double intra_diameter() const {
    switch (kind) {
      case ComponentKind::planar_circle: return 2.0 * radius;
      case ComponentKind::wrap_circle: return 0.5;
      case ComponentKind::interval: return b - a;
    }
    return 0.0;
  }
  // Largest anchor() value over the component.
  double max_anchor() const {
    switch (kind) {
      case ComponentKind::planar_circle: return radius;
      case ComponentKind::wrap_circle: return 0.5;
      case ComponentKind::interval: return b - a;
    }
    return 0.0;
  }

  friend bool operator==(const ComponentSpec& x, const ComponentSpec& y) {
    if (x.kind != y.kind) return false;
    switch (x.kind) {
      case ComponentKind::planar_circle: return x.radius == y.radius;
      case ComponentKind::wrap_circle: return true;
      case ComponentKind::interval: return x.a == y.a && x.b == y.b;
    }
    return false;
  }
};

struct Point {
  int component = 0;
  double coord = 0.0;

  friend bool operator==(const Point& x, const Point& y) {
    return x.component == y.component && x.coord == y.coord;
  }
};

struct SpaceSpec {
  std::vector<ComponentSpec> components;

  bool connected() const { return components.size() == 1; }

  void validate() const {
    if (components.empty())
      throw InvalidInputError("space needs at least one component");
    std::vector<double> radii;
    for (const auto& c : components) {
      if (c.kind == ComponentKind::planar_circle) {
        if (!(c.radius > 0.0) || !std::isfinite(c.radius))
          throw InvalidInputError("planar_circle radius must be finite and > 0");
        radii.push_back(c.radius);
      } else if (c.kind == ComponentKind::interval) {
        if (!std::isfinite(c.a) || !std::isfinite(c.b) || !(c.a < c.b))
          throw InvalidInputError("interval requires finite endpoints with a < b");
      }
    }
    std::sort(radii.begin(), radii.end());
    if (std::adjacent_find(radii.begin(), radii.end()) != radii.end())
      throw InvalidInputError(
          "planar_circle components must have pairwise distinct radii "
          "(concentric embedding would make distinct points coincide)");
  }

  const ComponentSpec& component_of(const Point& p) const {
    if (p.component < 0 || p.component >= static_cast<int>(components.size()))
      throw InvalidInputError("point component index " + std::to_string(p.component) +
                              " outside space with " + std::to_string(components.size()) +
                              " component(s)");
    return components[static_cast<std::size_t>(p.component)];
  }

  friend bool operator==(const SpaceSpec& x, const SpaceSpec& y) {
    return x.components == y.components;
  }
};

// Folds a circle coordinate into [0, span). Values within kIntervalSlack of
// an interval's endpoints are clamped; anything further out is rejected.
inline Point normalize(const SpaceSpec& space, Point p) {
  const ComponentSpec& c = space.component_of(p);
  if (!std::isfinite(p.coord))
    throw InvalidInputError("point coordinate must be finite");
  switch (c.kind) {
    case ComponentKind::planar_circle:
    case ComponentKind::wrap_circle: {
      const double span = c.coord_span();
      double v = std::fmod(p.coord, span);
      if (v < 0.0) v += span;
      if (v >= span) v = 0.0;  // fmod edge after the correction above
      p.coord = v;
      return p;
    }
    case ComponentKind::interval: {
      if (p.coord < c.a - kIntervalSlack || p.coord > c.b + kIntervalSlack)
        throw InvalidInputError("interval point " + std::to_string(p.coord) +
                                " outside [" + std::to_string(c.a) + ", " +
                                std::to_string(c.b) + "]");
      p.coord = std::clamp(p.coord, c.a, c.b);
      return p;
    }
  }
  return p;
}

// Distance to the component's reference point; used for hub routing.
inline double anchor_distance(const ComponentSpec& c, double coord) {
  switch (c.kind) {
    case ComponentKind::planar_circle: return c.radius;
    case ComponentKind::wrap_circle: {
      const double d = std::fabs(coord);
      return std::min(d, 1.0 - d);
    }
    case ComponentKind::interval: return coord - c.a;
  }
  return 0.0;
}

inline double wrap_distance(double x, double y) {
  const double d = std::fabs(x - y);
  return std::min(d, 1.0 - d);
}

inline double planar_ambient_distance(double r1, double t1, double r2, double t2) {
  const double dx = r1 * std::cos(t1) - r2 * std::cos(t2);
  const double dy = r1 * std::sin(t1) - r2 * std::sin(t2);
  return std::sqrt(dx * dx + dy * dy);
}

inline double distance(const SpaceSpec& space, const Point& p, const Point& q) {
  const ComponentSpec& cp = space.component_of(p);
  const ComponentSpec& cq = space.component_of(q);
  if (p.component == q.component) {
    switch (cp.kind) {
      case ComponentKind::planar_circle:
        return planar_ambient_distance(cp.radius, p.coord, cp.radius, q.coord);
      case ComponentKind::wrap_circle:
        return wrap_distance(p.coord, q.coord);
      case ComponentKind::interval:
        return std::fabs(p.coord - q.coord);
    }
  }
  if (cp.kind == ComponentKind::planar_circle && cq.kind == ComponentKind::planar_circle)
    return planar_ambient_distance(cp.radius, p.coord, cq.radius, q.coord);
  // Sum the two anchor legs first so the result is bitwise symmetric in p, q.
  return (anchor_distance(cp, p.coord) + anchor_distance(cq, q.coord)) + kComponentGap;
}

// Exact supremum of pairwise distances over the whole space.
inline double space_diameter(const SpaceSpec& space) {
  space.validate();
  const std::size_t n = space.components.size();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const ComponentSpec& ci = space.components[i];
    best = std::max(best, ci.intra_diameter());
    for (std::size_t j = i + 1; j < n; ++j) {
      const ComponentSpec& cj = space.components[j];
      double d;
      if (ci.kind == ComponentKind::planar_circle && cj.kind == ComponentKind::planar_circle)
        d = ci.radius + cj.radius;
      else
        d = ci.max_anchor() + kComponentGap + cj.max_anchor();
      best = std::max(best, d);
    }
  }
  return best;
}

// Epsilon net with per-component layout kept for index arithmetic.
// Deterministic uniform grids; adjacent same-component samples sit strictly
// closer than eps in the metric (so the net is eps-covering with margin).
// Planar circles share one angular step, the finest any of them needs.
struct Net {
  struct CompLayout {
    std::size_t first = 0;  // index of the component's first point
    std::size_t count = 0;
    double step = 0.0;  // coordinate step between consecutive points
  };
  SpaceSpec space;
  double eps = 0.0;
  std::vector<Point> points;
  std::vector<CompLayout> layout;
};

inline Net build_epsilon_net(const SpaceSpec& space, double eps,
                             std::size_t cap = kDefaultNetCap) {
  space.validate();
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw InvalidInputError("epsilon_net requires eps > 0");

  // Shared angular count for planar circles.
  std::size_t planar_count = 0;
  for (const auto& c : space.components) {
    if (c.kind != ComponentKind::planar_circle) continue;
    std::size_t m = 1;
    if (eps <= 2.0 * c.radius) {
      const double half_angle = std::asin(std::min(1.0, eps / (2.0 * c.radius)));
      m = static_cast<std::size_t>(std::floor(std::numbers::pi_v<double> / half_angle)) + 1;
    }
    planar_count = std::max(planar_count, m);
  }

  Net net;
  net.space = space;
  net.eps = eps;
  net.layout.resize(space.components.size());
  std::size_t total = 0;
  std::vector<std::size_t> counts(space.components.size());
  for (std::size_t ci = 0; ci < space.components.size(); ++ci) {
    const ComponentSpec& c = space.components[ci];
    std::size_t m = 0;
    switch (c.kind) {
      case ComponentKind::planar_circle:
        m = planar_count;
        break;
      case ComponentKind::wrap_circle:
        m = static_cast<std::size_t>(std::floor(1.0 / eps)) + 1;
        break;
      case ComponentKind::interval:
        m = static_cast<std::size_t>(std::floor((c.b - c.a) / eps)) + 2;
        break;
    }
    counts[ci] = m;
    if (m > cap - total)
      throw ResourceLimitError("epsilon_net size exceeds cap " + std::to_string(cap) +
                               " (requested eps " + std::to_string(eps) + ")");
    total += m;
  }

  net.points.reserve(total);
  for (std::size_t ci = 0; ci < space.components.size(); ++ci) {
    const ComponentSpec& c = space.components[ci];
    const std::size_t m = counts[ci];
    net.layout[ci].first = net.points.size();
    net.layout[ci].count = m;
    switch (c.kind) {
      case ComponentKind::planar_circle:
      case ComponentKind::wrap_circle: {
        const double span = c.coord_span();
        net.layout[ci].step = span / static_cast<double>(m);
        for (std::size_t j = 0; j < m; ++j)
          net.points.push_back(Point{static_cast<int>(ci),
                                     span * static_cast<double>(j) / static_cast<double>(m)});
        break;
      }
      case ComponentKind::interval: {
        // m points including both endpoints: spacing (b-a)/(m-1) < eps.
        const double step = (c.b - c.a) / static_cast<double>(m - 1);
        net.layout[ci].step = step;
        for (std::size_t j = 0; j < m; ++j) {
          double v = c.a + step * static_cast<double>(j);
          if (j + 1 == m) v = c.b;
          net.points.push_back(Point{static_cast<int>(ci), v});
        }
        break;
      }
    }
  }
  return net;
}

inline std::vector<Point> epsilon_net(const SpaceSpec& space, double eps,
                                      std::size_t cap = kDefaultNetCap) {
  return build_epsilon_net(space, eps, cap).points;
}

// Indices of net points within `radius` of net point `center` (center
// included), in increasing index order. Only same-component points qualify
// when radius < the cross-component minimum, which is the intended use;
// a full metric filter keeps it correct in general.
inline std::vector<std::size_t> net_ball_indices(const Net& net, std::size_t center,
                                                 double radius) {
  const Point& x = net.points[center];
  const double r = radius * (1.0 + kBallSlack);
  std::vector<std::size_t> out;
  for (std::size_t ci = 0; ci < net.layout.size(); ++ci) {
    const auto& lay = net.layout[ci];
    if (lay.count == 0) continue;
    const ComponentSpec& c = net.space.components[ci];
    if (static_cast<int>(ci) != x.component) {
      // Cheap reject: minimum possible distance into this component.
      double min_cross;
      const ComponentSpec& cx = net.space.components[static_cast<std::size_t>(x.component)];
      if (c.kind == ComponentKind::planar_circle && cx.kind == ComponentKind::planar_circle)
        min_cross = std::fabs(c.radius - cx.radius);
      else
        min_cross = anchor_distance(cx, x.coord) + kComponentGap;
      if (min_cross > r) continue;
    }
    for (std::size_t j = 0; j < lay.count; ++j) {
      const std::size_t idx = lay.first + j;
      if (distance(net.space, x, net.points[idx]) <= r) out.push_back(idx);
    }
  }
  return out;
}

inline double diameter(const SpaceSpec& space, const std::vector<Point>& pts) {
  if (pts.empty()) throw InvalidInputError("diameter of an empty point list");
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::max(best, distance(space, pts[i], pts[j]));
  return best;
}

}  // namespace famdyn
