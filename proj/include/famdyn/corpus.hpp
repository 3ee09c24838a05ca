#pragma once

// Built-in named systems used by the CLI, the test suite, and the paired
// experiments. Everything here is deterministic; random_family derives all
// choices from the caller's seed.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "famdyn/dynamics.hpp"
#include "famdyn/errors.hpp"
#include "famdyn/rng.hpp"
#include "famdyn/space.hpp"

namespace famdyn {

// Golden-ratio angle: irrational multiple of a full turn, so rigid rotations
// by it have dense orbits on a circle.
inline double golden_turn() { return (std::sqrt(5.0) - 1.0) / 2.0; }
inline double golden_angle() { return kTwoPi * golden_turn(); }

// Two concentric planar circles of radius 1 and 2 with a pair of
// component-swapping rotations. Each map sends circle 0 to circle 1 and
// back; the first adds (a, 2a) to the angle, the second (2a, a), with
// a the golden angle. The composition fixes each circle and rotates it
// rigidly (by 2a on circle 0, 4a on circle 1), so the family hops between
// components forever while the composed map never leaves one.
inline Family two_circles_system() {
  SpaceSpec space{{ComponentSpec::planar_circle(1.0), ComponentSpec::planar_circle(2.0)}};
  const double a = golden_angle();
  MapSpec f1 = MapSpec::rotation_swap(space, {SwapRule{1, a}, SwapRule{0, 2.0 * a}});
  MapSpec f2 = MapSpec::rotation_swap(space, {SwapRule{1, 2.0 * a}, SwapRule{0, a}});
  return make_family(space, {f1, f2});
}

inline SpaceSpec unit_wrap_space() { return SpaceSpec{{ComponentSpec::wrap_circle()}}; }

inline std::vector<std::string> corpus_names() {
  return {"two-circles", "doubling1",       "doubling2",       "doubling-tent", "tent2",
          "rot-irrational", "rot2-irrational", "rot-rational-3", "identity"};
}

inline Family corpus_system(const std::string& name) {
  if (name == "two-circles") return two_circles_system();
  if (name == "doubling1") {
    SpaceSpec s = unit_wrap_space();
    return make_family(s, {MapSpec::doubling(s)});
  }
  if (name == "doubling2") {
    SpaceSpec s = unit_wrap_space();
    return make_family(s, {MapSpec::doubling(s), MapSpec::doubling(s)});
  }
  if (name == "doubling-tent") {
    SpaceSpec s = unit_wrap_space();
    return make_family(s, {MapSpec::doubling(s), MapSpec::tent(s)});
  }
  if (name == "tent2") {
    SpaceSpec s{{ComponentSpec::interval(0.0, 1.0)}};
    return make_family(s, {MapSpec::tent(s), MapSpec::tent(s)});
  }
  if (name == "rot-irrational") {
    SpaceSpec s = unit_wrap_space();
    return make_family(s, {MapSpec::rigid_rotation(s, {golden_turn()})});
  }
  if (name == "rot2-irrational") {
    SpaceSpec s = unit_wrap_space();
    return make_family(s, {MapSpec::rigid_rotation(s, {golden_turn()}),
                           MapSpec::rigid_rotation(s, {std::sqrt(2.0) - 1.0})});
  }
  if (name == "rot-rational-3") {
    SpaceSpec s = unit_wrap_space();
    return make_family(s, {MapSpec::rigid_rotation(s, {1.0 / 3.0})});
  }
  if (name == "identity") {
    SpaceSpec s = unit_wrap_space();
    return make_family(s, {MapSpec::rigid_rotation(s, {0.0})});
  }
  throw InvalidInputError("unknown system name: " + name);
}

// Seeded uniform points: component chosen uniformly, then a coordinate
// uniform over that component's span.
inline Point random_point(const SpaceSpec& space, std::mt19937_64& gen) {
  const std::size_t c = uniform_index(gen, space.components.size());
  const ComponentSpec& comp = space.components[c];
  const double lo = comp.kind == ComponentKind::interval ? comp.a : 0.0;
  return normalize(space, Point{static_cast<int>(c), lo + uniform01(gen) * comp.coord_span()});
}

inline std::vector<std::pair<Point, Point>> random_pairs(const SpaceSpec& space,
                                                         std::size_t count,
                                                         std::uint64_t seed) {
  space.validate();
  std::mt19937_64 gen(seed);
  std::vector<std::pair<Point, Point>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Point a = random_point(space, gen);
    Point b = random_point(space, gen);
    out.emplace_back(a, b);
  }
  return out;
}

// Random family on the unit wrap circle, for property sweeps. The pool
// mixes isometries with expanding maps; every draw comes from the seed.
inline Family random_family(std::uint64_t seed, std::size_t kmax = 4) {
  if (kmax < 1) throw InvalidInputError("random_family requires kmax >= 1");
  std::mt19937_64 gen(seed);
  SpaceSpec s = unit_wrap_space();
  const std::size_t k = 1 + uniform_index(gen, kmax);
  std::vector<MapSpec> maps;
  maps.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    switch (uniform_index(gen, 4)) {
      case 0: maps.push_back(MapSpec::rigid_rotation(s, {uniform01(gen)})); break;
      case 1: maps.push_back(MapSpec::doubling(s)); break;
      case 2: maps.push_back(MapSpec::tent(s)); break;
      default:
        maps.push_back(MapSpec::affine(s, 1.0 + static_cast<double>(uniform_index(gen, 3)),
                                       uniform01(gen)));
        break;
    }
  }
  return make_family(s, maps);
}

}  // namespace famdyn
