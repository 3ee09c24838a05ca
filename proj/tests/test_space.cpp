#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include <famdyn/corpus.hpp>
#include <famdyn/errors.hpp>
#include <famdyn/rng.hpp>
#include <famdyn/space.hpp>

using namespace famdyn;

namespace {

SpaceSpec mixed_space() {
  return SpaceSpec{{ComponentSpec::planar_circle(1.0), ComponentSpec::wrap_circle(),
                    ComponentSpec::interval(-1.0, 2.0)}};
}

Point sample_point(const SpaceSpec& space, std::mt19937_64& gen) {
  const std::size_t c = uniform_index(gen, space.components.size());
  const ComponentSpec& comp = space.components[c];
  const double lo = comp.kind == ComponentKind::interval ? comp.a : 0.0;
  return normalize(space, Point{static_cast<int>(c), lo + uniform01(gen) * comp.coord_span()});
}

}  // namespace

TEST_CASE("space validation rejects degenerate inputs") {
  CHECK_THROWS_AS(SpaceSpec{}.validate(), InvalidInputError);
  CHECK_THROWS_AS(ComponentSpec::planar_circle(0.0), InvalidInputError);
  CHECK_THROWS_AS(ComponentSpec::planar_circle(-2.0), InvalidInputError);
  CHECK_THROWS_AS(ComponentSpec::interval(1.0, 1.0), InvalidInputError);
  CHECK_THROWS_AS(ComponentSpec::interval(2.0, -1.0), InvalidInputError);

  // concentric planar circles with equal radii would overlap in the plane
  SpaceSpec dup{{ComponentSpec::planar_circle(1.0), ComponentSpec::planar_circle(1.0)}};
  CHECK_THROWS_AS(dup.validate(), InvalidInputError);

  SpaceSpec ok = mixed_space();
  CHECK_NOTHROW(ok.validate());
  CHECK_FALSE(ok.connected());
  CHECK(SpaceSpec{{ComponentSpec::wrap_circle()}}.connected());
}

TEST_CASE("normalize wraps circles and clamps interval round-off") {
  SpaceSpec space = mixed_space();

  CHECK(normalize(space, Point{1, 1.25}).coord == Catch::Approx(0.25));
  CHECK(normalize(space, Point{1, -0.25}).coord == Catch::Approx(0.75));
  CHECK(normalize(space, Point{0, kTwoPi + 0.5}).coord == Catch::Approx(0.5));

  // tiny overshoot past an interval endpoint is round-off, not bad input
  CHECK(normalize(space, Point{2, 2.0 + 1e-12}).coord == 2.0);
  CHECK(normalize(space, Point{2, -1.0 - 1e-12}).coord == -1.0);
  CHECK_THROWS_AS(normalize(space, Point{2, 2.5}), InvalidInputError);
  CHECK_THROWS_AS(normalize(space, Point{3, 0.0}), InvalidInputError);
  CHECK_THROWS_AS(normalize(space, Point{-1, 0.0}), InvalidInputError);
}

TEST_CASE("distance matches closed forms on each component kind") {
  SpaceSpec space = mixed_space();

  // planar circle: chord length 2 r sin(dtheta / 2)
  CHECK(distance(space, Point{0, 0.0}, Point{0, kTwoPi / 2.0}) == Catch::Approx(2.0));
  CHECK(distance(space, Point{0, 0.0}, Point{0, 1.0}) ==
        Catch::Approx(2.0 * std::sin(0.5)));

  // wrap circle: shorter arc
  CHECK(distance(space, Point{1, 0.1}, Point{1, 0.9}) == Catch::Approx(0.2));
  CHECK(distance(space, Point{1, 0.1}, Point{1, 0.4}) == Catch::Approx(0.3));

  // interval: absolute difference
  CHECK(distance(space, Point{2, -1.0}, Point{2, 2.0}) == Catch::Approx(3.0));

  // cross-component pairs route through the hub: anchor + 1 + anchor
  const double d = distance(space, Point{1, 0.25}, Point{2, 0.5});
  CHECK(d == Catch::Approx(0.25 + 1.0 + 1.5));
  // planar anchor is the radius regardless of angle
  CHECK(distance(space, Point{0, 1.234}, Point{1, 0.0}) == Catch::Approx(1.0 + 1.0 + 0.0));
}

TEST_CASE("planar-planar cross distance is the ambient chord") {
  SpaceSpec two = two_circles_system().space;
  // concentric radii 1 and 2, same angle: radial gap
  CHECK(distance(two, Point{0, 0.7}, Point{1, 0.7}) == Catch::Approx(1.0));
  // opposite angles: 1 + 2
  CHECK(distance(two, Point{0, 0.0}, Point{1, kTwoPi / 2.0}) == Catch::Approx(3.0));
}

TEST_CASE("distance is a metric on sampled triples") {
  SpaceSpec space = mixed_space();
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 500; ++trial) {
    const Point a = sample_point(space, gen);
    const Point b = sample_point(space, gen);
    const Point c = sample_point(space, gen);
    const double ab = distance(space, a, b);
    const double ba = distance(space, b, a);
    const double ac = distance(space, a, c);
    const double cb = distance(space, c, b);
    REQUIRE(ab >= 0.0);
    REQUIRE(ab == ba);
    REQUIRE(distance(space, a, a) == 0.0);
    REQUIRE(ab <= ac + cb + 1e-12);
  }
}

TEST_CASE("space_diameter dominates and is attained by sampled pairs") {
  SpaceSpec space = mixed_space();
  const double diam = space_diameter(space);
  std::mt19937_64 gen(11);
  double best = 0.0;
  for (int trial = 0; trial < 4000; ++trial) {
    const Point a = sample_point(space, gen);
    const Point b = sample_point(space, gen);
    const double d = distance(space, a, b);
    REQUIRE(d <= diam + 1e-12);
    best = std::max(best, d);
  }
  // widest pair: planar point (anchor 1) to interval endpoint 2 (anchor 3)
  CHECK(diam == Catch::Approx(1.0 + 1.0 + 3.0));
  CHECK(best > 0.8 * diam);
}

TEST_CASE("epsilon net covers the space at spacing below eps") {
  SpaceSpec space = mixed_space();
  const double eps = 0.07;
  Net net = build_epsilon_net(space, eps);
  REQUIRE(net.points.size() > 10);

  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 800; ++trial) {
    const Point p = sample_point(space, gen);
    double best = std::numeric_limits<double>::infinity();
    for (const Point& q : net.points) best = std::min(best, distance(space, p, q));
    REQUIRE(best < eps);
  }
}

TEST_CASE("planar components share one angular count") {
  SpaceSpec two = two_circles_system().space;
  Net net = build_epsilon_net(two, 0.05);
  REQUIRE(net.layout.size() == 2);
  CHECK(net.layout[0].count == net.layout[1].count);
  // the count is driven by the larger circle, whose chords are wider per step
  const std::size_t m = net.layout[0].count;
  CHECK(2.0 * 2.0 * std::sin(kTwoPi / (2.0 * static_cast<double>(m))) < 0.05);
}

TEST_CASE("net respects the size cap") {
  SpaceSpec space{{ComponentSpec::wrap_circle()}};
  CHECK_THROWS_AS(build_epsilon_net(space, 1e-9, 1000), ResourceLimitError);
  CHECK_NOTHROW(build_epsilon_net(space, 1e-3, 2000));
}

TEST_CASE("net ball indices agree with a direct filter") {
  SpaceSpec space = mixed_space();
  Net net = build_epsilon_net(space, 0.09);
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t center = uniform_index(gen, net.points.size());
    const double radius = 0.05 + 0.3 * uniform01(gen);
    const std::vector<std::size_t> got = net_ball_indices(net, center, radius);
    std::vector<std::size_t> expect;
    for (std::size_t i = 0; i < net.points.size(); ++i) {
      if (distance(space, net.points[center], net.points[i]) <= radius * (1.0 + kBallSlack)) {
        expect.push_back(i);
      }
    }
    REQUIRE(got == expect);
    REQUIRE(std::is_sorted(got.begin(), got.end()));
  }
}

TEST_CASE("diameter of a finite point set is the max pairwise distance") {
  SpaceSpec space{{ComponentSpec::wrap_circle()}};
  std::vector<Point> pts{{0, 0.0}, {0, 0.1}, {0, 0.45}, {0, 0.8}};
  double expect = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      expect = std::max(expect, distance(space, pts[i], pts[j]));
  CHECK(diameter(space, pts) == expect);
  CHECK(diameter(space, {Point{0, 0.3}}) == 0.0);
  CHECK_THROWS_AS(diameter(space, {}), InvalidInputError);
}
