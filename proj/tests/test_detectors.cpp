#include <catch2/catch_amalgamated.hpp>

#include <famdyn/comparisons.hpp>
#include <famdyn/corpus.hpp>
#include <famdyn/detectors.hpp>
#include <famdyn/dynamics.hpp>
#include <famdyn/errors.hpp>
#include <famdyn/space.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

using namespace famdyn;

namespace {

// Oracle arithmetic, written against the documented formulas rather than the
// library code paths: doubling is 2x folded into [0,1), wrap distance is the
// shorter arc on the unit-circumference circle.
double oracle_double_step(double x) {
  double v = std::fmod(2.0 * x, 1.0);
  if (v < 0.0) v += 1.0;
  if (v >= 1.0) v = 0.0;
  return v;
}

double oracle_wrap_dist(double x, double y) {
  const double diff = std::fabs(x - y);
  return std::min(diff, 1.0 - diff);
}

struct OraclePairScan {
  double tail_min = std::numeric_limits<double>::infinity();
  double tail_max = -1.0;
  long argmin_n = -1;
  long argmax_n = -1;
  long first_hit_n = -1;
};

OraclePairScan oracle_scan(double x, double y, long N, long window, double tau) {
  OraclePairScan s;
  for (long n = 0; n <= N; ++n) {
    if (n > 0) {
      x = oracle_double_step(x);
      y = oracle_double_step(y);
    }
    const double d = oracle_wrap_dist(x, y);
    if (s.first_hit_n < 0 && d < tau) s.first_hit_n = n;
    if (n >= window) {
      if (d < s.tail_min) {
        s.tail_min = d;
        s.argmin_n = n;
      }
      if (d > s.tail_max) {
        s.tail_max = d;
        s.argmax_n = n;
      }
    }
  }
  return s;
}

}  // namespace

TEST_CASE("proximal scan matches a direct orbit oracle on the doubling map") {
  const Family fam = corpus_system("doubling1");
  HorizonParams params;
  params.N = 400;
  params.window = 200;
  params.tau = 1e-3;

  std::vector<std::pair<double, double>> coords = {
      {0.0, 0.0009765625},  // 2^-10, exact dyadic collapse
      {0.1, 0.3},
      {0.333333333333333, 0.666666666666666},
      {5.0 / 101.0, 38.0 / 101.0},
  };
  for (const auto& [a, b] : random_pairs(fam.space, 12, 99)) {
    coords.emplace_back(a.coord, b.coord);
  }

  for (const auto& [a, b] : coords) {
    CAPTURE(a, b);
    const OraclePairScan want = oracle_scan(a, b, params.N, params.window, params.tau);
    const Verdict v = proximal_check(fam, Point{0, a}, Point{0, b}, params);
    CHECK(v.measured.at("liminf_est") == want.tail_min);
    CHECK(v.measured.at("limsup_est") == want.tail_max);
    CHECK(v.measured.at("argmin_n") == static_cast<double>(want.argmin_n));
    CHECK(v.measured.at("argmax_n") == static_cast<double>(want.argmax_n));
    if (want.tail_min < params.tau) {
      CHECK(v.status == Status::witnessed);
      CHECK(v.measured.at("first_hit_n") == static_cast<double>(want.first_hit_n));
      REQUIRE(v.witness.indices.size() == 1);
      CHECK(v.witness.indices[0] == want.first_hit_n);
    } else {
      CHECK(v.status == Status::inconclusive);
    }
  }
}

TEST_CASE("proximal diagonal pair short-circuits") {
  const Family fam = corpus_system("rot-irrational");
  HorizonParams params;
  const Verdict v = proximal_check(fam, Point{0, 0.25}, Point{0, 0.25}, params);
  CHECK(v.status == Status::witnessed);
  CHECK(v.measured.at("liminf_est") == 0.0);
  CHECK(v.measured.at("first_hit_n") == 0.0);
  CHECK(v.witness.indices == std::vector<long>{0});
}

TEST_CASE("sensitivity scan matches a direct ball sweep oracle") {
  const Family fam = corpus_system("doubling1");
  HorizonParams params;
  params.N = 60;
  params.eps_grid = 0.01;

  REQUIRE(space_diameter(fam.space) == 0.5);

  // Rebuild the regular net layout by hand: m = floor(1/eps) + 1 points.
  const std::size_t m = 101;
  std::vector<double> pts(m);
  for (std::size_t j = 0; j < m; ++j)
    pts[j] = 1.0 * static_cast<double>(j) / static_cast<double>(m);

  const double ball_r = params.eps_grid * (1.0 + 1e-9);
  double weakest_diam = std::numeric_limits<double>::infinity();
  std::size_t weakest = 0;
  long weakest_argmax = 0;
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<double> ball;
    for (std::size_t i = 0; i < m; ++i)
      if (oracle_wrap_dist(pts[i], pts[c]) <= ball_r) ball.push_back(pts[i]);
    double max_diam = 0.0;
    long argmax_n = 0;
    for (long n = 0; n <= params.N; ++n) {
      if (n > 0)
        for (auto& p : ball) p = oracle_double_step(p);
      double diam = 0.0;
      for (std::size_t i = 0; i < ball.size(); ++i)
        for (std::size_t j = i + 1; j < ball.size(); ++j)
          diam = std::max(diam, oracle_wrap_dist(ball[i], ball[j]));
      if (diam > max_diam) {
        max_diam = diam;
        argmax_n = n;
      }
    }
    if (max_diam < weakest_diam) {
      weakest_diam = max_diam;
      weakest = c;
      weakest_argmax = argmax_n;
    }
  }

  double delta_star = 0.0;
  for (double rung = 0.5; rung > 2.0 * params.eps_grid; rung /= 2.0) {
    if (weakest_diam > rung) {
      delta_star = rung;
      break;
    }
  }
  REQUIRE(delta_star > 0.0);

  const Verdict v = sensitivity_check(fam, params);
  CHECK(v.status == Status::witnessed);
  CHECK(v.measured.at("diam_max") == weakest_diam);
  CHECK(v.measured.at("delta_star") == delta_star);
  REQUIRE(v.witness.points.size() == 1);
  CHECK(v.witness.points[0].coord == pts[weakest]);
  CHECK(v.witness.indices == std::vector<long>{weakest_argmax});
}

TEST_CASE("equicontinuity refutation pins the exact dyadic witness") {
  const Family fam = corpus_system("doubling1");
  HorizonParams params;
  params.N = 100;
  params.eps_grid = 1e-3;

  const Verdict v = equicontinuity_check(fam, 0.25, params);
  REQUIRE(v.status == Status::refuted);
  // Smallest ladder rung is 2^-9; the probe sits at 2^-10 from center 0 and
  // doubles to exactly 0.25 at step 8.
  REQUIRE(v.witness.points.size() == 2);
  CHECK(v.witness.points[0] == Point{0, 0.0});
  CHECK(v.witness.points[1] == Point{0, 0.0009765625});
  CHECK(v.witness.indices == std::vector<long>{8});
  CHECK(v.measured.at("eps") == 0.25);
  CHECK(v.measured.at("pair_distance") == 0.0009765625);
  CHECK(v.measured.at("separation") == 0.25);
}

TEST_CASE("equicontinuity holds for rigid rotation") {
  const Family fam = corpus_system("rot-irrational");
  HorizonParams params;
  params.N = 500;
  params.eps_grid = 1e-3;

  const Verdict v = equicontinuity_check(fam, 0.25, params);
  REQUIRE(v.status == Status::witnessed);
  // An isometry never separates any probe, so the full ladder survives and
  // the reported delta is the top rung.
  CHECK(v.measured.at("delta") == 0.25);
  CHECK(v.witness.note == "no sampled pair within delta separated past eps by the horizon");
}

TEST_CASE("cofinite sensitivity finds a uniform expansion index for doubling") {
  const Family fam = corpus_system("doubling2");
  HorizonParams params;
  params.N = 40;
  params.window = 20;
  params.eps_grid = 1e-3;

  const Verdict v = cofinite_sensitivity_check(fam, params);
  REQUIRE(v.status == Status::witnessed);
  CHECK(v.measured.at("delta_star") == 0.0625);
  CHECK(v.measured.at("K") == 11.0);
  CHECK(v.measured.at("K") <= static_cast<double>(params.window));
  CHECK(v.witness.indices == std::vector<long>{11});
}

TEST_CASE("cofinite sensitivity stays inconclusive for rotation") {
  const Family fam = corpus_system("rot-irrational");
  HorizonParams params;
  params.N = 40;
  params.window = 20;
  params.eps_grid = 1e-3;

  const Verdict v = cofinite_sensitivity_check(fam, params);
  REQUIRE(v.status == Status::inconclusive);
  // Isometric balls never exceed twice the grid, so every rung fails at
  // every index.
  CHECK(v.measured.at("longest_gap") == static_cast<double>(params.N + 1));
  CHECK(v.measured.at("gap_rung") > 2.0 * params.eps_grid);
}

TEST_CASE("distality refuted by an exact dyadic proximal pair") {
  const Family fam = corpus_system("doubling1");
  HorizonParams params;
  params.N = 50;
  params.window = 0;
  params.eps_grid = 0.6;  // net collapses to the two points 0 and 1/2

  const Verdict v = distality_check(fam, params);
  REQUIRE(v.status == Status::refuted);
  REQUIRE(v.witness.points.size() == 2);
  CHECK(v.witness.points[0] == Point{0, 0.0});
  CHECK(v.witness.points[1] == Point{0, 0.5});
  CHECK(v.measured.at("first_hit_n") == 1.0);
  CHECK(v.measured.at("liminf_est") == 0.0);
  CHECK(v.measured.at("min_liminf") == 0.0);
}

TEST_CASE("distality witnessed for irrational rotation") {
  const Family fam = corpus_system("rot-irrational");
  HorizonParams params;
  params.N = 200;
  params.window = 100;
  params.eps_grid = 0.05;  // 21 net points, adjacent spacing 1/21

  const Verdict v = distality_check(fam, params);
  REQUIRE(v.status == Status::witnessed);
  const double spacing = 1.0 / 21.0;
  CHECK(v.measured.at("min_liminf") >= 0.9 * spacing);
  CHECK(v.measured.at("min_liminf") <= 1.1 * spacing);
  CHECK(v.witness.note == "every sampled pair kept its tail minimum at or above tau");
}

TEST_CASE("identity family is distal at net resolution") {
  const Family fam = corpus_system("identity");
  HorizonParams params;
  params.N = 50;
  params.window = 0;
  params.eps_grid = 0.05;

  const Verdict v = distality_check(fam, params);
  CHECK(v.status == Status::witnessed);
}

TEST_CASE("li-yorke pair verdicts") {
  HorizonParams params;
  params.N = 100;
  params.window = 0;

  SECTION("doubling pair collapses and stretches") {
    const Family fam = corpus_system("doubling1");
    const Verdict v = li_yorke_pair_check(fam, Point{0, 0.0}, Point{0, 0.3}, 0.1, params);
    REQUIRE(v.status == Status::witnessed);
    CHECK(v.measured.at("liminf_est") < params.tau);
    CHECK(v.measured.at("limsup_est") > 0.1);
    CHECK(v.measured.at("constant_distance") == 0.0);
    CHECK(v.witness.note == "tail dips under tau and stretches past delta");
  }

  SECTION("rotation pair keeps a constant distance") {
    const Family fam = corpus_system("rot-irrational");
    const Verdict v = li_yorke_pair_check(fam, Point{0, 0.0}, Point{0, 0.25}, 0.1, params);
    REQUIRE(v.status == Status::inconclusive);
    CHECK(v.measured.at("constant_distance") == 1.0);
  }

  SECTION("delta at or below tau is rejected") {
    const Family fam = corpus_system("doubling1");
    CHECK_THROWS_AS(
        li_yorke_pair_check(fam, Point{0, 0.0}, Point{0, 0.3}, 1e-4, params),
        InvalidInputError);
  }
}

TEST_CASE("scrambled set refuted on rotation with constant distances") {
  const Family fam = corpus_system("rot-irrational");
  HorizonParams params;
  params.N = 300;
  params.window = 0;

  const std::vector<Point> cands = scrambled_candidates(fam.space, 4);
  REQUIRE(cands.size() == 4);
  const Verdict v = scrambled_set_check(fam, cands, 0.1, params);
  REQUIRE(v.status == Status::refuted);
  CHECK(v.witness.note == "pair distance sequence is constant at this horizon");
  // The first scanned pair already fails, so its initial distance is reported.
  CHECK(v.measured.at("pair_distance") == distance(fam.space, cands[0], cands[1]));
}

TEST_CASE("scrambled set witnessed on the tent pair family") {
  const Family fam = corpus_system("tent2");
  HorizonParams params;
  params.N = 10000;
  params.window = 0;

  const std::vector<Point> cands = scrambled_candidates(fam.space, 6);
  const Verdict v = scrambled_set_check(fam, cands, 0.1, params);
  REQUIRE(v.status == Status::witnessed);
  CHECK(v.measured.at("set_size") == 6.0);
  CHECK(v.measured.at("worst_liminf") < params.tau);
  CHECK(v.measured.at("worst_limsup") > 0.1);
}

TEST_CASE("scrambled set input validation") {
  const Family fam = corpus_system("doubling1");
  HorizonParams params;
  CHECK_THROWS_AS(scrambled_set_check(fam, {Point{0, 0.2}}, 0.1, params),
                  InvalidInputError);
  CHECK_THROWS_AS(scrambled_set_check(fam, {Point{0, 0.2}, Point{0, 0.2}}, 0.1, params),
                  InvalidInputError);
  CHECK_THROWS_AS(scrambled_candidates(fam.space, 1), InvalidInputError);
}

TEST_CASE("li-yorke sensitivity needs a scrambled partner in every ball") {
  HorizonParams params;
  params.N = 200;
  params.window = 0;
  params.eps_grid = 0.01;

  SECTION("doubling witnesses every center") {
    const Family fam = corpus_system("doubling1");
    const Verdict v = li_yorke_sensitivity_check(fam, 0.1, params);
    REQUIRE(v.status == Status::witnessed);
    CHECK(v.measured.at("centers") == 101.0);
    CHECK(v.witness.note == "every sampled center has a delta-scrambled partner in its ball");
  }

  SECTION("rotation has no scrambled partners") {
    const Family fam = corpus_system("rot-irrational");
    const Verdict v = li_yorke_sensitivity_check(fam, 0.1, params);
    REQUIRE(v.status == Status::inconclusive);
    CHECK(v.witness.note.find("no ball partner") != std::string::npos);
  }
}

TEST_CASE("minimality evidence covers the net for irrational rotation") {
  const Family fam = corpus_system("rot-irrational");
  const Verdict v = minimality_evidence(fam, Point{0, 0.0}, 0.05, 2000);
  REQUIRE(v.status == Status::witnessed);
  CHECK(v.measured.at("coverage") == 1.0);
  CHECK(v.measured.at("samples_used") <= 2001.0);
  CHECK(v.witness.note == "orbit sample is eps-dense over the verification net");
}

TEST_CASE("minimality evidence inconclusive for rational rotation") {
  const Family fam = corpus_system("rot-rational-3");
  const Verdict v = minimality_evidence(fam, Point{0, 0.0}, 0.05, 1000);
  REQUIRE(v.status == Status::inconclusive);
  // The orbit is the three points {0, 1/3, 2/3}; most of the net stays
  // uncovered no matter the horizon.
  CHECK(v.measured.at("coverage") < 1.0);
  CHECK(v.measured.at("worst_gap") > 0.05);
}

TEST_CASE("minimality refuted structurally when components are unreachable") {
  const Family fam = corpus_system("two-circles");

  SECTION("stride two from the first circle never leaves it") {
    const Verdict v = minimality_evidence(fam, Point{0, 0.0}, 0.05, 1000, 2, 0);
    REQUIRE(v.status == Status::refuted);
    CHECK(v.witness.note.find("never reach") != std::string::npos);
    CHECK(v.measured.at("components_reachable") == 1.0);
  }

  SECTION("stride one visits both circles") {
    const Verdict v = minimality_evidence(fam, Point{0, 0.0}, 0.05, 200000);
    CHECK(v.status == Status::witnessed);
  }
}

TEST_CASE("fixed point orbit gives inconclusive minimality evidence") {
  const Family fam = corpus_system("doubling1");
  const Verdict v = minimality_evidence(fam, Point{0, 0.0}, 0.05, 500);
  REQUIRE(v.status == Status::inconclusive);
  CHECK(v.measured.at("coverage") < 0.2);
}

TEST_CASE("mod-k limit classes separate the two-circle components") {
  const Family fam = corpus_system("two-circles");
  HorizonParams params;
  params.N = 400;
  params.window = 200;
  params.eps_grid = 0.05;

  const ModKClassReport rep = mod_k_limit_classes(fam, Point{0, 0.0}, params);
  REQUIRE(rep.classes.size() == 2);
  CHECK(rep.classes[0].residue == 1);
  CHECK(rep.classes[1].residue == 2);
  // Odd steps land on the second circle, even steps on the first.
  CHECK(rep.classes[0].components_visited == std::vector<int>{1});
  CHECK(rep.classes[1].components_visited == std::vector<int>{0});
  CHECK(rep.classes[0].points.size() + rep.classes[1].points.size() ==
        static_cast<std::size_t>(params.N - params.window + 1));
  CHECK(rep.hausdorff[0][1] >= 1.0);
  CHECK(rep.hausdorff[0][1] == rep.hausdorff[1][0]);
  CHECK_FALSE(rep.merged[0][1]);
  CHECK(rep.merged[0][0]);
}

TEST_CASE("mod-k limit classes merge for commuting rotations") {
  const Family fam = corpus_system("rot2-irrational");
  HorizonParams params;
  params.N = 2000;
  params.window = 1000;
  params.eps_grid = 0.2;

  const ModKClassReport rep = mod_k_limit_classes(fam, Point{0, 0.0}, params);
  REQUIRE(rep.classes.size() == 2);
  CHECK(rep.hausdorff[0][1] > 0.0);
  CHECK(rep.hausdorff[0][1] < 0.2);
  CHECK(rep.merged[0][1]);
  CHECK(rep.merged[1][0]);
}

TEST_CASE("sampling net falls back to seeded sampling deterministically") {
  const SpaceSpec space = unit_wrap_space();
  const Net a = sampling_net(space, 1e-9, 50, 7);
  const Net b = sampling_net(space, 1e-9, 50, 7);
  const Net c = sampling_net(space, 1e-9, 50, 8);

  REQUIRE(a.points.size() == 50);
  REQUIRE(b.points.size() == a.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i] == b.points[i]);
  bool differs = c.points.size() != a.points.size();
  for (std::size_t i = 0; !differs && i < a.points.size(); ++i)
    differs = !(a.points[i] == c.points[i]);
  CHECK(differs);
  // Sorted within the component so downstream scans stay order-stable.
  for (std::size_t i = 1; i < a.points.size(); ++i)
    CHECK(a.points[i - 1].coord <= a.points[i].coord);
}

TEST_CASE("resource caps abort oversized scans") {
  HorizonParams params;

  SECTION("distality pair cap") {
    const Family fam = corpus_system("rot-irrational");
    params.eps_grid = 1e-3;  // 1001 net points, ~500k pairs
    params.pair_cap = 1000;
    CHECK_THROWS_AS(distality_check(fam, params), ResourceLimitError);
  }

  SECTION("equicontinuity work cap") {
    const Family fam = corpus_system("doubling1");
    params.N = 100;
    params.eps_grid = 1e-3;
    params.work_cap = 1000;
    CHECK_THROWS_AS(equicontinuity_check(fam, 0.25, params), ResourceLimitError);
  }

  SECTION("sampling cap below component count") {
    const Family fam = corpus_system("two-circles");
    CHECK_THROWS_AS(sampling_net(fam.space, 1e-9, 1, 0), ResourceLimitError);
  }
}
