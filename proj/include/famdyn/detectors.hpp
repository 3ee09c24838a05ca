#pragma once

// Finite-horizon, witness-based detectors for dynamical properties of a
// family-generated system. Every check returns a Verdict:
//   witnessed     evidence found at this horizon/resolution, with a
//                 replayable witness (points + iteration indices),
//   refuted       an exact counterexample or structural obstruction,
//   inconclusive  the scan finished without either.
// A witnessed verdict is never a proof; the measured map records the
// horizon quantities (liminf_est, limsup_est, diam_max, ...) so a verdict
// can be replayed and checked bit for bit.
//
// Limit quantities are estimated over a tail window: liminf ~ min over
// n in [window, N], limsup ~ max over the same range. "liminf = 0" is
// operationalized as "tail min < tau".
//
// Sweeps over net centers or pairs run through parallel_for_index and are
// reduced in index order, so verdicts are identical for any worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "famdyn/dynamics.hpp"
#include "famdyn/errors.hpp"
#include "famdyn/parallel.hpp"
#include "famdyn/rng.hpp"
#include "famdyn/space.hpp"
#include "famdyn/verdict.hpp"

namespace famdyn {

// A distance sequence is treated as constant when it never strays further
// than this from its first value (isometries wobble by ~1e-16 in floating
// point, real expansion is orders of magnitude larger).
inline constexpr double kConstantDistanceTol = 1e-9;

// --------------------------------------------------------------------------
// sampling substrate

// Regular epsilon net if it fits the cap, otherwise a seeded uniform sample
// of `cap` points (sorted per component; layout.step == 0 marks the
// fallback). The fallback is a budgeted sample, not a certified covering.
inline Net sampling_net(const SpaceSpec& space, double eps, std::size_t cap,
                        std::uint64_t seed) {
  try {
    return build_epsilon_net(space, eps, cap);
  } catch (const ResourceLimitError&) {
  }
  space.validate();
  Net net;
  net.space = space;
  net.eps = eps;
  net.layout.resize(space.components.size());
  double total_span = 0.0;
  for (const auto& c : space.components) total_span += c.coord_span();
  std::vector<std::size_t> counts(space.components.size(), 1);
  std::size_t assigned = space.components.size();
  if (cap < assigned)
    throw ResourceLimitError("sampling cap " + std::to_string(cap) +
                             " below component count " + std::to_string(assigned));
  for (std::size_t ci = 0; ci < counts.size(); ++ci) {
    const double share = space.components[ci].coord_span() / total_span;
    const std::size_t extra = static_cast<std::size_t>(
        share * static_cast<double>(cap - space.components.size()));
    counts[ci] += extra;
    assigned += extra;
  }
  std::mt19937_64 gen(seed);
  for (std::size_t ci = 0; ci < counts.size(); ++ci) {
    const ComponentSpec& c = space.components[ci];
    const double lo = (c.kind == ComponentKind::interval) ? c.a : 0.0;
    std::vector<double> coords(counts[ci]);
    for (auto& v : coords) v = lo + uniform01(gen) * c.coord_span();
    std::sort(coords.begin(), coords.end());
    net.layout[ci].first = net.points.size();
    net.layout[ci].count = coords.size();
    net.layout[ci].step = 0.0;
    for (double v : coords)
      net.points.push_back(normalize(space, Point{static_cast<int>(ci), v}));
  }
  return net;
}

// --------------------------------------------------------------------------
// pair scanning

struct PairStats {
  double tail_min = std::numeric_limits<double>::infinity();
  double tail_max = -1.0;
  long argmin_n = -1;      // first index in [window, N] attaining tail_min
  long argmax_n = -1;      // first index in [window, N] attaining tail_max
  long first_hit_n = -1;   // first index in [0, N] with distance < tau
  bool constant = true;    // distance within kConstantDistanceTol of d0 on [0, N]
  double d0 = 0.0;
};

inline PairStats scan_pair(const Family& family, Point x, Point y, long N,
                           long window, double tau) {
  x = normalize(family.space, x);
  y = normalize(family.space, y);
  PairStats s;
  for (long n = 0; n <= N; ++n) {
    if (n > 0) {
      const MapSpec& m = family.map_at_step(n - 1);
      x = apply(m, x);
      y = apply(m, y);
    }
    const double d = distance(family.space, x, y);
    if (n == 0) s.d0 = d;
    if (std::fabs(d - s.d0) > kConstantDistanceTol) s.constant = false;
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

// --------------------------------------------------------------------------
// ladders and probes

// Rungs top, top/2, top/4, ... while rung >= lo (always at least {top}).
inline std::vector<double> halving_ladder_down_to(double top, double lo) {
  std::vector<double> rungs{top};
  for (double r = top / 2.0; r >= lo; r /= 2.0) rungs.push_back(r);
  return rungs;
}

// Rungs top, top/2, ... while rung > lo (possibly empty).
inline std::vector<double> halving_ladder_above(double top, double lo) {
  std::vector<double> rungs;
  for (double r = top; r > lo; r /= 2.0) rungs.push_back(r);
  return rungs;
}

// A point of x's component at metric distance ~min(d, reachable) from x.
inline Point probe_at_distance(const SpaceSpec& space, const Point& x, double d) {
  const ComponentSpec& c = space.component_of(x);
  switch (c.kind) {
    case ComponentKind::wrap_circle:
      return normalize(space, Point{x.component, x.coord + std::min(d, 0.5)});
    case ComponentKind::planar_circle: {
      const double angle = (d >= 2.0 * c.radius)
                               ? std::numbers::pi_v<double>
                               : 2.0 * std::asin(d / (2.0 * c.radius));
      return normalize(space, Point{x.component, x.coord + angle});
    }
    case ComponentKind::interval: {
      if (x.coord + d <= c.b) return Point{x.component, x.coord + d};
      if (x.coord - d >= c.a) return Point{x.component, x.coord - d};
      return Point{x.component, (c.b - x.coord >= x.coord - c.a) ? c.b : c.a};
    }
  }
  return x;
}

// --------------------------------------------------------------------------
// equicontinuity

// Candidate deltas form a halving ladder from eps down to eps_grid. A rung
// delta is violated when some center x and its probe y at distance delta/2
// separate to >= eps within N steps; the verdict is refuted only when every
// rung is violated (equivalently: the smallest rung is), otherwise it is
// witnessed with the largest rung no pair below which separated.
inline Verdict equicontinuity_check(const Family& family, double eps,
                                    const HorizonParams& params) {
  family.validate();
  params.validate();
  if (!(eps > 0.0)) throw InvalidInputError("equicontinuity_check requires eps > 0");
  const Net net = sampling_net(family.space, params.eps_grid, params.net_cap, params.seed);
  const std::vector<double> rungs = halving_ladder_down_to(eps, params.eps_grid);
  const std::size_t centers = net.points.size();
  const std::uint64_t work = static_cast<std::uint64_t>(rungs.size()) * centers *
                             static_cast<std::uint64_t>(params.N + 1);
  if (work > params.work_cap)
    throw ResourceLimitError("equicontinuity scan needs " + std::to_string(work) +
                             " pair steps, over work cap " + std::to_string(params.work_cap));

  struct CenterSep {
    long first_n = -1;
    double separation = 0.0;
  };
  // sep_center[i] = first separating center for rung i, or centers if none.
  std::vector<std::size_t> sep_center(rungs.size(), centers);
  std::vector<CenterSep> sep_info(rungs.size());
  std::vector<Point> sep_probe(rungs.size());

  for (std::size_t ri = rungs.size(); ri-- > 0;) {
    std::vector<CenterSep> per_center(centers);
    parallel_for_index(centers, params.workers, [&](std::size_t c) {
      Point x = net.points[c];
      Point y = probe_at_distance(family.space, x, rungs[ri] / 2.0);
      for (long n = 0; n <= params.N; ++n) {
        if (n > 0) {
          const MapSpec& m = family.map_at_step(n - 1);
          x = apply(m, x);
          y = apply(m, y);
        }
        const double d = distance(family.space, x, y);
        if (d >= eps) {
          per_center[c] = {n, d};
          return;
        }
      }
    });
    for (std::size_t c = 0; c < centers; ++c) {
      if (per_center[c].first_n >= 0) {
        sep_center[ri] = c;
        sep_info[ri] = per_center[c];
        sep_probe[ri] = probe_at_distance(family.space, net.points[c], rungs[ri] / 2.0);
        break;
      }
    }
    // Smallest rung violated: every larger rung admits the same pair, so the
    // whole ladder is violated and the scan can stop.
    if (ri + 1 == rungs.size() && sep_center[ri] < centers) break;
  }

  Verdict v;
  v.detector = "equicontinuity";
  const std::size_t last = rungs.size() - 1;
  if (sep_center[last] < centers) {
    v.status = Status::refuted;
    v.witness.points = {net.points[sep_center[last]], sep_probe[last]};
    v.witness.indices = {sep_info[last].first_n};
    v.witness.note = "pair within the smallest candidate delta separated past eps";
    v.measured["eps"] = eps;
    v.measured["pair_distance"] = distance(family.space, v.witness.points[0], v.witness.points[1]);
    v.measured["separation"] = sep_info[last].separation;
    return v;
  }
  std::size_t surviving = 0;
  for (std::size_t ri = 0; ri < rungs.size(); ++ri)
    if (sep_center[ri] < centers) surviving = std::max(surviving, ri + 1);
  v.status = Status::witnessed;
  v.witness.note = "no sampled pair within delta separated past eps by the horizon";
  v.measured["eps"] = eps;
  v.measured["delta"] = rungs[surviving];
  return v;
}

// --------------------------------------------------------------------------
// sensitivity

namespace detail {

struct BallSweep {
  double max_diam = 0.0;
  long argmax_n = 0;
};

// Per-center orbit sweep of the center's eps_grid ball through the net;
// visit(n, diam) is called for every n in [0, N].
template <class Visit>
void sweep_ball(const Family& family, const Net& net, std::size_t center, long N,
                Visit&& visit) {
  const std::vector<std::size_t> ball = net_ball_indices(net, center, net.eps);
  std::vector<Point> pts;
  pts.reserve(ball.size());
  for (std::size_t idx : ball) pts.push_back(net.points[idx]);
  for (long n = 0; n <= N; ++n) {
    if (n > 0) {
      const MapSpec& m = family.map_at_step(n - 1);
      for (auto& p : pts) p = apply(m, p);
    }
    visit(n, diameter(family.space, pts));
  }
}

inline std::uint64_t ball_work(const Net& net, long N) {
  std::uint64_t work = 0;
  for (std::size_t c = 0; c < net.points.size(); ++c) {
    const std::uint64_t b = net_ball_indices(net, c, net.eps).size();
    work += b * b * static_cast<std::uint64_t>(N + 1);
  }
  return work;
}

}  // namespace detail

// Witnessed with the largest ladder rung delta* that every sampled
// eps_grid neighborhood expands past at some n <= N. Candidate rungs halve
// down from the space diameter and must exceed 2*eps_grid (the diameter an
// isometry-preserved neighborhood already has), so isometric families stay
// inconclusive instead of "expanding" to their own initial size.
inline Verdict sensitivity_check(const Family& family, const HorizonParams& params) {
  family.validate();
  params.validate();
  const Net net = sampling_net(family.space, params.eps_grid, params.net_cap, params.seed);
  const std::size_t centers = net.points.size();
  const std::uint64_t work = detail::ball_work(net, params.N);
  if (work > params.work_cap)
    throw ResourceLimitError("sensitivity scan needs " + std::to_string(work) +
                             " ball-pair steps, over work cap " +
                             std::to_string(params.work_cap));

  std::vector<detail::BallSweep> per_center(centers);
  parallel_for_index(centers, params.workers, [&](std::size_t c) {
    detail::BallSweep& out = per_center[c];
    detail::sweep_ball(family, net, c, params.N, [&](long n, double d) {
      if (d > out.max_diam) {
        out.max_diam = d;
        out.argmax_n = n;
      }
    });
  });

  std::size_t weakest = 0;
  for (std::size_t c = 1; c < centers; ++c)
    if (per_center[c].max_diam < per_center[weakest].max_diam) weakest = c;
  const double diam_max = per_center[weakest].max_diam;

  Verdict v;
  v.detector = "sensitivity";
  v.measured["diam_max"] = diam_max;
  v.measured["eps_grid"] = params.eps_grid;
  const std::vector<double> rungs =
      halving_ladder_above(space_diameter(family.space), 2.0 * params.eps_grid);
  for (double rung : rungs) {
    if (diam_max > rung) {
      v.status = Status::witnessed;
      v.measured["delta_star"] = rung;
      v.witness.points = {net.points[weakest]};
      v.witness.indices = {per_center[weakest].argmax_n};
      v.witness.note = "weakest sampled neighborhood still expands past delta_star";
      return v;
    }
  }
  v.status = Status::inconclusive;
  v.witness.points = {net.points[weakest]};
  v.witness.indices = {per_center[weakest].argmax_n};
  v.witness.note = "no candidate delta below the weakest neighborhood expansion";
  return v;
}

// Witnessed with (delta*, K) when every sampled neighborhood's diameter
// exceeds delta* at every n in [K, N] for some K <= window; delta* is the
// largest such rung and K the smallest index that works for it.
inline Verdict cofinite_sensitivity_check(const Family& family,
                                          const HorizonParams& params) {
  family.validate();
  params.validate();
  const Net net = sampling_net(family.space, params.eps_grid, params.net_cap, params.seed);
  const std::size_t centers = net.points.size();
  const std::uint64_t work = detail::ball_work(net, params.N);
  if (work > params.work_cap)
    throw ResourceLimitError("cofinite sensitivity scan needs " + std::to_string(work) +
                             " ball-pair steps, over work cap " +
                             std::to_string(params.work_cap));
  const std::vector<double> rungs =
      halving_ladder_above(space_diameter(family.space), 2.0 * params.eps_grid);

  Verdict v;
  v.detector = "cofinite_sensitivity";
  v.measured["eps_grid"] = params.eps_grid;
  if (rungs.empty()) {
    v.status = Status::inconclusive;
    v.witness.note = "no candidate delta above twice the sampling resolution";
    return v;
  }

  struct CenterScan {
    std::vector<long> last_fail;  // per rung: last n with diam <= rung
    long gap_run = 0;             // longest failing run at the smallest rung
  };
  std::vector<CenterScan> per_center(centers);
  parallel_for_index(centers, params.workers, [&](std::size_t c) {
    CenterScan& out = per_center[c];
    out.last_fail.assign(rungs.size(), -1);
    long run = 0;
    detail::sweep_ball(family, net, c, params.N, [&](long n, double d) {
      for (std::size_t ri = 0; ri < rungs.size() && d <= rungs[ri]; ++ri)
        out.last_fail[ri] = n;
      if (d <= rungs.back()) {
        ++run;
        out.gap_run = std::max(out.gap_run, run);
      } else {
        run = 0;
      }
    });
  });

  const long window = params.resolved_window();
  for (std::size_t ri = 0; ri < rungs.size(); ++ri) {
    long K = 0;
    std::size_t binding = 0;
    for (std::size_t c = 0; c < centers; ++c) {
      const long kc = per_center[c].last_fail[ri] + 1;
      if (kc > K) {
        K = kc;
        binding = c;
      }
    }
    if (K <= window) {
      v.status = Status::witnessed;
      v.measured["delta_star"] = rungs[ri];
      v.measured["K"] = static_cast<double>(K);
      v.witness.points = {net.points[binding]};
      v.witness.indices = {K};
      v.witness.note = "every sampled neighborhood stays expanded past delta_star from K on";
      return v;
    }
  }
  long gap = 0;
  std::size_t worst = 0;
  for (std::size_t c = 0; c < centers; ++c)
    if (per_center[c].gap_run > gap) {
      gap = per_center[c].gap_run;
      worst = c;
    }
  v.status = Status::inconclusive;
  v.measured["longest_gap"] = static_cast<double>(gap);
  v.measured["gap_rung"] = rungs.back();
  v.witness.points = {net.points[worst]};
  v.witness.note = "some neighborhood keeps dipping below every candidate delta";
  return v;
}

// --------------------------------------------------------------------------
// proximality

inline Verdict proximal_check(const Family& family, const Point& x, const Point& y,
                              const HorizonParams& params) {
  family.validate();
  params.validate();
  const Point px = normalize(family.space, x);
  const Point py = normalize(family.space, y);
  Verdict v;
  v.detector = "proximal";
  v.witness.points = {px, py};
  if (px == py) {
    v.status = Status::witnessed;
    v.witness.indices = {0};
    v.witness.note = "diagonal pair";
    v.measured["liminf_est"] = 0.0;
    v.measured["limsup_est"] = 0.0;
    v.measured["first_hit_n"] = 0.0;
    return v;
  }
  const PairStats s =
      scan_pair(family, px, py, params.N, params.resolved_window(), params.tau);
  v.measured["liminf_est"] = s.tail_min;
  v.measured["limsup_est"] = s.tail_max;
  v.measured["argmin_n"] = static_cast<double>(s.argmin_n);
  v.measured["argmax_n"] = static_cast<double>(s.argmax_n);
  if (s.tail_min < params.tau) {
    v.status = Status::witnessed;
    v.witness.indices = {s.first_hit_n};
    v.witness.note = "tail minimum under tau";
    v.measured["first_hit_n"] = static_cast<double>(s.first_hit_n);
  } else {
    v.status = Status::inconclusive;
    v.witness.note = "tail minimum stayed at or above tau";
  }
  return v;
}

namespace detail {

struct PairIndex {
  std::vector<std::size_t> row_offset;  // row_offset[i] = pairs before row i
  std::size_t n = 0;

  explicit PairIndex(std::size_t n_) : n(n_) {
    row_offset.resize(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i)
      row_offset[i + 1] = row_offset[i] + (n - 1 - i);
  }
  std::size_t count() const { return row_offset[n]; }
  std::pair<std::size_t, std::size_t> unrank(std::size_t p) const {
    const auto it = std::upper_bound(row_offset.begin(), row_offset.end(), p);
    const std::size_t i = static_cast<std::size_t>(it - row_offset.begin()) - 1;
    return {i, p - row_offset[i] + i + 1};
  }
};

}  // namespace detail

// Refuted with the first (in net order) sampled pair whose tail minimum
// dips under tau; otherwise witnessed as evidence with the smallest tail
// minimum seen.
inline Verdict distality_check(const Family& family, const HorizonParams& params) {
  family.validate();
  params.validate();
  const Net net = sampling_net(family.space, params.eps_grid, params.net_cap, params.seed);
  const detail::PairIndex idx(net.points.size());
  const std::size_t pairs = idx.count();
  if (pairs == 0) throw InvalidInputError("distality_check needs a net with >= 2 points");
  if (pairs > params.pair_cap)
    throw ResourceLimitError("distality scan needs " + std::to_string(pairs) +
                             " pairs, over pair cap " + std::to_string(params.pair_cap));
  const std::uint64_t work = static_cast<std::uint64_t>(pairs) *
                             static_cast<std::uint64_t>(params.N + 1);
  if (work > params.work_cap)
    throw ResourceLimitError("distality scan needs " + std::to_string(work) +
                             " pair steps, over work cap " + std::to_string(params.work_cap));

  const long window = params.resolved_window();
  std::vector<double> tail_min(pairs);
  parallel_for_index(pairs, params.workers, [&](std::size_t p) {
    const auto [i, j] = idx.unrank(p);
    tail_min[p] =
        scan_pair(family, net.points[i], net.points[j], params.N, window, params.tau)
            .tail_min;
  });

  std::size_t refuter = pairs;
  std::size_t closest = 0;
  for (std::size_t p = 0; p < pairs; ++p) {
    if (refuter == pairs && tail_min[p] < params.tau) refuter = p;
    if (tail_min[p] < tail_min[closest]) closest = p;
  }

  Verdict v;
  v.detector = "distality";
  v.measured["eps_grid"] = params.eps_grid;
  const std::size_t report = (refuter < pairs) ? refuter : closest;
  const auto [i, j] = idx.unrank(report);
  const PairStats s =
      scan_pair(family, net.points[i], net.points[j], params.N, window, params.tau);
  v.witness.points = {net.points[i], net.points[j]};
  v.measured["liminf_est"] = s.tail_min;
  v.measured["limsup_est"] = s.tail_max;
  v.measured["min_liminf"] = tail_min[closest];
  if (refuter < pairs) {
    v.status = Status::refuted;
    v.witness.indices = {s.first_hit_n};
    v.witness.note = "proximal pair found in the sampling net";
    v.measured["first_hit_n"] = static_cast<double>(s.first_hit_n);
  } else {
    v.status = Status::witnessed;
    v.witness.indices = {s.argmin_n};
    v.witness.note = "every sampled pair kept its tail minimum at or above tau";
  }
  return v;
}

// --------------------------------------------------------------------------
// Li-Yorke machinery

inline Verdict li_yorke_pair_check(const Family& family, const Point& x, const Point& y,
                                   double delta, const HorizonParams& params) {
  family.validate();
  params.validate();
  if (!(delta > params.tau))
    throw InvalidInputError("li_yorke_pair_check requires delta > tau");
  const Point px = normalize(family.space, x);
  const Point py = normalize(family.space, y);
  const PairStats s =
      scan_pair(family, px, py, params.N, params.resolved_window(), params.tau);
  Verdict v;
  v.detector = "li_yorke_pair";
  v.witness.points = {px, py};
  v.measured["liminf_est"] = s.tail_min;
  v.measured["limsup_est"] = s.tail_max;
  v.measured["delta"] = delta;
  v.measured["constant_distance"] = s.constant ? 1.0 : 0.0;
  v.witness.indices = {s.argmin_n, s.argmax_n};
  if (s.tail_min < params.tau && s.tail_max > delta) {
    v.status = Status::witnessed;
    v.witness.note = "tail dips under tau and stretches past delta";
  } else {
    v.status = Status::inconclusive;
    v.witness.note = "pair neither approaches under tau nor separates past delta in the tail";
  }
  return v;
}

// Witnessed when every unordered pair of S is a delta-scrambled pair at this
// horizon. A failing pair whose distance sequence is constant (to
// kConstantDistanceTol) can never become scrambled while it stays so, which
// is the exact refutation this check reports; any other failure is
// inconclusive.
inline Verdict scrambled_set_check(const Family& family, const std::vector<Point>& S,
                                   double delta, const HorizonParams& params) {
  family.validate();
  params.validate();
  if (!(delta > params.tau))
    throw InvalidInputError("scrambled_set_check requires delta > tau");
  if (S.size() < 2)
    throw InvalidInputError("scrambled_set_check needs at least 2 points");
  std::vector<Point> pts;
  pts.reserve(S.size());
  for (const auto& p : S) pts.push_back(normalize(family.space, p));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (pts[i] == pts[j])
        throw InvalidInputError("scrambled_set_check points must be pairwise distinct");

  const detail::PairIndex idx(pts.size());
  const std::size_t pairs = idx.count();
  const std::uint64_t work = static_cast<std::uint64_t>(pairs) *
                             static_cast<std::uint64_t>(params.N + 1);
  if (work > params.work_cap)
    throw ResourceLimitError("scrambled set scan needs " + std::to_string(work) +
                             " pair steps, over work cap " + std::to_string(params.work_cap));

  const long window = params.resolved_window();
  std::vector<PairStats> stats(pairs);
  parallel_for_index(pairs, params.workers, [&](std::size_t p) {
    const auto [i, j] = idx.unrank(p);
    stats[p] = scan_pair(family, pts[i], pts[j], params.N, window, params.tau);
  });

  Verdict v;
  v.detector = "scrambled_set";
  v.measured["set_size"] = static_cast<double>(pts.size());
  v.measured["delta"] = delta;
  double worst_liminf = 0.0, worst_limsup = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < pairs; ++p) {
    const PairStats& s = stats[p];
    const bool ok = s.tail_min < params.tau && s.tail_max > delta;
    if (!ok) {
      const auto [i, j] = idx.unrank(p);
      v.witness.points = {pts[i], pts[j]};
      v.witness.indices = {s.argmin_n, s.argmax_n};
      v.measured["liminf_est"] = s.tail_min;
      v.measured["limsup_est"] = s.tail_max;
      if (s.constant) {
        v.status = Status::refuted;
        v.witness.note = "pair distance sequence is constant at this horizon";
        v.measured["pair_distance"] = s.d0;
      } else {
        v.status = Status::inconclusive;
        v.witness.note = "pair fails the scrambled conditions at this horizon";
      }
      return v;
    }
    worst_liminf = std::max(worst_liminf, s.tail_min);
    worst_limsup = std::min(worst_limsup, s.tail_max);
  }
  v.status = Status::witnessed;
  v.witness.note = "every pair approaches under tau and separates past delta";
  v.measured["worst_liminf"] = worst_liminf;
  v.measured["worst_limsup"] = worst_limsup;
  return v;
}

// Witnessed when every sampled center has some net partner in its eps_grid
// ball forming a delta-scrambled pair with it.
inline Verdict li_yorke_sensitivity_check(const Family& family, double delta,
                                          const HorizonParams& params) {
  family.validate();
  params.validate();
  if (!(delta > params.tau))
    throw InvalidInputError("li_yorke_sensitivity_check requires delta > tau");
  const Net net = sampling_net(family.space, params.eps_grid, params.net_cap, params.seed);
  const std::size_t centers = net.points.size();
  std::uint64_t work = 0;
  for (std::size_t c = 0; c < centers; ++c)
    work += (net_ball_indices(net, c, net.eps).size()) *
            static_cast<std::uint64_t>(params.N + 1);
  if (work > params.work_cap)
    throw ResourceLimitError("li_yorke_sensitivity scan needs " + std::to_string(work) +
                             " pair steps, over work cap " + std::to_string(params.work_cap));

  const long window = params.resolved_window();
  struct CenterResult {
    bool ok = false;
    bool had_partner = false;
  };
  std::vector<CenterResult> per_center(centers);
  parallel_for_index(centers, params.workers, [&](std::size_t c) {
    const std::vector<std::size_t> ball = net_ball_indices(net, c, net.eps);
    for (std::size_t idx2 : ball) {
      if (idx2 == c) continue;
      per_center[c].had_partner = true;
      const PairStats s =
          scan_pair(family, net.points[c], net.points[idx2], params.N, window, params.tau);
      if (s.tail_min < params.tau && s.tail_max > delta) {
        per_center[c].ok = true;
        return;
      }
    }
  });

  Verdict v;
  v.detector = "li_yorke_sensitivity";
  v.measured["delta"] = delta;
  v.measured["eps_grid"] = params.eps_grid;
  v.measured["centers"] = static_cast<double>(centers);
  for (std::size_t c = 0; c < centers; ++c) {
    if (!per_center[c].ok) {
      v.status = Status::inconclusive;
      v.witness.points = {net.points[c]};
      v.witness.note = per_center[c].had_partner
                           ? "no ball partner passes the delta-scrambled pair test"
                           : "no net partner inside the center's eps_grid ball";
      return v;
    }
  }
  v.status = Status::witnessed;
  v.witness.note = "every sampled center has a delta-scrambled partner in its ball";
  return v;
}

// --------------------------------------------------------------------------
// minimality

// Components the strided orbit sample {omega_{offset + n*stride}} can ever
// occupy. Component movement is coordinate-independent for every built-in
// map kind, so this is exact, not horizon-limited.
inline std::vector<int> reachable_components(const Family& family, int start_component,
                                             long stride, long offset) {
  family.validate();
  if (stride < 1) throw InvalidInputError("stride must be >= 1");
  if (offset < 0) throw InvalidInputError("offset must be >= 0");
  const long k = static_cast<long>(family.k());
  int comp = start_component;
  long t = 0;
  for (; t < offset; ++t) comp = component_action(family.map_at_step(t), comp);
  std::vector<bool> visited(family.space.components.size(), false);
  std::vector<bool> seen_state(static_cast<std::size_t>(k) * family.space.components.size(),
                               false);
  while (true) {
    const std::size_t state = static_cast<std::size_t>(t % k) *
                                  family.space.components.size() +
                              static_cast<std::size_t>(comp);
    if (seen_state[state]) break;
    seen_state[state] = true;
    visited[static_cast<std::size_t>(comp)] = true;
    for (long s = 0; s < stride; ++s, ++t)
      comp = component_action(family.map_at_step(t), comp);
  }
  std::vector<int> out;
  for (std::size_t ci = 0; ci < visited.size(); ++ci)
    if (visited[ci]) out.push_back(static_cast<int>(ci));
  return out;
}

// Witnessed when the orbit sample is eps-dense (every eps-net point within
// eps of some sample). Refuted exactly when the component-reachability
// analysis proves some component can never be visited. Inconclusive
// otherwise, with the coverage fraction and the worst remaining gap.
inline Verdict minimality_evidence(const Family& family, const Point& x, double eps,
                                   long N, long stride = 1, long offset = 0,
                                   std::size_t net_cap = kDefaultNetCap,
                                   std::uint64_t work_cap = 4'000'000'000ULL) {
  family.validate();
  if (!(eps > 0.0)) throw InvalidInputError("minimality_evidence requires eps > 0");
  if (N < 1) throw InvalidInputError("minimality_evidence requires N >= 1");
  const Point start = normalize(family.space, x);

  Verdict v;
  v.detector = "minimality";
  v.measured["eps"] = eps;
  v.witness.points = {start};

  const std::vector<int> reach =
      reachable_components(family, start.component, stride, offset);
  if (reach.size() < family.space.components.size()) {
    std::vector<bool> ok(family.space.components.size(), false);
    for (int c : reach) ok[static_cast<std::size_t>(c)] = true;
    std::string missing;
    for (std::size_t ci = 0; ci < ok.size(); ++ci)
      if (!ok[ci]) missing += (missing.empty() ? "" : ", ") + std::to_string(ci);
    v.status = Status::refuted;
    v.witness.note = "orbit can never reach component(s) " + missing +
                     " at this stride/offset";
    v.measured["components_reachable"] = static_cast<double>(reach.size());
    return v;
  }

  const Net net = build_epsilon_net(family.space, eps, net_cap);
  const std::uint64_t work = static_cast<std::uint64_t>(net.points.size()) *
                             static_cast<std::uint64_t>(N + 1);
  if (work > work_cap)
    throw ResourceLimitError("minimality scan needs " + std::to_string(work) +
                             " distance checks, over work cap " + std::to_string(work_cap));

  struct Gap {
    std::size_t net_idx;
    double best = std::numeric_limits<double>::infinity();
  };
  std::vector<Gap> uncovered(net.points.size());
  for (std::size_t i = 0; i < uncovered.size(); ++i) uncovered[i].net_idx = i;

  Point p = start;
  long t = 0;
  for (; t < offset; ++t) p = apply(family.map_at_step(t), p);
  for (long n = 0; n <= N; ++n) {
    if (n > 0)
      for (long s = 0; s < stride; ++s, ++t) p = apply(family.map_at_step(t), p);
    std::size_t kept = 0;
    for (std::size_t u = 0; u < uncovered.size(); ++u) {
      const double d = distance(family.space, net.points[uncovered[u].net_idx], p);
      if (d <= eps) continue;
      uncovered[kept] = uncovered[u];
      uncovered[kept].best = std::min(uncovered[kept].best, d);
      ++kept;
    }
    uncovered.resize(kept);
    if (uncovered.empty()) {
      v.status = Status::witnessed;
      v.witness.indices = {n};
      v.witness.note = "orbit sample is eps-dense over the verification net";
      v.measured["coverage"] = 1.0;
      v.measured["samples_used"] = static_cast<double>(n + 1);
      return v;
    }
  }
  double worst = 0.0;
  std::size_t worst_idx = uncovered.front().net_idx;
  for (const auto& g : uncovered)
    if (g.best > worst) {
      worst = g.best;
      worst_idx = g.net_idx;
    }
  v.status = Status::inconclusive;
  v.witness.points.push_back(net.points[worst_idx]);
  v.witness.note = "net not covered by the horizon; witness holds the widest gap";
  v.measured["coverage"] = 1.0 - static_cast<double>(uncovered.size()) /
                                     static_cast<double>(net.points.size());
  v.measured["worst_gap"] = worst;
  return v;
}

// --------------------------------------------------------------------------
// mod-k limit classes

struct LimitClass {
  long residue = 1;                     // r in 1..k
  std::vector<Point> points;            // omega_{nk+r}(x) tail samples
  std::vector<int> components_visited;  // ascending, unique
};

struct ModKClassReport {
  std::vector<LimitClass> classes;             // size k
  std::vector<std::vector<double>> hausdorff;  // k x k, infinity for empty classes
  std::vector<std::vector<bool>> merged;       // hausdorff < eps_grid
};

namespace detail {

inline double hausdorff_distance(const SpaceSpec& space, const std::vector<Point>& A,
                                 const std::vector<Point>& B) {
  if (A.empty() || B.empty()) return std::numeric_limits<double>::infinity();
  double h = 0.0;
  for (int dir = 0; dir < 2; ++dir) {
    const auto& from = dir == 0 ? A : B;
    const auto& to = dir == 0 ? B : A;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, distance(space, p, q));
      h = std::max(h, best);
    }
  }
  return h;
}

}  // namespace detail

// Tail samples of the k subsequences omega_{nk+r}(x), r = 1..k, with their
// visited components and pairwise Hausdorff distances. Classes closer than
// eps_grid are flagged merged; on spaces where the family mixes every
// residue densely all classes merge, while component-swapping families keep
// them apart.
inline ModKClassReport mod_k_limit_classes(const Family& family, const Point& x,
                                           const HorizonParams& params) {
  family.validate();
  params.validate();
  const long k = static_cast<long>(family.k());
  ModKClassReport report;
  report.classes.resize(static_cast<std::size_t>(k));
  for (long r = 1; r <= k; ++r)
    report.classes[static_cast<std::size_t>(r - 1)].residue = r;

  const long window = params.resolved_window();
  Point p = normalize(family.space, x);
  for (long n = 0; n <= params.N; ++n) {
    if (n > 0) p = apply(family.map_at_step(n - 1), p);
    if (n >= std::max(window, 1L)) {
      const long r = ((n - 1) % k) + 1;
      report.classes[static_cast<std::size_t>(r - 1)].points.push_back(p);
    }
  }
  for (auto& cls : report.classes) {
    std::vector<int> comps;
    for (const auto& q : cls.points) comps.push_back(q.component);
    std::sort(comps.begin(), comps.end());
    comps.erase(std::unique(comps.begin(), comps.end()), comps.end());
    cls.components_visited = std::move(comps);
  }

  std::uint64_t work = 0;
  for (std::size_t i = 0; i < report.classes.size(); ++i)
    for (std::size_t j = i + 1; j < report.classes.size(); ++j)
      work += 2ULL * report.classes[i].points.size() * report.classes[j].points.size();
  if (work > params.work_cap)
    throw ResourceLimitError("mod-k class comparison needs " + std::to_string(work) +
                             " distances, over work cap " + std::to_string(params.work_cap));

  const std::size_t kk = report.classes.size();
  report.hausdorff.assign(kk, std::vector<double>(kk, 0.0));
  report.merged.assign(kk, std::vector<bool>(kk, true));
  for (std::size_t i = 0; i < kk; ++i) {
    for (std::size_t j = i + 1; j < kk; ++j) {
      const double h = detail::hausdorff_distance(family.space, report.classes[i].points,
                                                  report.classes[j].points);
      report.hausdorff[i][j] = report.hausdorff[j][i] = h;
      const bool m = h < params.eps_grid;
      report.merged[i][j] = report.merged[j][i] = m;
    }
  }
  return report;
}

}  // namespace famdyn
