#pragma once

// Paired experiments: each claim runs one detector on the family system
// (X, F) and on the composed autonomous system (X, f), f = f_k o ... o f_1,
// then scores the agreement between the two verdicts.
//
// Scoring rules per claim:
//   agree                 both sides decisive and matching.
//   abstain               at least one side inconclusive where the claim
//                         needs a decision; equivalences are never scored
//                         off a timeout.
//   disagreement_allowed  decisive mismatch in a configuration where the
//                         transfer statement does not apply (disconnected
//                         space for minimality) or where only the scored
//                         direction is exact.
//   violation             a mismatch that contradicts the horizon-exact
//                         direction. One composed step is k family steps,
//                         and the composed horizons are aligned to
//                         N_c = floor(N/k), window_c = ceil(window/k), so
//                         every composed scan index is also a family scan
//                         index; "composed witnessed but family not" can
//                         then only come from a bug, never from sampling.
//
// Constants measured on the two sides (delta*, K, liminf estimates) are
// reported but never required to coincide.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "famdyn/detectors.hpp"
#include "famdyn/dynamics.hpp"
#include "famdyn/errors.hpp"
#include "famdyn/parallel.hpp"
#include "famdyn/space.hpp"
#include "famdyn/verdict.hpp"

namespace famdyn {

enum class Agreement : std::uint8_t {
  agree,
  abstain,
  disagreement_allowed,
  violation,
};

inline const char* to_string(Agreement a) {
  switch (a) {
    case Agreement::agree: return "agree";
    case Agreement::abstain: return "abstain";
    case Agreement::disagreement_allowed: return "disagreement_allowed";
    case Agreement::violation: return "violation";
  }
  return "?";
}

struct ComparisonReport {
  std::string claim;
  std::string statement;
  bool connected = false;
  std::size_t k = 1;
  Verdict side_family;
  Verdict side_composed;
  Agreement agreement = Agreement::abstain;
  std::string rationale;
  std::map<std::string, double> aggregate;
};

inline Family composed_family(const Family& family) {
  return make_family(family.space, {composed(family)});
}

// Composed-side horizons: N_c = floor(N/k), window_c = ceil(window/k)
// (clamped under N_c). Composed index n stands for family index n*k, so
// the composed scan range maps into [window, N] on the family side.
inline HorizonParams align_composed_params(const HorizonParams& params, std::size_t k) {
  HorizonParams c = params;
  const long lk = static_cast<long>(k);
  c.N = std::max<long>(1, params.N / lk);
  long w = (params.resolved_window() + lk - 1) / lk;
  if (w >= c.N) w = c.N - 1;
  c.window = w;
  return c;
}

namespace detail {

inline bool witnessed(const Verdict& v) { return v.status == Status::witnessed; }
inline bool refuted(const Verdict& v) { return v.status == Status::refuted; }
inline bool decisive(const Verdict& v) { return v.status != Status::inconclusive; }

inline ComparisonReport base_report(std::string claim, std::string statement,
                                    const Family& family) {
  ComparisonReport r;
  r.claim = std::move(claim);
  r.statement = std::move(statement);
  r.connected = family.space.connected();
  r.k = family.k();
  return r;
}

}  // namespace detail

// EQ: equicontinuity_check on both sides. Both ladders test the same rungs
// and the same probe pairs, and a composed orbit is a bit-exact subsequence
// of the family orbit, so a composed-side separation is a family-side
// separation at index n*k: composed refuted + family witnessed is a
// violation. The reverse mismatch is allowed, because the family's true
// modulus shrinks by the prefix maps' stretching and can drop below the
// smallest tested delta while the composition's does not.
inline ComparisonReport compare_equicontinuity(const Family& family, double eps,
                                               const HorizonParams& params) {
  ComparisonReport r = detail::base_report(
      "EQ", "the family system is equicontinuous iff its composition is", family);
  r.side_family = equicontinuity_check(family, eps, params);
  r.side_composed = equicontinuity_check(composed_family(family), eps,
                                         align_composed_params(params, family.k()));
  using namespace detail;
  const bool fw = witnessed(r.side_family), fr = refuted(r.side_family);
  const bool cw = witnessed(r.side_composed), cr = refuted(r.side_composed);
  if (cr && fw) {
    r.agreement = Agreement::violation;
    r.rationale = "a composed-side separating pair separates the family at the same "
                  "rung and index n*k";
  } else if (fw && cw) {
    r.agreement = Agreement::agree;
    r.rationale = "a candidate delta survived on both sides";
  } else if (fr && cr) {
    r.agreement = Agreement::agree;
    r.rationale = "the smallest candidate delta failed on both sides";
  } else if (fr && cw) {
    r.agreement = Agreement::disagreement_allowed;
    r.rationale = "the family's modulus can sit below the ladder resolution even when "
                  "the composition's does not";
  } else {
    r.agreement = Agreement::abstain;
    r.rationale = "at least one side is inconclusive";
  }
  return r;
}

namespace detail {

inline void score_minimality(ComparisonReport& r) {
  const bool fw = witnessed(r.side_family), fr = refuted(r.side_family);
  const bool cw = witnessed(r.side_composed), cr = refuted(r.side_composed);
  if (cw && !fw) {
    r.agreement = Agreement::violation;
    r.rationale = "the composed orbit sample is a subset of the family orbit, so its "
                  "density witness must transfer";
  } else if (fw && cw) {
    r.agreement = Agreement::agree;
    r.rationale = "both orbits eps-dense";
  } else if (fr && cr) {
    r.agreement = Agreement::agree;
    r.rationale = "both sides structurally refuted";
  } else if (fw && cr) {
    if (r.connected) {
      r.agreement = Agreement::violation;
      r.rationale = "decisive mismatch on a connected space";
    } else {
      r.agreement = Agreement::disagreement_allowed;
      r.rationale = "minimality transfers only on connected spaces; this space is "
                    "disconnected";
    }
  } else {
    r.agreement = Agreement::abstain;
    r.rationale = "at least one side is inconclusive";
  }
}

}  // namespace detail

// MIN: eps-density of the family orbit versus the composed orbit from the
// same start. Disagreement is expected on disconnected spaces.
inline ComparisonReport compare_minimality(const Family& family, const Point& x,
                                           double eps, long N,
                                           std::size_t net_cap = kDefaultNetCap,
                                           std::uint64_t work_cap = 4'000'000'000ULL) {
  ComparisonReport r = detail::base_report(
      "MIN", "the family system is minimal iff its composition is, on connected spaces",
      family);
  const long nc = std::max<long>(1, N / static_cast<long>(family.k()));
  r.side_family = minimality_evidence(family, x, eps, N, 1, 0, net_cap, work_cap);
  r.side_composed =
      minimality_evidence(composed_family(family), x, eps, nc, 1, 0, net_cap, work_cap);
  detail::score_minimality(r);
  r.aggregate["N_family"] = static_cast<double>(N);
  r.aggregate["N_composed"] = static_cast<double>(nc);
  return r;
}

// PROX: proximal_check per pair on both sides. A pair is decisive when
// either side is witnessed; "composed witnessed, family not" is the
// horizon-exact direction and counts as a violation.
inline ComparisonReport compare_proximal(const Family& family,
                                         const std::vector<std::pair<Point, Point>>& pairs,
                                         const HorizonParams& params) {
  if (pairs.empty()) throw InvalidInputError("compare_proximal needs at least one pair");
  ComparisonReport r = detail::base_report(
      "PROX", "a pair is proximal for the family iff it is proximal for the composition",
      family);
  const Family comp = composed_family(family);
  const HorizonParams cparams = align_composed_params(params, family.k());

  std::vector<std::pair<Verdict, Verdict>> results(pairs.size());
  HorizonParams serial = params;
  serial.workers = 1;
  HorizonParams cserial = cparams;
  cserial.workers = 1;
  parallel_for_index(pairs.size(), params.workers, [&](std::size_t i) {
    results[i] = {proximal_check(family, pairs[i].first, pairs[i].second, serial),
                  proximal_check(comp, pairs[i].first, pairs[i].second, cserial)};
  });

  std::size_t decisive = 0, matched = 0, mismatch_at = pairs.size(), first_decisive = pairs.size();
  bool violated = false;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const bool fw = detail::witnessed(results[i].first);
    const bool cw = detail::witnessed(results[i].second);
    if (fw || cw) {
      ++decisive;
      if (first_decisive == pairs.size()) first_decisive = i;
      if (fw && cw) {
        ++matched;
      } else if (mismatch_at == pairs.size()) {
        mismatch_at = i;
        if (cw && !fw) violated = true;
      }
    }
  }
  const std::size_t report_idx =
      mismatch_at < pairs.size() ? mismatch_at
                                 : (first_decisive < pairs.size() ? first_decisive : 0);
  r.side_family = results[report_idx].first;
  r.side_composed = results[report_idx].second;
  r.aggregate["pairs_total"] = static_cast<double>(pairs.size());
  r.aggregate["pairs_decisive"] = static_cast<double>(decisive);
  r.aggregate["pairs_matched"] = static_cast<double>(matched);
  r.aggregate["match_rate"] =
      decisive == 0 ? 1.0 : static_cast<double>(matched) / static_cast<double>(decisive);
  if (violated) {
    r.agreement = Agreement::violation;
    r.rationale = "a pair is proximal for the composition but not for the family, "
                  "though the composed scan indices are a subset";
  } else if (decisive == 0) {
    r.agreement = Agreement::abstain;
    r.rationale = "no pair was decisive on either side";
  } else if (matched == decisive) {
    r.agreement = Agreement::agree;
    r.rationale = "all decisive pairs matched";
  } else {
    r.agreement = Agreement::disagreement_allowed;
    r.rationale = "family-only proximal witnesses can sit at indices the composed scan "
                  "never samples";
  }
  return r;
}

// DIST: distality_check on both sides. A composed-side proximal pair is also
// family-proximal (subset indices), so composed refuted + family witnessed
// is a violation; the reverse is only evidence against and abstains.
inline ComparisonReport compare_distality(const Family& family, const HorizonParams& params) {
  ComparisonReport r = detail::base_report(
      "DIST", "the family system is distal iff its composition is", family);
  r.side_family = distality_check(family, params);
  r.side_composed =
      distality_check(composed_family(family), align_composed_params(params, family.k()));
  using namespace detail;
  const bool fw = witnessed(r.side_family), fr = refuted(r.side_family);
  const bool cw = witnessed(r.side_composed), cr = refuted(r.side_composed);
  if (cr && fw) {
    r.agreement = Agreement::violation;
    r.rationale = "composed-side proximal pair must also be proximal for the family";
  } else if (fw && cw) {
    r.agreement = Agreement::agree;
    r.rationale = "no proximal pair found on either side";
  } else if (fr && cr) {
    r.agreement = Agreement::agree;
    r.rationale = "proximal pair found on both sides";
  } else if (fr && cw) {
    r.agreement = Agreement::abstain;
    r.rationale = "family-side proximal witness may sit at indices the composed scan "
                  "never samples";
  } else {
    r.agreement = Agreement::abstain;
    r.rationale = "at least one side is inconclusive";
  }
  return r;
}

namespace detail {

inline void score_one_directional(ComparisonReport& r, const char* transfer_note) {
  const bool fw = witnessed(r.side_family);
  const bool cw = witnessed(r.side_composed);
  if (cw && !fw) {
    r.agreement = Agreement::violation;
    r.rationale = transfer_note;
  } else if (fw && cw) {
    r.agreement = Agreement::agree;
    r.rationale = "both sides witnessed";
  } else if (!decisive(r.side_family) && !decisive(r.side_composed)) {
    r.agreement = Agreement::abstain;
    r.rationale = "both sides inconclusive";
  } else {
    r.agreement = Agreement::abstain;
    r.rationale = "one side inconclusive; the equivalence is not scored off a timeout";
  }
}

}  // namespace detail

// SEN: sensitivity_check on both sides; status compared, constants reported
// separately. Composed expansion happens at family indices too, so composed
// witnessed + family inconclusive is a violation.
inline ComparisonReport compare_sensitivity(const Family& family, const HorizonParams& params) {
  ComparisonReport r = detail::base_report(
      "SEN", "the family system is sensitive iff its composition is; constants may differ",
      family);
  r.side_family = sensitivity_check(family, params);
  r.side_composed =
      sensitivity_check(composed_family(family), align_composed_params(params, family.k()));
  detail::score_one_directional(
      r, "composed-side expansion happens at family scan indices too");
  return r;
}

// COFSEN: cofinite_sensitivity_check on both sides. Neither direction is
// horizon-exact (the family side must stay expanded at indices between
// composed samples), so mismatches abstain.
inline ComparisonReport compare_cofinite(const Family& family, const HorizonParams& params) {
  ComparisonReport r = detail::base_report(
      "COFSEN",
      "the family system is cofinitely sensitive iff its composition is; constants may differ",
      family);
  r.side_family = cofinite_sensitivity_check(family, params);
  r.side_composed = cofinite_sensitivity_check(composed_family(family),
                                               align_composed_params(params, family.k()));
  using namespace detail;
  if (witnessed(r.side_family) && witnessed(r.side_composed)) {
    r.agreement = Agreement::agree;
    r.rationale = "both sides witnessed";
  } else if (!decisive(r.side_family) && !decisive(r.side_composed)) {
    r.agreement = Agreement::abstain;
    r.rationale = "both sides inconclusive";
  } else {
    r.agreement = Agreement::abstain;
    r.rationale = "cofinite expansion between composed samples is not horizon-exact; "
                  "mismatches are not scored";
  }
  return r;
}

// LYS: li_yorke_sensitivity_check on both sides. A composed-side scrambled
// partner is scrambled for the family over the same (super)set of indices.
inline ComparisonReport compare_li_yorke_sensitivity(const Family& family, double delta,
                                                     const HorizonParams& params) {
  ComparisonReport r = detail::base_report(
      "LYS", "the family system is Li-Yorke sensitive iff its composition is", family);
  r.side_family = li_yorke_sensitivity_check(family, delta, params);
  r.side_composed = li_yorke_sensitivity_check(
      composed_family(family), delta, align_composed_params(params, family.k()));
  detail::score_one_directional(
      r, "a composed-side scrambled partner is scrambled for the family as well");
  return r;
}

// Deterministic scrambled-set candidates: a golden-ratio ladder on
// component 0, the same on both sides of a comparison.
inline std::vector<Point> scrambled_candidates(const SpaceSpec& space, std::size_t m) {
  space.validate();
  if (m < 2) throw InvalidInputError("scrambled candidate set needs at least 2 points");
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const ComponentSpec& c = space.components.front();
  const double lo = (c.kind == ComponentKind::interval) ? c.a : 0.0;
  std::vector<Point> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double u = std::fmod(0.1 + static_cast<double>(j) * phi, 1.0);
    out.push_back(normalize(space, Point{0, lo + u * c.coord_span()}));
  }
  return out;
}

// LYC: scrambled_set_check on a shared candidate set. A composed-witnessed
// set is witnessed for the family too (subset indices), and a family-side
// constant-distance refutation forces constancy on the composed subsequence.
inline ComparisonReport compare_li_yorke_chaos(const Family& family, double delta,
                                               std::size_t set_size,
                                               const HorizonParams& params) {
  ComparisonReport r = detail::base_report(
      "LYC", "a finite delta-scrambled set for the family matches one for the composition",
      family);
  const std::vector<Point> cand = scrambled_candidates(family.space, set_size);
  r.side_family = scrambled_set_check(family, cand, delta, params);
  r.side_composed = scrambled_set_check(composed_family(family), cand, delta,
                                        align_composed_params(params, family.k()));
  using namespace detail;
  const bool fw = witnessed(r.side_family), fr = refuted(r.side_family);
  const bool cw = witnessed(r.side_composed), cr = refuted(r.side_composed);
  if (cw && !fw) {
    r.agreement = Agreement::violation;
    r.rationale = "a composed-witnessed scrambled set is witnessed for the family over "
                  "the same indices";
  } else if (fw && cw) {
    r.agreement = Agreement::agree;
    r.rationale = "the candidate set is scrambled on both sides";
  } else if (fr && cr) {
    r.agreement = Agreement::agree;
    r.rationale = "the candidate set is refuted on both sides";
  } else {
    r.agreement = Agreement::abstain;
    r.rationale = "no decisive match on the candidate set";
  }
  r.aggregate["set_size"] = static_cast<double>(set_size);
  return r;
}

// POWMIN: minimality of (X, f) versus (X, f^m) from the same start. The
// family side holds the base map's verdict, the composed side the power's.
inline ComparisonReport power_minimality(const MapSpec& map, std::size_t m, const Point& x,
                                         double eps, long N,
                                         std::size_t net_cap = kDefaultNetCap,
                                         std::uint64_t work_cap = 4'000'000'000ULL) {
  if (m < 1) throw InvalidInputError("power_minimality requires m >= 1");
  const Family base = make_family(map.space, {map});
  ComparisonReport r = detail::base_report(
      "POWMIN", "a map is minimal iff each of its powers is, on connected spaces", base);
  r.k = m;
  const Family powered = make_family(map.space, {power(map, m)});
  const long np = std::max<long>(1, N / static_cast<long>(m));
  r.side_family = minimality_evidence(base, x, eps, N, 1, 0, net_cap, work_cap);
  r.side_composed = minimality_evidence(powered, x, eps, np, 1, 0, net_cap, work_cap);
  detail::score_minimality(r);
  r.aggregate["exponent"] = static_cast<double>(m);
  r.aggregate["N_base"] = static_cast<double>(N);
  r.aggregate["N_power"] = static_cast<double>(np);
  return r;
}

}  // namespace famdyn
