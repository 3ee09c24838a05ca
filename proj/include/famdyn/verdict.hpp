#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "famdyn/errors.hpp"
#include "famdyn/space.hpp"

namespace famdyn {

enum class Status : std::uint8_t { witnessed, refuted, inconclusive };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::witnessed: return "witnessed";
    case Status::refuted: return "refuted";
    case Status::inconclusive: return "inconclusive";
  }
  return "?";
}

// Shared horizon/resolution/tolerance bundle for the finite-horizon checks.
// window < 0 means "use N/2". Tail statistics (liminf/limsup estimates) are
// taken over iteration indices in [window, N].
struct HorizonParams {
  long N = 1000;
  double eps_grid = 0.01;
  double tau = 1e-3;
  double delta = 0.1;
  long window = -1;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t net_cap = kDefaultNetCap;
  std::size_t pair_cap = 2'000'000;
  std::uint64_t work_cap = 4'000'000'000ULL;

  long resolved_window() const { return window < 0 ? N / 2 : window; }

  void validate() const {
    if (N < 1) throw InvalidInputError("N must be >= 1");
    if (!(eps_grid > 0.0)) throw InvalidInputError("eps_grid must be > 0");
    if (!(tau > 0.0) || !(tau < delta))
      throw InvalidInputError("need 0 < tau < delta");
    const long w = resolved_window();
    if (w < 0 || w >= N) throw InvalidInputError("window must lie in [0, N)");
  }
};

// Replayable evidence: the points involved and the iteration indices at
// which the measured quantities were attained.
struct Witness {
  std::vector<Point> points;
  std::vector<long> indices;
  std::string note;
};

struct Verdict {
  Status status = Status::inconclusive;
  std::string detector;
  Witness witness;
  std::map<std::string, double> measured;
};

}  // namespace famdyn
