#pragma once

#include <cstdint>
#include <random>

namespace famdyn {

// Uniform double in [0, 1) built from the top 53 bits of the generator.
// std::uniform_real_distribution is implementation-defined; this is not,
// so seeded runs produce the same samples on every platform.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by rejection, portable across standard libraries.
inline std::uint64_t uniform_index(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
  std::uint64_t v = gen();
  while (v >= limit) v = gen();
  return v % n;
}

}  // namespace famdyn
