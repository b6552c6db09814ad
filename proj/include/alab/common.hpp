#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace alab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Sentinel for a Gromov product of non-transverse flags. Kept as a named
// constant so callers test the semantic state, not a float overflow.
inline constexpr double kNonTransverse = -std::numeric_limits<double>::infinity();

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-call RNG; `stream` shards trials so seeds never collide across workers.
inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

// FNV-1a, used for config hashes in artifact files (stable across platforms,
// unlike std::hash).
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

struct resource_limit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace alab
