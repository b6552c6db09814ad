#pragma once

// Free-group combinatorics: reduced words, ball/conjugacy enumeration,
// boundary rays and the cone type at infinity.
//
// Letters of the rank-k free group are the nonzero integers {±1,...,±k};
// a negative value is the inverse of the corresponding generator.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "alab/common.hpp"

namespace alab::words {

struct ReducedWord {
  int rank = 0;
  std::vector<int> letters;  // reduced: no adjacent (x, -x)

  int length() const { return static_cast<int>(letters.size()); }
  bool empty() const { return letters.empty(); }
  bool is_reduced() const;
  bool cyclically_reduced() const;
  ReducedWord inverse() const;
  bool operator==(const ReducedWord&) const = default;
};

// Fully cancels a raw letter sequence. Idempotent, length-nonincreasing.
// Throws std::invalid_argument on a letter outside {±1..±k}.
ReducedWord reduce(int rank, std::span<const int> raw);

// Reduced product uv.
ReducedWord concat(const ReducedWord& u, const ReducedWord& v);

// Cyclic reduction: strips matching prefix/suffix inverse pairs.
ReducedWord cyclic_reduction(const ReducedWord& w);

// |B(L)| = 1 + sum_{n<=L} 2k(2k-1)^{n-1}.
std::uint64_t ball_size(int rank, int max_len);
std::uint64_t sphere_size(int rank, int len);

inline constexpr std::uint64_t kDefaultBallCap = 5'000'000;

// Every reduced word of length <= max_len exactly once (identity included),
// in depth-first order. Throws resource_limit_error if the ball exceeds cap.
void enumerate_ball(int rank, int max_len,
                    const std::function<void(const ReducedWord&)>& visit,
                    std::uint64_t cap = kDefaultBallCap);

// Same stream restricted to words whose first letter is `first`; the shards
// over first letters partition the ball minus the identity.
void enumerate_cone(int rank, int first, int max_len,
                    const std::function<void(const ReducedWord&)>& visit,
                    std::uint64_t cap = kDefaultBallCap);

struct ConjClass {
  ReducedWord rep;  // lexicographically least cyclic rotation
  bool primitive = true;
};

// One representative per conjugacy class of nontrivial elements with
// cyclically reduced length <= max_len. Canonical form: the least cyclic
// rotation of the cyclically reduced word (letters ordered as integers).
void conjugacy_classes(int rank, int max_len,
                       const std::function<void(const ConjClass&)>& visit,
                       std::uint64_t cap = kDefaultBallCap);

// Uniform non-backtracking walk of length n; deterministic in seed.
ReducedWord random_ray(int rank, int n, std::uint64_t seed);

// Exact cone type at infinity of a free group: the ray lies in the cone of w
// iff its first letter does not cancel the last letter of w. Throws on empty w.
bool cone_at_infinity(const ReducedWord& w, const ReducedWord& ray);

}  // namespace alab::words
