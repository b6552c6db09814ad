#pragma once

// Subshifts of finite type with 1-step transition rules, block indexing and
// periodic-orbit enumeration. The free-group coding (alphabet 2k, transition
// y != x^{-1}, roof 1) lives here next to the generic shifts used as oracles.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "alab/common.hpp"

namespace alab::sft {

struct Sft {
  int alphabet = 0;
  std::vector<std::uint8_t> trans;        // alphabet x alphabet, row-major
  std::vector<std::vector<int>> succ;     // successor lists per symbol

  bool allowed(int x, int y) const { return trans[static_cast<size_t>(x) * alphabet + y] != 0; }
  bool word_admissible(std::span<const int> b) const;
  // admissible as a cyclic word (wrap-around edge included)
  bool cycle_admissible(std::span<const int> b) const;

  bool irreducible() const;
  bool aperiodic() const;  // irreducible + gcd of cycle lengths 1

  static Sft full_shift(int alphabet);
  static Sft golden_mean();              // binary, "11" forbidden
  static Sft free_group(int rank);       // symbols = letter indices, see below
  static Sft from_transitions(int alphabet, std::vector<std::uint8_t> trans);
};

// Letter <-> symbol-index convention for the free-group coding:
//   +i  -> i-1        (i = 1..k)
//   -i  -> k + i - 1
inline int letter_to_symbol(int rank, int letter) {
  return letter > 0 ? letter - 1 : rank + (-letter) - 1;
}
inline int symbol_to_letter(int rank, int s) {
  return s < rank ? s + 1 : -(s - rank + 1);
}
inline int inverse_symbol(int rank, int s) { return (s + rank) % (2 * rank); }

// Ranks admissible words of a fixed window length w; the rank order is the
// depth-first order by symbol value. Counts are exact (64-bit).
class BlockIndex {
 public:
  BlockIndex() = default;
  BlockIndex(const Sft& sft, int window);

  std::uint64_t count() const { return total_; }
  int window() const { return window_; }
  const Sft& shift() const { return *sft_; }

  std::uint64_t rank(const int* block) const;
  std::uint64_t rank(std::span<const int> block) const { return rank(block.data()); }
  void unrank(std::uint64_t r, int* out) const;

  // Visits every admissible window-block in rank order. The pointer stays
  // owned by the iterator; copy if you keep it.
  void for_each(const std::function<void(std::uint64_t, const int*)>& visit) const;

 private:
  const Sft* sft_ = nullptr;
  int window_ = 0;
  std::uint64_t total_ = 0;
  // tails_[t][x] = number of admissible words of length t starting at x
  std::vector<std::vector<std::uint64_t>> tails_;
};

// Primitive periodic orbits up to period max_len, one visit per orbit, word
// given as the lexicographically least rotation. Includes fixed points.
void for_each_primitive_orbit(const Sft& sft, int max_len,
                              const std::function<void(std::span<const int>)>& visit);

// Least cyclic rotation and primitivity of a cyclic word.
std::vector<int> least_rotation(std::span<const int> w);
bool primitive_cycle(std::span<const int> w);

}  // namespace alab::sft
