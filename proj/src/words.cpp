#include "alab/words.hpp"

#include <algorithm>

#include "alab/sft.hpp"

namespace alab::words {

bool ReducedWord::is_reduced() const {
  for (size_t i = 1; i < letters.size(); ++i)
    if (letters[i] == -letters[i - 1]) return false;
  return true;
}

bool ReducedWord::cyclically_reduced() const {
  if (letters.size() < 2) return is_reduced();
  return is_reduced() && letters.front() != -letters.back();
}

ReducedWord ReducedWord::inverse() const {
  ReducedWord out{rank, {}};
  out.letters.reserve(letters.size());
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) out.letters.push_back(-*it);
  return out;
}

ReducedWord reduce(int rank, std::span<const int> raw) {
  ReducedWord out{rank, {}};
  out.letters.reserve(raw.size());
  for (int l : raw) {
    if (l == 0 || l > rank || l < -rank)
      throw std::invalid_argument("letter " + std::to_string(l) + " outside rank-" +
                                  std::to_string(rank) + " alphabet");
    if (!out.letters.empty() && out.letters.back() == -l)
      out.letters.pop_back();
    else
      out.letters.push_back(l);
  }
  return out;
}

ReducedWord concat(const ReducedWord& u, const ReducedWord& v) {
  std::vector<int> raw = u.letters;
  raw.insert(raw.end(), v.letters.begin(), v.letters.end());
  return reduce(std::max(u.rank, v.rank), raw);
}

ReducedWord cyclic_reduction(const ReducedWord& w) {
  size_t a = 0, b = w.letters.size();
  while (b > a + 1 && w.letters[a] == -w.letters[b - 1]) {
    ++a;
    --b;
  }
  ReducedWord out{w.rank, {w.letters.begin() + a, w.letters.begin() + b}};
  return out;
}

std::uint64_t sphere_size(int rank, int len) {
  if (len == 0) return 1;
  std::uint64_t s = 2ull * rank;
  for (int i = 1; i < len; ++i) s *= 2ull * rank - 1;
  return s;
}

std::uint64_t ball_size(int rank, int max_len) {
  std::uint64_t total = 0;
  for (int n = 0; n <= max_len; ++n) total += sphere_size(rank, n);
  return total;
}

namespace {

void dfs_words(int rank, int max_len, ReducedWord& w,
               const std::function<void(const ReducedWord&)>& visit) {
  visit(w);
  if (w.length() == max_len) return;
  int forbidden = w.empty() ? 0 : -w.letters.back();
  for (int l = -rank; l <= rank; ++l) {
    if (l == 0 || l == forbidden) continue;
    w.letters.push_back(l);
    dfs_words(rank, max_len, w, visit);
    w.letters.pop_back();
  }
}

void check_cap(int rank, int max_len, std::uint64_t cap) {
  if (ball_size(rank, max_len) > cap)
    throw resource_limit_error("ball of rank " + std::to_string(rank) + " radius " +
                               std::to_string(max_len) + " exceeds cap " + std::to_string(cap));
}

}  // namespace

void enumerate_ball(int rank, int max_len, const std::function<void(const ReducedWord&)>& visit,
                    std::uint64_t cap) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  check_cap(rank, max_len, cap);
  ReducedWord w{rank, {}};
  w.letters.reserve(max_len);
  dfs_words(rank, max_len, w, visit);
}

void enumerate_cone(int rank, int first, int max_len,
                    const std::function<void(const ReducedWord&)>& visit, std::uint64_t cap) {
  if (first == 0 || first > rank || first < -rank)
    throw std::invalid_argument("first letter outside alphabet");
  check_cap(rank, max_len, cap);
  if (max_len < 1) return;
  ReducedWord w{rank, {first}};
  w.letters.reserve(max_len);
  dfs_words(rank, max_len, w, visit);
}

void conjugacy_classes(int rank, int max_len, const std::function<void(const ConjClass&)>& visit,
                       std::uint64_t cap) {
  check_cap(rank, max_len, cap);
  const auto coding = sft::Sft::free_group(rank);
  sft::for_each_primitive_orbit(coding, max_len, [&](std::span<const int> symbols) {
    ConjClass c;
    c.rep.rank = rank;
    c.rep.letters.reserve(symbols.size());
    for (int s : symbols) c.rep.letters.push_back(sft::symbol_to_letter(rank, s));
    c.primitive = true;
    visit(c);
    // powers w^m with m*|w| <= max_len are distinct classes
    int n = static_cast<int>(symbols.size());
    for (int m = 2; m * n <= max_len; ++m) {
      ConjClass p;
      p.rep.rank = rank;
      p.rep.letters.reserve(static_cast<size_t>(m) * n);
      for (int i = 0; i < m; ++i)
        p.rep.letters.insert(p.rep.letters.end(), c.rep.letters.begin(), c.rep.letters.end());
      p.primitive = false;
      visit(p);
    }
  });
}

ReducedWord random_ray(int rank, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("ray length must be >= 1");
  auto rng = seeded_rng(seed);
  ReducedWord w{rank, {}};
  w.letters.reserve(n);
  std::uniform_int_distribution<int> first(0, 2 * rank - 1);
  w.letters.push_back(sft::symbol_to_letter(rank, first(rng)));
  std::uniform_int_distribution<int> step(0, 2 * rank - 2);
  for (int i = 1; i < n; ++i) {
    int forbidden = -w.letters.back();
    int pick = step(rng);
    for (int l = -rank; l <= rank; ++l) {
      if (l == 0 || l == forbidden) continue;
      if (pick == 0) {
        w.letters.push_back(l);
        break;
      }
      --pick;
    }
  }
  return w;
}

bool cone_at_infinity(const ReducedWord& w, const ReducedWord& ray) {
  if (w.empty()) throw std::invalid_argument("cone type of the empty word is undefined");
  if (ray.empty()) throw std::invalid_argument("ray must be non-empty");
  return ray.letters.front() != -w.letters.back();
}

}  // namespace alab::words
