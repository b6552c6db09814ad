#include "alab/sft.hpp"

#include <algorithm>
#include <numeric>

namespace alab::sft {

namespace {

void build_succ(Sft& s) {
  s.succ.assign(s.alphabet, {});
  for (int x = 0; x < s.alphabet; ++x)
    for (int y = 0; y < s.alphabet; ++y)
      if (s.allowed(x, y)) s.succ[x].push_back(y);
}

}  // namespace

bool Sft::word_admissible(std::span<const int> b) const {
  for (size_t i = 1; i < b.size(); ++i)
    if (!allowed(b[i - 1], b[i])) return false;
  return true;
}

bool Sft::cycle_admissible(std::span<const int> b) const {
  if (b.empty()) return false;
  return word_admissible(b) && allowed(b.back(), b.front());
}

bool Sft::irreducible() const {
  // reachability in both directions from symbol 0
  auto reach = [&](bool forward) {
    std::vector<char> seen(alphabet, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y = 0; y < alphabet; ++y) {
        bool edge = forward ? allowed(x, y) : allowed(y, x);
        if (edge && !seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  return reach(true) && reach(false);
}

bool Sft::aperiodic() const {
  if (!irreducible()) return false;
  // gcd of return times to symbol 0, probed up to 2*alphabet steps
  std::vector<char> cur(alphabet, 0), nxt(alphabet, 0);
  cur[0] = 1;
  int g = 0;
  for (int t = 1; t <= 2 * alphabet && g != 1; ++t) {
    std::fill(nxt.begin(), nxt.end(), 0);
    for (int x = 0; x < alphabet; ++x)
      if (cur[x])
        for (int y : succ[x]) nxt[y] = 1;
    std::swap(cur, nxt);
    if (cur[0]) g = std::gcd(g, t);
  }
  return g == 1;
}

Sft Sft::from_transitions(int alphabet, std::vector<std::uint8_t> trans) {
  Sft s;
  s.alphabet = alphabet;
  s.trans = std::move(trans);
  if (s.trans.size() != static_cast<size_t>(alphabet) * alphabet)
    throw std::invalid_argument("transition table size mismatch");
  build_succ(s);
  return s;
}

Sft Sft::full_shift(int alphabet) {
  return from_transitions(alphabet, std::vector<std::uint8_t>(static_cast<size_t>(alphabet) * alphabet, 1));
}

Sft Sft::golden_mean() {
  return from_transitions(2, {1, 1, 1, 0});
}

Sft Sft::free_group(int rank) {
  int a = 2 * rank;
  std::vector<std::uint8_t> t(static_cast<size_t>(a) * a, 1);
  for (int x = 0; x < a; ++x) t[static_cast<size_t>(x) * a + inverse_symbol(rank, x)] = 0;
  return from_transitions(a, std::move(t));
}

BlockIndex::BlockIndex(const Sft& sft, int window) : sft_(&sft), window_(window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  tails_.assign(window + 1, std::vector<std::uint64_t>(sft.alphabet, 0));
  for (int x = 0; x < sft.alphabet; ++x) tails_[1][x] = 1;
  for (int t = 2; t <= window; ++t)
    for (int x = 0; x < sft.alphabet; ++x)
      for (int y : sft.succ[x]) tails_[t][x] += tails_[t - 1][y];
  total_ = 0;
  for (int x = 0; x < sft.alphabet; ++x) total_ += tails_[window][x];
}

std::uint64_t BlockIndex::rank(const int* b) const {
  std::uint64_t r = 0;
  for (int x = 0; x < b[0]; ++x) r += tails_[window_][x];
  for (int t = 1; t < window_; ++t) {
    int prev = b[t - 1];
    for (int y : sft_->succ[prev]) {
      if (y == b[t]) break;
      r += tails_[window_ - t][y];
    }
  }
  return r;
}

void BlockIndex::unrank(std::uint64_t r, int* out) const {
  for (int x = 0; x < sft_->alphabet; ++x) {
    if (r < tails_[window_][x]) {
      out[0] = x;
      break;
    }
    r -= tails_[window_][x];
  }
  for (int t = 1; t < window_; ++t) {
    for (int y : sft_->succ[out[t - 1]]) {
      if (r < tails_[window_ - t][y]) {
        out[t] = y;
        break;
      }
      r -= tails_[window_ - t][y];
    }
  }
}

void BlockIndex::for_each(const std::function<void(std::uint64_t, const int*)>& visit) const {
  std::vector<int> b(window_);
  std::uint64_t r = 0;
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == window_) {
      visit(r++, b.data());
      return;
    }
    if (depth == 0) {
      for (int x = 0; x < sft_->alphabet; ++x) {
        b[0] = x;
        self(self, 1);
      }
    } else {
      for (int y : sft_->succ[b[depth - 1]]) {
        b[depth] = y;
        self(self, depth + 1);
      }
    }
  };
  rec(rec, 0);
}

std::vector<int> least_rotation(std::span<const int> w) {
  size_t n = w.size();
  std::vector<int> best(w.begin(), w.end());
  std::vector<int> cur(n);
  for (size_t s = 1; s < n; ++s) {
    for (size_t i = 0; i < n; ++i) cur[i] = w[(s + i) % n];
    if (std::lexicographical_compare(cur.begin(), cur.end(), best.begin(), best.end())) best = cur;
  }
  return best;
}

bool primitive_cycle(std::span<const int> w) {
  size_t n = w.size();
  for (size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool period = true;
    for (size_t i = 0; i + d < n && period; ++i)
      if (w[i] != w[i + d]) period = false;
    if (period) return false;
  }
  return true;
}

void for_each_primitive_orbit(const Sft& sft, int max_len,
                              const std::function<void(std::span<const int>)>& visit) {
  std::vector<int> w;
  // DFS over admissible words; keep words that are cyclically admissible,
  // lexicographically least among rotations, and aperiodic. Pruning: a least
  // rotation never has a strictly smaller symbol after position 0.
  auto rec = [&](auto&& self, int n) -> void {
    if (static_cast<int>(w.size()) == n) {
      if (sft.allowed(w.back(), w.front()) && primitive_cycle(w) &&
          std::equal(w.begin(), w.end(), least_rotation(w).begin()))
        visit(w);
      return;
    }
    for (int y : sft.succ[w.back()]) {
      if (y < w[0]) continue;
      w.push_back(y);
      self(self, n);
      w.pop_back();
    }
  };
  for (int n = 1; n <= max_len; ++n) {
    for (int x = 0; x < sft.alphabet; ++x) {
      if (n == 1) {
        if (sft.allowed(x, x)) {
          int fix[1] = {x};
          visit(std::span<const int>(fix, 1));
        }
        continue;
      }
      w.assign(1, x);
      rec(rec, n);
    }
  }
}

}  // namespace alab::sft
