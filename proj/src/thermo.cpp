#include "alab/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace alab::thermo {

namespace {

// Lift a window-1 potential to window 2 so the recoding always has honest
// edge states.
Potential widen(const Potential& f) {
  if (f.window() >= 2) return f;
  return Potential::from_function(f.shift(), 2, f.dim(), [&](const int* b, double* out) {
    Vec v = f.value(f.blocks().rank(b));
    for (int i = 0; i < f.dim(); ++i) out[i] = v[i];
  });
}

struct Recoding {
  sft::BlockIndex states;  // (w-1)-blocks
  sft::BlockIndex edges;   // w-blocks
  std::vector<std::uint32_t> from, to;
  std::vector<double> weight;  // e^{f(edge)}
};

Recoding recode(const Potential& f) {
  if (f.dim() != 1) throw std::invalid_argument("scalar potential required");
  Recoding rc;
  int w = f.window();
  rc.states = sft::BlockIndex(f.shift(), w - 1);
  rc.edges = sft::BlockIndex(f.shift(), w);
  std::uint64_t ne = rc.edges.count();
  rc.from.resize(ne);
  rc.to.resize(ne);
  rc.weight.resize(ne);
  rc.edges.for_each([&](std::uint64_t r, const int* b) {
    rc.from[r] = static_cast<std::uint32_t>(rc.states.rank(b));
    rc.to[r] = static_cast<std::uint32_t>(rc.states.rank(b + 1));
    rc.weight[r] = std::exp(f.data(r)[0]);
  });
  return rc;
}

bool recoded_irreducible(const Recoding& rc) {
  size_t n = rc.states.count();
  auto reach = [&](bool fwd) {
    std::vector<char> seen(n, 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (size_t e = 0; e < rc.from.size(); ++e)
      adj[fwd ? rc.from[e] : rc.to[e]].push_back(fwd ? rc.to[e] : rc.from[e]);
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      for (auto y : adj[x])
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  return reach(true) && reach(false);
}

// Power iteration on M + I (handles periodic-but-irreducible recodings).
// Relative tolerance 1e-12 on lambda, deterministic start.
struct PowerResult {
  double lambda;
  Vec v;
  int iters;
};

PowerResult power_iterate(const Recoding& rc, bool transpose) {
  size_t n = rc.states.count();
  Vec v = Vec::Constant(n, 1.0 / n);
  Vec next(n);
  double lambda = 0, prev = -1;
  int it = 0;
  for (; it < 500000; ++it) {
    next.setZero();
    for (size_t e = 0; e < rc.from.size(); ++e) {
      if (transpose)
        next[rc.to[e]] += rc.weight[e] * v[rc.from[e]];
      else
        next[rc.from[e]] += rc.weight[e] * v[rc.to[e]];
    }
    next += v;  // shift by identity
    double s = next.sum();
    lambda = s - 1.0;  // Rayleigh-style estimate under L1 normalization
    next /= s;
    double delta = (next - v).cwiseAbs().maxCoeff();
    v = next;
    if (std::abs(lambda - prev) <= 1e-13 * std::max(1.0, std::abs(lambda)) && delta < 1e-14)
      break;
    prev = lambda;
  }
  return {lambda, v, it};
}

}  // namespace

PerronData transfer_solve(const Potential& f_in) {
  Potential f = widen(f_in);
  Recoding rc = recode(f);
  if (!recoded_irreducible(rc))
    throw std::runtime_error("recoded shift is reducible: inconsistent block set");
  PowerResult right = power_iterate(rc, false);
  PowerResult left = power_iterate(rc, true);
  PerronData out;
  out.states = static_cast<int>(rc.states.count());
  out.iterations = right.iters + left.iters;
  // polish lambda with one Rayleigh quotient against the left vector
  Vec mh = Vec::Zero(rc.states.count());
  for (size_t e = 0; e < rc.from.size(); ++e)
    mh[rc.from[e]] += rc.weight[e] * right.v[rc.to[e]];
  out.lambda = left.v.dot(mh) / left.v.dot(right.v);
  out.pressure = std::log(out.lambda);
  out.right = right.v;
  out.left = left.v / left.v.dot(right.v);
  return out;
}

double pressure_transfer(const Potential& f) { return transfer_solve(f).pressure; }

OrbitPressure pressure_orbits(const Potential& f, int horizon) {
  if (horizon < 4) throw std::invalid_argument("horizon must be >= 4");
  if (f.dim() != 1) throw std::invalid_argument("scalar potential required");
  OrbitPressure out;
  out.horizon = horizon;
  // Z_n = sum over fixed points of sigma^n of e^{S_n f}, assembled from
  // primitive orbits: each primitive orbit of period d | n contributes
  // d * e^{(n/d) l_tau(f)}.
  std::vector<double> z(horizon + 1, 0.0);
  sft::for_each_primitive_orbit(f.shift(), horizon, [&](std::span<const int> wd) {
    int d = static_cast<int>(wd.size());
    double l = f.period(wd)[0];
    for (int n = d; n <= horizon; n += d) z[n] += d * std::exp((n / d) * l);
  });
  out.log_sums.resize(horizon);
  for (int n = 1; n <= horizon; ++n)
    out.log_sums[n - 1] = z[n] > 0 ? std::log(z[n]) : -std::numeric_limits<double>::infinity();
  std::vector<double> slopes;
  for (int n = horizon - 2; n <= horizon; ++n)
    if (n >= 2) slopes.push_back(out.log_sums[n - 1] - out.log_sums[n - 2]);
  out.value = slopes.back();
  out.band = *std::max_element(slopes.begin(), slopes.end()) -
             *std::min_element(slopes.begin(), slopes.end());
  return out;
}

GibbsChain gibbs_measure(const Potential& f_in) {
  Potential f = widen(f_in);
  PerronData pd = transfer_solve(f);
  Recoding rc = recode(f);
  GibbsChain chain;
  chain.shift = f.shift();
  chain.window = f.window();
  chain.states = sft::BlockIndex(f.shift(), f.window() - 1);
  chain.pressure = pd.pressure;
  size_t n = rc.states.count();
  chain.pi = Vec(n);
  for (size_t u = 0; u < n; ++u) chain.pi[u] = pd.left[u] * pd.right[u];
  chain.pi /= chain.pi.sum();
  chain.q.assign(n, {});
  for (size_t e = 0; e < rc.from.size(); ++e) {
    double p = rc.weight[e] * pd.right[rc.to[e]] / (pd.lambda * pd.right[rc.from[e]]);
    chain.q[rc.from[e]].push_back({rc.to[e], p});
  }
  // row-stochastic up to the Perron tolerance; renormalize exactly
  for (auto& row : chain.q) {
    double s = 0;
    for (auto& [_, p] : row) s += p;
    for (auto& [_, p] : row) p /= s;
  }
  return chain;
}

double GibbsChain::entropy() const {
  double h = 0;
  for (size_t u = 0; u < q.size(); ++u)
    for (const auto& [v, p] : q[u])
      if (p > 0) h -= pi[u] * p * std::log(p);
  return h;
}

Vec GibbsChain::integrate(const Potential& g) const {
  if (g.window() > window)
    throw std::invalid_argument("potential window exceeds chain resolution");
  Vec acc = Vec::Zero(g.dim());
  std::vector<int> ublock(window - 1), wblock(window);
  states.for_each([&](std::uint64_t u, const int* b) {
    std::copy(b, b + window - 1, wblock.begin());
    for (const auto& [v, p] : q[u]) {
      states.unrank(v, ublock.data());
      wblock[window - 1] = ublock[window - 2];
      Vec val = g.value(g.blocks().rank(wblock.data()));
      acc += pi[u] * p * val;
    }
  });
  return acc;
}

double GibbsChain::integrate_scalar(const Potential& g) const { return integrate(g)[0]; }

double GibbsChain::cylinder_mass(std::span<const int> word) const {
  int m = window - 1;
  if (static_cast<int>(word.size()) < m)
    throw std::invalid_argument("cylinder shorter than state resolution");
  if (!shift.word_admissible(word)) return 0.0;
  double mass = pi[states.rank(word.data())];
  for (size_t t = 1; t + m <= word.size(); ++t) {
    std::uint64_t u = states.rank(word.data() + t - 1);
    std::uint64_t v = states.rank(word.data() + t);
    double p = 0;
    for (const auto& [cand, prob] : q[u])
      if (cand == v) {
        p = prob;
        break;
      }
    mass *= p;
  }
  return mass;
}

std::vector<int> GibbsChain::sample_path(int length, std::uint64_t seed) const {
  auto rng = seeded_rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> out;
  out.reserve(length + window - 1);
  // stationary start
  double r = unif(rng);
  std::uint64_t u = q.size() - 1;
  for (size_t i = 0; i < q.size(); ++i) {
    r -= pi[i];
    if (r <= 0) {
      u = i;
      break;
    }
  }
  std::vector<int> block(window - 1);
  states.unrank(u, block.data());
  out.insert(out.end(), block.begin(), block.end());
  while (static_cast<int>(out.size()) < length + window - 1) {
    double rr = unif(rng);
    std::uint32_t next = q[u].back().first;
    for (const auto& [v, p] : q[u]) {
      rr -= p;
      if (rr <= 0) {
        next = v;
        break;
      }
    }
    u = next;
    states.unrank(u, block.data());
    out.push_back(block.back());
  }
  return out;
}

GibbsRatioReport gibbs_ratio(const GibbsChain& chain, const Potential& f_in, int depth) {
  Potential f = widen(f_in);
  GibbsRatioReport rep;
  rep.max_depth = depth;
  rep.c_upper = 0;
  rep.c_lower = std::numeric_limits<double>::infinity();
  double pressure = chain.pressure;
  for (int n = chain.window - 1; n <= depth; ++n) {
    sft::BlockIndex words(chain.shift, n);
    words.for_each([&](std::uint64_t, const int* b) {
      std::span<const int> w(b, n);
      double mu = chain.cylinder_mass(w);
      if (mu <= 0) return;
      // S_n f with the word extended periodically would wrap; use the honest
      // finite-window sum over the n - window + 1 complete windows plus the
      // pressure normalization of that many steps.
      double s = 0;
      int steps = n - f.window() + 1;
      if (steps < 1) return;
      for (int t = 0; t < steps; ++t) s += f.value_at(w.subspan(t, f.window()))[0];
      double ratio = mu / std::exp(s - steps * pressure);
      rep.c_upper = std::max(rep.c_upper, ratio);
      rep.c_lower = std::min(rep.c_lower, ratio);
    });
  }
  return rep;
}

double entropy_root(const Potential& f) {
  if (f.dim() != 1) throw std::invalid_argument("scalar potential required");
  auto pressure_at = [&](double s) { return pressure_transfer(f.scaled(-s)); };
  double lo = 1e-6, hi = 1e3;
  double plo = pressure_at(lo), phi_v = pressure_at(hi);
  int expand = 0;
  while (plo < 0 && expand++ < 8) {
    lo /= 100;
    plo = pressure_at(lo);
  }
  expand = 0;
  while (phi_v > 0 && expand++ < 8) {
    hi *= 100;
    phi_v = pressure_at(hi);
  }
  if (plo < 0 || phi_v > 0)
    throw std::runtime_error(
        "no sign change for P(-s f): potential not in the positive Livšic class");
  // bisection, then Newton polish with P'(s) = -∫f dm_{-sf}
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    double p = pressure_at(mid);
    if (p > 0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * std::max(1.0, hi)) break;
  }
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    GibbsChain chain = gibbs_measure(f.scaled(-s));
    double deriv = -chain.integrate_scalar(f);
    double p = pressure_at(s);
    if (std::abs(deriv) < 1e-300) break;
    double step = p / deriv;
    s -= step;
    if (std::abs(step) < 1e-14 * std::max(1.0, s)) break;
  }
  return s;
}

Vec pressure_gradient(const Potential& F, const Vec& phi) {
  GibbsChain chain = gibbs_measure(F.contracted(phi).scaled(-1.0));
  return chain.integrate(F);
}

bool RotationSet::contains(const Vec& v, double tol) const {
  if (means.empty()) return false;
  if (dim == 1) {
    double lo = means.front()[0], hi = lo;
    for (const auto& m : means) {
      lo = std::min(lo, m[0]);
      hi = std::max(hi, m[0]);
    }
    return v[0] >= lo - tol && v[0] <= hi + tol;
  }
  if (dim == 2 && hull.size() >= 3) {
    // hull is counter-clockwise; inside iff left of every edge
    for (size_t i = 0; i < hull.size(); ++i) {
      const Vec& a = hull[i];
      const Vec& b = hull[(i + 1) % hull.size()];
      double cross = (b[0] - a[0]) * (v[1] - a[1]) - (b[1] - a[1]) * (v[0] - a[0]);
      if (cross < -tol) return false;
    }
    return true;
  }
  // higher dimensions: support-function probe over sampled directions
  auto rng = seeded_rng(711);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 256; ++trial) {
    Vec u(dim);
    for (int i = 0; i < dim; ++i) u[i] = gauss(rng);
    u.normalize();
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& m : means) best = std::max(best, u.dot(m));
    if (u.dot(v) > best + tol) return false;
  }
  return true;
}

namespace {

std::vector<Vec> hull_2d(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec& a, const Vec& b) { return (a - b).norm() < 1e-12; }),
            pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<Vec> h(2 * pts.size());
  size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  size_t lower = k + 1;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    while (k >= lower && cross(h[k - 2], h[k - 1], *it) <= 0) --k;
    h[k++] = *it;
  }
  h.resize(k - 1);
  return h;
}

}  // namespace

RotationSet rotation_set(const Potential& F, int horizon) {
  if (horizon < 4) throw std::invalid_argument("horizon must be >= 4");
  RotationSet out;
  out.dim = F.dim();
  sft::for_each_primitive_orbit(F.shift(), horizon, [&](std::span<const int> w) {
    out.means.push_back(F.period(w) / static_cast<double>(w.size()));
  });
  if (out.dim == 1) {
    Vec lo = out.means.front(), hi = lo;
    for (const auto& m : out.means) {
      if (m[0] < lo[0]) lo = m;
      if (m[0] > hi[0]) hi = m;
    }
    out.hull = {lo, hi};
  } else if (out.dim == 2) {
    out.hull = hull_2d(out.means);
  }
  return out;
}

AbramovResult abramov(const GibbsChain& chain, const Potential& f) {
  AbramovResult res;
  // roof must be positive on blocks
  for (std::uint64_t b = 0; b < f.size(); ++b)
    if (f.data(b)[0] <= 0) throw std::invalid_argument("roof must be strictly positive");
  res.roof_mean = chain.integrate_scalar(f);
  res.entropy = chain.entropy() / res.roof_mean;
  // reweighted measure at state resolution: w_u ∝ pi_u E[f | u]
  size_t n = chain.q.size();
  res.state_weights = Vec(n);
  Potential fw = widen(f);
  std::vector<int> ublock(chain.window - 1), wblock(chain.window);
  chain.states.for_each([&](std::uint64_t u, const int* b) {
    std::copy(b, b + chain.window - 1, wblock.begin());
    double acc = 0;
    for (const auto& [v, p] : chain.q[u]) {
      chain.states.unrank(v, ublock.data());
      wblock[chain.window - 1] = ublock[chain.window - 2];
      acc += p * fw.value_at({wblock.data(), static_cast<size_t>(chain.window)})[0];
    }
    res.state_weights[u] = chain.pi[u] * acc;
  });
  res.state_weights /= res.state_weights.sum();
  return res;
}

double livsic_test(const Potential& F, const Potential& G, int horizon) {
  if (F.dim() != G.dim()) throw std::invalid_argument("dimension mismatch");
  double worst = 0;
  sft::for_each_primitive_orbit(F.shift(), horizon, [&](std::span<const int> w) {
    double v = (F.period(w) - G.period(w)).norm() / static_cast<double>(w.size());
    worst = std::max(worst, v);
  });
  return worst;
}

}  // namespace alab::thermo
