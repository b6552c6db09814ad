#include "alab/patterson.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace alab::patterson {

namespace {

// φ(ι v) through the full Cartan vector (a(g^{-1}) = ι a(g))
double eval_opposed(const grp::GroupShape& shape, const Functional& phi, const grp::EVector& a) {
  return grp::eval(shape, phi, grp::opposition(a));
}

}  // namespace

AtomicMeasure patterson_sum(const RepContext& rep, const Functional& phi, double s, int L,
                            bool dual) {
  AtomicMeasure out;
  out.s = s;
  out.radius = L;
  out.dual = dual;
  const auto& shape = rep.shape();
  if (L == 0) {
    // empty-product guard: single identity atom
    Atom a;
    a.word = ReducedWord{rep.rank(), {}};
    a.weight = 1.0;
    a.phi_a = 0.0;
    a.flag.dual = dual;
    for (const auto& r : shape.theta) {
      int d = shape.dims[r.factor];
      int width = dual ? d - r.index : r.index;
      a.flag.frames.push_back(Mat::Identity(d, d).leftCols(width));
    }
    out.atoms.push_back(std::move(a));
    out.tail_mass = 1.0;
    return out;
  }

  double total = 0, tail = 0;
  std::vector<int> word;
  std::vector<grp::GroupElement> stack{grp::identity_element(shape)};
  auto visit = [&](const grp::GroupElement& g) {
    grp::CartanData cd = grp::cartan(shape, g);
    if (!cd.attractor_defined) {
      ++out.skipped;
      return;
    }
    Atom a;
    a.word = ReducedWord{rep.rank(), word};
    a.phi_a = dual ? eval_opposed(shape, phi, cd.a) : grp::eval(shape, phi, cd.a);
    a.weight = std::exp(-s * a.phi_a);
    if (dual) {
      // atoms of the dual measure live at U_{ιθ}(ρ(γ)), the dual attractor
      // of the inverse element
      a.flag = grp::cartan(shape, grp::inverse(g)).dual_repeller;
    } else {
      a.flag = cd.attractor;
    }
    total += a.weight;
    if (static_cast<int>(word.size()) == L) tail += a.weight;
    out.atoms.push_back(std::move(a));
  };
  // identity atom: a = 0, attractor undefined; the construction skips it and
  // counts it (consistent with the gap requirement)
  ++out.skipped;
  auto rec = [&](auto&& self) -> void {
    if (!word.empty()) visit(stack.back());
    if (static_cast<int>(word.size()) == L) return;
    int forbidden = word.empty() ? 0 : -word.back();
    for (int l = -rep.rank(); l <= rep.rank(); ++l) {
      if (l == 0 || l == forbidden) continue;
      word.push_back(l);
      stack.push_back(grp::mul(stack.back(), rep.letter(l)));
      self(self);
      stack.pop_back();
      word.pop_back();
    }
  };
  rec(rec);
  for (auto& a : out.atoms) a.weight /= total;
  out.tail_mass = tail / total;
  return out;
}

std::vector<QuasiInvarianceCell> quasi_invariance_test(const RepContext& rep,
                                                       const Functional& phi,
                                                       std::span<const double> s_grid,
                                                       std::span<const int> L_grid, int bin_len) {
  const auto& shape = rep.shape();
  int k = rep.rank();
  int L_top = *std::max_element(L_grid.begin(), L_grid.end());
  if (words::ball_size(k, L_top) > words::kDefaultBallCap)
    throw resource_limit_error("quasi-invariance ball exceeds the resource cap");

  // bins = reduced words of length bin_len, in enumeration order
  std::vector<ReducedWord> bins;
  words::enumerate_ball(k, bin_len, [&](const ReducedWord& w) {
    if (w.length() == bin_len) bins.push_back(w);
  });
  auto bin_of = [&](const std::vector<int>& letters) -> int {
    if (static_cast<int>(letters.size()) < bin_len) return -1;
    for (size_t b = 0; b < bins.size(); ++b)
      if (std::equal(bins[b].letters.begin(), bins[b].letters.end(), letters.begin()))
        return static_cast<int>(b);
    return -1;
  };

  // test elements: the generators and their inverses
  std::vector<int> etas;
  for (int l = 1; l <= k; ++l) {
    etas.push_back(l);
    etas.push_back(-l);
  }

  // One sweep of the largest ball caches, per word: length, φ(a), bin id,
  // and per η the bin id of η·γ and the Busemann value φ(β_θ(ρ(η)^{-1}, U_θ(γ))).
  struct Row {
    int len;
    double phi_a;
    int bin;
    std::vector<int> bin_eta;
    std::vector<double> beta_eta;
  };
  std::vector<Row> rows;
  std::vector<int> word;
  std::vector<grp::GroupElement> stack{grp::identity_element(shape)};
  auto rec = [&](auto&& self) -> void {
    if (!word.empty()) {
      grp::CartanData cd = grp::cartan(shape, stack.back());
      if (cd.attractor_defined) {
        Row r;
        r.len = static_cast<int>(word.size());
        r.phi_a = grp::eval(shape, phi, cd.a);
        r.bin = bin_of(word);
        r.bin_eta.reserve(etas.size());
        r.beta_eta.reserve(etas.size());
        for (int e : etas) {
          // reduced product η·γ: prefix after cancellation
          std::vector<int> prod;
          prod.reserve(word.size() + 1);
          prod.push_back(e);
          for (int l : word) {
            if (!prod.empty() && prod.back() == -l)
              prod.pop_back();
            else
              prod.push_back(l);
          }
          r.bin_eta.push_back(bin_of(prod));
          Vec beta = grp::busemann(shape, grp::inverse(rep.letter(e)), cd.attractor);
          r.beta_eta.push_back(phi.c.dot(beta));
        }
        rows.push_back(std::move(r));
      }
    }
    if (static_cast<int>(word.size()) == L_top) return;
    int forbidden = word.empty() ? 0 : -word.back();
    for (int l = -k; l <= k; ++l) {
      if (l == 0 || l == forbidden) continue;
      word.push_back(l);
      stack.push_back(grp::mul(stack.back(), rep.letter(l)));
      self(self);
      stack.pop_back();
      word.pop_back();
    }
  };
  rec(rec);

  std::vector<QuasiInvarianceCell> cells;
  for (double s : s_grid) {
    for (int L : L_grid) {
      double total = 0;
      for (const auto& r : rows)
        if (r.len <= L) total += std::exp(-s * r.phi_a);
      for (size_t ei = 0; ei < etas.size(); ++ei) {
        QuasiInvarianceCell cell;
        cell.s = s;
        cell.radius = L;
        cell.test_index = static_cast<int>(ei);
        std::vector<double> lhs(bins.size(), 0.0), rhs(bins.size(), 0.0);
        for (const auto& r : rows) {
          if (r.len > L) continue;
          double w = std::exp(-s * r.phi_a) / total;
          if (r.bin_eta[ei] >= 0) lhs[r.bin_eta[ei]] += w;
          if (r.bin >= 0) rhs[r.bin] += w * std::exp(-r.beta_eta[ei]);
        }
        cell.bin_error.resize(bins.size());
        cell.max_error = 0;
        for (size_t b = 0; b < bins.size(); ++b) {
          cell.bin_error[b] = std::abs(lhs[b] - rhs[b]);
          cell.max_error = std::max(cell.max_error, cell.bin_error[b]);
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

ShadowStatistics shadow_statistics(const RepContext& rep, const Functional& phi,
                                   const AtomicMeasure& nu, double alpha, double delta, int L,
                                   int max_gamma, std::uint64_t seed) {
  const auto& shape = rep.shape();
  // candidate γ with |γ| in [L/2, L]
  std::vector<ReducedWord> gammas;
  words::enumerate_ball(rep.rank(), L, [&](const ReducedWord& w) {
    if (w.length() >= (L + 1) / 2 && w.length() <= L) gammas.push_back(w);
  });
  auto rng = seeded_rng(seed);
  std::shuffle(gammas.begin(), gammas.end(), rng);
  if (static_cast<int>(gammas.size()) > max_gamma) gammas.resize(max_gamma);

  ShadowStatistics out;
  for (const auto& g : gammas) {
    grp::GroupElement ge = rep.eval_span(g.letters);
    grp::GroupElement ginv = grp::inverse(ge);
    grp::CartanData cd = grp::cartan(shape, ge);
    if (!cd.attractor_defined) continue;
    // shadow membership: x in γ B_{θ,α}(γ) iff G(U_{ιθ}(γ^{-1}), γ^{-1}x) > -α
    double mass = 0;
    for (const auto& atom : nu.atoms) {
      if (atom.word.letters == g.letters) continue;
      grp::FlagPoint moved = grp::act(shape, ginv, atom.flag);
      grp::GromovProduct gp = grp::gromov_product(shape, cd.dual_repeller, moved);
      if (gp.transverse && gp.value.minCoeff() > -alpha) mass += atom.weight;
    }
    if (mass <= 0) {
      ++out.empty_shadows;
      continue;
    }
    double x = -delta * grp::eval(shape, phi, cd.a);
    out.xs.push_back(x);
    out.ys.push_back(std::log(mass));
  }
  out.used = static_cast<int>(out.xs.size());
  if (out.used >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < out.used; ++i) {
      sx += out.xs[i];
      sy += out.ys[i];
      sxx += out.xs[i] * out.xs[i];
      sxy += out.xs[i] * out.ys[i];
    }
    double denom = out.used * sxx - sx * sx;
    out.slope = (out.used * sxy - sx * sy) / denom;
    out.intercept = (sy - out.slope * sx) / out.used;
    double rmin = std::numeric_limits<double>::infinity(), rmax = -rmin;
    for (int i = 0; i < out.used; ++i) {
      double r = out.ys[i] - (out.slope * out.xs[i] + out.intercept);
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
    }
    out.spread = rmax - rmin;
  }
  return out;
}

CoveringAudit covering_audit(const RepContext& rep, double alpha, int t, int target_depth,
                             int target_samples, std::uint64_t seed) {
  const auto& shape = rep.shape();
  // targets: limit flags along random rays at target_depth
  std::vector<grp::FlagPoint> targets;
  for (int i = 0; i < target_samples; ++i) {
    ReducedWord ray = words::random_ray(rep.rank(), target_depth, splitmix64(seed + i));
    targets.push_back(rep::limit_flag(rep, ray, target_depth).flag);
  }
  // covering family: γ with t <= |γ| <= t+1
  struct Cover {
    grp::GroupElement ginv;
    grp::FlagPoint repeller;
  };
  std::vector<Cover> covers;
  words::enumerate_ball(rep.rank(), t + 1, [&](const ReducedWord& w) {
    if (w.length() < t) return;
    grp::GroupElement ge = rep.eval_span(w.letters);
    grp::CartanData cd = grp::cartan(shape, ge);
    if (!cd.attractor_defined) return;
    covers.push_back({grp::inverse(ge), cd.dual_repeller});
  });
  CoveringAudit out;
  std::vector<int> counts(targets.size(), 0);
  for (size_t i = 0; i < targets.size(); ++i) {
    for (const auto& c : covers) {
      grp::FlagPoint moved = grp::act(shape, c.ginv, targets[i]);
      grp::GromovProduct gp = grp::gromov_product(shape, c.repeller, moved);
      if (gp.transverse && gp.value.minCoeff() > -alpha) ++counts[i];
    }
  }
  out.max_multiplicity = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  out.histogram.assign(out.max_multiplicity + 1, 0);
  int covered = 0;
  for (int c : counts) {
    ++out.histogram[c];
    if (c > 0) ++covered;
  }
  out.covered_fraction = targets.empty() ? 0 : static_cast<double>(covered) / targets.size();
  return out;
}

BowenMargulisSample bowen_margulis_sample(const RepContext& rep, const Functional& phi,
                                          const AtomicMeasure& nu, const AtomicMeasure& nubar,
                                          double delta, int n, std::uint64_t seed) {
  const auto& shape = rep.shape();
  auto rng = seeded_rng(seed);
  std::vector<double> wnu, wbar;
  for (const auto& a : nu.atoms) wnu.push_back(a.weight);
  for (const auto& a : nubar.atoms) wbar.push_back(a.weight);
  std::discrete_distribution<int> pick_nu(wnu.begin(), wnu.end());
  std::discrete_distribution<int> pick_bar(wbar.begin(), wbar.end());

  BowenMargulisSample out;
  int attempts = 0;
  while (static_cast<int>(out.pairs.size()) < n) {
    ++attempts;
    if (attempts > 20 * n && out.rejected > attempts / 2)
      throw std::runtime_error("rejection rate above 50%: insufficient separation");
    int i = pick_bar(rng);
    int j = pick_nu(rng);
    grp::GromovProduct gp = grp::gromov_product(shape, nubar.atoms[i].flag, nu.atoms[j].flag);
    if (!gp.transverse) {
      ++out.rejected;
      continue;
    }
    double bracket = phi.c.dot(gp.value);
    out.pairs.push_back({i, j});
    out.weights.push_back(std::exp(-delta * bracket));
  }
  double sw = std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
  double sw2 = 0;
  for (double w : out.weights) sw2 += w * w;
  out.ess = sw * sw / sw2;
  return out;
}

}  // namespace alab::patterson
