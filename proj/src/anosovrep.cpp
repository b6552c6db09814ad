#include "alab/anosovrep.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace alab::rep {

RepContext::RepContext(GroupShape shape, int rank, std::vector<GroupElement> generators)
    : shape_(std::move(shape)), rank_(rank) {
  shape_.validate();
  if (static_cast<int>(generators.size()) != rank)
    throw std::invalid_argument("expected one generator image per free generator");
  gens_.reserve(2 * rank);
  for (const auto& g : generators) gens_.push_back(g);
  for (int i = 0; i < rank; ++i) gens_.push_back(grp::inverse(generators[i]));
}

const GroupElement& RepContext::letter(int l) const {
  return gens_[sft::letter_to_symbol(rank_, l)];
}

const GroupElement& RepContext::eval(const ReducedWord& w) const {
  auto it = cache_.find(w.letters);
  if (it != cache_.end()) return it->second;
  if (cache_.size() > 200000) cache_.clear();  // bulk sweeps use eval_span instead
  GroupElement g = eval_span(w.letters);
  return cache_.emplace(w.letters, std::move(g)).first->second;
}

GroupElement RepContext::eval_span(std::span<const int> letters) const {
  GroupElement g = grp::identity_element(shape_);
  for (int l : letters) g = grp::mul(g, letter(l));
  return g;
}

RepContext RepContext::conjugated(const GroupElement& c) const {
  std::vector<GroupElement> gens;
  GroupElement cinv = grp::inverse(c);
  for (int i = 0; i < rank_; ++i) gens.push_back(grp::mul(grp::mul(c, gens_[i]), cinv));
  return RepContext(shape_, rank_, gens);
}

RepContext RepContext::inverted() const {
  std::vector<GroupElement> gens;
  for (int i = 0; i < rank_; ++i) gens.push_back(grp::inverse(gens_[i]));
  return RepContext(shape_, rank_, gens);
}

namespace {

// depth-first sweep over reduced words with a product stack
void sweep_ball(const RepContext& rep, int L,
                const std::function<void(std::span<const int>, const GroupElement&)>& visit) {
  std::vector<int> word;
  std::vector<GroupElement> stack{grp::identity_element(rep.shape())};
  auto rec = [&](auto&& self) -> void {
    visit(word, stack.back());
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
}

}  // namespace

GapProfile gap_profile(const RepContext& rep, int L) {
  GapProfile out;
  out.min_gap.assign(L, std::numeric_limits<double>::infinity());
  sweep_ball(rep, L, [&](std::span<const int> w, const GroupElement& g) {
    if (w.empty()) return;
    CartanData cd = grp::cartan(rep.shape(), g);
    out.min_gap[w.size() - 1] = std::min(out.min_gap[w.size() - 1], cd.min_gap);
  });
  // least-squares affine fit of the envelope: min_gap(n) ≈ mu n - c
  int n = L;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 1; i <= n; ++i) {
    sx += i;
    sy += out.min_gap[i - 1];
    sxx += static_cast<double>(i) * i;
    sxy += i * out.min_gap[i - 1];
  }
  double denom = n * sxx - sx * sx;
  out.mu = (n * sxy - sx * sy) / denom;
  out.c = -(sy - out.mu * sx) / n;
  double rss = 0;
  for (int i = 1; i <= n; ++i) {
    double r = out.min_gap[i - 1] - (out.mu * i - out.c);
    rss += r * r;
  }
  if (n > 2) {
    out.mu_stderr = std::sqrt(rss / (n - 2) / (sxx - sx * sx / n));
    out.certified = out.mu > 0 && out.mu - 1.96 * out.mu_stderr > 0;
  } else {
    out.certified = out.mu > 0;
  }
  return out;
}

namespace {

// ξ^{ιθ} flags come from the same SVD data: top (d-j) left singular frames.
FlagPoint dual_attractor(const GroupShape& shape, const std::vector<Mat>& mats) {
  FlagPoint f;
  f.dual = true;
  for (int s = 0; s < shape.theta_dim(); ++s) {
    const auto& r = shape.theta[s];
    int d = shape.dims[r.factor];
    Eigen::JacobiSVD<Mat> svd(mats[r.factor], Eigen::ComputeFullU);
    f.frames.push_back(grp::orthonormalize(svd.matrixU().leftCols(d - r.index)));
  }
  return f;
}

LimitFlag limit_flag_impl(const RepContext& rep, const ReducedWord& ray, int depth, bool dual) {
  if (depth < 2) throw std::invalid_argument("depth must be >= 2");
  if (ray.length() < depth) throw std::invalid_argument("ray shorter than requested depth");
  grp::ScaledProduct prod(rep.shape());
  FlagPoint prev, cur;
  for (int n = 1; n <= depth; ++n) {
    prod.rmul(rep.letter(ray.letters[n - 1]));
    if (n >= depth - 1) {
      CartanData cd = grp::cartan(rep.shape(), prod);
      if (!cd.attractor_defined)
        throw std::runtime_error("attractor undefined at prefix " + std::to_string(n));
      FlagPoint f = dual ? dual_attractor(rep.shape(), prod.m) : cd.attractor;
      if (n == depth - 1)
        prev = f;
      else
        cur = f;
    }
  }
  LimitFlag out;
  out.flag = cur;
  out.depth = depth;
  out.cauchy = grp::flag_distance(prev, cur);
  return out;
}

}  // namespace

LimitFlag limit_flag(const RepContext& rep, const ReducedWord& ray, int depth) {
  return limit_flag_impl(rep, ray, depth, false);
}

LimitFlag limit_flag_dual(const RepContext& rep, const ReducedWord& ray, int depth) {
  return limit_flag_impl(rep, ray, depth, true);
}

TransversalityAudit transversality_audit(const RepContext& rep, int samples, int depth,
                                         std::uint64_t seed) {
  TransversalityAudit out;
  out.min_value = std::numeric_limits<double>::infinity();
  std::vector<ReducedWord> rays;
  rays.reserve(samples);
  for (int i = 0; i < samples; ++i)
    rays.push_back(words::random_ray(rep.rank(), depth, splitmix64(seed + i)));
  std::vector<FlagPoint> primal(samples), dual(samples);
  for (int i = 0; i < samples; ++i) {
    primal[i] = limit_flag(rep, rays[i], depth).flag;
    dual[i] = limit_flag_dual(rep, rays[i], depth).flag;
  }
  for (int i = 0; i < samples; ++i)
    for (int j = 0; j < samples; ++j) {
      if (rays[i] == rays[j]) continue;
      grp::GromovProduct gp = grp::gromov_product(rep.shape(), dual[i], primal[j]);
      if (!gp.transverse) {
        out.violation = true;
        out.argmin = {i, j};
        out.min_value = kNonTransverse;
        return out;
      }
      double v = gp.value.minCoeff();
      if (v < out.min_value) {
        out.min_value = v;
        out.argmin = {i, j};
      }
    }
  return out;
}

LimitConeSample limit_cone(const RepContext& rep, int L) {
  LimitConeSample out;
  words::conjugacy_classes(rep.rank(), L, [&](const words::ConjClass& c) {
    if (!c.primitive) return;
    Vec lam = jordan_theta(rep, c.rep);
    double n = lam.norm();
    if (n < 1e-14) return;
    out.directions.push_back(lam / n);
    out.reps.push_back(c.rep);
  });
  if (rep.theta_dim() == 2 && !out.directions.empty()) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& d : out.directions) {
      double ang = std::atan2(d[1], d[0]);
      lo = std::min(lo, ang);
      hi = std::max(hi, ang);
    }
    out.angle_interval = {lo, hi};
    // extreme rays of a planar cone are the angular extremes
    for (const auto& d : out.directions) {
      double ang = std::atan2(d[1], d[0]);
      if (ang == lo || ang == hi) out.extreme_rays.push_back(d);
    }
  }
  return out;
}

JordanCartanGap jordan_cartan_gap(const RepContext& rep, int L, bool include_non_cyclic) {
  JordanCartanGap out;
  out.include_non_cyclic = include_non_cyclic;
  out.running_sup.assign(L, 0.0);
  sweep_ball(rep, L, [&](std::span<const int> w, const GroupElement& g) {
    if (w.empty()) return;
    if (!include_non_cyclic && w.front() == -w.back()) return;
    Vec a = grp::theta_coords(rep.shape(), grp::cartan(rep.shape(), g).a);
    Vec lam = grp::theta_coords(rep.shape(), grp::jordan(rep.shape(), g));
    double gap = (a - lam).norm();
    auto& slot = out.running_sup[w.size() - 1];
    slot = std::max(slot, gap);
  });
  for (int n = 1; n < L; ++n)
    out.running_sup[n] = std::max(out.running_sup[n], out.running_sup[n - 1]);
  return out;
}

sft::Potential ledrappier_potential(const RepContext& rep, int m, double mu_hint) {
  if (m < 2) throw std::invalid_argument("potential depth must be >= 2");
  const GroupShape& shape = rep.shape();
  int k = rep.rank();
  sft::Sft coding = sft::Sft::free_group(k);
  sft::Potential pot(coding, m + 1, shape.theta_dim());
  pot.errors().assign(pot.size(), 0.f);
  double tail_factor = mu_hint > 0 ? 1.0 / (1.0 - std::exp(-mu_hint)) : 1.0;

  sft::BlockIndex suffixes(coding, m);
  // DFS over suffix words (x_1..x_m) with a product stack; at depth m-1 and m
  // extract attractors, then write all compatible (m+1)-blocks.
  std::vector<int> suffix;
  std::vector<GroupElement> stack{grp::identity_element(shape)};
  FlagPoint flag_prev;
  std::vector<int> block(m + 1);

  auto emit = [&](const FlagPoint& flag, const FlagPoint& prev) {
    for (int s0 = 0; s0 < 2 * k; ++s0) {
      if (!coding.allowed(s0, suffix[0])) continue;
      block[0] = s0;
      for (int t = 0; t < m; ++t) block[t + 1] = suffix[t];
      std::uint64_t r = pot.blocks().rank(block.data());
      const GroupElement& g0 = rep.symbol(s0);
      Vec v = grp::busemann(shape, g0, flag);
      Vec vprev = grp::busemann(shape, g0, prev);
      for (int i = 0; i < shape.theta_dim(); ++i) pot.data(r)[i] = v[i];
      double step = (v - vprev).cwiseAbs().maxCoeff();
      pot.errors()[r] = static_cast<float>(step * tail_factor);
    }
  };

  auto rec = [&](auto&& self) -> void {
    int depth = static_cast<int>(suffix.size());
    if (depth == m - 1) {
      CartanData cd = grp::cartan(shape, stack.back());
      if (!cd.attractor_defined)
        throw std::runtime_error("attractor undefined inside table construction");
      flag_prev = cd.attractor;
    }
    if (depth == m) {
      CartanData cd = grp::cartan(shape, stack.back());
      if (!cd.attractor_defined)
        throw std::runtime_error("attractor undefined inside table construction");
      emit(cd.attractor, flag_prev);
      return;
    }
    FlagPoint saved = flag_prev;
    for (int s = 0; s < 2 * k; ++s) {
      if (!suffix.empty() && !coding.allowed(suffix.back(), s)) continue;
      suffix.push_back(s);
      stack.push_back(grp::mul(stack.back(), rep.symbol(s)));
      self(self);
      stack.pop_back();
      suffix.pop_back();
      flag_prev = saved;
    }
  };
  rec(rec);
  return pot;
}

Vec jordan_theta(const RepContext& rep, const ReducedWord& w) {
  return grp::theta_coords(rep.shape(), grp::jordan(rep.shape(), rep.eval_span(w.letters)));
}

Vec cartan_theta(const RepContext& rep, const ReducedWord& w) {
  CartanData cd = grp::cartan(rep.shape(), rep.eval_span(w.letters));
  return grp::theta_coords(rep.shape(), cd.a);
}

}  // namespace alab::rep
