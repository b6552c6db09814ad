#include "alab/critical.hpp"

#include <algorithm>
#include <cmath>

namespace alab::critical {

namespace {

// φ must be strictly positive on the sampled limit cone (interior of the
// dual cone); sampled at modest depth.
void check_dual_cone(const RepContext& rep, const Functional& phi) {
  rep::LimitConeSample cone = rep::limit_cone(rep, 6);
  for (const auto& d : cone.directions)
    if (phi(d) <= 0)
      throw std::invalid_argument(
          "functional is not strictly positive on the limit cone (outside the dual-cone interior)");
}

}  // namespace

double entropy_of_functional(const RepContext& rep, const Functional& phi, const Potential& F) {
  check_dual_cone(rep, phi);
  return thermo::entropy_root(F.contracted(phi.c));
}

double entropy_of_functional(const RepContext& rep, const Functional& phi, int depth) {
  return entropy_of_functional(rep, phi, rep::ledrappier_potential(rep, depth));
}

CountingExponent critical_exponent_count(const RepContext& rep, const Functional& phi, int L) {
  check_dual_cone(rep, phi);
  CountingExponent out;
  out.ball_radius = L;
  std::vector<double> values;
  if (words::ball_size(rep.rank(), L) > words::kDefaultBallCap)
    throw resource_limit_error("counting ball exceeds the resource cap");
  {
    // sweep with product stack, collecting φ(a_θ(ρ(γ)))
    std::vector<int> word;
    std::vector<grp::GroupElement> stack{grp::identity_element(rep.shape())};
    auto rec = [&](auto&& self) -> void {
      if (!word.empty()) {
        grp::CartanData cd = grp::cartan(rep.shape(), stack.back());
        values.push_back(phi(grp::theta_coords(rep.shape(), cd.a)));
      }
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
  std::sort(values.begin(), values.end());
  double vmax = values.back();
  double lo = 0.4 * vmax, hi = 0.8 * vmax;
  int grid_n = 25;
  out.grid.resize(grid_n);
  out.log_counts.resize(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    double t = lo + (hi - lo) * i / (grid_n - 1);
    auto it = std::upper_bound(values.begin(), values.end(), t);
    auto count = static_cast<double>(it - values.begin());
    out.grid[i] = t;
    out.log_counts[i] = std::log(count);
  }
  auto top_count = static_cast<double>(values.end() -
                                       std::upper_bound(values.begin(), values.end(), hi));
  if (top_count < 20) throw std::runtime_error("too few samples in the top counting window");
  // least squares slope of log N(t) against t
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < grid_n; ++i) {
    sx += out.grid[i];
    sy += out.log_counts[i];
    sxx += out.grid[i] * out.grid[i];
    sxy += out.grid[i] * out.log_counts[i];
  }
  double denom = grid_n * sxx - sx * sx;
  out.delta = (grid_n * sxy - sx * sy) / denom;
  double rss = 0;
  for (int i = 0; i < grid_n; ++i) {
    double r = out.log_counts[i] - (out.delta * out.grid[i] + (sy - out.delta * sx) / grid_n);
    rss += r * r;
  }
  out.stderr_ = std::sqrt(rss / std::max(1, grid_n - 2) / (sxx - sx * sx / grid_n));
  return out;
}

CriticalPoint critical_point(const RepContext& rep, const Functional& direction,
                             const Potential& F) {
  double h = entropy_of_functional(rep, direction, F);
  CriticalPoint cp;
  cp.phi.c = direction.c * h;  // homogeneity: h_{hψ} = h_ψ/h = 1
  double h_check = thermo::entropy_root(F.contracted(cp.phi.c));
  cp.h_residual = std::abs(h_check - 1.0);
  thermo::GibbsChain chain = thermo::gibbs_measure(F.contracted(cp.phi.c).scaled(-1.0));
  cp.gibbs_mean = chain.integrate(F);
  cp.u_phi = cp.gibbs_mean / cp.gibbs_mean.norm();
  return cp;
}

std::vector<CriticalPoint> manhattan_hypersurface(const RepContext& rep,
                                                  const std::vector<Functional>& directions,
                                                  const Potential& F) {
  std::vector<CriticalPoint> out;
  out.reserve(directions.size());
  for (const auto& d : directions) out.push_back(critical_point(rep, d, F));
  return out;
}

Intersection dynamical_intersection(const RepContext& rep, const CriticalPoint& phi,
                                    const Functional& psi, const Potential& F, int horizon) {
  Intersection out;
  thermo::GibbsChain chain = thermo::gibbs_measure(F.contracted(phi.phi.c).scaled(-1.0));
  Vec mean = chain.integrate(F);
  double denom = phi.phi(mean);
  out.gibbs = psi(mean) / denom;

  // period route: average ψ(λ)/φ(λ) over classes with φ(λ) below a cut that
  // the enumerated horizon saturates
  struct Entry {
    double phival, ratio;
  };
  std::vector<Entry> entries;
  double min_at_horizon = std::numeric_limits<double>::infinity();
  words::conjugacy_classes(rep.rank(), horizon, [&](const words::ConjClass& c) {
    if (!c.primitive) return;
    Vec lam = rep::jordan_theta(rep, c.rep);
    double pv = phi.phi(lam);
    if (c.rep.length() == horizon) min_at_horizon = std::min(min_at_horizon, pv);
    if (pv > 1e-14) entries.push_back({pv, psi(lam) / pv});
  });
  std::vector<double> ests;
  for (double frac : {0.7, 0.85, 1.0}) {
    double cut = 0.9 * frac * min_at_horizon;
    double acc = 0;
    int cnt = 0;
    for (const auto& e : entries)
      if (e.phival <= cut) {
        acc += e.ratio;
        ++cnt;
      }
    if (cnt > 0) ests.push_back(acc / cnt);
  }
  out.periods = ests.back();
  out.period_band = *std::max_element(ests.begin(), ests.end()) -
                    *std::min_element(ests.begin(), ests.end());

  // Gibbs-route inequality when ψ is positive on the cone
  bool psi_positive = true;
  rep::LimitConeSample cone = rep::limit_cone(rep, 6);
  for (const auto& d : cone.directions)
    if (psi(d) <= 0) psi_positive = false;
  if (psi_positive) {
    double h_psi = thermo::entropy_root(F.contracted(psi.c));
    out.inequality_ok = out.gibbs >= 1.0 / h_psi - 1e-9;  // h_φ = 1 at a critical point
  }
  return out;
}

TangencyAudit tangency_audit(const RepContext& rep, const CriticalPoint& phi, double step,
                             const Potential& F) {
  if (rep.theta_dim() != 2)
    throw std::invalid_argument("tangency audit requires a 2-dimensional E_theta");
  double t0 = std::atan2(phi.phi.c[1], phi.phi.c[0]);
  auto curve_point = [&](double t) {
    Functional dir;
    dir.c = Vec(2);
    dir.c << std::cos(t), std::sin(t);
    double h = thermo::entropy_root(F.contracted(dir.c));
    return Vec(h * dir.c);
  };
  auto tangent_at = [&](double h) {
    Vec tp = curve_point(t0 + h);
    Vec tm = curve_point(t0 - h);
    Vec tan = (tp - tm) / (2 * h);
    return Vec(tan / tan.norm());
  };
  Vec tan_h = tangent_at(step);
  Vec tan_h2 = tangent_at(step / 2);

  Vec w = phi.gibbs_mean;  // I_φ(ψ) ∝ ψ·w, kernel = w-perp in coefficient space
  Vec ker(2);
  ker << -w[1], w[0];
  ker /= ker.norm();

  TangencyAudit out;
  out.angle = std::acos(std::clamp(std::abs(tan_h2.dot(ker)), 0.0, 1.0));
  out.u_annihilation = std::abs(tan_h2.dot(phi.u_phi));
  double richardson = std::acos(std::clamp(std::abs(tan_h.dot(tan_h2)), 0.0, 1.0));
  out.step_warning = richardson > 1e-3;
  return out;
}

std::vector<Vec> annihilator_estimate(const RepContext& rep, int L) {
  rep::LimitConeSample cone = rep::limit_cone(rep, L);
  int dim = rep.theta_dim();
  Mat m(static_cast<int>(cone.directions.size()), dim);
  for (size_t i = 0; i < cone.directions.size(); ++i) m.row(static_cast<int>(i)) = cone.directions[i];
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  std::vector<Vec> out;
  double smax = svd.singularValues()[0];
  for (int i = 0; i < dim; ++i)
    if (svd.singularValues()[i] < 1e-8 * smax) out.push_back(svd.matrixV().col(i));
  return out;
}

}  // namespace alab::critical
