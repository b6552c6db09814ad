#include "alab/slgroup.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace alab::grp {

namespace {

constexpr double kGapTol = 1e-13;

void fix_column_signs(Mat& q) {
  for (int c = 0; c < q.cols(); ++c) {
    for (int r = 0; r < q.rows(); ++r) {
      if (std::abs(q(r, c)) > 1e-14) {
        if (q(r, c) < 0) q.col(c) *= -1.0;
        break;
      }
    }
  }
}

// log of the wedge norm ‖v_1 ∧ ... ∧ v_j‖ for the columns of B
double log_wedge_norm(const Mat& b) {
  if (b.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(b);
  double s = 0;
  for (int i = 0; i < b.cols(); ++i) s += std::log(svd.singularValues()[i]);
  return s;
}

}  // namespace

std::vector<RootId> GroupShape::all_roots() const {
  std::vector<RootId> out;
  for (int i = 0; i < num_factors(); ++i)
    for (int j = 1; j < dims[i]; ++j) out.push_back({i, j});
  return out;
}

void GroupShape::validate() const {
  if (dims.empty()) throw std::invalid_argument("no factors");
  for (int d : dims)
    if (d < 2) throw std::invalid_argument("factor dimension must be >= 2");
  if (theta.empty()) throw std::invalid_argument("theta must be nonempty");
  for (const auto& r : theta) {
    if (r.factor < 0 || r.factor >= num_factors())
      throw std::invalid_argument("theta names a missing factor");
    if (r.index < 1 || r.index >= dims[r.factor])
      throw std::invalid_argument("theta root index out of range");
  }
}

GroupElement make_element(std::vector<Mat> mats) {
  GroupElement g;
  g.f = std::move(mats);
  for (auto& m : g.f) {
    if (m.rows() != m.cols()) throw std::invalid_argument("factor matrix not square");
    double det = m.determinant();
    if (!(det > 0))
      throw std::invalid_argument("factor determinant must be positive (SL normalization)");
    m /= std::pow(det, 1.0 / m.rows());
  }
  g.finv.reserve(g.f.size());
  for (const auto& m : g.f) g.finv.push_back(m.inverse());
  return g;
}

GroupElement identity_element(const GroupShape& shape) {
  std::vector<Mat> mats;
  for (int d : shape.dims) mats.push_back(Mat::Identity(d, d));
  return make_element(std::move(mats));
}

GroupElement mul(const GroupElement& a, const GroupElement& b) {
  GroupElement g;
  g.f.reserve(a.f.size());
  g.finv.reserve(a.f.size());
  for (size_t i = 0; i < a.f.size(); ++i) {
    g.f.push_back(a.f[i] * b.f[i]);
    g.finv.push_back(b.finv[i] * a.finv[i]);
  }
  return g;
}

GroupElement inverse(const GroupElement& g) {
  GroupElement h;
  h.f = g.finv;
  h.finv = g.f;
  return h;
}

EVector opposition(const EVector& v) {
  EVector out;
  out.f.reserve(v.f.size());
  for (const auto& a : v.f) out.f.push_back(-a.reverse());
  return out;
}

double root_value(const EVector& v, const RootId& r) {
  return v.f[r.factor][r.index - 1] - v.f[r.factor][r.index];
}

double weight_value(const EVector& v, const RootId& r) {
  return v.f[r.factor].head(r.index).sum();
}

Vec theta_coords(const GroupShape& shape, const EVector& v) {
  Vec out(shape.theta_dim());
  for (int s = 0; s < shape.theta_dim(); ++s) out[s] = weight_value(v, shape.theta[s]);
  return out;
}

Mat orthonormalize(const Mat& frame) {
  Eigen::HouseholderQR<Mat> qr(frame);
  Mat q = qr.householderQ() * Mat::Identity(frame.rows(), frame.cols());
  fix_column_signs(q);
  return q;
}

FlagPoint act(const GroupShape& shape, const GroupElement& g, const FlagPoint& x) {
  FlagPoint out;
  out.dual = x.dual;
  out.frames.reserve(x.frames.size());
  for (int s = 0; s < shape.theta_dim(); ++s) {
    const auto& r = shape.theta[s];
    out.frames.push_back(orthonormalize(g.f[r.factor] * x.frames[s]));
  }
  return out;
}

double flag_distance(const FlagPoint& x, const FlagPoint& y) {
  if (x.frames.size() != y.frames.size()) throw std::invalid_argument("flag type mismatch");
  double worst = 0;
  for (size_t s = 0; s < x.frames.size(); ++s) {
    Mat overlap = x.frames[s].transpose() * y.frames[s];
    Eigen::JacobiSVD<Mat> svd(overlap);
    double smin = svd.singularValues().minCoeff();
    smin = std::clamp(smin, -1.0, 1.0);
    worst = std::max(worst, std::acos(smin));
  }
  return worst;
}

namespace {

CartanData cartan_impl(const GroupShape& shape, const std::vector<Mat>& mats,
                       const std::vector<double>& logshift) {
  CartanData out;
  int nf = shape.num_factors();
  std::vector<Mat> left(nf), right(nf);
  out.a.f.resize(nf);
  for (int i = 0; i < nf; ++i) {
    Eigen::JacobiSVD<Mat> svd(mats[i], Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues().minCoeff() <= 0)
      throw std::runtime_error("SVD failure: vanishing singular value");
    int d = shape.dims[i];
    Vec a(d);
    for (int j = 0; j < d; ++j) a[j] = std::log(svd.singularValues()[j]) + logshift[i];
    a.array() -= a.mean();  // exact zero-sum (det = 1 up to rounding)
    out.a.f[i] = a;
    left[i] = svd.matrixU();
    right[i] = svd.matrixV();
  }
  out.theta_gaps.resize(shape.theta_dim());
  out.min_gap = std::numeric_limits<double>::infinity();
  for (int s = 0; s < shape.theta_dim(); ++s) {
    out.theta_gaps[s] = root_value(out.a, shape.theta[s]);
    out.min_gap = std::min(out.min_gap, out.theta_gaps[s]);
  }
  out.attractor_defined = out.min_gap > kGapTol;
  out.attractor.dual = false;
  out.dual_repeller.dual = true;
  for (int s = 0; s < shape.theta_dim(); ++s) {
    const auto& r = shape.theta[s];
    int d = shape.dims[r.factor];
    Mat u = left[r.factor].leftCols(r.index);
    fix_column_signs(u);
    out.attractor.frames.push_back(u);
    // top-(d-j) left singular frame of g^{-1} = smallest right singular
    // directions of g
    Mat w = right[r.factor].rightCols(d - r.index);
    fix_column_signs(w);
    out.dual_repeller.frames.push_back(w);
  }
  return out;
}

}  // namespace

CartanData cartan(const GroupShape& shape, const GroupElement& g) {
  return cartan_impl(shape, g.f, std::vector<double>(shape.num_factors(), 0.0));
}

ScaledProduct::ScaledProduct(const GroupShape& shape) {
  for (int d : shape.dims) m.push_back(Mat::Identity(d, d));
  logscale.assign(shape.num_factors(), 0.0);
}

void ScaledProduct::rmul(const GroupElement& g) {
  for (size_t i = 0; i < m.size(); ++i) {
    m[i] = m[i] * g.f[i];
    double peak = m[i].cwiseAbs().maxCoeff();
    if (peak > 1e120) {
      m[i] /= peak;
      logscale[i] += std::log(peak);
    }
  }
}

CartanData cartan(const GroupShape& shape, const ScaledProduct& p) {
  return cartan_impl(shape, p.m, p.logscale);
}

EVector jordan(const GroupShape& shape, const GroupElement& g) {
  EVector out;
  out.f.resize(shape.num_factors());
  for (int i = 0; i < shape.num_factors(); ++i) {
    Eigen::EigenSolver<Mat> es(g.f[i], /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigen-solver failure");
    Vec mods = es.eigenvalues().array().abs().log();
    std::sort(mods.data(), mods.data() + mods.size(), std::greater<double>());
    mods.array() -= mods.mean();
    out.f[i] = mods;
  }
  return out;
}

Mat ext_power(const Mat& g, int j) {
  int d = static_cast<int>(g.rows());
  if (j < 1 || j > d - 1) {
    if (j == d) {
      Mat m(1, 1);
      m(0, 0) = g.determinant();
      return m;
    }
    throw std::invalid_argument("exterior power index out of range");
  }
  // lexicographically ordered j-subsets of {0..d-1}
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur(j);
  auto rec = [&](auto&& self, int pos, int start) -> void {
    if (pos == j) {
      subsets.push_back(cur);
      return;
    }
    for (int v = start; v < d; ++v) {
      cur[pos] = v;
      self(self, pos + 1, v + 1);
    }
  };
  rec(rec, 0, 0);
  int n = static_cast<int>(subsets.size());
  Mat out(n, n);
  Mat minor(j, j);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      for (int r = 0; r < j; ++r)
        for (int c = 0; c < j; ++c) minor(r, c) = g(subsets[a][r], subsets[b][c]);
      out(a, b) = minor.determinant();
    }
  return out;
}

double eval(const GroupShape& shape, const Functional& phi, const EVector& v) {
  return phi(theta_coords(shape, v));
}

Vec busemann(const GroupShape& shape, const GroupElement& g, const FlagPoint& x) {
  if (x.dual) throw std::invalid_argument("busemann expects a primal flag");
  Vec out(shape.theta_dim());
  for (int s = 0; s < shape.theta_dim(); ++s) {
    const auto& r = shape.theta[s];
    const Mat& frame = x.frames[s];
    if (frame.cols() != r.index) throw std::invalid_argument("flag frame width mismatch");
    out[s] = log_wedge_norm(g.f[r.factor] * frame) - log_wedge_norm(frame);
  }
  return out;
}

GromovProduct gromov_product(const GroupShape& shape, const FlagPoint& x, const FlagPoint& y) {
  if (!x.dual || y.dual) throw std::invalid_argument("expected (dual, primal) flag pair");
  GromovProduct out;
  out.value = Vec(shape.theta_dim());
  for (int s = 0; s < shape.theta_dim(); ++s) {
    const auto& r = shape.theta[s];
    int d = shape.dims[r.factor];
    const Mat& w = x.frames[s];
    const Mat& p = y.frames[s];
    if (w.cols() + p.cols() != d) throw std::invalid_argument("flag pair dimensions mismatch");
    Mat full(d, d);
    full << w, p;
    double det = std::abs(full.determinant());
    double norm_corr = log_wedge_norm(w) + log_wedge_norm(p);
    if (det < 1e-14 * std::exp(norm_corr)) {
      out.value[s] = kNonTransverse;
      out.transverse = false;
    } else {
      out.value[s] = std::log(det) - norm_corr;
    }
  }
  return out;
}

BasinResult cartan_basin_test(const GroupShape& shape, const GroupElement& g, const FlagPoint& y,
                              double alpha) {
  CartanData cd = cartan(shape, g);
  if (!cd.attractor_defined)
    throw std::runtime_error("Cartan attractor undefined: vanishing theta-gap");
  BasinResult res;
  GromovProduct gp = gromov_product(shape, cd.dual_repeller, y);
  res.gromov = gp.value;
  res.inside = gp.transverse && (gp.value.minCoeff() > -alpha);
  Vec beta = busemann(shape, g, y);
  res.defect = (theta_coords(shape, cd.a) - beta).norm();
  return res;
}

namespace {

// dominant invariant j-plane of m, seeded from eigenvectors and polished by
// subspace iteration
std::optional<Mat> invariant_subspace(const Mat& m, int j) {
  int d = static_cast<int>(m.rows());
  Eigen::EigenSolver<Mat> es(m);
  if (es.info() != Eigen::Success) return std::nullopt;
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  auto mods = es.eigenvalues();
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return std::abs(mods[a]) > std::abs(mods[b]); });
  Mat seed(d, j);
  int col = 0;
  for (int t = 0; t < d && col < j; ++t) {
    int i = order[t];
    if (std::abs(mods[i].imag()) < 1e-12 * std::abs(mods[i])) {
      seed.col(col++) = es.eigenvectors().col(i).real();
    } else {
      // complex pair contributes a 2-plane; its conjugate appears adjacently
      seed.col(col++) = es.eigenvectors().col(i).real();
      if (col < j) seed.col(col++) = es.eigenvectors().col(i).imag();
      ++t;  // skip the conjugate
    }
  }
  Eigen::ColPivHouseholderQR<Mat> rank_check(seed);
  if (rank_check.rank() < j) return std::nullopt;
  Mat q = orthonormalize(seed);
  for (int it = 0; it < 100; ++it) {
    Mat next = orthonormalize(m * q);
    double residual = (m * next - next * (next.transpose() * m * next)).norm();
    q = next;
    if (residual < 1e-12 * m.norm()) break;
  }
  return q;
}

}  // namespace

ProximalityReport proximality_report(const GroupShape& shape, const GroupElement& g) {
  ProximalityReport rep;
  EVector lam = jordan(shape, g);
  rep.eigen_gaps.resize(shape.theta_dim());
  rep.proximal = true;
  for (int s = 0; s < shape.theta_dim(); ++s) {
    rep.eigen_gaps[s] = root_value(lam, shape.theta[s]);
    if (rep.eigen_gaps[s] <= kGapTol) rep.proximal = false;
  }
  if (!rep.proximal) return rep;

  rep.attracting.dual = false;
  rep.repelling.dual = true;
  for (int s = 0; s < shape.theta_dim(); ++s) {
    const auto& r = shape.theta[s];
    int d = shape.dims[r.factor];
    auto plus = invariant_subspace(g.f[r.factor], r.index);
    auto minus = invariant_subspace(g.finv[r.factor], d - r.index);
    if (!plus || !minus) {
      rep.proximal = false;
      return rep;
    }
    rep.attracting.frames.push_back(*plus);
    rep.repelling.frames.push_back(*minus);
  }
  GromovProduct gp = gromov_product(shape, rep.repelling, rep.attracting);
  rep.r = gp.transverse ? -gp.value.minCoeff() : std::numeric_limits<double>::infinity();
  rep.contraction = 0;
  for (double gap : rep.eigen_gaps) rep.contraction = std::max(rep.contraction, std::exp(-gap));
  CartanData cd = cartan(shape, g);
  Vec defect = theta_coords(shape, cd.a) - theta_coords(shape, lam) - gp.value;
  rep.defect = gp.transverse ? defect.norm() : std::numeric_limits<double>::infinity();
  return rep;
}

double quint_defect(const GroupShape& shape, const GroupElement& g, const GroupElement& h) {
  CartanData ch = cartan(shape, h);
  if (!ch.attractor_defined)
    throw std::runtime_error("Cartan attractor of h undefined: vanishing theta-gap");
  CartanData cgh = cartan(shape, mul(g, h));
  Vec beta = busemann(shape, g, ch.attractor);
  return (theta_coords(shape, cgh.a) - theta_coords(shape, ch.a) - beta).norm();
}

}  // namespace alab::grp
