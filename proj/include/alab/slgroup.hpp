#pragma once

// Structure theory of G = ∏_i SL(d_i,R): Cartan/Jordan projections,
// opposition involution, exterior powers, Busemann cocycle read off norms,
// Gromov products, Cartan attractors/basins and proximality diagnostics.
//
// Conventions. The Cartan space of a factor is the traceless part of R^d in
// descending coordinates; simple roots are α_j(v) = v_{j-1} - v_j (1-based j,
// 1 <= j <= d-1) and fundamental weights ϖ_j(v) = v_0 + ... + v_{j-1}.
// A vector of E_θ is handled through its ϖ-coordinates (one per σ ∈ θ, in the
// order of GroupShape::theta); functionals on E_θ are coefficient vectors in
// that same basis. Logs are natural (base q = e).

#include <optional>
#include <vector>

#include "alab/common.hpp"

namespace alab::grp {

struct RootId {
  int factor = 0;
  int index = 1;  // simple root α_index, 1 <= index <= dim-1
  bool operator==(const RootId&) const = default;
};

struct GroupShape {
  std::vector<int> dims;
  std::vector<RootId> theta;

  int num_factors() const { return static_cast<int>(dims.size()); }
  int theta_dim() const { return static_cast<int>(theta.size()); }
  std::vector<RootId> all_roots() const;
  RootId opposite(const RootId& r) const { return {r.factor, dims[r.factor] - r.index}; }
  void validate() const;  // throws on empty θ / bad indices
};

struct GroupElement {
  std::vector<Mat> f;
  std::vector<Mat> finv;
};

// Renormalizes each factor to determinant one (throws if det <= 0) and caches
// the inverse.
GroupElement make_element(std::vector<Mat> mats);
GroupElement identity_element(const GroupShape& shape);
GroupElement mul(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& g);

// Per-factor vector in the Cartan space (coordinates sum to zero).
struct EVector {
  std::vector<Vec> f;
};

EVector opposition(const EVector& v);  // per factor: reverse and negate
double root_value(const EVector& v, const RootId& r);
double weight_value(const EVector& v, const RootId& r);  // ϖ_r(v)
Vec theta_coords(const GroupShape& shape, const EVector& v);

// Point of F_θ (or of F_{ιθ} when dual): an orthonormal frame per σ ∈ θ, of
// width index (primal) or dim-index (dual).
struct FlagPoint {
  std::vector<Mat> frames;
  bool dual = false;
};

FlagPoint act(const GroupShape& shape, const GroupElement& g, const FlagPoint& x);
// Largest principal angle between corresponding planes, maximized over θ.
double flag_distance(const FlagPoint& x, const FlagPoint& y);
// Re-orthonormalize a frame, columns signed so the first nonzero entry is
// positive (reproducible representative of the subspace).
Mat orthonormalize(const Mat& frame);

struct CartanData {
  EVector a;                       // descending log singular values, zero-sum
  std::vector<double> theta_gaps;  // σ(a(g)) per σ ∈ θ
  double min_gap = 0;
  bool attractor_defined = false;  // all θ-gaps strictly positive
  FlagPoint attractor;             // U_θ(g)
  FlagPoint dual_repeller;         // U_{ιθ}(g^{-1}), stored as a dual flag
};

CartanData cartan(const GroupShape& shape, const GroupElement& g);

// Running left-product with per-factor log rescaling; products of thousands
// of letters stay inside double range.
struct ScaledProduct {
  std::vector<Mat> m;
  std::vector<double> logscale;

  explicit ScaledProduct(const GroupShape& shape);
  void rmul(const GroupElement& g);  // P <- P * g
};
CartanData cartan(const GroupShape& shape, const ScaledProduct& p);

// Per-factor descending log-moduli of eigenvalues, zero-sum.
EVector jordan(const GroupShape& shape, const GroupElement& g);

// Matrix of Λ^j g on the wedge basis e_I, I running over j-subsets in
// lexicographic order. Functorial: ext_power(gh) = ext_power(g) ext_power(h).
Mat ext_power(const Mat& g, int j);

// Functional on E_θ: φ = Σ_σ c_σ ϖ_σ. Evaluation through ϖ-coordinates is
// automatically p_θ-invariant.
struct Functional {
  Vec c;
  double operator()(const Vec& theta_coordinates) const { return c.dot(theta_coordinates); }
};
double eval(const GroupShape& shape, const Functional& phi, const EVector& v);

// ϖ_σ(β_θ(g,x)) per σ ∈ θ: log of the norm growth of the unit decomposable
// vector of x under Λ^j g (Busemann cocycle read from the Tits representations).
Vec busemann(const GroupShape& shape, const GroupElement& g, const FlagPoint& x);

struct GromovProduct {
  Vec value;              // entries kNonTransverse when not transverse
  bool transverse = true;
};
// x a dual flag, y a primal flag.
GromovProduct gromov_product(const GroupShape& shape, const FlagPoint& x, const FlagPoint& y);

struct BasinResult {
  bool inside = false;
  Vec gromov;      // ϖ_σ G_θ(U_{ιθ}(g^{-1}), y)
  double defect;   // ‖a_θ(g) − β_θ(g,y)‖, the shadow comparison residual
};
BasinResult cartan_basin_test(const GroupShape& shape, const GroupElement& g, const FlagPoint& y,
                              double alpha);

struct ProximalityReport {
  bool proximal = false;
  std::vector<double> eigen_gaps;  // per σ: log|λ_j| − log|λ_{j+1}|
  FlagPoint attracting;            // g⁺_θ (valid when proximal)
  FlagPoint repelling;             // g⁻_θ, dual flag (valid when proximal)
  double r = 0;                    // −min_σ ϖ_σ G(g⁻, g⁺): transversality level
  double contraction = 0;          // max_σ e^{−gap}: attraction rate toward g⁺
  double defect = 0;               // ‖a_θ − λ_θ − G_θ(g⁻, g⁺)‖
};
ProximalityReport proximality_report(const GroupShape& shape, const GroupElement& g);

// ‖a_θ(gh) − a_θ(h) − β_θ(g, U_θ(h))‖; tends to 0 as the θ-gaps of h grow.
// Throws if the attractor of h is undefined.
double quint_defect(const GroupShape& shape, const GroupElement& g, const GroupElement& h);

}  // namespace alab::grp
