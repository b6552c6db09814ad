#pragma once

// Critical exponents, the critical hypersurface and convergence domain of a
// representation, dynamical intersection, growth directions, and
// tangency/convexity audits. All scalar computations run through the
// Ledrappier potential on the coding shift; homogeneity h_{tφ} = h_φ/t turns
// hypersurface tracing into per-direction scalar root finding.

#include "alab/anosovrep.hpp"
#include "alab/thermo.hpp"

namespace alab::critical {

using grp::Functional;
using rep::RepContext;
using sft::Potential;

inline constexpr int kDefaultPotentialDepth = 6;

struct CriticalPoint {
  Functional phi;        // h_phi = 1 within tolerance
  double h_residual = 0;  // |h_phi - 1|
  Vec u_phi;             // growth direction in E_θ (unit ϖ-coordinates)
  Vec gibbs_mean;        // ∫F dm_{-φ(F)} (unnormalized direction)
};

// Entropy of a functional: root of P(-s φ(F)) = 0. Throws if φ is not
// strictly positive on the sampled limit cone.
double entropy_of_functional(const RepContext& rep, const Functional& phi, const Potential& F);
double entropy_of_functional(const RepContext& rep, const Functional& phi,
                             int depth = kDefaultPotentialDepth);

struct CountingExponent {
  double delta = 0;      // window-regression estimate
  double stderr_ = 0;
  int ball_radius = 0;
  std::vector<double> log_counts;  // log #{γ : φ(a(ρ(γ))) ≤ t} on the grid
  std::vector<double> grid;
};
// Direct orbit-counting estimate of δ^φ over the ball of radius L.
CountingExponent critical_exponent_count(const RepContext& rep, const Functional& phi, int L);

// Scale each grid direction ψ to the critical point h_ψ·ψ (so h = 1).
std::vector<CriticalPoint> manhattan_hypersurface(const RepContext& rep,
                                                  const std::vector<Functional>& directions,
                                                  const Potential& F);

CriticalPoint critical_point(const RepContext& rep, const Functional& direction,
                             const Potential& F);

struct Intersection {
  double gibbs = 0;       // reported value: ∫ψ(F)dm / ∫φ(F)dm
  double periods = 0;     // period-sum route at the horizon
  double period_band = 0; // spread of the last window estimates
  bool inequality_ok = true;  // I_φ(ψ) ≥ h_φ/h_ψ when ψ positive
};
Intersection dynamical_intersection(const RepContext& rep, const CriticalPoint& phi,
                                    const Functional& psi, const Potential& F, int horizon = 9);

struct TangencyAudit {
  double angle = 0;         // radians between numerical tangent and ker I_φ
  double u_annihilation = 0;  // |tangent(u_φ)| (duality check)
  bool step_warning = false;  // Richardson disagreement between h and h/2
};
// Central-difference tangent of the traced hypersurface vs the Gibbs kernel
// of I_φ; only for 2-dimensional (E_θ)*.
TangencyAudit tangency_audit(const RepContext& rep, const CriticalPoint& phi, double step,
                             const Potential& F);

// Null directions of the sampled cone's span: basis of Ann(L_{θ,ρ}) estimate.
std::vector<Vec> annihilator_estimate(const RepContext& rep, int L);

}  // namespace alab::critical
