#pragma once

// Anosov certification and limit objects of a representation of a free group
// into a product of SL(d,R): gap profiles with fitted domination constants,
// limit maps with Cauchy estimates, transversality audits, the limit cone,
// Jordan-Cartan comparison and the Ledrappier potential over the coding shift.

#include <map>
#include <optional>

#include "alab/potential.hpp"
#include "alab/slgroup.hpp"
#include "alab/words.hpp"

namespace alab::rep {

using grp::CartanData;
using grp::EVector;
using grp::FlagPoint;
using grp::GroupElement;
using grp::GroupShape;
using words::ReducedWord;

class RepContext {
 public:
  RepContext(GroupShape shape, int rank, std::vector<GroupElement> generators);

  const GroupShape& shape() const { return shape_; }
  int rank() const { return rank_; }
  int theta_dim() const { return shape_.theta_dim(); }

  // image of a single letter (±1..±k)
  const GroupElement& letter(int l) const;
  // image of a symbol index of the coding shift
  const GroupElement& symbol(int s) const { return gens_[s]; }

  // left-to-right product; memoized
  const GroupElement& eval(const ReducedWord& w) const;
  GroupElement eval_span(std::span<const int> letters) const;  // uncached

  // representation with every generator conjugated by c
  RepContext conjugated(const GroupElement& c) const;
  // opposite representation (generators inverted); used for dual measures
  RepContext inverted() const;

 private:
  GroupShape shape_;
  int rank_;
  std::vector<GroupElement> gens_;  // indexed by symbol
  mutable std::map<std::vector<int>, GroupElement> cache_;
};

struct GapProfile {
  std::vector<double> min_gap;  // index n-1: min over |γ|=n, σ∈θ of σ(a(ρ(γ)))
  double mu = 0;                // fitted slope of the lower envelope
  double c = 0;                 // fitted offset (σ(a) >= mu n - c)
  double mu_stderr = 0;
  bool certified = false;       // mu positive with 95% margin
};
// Enumerates the ball of radius L; the verdict is empirical, not a proof.
GapProfile gap_profile(const RepContext& rep, int L);

struct LimitFlag {
  FlagPoint flag;          // U_θ(ρ(prefix_depth))
  double cauchy = 0;       // flag distance between depth and depth-1
  int depth = 0;
};
// Throws if some prefix has an undefined attractor (message names the prefix).
LimitFlag limit_flag(const RepContext& rep, const ReducedWord& ray, int depth);
// Dual limit flag ξ^{ιθ}: attractor of the prefixes in the opposite flag space.
LimitFlag limit_flag_dual(const RepContext& rep, const ReducedWord& ray, int depth);

struct TransversalityAudit {
  double min_value = 0;            // min over sampled pairs, σ of ϖ_σ G_θ(ξ^{ιθ}(x), ξ^θ(y))
  std::pair<int, int> argmin{0, 0};  // sample indices of the minimizing pair
  bool violation = false;          // a non-transverse pair was found
};
TransversalityAudit transversality_audit(const RepContext& rep, int samples, int depth,
                                         std::uint64_t seed);

struct LimitConeSample {
  std::vector<Vec> directions;   // normalized λ_θ per primitive class
  std::vector<ReducedWord> reps;
  // 2-dimensional E_θ: hull as an angle interval [lo, hi] (radians)
  std::optional<std::pair<double, double>> angle_interval;
  std::vector<Vec> extreme_rays;
};
LimitConeSample limit_cone(const RepContext& rep, int L);

struct JordanCartanGap {
  std::vector<double> running_sup;  // index n-1: sup over cyclically reduced |γ| <= n
  bool include_non_cyclic = false;
};
// Default: cyclically reduced words only (the bounded regime). The
// include_non_cyclic variant is the negative control.
JordanCartanGap jordan_cartan_gap(const RepContext& rep, int L, bool include_non_cyclic = false);

// Ledrappier potential as a depth-m locally constant table on (m+1)-blocks:
//   F(x) = β_θ(ρ(x_0), U_θ(ρ(x_1 ... x_m))).
// Birkhoff sums telescope to β_θ of the prefix against a truncated shifted
// flag; periods of cyclic words approximate λ_θ. Per-block errors hold the
// geometric tail estimate (Cauchy step)/(1 - e^{-mu}) for the supplied mu.
sft::Potential ledrappier_potential(const RepContext& rep, int m, double mu_hint = 0.0);

// λ_θ in ϖ-coordinates (eigenvalue moduli route; the marked-spectrum oracle).
Vec jordan_theta(const RepContext& rep, const ReducedWord& w);
Vec cartan_theta(const RepContext& rep, const ReducedWord& w);

}  // namespace alab::rep
