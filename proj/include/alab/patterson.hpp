#pragma once

// Patterson-Sullivan measures by weighted orbit summation at s above the
// critical exponent, quasi-invariance and shadow-lemma verification, covering
// audits of Cartan basins, and Bowen-Margulis importance sampling through the
// Gromov product.
//
// Bins for Radon-Nikodym tests are boundary cylinders (reduced-word prefixes);
// an atom belongs to the bin of its prefix. The dual measure runs the same
// construction in the opposite flag space.

#include "alab/anosovrep.hpp"

namespace alab::patterson {

using grp::FlagPoint;
using grp::Functional;
using rep::RepContext;
using words::ReducedWord;

struct Atom {
  ReducedWord word;
  FlagPoint flag;   // U_θ(ρ(γ)) (or U_{ιθ} for the dual measure)
  double weight;    // normalized
  double phi_a;     // φ(a_θ(ρ(γ)))
};

struct AtomicMeasure {
  std::vector<Atom> atoms;
  double s = 0;
  int radius = 0;
  bool dual = false;
  int skipped = 0;        // atoms dropped for undefined attractors
  double tail_mass = 0;   // mass of the outermost sphere (truncation diagnostic)
};

// ν_s over the ball of radius L: weights ∝ e^{-s φ(a(ρ(γ)))}, atoms at the
// Cartan attractors. dual=true builds the opposite-side measure (weights use
// φ∘ι, atoms in F_{ιθ}). L=0 returns the single identity-free convention atom.
AtomicMeasure patterson_sum(const RepContext& rep, const Functional& phi, double s, int L,
                            bool dual = false);

struct QuasiInvarianceCell {
  double s;
  int radius;
  int test_index;          // which η
  std::vector<double> bin_error;  // |ν_s(η^{-1}B) - ∫_B e^{-φ(β(η^{-1},·))}dν_s| per bin
  double max_error;
};

// Radon-Nikodym test grid: for each η (the generators), s in s_grid, L in
// L_grid, errors per boundary cylinder of depth bin_len.
std::vector<QuasiInvarianceCell> quasi_invariance_test(const RepContext& rep,
                                                       const Functional& phi,
                                                       std::span<const double> s_grid,
                                                       std::span<const int> L_grid, int bin_len);

struct ShadowStatistics {
  double slope = 0;       // fitted: log ν(shadow) vs -δ φ(a)
  double intercept = 0;
  double spread = 0;      // max - min residual (log C - log C' proxy)
  int used = 0;           // shadows with nonzero mass
  int empty_shadows = 0;
  std::vector<double> xs, ys;  // scatter (regression inputs)
};

// Scatter of log ν(γ B_{θ,α}(γ)) against -δ φ(a(ρ(γ))) for |γ| in [L/2, L],
// subsampled to at most max_gamma test elements.
ShadowStatistics shadow_statistics(const RepContext& rep, const Functional& phi,
                                   const AtomicMeasure& nu, double alpha, double delta, int L,
                                   int max_gamma = 200, std::uint64_t seed = 17);

struct CoveringAudit {
  int max_multiplicity = 0;
  double covered_fraction = 0;  // fraction of targets in at least one basin
  std::vector<int> histogram;   // multiplicity histogram
};

// Multiplicity of {γ B_{θ,α}(γ) : t <= |γ| <= t+1} over sampled deep flags.
CoveringAudit covering_audit(const RepContext& rep, double alpha, int t, int target_depth,
                             int target_samples, std::uint64_t seed);

struct BowenMargulisSample {
  std::vector<std::pair<int, int>> pairs;  // indices into (nubar.atoms, nu.atoms)
  std::vector<double> weights;             // e^{-δ [x,y]_φ}
  int rejected = 0;                        // non-transverse draws
  double ess = 0;                          // effective sample size
};

// n importance samples from ν̄ ⊗ ν weighted by the φ-Gromov product.
// Throws if the rejection rate exceeds 50% (insufficient separation).
BowenMargulisSample bowen_margulis_sample(const RepContext& rep, const Functional& phi,
                                          const AtomicMeasure& nu, const AtomicMeasure& nubar,
                                          double delta, int n, std::uint64_t seed);

}  // namespace alab::patterson
