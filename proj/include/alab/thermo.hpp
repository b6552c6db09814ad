#pragma once

// Thermodynamic formalism for locally constant potentials on a subshift of
// finite type: transfer-operator pressure (Perron data on the block recoding),
// periodic-orbit pressure, Gibbs/equilibrium chains, entropy roots, pressure
// gradients, rotation sets, the Abramov transform and Livšic period tests.
//
// Exact linear algebra on the recoded shift replaces functional analysis:
// uniqueness of the equilibrium state is Perron uniqueness. Pressure is
// reported in nats.

#include <span>

#include "alab/potential.hpp"

namespace alab::thermo {

using sft::Potential;
using sft::Sft;

struct PerronData {
  double lambda = 0;    // spectral radius of the weighted transfer matrix
  double pressure = 0;  // log lambda
  Vec right;            // h > 0
  Vec left;             // nu > 0, <nu,h> = 1
  int states = 0;       // number of (window-1)-blocks
  int iterations = 0;
};

// Weighted adjacency on (window-1)-blocks with weights e^{f(block)}; power
// iteration to relative tolerance 1e-12 (deterministic). Scalar f required.
// Throws if the recoded shift is reducible.
PerronData transfer_solve(const Potential& f);
double pressure_transfer(const Potential& f);

struct OrbitPressure {
  double value = 0;      // slope estimate at the horizon
  double band = 0;       // spread of the last three per-period slopes
  int horizon = 0;
  std::vector<double> log_sums;  // log Z_n, n = 1..horizon (fixed-point sums)
};

// Pressure from periodic-orbit sums up to period T: partial sums over
// orbits assembled into fixed-point counts; primitive orbits enumerated once,
// powers folded in. T >= 4.
OrbitPressure pressure_orbits(const Potential& f, int horizon);

// Stationary Markov chain of the equilibrium state on (window-1)-blocks.
struct GibbsChain {
  Sft shift;
  int window = 2;           // block window of the underlying potential
  sft::BlockIndex states;   // (window-1)-blocks
  Vec pi;                   // stationary distribution
  // sparse row-stochastic kernel, row-major over states, columns = successors
  std::vector<std::vector<std::pair<std::uint32_t, double>>> q;
  double pressure = 0;

  double entropy() const;
  // integral of a locally constant g with g.window <= window against the chain
  double integrate_scalar(const Potential& g) const;
  Vec integrate(const Potential& g) const;
  // cylinder measure of an admissible word (length >= window-1)
  double cylinder_mass(std::span<const int> word) const;
  // stationary trajectory sample of given length (deterministic in seed)
  std::vector<int> sample_path(int length, std::uint64_t seed) const;
};

GibbsChain gibbs_measure(const Potential& f);

struct GibbsRatioReport {
  double c_upper = 1;  // sup of mu[w] / exp(S_n f - n P) over tested cylinders
  double c_lower = 1;  // inf of the same ratio
  int max_depth = 0;
};
// Gibbs property diagnostic over all cylinders of length <= depth.
GibbsRatioReport gibbs_ratio(const GibbsChain& chain, const Potential& f, int depth);

// Root of s -> P(-s f) on [bracket_lo, bracket_hi], bracket expanded
// geometrically on failure; tolerance 1e-10 via bisection + Newton polish
// (derivative of pressure = -∫f dm). Throws if f is not in the positive class.
double entropy_root(const Potential& f);

// ∫ F dm_{-phi(F)} componentwise; phi given as coefficients against F's
// coordinates.
Vec pressure_gradient(const Potential& F, const Vec& phi);

struct RotationSet {
  std::vector<Vec> means;        // periodic means ℓ_τ(F)/p(τ), τ primitive
  std::vector<Vec> hull;         // extreme points (exact for dim <= 2)
  int dim = 1;
  bool contains(const Vec& v, double tol = 1e-9) const;
};
RotationSet rotation_set(const Potential& F, int horizon);

struct AbramovResult {
  double entropy = 0;      // h(chain) / ∫f dchain
  double roof_mean = 0;    // ∫f dchain
  Vec state_weights;       // reweighted measure f·m/∫f dm at state resolution
};
AbramovResult abramov(const GibbsChain& chain, const Potential& f);

// max over primitive orbits of ‖ℓ_τ(F) − ℓ_τ(G)‖/p(τ); 0 certifies
// period-equality up to the horizon.
double livsic_test(const Potential& F, const Potential& G, int horizon);

}  // namespace alab::thermo
