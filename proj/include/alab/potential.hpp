#pragma once

// Depth-w locally constant potentials on a subshift: a dense table over
// admissible w-blocks with values in R^dim. Genuine Hölder data enters only
// through depth-refinement sequences; each table can carry per-block
// truncation errors for downstream error propagation.

#include <functional>
#include <span>

#include "alab/sft.hpp"

namespace alab::sft {

class Potential {
 public:
  Potential() = default;
  Potential(Sft shift, int window, int dim);

  static Potential constant(const Sft& shift, const Vec& value);
  // fn fills out[0..dim) for the given admissible window-block
  static Potential from_function(const Sft& shift, int window, int dim,
                                 const std::function<void(const int*, double*)>& fn);

  const Sft& shift() const { return sft_; }
  const BlockIndex& blocks() const { return idx_; }
  int window() const { return window_; }
  int dim() const { return dim_; }
  std::uint64_t size() const { return idx_.count(); }

  double* data(std::uint64_t block_rank) { return table_.data() + block_rank * dim_; }
  const double* data(std::uint64_t block_rank) const { return table_.data() + block_rank * dim_; }
  Vec value(std::uint64_t block_rank) const;
  // value on an arbitrary admissible word of length >= window (uses prefix)
  Vec value_at(std::span<const int> word) const;

  bool has_errors() const { return !trunc_.empty(); }
  std::vector<float>& errors() { return trunc_; }
  const std::vector<float>& errors() const { return trunc_; }
  float error_at(std::uint64_t block_rank) const { return trunc_.empty() ? 0.f : trunc_[block_rank]; }

  // scalar contraction sum_i coeff[i] * F_i, window preserved
  Potential contracted(const Vec& coeff) const;
  Potential operator+(const Potential& other) const;  // same shift; windows may differ
  Potential scaled(double t) const;
  Potential shifted(const Vec& c) const;  // F + c

  // Birkhoff period over a cyclic word (wraps around); errors() accumulate too.
  Vec period(std::span<const int> cycle) const;
  double period_error(std::span<const int> cycle) const;

  // mean over blocks (diagnostic only; not an invariant measure average)
  Vec table_mean() const;

 private:
  Sft sft_;
  int window_ = 1;
  int dim_ = 1;
  BlockIndex idx_;
  std::vector<double> table_;
  std::vector<float> trunc_;
};

// Coboundary u∘σ − u of a depth-(window) table u (scalar or vector): a
// depth-(window+1) potential. Used by Livšic-style tests.
Potential coboundary(const Potential& u);

}  // namespace alab::sft
