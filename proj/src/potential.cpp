#include "alab/potential.hpp"

#include <cstring>

namespace alab::sft {

Potential::Potential(Sft shift, int window, int dim)
    : sft_(std::move(shift)), window_(window), dim_(dim), idx_(sft_, window) {
  table_.assign(idx_.count() * dim, 0.0);
}

Potential Potential::constant(const Sft& shift, const Vec& value) {
  Potential p(shift, 1, static_cast<int>(value.size()));
  for (std::uint64_t b = 0; b < p.size(); ++b)
    for (int i = 0; i < p.dim_; ++i) p.table_[b * p.dim_ + i] = value[i];
  return p;
}

Potential Potential::from_function(const Sft& shift, int window, int dim,
                                   const std::function<void(const int*, double*)>& fn) {
  Potential p(shift, window, dim);
  p.idx_.for_each([&](std::uint64_t r, const int* b) { fn(b, p.data(r)); });
  return p;
}

Vec Potential::value(std::uint64_t block_rank) const {
  Vec v(dim_);
  std::memcpy(v.data(), data(block_rank), sizeof(double) * dim_);
  return v;
}

Vec Potential::value_at(std::span<const int> word) const {
  if (static_cast<int>(word.size()) < window_)
    throw std::invalid_argument("word shorter than potential window");
  return value(idx_.rank(word.data()));
}

Potential Potential::contracted(const Vec& coeff) const {
  if (coeff.size() != dim_) throw std::invalid_argument("coefficient size mismatch");
  Potential out(sft_, window_, 1);
  for (std::uint64_t b = 0; b < size(); ++b) {
    double s = 0;
    for (int i = 0; i < dim_; ++i) s += coeff[i] * table_[b * dim_ + i];
    out.table_[b] = s;
  }
  if (!trunc_.empty()) {
    out.trunc_.resize(size());
    double norm1 = coeff.cwiseAbs().sum();
    for (std::uint64_t b = 0; b < size(); ++b)
      out.trunc_[b] = static_cast<float>(norm1 * trunc_[b]);
  }
  return out;
}

Potential Potential::operator+(const Potential& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("dimension mismatch");
  const Potential& wide = window_ >= other.window_ ? *this : other;
  const Potential& thin = window_ >= other.window_ ? other : *this;
  Potential out(wide.sft_, wide.window_, wide.dim_);
  wide.idx_.for_each([&](std::uint64_t r, const int* b) {
    std::uint64_t rt = thin.idx_.rank(b);
    for (int i = 0; i < dim_; ++i)
      out.table_[r * dim_ + i] = wide.table_[r * dim_ + i] + thin.table_[rt * dim_ + i];
  });
  return out;
}

Potential Potential::scaled(double t) const {
  Potential out = *this;
  for (auto& v : out.table_) v *= t;
  for (auto& e : out.trunc_) e = static_cast<float>(e * std::abs(t));
  return out;
}

Potential Potential::shifted(const Vec& c) const {
  if (c.size() != dim_) throw std::invalid_argument("dimension mismatch");
  Potential out = *this;
  for (std::uint64_t b = 0; b < size(); ++b)
    for (int i = 0; i < dim_; ++i) out.table_[b * dim_ + i] += c[i];
  return out;
}

Vec Potential::period(std::span<const int> cycle) const {
  int n = static_cast<int>(cycle.size());
  std::vector<int> block(window_);
  Vec sum = Vec::Zero(dim_);
  for (int r = 0; r < n; ++r) {
    for (int t = 0; t < window_; ++t) block[t] = cycle[(r + t) % n];
    const double* v = data(idx_.rank(block.data()));
    for (int i = 0; i < dim_; ++i) sum[i] += v[i];
  }
  return sum;
}

double Potential::period_error(std::span<const int> cycle) const {
  if (trunc_.empty()) return 0.0;
  int n = static_cast<int>(cycle.size());
  std::vector<int> block(window_);
  double err = 0;
  for (int r = 0; r < n; ++r) {
    for (int t = 0; t < window_; ++t) block[t] = cycle[(r + t) % n];
    err += trunc_[idx_.rank(block.data())];
  }
  return err;
}

Vec Potential::table_mean() const {
  Vec m = Vec::Zero(dim_);
  for (std::uint64_t b = 0; b < size(); ++b)
    for (int i = 0; i < dim_; ++i) m[i] += table_[b * dim_ + i];
  return m / static_cast<double>(size());
}

Potential coboundary(const Potential& u) {
  Potential out(u.shift(), u.window() + 1, u.dim());
  out.blocks().for_each([&](std::uint64_t r, const int* b) {
    std::uint64_t head = u.blocks().rank(b);          // u(x)
    std::uint64_t tail = u.blocks().rank(b + 1);      // u(σx)
    for (int i = 0; i < u.dim(); ++i)
      out.data(r)[i] = u.data(tail)[i] - u.data(head)[i];
  });
  return out;
}

}  // namespace alab::sft
