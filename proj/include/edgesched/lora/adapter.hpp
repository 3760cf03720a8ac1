#pragma once

#include <cstddef>
#include <iostream>
#include <span>
#include <vector>

#include "edgesched/core/errors.hpp"
#include "edgesched/core/random.hpp"
#include "edgesched/lora/matrix.hpp"

namespace edgesched::lora {

// Low-rank increment lambda * B A for a d x d weight, with A: r x d and
// B: d x r.
struct LoraAdapter {
  DenseMatrix a;
  DenseMatrix b;
  double lambda = 1.0;
  std::size_t rank = 1;

  std::size_t dim() const { return b.rows(); }

  // Stored parameters: 2 r d.
  std::size_t parameter_count() const { return a.rows() * a.cols() + b.rows() * b.cols(); }

  // r << d is advisory only.
  bool is_low_rank() const { return rank < dim(); }

  void check_shapes() const {
    if (rank < 1) throw ShapeError("lora: rank must be >= 1");
    if (a.rows() != rank || b.cols() != rank || a.cols() != b.rows()) {
      throw ShapeError("lora: A is " + a.shape() + " and B is " + b.shape() + ", expected r x d and d x r with r = " +
                       std::to_string(rank));
    }
  }
};

// B = 0, A ~ N(0, sigma^2): the increment starts at exactly zero.
inline LoraAdapter init_adapter(std::size_t d, std::size_t r, double sigma, Rng& rng,
                                double lambda = 1.0) {
  if (d < 1 || r < 1) throw ShapeError("init_adapter: d and r must be >= 1");
  if (!(sigma >= 0)) throw ShapeError("init_adapter: sigma must be >= 0");
  if (r >= d) {
    std::clog << "warning: lora rank " << r << " is not below dimension " << d << "\n";
  }
  LoraAdapter ad{DenseMatrix(r, d), DenseMatrix(d, r), lambda, r};
  if (sigma > 0) {
    for (auto& x : ad.a.entries()) x = sigma * rng.normal();
  }
  return ad;
}

inline DenseMatrix delta(const LoraAdapter& ad) {
  ad.check_shapes();
  return matmul(ad.b, ad.a);
}

// W + lambda * B A; `w` is not modified.
inline DenseMatrix merge(const DenseMatrix& w, const LoraAdapter& ad) {
  ad.check_shapes();
  if (w.rows() != ad.dim() || w.cols() != ad.dim()) {
    throw ShapeError("merge: W is " + w.shape() + " but adapter dimension is " +
                     std::to_string(ad.dim()));
  }
  DenseMatrix out = w;
  if (ad.lambda == 0.0) return out;
  const DenseMatrix inc = delta(ad);
  auto o = out.entries();
  auto di = inc.entries();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += ad.lambda * di[i];
  return out;
}

// W x + lambda * B (A x), without forming B A.
inline std::vector<double> apply(const DenseMatrix& w, const LoraAdapter& ad,
                                 std::span<const double> x) {
  ad.check_shapes();
  if (w.rows() != ad.dim() || w.cols() != ad.dim()) {
    throw ShapeError("apply: W is " + w.shape() + " but adapter dimension is " +
                     std::to_string(ad.dim()));
  }
  std::vector<double> y = matvec(w, x);
  const std::vector<double> ax = matvec(ad.a, x);
  const std::vector<double> bax = matvec(ad.b, ax);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += ad.lambda * bax[i];
  return y;
}

// ||A||_F^2 + ||B||_F^2
inline double reg_term(const LoraAdapter& ad) { return ad.a.frobenius_sq() + ad.b.frobenius_sq(); }

}  // namespace edgesched::lora
