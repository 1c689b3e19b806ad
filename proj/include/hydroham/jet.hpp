#pragma once

// Truncated multivariate Taylor expansions ("jets").
//
// A jet of order p in n variables stores the Taylor coefficients
// c_a = (d^a f)(x0) / a! for every multi-index a with |a| <= p, in graded
// lexicographic order. Arithmetic is exact up to the truncation order, so
// partial derivatives obtained from a jet are exact (up to rounding), not
// finite-difference approximations.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace hydroham {

inline constexpr int kMaxJetOrder = 3;

/// Dense graded-lex basis of multi-indices for (n, order), shared between jets.
class MultiIndexBasis {
 public:
  using Index = std::vector<std::uint8_t>;

  static std::shared_ptr<const MultiIndexBasis> get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  std::size_t size() const { return indices_.size(); }
  const Index& index(std::size_t pos) const { return indices_[pos]; }
  int degree(std::size_t pos) const { return degrees_[pos]; }

  /// Position of a multi-index, or -1 if its degree exceeds the order.
  long position(std::span<const std::uint8_t> idx) const;

  struct ProductTerm {
    std::uint32_t lhs, rhs, out;
  };
  /// All (a, b) pairs with |a| + |b| <= order and their sum a + b.
  const std::vector<ProductTerm>& products() const { return products_; }

  MultiIndexBasis(int nvars, int order);

 private:
  std::uint64_t key(std::span<const std::uint8_t> idx) const;

  int nvars_;
  int order_;
  std::vector<Index> indices_;
  std::vector<int> degrees_;
  std::vector<long> lookup_;  // dense key -> position
  std::vector<ProductTerm> products_;
};

class Jet {
 public:
  Jet(int nvars, int order);

  static Jet constant(int nvars, int order, double value);
  /// The coordinate function x_k (0-based) expanded at x0_k = value.
  static Jet variable(int nvars, int order, int k, double value);

  int nvars() const { return basis_->nvars(); }
  int order() const { return basis_->order(); }
  double value() const { return coeffs_[0]; }

  std::span<const double> coefficients() const { return coeffs_; }
  const MultiIndexBasis& basis() const { return *basis_; }

  /// Taylor coefficient for a multi-index.
  double coefficient(std::span<const std::uint8_t> idx) const;

  /// Partial derivatives (0-based variable indices); require the order to cover them.
  double d(int k) const;
  double d(int k, int l) const;
  double d(int k, int l, int m) const;

  /// Exact jet of d/dx_k, one order lower.
  Jet derivative(int k) const;
  Jet truncated(int order) const;

  /// f(self) for a univariate f given its Taylor coefficients at value():
  /// taylor[m] = f^(m)(value()) / m!, m = 0..order.
  Jet compose(std::span<const double> taylor) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  Jet reciprocal() const;

 private:
  void require_same_shape(const Jet& o) const;
  double partial(std::span<const std::uint8_t> idx) const;

  std::shared_ptr<const MultiIndexBasis> basis_;
  std::vector<double> coeffs_;
};

// Elementary functions on jets. Domain checks are the caller's business
// (see eval_jet); these assume value() is inside the domain.
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet sqrt(const Jet& x);
Jet pow(const Jet& x, double p);
Jet pow_int(const Jet& x, long long p);

/// Inverse of a row-major n x n matrix of jets. Pivots on the values;
/// throws std::domain_error if a pivot value is exactly zero.
std::vector<Jet> invert_jet_matrix(std::vector<Jet> a, int n);

}  // namespace hydroham
