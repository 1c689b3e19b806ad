#pragma once

// Pointwise differential geometry of a contravariant metric field.
//
// Index conventions, fixed here once for the whole library:
//   g_upper(i, j)  = g^{ij}          contravariant metric (the operator's g)
//   g_lower(i, j)  = g_{ij}          its inverse
//   b(i, j, k)     = b^{ij}_k        coefficient of u^k_x in the operator
//   Gamma(j, s, k) = Gamma^j_{sk}    with b^{ij}_k = -g^{is} Gamma^j_{sk}
//   R(j, s, k, l)  = R^j_{skl}
//                  = d_k Gamma^j_{sl} - d_l Gamma^j_{sk}
//                    + Gamma^j_{mk} Gamma^m_{sl} - Gamma^j_{ml} Gamma^m_{sk}
//   Rup(i, j, k, l) = R^{ij}_{kl} = g^{is} R^j_{skl}
//   w(i, j)        = w^i_j           affinor, row contravariant
//   nabla_w(i, j, k) = nabla_k w^i_j

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "hydroham/expr.hpp"
#include "hydroham/sampling.hpp"

namespace hydroham {

/// |det| floor after scaling every row by its largest magnitude.
inline constexpr double kDegeneracyFloor = 1e-8;

class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  int dimension() const { return n_; }
  double& operator()(int a, int b, int c) { return data_[(static_cast<std::size_t>(a) * n_ + b) * n_ + c]; }
  double operator()(int a, int b, int c) const { return data_[(static_cast<std::size_t>(a) * n_ + b) * n_ + c]; }
  double max_abs() const;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

  int dimension() const { return n_; }
  double& operator()(int a, int b, int c, int d) { return data_[idx(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const { return data_[idx(a, b, c, d)]; }
  double max_abs() const;

 private:
  std::size_t idx(int a, int b, int c, int d) const {
    return ((static_cast<std::size_t>(a) * n_ + b) * n_ + c) * n_ + d;
  }
  int n_ = 0;
  std::vector<double> data_;
};

struct MetricField {
  int dimension = 0;
  std::vector<Expr> entries;  // row-major g^{ij}

  MetricField() = default;
  explicit MetricField(int n);
  const Expr& operator()(int i, int j) const { return entries[static_cast<std::size_t>(i) * dimension + j]; }
  Expr& operator()(int i, int j) { return entries[static_cast<std::size_t>(i) * dimension + j]; }

  /// Throws InvalidInput on shape errors or variables beyond the dimension.
  void validate() const;
};

struct ConnectionField {
  int dimension = 0;
  std::vector<Expr> entries;  // b^{ij}_k at (i * n + j) * n + k

  ConnectionField() = default;
  explicit ConnectionField(int n);
  const Expr& operator()(int i, int j, int k) const { return entries[idx(i, j, k)]; }
  Expr& operator()(int i, int j, int k) { return entries[idx(i, j, k)]; }
  void validate() const;

 private:
  std::size_t idx(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dimension + j) * dimension + k;
  }
};

struct AffinorField {
  int dimension = 0;
  int sign = 1;               // epsilon, exactly +1 or -1
  std::vector<Expr> entries;  // row-major w^i_j

  AffinorField() = default;
  AffinorField(int n, int sign);
  const Expr& operator()(int i, int j) const { return entries[static_cast<std::size_t>(i) * dimension + j]; }
  Expr& operator()(int i, int j) { return entries[static_cast<std::size_t>(i) * dimension + j]; }
  void validate() const;
};

Eigen::MatrixXd evaluate(const MetricField& g, const Point& p);
Eigen::MatrixXd evaluate(const AffinorField& w, const Point& p);
Tensor3 evaluate(const ConnectionField& b, const Point& p);

/// Determinant after scaling each row by its largest entry (0 for a zero row).
double scaled_determinant(const Eigen::MatrixXd& m);

/// g_{ij} at p. Throws DegenerateMetricError below kDegeneracyFloor.
Eigen::MatrixXd invert_metric(const MetricField& g, const Point& p);

/// Gamma^j_{sk} = -g_{si} b^{ij}_k. If `term_scale` is given it receives,
/// per component, the largest |g_{si} b^{ij}_k| summand.
Tensor3 christoffel_from_b(const MetricField& g, const ConnectionField& b, const Point& p,
                           Tensor3* term_scale = nullptr);

/// Christoffel symbols of the Levi-Civita connection of g_{ij}.
Tensor3 levi_civita(const MetricField& g, const Point& p);

struct Curvature {
  Tensor4 lower;         // R^j_{skl}
  Tensor4 raised;        // R^{ij}_{kl}
  Tensor4 lower_scale;   // largest term magnitude entering each component
  Tensor4 raised_scale;  // sum_s |g^{is}| * lower_scale(j, s, k, l)
};

Curvature riemann_curvature(const MetricField& g, const Point& p);

/// nabla_k w^i_j under the Levi-Civita connection of g, stored at (i, j, k).
Tensor3 covariant_derivative_affinor(const AffinorField& w, const MetricField& g, const Point& p,
                                     Tensor3* term_scale = nullptr);

/// Everything the Hamiltonian checks need at one point, from a single
/// order-2 jet evaluation of the metric.
struct PointFrame {
  Point point;
  Eigen::MatrixXd g_upper;
  Eigen::MatrixXd g_lower;
  std::vector<Eigen::MatrixXd> dg_upper;  // dg_upper[k] = d_k g^{ij}
  Tensor3 gamma;                          // Levi-Civita
  std::optional<Curvature> curvature;
};

/// order 1: metric, derivatives and Levi-Civita symbols; order 2 adds curvature.
PointFrame make_frame(const MetricField& g, const Point& p, int order);

}  // namespace hydroham
