#pragma once

// Hamiltonian property checks for first-order operators of hydrodynamic type.
//
// Local (Dubrovin-Novikov) operator:
//   A^{ij} = g^{ij} D_x + b^{ij}_k u^k_x
// Nonlocal (Ferapontov) operator adds
//   sum_a eps_a w^i_{a k} u^k_x D_x^{-1} w^j_{a l} u^l_x.

#include <string>
#include <vector>

#include "hydroham/geometry.hpp"
#include "hydroham/hydrosys.hpp"
#include "hydroham/report.hpp"

namespace hydroham {

struct LocalOperator {
  MetricField g;
  ConnectionField b;

  int dimension() const { return g.dimension; }
  void validate() const;
};

struct NonlocalOperator {
  LocalOperator local;
  std::vector<AffinorField> tails;

  int dimension() const { return local.dimension(); }
  void validate() const;
};

/// Condition ids, in report order.
namespace condition {
inline constexpr const char* kSymmetricMetric = "g_symmetric";
inline constexpr const char* kNondegenerate = "g_nondegenerate";
inline constexpr const char* kSymmetricConnection = "connection_symmetric";
inline constexpr const char* kMetricCompatible = "metric_compatible";
inline constexpr const char* kFlat = "flat";
inline constexpr const char* kAffinorSelfAdjoint = "affinor_self_adjoint";
inline constexpr const char* kCodazzi = "codazzi";
inline constexpr const char* kGauss = "gauss";
inline constexpr const char* kAffinorsCommute = "affinors_commute";
inline constexpr const char* kSkewSymmetricMetric = "skew_metric_symmetric";
inline constexpr const char* kSkewConnection = "skew_b_plus_bT";
}  // namespace condition

/// Largest fraction of degenerate sample attempts tolerated before the
/// nondegeneracy condition fails.
inline constexpr double kMaxDegenerateFraction = 0.2;

/// Formal skew-adjointness: g^{ij} = g^{ji} and b^{ij}_k + b^{ji}_k = d_k g^{ij}.
CheckReport check_skew_adjoint(const LocalOperator& a, const SamplePlan& plan);

/// (i) g symmetric, (ii) nondegenerate, (iii) Gamma from b symmetric,
/// (iv) nabla g = 0 under that Gamma, (v) curvature of g vanishes.
CheckReport check_local_hamiltonian(const LocalOperator& a, const SamplePlan& plan);

struct FerapontovOptions {
  /// Append the flatness condition of the local check (used to compare an
  /// empty-tail operator against check_local_hamiltonian).
  bool with_flatness = false;
};

/// (i)-(iv) of the local check plus, for every tail,
/// (T1) g_{ik} w^k_j = g_{jk} w^k_i, (T2) nabla_k w^i_j = nabla_j w^i_k,
/// (T3) R^{ij}_{kl} = sum_a eps_a (w^i_{al} w^j_{ak} - w^i_{ak} w^j_{al}),
/// (T4) [w_a, w_b] = 0.
CheckReport check_ferapontov(const NonlocalOperator& a, const SamplePlan& plan, FerapontovOptions options = {});

/// Local check of g_A + lambda g_B, b_A + lambda b_B for each lambda.
/// Condition ids are prefixed with "lambda=<value>/". A lambda whose pencil
/// metric fails nondegeneracy gets a single "jacobi_by_interpolation"
/// condition instead: it passes when at least three members of the pencil
/// (A and B included) are Hamiltonian, since the Jacobi bracket of the
/// pencil is quadratic in lambda.
CheckReport check_pencil_compatibility(const LocalOperator& a, const LocalOperator& b,
                                       const std::vector<double>& lambdas, const SamplePlan& plan);

/// a + lambda * b, entrywise.
LocalOperator pencil_member(const LocalOperator& a, const LocalOperator& b, double lambda);

/// u_t = A (dH/du): v^i_k = g^{ij} d_j d_k H + b^{ij}_k d_j H.
/// H must depend on u only; entries are callable fields over jets of H.
HydroSystem hamiltonian_flow(const LocalOperator& a, const Expr& hamiltonian);

/// Sum_a eps_a (w^i_{al} w^j_{ak} - w^i_{ak} w^j_{al}) at a point, stored at (i, j, k, l).
Tensor4 gauss_tail_sum(const std::vector<AffinorField>& tails, const Point& p);

}  // namespace hydroham
