#pragma once

// Hydrodynamic-type systems u^i_t = v^i_j(u) u^j_x, conserved currents,
// point changes of variables and reciprocal transformations.
//
// Systems are always stored in the v-convention above. A system written
// as r_t + lambda r_x = 0 has v = -lambda.
//
// Currents follow the conservation convention D_t rho + D_x sigma = 0. The
// reciprocal transformation uses the closed 1-forms
//   dt~ = sigma^_1 dt + rho_1 dx,   dx~ = sigma^_2 dt + rho_2 dx,
// with sigma^ = -sigma (closedness needs D_t rho = D_x sigma^).

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hydroham/errors.hpp"
#include "hydroham/field.hpp"
#include "hydroham/report.hpp"

namespace hydroham {

class HydroSystem {
 public:
  HydroSystem() = default;
  explicit HydroSystem(int n);

  /// Diagonal system r^i_t + speeds[i] r^i_x = 0 (stored as v = -speeds).
  static HydroSystem from_speeds(const std::vector<Expr>& speeds);

  int dimension() const { return n_; }
  bool diagonal() const { return diagonal_; }
  void set_diagonal(bool d) { diagonal_ = d; }

  const Field& v(int i, int j) const { return v_[static_cast<std::size_t>(i) * n_ + j]; }
  Field& v(int i, int j) { return v_[static_cast<std::size_t>(i) * n_ + j]; }

  Eigen::MatrixXd evaluate(const Point& p) const;

  /// Characteristic speeds lambda_i = -v^i_i of a diagonal system.
  std::vector<double> speeds(const Point& p) const;

  /// Leading n x n block.
  HydroSystem truncated(int n) const;

  /// Throws InvalidInput if flagged diagonal but an off-diagonal expression
  /// entry is not identically zero.
  void validate() const;

 private:
  int n_ = 0;
  bool diagonal_ = false;
  std::vector<Field> v_;
};

struct ConservedCurrent {
  Field rho;
  Field sigma;
};

struct PointChangeMap {
  std::vector<Expr> forward;
  std::optional<std::vector<Expr>> inverse;

  int dimension() const { return static_cast<int>(forward.size()); }
  Point apply(const Point& p) const;
  Point apply_inverse(const Point& p) const;
  /// Swap forward and inverse; throws InvalidInput without an inverse.
  PointChangeMap inverted() const;
};

/// d_k rho v^k_l + d_l sigma = 0 for every l.
CheckReport check_conserved_current(const HydroSystem& s, const ConservedCurrent& c, const SamplePlan& plan);

/// J(u) v_old(u) = v_new(m(u)) J(u) with J the Jacobian of the forward map.
CheckReport check_change_of_variables(const HydroSystem& old_system, const HydroSystem& new_system,
                                      const PointChangeMap& map, const SamplePlan& plan);

/// inverse(forward(p)) = p; max coordinate error relative to max(1, |p|).
CheckReport check_map_round_trip(const PointChangeMap& map, const SamplePlan& plan);

class ReciprocalError : public Error {
 public:
  using Error::Error;
};

/// The system in the new independent variables (t~, x~). Both currents must
/// be conserved on the plan and sigma^_1 I - rho_1 v must stay invertible.
HydroSystem reciprocal_transform_system(const HydroSystem& s, const ConservedCurrent& c1,
                                        const ConservedCurrent& c2, const SamplePlan& plan);

/// The current (0, -1): dt~ = dt.
ConservedCurrent time_preserving_current();
/// The current (1, 0): dx~ = dx.
ConservedCurrent space_preserving_current();

}  // namespace hydroham
