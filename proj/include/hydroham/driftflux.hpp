#pragma once

// The drift-flux model in Riemann invariants r = (r1, r2, r3): its systems,
// the Riemann-invariant map, the local and nonlocal Hamiltonian operators
// known for it, and the auxiliary equations their construction rests on.
//
// Operators are transcribed from their printed matrix form
//   prefactor * (diag(...) D_x + c * M(r_x))
// and b^{ij}_k is read off as the coefficient of r^k_x in prefactor * c * M.

#include <array>
#include <string>
#include <string_view>

#include "hydroham/expr.hpp"
#include "hydroham/hamcheck.hpp"
#include "hydroham/hydrosys.hpp"
#include "hydroham/report.hpp"

namespace hydroham::driftflux {

/// r_t + lambda r_x = 0 with lambda = (r1+r2+1, r1+r2-1, r1+r2).
HydroSystem build_system_S();
/// The original system in (rho1, rho2, u) with u_t isolated.
HydroSystem build_system_S_tilde();
/// First two equations of S.
HydroSystem build_system_S0();

/// (rho1, rho2, u) -> (r1, r2, r3), with inverse.
PointChangeMap riemann_map();

/// r1, r2 in [-0.7, 0.7], r3 in [0.1, 1].
SamplePlan riemann_plan(int count = 100);
/// rho1, rho2 in [0.1, 1], u in [-1, 1].
SamplePlan s_tilde_plan(int count = 100);

/// Theta = 1 + r3^2, Lambda1 = r3, Lambda2 = r3^2.
Expr default_theta();
Expr default_lambda1();
Expr default_lambda2();

/// The Nutku operators H1, H2, H3 of the two-component subsystem.
LocalOperator build_nutku(int k);

/// Throws InvalidInput if theta depends on r1 or r2.
LocalOperator build_H1_Theta(const Expr& theta);

struct ConstantBlock {
  std::array<Rational, 3> c;
  std::array<Rational, 3> b1;
  std::array<Rational, 3> b2;
  std::array<Rational, 3> b3;
  std::array<int, 3> eps{1, 1, -1};
};

/// c = (3, 4, 5), b1 = (4, -3, 0), b2 = (0, 5, 4), b3 = (0, 0, 1/5).
ConstantBlock default_constant_block();

/// Throws ConstraintViolation naming the first violated equation of
///   sum eps c^2 = 0, sum eps c b1 = 0, sum eps c b2 = 0, sum eps c b3 = -1.
void validate_constant_block(const ConstantBlock& cb);

/// Throws ConstraintViolation unless Lambda1, Lambda2 and 1 are linearly
/// independent functions of r3 (3 x 3 sample determinant).
void validate_lambda_independence(const Expr& lambda1, const Expr& lambda2);

enum class Preconditions { enforce, skip };

/// Nonlocal prolongations of H2 and H3. `skip` builds the operator even
/// when the constant block or Lambda independence fails (mutation studies).
NonlocalOperator build_H2_hat(const Expr& theta, const Expr& lambda1, const Expr& lambda2, const ConstantBlock& cb,
                              Preconditions pre = Preconditions::enforce);
NonlocalOperator build_H3_hat(const Expr& theta, const Expr& lambda1, const Expr& lambda2, const ConstantBlock& cb,
                              Preconditions pre = Preconditions::enforce);

/// Phi^a = b1_a Lambda1 + b2_a Lambda2 + b3_a.
std::array<Expr, 3> phi_functions(const Expr& lambda1, const Expr& lambda2, const ConstantBlock& cb);

enum class RemarkVariant {
  printed,
  /// The first operator with the sign of its 2 x 2 block of b-terms flipped.
  corrected,
};

/// Local operators of the reciprocally transformed system.
std::array<LocalOperator, 3> build_remark_operators(const Expr& theta, RemarkVariant variant = RemarkVariant::printed);

/// Remark inputs: dt~ = dt and dx~ = e^{r1-r2}(dx - (r1+r2) dt).
ConservedCurrent remark_time_current();
ConservedCurrent remark_space_current();

struct ProlongationAnsatz {
  std::array<int, 3> eps{1, 1, -1};
  std::array<Expr, 3> psi;  // functions of (r1, r2)
  std::array<Expr, 3> phi;  // functions of r3
};

/// Psi^a = c_a e^{r1-r2}, Phi^a from the block.
ProlongationAnsatz h2_ansatz(const ConstantBlock& cb, const Expr& lambda1, const Expr& lambda2);
/// Psi^a = c_a (r1+r2) e^{r1-r2}, Phi^a / 2: the H3-hat affinors in ansatz form.
ProlongationAnsatz h3_ansatz(const ConstantBlock& cb, const Expr& lambda1, const Expr& lambda2);

/// w_a = e^{r2-r1} diag(Psi^a_{r1}, -Psi^a_{r2}, Phi^a + Psi^a).
std::array<AffinorField, 3> ansatz_affinors(const ProlongationAnsatz& a);

/// 2 Psi_{r1 r2} - Psi_{r2} + Psi_{r1} over the plan. Psi must not depend on r3.
CheckReport kg_residual(const Expr& psi, const SamplePlan& plan);

/// e^{k r1 + k r2/(1-2k)}; k = 1/2 throws InvalidInput.
Expr kg_family_u(Rational k);
/// e^{k r1/2 + k r2/(1-2k)}, the exponent as printed; not a solution for k != 0.
Expr kg_family_u_printed(Rational k);
/// ((1-2k)^2 r1 + r2) e^{k r1 + k r2/(1-2k)}.
Expr kg_family_v(Rational k);
/// Psi (r1 + r2) - 2 r1 Psi_{r1} + 2 r2 Psi_{r2}.
Expr kg_characteristic_J(const Expr& psi);

enum class ConstraintTag { eq4a, eq4b, eq4c, eq5, eq7, eq4a3, eq4b3 };

/// Throws InvalidInput for an unknown tag.
ConstraintTag parse_constraint_tag(std::string_view tag);
const char* to_string(ConstraintTag tag);

/// Residual of one constraint equation on the ansatz. `omega` (a function
/// of r3) enters eq5 and `C` enters eq7. Throws ConstraintViolation if some
/// Psi^a fails the Klein-Gordon check on the plan.
CheckReport constraint_residuals(const ProlongationAnsatz& a, ConstraintTag tag, const SamplePlan& plan,
                                 const Expr& omega = Expr(), double C = 0.0);

}  // namespace hydroham::driftflux
