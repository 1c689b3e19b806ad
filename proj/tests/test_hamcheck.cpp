#include <gtest/gtest.h>

#include <cmath>

#include "hydroham/driftflux.hpp"
#include "hydroham/errors.hpp"
#include "hydroham/hamcheck.hpp"
#include "support/mutations.hpp"
#include "support/oracles.hpp"

using namespace hydroham;
namespace df = hydroham::driftflux;

namespace {

SamplePlan plan2() {
  SamplePlan p = df::riemann_plan(100);
  p.box.resize(2);
  return p;
}

LocalOperator dx_operator() {
  LocalOperator a{MetricField(1), ConnectionField(1)};
  a.g(0, 0) = Expr::constant(1);
  return a;
}

LocalOperator flat_identity(int n) {
  LocalOperator a{MetricField(n), ConnectionField(n)};
  for (int i = 0; i < n; ++i) a.g(i, i) = Expr::constant(1);
  return a;
}

NonlocalOperator default_h2_hat() {
  return df::build_H2_hat(df::default_theta(), df::default_lambda1(), df::default_lambda2(),
                          df::default_constant_block());
}

}  // namespace

TEST(SkewAdjoint, Dx) { EXPECT_TRUE(check_skew_adjoint(dx_operator(), SamplePlan::uniform(1)).passed()); }

TEST(SkewAdjoint, H1ThetaOne) {
  EXPECT_TRUE(check_skew_adjoint(df::build_H1_Theta(Expr::constant(1)), df::riemann_plan()).passed());
}

TEST(SkewAdjoint, H1WithNegatedEntryFails) {
  LocalOperator a = df::build_nutku(1);
  for (int k = 0; k < 2; ++k) a.b(0, 1, k) = -a.b(0, 1, k);
  const CheckReport r = check_skew_adjoint(a, plan2());
  ASSERT_FALSE(r.passed());
  const auto& c = r.condition(condition::kSkewConnection);
  EXPECT_FALSE(c.passed);
  ASSERT_TRUE(c.witness.has_value());
  EXPECT_GT(c.max_residual, 1e-3);
}

TEST(LocalHamiltonian, NutkuOperators) {
  for (int k = 1; k <= 3; ++k) {
    const CheckReport r = check_local_hamiltonian(df::build_nutku(k), plan2());
    EXPECT_TRUE(r.passed()) << "H" << k;
    EXPECT_EQ(r.conditions.size(), 5u);
  }
}

TEST(LocalHamiltonian, H1ThetaFamily) {
  for (const char* theta : {"1", "r3", "exp(r3)", "1 + r3^2", "sin(r3) + 2"}) {
    EXPECT_TRUE(check_local_hamiltonian(df::build_H1_Theta(parse_expr(theta, 3)), df::riemann_plan()).passed())
        << theta;
  }
}

TEST(LocalHamiltonian, H2HatLocalPartIsNotFlat) {
  const CheckReport r = check_local_hamiltonian(
      df::build_H2_hat(Expr::constant(1), df::default_lambda1(), df::default_lambda2(), df::default_constant_block())
          .local,
      df::riemann_plan());
  EXPECT_FALSE(r.condition(condition::kFlat).passed);
  EXPECT_TRUE(r.condition(condition::kMetricCompatible).passed);
}

TEST(LocalHamiltonian, DegenerateMetricGatesLaterConditions) {
  const CheckReport r = check_local_hamiltonian(df::build_H1_Theta(Expr::constant(0)), df::riemann_plan());
  const auto& nd = r.condition(condition::kNondegenerate);
  EXPECT_FALSE(nd.passed);
  EXPECT_EQ(nd.max_residual, 1.0);
  EXPECT_FALSE(r.condition(condition::kFlat).evaluated);
  EXPECT_FALSE(r.passed());
}

TEST(LocalHamiltonian, ReportsAreDeterministic) {
  const LocalOperator a = df::build_nutku(3);
  const CheckReport x = check_local_hamiltonian(a, plan2());
  const CheckReport y = check_local_hamiltonian(a, plan2());
  ASSERT_EQ(x.conditions.size(), y.conditions.size());
  for (std::size_t i = 0; i < x.conditions.size(); ++i) {
    EXPECT_EQ(x.conditions[i].max_residual, y.conditions[i].max_residual);
    EXPECT_EQ(x.conditions[i].witness, y.conditions[i].witness);
  }
}

TEST(LocalHamiltonian, RejectsDimensionMismatch) {
  EXPECT_THROW(check_local_hamiltonian(df::build_nutku(1), df::riemann_plan()), InvalidInput);
}

TEST(Ferapontov, H2HatAndH3HatDefaultInstance) {
  const auto cb = df::default_constant_block();
  const Expr th = df::default_theta(), l1 = df::default_lambda1(), l2 = df::default_lambda2();
  for (const auto& op : {df::build_H2_hat(th, l1, l2, cb), df::build_H3_hat(th, l1, l2, cb)}) {
    const CheckReport r = check_ferapontov(op, df::riemann_plan().with_tolerance(1e-8));
    EXPECT_TRUE(r.passed());
    for (const char* id : {condition::kAffinorSelfAdjoint, condition::kCodazzi, condition::kGauss,
                           condition::kAffinorsCommute}) {
      EXPECT_NE(r.find(id), nullptr) << id;
    }
  }
}

TEST(Ferapontov, ZeroB3BreaksGauss) {
  df::ConstantBlock cb = df::default_constant_block();
  cb.b3 = {Rational(0), Rational(0), Rational(0)};
  const NonlocalOperator op =
      df::build_H2_hat(df::default_theta(), df::default_lambda1(), df::default_lambda2(), cb, df::Preconditions::skip);
  const CheckReport r = check_ferapontov(op, df::riemann_plan());
  const auto& gauss = r.condition(condition::kGauss);
  EXPECT_FALSE(gauss.passed);
  EXPECT_GT(gauss.max_residual, 1e-3);
}

TEST(Ferapontov, EmptyTailReducesToLocalCheck) {
  for (int k = 1; k <= 3; ++k) {
    const LocalOperator a = df::build_nutku(k);
    FerapontovOptions opt;
    opt.with_flatness = true;
    const CheckReport f = check_ferapontov(NonlocalOperator{a, {}}, plan2(), opt);
    const CheckReport l = check_local_hamiltonian(a, plan2());
    EXPECT_EQ(f.passed(), l.passed());
    for (const auto& c : l.conditions) {
      const ConditionRecord* m = f.find(c.id);
      ASSERT_NE(m, nullptr) << c.id;
      EXPECT_EQ(m->passed, c.passed);
      EXPECT_EQ(m->max_residual, c.max_residual) << c.id;
    }
  }
}

TEST(Ferapontov, GaussTailSumIsAntisymmetric) {
  const NonlocalOperator op = default_h2_hat();
  const SamplePlan plan = df::riemann_plan(50);
  for (int s = 0; s < plan.count; ++s) {
    const Tensor4 t = gauss_tail_sum(op.tails, plan.point(s));
    const double scale = std::max(1.0, t.max_abs());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) {
            EXPECT_LE(std::abs(t(i, j, k, l) + t(i, j, l, k)), 1e-10 * scale);
            EXPECT_LE(std::abs(t(i, j, k, l) + t(j, i, k, l)), 1e-10 * scale);
          }
  }
}

TEST(Ferapontov, RejectsBadEpsilon) {
  NonlocalOperator op = default_h2_hat();
  op.tails[0].sign = 2;
  EXPECT_THROW(check_ferapontov(op, df::riemann_plan()), InvalidInput);
}

TEST(Pencil, NutkuPairs) {
  const std::vector<double> lambdas{-2.0, -1.0, 0.5, 1.0, 3.0};
  for (auto [i, j] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}}) {
    EXPECT_TRUE(check_pencil_compatibility(df::build_nutku(i), df::build_nutku(j), lambdas, plan2()).passed())
        << i << "," << j;
  }
}

TEST(Pencil, H1ThetaPair) {
  const CheckReport r = check_pencil_compatibility(df::build_H1_Theta(Expr::constant(1)),
                                                   df::build_H1_Theta(parse_expr("r3", 3)),
                                                   {-2.0, -1.0, 0.5, 1.0, 3.0}, df::riemann_plan());
  EXPECT_TRUE(r.passed());
}

TEST(Pencil, LambdaZeroIsTheLocalCheckOfA) {
  const LocalOperator a = df::build_nutku(2), b = df::build_nutku(3);
  const CheckReport pencil = check_pencil_compatibility(a, b, {0.0}, plan2());
  const CheckReport local = check_local_hamiltonian(a, plan2());
  ASSERT_EQ(pencil.conditions.size(), local.conditions.size());
  for (std::size_t i = 0; i < local.conditions.size(); ++i) {
    EXPECT_EQ(pencil.conditions[i].id, "lambda=0/" + local.conditions[i].id);
    EXPECT_EQ(pencil.conditions[i].max_residual, local.conditions[i].max_residual);
  }
}

// g_{H1} + g_{H2} = e^{r2-r1} diag(0, 2) vanishes identically in one entry.
TEST(Pencil, DegenerateMemberIsDecidedByInterpolation) {
  const CheckReport r = check_pencil_compatibility(df::build_nutku(1), df::build_nutku(2), {1.0, 2.0}, plan2());
  const ConditionRecord* c = r.find("lambda=1/jacobi_by_interpolation");
  ASSERT_NE(c, nullptr);
  EXPECT_TRUE(c->passed);
  EXPECT_EQ(r.find("lambda=1/flat"), nullptr);
  EXPECT_NE(r.find("lambda=2/flat"), nullptr);
}

TEST(Pencil, InterpolationNeedsThreeHamiltonianMembers) {
  LocalOperator bad = df::build_nutku(2);
  bad.b(0, 0, 0) = -bad.b(0, 0, 0);
  const CheckReport r = check_pencil_compatibility(df::build_nutku(1), bad, {1.0}, plan2());
  const ConditionRecord* c = r.find("lambda=1/jacobi_by_interpolation");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->passed);
  EXPECT_FALSE(r.passed());
}

TEST(Pencil, MemberIsEntrywiseSum) {
  const LocalOperator a = df::build_nutku(1), b = df::build_nutku(3);
  const LocalOperator m = pencil_member(a, b, 0.5);
  const Point p{0.2, -0.3};
  const Eigen::MatrixXd ga = evaluate(a.g, p), gb = evaluate(b.g, p), gm = evaluate(m.g, p);
  EXPECT_TRUE(gm.isApprox(ga + 0.5 * gb));
}

TEST(Mutations, EveryCatalogEntryFailsClearly) {
  const auto& all = mutation::catalog();
  ASSERT_GE(all.size(), 10u);
  for (const auto& m : all) {
    const CheckReport r = m.run();
    const ConditionRecord* f = mutation::strongest_failure(r);
    ASSERT_NE(f, nullptr) << m.name;
    EXPECT_GE(f->max_residual, 1e-3) << m.name;
    EXPECT_TRUE(f->witness.has_value()) << m.name;
  }
}

TEST(HamiltonianFlow, DxWithQuadraticHamiltonian) {
  const HydroSystem s = hamiltonian_flow(dx_operator(), parse_expr("u1^2/2", 1));
  EXPECT_DOUBLE_EQ(s.v(0, 0).value(Point{0.37}), 1.0);
}

TEST(HamiltonianFlow, ConstantHessian) {
  const HydroSystem s = hamiltonian_flow(flat_identity(2), parse_expr("u1*u2", 2));
  const Eigen::MatrixXd v = s.evaluate(Point{0.4, -0.9});
  EXPECT_EQ(v(0, 0), 0.0);
  EXPECT_EQ(v(0, 1), 1.0);
  EXPECT_EQ(v(1, 0), 1.0);
  EXPECT_EQ(v(1, 1), 0.0);
}

TEST(HamiltonianFlow, NutkuH1AgainstFiniteDifferences) {
  const LocalOperator a = df::build_nutku(1);
  const Expr h = parse_expr("exp(r1 - r2)", 2);
  const HydroSystem s = hamiltonian_flow(a, h);
  const SamplePlan plan = plan2();
  for (int i = 0; i < 20; ++i) {
    const Point p = plan.point(i);
    const Eigen::MatrixXd exact = s.evaluate(p);
    const Eigen::MatrixXd fd = oracle::fd_hamiltonian_flow(a, h, p);
    EXPECT_LE((exact - fd).cwiseAbs().maxCoeff(), 1e-6 * std::max(1.0, exact.cwiseAbs().maxCoeff()));
  }
}

TEST(HamiltonianFlow, RejectsHamiltonianBeyondDimension) {
  EXPECT_THROW(hamiltonian_flow(dx_operator(), parse_expr("u1*u2", 2)), InvalidInput);
}
