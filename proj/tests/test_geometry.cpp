#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hydroham/driftflux.hpp"
#include "hydroham/errors.hpp"
#include "hydroham/eval.hpp"
#include "hydroham/geometry.hpp"
#include "hydroham/hamcheck.hpp"
#include "support/oracles.hpp"

using namespace hydroham;
namespace df = hydroham::driftflux;

namespace {

MetricField metric(int n, std::initializer_list<const char*> entries) {
  MetricField g(n);
  int i = 0;
  for (const char* e : entries) g.entries[i++] = parse_expr(e, n);
  return g;
}

MetricField identity_metric(int n) {
  MetricField g(n);
  for (int i = 0; i < n; ++i) g(i, i) = Expr::constant(1);
  return g;
}

MetricField h1_metric() { return metric(2, {"-exp(u2 - u1)", "0", "0", "exp(u2 - u1)"}); }

SamplePlan box(int n, int count = 100) {
  SamplePlan p = SamplePlan::uniform(n, -0.7, 0.7);
  p.count = count;
  return p;
}

double max_diff(const Tensor3& a, const Tensor3& b) {
  const int n = a.dimension();
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) m = std::max(m, std::abs(a(i, j, k) - b(i, j, k)));
  return m;
}

}  // namespace

TEST(InvertMetric, Identity) {
  const Eigen::MatrixXd low = invert_metric(identity_metric(3), Point{0.2, 0.3, 0.4});
  EXPECT_TRUE(low.isApprox(Eigen::MatrixXd::Identity(3, 3)));
}

TEST(InvertMetric, SelfInverseDiagonalAtOrigin) {
  const Eigen::MatrixXd low = invert_metric(h1_metric(), Point{0, 0});
  EXPECT_DOUBLE_EQ(low(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(low(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(low(0, 1), 0.0);
}

TEST(InvertMetric, DegenerateThetaZero) {
  const LocalOperator a = df::build_H1_Theta(Expr::constant(0));
  EXPECT_THROW(invert_metric(a.g, Point{0.1, 0.2, 0.5}), DegenerateMetricError);
}

TEST(ScaledDeterminant, RowScalingRemovesMagnitude) {
  Eigen::MatrixXd m(2, 2);
  m << 1e-12, 0, 0, 1e12;
  EXPECT_DOUBLE_EQ(scaled_determinant(m), 1.0);
  m << 1, 2, 2, 4;
  EXPECT_DOUBLE_EQ(scaled_determinant(m), 0.0);
}

TEST(Christoffel, ZeroConnection) {
  const Tensor3 g = christoffel_from_b(h1_metric(), ConnectionField(2), Point{0.3, -0.1});
  EXPECT_EQ(g.max_abs(), 0.0);
}

TEST(Christoffel, IdentityMetricGivesMinusB) {
  ConnectionField b(3);
  const char* entries[] = {"u1", "u2*u3", "exp(u1)", "1/3", "-u2", "sin(u3)"};
  for (std::size_t i = 0; i < b.entries.size(); ++i) b.entries[i] = parse_expr(entries[i % 6], 3) * Expr::constant(i);
  const Point p{0.1, -0.4, 0.6};
  const Tensor3 gamma = christoffel_from_b(identity_metric(3), b, p);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(gamma(j, i, k), -eval_scalar(b(i, j, k), p));
}

TEST(Christoffel, NutkuH1TwoPathsAgreeAtOrigin) {
  const LocalOperator a = df::build_nutku(1);
  const Point p{0, 0};
  EXPECT_LE(max_diff(christoffel_from_b(a.g, a.b, p), levi_civita(a.g, p)), 1e-15);
}

TEST(LeviCivita, IdentityMetricIsFlatConnection) {
  EXPECT_EQ(levi_civita(identity_metric(3), Point{0.5, 0.1, -0.2}).max_abs(), 0.0);
}

TEST(LeviCivita, OneDimensionalExponential) {
  const MetricField g = metric(1, {"exp(u1)"});
  const SamplePlan plan = box(1, 20);
  for (int i = 0; i < plan.count; ++i) {
    const Point p = plan.point(i);
    EXPECT_NEAR(levi_civita(g, p)(0, 0, 0), -0.5, 1e-14);
    EXPECT_NEAR(oracle::fd_levi_civita(g, p)(0, 0, 0), -0.5, 1e-8);
  }
}

TEST(LeviCivita, MatchesFiniteDifferenceOracle) {
  const MetricField metrics[] = {h1_metric(), df::build_H1_Theta(parse_expr("1 + r3^2", 3)).g,
                                 df::build_nutku(3).g, metric(2, {"1 + u1^2", "u1*u2", "u1*u2", "2 + u2^2"})};
  for (const auto& g : metrics) {
    // H3's metric e^{r2-r1} diag(r1, r2) degenerates on the axes
    SamplePlan plan = SamplePlan::uniform(g.dimension, 0.1, 0.7);
    plan.count = 20;
    for (int i = 0; i < plan.count; ++i) {
      const Point p = plan.point(i);
      const Tensor3 exact = levi_civita(g, p);
      EXPECT_LE(max_diff(exact, oracle::fd_levi_civita(g, p)), 1e-7 * std::max(1.0, exact.max_abs()));
    }
  }
}

TEST(LeviCivita, MetricCompatibleForH1Metric) {
  const MetricField g = h1_metric();
  const SamplePlan plan = box(2);
  for (int i = 0; i < plan.count; ++i) {
    const Point p = plan.point(i);
    const Tensor3 gamma = levi_civita(g, p);
    const Eigen::MatrixXd low = oracle::lower_metric(g, p);
    for (int k = 0; k < 2; ++k) {
      Point a = p, b = p;
      a[k] += 1e-5;
      b[k] -= 1e-5;
      const Eigen::MatrixXd dlow = (oracle::lower_metric(g, a) - oracle::lower_metric(g, b)) / 2e-5;
      for (int ii = 0; ii < 2; ++ii) {
        for (int j = 0; j < 2; ++j) {
          double r = dlow(ii, j);
          for (int s = 0; s < 2; ++s) r -= gamma(s, ii, k) * low(s, j) + gamma(s, j, k) * low(ii, s);
          EXPECT_NEAR(r, 0.0, 1e-9);
        }
      }
    }
  }
}

TEST(Curvature, FlatIdentityMetric) {
  const Curvature c = riemann_curvature(identity_metric(3), Point{0.3, 0.2, 0.1});
  EXPECT_EQ(c.lower.max_abs(), 0.0);
  EXPECT_EQ(c.raised.max_abs(), 0.0);
}

TEST(Curvature, RoundSphereHasSectionalCurvatureOne) {
  const MetricField g = metric(2, {"1", "0", "0", "1/sin(u1)^2"});
  EXPECT_NEAR(oracle::sectional_curvature(g, Point{std::numbers::pi / 4, 0.3}), 1.0, 1e-12);
  EXPECT_NEAR(oracle::sectional_curvature(g, Point{1.1, -0.5}), 1.0, 1e-12);
}

TEST(Curvature, SphereOfRadiusTwo) {
  const MetricField g = metric(2, {"1/4", "0", "0", "1/(4*sin(u1)^2)"});
  EXPECT_NEAR(oracle::sectional_curvature(g, Point{0.9, 0.0}), 0.25, 1e-12);
}

TEST(Curvature, H1MetricIsFlat) {
  const MetricField g = h1_metric();
  const SamplePlan plan = box(2);
  for (int i = 0; i < plan.count; ++i) {
    const Curvature c = riemann_curvature(g, plan.point(i));
    EXPECT_LE(c.lower.max_abs(), 1e-12 * std::max(1.0, c.lower_scale.max_abs()));
  }
}

TEST(Curvature, MatchesFiniteDifferenceOracle) {
  const MetricField metrics[] = {metric(2, {"1 + u1^2", "u1*u2", "u1*u2", "2 + u2^2"}),
                                 df::build_H2_hat(df::default_theta(), df::default_lambda1(), df::default_lambda2(),
                                                  df::default_constant_block())
                                     .local.g};
  for (const auto& g : metrics) {
    SamplePlan plan = df::riemann_plan(5);
    plan.box.resize(g.dimension);
    for (int i = 0; i < plan.count; ++i) {
      const Point p = plan.point(i);
      const Curvature c = riemann_curvature(g, p);
      const Tensor4 fd = oracle::fd_curvature(g, p);
      const int n = g.dimension;
      double worst = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) worst = std::max(worst, std::abs(c.lower(a, b, k, l) - fd(a, b, k, l)));
      EXPECT_LE(worst, 1e-5 * std::max(1.0, c.lower_scale.max_abs()));
    }
  }
}

TEST(Curvature, SymmetriesOnCurvedMetrics) {
  const MetricField metrics[] = {
      metric(2, {"1", "0", "0", "1/sin(u1)^2"}),
      metric(3, {"1 + u1^2", "u1*u2", "0", "u1*u2", "2 + u2^2", "u3", "0", "u3", "3 + exp(u1)"}),
      df::build_H3_hat(df::default_theta(), df::default_lambda1(), df::default_lambda2(), df::default_constant_block())
          .local.g,
  };
  for (const auto& g : metrics) {
    SamplePlan plan = SamplePlan::uniform(g.dimension, 0.2, 0.9);
    const auto s = oracle::curvature_symmetries(g, plan);
    EXPECT_LE(s.antisymmetry_lower, 1e-10);
    EXPECT_LE(s.antisymmetry_raised, 1e-10);
    EXPECT_LE(s.bianchi, 1e-9);
  }
}

TEST(CovariantDerivative, IdentityAffinorIsParallel) {
  AffinorField w(3, 1);
  for (int i = 0; i < 3; ++i) w(i, i) = Expr::constant(1);
  const MetricField g = df::build_H1_Theta(parse_expr("1 + r3^2", 3)).g;
  EXPECT_LE(covariant_derivative_affinor(w, g, Point{0.1, 0.2, 0.5}).max_abs(), 1e-14);
}

TEST(CovariantDerivative, ConstantDiagonalOnFlatMetric) {
  AffinorField w(3, -1);
  for (int i = 0; i < 3; ++i) w(i, i) = Expr::constant(Rational(7, 3));
  EXPECT_EQ(covariant_derivative_affinor(w, identity_metric(3), Point{0.1, 0.2, 0.5}).max_abs(), 0.0);
}

TEST(CovariantDerivative, CodazziForH2HatAffinors) {
  const NonlocalOperator op = df::build_H2_hat(df::default_theta(), df::default_lambda1(), df::default_lambda2(),
                                               df::default_constant_block());
  const SamplePlan plan = df::riemann_plan();
  for (const auto& w : op.tails) {
    for (int s = 0; s < plan.count; ++s) {
      const Point p = plan.point(s);
      Tensor3 scale(3);
      const Tensor3 nw = covariant_derivative_affinor(w, op.local.g, p, &scale);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k) {
            EXPECT_LE(std::abs(nw(i, j, k) - nw(i, k, j)), 1e-12 * std::max({1.0, scale(i, j, k), scale(i, k, j)}));
          }
    }
  }
}

// The Gauss equation of the default H2^ instance holds with the chosen sign of
// R and fails with the opposite one; a perturbed affinor breaks it.
TEST(Calibration, CurvatureSignMakesGaussHold) {
  const NonlocalOperator op = df::build_H2_hat(df::default_theta(), df::default_lambda1(), df::default_lambda2(),
                                               df::default_constant_block());
  const SamplePlan plan = df::riemann_plan(30);
  double same = 0.0, flipped = 0.0, perturbed = 0.0;
  NonlocalOperator bent = op;
  bent.tails[0](0, 0) = bent.tails[0](0, 0) * Expr::constant(Rational(11, 10));
  for (int s = 0; s < plan.count; ++s) {
    const Point p = plan.point(s);
    const Curvature c = riemann_curvature(op.local.g, p);
    const Tensor4 rhs = gauss_tail_sum(op.tails, p);
    const Tensor4 rhs_bent = gauss_tail_sum(bent.tails, p);
    const double scale = std::max(c.raised.max_abs(), rhs.max_abs());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) {
            same = std::max(same, std::abs(c.raised(i, j, k, l) - rhs(i, j, k, l)) / scale);
            flipped = std::max(flipped, std::abs(-c.raised(i, j, k, l) - rhs(i, j, k, l)) / scale);
            perturbed = std::max(perturbed, std::abs(c.raised(i, j, k, l) - rhs_bent(i, j, k, l)) / scale);
          }
  }
  EXPECT_LE(same, 1e-12);
  EXPECT_GE(flipped, 1e-1);
  EXPECT_GE(perturbed, 1e-3);
}
