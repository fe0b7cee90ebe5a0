#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "et14/errors.hpp"
#include "et14/kinetic.hpp"

using namespace et14;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const KineticKernel& expk() {
  static const KineticKernel k = exponential_kernel();
  return k;
}

}  // namespace

TEST(Kinetic, KtildeClosedForms) {
  const double pi = std::numbers::pi;
  EXPECT_LE(rel(kinetic_ktilde(expk(), 0, 0.0), 2 * pi * std::pow(3.0, 1.5) * std::tgamma(1.5)),
            1e-12);
  EXPECT_LE(rel(kinetic_ktilde(expk(), 1, 0.0), -2 * pi * std::pow(3.0, 3.5) * std::tgamma(3.5)),
            1e-12);
  EXPECT_NEAR(kinetic_ktilde(expk(), 0, 0.0), 28.9340, 5e-4);
  EXPECT_NEAR(kinetic_ktilde(expk(), 1, 0.0), -976.52, 1e-2);
}

TEST(Kinetic, ExponentialShift) {
  for (int s = 0; s <= 3; ++s) {
    EXPECT_LE(rel(kinetic_ktilde(expk(), s, 0.7), std::exp(-0.7) * kinetic_ktilde(expk(), s, 0.0)),
              1e-11);
  }
}

TEST(Kinetic, CoefficientExamples) {
  EXPECT_NEAR(kinetic_kpq(expk(), 0, 0, {0.0, 1.0, 0.0}), 28.9340, 5e-4);
  EXPECT_NEAR(kinetic_kpq(expk(), 1, 0, {0.0, 1.0, 0.0}), -43.4008, 1e-4);
  EXPECT_NEAR(kinetic_kpq(expk(), 0, 0, {0.0, 4.0, 0.0}), 3.6167, 1e-4);
}

TEST(Kinetic, MatchesSeriesAtZeroPpqq) {
  const GeneratingFamily f = make_family(FamilyKind::kExponential);
  const EquilibriumPoint pt{-0.4, 2.3, 0.0};
  for (int n = 0; n <= 6; ++n) {
    for (int q = 0; q <= n; ++q) {
      const int p = n - q;
      EXPECT_LE(rel(k_pq(f, p, q, pt, (q + 1) / 2), kinetic_kpq(expk(), p, q, pt)), 1e-7)
          << p << "," << q;
    }
  }
  for (int s = 0; s <= 4; ++s) {
    EXPECT_LE(rel(k_s_value(f, s, pt), kinetic_series_ks(expk(), s, pt.lambda, pt.lambda_ll)),
              1e-7);
  }
}

TEST(Kinetic, FamilyMatchesBuiltIn) {
  const GeneratingFamily built = make_family(FamilyKind::kExponential);
  const GeneratingFamily quad = make_kinetic_family(expk(), 5);
  for (int s = 0; s <= 4; ++s) {
    for (double lambda = -1.0; lambda <= 1.0; lambda += 0.5) {
      EXPECT_LE(rel(quad.ktilde(s, lambda), built.ktilde(s, lambda)), 1e-8);
    }
  }
}

TEST(Kinetic, PolyExponentialFamilyIsValid) {
  const GeneratingFamily f = make_kinetic_family(poly_exponential_kernel(), 5);
  for (int s = 0; s <= 4; ++s) EXPECT_LE(ladder_residual(f, s, 0.2), 1e-6);
}

TEST(Kinetic, GrowingKernelIsRejected) {
  const KineticKernel grow = power_kernel(2);
  EXPECT_FALSE(certify_decay(grow, {0.0, 1.0, 0.0}).ok);
  EXPECT_THROW(radial_integral(grow, 0, 2, {0.0, 1.0, 0.0}), DecayError);
  EXPECT_THROW(make_kinetic_family(grow, 3), DecayError);
}

TEST(Kinetic, ByPartsIdentity) {
  for (const EquilibriumPoint& pt : {EquilibriumPoint{0.0, 1.0, 0.0}, {0.0, 1.0, 0.1}}) {
    const ByPartsCheck c = f1_by_parts_check(expk(), pt);
    EXPECT_TRUE(c.decay_ok);
    EXPECT_TRUE(c.passed);
    EXPECT_LE(c.residual, 1e-8);
  }
  const ByPartsCheck bad = f1_by_parts_check(power_kernel(1), {0.0, 1.0, 0.0});
  EXPECT_FALSE(bad.decay_ok);
  EXPECT_FALSE(bad.passed);
  EXPECT_GT(bad.boundary_term, 0.0);
}

TEST(Kinetic, Rejections) {
  EXPECT_THROW(kinetic_kpq(expk(), 0, 0, {0.0, 1.0, -0.1}), DomainError);
  EXPECT_THROW(kinetic_kpq(expk(), 0, 0, {0.0, -1.0, 0.0}), DomainError);
  QuadratureSpec loose;
  loose.rel_tol = 1e-2;
  EXPECT_THROW(kinetic_kpq(expk(), 0, 0, {0.0, 1.0, 0.0}, loose), AccuracyError);
}

TEST(Kinetic, FixedNodeRuleAgrees) {
  QuadratureSpec fixed;
  fixed.rule = QuadratureSpec::Rule::kFixedNode;
  fixed.node_budget = 40;
  fixed.rel_tol = 1e-10;
  const EquilibriumPoint pt{0.3, 1.8, 0.0};
  for (int q = 0; q <= 3; ++q) {
    EXPECT_LE(rel(kinetic_kpq(expk(), 1, q, pt, fixed), kinetic_kpq(expk(), 1, q, pt)), 1e-9);
  }
}
