#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "et14/errors.hpp"
#include "et14/family.hpp"

using namespace et14;

namespace {

// ktilde_s(lambda) for F = exp(-x): (-1)^s 2 pi 3^a Gamma(a) e^{-lambda}, a = (3+4s)/2.
double exponential_oracle(int s, double lambda) {
  const double a = (3.0 + 4.0 * s) / 2.0;
  const double sign = s % 2 == 0 ? 1.0 : -1.0;
  return sign * 2.0 * std::numbers::pi * std::pow(3.0, a) * std::tgamma(a) * std::exp(-lambda);
}

}  // namespace

TEST(Family, ExponentialValuesAtZero) {
  const GeneratingFamily f = make_family(FamilyKind::kExponential);
  EXPECT_NEAR(f.ktilde(0, 0.0), 28.9340, 5e-4);
  EXPECT_NEAR(f.ktilde(1, 0.0), -976.52, 1e-2);
  EXPECT_NEAR(f.ktilde(2, 0.0), 138421.495, 1e-2);
}

TEST(Family, ExponentialMatchesGammaClosedForm) {
  const GeneratingFamily f = make_family(FamilyKind::kExponential);
  for (int s = 0; s <= 6; ++s) {
    for (double lambda : {-1.0, -0.3, 0.0, 0.4, 1.0}) {
      const double ref = exponential_oracle(s, lambda);
      EXPECT_NEAR(f.ktilde(s, lambda), ref, 1e-12 * std::abs(ref)) << "s=" << s;
      // d/dlambda flips the sign for this kernel.
      EXPECT_NEAR(f.member(s, 1, lambda), -ref, 1e-12 * std::abs(ref));
    }
  }
}

TEST(Family, DerivativeOfSecondMemberFollowsLadder) {
  const GeneratingFamily f = make_family(FamilyKind::kExponential);
  EXPECT_NEAR(f.member(1, 1, 0.0), 135.0 / 4.0 * f.ktilde(0, 0.0), 1e-10);
  EXPECT_NEAR(f.member(1, 1, 0.0), 976.52, 1e-2);
}

TEST(Family, LadderFactor) {
  EXPECT_EQ(ladder_factor(0), Rational(135, 4));
  EXPECT_EQ(ladder_factor(1), Rational(567, 4));
  EXPECT_EQ(ladder_factor(2), Rational(1287, 4));
}

TEST(Family, LadderResidualSmallForBuiltIns) {
  for (FamilyKind kind : {FamilyKind::kExponential, FamilyKind::kPolyExponential}) {
    const GeneratingFamily f = make_family(kind);
    for (int s = 0; s <= 4; ++s) {
      for (double lambda = -1.0; lambda <= 1.0; lambda += 0.25) {
        EXPECT_LE(ladder_residual(f, s, lambda), 1e-10) << f.name() << " s=" << s;
      }
    }
  }
}

TEST(Family, PerturbedFamilyBreaksLadder) {
  const GeneratingFamily f = make_perturbed_family(make_family(FamilyKind::kExponential), 1, 1.0);
  // A constant shift of ktilde_1 leaves its derivative alone, so the first
  // broken rung is s = 1.
  EXPECT_LE(ladder_residual(f, 0, 0.0), 1e-10);
  EXPECT_GT(ladder_residual(f, 1, 0.0), 1e-4);
  EXPECT_NEAR(f.ktilde(1, 0.0), make_family(FamilyKind::kExponential).ktilde(1, 0.0) + 1.0,
              1e-9);
}

TEST(Family, BoundaryMemberIsFinite) {
  const GeneratingFamily f = make_family(FamilyKind::kExponential);
  EXPECT_TRUE(std::isfinite(ladder_residual(f, f.s_max() - 1, 0.0)));
  EXPECT_THROW(f.member(f.s_max() + 1, 0, 0.0), TruncationError);
  EXPECT_THROW(f.member(0, f.n_max() + 1, 0.0), TruncationError);
}

TEST(Family, GateRejectsBrokenLadder) {
  auto oracle = [](int s, int, double lambda) { return (s + 1) * std::exp(-lambda); };
  try {
    GeneratingFamily::checked("broken", FamilyKind::kCustom, oracle, 3, 4);
    FAIL() << "gate accepted a broken family";
  } catch (const FamilyError& e) {
    EXPECT_EQ(e.failing_s(), 0);
  }
}

TEST(Family, GateAcceptsScaledExponential) {
  FamilyParams p;
  p.amplitude = 2.5;
  p.scale = 1.7;
  const GeneratingFamily f = make_family(FamilyKind::kExponential, p);
  EXPECT_LE(ladder_residual(f, 2, 0.3), 1e-10);
}

TEST(Family, KindNames) {
  EXPECT_EQ(family_kind_from_string(to_string(FamilyKind::kPolyExponential)),
            FamilyKind::kPolyExponential);
  EXPECT_THROW(family_kind_from_string("gaussian"), Error);
}
