#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "et14/coeffs.hpp"
#include "et14/errors.hpp"
#include "et14/numdiff.hpp"

using namespace et14;

namespace {

const GeneratingFamily& expf() {
  static const GeneratingFamily f = make_family(FamilyKind::kExponential);
  return f;
}

double ktilde_oracle(int s) {
  const double a = (3.0 + 4.0 * s) / 2.0;
  return (s % 2 == 0 ? 1.0 : -1.0) * 2.0 * std::numbers::pi * std::pow(3.0, a) * std::tgamma(a);
}

}  // namespace

TEST(Coeffs, KsValueScaling) {
  EXPECT_NEAR(k_s_value(expf(), 0, {0.0, 1.0, 0.0}), 28.9340, 5e-4);
  EXPECT_NEAR(k_s_value(expf(), 0, {0.0, 4.0, 0.0}), 3.6167, 1e-4);
  EXPECT_DOUBLE_EQ(k_s_value(expf(), 0, {0.7, 1.0, 0.0}), expf().ktilde(0, 0.7));
}

TEST(Coeffs, K00Truncation) {
  const EquilibriumPoint eq{0.2, 1.3, 0.0};
  for (int S = 0; S <= 4; ++S) EXPECT_DOUBLE_EQ(k00(expf(), eq, S), k_s_value(expf(), 0, eq));
  const EquilibriumPoint pt{0.0, 1.0, 0.01};
  EXPECT_DOUBLE_EQ(k00(expf(), pt, 0), k_s_value(expf(), 0, pt));
  const double expected =
      ktilde_oracle(0) + 0.01 * ktilde_oracle(1) + 0.5e-4 * ktilde_oracle(2);
  EXPECT_NEAR(k00(expf(), pt, 2), expected, 1e-10 * std::abs(expected));
}

TEST(Coeffs, DomainGate) {
  EXPECT_THROW(k_pq(expf(), 0, 0, {0.0, -1.0, 0.0}, 4), DomainError);
  EXPECT_THROW(k_pq(expf(), 0, 0, {0.0, 0.0, 0.0}, 4), DomainError);
  EXPECT_THROW(k_pq(expf(), 0, 0, {NAN, 1.0, 0.0}, 4), DomainError);
  try {
    require_domain({0.0, -1.0, 0.0});
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("positive"), std::string::npos);
  }
}

TEST(Coeffs, FirstEntries) {
  const EquilibriumPoint pt{0.0, 1.0, 0.0};
  EXPECT_NEAR(k_pq(expf(), 1, 0, pt, 0), -43.401, 1e-3);
  EXPECT_NEAR(k_pq(expf(), 1, 0, pt, 0), -1.5 * ktilde_oracle(0), 1e-12);
  EXPECT_NEAR(k_pq(expf(), 2, 0, pt, 0), 43.401, 1e-3);
  EXPECT_NEAR(k_pq(expf(), 0, 2, pt, 1), 3417.8, 0.05);
  EXPECT_NEAR(k_pq(expf(), 0, 2, pt, 1), -3.5 * ktilde_oracle(1), 1e-9);
  EXPECT_THROW(k_pq(expf(), 0, 2, pt, 0), TruncationError);
}

TEST(Coeffs, StepLawsAgainstFiniteDifferences) {
  // At lambda_ppqq = 0 the lambda and lambda_ll step laws can be checked
  // with plain finite differences of lower entries.
  const double lambda = 0.3;
  const double L = 1.7;
  auto k = [&](int p, int q, double lam, double ll) {
    return k_pq(expf(), p, q, {lam, ll, 0.0}, 6);
  };
  for (int p = 0; p <= 3; ++p) {
    for (int q = 0; q <= 3; ++q) {
      const int n = p + q;
      const double next_row = k(p + 1, q, lambda, L);
      double expected;
      if (n % 2 == 1) {
        expected = central_diff4([&](double x) { return k(p, q, x, L); }, lambda);
      } else {
        expected = 3.0 * (n + 1) / (n + 3) *
                   central_diff4([&](double x) { return k(p, q, lambda, x); }, L);
      }
      EXPECT_NEAR(next_row, expected, 1e-7 * std::abs(next_row)) << p << "," << q;
      if (n % 2 == 1) {
        const double next_col = k(p, q + 1, lambda, L);
        const double fd = 3.0 * central_diff4([&](double x) { return k(p, q, lambda, x); }, L);
        EXPECT_NEAR(next_col, fd, 1e-7 * std::abs(next_col)) << p << "," << q;
      }
    }
  }
}

TEST(Coeffs, PathIndependence) {
  // Different paths give different derivative terms; they agree in value
  // through the family identities.
  std::mt19937 rng(7);
  const EquilibriumPoint pt{0.4, 1.9, 0.03};
  for (int p = 0; p <= 5; ++p) {
    for (int q = 0; q <= 5; ++q) {
      std::vector<Step> path(p, Step::kRow);
      path.insert(path.end(), q, Step::kColumn);
      const double ref = k_pq(expf(), p, q, pt, 6);
      for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(path.begin(), path.end(), rng);
        EXPECT_NEAR(k_pq(expf(), p, q, pt, 6, path), ref, 1e-10 * std::abs(ref))
            << p << "," << q;
      }
    }
  }
}

TEST(Coeffs, FirstRowClosedForm) {
  EXPECT_DOUBLE_EQ(k0q_closed(expf(), 0, 0.4, 2.0), std::pow(2.0, -1.5) * expf().ktilde(0, 0.4));
  EXPECT_NEAR(k0q_closed(expf(), 2, 0.0, 1.0), 3417.8, 0.05);
  EXPECT_NEAR(k0q_closed(expf(), 1, 0.0, 1.0), -325.51, 0.01);
  EXPECT_NEAR(k0q_closed(expf(), 1, 0.0, 1.0), ktilde_oracle(1) / 3.0, 1e-10);
}

TEST(Coeffs, EtaProduct) {
  EXPECT_EQ(eta_product(7, 7), 7);
  EXPECT_EQ(eta_product(3, 1), 1);
  EXPECT_EQ(eta_product(11, 13), 143);
  EXPECT_THROW(eta_product(3, 6), ParityError);
}

TEST(Coeffs, PotentialCoefficients) {
  const EquilibriumPoint pt{0.0, 1.0, 0.0};
  EXPECT_NEAR(h_pqr(expf(), {0, 0, 0, 4}, pt), 28.9340, 5e-4);
  EXPECT_NEAR(h_pqr(expf(), {0, 0, 1, 4}, pt), -1.5 * ktilde_oracle(0), 1e-10);
  EXPECT_EQ(phi_pqr(expf(), {0, 0, 0, 4}, pt), 0.0);
  EXPECT_EQ(h_pqr(expf(), {1, 0, 2, 4}, pt), 0.0);
  EXPECT_DOUBLE_EQ(phi_pqr(expf(), {1, 0, 0, 4}, pt), k_pq(expf(), 1, 0, pt, 4));
}

TEST(Coeffs, Subsystem) {
  EXPECT_NEAR(subsystem_I(expf(), 0, 0.0), 28.9340, 5e-4);
  EXPECT_NEAR(subsystem_I(expf(), 2, 0.0), -1.5 / 3.0 * 7.0 * ktilde_oracle(1), 1e-9);
  const SubsystemTable t = reduce_to_13(expf(), 6, 0.2);
  ASSERT_EQ(t.I.size(), 4u);
  for (const auto& [q, c] : t.c) EXPECT_EQ(c, 0.0) << q;
  for (const auto& [q, I] : t.I) {
    EXPECT_NEAR(I, k_pq(expf(), 0, q, {0.2, 1.0, 0.0}, q / 2), 1e-9 * std::abs(I)) << q;
  }
  EXPECT_THROW(subsystem_I(expf(), 3, 0.0), ParityError);
}

TEST(Coeffs, Constraints) {
  for (const EquilibriumPoint& pt :
       {EquilibriumPoint{0.0, 1.0, 0.0}, EquilibriumPoint{-0.6, 2.4, 0.03},
        EquilibriumPoint{0.9, 0.6, 0.05}}) {
    const ConstraintResiduals r = constraint_residuals(expf(), pt, 4);
    EXPECT_LE(r.c_condition, 1e-9);
    EXPECT_LE(r.f1_condition, 1e-9);
  }
  EXPECT_LE(constraint_residuals(expf(), {0.3, 1.2, 0.0}, 2).f1_condition, 1e-12);
  const GeneratingFamily broken = make_perturbed_family(expf(), 1, 1.0);
  EXPECT_GT(constraint_residuals(broken, {0.0, 1.0, 0.02}, 4).c_condition, 1e-6);
}
