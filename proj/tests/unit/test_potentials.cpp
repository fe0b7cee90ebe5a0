#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "et14/errors.hpp"
#include "et14/potentials.hpp"

using namespace et14;

namespace {

const GeneratingFamily& expf() {
  static const GeneratingFamily f = make_family(FamilyKind::kExponential);
  return f;
}

double k10() { return k_pq(expf(), 1, 0, {0.0, 1.0, 0.0}, 4); }

// lambda + lambda_i c_i + lambda_ij c_i c_j + lambda_ill_i c_i c^2 + lambda_iill c^4
double multiplier_polynomial(const MultiplierState& s, const Vec3& c) {
  const double c2 = dot(c, c);
  double quad = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) quad += s.lambda_ij(i, j) * c[i] * c[j];
  return s.lambda + dot(s.lambda_i, c) + quad + dot(s.lambda_ill, c) * c2 +
         s.lambda_iill * c2 * c2;
}

struct Particle {
  double w;
  Vec3 c;
};

// Moments of a weighted point set, straight from the definitions.
MomentSet particle_moments(const std::vector<Particle>& ps, Frame frame) {
  MomentSet m;
  m.frame = frame;
  for (const auto& [w, c] : ps) {
    const double c2 = dot(c, c);
    m.m += w;
    m.m_iill += w * c2 * c2;
    for (int i = 0; i < 3; ++i) {
      m.m_i[i] += w * c[i];
      m.m_ill[i] += w * c[i] * c2;
      for (int j = i; j < 3; ++j) m.m_ij(i, j) += w * c[i] * c[j];
    }
    for (int k = 0; k < 3; ++k) {
      m.m_k[k] += w * c[k];
      m.m_kiill[k] += w * c[k] * c2 * c2;
      for (int i = 0; i < 3; ++i) {
        m.m_ki[k][i] += w * c[k] * c[i];
        m.m_kill[k][i] += w * c[k] * c[i] * c2;
        for (int j = i; j < 3; ++j) m.m_kij[k](i, j) += w * c[k] * c[i] * c[j];
      }
    }
  }
  return m;
}

void expect_moments_near(const MomentSet& a, const MomentSet& b, double tol) {
  auto near = [&](double x, double y) { EXPECT_NEAR(x, y, tol * std::max(1.0, std::abs(y))); };
  near(a.m, b.m);
  near(a.m_iill, b.m_iill);
  for (int i = 0; i < 3; ++i) {
    near(a.m_i[i], b.m_i[i]);
    near(a.m_ill[i], b.m_ill[i]);
    near(a.m_k[i], b.m_k[i]);
    near(a.m_kiill[i], b.m_kiill[i]);
    for (int j = 0; j < 3; ++j) {
      near(a.m_ij(i, j), b.m_ij(i, j));
      near(a.m_ki[i][j], b.m_ki[i][j]);
      near(a.m_kill[i][j], b.m_kill[i][j]);
      for (int l = 0; l < 3; ++l) near(a.m_kij[i](j, l), b.m_kij[i](j, l));
    }
  }
}

MultiplierState random_lab_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  MultiplierState s;
  s.frame = Frame::kLab;
  s.lambda = u(rng);
  for (int i = 0; i < 3; ++i) {
    s.lambda_i[i] = u(rng);
    s.lambda_ill[i] = u(rng);
    for (int j = i; j < 3; ++j) s.lambda_ij(i, j) = u(rng);
  }
  s.lambda_iill = 0.1 + 0.1 * u(rng);
  return s;
}

}  // namespace

TEST(Potentials, EquilibriumDensity) {
  const MultiplierState eq = equilibrium_state(0.0, 1.0);
  EXPECT_NEAR(eval_h_hat(expf(), eq, 6, 4), 28.9340, 5e-4);
  const Vec3 phi = eval_phi_hat(expf(), eq, 6, 4);
  for (double x : phi) EXPECT_EQ(x, 0.0);
}

TEST(Potentials, VelocityMultiplierSecondOrder) {
  MultiplierState s = equilibrium_state(0.0, 1.0);
  s.lambda_i = {0.1, 0.0, 0.0};
  const double expected = k00(expf(), {0.0, 1.0, 0.0}, 4) +
                          0.5 * k_pq(expf(), 2, 0, {0.0, 1.0, 0.0}, 4) * 0.01;
  EXPECT_NEAR(eval_h_hat(expf(), s, 2, 4), expected, 1e-12 * expected);
  EXPECT_NEAR(eval_h_hat(expf(), s, 2, 4), 29.151, 1e-3);
}

TEST(Potentials, ZeroTruncationIsK00) {
  MultiplierState s = equilibrium_state(0.3, 1.4);
  s.lambda_i = {0.1, -0.05, 0.02};
  s.lambda_iill = 0.03;
  // lambda_ppqq carries weight 2, so N = 0 also drops its powers.
  EXPECT_DOUBLE_EQ(eval_h_hat(expf(), s, 0, 4), k00(expf(), {0.3, 1.4, 0.03}, 0));
  s.lambda_iill = 0.0;
  EXPECT_DOUBLE_EQ(eval_h_hat(expf(), s, 0, 4), k00(expf(), {0.3, 1.4, 0.0}, 4));
}

TEST(Potentials, FirstOrderFlux) {
  MultiplierState s = equilibrium_state(0.0, 1.0);
  s.lambda_i = {0.1, 0.0, 0.0};
  EXPECT_NEAR(eval_phi_hat(expf(), s, 1, 4)[0], 0.1 * k10(), 1e-12);
  EXPECT_NEAR(eval_phi_hat(expf(), s, 1, 4)[0], -4.3401, 1e-4);
  MultiplierState t = equilibrium_state(0.0, 1.0);
  t.lambda_ill = {0.0, 0.1, 0.0};
  EXPECT_NEAR(eval_phi_hat(expf(), t, 1, 4)[1], -32.551, 1e-3);
}

TEST(Potentials, DomainAndFrameChecks) {
  EXPECT_THROW(eval_h_hat(expf(), equilibrium_state(0.0, -1.0), 6, 4), DomainError);
  MultiplierState lab = equilibrium_state(0.0, 1.0);
  lab.frame = Frame::kLab;
  EXPECT_THROW(eval_h_hat(expf(), lab, 6, 4), Error);
  EXPECT_THROW(hat_multipliers(equilibrium_state(0.0, 1.0), {}), Error);
}

TEST(Boost, ZeroVelocityIsIdentity) {
  std::mt19937_64 rng(3);
  MultiplierState lab = random_lab_state(rng);
  MultiplierState hat = hat_multipliers(lab, {});
  hat.frame = Frame::kLab;
  EXPECT_EQ(hat, lab);
}

TEST(Boost, SimpleSubstitution) {
  MultiplierState lab;
  lab.frame = Frame::kLab;
  lab.lambda = 2.0;
  lab.lambda_i = {1.0, 0.0, 0.0};
  lab.lambda_iill = 0.3;
  const MultiplierState hat = hat_multipliers(lab, {{1.0, 0.0, 0.0}});
  EXPECT_EQ(hat.lambda_iill, 0.3);
  lab.lambda_iill = 0.0;
  const MultiplierState h2 = hat_multipliers(lab, {{1.0, 0.0, 0.0}});
  EXPECT_DOUBLE_EQ(h2.lambda, 3.0);
  EXPECT_EQ(h2.lambda_i, (Vec3{1.0, 0.0, 0.0}));
}

TEST(Boost, MultiplierPolynomialIsShifted) {
  // Hatted multipliers are the coefficients of the lab polynomial re-expanded
  // about the boost velocity.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const MultiplierState lab = random_lab_state(rng);
    const Vec3 v{u(rng), u(rng), u(rng)};
    const MultiplierState hat = hat_multipliers(lab, {v});
    for (int probe = 0; probe < 5; ++probe) {
      const Vec3 c{u(rng), u(rng), u(rng)};
      const Vec3 cv{c[0] + v[0], c[1] + v[1], c[2] + v[2]};
      EXPECT_NEAR(multiplier_polynomial(hat, c), multiplier_polynomial(lab, cv), 1e-12);
    }
  }
}

TEST(Boost, LabPotentialsAtRest) {
  std::mt19937_64 rng(5);
  MultiplierState lab = equilibrium_state(0.2, 1.5);
  lab.frame = Frame::kLab;
  lab.lambda_i = {0.05, -0.02, 0.01};
  const PotentialPair p = lab_potentials(expf(), lab, {}, 6, 4);
  MultiplierState hat = lab;
  hat.frame = Frame::kHatted;
  EXPECT_DOUBLE_EQ(p.h, eval_h_hat(expf(), hat, 6, 4));
  EXPECT_EQ(p.phi, eval_phi_hat(expf(), hat, 6, 4));
}

TEST(Boost, FluxIdentityIsExact) {
  std::mt19937_64 rng(9);
  MultiplierState lab = equilibrium_state(0.1, 2.0);
  lab.frame = Frame::kLab;
  lab.lambda_i = {0.03, 0.01, -0.02};
  const Vec3 v{0.1, -0.05, 0.2};
  const PotentialPair p = lab_potentials(expf(), lab, {v}, 4, 4);
  const MultiplierState hat = hat_multipliers(lab, {v});
  const double h = eval_h_hat(expf(), hat, 4, 4);
  const Vec3 ph = eval_phi_hat(expf(), hat, 4, 4);
  EXPECT_EQ(p.h, h);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(p.phi[k] - ph[k] - h * v[k], 0.0);
}

TEST(Boost, MomentsMatchParticleOracle) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Particle> rest;
  for (int a = 0; a < 12; ++a) rest.push_back({0.5 + 0.5 * u(rng), {u(rng), u(rng), u(rng)}});
  const Vec3 v{0.7, -0.3, 0.4};
  std::vector<Particle> moved = rest;
  for (auto& p : moved) {
    for (int i = 0; i < 3; ++i) p.c[i] += v[i];
  }
  const MomentSet lab = lab_moments_from_rest(particle_moments(rest, Frame::kHatted), {v});
  EXPECT_EQ(lab.frame, Frame::kLab);
  expect_moments_near(lab, particle_moments(moved, Frame::kLab), 1e-12);
}

TEST(Boost, MomentExamples) {
  MomentSet rest;
  rest.m = 2.0;
  rest.m_i = {1.0, 0.0, 0.0};
  const MomentSet lab = lab_moments_from_rest(rest, {{3.0, 0.0, 0.0}});
  EXPECT_EQ(lab.m, 2.0);
  EXPECT_DOUBLE_EQ(lab.m_i[0], 7.0);
  const MomentSet same = lab_moments_from_rest(rest, {});
  EXPECT_EQ(same.m_i, rest.m_i);
  EXPECT_EQ(same.m_ij, rest.m_ij);
}

TEST(Moments, EquilibriumShape) {
  const MomentSet m = moments_from_potentials(expf(), equilibrium_state(0.0, 1.0), 6, 4);
  EXPECT_NEAR(m.m, -28.9340, 5e-4);
  for (double x : m.m_i) EXPECT_LE(std::abs(x), 1e-10 * std::abs(m.m));
  const double d = m.m_ij(0, 0);
  EXPECT_NEAR(m.m_ij(1, 1), d, 1e-8 * std::abs(d));
  EXPECT_NEAR(m.m_ij(2, 2), d, 1e-8 * std::abs(d));
  EXPECT_LE(std::abs(m.m_ij(0, 1)), 1e-8);
  EXPECT_LE(std::abs(m.m_ij(0, 2)), 1e-8);
  EXPECT_LE(std::abs(m.m_ij(1, 2)), 1e-8);
}
