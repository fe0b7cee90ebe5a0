#include "et14/family.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "et14/errors.hpp"
#include "et14/numdiff.hpp"

namespace et14 {

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kExponential:
      return "exponential";
    case FamilyKind::kPolyExponential:
      return "poly-exponential";
    case FamilyKind::kKinetic:
      return "kinetic";
    case FamilyKind::kCustom:
      return "custom";
  }
  return "custom";
}

FamilyKind family_kind_from_string(const std::string& name) {
  if (name == "exponential") return FamilyKind::kExponential;
  if (name == "poly-exponential") return FamilyKind::kPolyExponential;
  if (name == "kinetic") return FamilyKind::kKinetic;
  if (name == "custom") return FamilyKind::kCustom;
  throw Error("unknown family kind '" + name + "'");
}

GeneratingFamily::GeneratingFamily(std::string name, FamilyKind kind, MemberOracle oracle,
                                   int s_max, int n_max)
    : name_(std::move(name)),
      kind_(kind),
      oracle_(std::make_shared<const MemberOracle>(std::move(oracle))),
      s_max_(s_max),
      n_max_(n_max) {
  if (s_max < 0 || n_max < 0) throw Error("family bounds must be non-negative");
}

GeneratingFamily GeneratingFamily::unchecked(std::string name, FamilyKind kind,
                                             MemberOracle oracle, int s_max, int n_max) {
  return GeneratingFamily(std::move(name), kind, std::move(oracle), s_max, n_max);
}

GeneratingFamily GeneratingFamily::checked(std::string name, FamilyKind kind,
                                           MemberOracle oracle, int s_max, int n_max,
                                           const FamilyGate& gate) {
  GeneratingFamily f(std::move(name), kind, std::move(oracle), s_max, n_max);
  for (int s = 0; s < s_max; ++s) {
    for (double lambda : gate.lambda_grid) {
      const double v0 = f.ktilde(s, lambda);
      if (!std::isfinite(v0)) {
        throw FamilyError("family '" + f.name() + "': member " + std::to_string(s) +
                              " is not finite at lambda=" + std::to_string(lambda),
                          s);
      }
      const double r = ladder_residual(f, s, lambda);
      if (!(r <= gate.tolerance)) {
        std::ostringstream msg;
        msg << "family '" << f.name() << "' violates the ladder at s=" << s
            << " (lambda=" << lambda << ", relative residual " << r << ")";
        throw FamilyError(msg.str(), s);
      }
    }
  }
  return f;
}

double GeneratingFamily::member(int s, int n, double lambda) const {
  if (s < 0 || s > s_max_) {
    throw TruncationError("family '" + name_ + "' provides members 0.." +
                          std::to_string(s_max_) + ", member " + std::to_string(s) +
                          " requested");
  }
  if (n < 0 || n > n_max_) {
    throw TruncationError("family '" + name_ + "' provides derivatives up to order " +
                          std::to_string(n_max_) + ", order " + std::to_string(n) +
                          " requested");
  }
  return (*oracle_)(s, n, lambda);
}

namespace {

// 2 pi (3/b)^(2s+3/2) Gamma(2s+3/2): the radial Gaussian moment
// 4 pi int_0^inf eta^(4s+2) exp(-b eta^2/3) d eta.
double gaussian_moment(int s, double b) {
  const double a = 2.0 * s + 1.5;
  return 2.0 * std::numbers::pi * std::exp(a * std::log(3.0 / b) + std::lgamma(a));
}

}  // namespace

GeneratingFamily make_family(FamilyKind kind, const FamilyParams& p) {
  if (!(p.scale > 0.0)) throw Error("family scale must be positive");
  const double amp = p.amplitude;
  const double beta = p.scale;
  switch (kind) {
    case FamilyKind::kExponential: {
      // ktilde_s = A (-b)^s e^{-b lambda} G_s
      MemberOracle o = [amp, beta](int s, int n, double lambda) {
        return amp * std::pow(-beta, s + n) * std::exp(-beta * lambda) *
               gaussian_moment(s, beta);
      };
      return GeneratingFamily::checked("exponential", kind, std::move(o), p.s_max, p.n_max);
    }
    case FamilyKind::kPolyExponential: {
      // ktilde_s = A (-b)^s e^{-b lambda} G_s (lambda + (s + 3/2)/b)
      MemberOracle o = [amp, beta](int s, int n, double lambda) {
        const double shift = (s + 1.5 - n) / beta;
        return amp * std::pow(-beta, s + n) * std::exp(-beta * lambda) *
               gaussian_moment(s, beta) * (lambda + shift);
      };
      return GeneratingFamily::checked("poly-exponential", kind, std::move(o), p.s_max,
                                       p.n_max);
    }
    case FamilyKind::kKinetic:
    case FamilyKind::kCustom:
      break;
  }
  throw Error("make_family: kind '" + to_string(kind) +
              "' has no closed form; use make_kinetic_family or GeneratingFamily::checked");
}

GeneratingFamily make_perturbed_family(const GeneratingFamily& base, int s, double delta) {
  MemberOracle o = [base, s, delta](int ss, int n, double lambda) {
    const double v = base.member(ss, n, lambda);
    return (ss == s && n == 0) ? v + delta : v;
  };
  std::ostringstream name;
  name << base.name() << "+perturbed(s=" << s << ",delta=" << delta << ")";
  return GeneratingFamily::unchecked(name.str(), FamilyKind::kCustom, std::move(o),
                                     base.s_max(), base.n_max());
}

Rational ladder_factor(int s) { return Rational(9, 4) * (3 + 4 * s) * (5 + 4 * s); }

double ladder_residual(const GeneratingFamily& f, int s, double lambda) {
  const double derivative =
      central_diff4([&](double x) { return f.ktilde(s + 1, x); }, lambda);
  const double expected = boost::rational_cast<double>(ladder_factor(s)) * f.ktilde(s, lambda);
  return std::abs(derivative - expected) / std::max(std::abs(expected), kResidualFloor);
}

}  // namespace et14
