#pragma once

// Kinetic-theory particular solution of the closure: every coefficient is a
// radial velocity integral of a kernel F,
//
//   int_0^inf F^(n)(lambda + L c^2/3 + y c^4) c^m dc,
//
// evaluated by quadrature. Used as an oracle independent of the recurrence
// engine in coeffs, and to build generating families from a kernel.

#include <functional>
#include <string>

#include "et14/coeffs.hpp"
#include "et14/family.hpp"

namespace et14 {

struct KineticKernel {
  std::string name;
  /// F^(n)(x)
  std::function<double(int n, double x)> derivative;
};

/// F(x) = amplitude * exp(-scale x)
KineticKernel exponential_kernel(double amplitude = 1.0, double scale = 1.0);
/// F(x) = amplitude * x * exp(-scale x)
KineticKernel poly_exponential_kernel(double amplitude = 1.0, double scale = 1.0);
/// F(x) = x^power; violates the decay requirement for power >= 0.
KineticKernel power_kernel(int power);

struct QuadratureSpec {
  enum class Rule { kAdaptive, kFixedNode };
  enum class Cutoff { kAuto, kFixed };

  Rule rule = Rule::kAdaptive;
  double rel_tol = 1e-13;
  /// Adaptive: maximum bisection depth. Fixed-node: number of 20-point panels.
  int node_budget = 15;
  Cutoff cutoff = Cutoff::kAuto;
  double fixed_cutoff = 0.0;

  /// Throws AccuracyError unless 0 < rel_tol <= 1e-4 and the budget is positive.
  void validate() const;
};

struct DecayCertificate {
  bool ok = false;
  /// |F(x(c)) c^3| at the probe radius.
  double boundary_term = 0.0;
  double probe_radius = 0.0;
};

/// Checks that F(lambda + L c^2/3 + y c^4) c^3 vanishes along the ray.
DecayCertificate certify_decay(const KineticKernel& kernel, const EquilibriumPoint& point);

/// int_0^inf F^(n)(lambda + L c^2/3 + y c^4) c^m dc.
double radial_integral(const KineticKernel& kernel, int n, int m, const EquilibriumPoint& point,
                       const QuadratureSpec& spec = {});

/// 4 pi int F^(s)(lambda + eta^2/3) eta^(4s+2) d eta.
double kinetic_ktilde(const KineticKernel& kernel, int s, double lambda,
                      const QuadratureSpec& spec = {});

/// Kinetic k_{p,q} at (lambda, L, y); y < 0 is rejected with DomainError.
double kinetic_kpq(const KineticKernel& kernel, int p, int q, const EquilibriumPoint& point,
                   const QuadratureSpec& spec = {});

/// Kinetic h_{p,q,r} (p+q even) and phi_{p,q,r} (p+q odd).
double kinetic_hpqr(const KineticKernel& kernel, int p, int q, int r,
                    const EquilibriumPoint& point, const QuadratureSpec& spec = {});
double kinetic_phipqr(const KineticKernel& kernel, int p, int q, int r,
                      const EquilibriumPoint& point, const QuadratureSpec& spec = {});

/// Coefficient k_s of the lambda_ppqq expansion:
/// 4 pi int F^(s)(lambda + L c^2/3) c^(4s+2) dc.
double kinetic_series_ks(const KineticKernel& kernel, int s, double lambda, double lambda_ll,
                         const QuadratureSpec& spec = {});

/// Generating family whose members are kinetic_ktilde values; passes the
/// ladder gate or throws FamilyError.
GeneratingFamily make_kinetic_family(const KineticKernel& kernel, int s_max,
                                     const QuadratureSpec& spec = {});

struct ByPartsCheck {
  double residual = 0.0;
  double boundary_term = 0.0;
  bool decay_ok = false;
  bool passed = false;
};

/// 3 int F c^2 + (2/3) L int F' c^4 + 4 y int F' c^6 = 0.
ByPartsCheck f1_by_parts_check(const KineticKernel& kernel, const EquilibriumPoint& point,
                               const QuadratureSpec& spec = {}, double tolerance = 1e-8);

}  // namespace et14
