#include "et14/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "et14/errors.hpp"
#include "et14/numdiff.hpp"

namespace et14 {

KineticKernel exponential_kernel(double amplitude, double scale) {
  std::ostringstream name;
  name << "exp(amplitude=" << amplitude << ",scale=" << scale << ")";
  return {name.str(), [amplitude, scale](int n, double x) {
            return amplitude * std::pow(-scale, n) * std::exp(-scale * x);
          }};
}

KineticKernel poly_exponential_kernel(double amplitude, double scale) {
  std::ostringstream name;
  name << "x*exp(amplitude=" << amplitude << ",scale=" << scale << ")";
  return {name.str(), [amplitude, scale](int n, double x) {
            return amplitude * std::pow(-scale, n) * std::exp(-scale * x) * (x - n / scale);
          }};
}

KineticKernel power_kernel(int power) {
  return {"x^" + std::to_string(power), [power](int n, double x) {
            if (n > power) return 0.0;
            double c = 1.0;
            for (int k = 0; k < n; ++k) c *= power - k;
            return c * std::pow(x, power - n);
          }};
}

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-4)) {
    throw AccuracyError("quadrature tolerance must lie in (0, 1e-4]");
  }
  if (node_budget <= 0) throw AccuracyError("quadrature node budget must be positive");
  if (cutoff == Cutoff::kFixed && !(fixed_cutoff > 0.0)) {
    throw AccuracyError("fixed cutoff must be positive");
  }
}

namespace {

constexpr double kScanStep = 0.25;
constexpr double kScanLimit = 2000.0;

double ray_argument(const EquilibriumPoint& p, double c) {
  const double c2 = c * c;
  return p.lambda + p.lambda_ll * c2 / 3.0 + p.lambda_ppqq * c2 * c2;
}

void require_kinetic_domain(const EquilibriumPoint& p) {
  require_domain(p);
  if (p.lambda_ppqq < 0.0) {
    throw DomainError("kinetic integrals diverge for lambda_ppqq < 0");
  }
}

// Radius beyond which |g| stays below threshold_ratio * max|g| on the scan.
double tail_cutoff(const std::function<double(double)>& g, double threshold_ratio) {
  double peak = 0.0;
  double last_significant = 0.0;
  std::vector<double> mags;
  mags.reserve(static_cast<std::size_t>(kScanLimit / kScanStep) + 1);
  for (double c = 0.0; c <= kScanLimit; c += kScanStep) {
    const double m = std::abs(g(c));
    if (!std::isfinite(m)) throw DecayError("integrand is not finite on the ray");
    mags.push_back(m);
    peak = std::max(peak, m);
  }
  if (peak == 0.0) return kScanStep;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    if (mags[k] > threshold_ratio * peak) last_significant = static_cast<double>(k) * kScanStep;
  }
  if (last_significant >= kScanLimit - kScanStep) {
    throw DecayError("integrand tail does not decay within the scan radius");
  }
  return last_significant + 2.0;
}

}  // namespace

DecayCertificate certify_decay(const KineticKernel& kernel, const EquilibriumPoint& point) {
  require_domain(point);
  auto boundary = [&](double c) {
    return std::abs(kernel.derivative(0, ray_argument(point, c))) * c * c * c;
  };
  double scale = 0.0;
  for (double c = 0.0; c <= 10.0; c += kScanStep) scale = std::max(scale, boundary(c));
  DecayCertificate cert;
  cert.probe_radius = 200.0;
  cert.boundary_term = boundary(cert.probe_radius);
  const double inner = boundary(100.0);
  cert.ok = std::isfinite(cert.boundary_term) && point.lambda_ppqq >= 0.0 &&
            cert.boundary_term <= inner && cert.boundary_term <= 1e-12 * std::max(scale, 1.0);
  return cert;
}

double radial_integral(const KineticKernel& kernel, int n, int m, const EquilibriumPoint& point,
                       const QuadratureSpec& spec) {
  spec.validate();
  require_kinetic_domain(point);
  if (!certify_decay(kernel, point).ok) {
    throw DecayError("kernel " + kernel.name + " does not decay along the evaluation ray");
  }
  const std::function<double(double)> g = [&](double c) {
    return kernel.derivative(n, ray_argument(point, c)) * std::pow(c, m);
  };
  const double cutoff = spec.cutoff == QuadratureSpec::Cutoff::kFixed
                            ? spec.fixed_cutoff
                            : tail_cutoff(g, spec.rel_tol * 1e-3);

  if (spec.rule == QuadratureSpec::Rule::kFixedNode) {
    using Rule = boost::math::quadrature::gauss<double, 20>;
    double acc = 0.0;
    const double width = cutoff / spec.node_budget;
    for (int k = 0; k < spec.node_budget; ++k) {
      acc += Rule::integrate(g, k * width, (k + 1) * width);
    }
    return acc;
  }

  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  double error = 0.0;
  double l1 = 0.0;
  const double value = Rule::integrate(g, 0.0, cutoff, static_cast<unsigned>(spec.node_budget),
                                       spec.rel_tol, &error, &l1);
  if (!std::isfinite(value) || error > std::max(spec.rel_tol * l1, 1e-300)) {
    std::ostringstream msg;
    msg << "quadrature did not reach tolerance " << spec.rel_tol << " (error estimate " << error
        << ", L1 " << l1 << ")";
    throw AccuracyError(msg.str());
  }
  return value;
}

double kinetic_ktilde(const KineticKernel& kernel, int s, double lambda,
                      const QuadratureSpec& spec) {
  return 4.0 * std::numbers::pi * radial_integral(kernel, s, 4 * s + 2, {lambda, 1.0, 0.0}, spec);
}

double kinetic_hpqr(const KineticKernel& kernel, int p, int q, int r,
                    const EquilibriumPoint& point, const QuadratureSpec& spec) {
  if ((p + q) % 2 != 0) return 0.0;
  return 4.0 * std::numbers::pi / (p + q + 2 * r + 1) *
         radial_integral(kernel, p + q + r, p + 3 * q + 2 * r + 2, point, spec);
}

double kinetic_phipqr(const KineticKernel& kernel, int p, int q, int r,
                      const EquilibriumPoint& point, const QuadratureSpec& spec) {
  if ((p + q) % 2 == 0) return 0.0;
  return 4.0 * std::numbers::pi / (p + q + 2 * r + 2) *
         radial_integral(kernel, p + q + r, p + 3 * q + 2 * r + 3, point, spec);
}

double kinetic_kpq(const KineticKernel& kernel, int p, int q, const EquilibriumPoint& point,
                   const QuadratureSpec& spec) {
  return (p + q) % 2 == 0 ? kinetic_hpqr(kernel, p, q, 0, point, spec)
                          : kinetic_phipqr(kernel, p, q, 0, point, spec);
}

double kinetic_series_ks(const KineticKernel& kernel, int s, double lambda, double lambda_ll,
                         const QuadratureSpec& spec) {
  return 4.0 * std::numbers::pi *
         radial_integral(kernel, s, 4 * s + 2, {lambda, lambda_ll, 0.0}, spec);
}

GeneratingFamily make_kinetic_family(const KineticKernel& kernel, int s_max,
                                     const QuadratureSpec& spec) {
  spec.validate();
  MemberOracle o = [kernel, spec](int s, int n, double lambda) {
    return 4.0 * std::numbers::pi *
           radial_integral(kernel, s + n, 4 * s + 2, {lambda, 1.0, 0.0}, spec);
  };
  return GeneratingFamily::checked("kinetic[" + kernel.name + "]", FamilyKind::kKinetic,
                                   std::move(o), s_max, 16);
}

ByPartsCheck f1_by_parts_check(const KineticKernel& kernel, const EquilibriumPoint& point,
                               const QuadratureSpec& spec, double tolerance) {
  ByPartsCheck out;
  const DecayCertificate cert = certify_decay(kernel, point);
  out.boundary_term = cert.boundary_term;
  out.decay_ok = cert.ok;
  if (!cert.ok) {
    out.residual = std::numeric_limits<double>::infinity();
    out.passed = false;
    return out;
  }
  const double t1 = 3.0 * radial_integral(kernel, 0, 2, point, spec);
  const double t2 = 2.0 / 3.0 * point.lambda_ll * radial_integral(kernel, 1, 4, point, spec);
  const double t3 = 4.0 * point.lambda_ppqq * radial_integral(kernel, 1, 6, point, spec);
  out.residual = zero_sum_residual({t1, t2, t3});
  out.passed = out.residual <= tolerance;
  return out;
}

}  // namespace et14
