#include "et14/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "et14/errors.hpp"
#include "et14/numdiff.hpp"

namespace et14 {

namespace {

Rational pow3(int e) {
  long long v = 1;
  for (int i = 0; i < e; ++i) v *= 3;
  return Rational(v);
}

double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

}  // namespace

void require_domain(const EquilibriumPoint& point) {
  if (!std::isfinite(point.lambda) || !std::isfinite(point.lambda_ll) ||
      !std::isfinite(point.lambda_ppqq)) {
    throw DomainError("equilibrium point has non-finite entries");
  }
  if (!(point.lambda_ll > 0.0)) {
    throw DomainError("lambda_ll must be positive (got " + std::to_string(point.lambda_ll) +
                      ")");
  }
}

double term_series_coefficient(const GeneratingFamily& f, const DerivativeTerm& t,
                               double lambda, double lambda_ll, int j) {
  const int s = j + t.d_ppqq;
  const double beta = (3.0 + 4.0 * s) / 2.0;
  double falling = 1.0;
  for (int i = 0; i < t.d_ll; ++i) falling *= -beta - i;
  double inv_fact = 1.0;
  for (int i = 2; i <= j; ++i) inv_fact /= i;
  return to_double(t.coef) * falling * std::pow(lambda_ll, -beta - t.d_ll) *
         f.member(s, t.d_lambda, lambda) * inv_fact;
}

double evaluate_term(const GeneratingFamily& f, const DerivativeTerm& t,
                     const EquilibriumPoint& point, int degree) {
  double acc = 0.0;
  double ypow = 1.0;
  for (int j = 0; j <= degree; ++j) {
    acc += term_series_coefficient(f, t, point.lambda, point.lambda_ll, j) * ypow;
    ypow *= point.lambda_ppqq;
  }
  return acc;
}

double k_s_value(const GeneratingFamily& f, int s, const EquilibriumPoint& point) {
  require_domain(point);
  return std::pow(point.lambda_ll, -(3.0 + 4.0 * s) / 2.0) * f.ktilde(s, point.lambda);
}

double k00(const GeneratingFamily& f, const EquilibriumPoint& point, int S) {
  require_domain(point);
  if (S < 0) throw TruncationError("series truncation must be non-negative");
  return evaluate_term(f, DerivativeTerm{}, point, S);
}

DerivativeTerm apply_step(const DerivativeTerm& t, int p, int q, Step step) {
  const int n = p + q;
  const bool odd = (n % 2) != 0;
  if (step == Step::kRow) {
    if (odd) return t.with_derivatives(0, 1, 0);
    DerivativeTerm out = t.with_derivatives(1, 0, 0);
    return out.scale(Rational(3 * (n + 1), n + 3));
  }
  if (odd) return t.with_derivatives(1, 0, 0).scale(Rational(3));
  DerivativeTerm out = t.with_derivatives(0, 0, 1);
  return out.scale(Rational(n + 1, n + 3));
}

DerivativeTerm k_pq_term(int p, int q, const std::vector<Step>& path) {
  if (p < 0 || q < 0) throw ArityError("k_pq indices must be non-negative");
  const auto rows = std::count(path.begin(), path.end(), Step::kRow);
  if (rows != p || static_cast<int>(path.size()) - rows != q) {
    throw ArityError("path does not lead to (" + std::to_string(p) + "," + std::to_string(q) +
                     ")");
  }
  DerivativeTerm t;
  int pp = 0;
  int qq = 0;
  for (Step s : path) {
    t = apply_step(t, pp, qq, s);
    (s == Step::kRow ? pp : qq) += 1;
  }
  return t;
}

DerivativeTerm k_pq_term(int p, int q) {
  std::vector<Step> path(static_cast<std::size_t>(q), Step::kColumn);
  path.insert(path.end(), static_cast<std::size_t>(p), Step::kRow);
  return k_pq_term(p, q, path);
}

int k_pq_degree(int q, int S) {
  const int consumed = (q + 1) / 2;
  if (consumed > S) {
    throw TruncationError("series truncation S=" + std::to_string(S) + " too small for q=" +
                          std::to_string(q) + " (needs S >= " + std::to_string(consumed) +
                          ")");
  }
  return S - consumed;
}

double k_pq(const GeneratingFamily& f, int p, int q, const EquilibriumPoint& point, int S) {
  require_domain(point);
  return evaluate_term(f, k_pq_term(p, q), point, k_pq_degree(q, S));
}

double k_pq(const GeneratingFamily& f, int p, int q, const EquilibriumPoint& point, int S,
            const std::vector<Step>& path) {
  require_domain(point);
  return evaluate_term(f, k_pq_term(p, q, path), point, k_pq_degree(q, S));
}

long long eta_product(int lo, int hi) {
  if (((lo - hi) % 2) != 0) {
    throw ParityError("eta_product bounds " + std::to_string(lo) + "," + std::to_string(hi) +
                      " differ in parity");
  }
  long long r = 1;
  for (int k = lo; k <= hi; k += 2) r *= k;
  return r;
}

double k0q_closed(const GeneratingFamily& f, int q, double lambda, double lambda_ll) {
  require_domain({lambda, lambda_ll, 0.0});
  if (q < 0) throw ArityError("q must be non-negative");
  if (q % 2 == 0) {
    const int h = q / 2;
    const double c = std::pow(3.0, h) / (q + 1) * std::pow(-0.5, h) *
                     static_cast<double>(eta_product(2 * q + 3, 3 * q + 1));
    return c * std::pow(lambda_ll, -(3.0 + 3.0 * q) / 2.0) * f.ktilde(h, lambda);
  }
  const int h = (q - 1) / 2;
  const double c = std::pow(3.0, h) / (q + 2) * std::pow(-0.5, h) *
                   static_cast<double>(eta_product(2 * q + 5, 3 * q + 2));
  return c * std::pow(lambda_ll, -(4.0 + 3.0 * q) / 2.0) * f.ktilde((q + 1) / 2, lambda);
}

DerivativeTerm k_pq_closed_term(int p, int q) {
  const int n = p + q;
  DerivativeTerm t;
  if (p % 2 == 0 && q % 2 == 0) {
    t = {pow3(n / 2) / Rational(n + 1), n / 2, p / 2, q / 2};
  } else if (p % 2 == 1 && q % 2 == 1) {
    t = {pow3((n - 2) / 2) / Rational(n + 1), (n - 2) / 2, (p + 1) / 2, (q + 1) / 2};
  } else if (p % 2 == 0) {
    t = {pow3((n - 1) / 2) / Rational(n + 2), (n - 1) / 2, p / 2, (q + 1) / 2};
  } else {
    t = {pow3((n + 1) / 2) / Rational(n + 2), (n + 1) / 2, (p - 1) / 2, q / 2};
  }
  return t;
}

DerivativeTerm k0q_from_k00(int q) {
  if (q % 2 == 0) return {pow3(q / 2) / Rational(q + 1), q / 2, 0, q / 2};
  return {pow3((q - 1) / 2) / Rational(q + 2), (q - 1) / 2, 0, (q + 1) / 2};
}

DerivativeTerm k_pq_from_first_row(int p, int q, const DerivativeTerm& k0q) {
  const int n = p + q;
  if (p % 2 == 0 && q % 2 == 0) {
    return k0q.with_derivatives(p / 2, p / 2, 0).scale(pow3(p / 2) * Rational(q + 1, n + 1));
  }
  if (p % 2 == 1 && q % 2 == 1) {
    return k0q.with_derivatives((p - 1) / 2, (p + 1) / 2, 0)
        .scale(pow3((p - 1) / 2) * Rational(q + 2, n + 1));
  }
  if (p % 2 == 0) {
    return k0q.with_derivatives(p / 2, p / 2, 0).scale(pow3(p / 2) * Rational(q + 2, n + 2));
  }
  return k0q.with_derivatives((p + 1) / 2, (p - 1) / 2, 0)
      .scale(pow3((p + 1) / 2) * Rational(q + 1, n + 2));
}

DerivativeTerm h_pqr_term(int p, int q, int r) {
  const int n = p + q;
  return k_pq_term(p, q).with_derivatives(r, 0, 0).scale(pow3(r) *
                                                         Rational(n + 1, n + 2 * r + 1));
}

DerivativeTerm phi_pqr_term(int p, int q, int r) {
  const int n = p + q;
  return k_pq_term(p, q).with_derivatives(r, 0, 0).scale(pow3(r) *
                                                         Rational(n + 2, n + 2 * r + 2));
}

double h_pqr(const GeneratingFamily& f, const CoefficientRequest& req,
             const EquilibriumPoint& point) {
  require_domain(point);
  if ((req.p + req.q) % 2 != 0) return 0.0;
  return evaluate_term(f, h_pqr_term(req.p, req.q, req.r), point, k_pq_degree(req.q, req.S));
}

double phi_pqr(const GeneratingFamily& f, const CoefficientRequest& req,
               const EquilibriumPoint& point) {
  require_domain(point);
  if ((req.p + req.q) % 2 == 0) return 0.0;
  return evaluate_term(f, phi_pqr_term(req.p, req.q, req.r), point,
                       k_pq_degree(req.q, req.S));
}

double subsystem_I(const GeneratingFamily& f, int q, double lambda) {
  if (q < 0 || q % 2 != 0) throw ParityError("subsystem coefficients need even q");
  const int h = q / 2;
  return std::pow(-1.5, h) / (q + 1) * static_cast<double>(eta_product(2 * q + 3, 3 * q + 1)) *
         f.ktilde(h, lambda);
}

SubsystemTable reduce_to_13(const GeneratingFamily& f, int q_max, double lambda) {
  if (q_max > 2 * f.s_max()) {
    throw TruncationError("q_max=" + std::to_string(q_max) + " exceeds 2*s_max=" +
                          std::to_string(2 * f.s_max()));
  }
  SubsystemTable table;
  table.lambda = lambda;
  for (int q = 0; q <= q_max; q += 2) {
    table.I[q] = subsystem_I(f, q, lambda);
    table.c[q] = 0.0;
  }
  return table;
}

double zero_sum_residual(std::initializer_list<double> terms) {
  double sum = 0.0;
  double scale = 0.0;
  for (double t : terms) {
    sum += t;
    scale = std::max(scale, std::abs(t));
  }
  return std::abs(sum) / std::max(scale, kResidualFloor);
}

ConstraintResiduals constraint_residuals(const GeneratingFamily& f,
                                         const EquilibriumPoint& point, int S) {
  require_domain(point);
  if (S < 2) throw TruncationError("constraint (C) needs series truncation S >= 2");
  const DerivativeTerm base;
  ConstraintResiduals out;
  const double lhs = 9.0 * evaluate_term(f, base.with_derivatives(2, 0, 0), point, S - 1);
  const double rhs = evaluate_term(f, base.with_derivatives(0, 1, 1), point, S - 1);
  out.c_condition =
      std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), kResidualFloor});

  const double a = 3.0 * evaluate_term(f, base, point, S);
  const double b =
      2.0 * point.lambda_ll * evaluate_term(f, base.with_derivatives(1, 0, 0), point, S);
  const double c =
      4.0 * point.lambda_ppqq * evaluate_term(f, base.with_derivatives(0, 0, 1), point, S - 1);
  out.f1_condition = zero_sum_residual({a, b, c});
  return out;
}

}  // namespace et14
