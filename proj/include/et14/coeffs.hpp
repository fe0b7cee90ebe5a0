#pragma once

// The scalar coefficient hierarchy of the 14-moment closure.
//
// Everything is a derivative of
//
//   k00(lambda, L, y) = sum_s k_s(lambda, L) y^s / s!,
//   k_s = L^{-(3+4s)/2} ktilde_s(lambda),
//
// where L = lambda_ll and y = lambda_ppqq. A DerivativeTerm records
// coef * d^a/dL^a d^b/dlambda^b d^c/dy^c k00; the single-step recurrences of
// the k_{p,q} matrix only ever append one derivative and multiply the
// coefficient by an exact rational, so every k_{p,q}, h_{p,q,r} and
// phi_{p,q,r} is one such term. Terms are evaluated as polynomials in y.
//
// Truncation: a coefficient requested with series order S is returned as
// its y-polynomial of degree S - ceil(q/2); ceil(q/2) is the number of
// y-derivatives in the canonical closed form of k_{p,q}, so this is the
// order left after building k_{p,q} from a k00 truncated at S.

#include <map>
#include <string>
#include <vector>

#include "et14/family.hpp"
#include "et14/symtensor.hpp"

namespace et14 {

struct EquilibriumPoint {
  double lambda = 0.0;
  double lambda_ll = 1.0;
  double lambda_ppqq = 0.0;
};

struct CoefficientRequest {
  int p = 0;
  int q = 0;
  int r = 0;
  int S = 0;
};

struct DerivativeTerm {
  Rational coef{1};
  int d_ll = 0;
  int d_lambda = 0;
  int d_ppqq = 0;

  DerivativeTerm& scale(const Rational& f) {
    coef *= f;
    return *this;
  }
  DerivativeTerm with_derivatives(int ll, int lambda, int ppqq) const {
    return {coef, d_ll + ll, d_lambda + lambda, d_ppqq + ppqq};
  }
  bool operator==(const DerivativeTerm&) const = default;
};

/// A single move in the k_{p,q} matrix: kRow is p -> p+1, kColumn q -> q+1.
enum class Step { kRow, kColumn };

/// Throws DomainError unless lambda_ll > 0 (and all entries finite).
void require_domain(const EquilibriumPoint& point);

/// Coefficient of y^j in the y-expansion of the term at (lambda, L).
double term_series_coefficient(const GeneratingFamily& f, const DerivativeTerm& t, double lambda,
                               double lambda_ll, int j);

/// Sum over j = 0..degree of the series coefficients times y^j; 0 when
/// degree < 0.
double evaluate_term(const GeneratingFamily& f, const DerivativeTerm& t,
                     const EquilibriumPoint& point, int degree);

/// L^{-(3+4s)/2} ktilde_s(lambda).
double k_s_value(const GeneratingFamily& f, int s, const EquilibriumPoint& point);

/// Partial sum of k00 through y^S.
double k00(const GeneratingFamily& f, const EquilibriumPoint& point, int S);

/// Applies one recurrence step at matrix position (p, q); parity picks the
/// law: row steps are d/dlambda (p+q odd) or 3(p+q+1)/(p+q+3) d/dL (p+q
/// even); column steps are 3 d/dL (p+q odd) or (p+q+1)/(p+q+3) d/dy (p+q
/// even).
DerivativeTerm apply_step(const DerivativeTerm& t, int p, int q, Step step);

/// k_{p,q} built along `path` (p row steps, q column steps, any order).
DerivativeTerm k_pq_term(int p, int q, const std::vector<Step>& path);
/// Default path: all column steps, then all row steps.
DerivativeTerm k_pq_term(int p, int q);

/// Series degree left for k_{p,q} at truncation S; throws TruncationError
/// when negative.
int k_pq_degree(int q, int S);

double k_pq(const GeneratingFamily& f, int p, int q, const EquilibriumPoint& point, int S);
double k_pq(const GeneratingFamily& f, int p, int q, const EquilibriumPoint& point, int S,
            const std::vector<Step>& path);

/// Closed form of the first row at lambda_ppqq = 0 with the corrected
/// eta convention (empty product when hi < lo).
double k0q_closed(const GeneratingFamily& f, int q, double lambda, double lambda_ll);

/// lo (lo+2) ... hi, empty product 1 when hi < lo; throws ParityError when
/// lo and hi differ in parity.
long long eta_product(int lo, int hi);

/// Closed-form term of k_{p,q} directly in terms of k00 (all four parity
/// branches).
DerivativeTerm k_pq_closed_term(int p, int q);
/// k_{p,q} from derivatives of k_{0,q} (row-to-first-row branches).
DerivativeTerm k_pq_from_first_row(int p, int q, const DerivativeTerm& k0q);
/// k_{0,q} from derivatives of k00 (even and odd q).
DerivativeTerm k0q_from_k00(int q);

/// h_{p,q,r} = 3^r (p+q+1)/(p+q+2r+1) d^r/dL^r k_{p,q} (p+q even).
DerivativeTerm h_pqr_term(int p, int q, int r);
/// phi_{p,q,r} = 3^r (p+q+2)/(p+q+2r+2) d^r/dL^r k_{p,q} (p+q odd).
DerivativeTerm phi_pqr_term(int p, int q, int r);

/// Exact 0 when p+q is odd.
double h_pqr(const GeneratingFamily& f, const CoefficientRequest& req,
             const EquilibriumPoint& point);
/// Exact 0 when p+q is even.
double phi_pqr(const GeneratingFamily& f, const CoefficientRequest& req,
               const EquilibriumPoint& point);

struct SubsystemTable {
  double lambda = 0.0;
  std::map<int, double> I;         // q -> I_q(lambda)
  std::map<int, double> c;         // q -> c_q, identically 0
};

/// 13-moment scalar coefficients I_q(lambda) for even q <= q_max.
SubsystemTable reduce_to_13(const GeneratingFamily& f, int q_max, double lambda);
/// I_q for one even q.
double subsystem_I(const GeneratingFamily& f, int q, double lambda);

struct ConstraintResiduals {
  double c_condition = 0.0;   // 9 k00_LL = k00_{lambda y}
  double f1_condition = 0.0;  // 3 k00 + 2L k00_L + 4y k00_y = 0
};

ConstraintResiduals constraint_residuals(const GeneratingFamily& f,
                                         const EquilibriumPoint& point, int S);

/// Relative residual of the zero-sum identity sum(terms) = 0 against its
/// largest term.
double zero_sum_residual(std::initializer_list<double> terms);

}  // namespace et14
