#include "et14/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <vector>

#include "et14/errors.hpp"
#include "et14/numdiff.hpp"

namespace et14 {

std::string to_string(Frame frame) { return frame == Frame::kLab ? "lab" : "hatted"; }

Frame frame_from_string(const std::string& s) {
  if (s == "lab") return Frame::kLab;
  if (s == "hatted" || s == "rest") return Frame::kHatted;
  throw Error("unknown frame tag '" + s + "' (expected lab|hatted)");
}

MultiplierState equilibrium_state(double lambda, double lambda_ll) {
  MultiplierState s;
  s.frame = Frame::kHatted;
  s.lambda = lambda;
  s.lambda_ij = (lambda_ll / 3.0) * SymMatrix::identity();
  return s;
}

SeriesArgs series_args(const MultiplierState& hatted) {
  SeriesArgs a;
  a.lambda = hatted.lambda;
  a.lambda_i = hatted.lambda_i;
  a.lambda_ll = hatted.lambda_ij.trace();
  a.dev = deviator(hatted.lambda_ij);
  a.lambda_ill = hatted.lambda_ill;
  a.lambda_ppqq = hatted.lambda_iill;
  return a;
}

namespace {

double inv_factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r /= k;
  return r;
}

void check_args(const SeriesArgs& a, int N, int S) {
  if (N < 0 || S < 0) throw TruncationError("truncation orders must be non-negative");
  require_domain({a.lambda, a.lambda_ll, a.lambda_ppqq});
}

// Degree in y kept for a term of weight w = p+q+2r at truncation (N, S).
int kept_degree(int w, int q, int N, int S) {
  const int by_weight = (N - w) >= 0 ? (N - w) / 2 : -1;
  return std::min(by_weight, S - (q + 1) / 2);
}

std::vector<ContractionSlot> make_slots(const SeriesArgs& a, int p, int q, int r) {
  std::vector<ContractionSlot> slots;
  slots.reserve(static_cast<std::size_t>(p + q + r));
  for (int i = 0; i < p; ++i) slots.emplace_back(a.lambda_i);
  for (int i = 0; i < q; ++i) slots.emplace_back(a.lambda_ill);
  for (int i = 0; i < r; ++i) slots.emplace_back(a.dev);
  return slots;
}

// Iterates the (p, q, r) terms of the given parity with their kept degree.
template <class Visit>
void for_each_term(int N, int S, int parity, Visit&& visit) {
  for (int w = 0; w <= N; ++w) {
    for (int r = 0; 2 * r <= w; ++r) {
      for (int q = 0; q <= w - 2 * r; ++q) {
        const int p = w - 2 * r - q;
        if ((p + q) % 2 != parity) continue;
        const int degree = kept_degree(w, q, N, S);
        if (degree < 0) continue;
        visit(p, q, r, degree);
      }
    }
  }
}

double scale_of(const std::map<std::array<int, 3>, double>& table, int p, int q, int r) {
  if (table.empty()) return 1.0;
  const auto it = table.find({p, q, r});
  return it == table.end() ? 1.0 : it->second;
}

}  // namespace

double h_series(const GeneratingFamily& f, const SeriesArgs& a, int N, int S,
                ScalarDerivative d, const CoefficientScaling& scaling) {
  check_args(a, N, S);
  const EquilibriumPoint point{a.lambda, a.lambda_ll, a.lambda_ppqq};
  double acc = 0.0;
  for_each_term(N, S, 0, [&](int p, int q, int r, int degree) {
    const DerivativeTerm t =
        h_pqr_term(p, q, r).with_derivatives(d.d_ll, d.d_lambda, d.d_ppqq);
    const double coef =
        evaluate_term(f, t, point, degree - d.d_ppqq) * scale_of(scaling.h, p, q, r);
    if (coef == 0.0) return;
    const auto slots = make_slots(a, p, q, r);
    acc += inv_factorial(p) * inv_factorial(q) * inv_factorial(r) * coef *
           contract(sym_delta(p + q + 2 * r), slots);
  });
  return acc;
}

Vec3 phi_series(const GeneratingFamily& f, const SeriesArgs& a, int N, int S,
                ScalarDerivative d, const CoefficientScaling& scaling) {
  check_args(a, N, S);
  const EquilibriumPoint point{a.lambda, a.lambda_ll, a.lambda_ppqq};
  Vec3 acc{};
  for_each_term(N, S, 1, [&](int p, int q, int r, int degree) {
    const DerivativeTerm t =
        phi_pqr_term(p, q, r).with_derivatives(d.d_ll, d.d_lambda, d.d_ppqq);
    const double coef =
        evaluate_term(f, t, point, degree - d.d_ppqq) * scale_of(scaling.phi, p, q, r);
    if (coef == 0.0) return;
    const auto slots = make_slots(a, p, q, r);
    const Vec3 v = contract_free(sym_delta(p + q + 2 * r + 1), slots);
    const double w = inv_factorial(p) * inv_factorial(q) * inv_factorial(r) * coef;
    for (int k = 0; k < 3; ++k) acc[k] += w * v[k];
  });
  return acc;
}

namespace {

void require_hatted(const MultiplierState& s) {
  if (s.frame != Frame::kHatted) throw Error("expected a hatted multiplier state");
}

}  // namespace

double eval_h_hat(const GeneratingFamily& f, const MultiplierState& state, int N, int S) {
  require_hatted(state);
  return h_series(f, series_args(state), N, S);
}

Vec3 eval_phi_hat(const GeneratingFamily& f, const MultiplierState& state, int N, int S) {
  require_hatted(state);
  return phi_series(f, series_args(state), N, S);
}

MultiplierState hat_multipliers(const MultiplierState& lab, const BoostVelocity& boost) {
  if (lab.frame != Frame::kLab) throw Error("hat_multipliers expects a lab-frame state");
  const Vec3& v = boost.v;
  const double v2 = dot(v, v);
  const double y = lab.lambda_iill;
  const double ill_v = dot(lab.lambda_ill, v);
  Vec3 lij_v{};
  double v_lij_v = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) lij_v[i] += lab.lambda_ij(i, j) * v[j];
    v_lij_v += v[i] * lij_v[i];
  }

  MultiplierState h;
  h.frame = Frame::kHatted;
  h.lambda = lab.lambda + dot(lab.lambda_i, v) + v_lij_v + ill_v * v2 + y * v2 * v2;
  for (int i = 0; i < 3; ++i) {
    h.lambda_i[i] = lab.lambda_i[i] + 2.0 * lij_v[i] + 2.0 * ill_v * v[i] +
                    lab.lambda_ill[i] * v2 + 4.0 * y * v2 * v[i];
    h.lambda_ill[i] = lab.lambda_ill[i] + 4.0 * y * v[i];
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      const double delta = i == j ? 1.0 : 0.0;
      h.lambda_ij(i, j) = lab.lambda_ij(i, j) + ill_v * delta +
                          (lab.lambda_ill[i] * v[j] + lab.lambda_ill[j] * v[i]) +
                          2.0 * y * v2 * delta + 4.0 * y * v[i] * v[j];
    }
  }
  h.lambda_iill = y;
  return h;
}

PotentialPair lab_potentials(const GeneratingFamily& f, const MultiplierState& lab,
                             const BoostVelocity& v, int N, int S) {
  const MultiplierState hat = hat_multipliers(lab, v);
  PotentialPair out;
  out.N = N;
  out.S = S;
  out.h = eval_h_hat(f, hat, N, S);
  const Vec3 phi_hat = eval_phi_hat(f, hat, N, S);
  for (int k = 0; k < 3; ++k) out.phi[k] = phi_hat[k] + out.h * v.v[k];
  return out;
}

MomentSet lab_moments_from_rest(const MomentSet& rest, const BoostVelocity& boost) {
  if (rest.frame != Frame::kHatted) throw Error("lab_moments_from_rest expects rest moments");
  const Vec3& v = boost.v;
  const double v2 = dot(v, v);
  const double m = rest.m;
  const double m_ll = rest.m_ij.trace();
  Vec3 mij_v{};
  double v_mij_v = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) mij_v[i] += rest.m_ij(i, j) * v[j];
    v_mij_v += v[i] * mij_v[i];
  }
  const double mi_v = dot(rest.m_i, v);

  MomentSet lab;
  lab.frame = Frame::kLab;
  lab.m = m;
  for (int i = 0; i < 3; ++i) {
    lab.m_i[i] = rest.m_i[i] + m * v[i];
    for (int j = i; j < 3; ++j) {
      lab.m_ij(i, j) =
          rest.m_ij(i, j) + rest.m_i[i] * v[j] + rest.m_i[j] * v[i] + m * v[i] * v[j];
    }
    lab.m_ill[i] = rest.m_ill[i] + m_ll * v[i] + 2.0 * mij_v[i] + rest.m_i[i] * v2 +
                   2.0 * mi_v * v[i] + m * v2 * v[i];
  }
  lab.m_iill = rest.m_iill + 4.0 * dot(rest.m_ill, v) + 2.0 * m_ll * v2 + 4.0 * v_mij_v +
               4.0 * mi_v * v2 + m * v2 * v2;

  for (int k = 0; k < 3; ++k) {
    const double mk = rest.m_k[k];
    const Vec3& mki = rest.m_ki[k];
    const SymMatrix& mkij = rest.m_kij[k];
    const double mkll = mkij.trace();
    const double mki_v = dot(mki, v);
    Vec3 mkij_v{};
    double v_mkij_v = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) mkij_v[i] += mkij(i, j) * v[j];
      v_mkij_v += v[i] * mkij_v[i];
    }

    lab.m_k[k] = lab.m * v[k] + mk;
    for (int i = 0; i < 3; ++i) {
      lab.m_ki[k][i] = lab.m_i[i] * v[k] + mki[i] + mk * v[i];
      for (int j = i; j < 3; ++j) {
        lab.m_kij[k](i, j) = lab.m_ij(i, j) * v[k] + mkij(i, j) + mki[i] * v[j] +
                             mki[j] * v[i] + mk * v[i] * v[j];
      }
      lab.m_kill[k][i] = lab.m_ill[i] * v[k] + rest.m_kill[k][i] + mkll * v[i] +
                         2.0 * mkij_v[i] + mki[i] * v2 + 2.0 * mki_v * v[i] +
                         mk * v2 * v[i];
    }
    lab.m_kiill[k] = lab.m_iill * v[k] + rest.m_kiill[k] + 4.0 * dot(rest.m_kill[k], v) +
                     2.0 * mkll * v2 + 4.0 * v_mkij_v + 4.0 * mki_v * v2 + mk * v2 * v2;
  }
  return lab;
}

// --- finite-difference gradients ------------------------------------------

namespace {

template <class Eval>
auto diff_component(Eval&& eval, double x0) {
  const double h = fd_step(x0);
  auto f_m2 = eval(x0 - 2.0 * h);
  auto f_m1 = eval(x0 - h);
  auto f_p1 = eval(x0 + h);
  auto f_p2 = eval(x0 + 2.0 * h);
  using T = decltype(f_m2);
  if constexpr (std::is_same_v<T, double>) {
    return (f_m2 - 8.0 * f_m1 + 8.0 * f_p1 - f_p2) / (12.0 * h);
  } else {
    T out{};
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = (f_m2[k] - 8.0 * f_m1[k] + 8.0 * f_p1[k] - f_p2[k]) / (12.0 * h);
    }
    return out;
  }
}

template <class Eval>
auto grad_vector(const SeriesArgs& a, Vec3 SeriesArgs::*field, Eval&& eval) {
  using T = decltype(eval(a));
  std::array<T, 3> out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = diff_component(
        [&](double x) {
          SeriesArgs b = a;
          (b.*field)[i] = x;
          return eval(b);
        },
        (a.*field)[i]);
  }
  return out;
}

// d/d dev_ij with the (i,j),(j,i) pair perturbed together for i != j.
template <class Eval>
auto grad_dev(const SeriesArgs& a, Eval&& eval) {
  using T = decltype(eval(a));
  std::array<T, 6> out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      const double scale = i == j ? 1.0 : 0.5;
      auto d = diff_component(
          [&](double x) {
            SeriesArgs b = a;
            b.dev(i, j) = x;  // symmetric storage: both entries move
            return eval(b);
          },
          a.dev(i, j));
      if constexpr (std::is_same_v<T, double>) {
        d *= scale;
      } else {
        for (auto& c : d) c *= scale;
      }
      out[static_cast<std::size_t>(SymMatrix::slot(i, j))] = d;
    }
  }
  return out;
}

Mat3 transpose_grad(const std::array<Vec3, 3>& g) {
  // g[i][k] = d phi^k / d x_i  ->  out[k][i]
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) out[k][i] = g[i][k];
  return out;
}

}  // namespace

Vec3 grad_h_lambda_i(const GeneratingFamily& f, const SeriesArgs& a, int N, int S,
                     const CoefficientScaling& scaling) {
  return grad_vector(a, &SeriesArgs::lambda_i,
                     [&](const SeriesArgs& b) { return h_series(f, b, N, S, {}, scaling); });
}

Vec3 grad_h_lambda_ill(const GeneratingFamily& f, const SeriesArgs& a, int N, int S,
                       const CoefficientScaling& scaling) {
  return grad_vector(a, &SeriesArgs::lambda_ill,
                     [&](const SeriesArgs& b) { return h_series(f, b, N, S, {}, scaling); });
}

SymMatrix grad_h_dev(const GeneratingFamily& f, const SeriesArgs& a, int N, int S,
                     const CoefficientScaling& scaling) {
  return SymMatrix(
      grad_dev(a, [&](const SeriesArgs& b) { return h_series(f, b, N, S, {}, scaling); }));
}

Mat3 grad_phi_lambda_i(const GeneratingFamily& f, const SeriesArgs& a, int N, int S,
                       const CoefficientScaling& scaling) {
  return transpose_grad(grad_vector(a, &SeriesArgs::lambda_i, [&](const SeriesArgs& b) {
    return phi_series(f, b, N, S, {}, scaling);
  }));
}

Mat3 grad_phi_lambda_ill(const GeneratingFamily& f, const SeriesArgs& a, int N, int S,
                         const CoefficientScaling& scaling) {
  return transpose_grad(grad_vector(a, &SeriesArgs::lambda_ill, [&](const SeriesArgs& b) {
    return phi_series(f, b, N, S, {}, scaling);
  }));
}

std::array<SymMatrix, 3> grad_phi_dev(const GeneratingFamily& f, const SeriesArgs& a, int N,
                                      int S, const CoefficientScaling& scaling) {
  const auto g =
      grad_dev(a, [&](const SeriesArgs& b) { return phi_series(f, b, N, S, {}, scaling); });
  std::array<SymMatrix, 3> out{};
  for (int k = 0; k < 3; ++k) {
    std::array<double, 6> c{};
    for (int s = 0; s < 6; ++s) c[static_cast<std::size_t>(s)] = g[static_cast<std::size_t>(s)][k];
    out[k] = SymMatrix(c);
  }
  return out;
}

MomentSet moments_from_potentials(const GeneratingFamily& f, const MultiplierState& state,
                                  int N, int S) {
  require_hatted(state);
  const SeriesArgs a = series_args(state);
  MomentSet m;
  m.frame = Frame::kHatted;
  m.m = h_series(f, a, N, S, {.d_lambda = 1});
  m.m_i = grad_h_lambda_i(f, a, N, S);
  m.m_ij = grad_h_dev(f, a, N, S);
  m.m_ill = grad_h_lambda_ill(f, a, N, S);
  m.m_iill = h_series(f, a, N, S, {.d_ppqq = 1});

  m.m_k = phi_series(f, a, N, S, {.d_lambda = 1});
  m.m_ki = grad_phi_lambda_i(f, a, N, S);
  m.m_kij = grad_phi_dev(f, a, N, S);
  m.m_kill = grad_phi_lambda_ill(f, a, N, S);
  m.m_kiill = phi_series(f, a, N, S, {.d_ppqq = 1});
  return m;
}

}  // namespace et14
