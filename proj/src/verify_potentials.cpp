#include <algorithm>
#include <cmath>
#include <sstream>

#include "et14/numdiff.hpp"
#include "et14/verify.hpp"

namespace et14 {

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Blocks that vanish at equilibrium (odd in the nonequilibrium variables) are
// compared against this fraction of the density |dh'/dlambda| once both sides
// fall below it; otherwise finite-difference noise would be divided by noise.
constexpr double kVanishingBlockScale = 1e-3;

// max|L - R| / max(max|L|, max|R|, floor), over the whole block.
double block_residual(const std::vector<double>& lhs, const std::vector<double>& rhs,
                      double floor) {
  double diff = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    diff = std::max(diff, std::abs(lhs[i] - rhs[i]));
  }
  return diff / std::max({max_abs(lhs), max_abs(rhs), floor, kResidualFloor});
}

std::vector<double> flatten(const Vec3& v) { return {v.begin(), v.end()}; }

std::vector<double> flatten(const Mat3& m) {
  std::vector<double> out;
  for (const auto& row : m) out.insert(out.end(), row.begin(), row.end());
  return out;
}

std::vector<double> flatten_full(const SymMatrix& m) {
  std::vector<double> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.push_back(m(i, j));
  return out;
}

Vec3 scaled(const Vec3& v, double a) { return {a * v[0], a * v[1], a * v[2]}; }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

VerificationReport check_compatibility(const GeneratingFamily& f,
                                       const std::vector<MultiplierState>& states, int N, int S,
                                       double tolerance, const CoefficientScaling& scaling) {
  VerificationReport rep;
  rep.metadata.emplace_back("compatibility.pairing", "h' at N+1 against phi' at N");
  rep.metadata.emplace_back("compatibility.trace_reading",
                            "delta-contraction on the derivative's lower index pair, "
                            "equal to 3 d/dlambda_ll at fixed deviator");
  rep.metadata.emplace_back("compatibility.antisymmetry_reading",
                            "antisymmetric part in (k,j) of dphi^k/dlambda_ij");
  const int Nh = N + 1;
  for (std::size_t idx = 0; idx < states.size(); ++idx) {
    const MultiplierState& st = states[idx];
    const SeriesArgs a = series_args(st);
    const PointRecord pt = point_record(st);
    const int i = static_cast<int>(idx);
    const double floor =
        kVanishingBlockScale * std::abs(h_series(f, a, Nh, S, {.d_lambda = 1}, scaling));

    {
      const Vec3 lhs = grad_h_lambda_i(f, a, Nh, S, scaling);
      const Vec3 rhs = phi_series(f, a, N, S, {.d_lambda = 1}, scaling);
      rep.add("compat.1", "dh'/dlambda_k = dphi'^k/dlambda", i, pt,
              block_residual(flatten(lhs), flatten(rhs), floor), tolerance);
    }
    {
      const SymMatrix gh = grad_h_dev(f, a, Nh, S, scaling);
      const Mat3 gp = grad_phi_lambda_i(f, a, N, S, scaling);
      rep.add("compat.2", "dh'/dlambda_ki = dphi'^k/dlambda_i", i, pt,
              block_residual(flatten_full(gh), flatten(gp), floor), tolerance);
    }
    {
      const Vec3 lhs = grad_h_lambda_ill(f, a, Nh, S, scaling);
      Vec3 rhs = phi_series(f, a, N, S, {.d_ll = 1}, scaling);
      for (double& x : rhs) x *= 3.0;
      rep.add("compat.3", "dh'/dlambda_kll = delta_ij dphi'^k/dlambda_ij", i, pt,
              block_residual(flatten(lhs), flatten(rhs), floor), tolerance);
    }
    {
      const auto g = grad_phi_dev(f, a, N, S, scaling);
      double anti = 0.0;
      double scale = std::max(floor, kResidualFloor);
      for (int k = 0; k < 3; ++k) {
        for (int p = 0; p < 3; ++p) {
          for (int j = 0; j < 3; ++j) {
            anti = std::max(anti, std::abs(g[k](p, j) - g[j](p, k)));
            scale = std::max(scale, std::abs(g[k](p, j)));
          }
        }
      }
      rep.add("compat.4", "antisymmetric part of dphi'^k/dlambda_ij in (k,j) vanishes", i, pt,
              anti / scale, tolerance);
    }
    const Mat3 gill = grad_phi_lambda_ill(f, a, N, S, scaling);
    {
      const double lhs = h_series(f, a, Nh, S, {.d_ppqq = 1}, scaling);
      const double rhs = gill[0][0] + gill[1][1] + gill[2][2];
      rep.add("compat.5", "dh'/dlambda_kkll = delta_ik dphi'^k/dlambda_ill", i, pt,
              block_residual({lhs}, {rhs}, floor), tolerance);
    }
    {
      double anti = 0.0;
      double scale = std::max(floor, kResidualFloor);
      for (int k = 0; k < 3; ++k) {
        for (int j = 0; j < 3; ++j) {
          anti = std::max(anti, std::abs(gill[k][j] - gill[j][k]));
          scale = std::max(scale, std::abs(gill[k][j]));
        }
      }
      rep.add("compat.6", "antisymmetric part of dphi'^k/dlambda_lli vanishes", i, pt,
              anti / scale, tolerance);
    }
  }
  return rep;
}

namespace {

struct VelocityProbe {
  double h_grad = 0.0;    // ||dh'/dv||
  double phi_grad = 0.0;  // ||dphi'/dv|| (Frobenius)
  double h = 0.0;
};

VelocityProbe probe_velocity(const GeneratingFamily& f, const MultiplierState& lab,
                             const Vec3& v, int N) {
  const int S = std::max(N, 1);
  VelocityProbe out;
  out.h = lab_potentials(f, lab, {v}, N, S).h;
  double hsq = 0.0;
  double psq = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double step = fd_step(v[c]);
    std::array<PotentialPair, 4> pots;
    const std::array<double, 4> offsets{-2.0, -1.0, 1.0, 2.0};
    for (std::size_t o = 0; o < 4; ++o) {
      Vec3 w = v;
      w[c] += offsets[o] * step;
      pots[o] = lab_potentials(f, lab, {w}, N, S);
    }
    auto stencil = [&](auto get) {
      return (get(pots[0]) - 8.0 * get(pots[1]) + 8.0 * get(pots[2]) - get(pots[3])) /
             (12.0 * step);
    };
    const double dh = stencil([](const PotentialPair& p) { return p.h; });
    hsq += dh * dh;
    for (int k = 0; k < 3; ++k) {
      const double dp = stencil([k](const PotentialPair& p) { return p.phi[k]; });
      psq += dp * dp;
    }
  }
  out.h_grad = std::sqrt(hsq);
  out.phi_grad = std::sqrt(psq);
  return out;
}

}  // namespace

VerificationReport check_velocity_independence(
    const GeneratingFamily& f, const std::vector<std::pair<MultiplierState, Vec3>>& lab_states,
    const std::vector<double>& v_scales, int N, const Tolerances& tol) {
  VerificationReport rep;
  const std::string n_tag = "N" + std::to_string(N);
  const std::string h_id = "velocity.h-order." + n_tag;
  const std::string phi_id = "velocity.phi-order." + n_tag;
  const std::string h_anchor = "dh'/dv vanishes: convergence order under v-halving >= N - 0.5";
  const std::string phi_anchor =
      "dphi'^k/dv vanishes: convergence order under v-halving >= N - 0.5";
  if (N < 1 || v_scales.size() < 2) {
    const std::string why = N < 1 ? "insufficient order" : "need at least two velocity scales";
    rep.add_skipped(h_id, h_anchor, why);
    rep.add_skipped(phi_id, phi_anchor, why);
    return rep;
  }
  rep.metadata.emplace_back("velocity." + n_tag + ".states", "equilibrium-shaped lab states");

  for (std::size_t idx = 0; idx < lab_states.size(); ++idx) {
    const auto& [lab, dir] = lab_states[idx];
    const int i = static_cast<int>(idx);
    PointRecord pt = point_record(lab);
    for (int c = 0; c < 3; ++c) {
      pt.emplace_back(std::string("v_dir.") + "xyz"[c], dir[c]);
    }

    const VelocityProbe at_zero = probe_velocity(f, lab, Vec3{}, N);
    rep.add("velocity.h-zero." + n_tag, "dh'/dv at v = 0 is at the finite-difference floor", i,
            pt, at_zero.h_grad / std::max(std::abs(at_zero.h), kResidualFloor),
            tol.velocity_floor);

    std::vector<VelocityProbe> probes;
    for (double a : v_scales) probes.push_back(probe_velocity(f, lab, scaled(dir, a), N));
    for (std::size_t k = 0; k + 1 < probes.size(); ++k) {
      const double ratio = v_scales[k] / v_scales[k + 1];
      const double h_order =
          std::log(probes[k].h_grad / probes[k + 1].h_grad) / std::log(ratio);
      const double phi_order =
          std::log(probes[k].phi_grad / probes[k + 1].phi_grad) / std::log(ratio);
      const std::string span = "v=" + fmt(v_scales[k]) + "->" + fmt(v_scales[k + 1]);
      PointRecord ptk = pt;
      ptk.emplace_back("v_scale", v_scales[k]);
      rep.add(h_id, h_anchor, i * 100 + static_cast<int>(k), ptk, N - h_order,
              tol.velocity_order_margin,
              span + " order=" + fmt(h_order) + " r=" + fmt(probes[k].h_grad) + "," +
                  fmt(probes[k + 1].h_grad));
      rep.add(phi_id, phi_anchor, i * 100 + static_cast<int>(k), ptk, N - phi_order,
              tol.velocity_order_margin,
              span + " order=" + fmt(phi_order) + " r=" + fmt(probes[k].phi_grad) + "," +
                  fmt(probes[k + 1].phi_grad));
    }

    // phi' - hat phi' - hat h' v must vanish identically.
    const Vec3 v = scaled(dir, v_scales.front());
    const PotentialPair lab_pot = lab_potentials(f, lab, {v}, N, std::max(N, 1));
    const MultiplierState hat = hat_multipliers(lab, {v});
    const double hh = eval_h_hat(f, hat, N, std::max(N, 1));
    const Vec3 ph = eval_phi_hat(f, hat, N, std::max(N, 1));
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      worst = std::max(worst, std::abs(lab_pot.phi[k] - ph[k] - hh * v[k]));
    }
    rep.add("velocity.flux-identity." + n_tag, "phi' - hat phi' - hat h' v = 0", i, pt, worst,
            0.0);
  }
  return rep;
}

}  // namespace et14
