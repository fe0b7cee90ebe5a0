#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "et14/errors.hpp"
#include "et14/numdiff.hpp"
#include "et14/verify.hpp"

namespace et14 {

namespace {

PointRecord with_indices(PointRecord r, std::initializer_list<std::pair<const char*, int>> idx) {
  for (const auto& [name, value] : idx) r.emplace_back(name, static_cast<double>(value));
  return r;
}

bool series_allows(int q, int S) { return (q + 1) / 2 <= S; }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(7);
  os << x;
  return os.str();
}

// The in-line definition a(a-2)...b read literally: descending from a to b
// when a >= b, otherwise the ascending product.
long long literal_eta(int a, int b) {
  long long r = 1;
  if (a >= b) {
    for (int k = a; k >= b; k -= 2) r *= k;
  } else {
    for (int k = a; k <= b; k += 2) r *= k;
  }
  return r;
}

}  // namespace

VerificationReport check_scalar_identity_chain(const GeneratingFamily& f, int pq_max, int r_max,
                                               const std::vector<EquilibriumPoint>& points,
                                               int S, double tolerance) {
  VerificationReport rep;
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const EquilibriumPoint& pt = points[idx];
    const int i = static_cast<int>(idx);
    const double L = pt.lambda_ll;
    const double y = pt.lambda_ppqq;
    for (int n = 0; n <= pq_max; n += 2) {
      for (int q = 0; q <= n; ++q) {
        const int p = n - q;
        if (!series_allows(q, S)) continue;
        const int D = k_pq_degree(q, S);
        const DerivativeTerm t = k_pq_term(p, q);
        const double a = (p + 3 * q + 3) * evaluate_term(f, t, pt, D);
        const double b = 2.0 * L * evaluate_term(f, t.with_derivatives(1, 0, 0), pt, D);
        const double c = 4.0 * y * evaluate_term(f, t.with_derivatives(0, 0, 1), pt, D - 1);
        rep.add("identity.eq",
                "0 = (p+3q+3) k_pq + 2 lambda_ll dk_pq/dlambda_ll + "
                "4 lambda_ppqq dk_pq/dlambda_ppqq",
                i, with_indices(point_record(pt), {{"p", p}, {"q", q}}),
                zero_sum_residual({a, b, c}), tolerance);

        for (int r = 0; r <= r_max; ++r) {
          const int w = n + 2 * r;
          const DerivativeTerm hr = h_pqr_term(p, q, r);
          const double h0 = evaluate_term(f, hr, pt, D);
          const double h1 = evaluate_term(f, h_pqr_term(p, q, r + 1), pt, D);
          const double hy = evaluate_term(f, hr.with_derivatives(0, 0, 1), pt, D - 1);
          const double ratio = (w + 1.0) / (w + 3.0);
          rep.add("identity.h-precursor",
                  "0 = (n+1) h_pqr + (2/3) lambda_ll h_pq(r+1) + (n+1)/(n+3) (2q h_pqr + "
                  "4 lambda_ppqq dh_pqr/dlambda_ppqq)",
                  i, with_indices(point_record(pt), {{"p", p}, {"q", q}, {"r", r}}),
                  zero_sum_residual({(w + 1.0) * h0, 2.0 / 3.0 * L * h1, ratio * 2.0 * q * h0,
                                     ratio * 4.0 * y * hy}),
                  tolerance);
        }
      }
    }
  }
  return rep;
}

VerificationReport check_constraints(const GeneratingFamily& f,
                                     const std::vector<EquilibriumPoint>& points, int S,
                                     double tolerance) {
  VerificationReport rep;
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const ConstraintResiduals r = constraint_residuals(f, points[idx], S);
    const PointRecord pt = point_record(points[idx]);
    const int i = static_cast<int>(idx);
    rep.add("constraint.C", "9 d2k00/dlambda_ll2 = d2k00/dlambda dlambda_ppqq", i, pt,
            r.c_condition, tolerance);
    rep.add("constraint.f1",
            "0 = 3 k00 + 2 lambda_ll dk00/dlambda_ll + 4 lambda_ppqq dk00/dlambda_ppqq", i, pt,
            r.f1_condition, tolerance);
  }
  return rep;
}

VerificationReport check_closed_forms(const GeneratingFamily& f, int pq_max,
                                      const std::vector<EquilibriumPoint>& points, int S,
                                      double tolerance) {
  VerificationReport rep;
  rep.metadata.emplace_back("closed.eta_convention",
                            "ascending inclusive product, empty product 1 when hi < lo");
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const EquilibriumPoint& pt = points[idx];
    const EquilibriumPoint pt0{pt.lambda, pt.lambda_ll, 0.0};
    const int i = static_cast<int>(idx);
    for (int p = 0; p <= pq_max; ++p) {
      for (int q = 0; q <= pq_max; ++q) {
        if (!series_allows(q, S)) continue;
        const int D = k_pq_degree(q, S);
        const double stepwise = k_pq(f, p, q, pt, S);
        const PointRecord rec = with_indices(point_record(pt), {{"p", p}, {"q", q}});
        rep.add("closed.parity-branches", "stepwise k_pq = four-branch closed form", i, rec,
                relative_residual(evaluate_term(f, k_pq_closed_term(p, q), pt, D), stepwise),
                tolerance);
        rep.add("closed.first-row", "stepwise k_pq = closed form built on k_0q from k00", i, rec,
                relative_residual(
                    evaluate_term(f, k_pq_from_first_row(p, q, k0q_from_k00(q)), pt, D),
                    stepwise),
                tolerance);
      }
    }
    for (int q = 0; q <= pq_max; ++q) {
      if (!series_allows(q, S)) continue;
      const double stepwise = k_pq(f, 0, q, pt0, S);
      const PointRecord rec = with_indices(point_record(pt0), {{"q", q}});
      const double closed = k0q_closed(f, q, pt0.lambda, pt0.lambda_ll);
      rep.add("closed.k0q", "stepwise k_0q = closed form in ktilde (corrected eta)", i, rec,
              relative_residual(closed, stepwise), tolerance);
      if (q > 1) continue;
      // The literal reading of the eta product differs only at q = 0, 1.
      const int lo = q == 0 ? 2 * q + 3 : 2 * q + 5;
      const int hi = q == 0 ? 3 * q + 1 : 3 * q + 2;
      const double expected = static_cast<double>(literal_eta(lo, hi));
      const double literal = closed * expected / static_cast<double>(eta_product(lo, hi));
      const double factor = literal / stepwise;
      rep.add("closed.k0q-literal-eta", "literal eta reading at q = 0, 1", i, rec,
              relative_residual(factor, expected), tolerance,
              "literal eta(" + std::to_string(lo) + "," + std::to_string(hi) +
                  ") reading deviates by measured factor " + fmt(factor));
      auto& last = rep.records.back();
      if (last.status == CheckStatus::kPass) last.status = CheckStatus::kExpectedDeviation;
    }
  }
  return rep;
}

VerificationReport check_path_independence(const GeneratingFamily& f, int pq_max,
                                           const std::vector<EquilibriumPoint>& points, int S,
                                           std::uint64_t seed, double tolerance) {
  VerificationReport rep;
  PointRng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const EquilibriumPoint& pt = points[idx];
    const int i = static_cast<int>(idx);
    for (int n = 0; n <= pq_max; ++n) {
      for (int q = 0; q <= n; ++q) {
        const int p = n - q;
        if (!series_allows(q, S)) continue;
        std::vector<Step> path(static_cast<std::size_t>(p), Step::kRow);
        path.insert(path.end(), static_cast<std::size_t>(q), Step::kColumn);
        const double row_first = k_pq(f, p, q, pt, S, path);
        // Fisher-Yates with the report's own generator keeps runs reproducible.
        for (std::size_t k = path.size(); k > 1; --k) {
          std::swap(path[k - 1], path[rng.next() % k]);
        }
        const double shuffled = k_pq(f, p, q, pt, S, path);
        const double reference = k_pq(f, p, q, pt, S);
        const double res = std::max(relative_residual(row_first, reference),
                                    relative_residual(shuffled, reference));
        rep.add("path.independence", "every admissible step order gives the same k_pq", i,
                with_indices(point_record(pt), {{"p", p}, {"q", q}}), res, tolerance);
      }
    }
  }
  return rep;
}

VerificationReport check_trace_recurrences(const GeneratingFamily& f, int N,
                                           const std::vector<EquilibriumPoint>& points, int S,
                                           double tolerance) {
  VerificationReport rep;
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const EquilibriumPoint& pt = points[idx];
    const int i = static_cast<int>(idx);
    for (int w = 0; w + 2 <= N; ++w) {
      for (int r = 0; 2 * r <= w; ++r) {
        for (int q = 0; q <= w - 2 * r; ++q) {
          const int p = w - 2 * r - q;
          if (!series_allows(q, S)) continue;
          const int n = p + q;
          const bool even = n % 2 == 0;
          auto coefficient = [&](int rr, double L) {
            const CoefficientRequest req{p, q, rr, S};
            const EquilibriumPoint at{pt.lambda, L, pt.lambda_ppqq};
            return even ? h_pqr(f, req, at) : phi_pqr(f, req, at);
          };
          const double lhs = coefficient(r + 1, pt.lambda_ll);
          const double dL =
              central_diff4([&](double L) { return coefficient(r, L); }, pt.lambda_ll);
          const double factor = even ? 3.0 * (n + 2 * r + 1) / (n + 2 * r + 3)
                                     : 3.0 * (n + 2 * r + 2) / (n + 2 * r + 4);
          rep.add(even ? "trace.h" : "trace.phi",
                  even ? "h_pq(r+1) = 3 (n+2r+1)/(n+2r+3) dh_pqr/dlambda_ll"
                       : "phi_pq(r+1) = 3 (n+2r+2)/(n+2r+4) dphi_pqr/dlambda_ll",
                  i, with_indices(point_record(pt), {{"p", p}, {"q", q}, {"r", r}}),
                  relative_residual(factor * dL, lhs), tolerance);
        }
      }
    }
  }
  return rep;
}

namespace {

double brute_force_delta(const IndexCounts& counts) {
  std::vector<int> labels;
  for (int axis = 0; axis < 3; ++axis) labels.insert(labels.end(), counts[axis], axis);
  std::vector<int> perm(labels.size());
  std::iota(perm.begin(), perm.end(), 0);
  long long hits = 0;
  long long total = 0;
  do {
    bool all = true;
    for (std::size_t k = 0; k + 1 < perm.size() && all; k += 2) {
      all = labels[perm[k]] == labels[perm[k + 1]];
    }
    hits += all ? 1 : 0;
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

VerificationReport check_structure(const GeneratingFamily& f, int pq_max, int r_max,
                                   int sym_delta_rank_max, std::uint64_t seed,
                                   const Tolerances& tol) {
  VerificationReport rep;
  const EquilibriumPoint pt{0.3, 1.7, 0.02};
  const int S = (pq_max + 1) / 2 + 1;
  double h_worst = 0.0;
  double phi_worst = 0.0;
  for (int p = 0; p <= pq_max; ++p) {
    for (int q = 0; q <= pq_max; ++q) {
      for (int r = 0; r <= r_max; ++r) {
        const CoefficientRequest req{p, q, r, S};
        if ((p + q) % 2 != 0) h_worst = std::max(h_worst, std::abs(h_pqr(f, req, pt)));
        if ((p + q) % 2 == 0) phi_worst = std::max(phi_worst, std::abs(phi_pqr(f, req, pt)));
      }
    }
  }
  rep.add("structure.parity-h", "h_pqr vanishes exactly for odd p+q", 0, point_record(pt),
          h_worst, 0.0);
  rep.add("structure.parity-phi", "phi_pqr vanishes exactly for even p+q", 0, point_record(pt),
          phi_worst, 0.0);

  for (int rank = 0; rank <= sym_delta_rank_max; rank += 2) {
    const SymTensor& t = sym_delta(rank);
    double worst = 0.0;
    for (int c = 0; c <= rank; ++c) {
      for (int b = 0; b + c <= rank; ++b) {
        const IndexCounts counts{rank - b - c, b, c};
        worst = std::max(worst, std::abs(t.at_counts(counts) - brute_force_delta(counts)));
      }
    }
    rep.add("structure.sym-delta", "symmetrized delta product = permutation average", rank,
            {{"rank", static_cast<double>(rank)}}, worst, tol.sym_delta);
  }

  PointRng rng(seed ^ 0xd1b54a32d192ed03ULL);
  for (int k = 0; k < 10; ++k) {
    SymMatrix m;
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) m(a, b) = rng.uniform(-1.0, 1.0);
    rep.add("structure.deviator-trace", "trace of the deviator vanishes", k,
            {{"trace", m.trace()}}, std::abs(deviator(m).trace()), tol.deviator);
  }
  return rep;
}

VerificationReport check_ladder(const GeneratingFamily& f, int s_max, int grid, double tolerance,
                                const std::string& id_prefix) {
  VerificationReport rep;
  const int top = std::min(s_max, f.s_max() - 1);
  for (int s = 0; s <= top; ++s) {
    for (int g = 0; g < grid; ++g) {
      const double lambda = grid == 1 ? 0.0 : -1.0 + 2.0 * g / (grid - 1);
      rep.add(id_prefix, "dktilde_(s+1)/dlambda = (9/4)(3+4s)(5+4s) ktilde_s",
              s * 100 + g, {{"s", static_cast<double>(s)}, {"lambda", lambda}},
              ladder_residual(f, s, lambda), tolerance);
    }
  }
  return rep;
}

VerificationReport check_kinetic_equivalence(const GeneratingFamily& f,
                                             const KineticKernel& kernel,
                                             const std::vector<EquilibriumPoint>& points,
                                             int pq_max, const QuadratureSpec& spec,
                                             const Tolerances& tol) {
  VerificationReport rep;
  rep.metadata.emplace_back("kinetic.kernel", kernel.name);
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const EquilibriumPoint pt{points[idx].lambda, points[idx].lambda_ll, 0.0};
    const int i = static_cast<int>(idx);
    for (int n = 0; n <= pq_max; ++n) {
      for (int q = 0; q <= n; ++q) {
        const int p = n - q;
        const double series = k_pq(f, p, q, pt, (q + 1) / 2);
        const double quad = kinetic_kpq(kernel, p, q, pt, spec);
        rep.add("kinetic.kpq", "k_pq equals its velocity integral at lambda_ppqq = 0", i,
                with_indices(point_record(pt), {{"p", p}, {"q", q}}),
                relative_residual(series, quad), tol.kinetic);
      }
    }
    for (int s = 0; s <= 4; ++s) {
      const double ks = k_s_value(f, s, pt);
      const double quad = kinetic_series_ks(kernel, s, pt.lambda, pt.lambda_ll, spec);
      const PointRecord rec = with_indices(point_record(pt), {{"s", s}});
      rep.add("kinetic.ks", "series coefficient k_s equals its velocity integral", i, rec,
              relative_residual(ks, quad), tol.kinetic);
      const double tilde = kinetic_ktilde(kernel, s, pt.lambda, spec);
      rep.add("kinetic.change-of-variables",
              "ktilde_s = lambda_ll^((3+4s)/2) k_s under c = eta lambda_ll^(-1/2)", i, rec,
              relative_residual(std::pow(pt.lambda_ll, (3.0 + 4.0 * s) / 2.0) * quad, tilde),
              tol.kinetic);
    }
    for (int n = 0; n <= 2; ++n) {
      for (int q = 0; q <= n; ++q) {
        const int p = n - q;
        const bool even = n % 2 == 0;
        for (int r = 0; r <= 1; ++r) {
          auto coefficient = [&](int rr, double L) {
            const EquilibriumPoint at{pt.lambda, L, 0.0};
            return even ? kinetic_hpqr(kernel, p, q, rr, at, spec)
                        : kinetic_phipqr(kernel, p, q, rr, at, spec);
          };
          const double lhs = coefficient(r + 1, pt.lambda_ll);
          const double dL =
              central_diff4([&](double L) { return coefficient(r, L); }, pt.lambda_ll);
          const double factor = even ? 3.0 * (n + 2 * r + 1) / (n + 2 * r + 3)
                                     : 3.0 * (n + 2 * r + 2) / (n + 2 * r + 4);
          rep.add("kinetic.trace", "delta-contracted derivative relation for quadrature values",
                  i, with_indices(point_record(pt), {{"p", p}, {"q", q}, {"r", r}}),
                  relative_residual(factor * dL, lhs), tol.kinetic_fd);
        }
      }
    }
    const ByPartsCheck bp = f1_by_parts_check(kernel, points[idx], spec, tol.kinetic);
    rep.add("kinetic.f1-by-parts",
            "3 int F c^2 + (2/3) lambda_ll int F' c^4 + 4 lambda_ppqq int F' c^6 = 0", i,
            point_record(points[idx]), bp.residual, tol.kinetic,
            "boundary term " + fmt(bp.boundary_term));
  }
  return rep;
}

VerificationReport check_subsystem(const GeneratingFamily& f, int q_max,
                                   const std::vector<EquilibriumPoint>& points,
                                   const Tolerances& tol) {
  VerificationReport rep;
  const int top = std::min(q_max, 2 * (f.s_max() - 1));
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const EquilibriumPoint pt{points[idx].lambda, points[idx].lambda_ll, 0.0};
    const int i = static_cast<int>(idx);
    const SubsystemTable table = reduce_to_13(f, top, pt.lambda);
    for (const auto& [q, value] : table.I) {
      const double stripped =
          k_pq(f, 0, q, pt, (q + 1) / 2) * std::pow(pt.lambda_ll, (3.0 + 3.0 * q) / 2.0);
      const PointRecord rec = with_indices(point_record(pt), {{"q", q}});
      rep.add("subsystem.I", "I_q = k_0q with the lambda_ll power stripped", i, rec,
              relative_residual(value, stripped), tol.subsystem);
      rep.add("subsystem.c", "c_q = 0", i, rec, std::abs(table.c.at(q)), 0.0);
    }
    for (int s = 0; 2 * s + 2 <= top; ++s) {
      const double rate = -1.5 * (2.0 * s + 1.0) / (2.0 * s + 3.0) *
                          static_cast<double>(eta_product(4 * s + 7, 6 * s + 7)) /
                          static_cast<double>(eta_product(4 * s + 3, 6 * s + 1)) *
                          boost::rational_cast<double>(ladder_factor(s));
      const double derivative =
          central_diff4([&](double x) { return subsystem_I(f, 2 * s + 2, x); }, pt.lambda);
      rep.add("subsystem.derivative", "dI_(2s+2)/dlambda follows from the ladder", i,
              with_indices(point_record(pt), {{"s", s}}),
              relative_residual(derivative, rate * subsystem_I(f, 2 * s, pt.lambda)),
              tol.subsystem_derivative);
    }
  }
  return rep;
}

namespace {

template <class Check>
void guarded(VerificationReport& rep, const std::string& id, Check&& check) {
  try {
    rep.merge(check());
  } catch (const Error& e) {
    CheckRecord r;
    r.id = id;
    r.anchor = "check raised an error";
    r.residual = std::numeric_limits<double>::infinity();
    r.status = CheckStatus::kFail;
    r.note = e.what();
    rep.records.push_back(std::move(r));
  }
}

}  // namespace

VerificationReport run_all(const GeneratingFamily& f, const VerifyConfig& c) {
  c.points.validate();
  VerificationReport rep;
  rep.metadata = {{"family", f.name()},
                  {"family.kind", to_string(f.kind())},
                  {"N", std::to_string(c.N)},
                  {"S", std::to_string(c.S)},
                  {"seed", std::to_string(c.points.seed)},
                  {"points.hatted", std::to_string(c.points.count)},
                  {"points.scalar", std::to_string(c.scalar_points)},
                  {"points.kinetic", std::to_string(c.kinetic_points)},
                  {"points.lab", std::to_string(c.lab_points)},
                  {"finite_difference", "4th-order central, h = max(1,|x|) eps^(1/5)"}};

  const auto states = sample_hatted_states(c.points, c.points.count, kHattedStream);
  guarded(rep, "compat.error", [&] {
    return check_compatibility(f, states, c.N, c.S, c.tol.compatibility);
  });

  const auto lab = sample_lab_states(c.points, c.lab_points, kLabStream);
  std::vector<int> orders;
  for (int n : c.velocity_orders) {
    if (n <= c.N) orders.push_back(n);
  }
  if (orders.empty()) orders.push_back(c.N);
  for (int n : orders) {
    guarded(rep, "velocity.error", [&] {
      return check_velocity_independence(f, lab, c.v_scales, n, c.tol);
    });
  }

  const auto scalar = sample_equilibrium_points(c.points, c.scalar_points, true, kScalarStream);
  guarded(rep, "identity.error", [&] {
    return check_scalar_identity_chain(f, c.pq_max, c.r_max, scalar, c.S, c.tol.identity);
  });
  guarded(rep, "constraint.error",
          [&] { return check_constraints(f, scalar, c.S, c.tol.identity); });
  guarded(rep, "closed.error", [&] {
    return check_closed_forms(f, c.closed_form_max, scalar, c.S, c.tol.closed_form);
  });
  guarded(rep, "path.error", [&] {
    return check_path_independence(f, c.pq_max, scalar, c.S, c.points.seed, c.tol.path);
  });
  guarded(rep, "trace.error",
          [&] { return check_trace_recurrences(f, c.N, scalar, c.S, c.tol.trace_fd); });
  guarded(rep, "structure.error", [&] {
    return check_structure(f, c.closed_form_max, c.r_max, c.sym_delta_rank_max, c.points.seed,
                           c.tol);
  });
  guarded(rep, "ladder.error",
          [&] { return check_ladder(f, c.ladder_s_max, c.ladder_grid, c.tol.ladder); });

  const auto kinetic_points = sample_equilibrium_points(c.points, c.kinetic_points, false,
                                                          kKineticStream);
  if (c.kernel) {
    guarded(rep, "kinetic.error", [&] {
      return check_kinetic_equivalence(f, *c.kernel, kinetic_points, c.pq_max, c.quadrature,
                                       c.tol);
    });
    guarded(rep, "ladder-kinetic.error", [&] {
      const GeneratingFamily kf =
          make_kinetic_family(*c.kernel, c.ladder_s_max + 1, c.quadrature);
      return check_ladder(kf, c.ladder_s_max, c.ladder_grid, c.tol.ladder, "ladder-kinetic");
    });
  } else {
    rep.add_skipped("kinetic.kpq", "k_pq equals its velocity integral at lambda_ppqq = 0",
                    "no kinetic kernel for this family");
    rep.add_skipped("ladder-kinetic", "ladder on the quadrature-built family",
                    "no kinetic kernel for this family");
  }

  guarded(rep, "subsystem.error", [&] {
    return check_subsystem(f, c.subsystem_q_max, kinetic_points, c.tol);
  });
  rep.sort();
  return rep;
}

}  // namespace et14
