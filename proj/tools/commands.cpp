#include "commands.hpp"

#include <algorithm>
#include <sstream>

#include "et14/errors.hpp"
#include "et14/numdiff.hpp"

namespace et14::cli {

namespace {

// Re-raises a domain error with the config field it came from.
template <class F>
auto in_field(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw DomainError("field '" + field + "': " + e.what());
  }
}

void flatten(const Json& j, const std::string& path, std::ostringstream& os) {
  if (j.is_object()) {
    for (const auto& item : j.items()) {
      flatten(item.value(), path.empty() ? item.key() : path + "." + item.key(), os);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      flatten(j[i], path + "[" + std::to_string(i) + "]", os);
    }
  } else if (j.is_number()) {
    os << path << ',' << format_number(j.get<double>()) << '\n';
  } else if (j.is_string()) {
    os << path << ',' << j.get<std::string>() << '\n';
  } else {
    os << path << ',' << j.dump() << '\n';
  }
}

// field,value rows for nested documents.
std::string flat_csv(const Json& doc) {
  std::ostringstream os;
  os << "field,value\n";
  flatten(doc, "", os);
  return os.str();
}

MultiplierState input_state(const RunConfig& cfg) {
  if (cfg.state) return state_from_json(*cfg.state, "state");
  MultiplierState s = equilibrium_state(cfg.point.lambda, cfg.point.lambda_ll);
  s.lambda_iill = cfg.point.lambda_ppqq;
  return s;
}

std::string input_field(const RunConfig& cfg) { return cfg.state ? "state" : "point"; }

}  // namespace

Json run_meta(const RunConfig& cfg) {
  return Json{{"command", cfg.command},
              {"family",
               {{"name", cfg.family.name},
                {"amplitude", cfg.family.params.amplitude},
                {"scale", cfg.family.params.scale},
                {"s_max", cfg.family.params.s_max}}},
              {"N", cfg.N},
              {"S", cfg.S},
              {"seed", cfg.points.seed}};
}

CommandOutput cmd_coeffs(const RunConfig& cfg) {
  in_field("point", [&] {
    require_domain(cfg.point);
    return 0;
  });
  const GeneratingFamily f = build_family(cfg.family, cfg.quadrature);
  CommandOutput out;
  out.meta = run_meta(cfg);
  out.meta["point"] = to_json(cfg.point);
  std::vector<CoefficientRow> rows;
  Json kinds = Json::array();
  for (int p = 0; p <= cfg.p_max; ++p) {
    for (int q = 0; q <= cfg.q_max; ++q) {
      if (cfg.r == 0) {
        rows.push_back({p, q, 0, cfg.S, cfg.point, k_pq(f, p, q, cfg.point, cfg.S)});
        kinds.push_back("k");
        continue;
      }
      // Only one of h_pqr, phi_pqr is non-zero for a given parity of p+q.
      const bool even = (p + q) % 2 == 0;
      for (int r = 0; r <= cfg.r; ++r) {
        const CoefficientRequest req{p, q, r, cfg.S};
        rows.push_back({p, q, r, cfg.S, cfg.point,
                        even ? h_pqr(f, req, cfg.point) : phi_pqr(f, req, cfg.point)});
        kinds.push_back(even ? "h" : "phi");
      }
    }
  }
  Json table = coefficient_json(rows);
  for (std::size_t i = 0; i < table.size(); ++i) table[i]["kind"] = kinds[i];
  out.doc["p_max"] = cfg.p_max;
  out.doc["q_max"] = cfg.q_max;
  out.doc["r"] = cfg.r;
  out.doc["rows"] = std::move(table);
  out.csv = coefficient_csv(rows);
  return out;
}

CommandOutput cmd_eval(const RunConfig& cfg) {
  const GeneratingFamily f = build_family(cfg.family, cfg.quadrature);
  CommandOutput out;
  out.meta = run_meta(cfg);
  const MultiplierState input = input_state(cfg);
  out.doc["input"] = to_json(input);
  in_field(input_field(cfg), [&] {
    MultiplierState hatted = input;
    if (input.frame == Frame::kLab) {
      hatted = hat_multipliers(input, {cfg.velocity});
      out.doc["velocity"] = to_json(cfg.velocity);
      out.doc["hatted_state"] = to_json(hatted);
      const PotentialPair lab = lab_potentials(f, input, {cfg.velocity}, cfg.N, cfg.S);
      out.doc["lab_potentials"] = to_json(lab);
    }
    PotentialPair pot;
    pot.N = cfg.N;
    pot.S = cfg.S;
    pot.h = eval_h_hat(f, hatted, cfg.N, cfg.S);
    pot.phi = eval_phi_hat(f, hatted, cfg.N, cfg.S);
    out.doc["potentials"] = to_json(pot);
    out.doc["moments"] = to_json(moments_from_potentials(f, hatted, cfg.N, cfg.S));
    return 0;
  });
  out.csv = flat_csv(out.doc);
  return out;
}

CommandOutput cmd_boost(const RunConfig& cfg) {
  CommandOutput out;
  out.meta = run_meta(cfg);
  out.doc["velocity"] = to_json(cfg.velocity);
  MomentSet rest;
  if (cfg.moments) {
    rest = moments_from_json(*cfg.moments, "moments");
  } else {
    const GeneratingFamily f = build_family(cfg.family, cfg.quadrature);
    const MultiplierState input = input_state(cfg);
    in_field(input_field(cfg), [&] {
      MultiplierState hatted = input;
      if (input.frame == Frame::kLab) {
        hatted = hat_multipliers(input, {cfg.velocity});
        out.doc["lab_state"] = to_json(input);
        out.doc["hatted_state"] = to_json(hatted);
        out.doc["lab_potentials"] = to_json(lab_potentials(f, input, {cfg.velocity}, cfg.N, cfg.S));
      }
      rest = moments_from_potentials(f, hatted, cfg.N, cfg.S);
      return 0;
    });
  }
  out.doc["rest_moments"] = to_json(rest);
  out.doc["lab_moments"] = to_json(lab_moments_from_rest(rest, {cfg.velocity}));
  out.csv = flat_csv(out.doc);
  return out;
}

CommandOutput cmd_verify(const RunConfig& cfg) {
  const GeneratingFamily f = build_family(cfg.family, cfg.quadrature);
  VerifyConfig vc;
  vc.points = cfg.points;
  vc.N = cfg.N;
  vc.S = cfg.S;
  vc.tol = cfg.tol;
  vc.quadrature = cfg.quadrature;
  vc.kernel = family_kernel(cfg.family);
  const VerificationReport report = run_all(f, vc);

  CommandOutput out;
  out.meta = run_meta(cfg);
  out.doc["report"] = to_json(report);
  out.csv = report_csv(report);
  if (!report.all_passed()) {
    out.status = kVerificationFailure;
    std::string ids;
    for (const auto& id : report.failing_ids()) ids += (ids.empty() ? "" : ", ") + id;
    out.message = "et14: verification failed: " + ids;
  }
  return out;
}

CommandOutput cmd_kinetic(const RunConfig& cfg) {
  const auto kernel = family_kernel(cfg.family);
  if (!kernel) {
    throw ConfigError("field 'family': \"" + cfg.family.name + "\" has no kinetic kernel");
  }
  const GeneratingFamily f = build_family(cfg.family, cfg.quadrature);
  const auto points =
      sample_equilibrium_points(cfg.points, cfg.kinetic_points, false, kKineticStream);

  CommandOutput out;
  out.meta = run_meta(cfg);
  out.meta["kernel"] = kernel->name;
  std::ostringstream csv;
  csv << "point,p,q,lambda,lambda_ll,series,quadrature,relative_deviation\n";
  Json rows = Json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const EquilibriumPoint pt{points[i].lambda, points[i].lambda_ll, 0.0};
    for (int n = 0; n <= cfg.kinetic_pq_max; ++n) {
      for (int q = 0; q <= n; ++q) {
        const int p = n - q;
        // At lambda_ppqq = 0 only the leading ceil(q/2) series terms contribute.
        const double series = k_pq(f, p, q, pt, (q + 1) / 2);
        const double quad = kinetic_kpq(*kernel, p, q, pt, cfg.quadrature);
        const double dev = relative_residual(series, quad);
        worst = std::max(worst, dev);
        rows.push_back(Json{{"point", i},
                            {"p", p},
                            {"q", q},
                            {"lambda", pt.lambda},
                            {"lambda_ll", pt.lambda_ll},
                            {"series", series},
                            {"quadrature", quad},
                            {"relative_deviation", dev}});
        csv << i << ',' << p << ',' << q << ',' << format_number(pt.lambda) << ','
            << format_number(pt.lambda_ll) << ',' << format_number(series) << ','
            << format_number(quad) << ',' << format_number(dev) << '\n';
      }
    }
  }
  const bool ok = worst <= cfg.tol.kinetic;
  out.doc["pq_max"] = cfg.kinetic_pq_max;
  out.doc["max_relative_deviation"] = worst;
  out.doc["tolerance"] = cfg.tol.kinetic;
  out.doc["pass"] = ok;
  out.doc["rows"] = std::move(rows);
  out.meta["max_relative_deviation"] = worst;
  out.meta["tolerance"] = cfg.tol.kinetic;
  out.csv = csv.str();
  out.message = "max relative deviation " + format_number(worst);
  if (!ok) {
    out.status = kVerificationFailure;
    out.message = "et14: kinetic comparison failed: " + out.message + " exceeds " +
                  format_number(cfg.tol.kinetic);
  }
  return out;
}

CommandOutput cmd_subsystem(const RunConfig& cfg) {
  const GeneratingFamily f = build_family(cfg.family, cfg.quadrature);
  const SubsystemTable table = reduce_to_13(f, cfg.q_max, cfg.point.lambda);
  CommandOutput out;
  out.meta = run_meta(cfg);
  out.meta["q_max"] = cfg.q_max;
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "q,lambda,I,c\n";
  for (const auto& [q, value] : table.I) {
    const double c = table.c.at(q);
    rows.push_back(Json{{"q", q}, {"I", value}, {"c", c}});
    csv << q << ',' << format_number(table.lambda) << ',' << format_number(value) << ','
        << format_number(c) << '\n';
  }
  out.doc["lambda"] = table.lambda;
  out.doc["rows"] = std::move(rows);
  out.doc["note"] = "c_q = 0 for every q: the 13-moment reduction has no c_q terms";
  out.csv = csv.str();
  return out;
}

CommandOutput dispatch(const RunConfig& cfg) {
  if (cfg.command == "coeffs") return cmd_coeffs(cfg);
  if (cfg.command == "eval") return cmd_eval(cfg);
  if (cfg.command == "boost") return cmd_boost(cfg);
  if (cfg.command == "verify") return cmd_verify(cfg);
  if (cfg.command == "kinetic") return cmd_kinetic(cfg);
  if (cfg.command == "subsystem") return cmd_subsystem(cfg);
  throw ConfigError("unknown command \"" + cfg.command + "\"");
}

}  // namespace et14::cli
