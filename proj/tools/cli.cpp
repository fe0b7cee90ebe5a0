#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "et14/errors.hpp"

namespace et14::cli {

namespace {

const Json& at(const Json& j, const char* key) { return j.at(key); }

int get_int(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError("field '" + field + "' must be an integer");
  return j.get<int>();
}

double get_double(const Json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError("field '" + field + "' must be a number");
  return j.get<double>();
}

std::string get_string(const Json& j, const std::string& field) {
  if (!j.is_string()) throw ConfigError("field '" + field + "' must be a string");
  return j.get<std::string>();
}

std::uint64_t get_seed(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                 j.get<long long>() < 0)) {
    throw ConfigError("field '" + field + "' must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

Range get_range(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError("field '" + field + "' must be a [lo, hi] pair");
  }
  return {get_double(j[0], field + "[0]"), get_double(j[1], field + "[1]")};
}

void require_object(const Json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError("field '" + field + "' must be an object");
}

// Rejects keys outside `known` so that typos do not silently fall back to
// defaults.
void require_known(const Json& j, const std::string& field,
                   std::initializer_list<const char*> known) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) {
      throw ConfigError("unknown field '" + (field.empty() ? "" : field + ".") + item.key() +
                        "'");
    }
  }
}

void apply_family(FamilySpec& spec, const Json& j) {
  if (j.is_string()) {
    spec.name = j.get<std::string>();
    return;
  }
  require_object(j, "family");
  require_known(j, "family", {"name", "amplitude", "scale", "s_max"});
  if (j.contains("name")) spec.name = get_string(at(j, "name"), "family.name");
  if (j.contains("amplitude")) {
    spec.params.amplitude = get_double(at(j, "amplitude"), "family.amplitude");
  }
  if (j.contains("scale")) spec.params.scale = get_double(at(j, "scale"), "family.scale");
  if (j.contains("s_max")) spec.params.s_max = get_int(at(j, "s_max"), "family.s_max");
}

void apply_points(TestPointSpec& spec, const Json& j) {
  require_object(j, "points");
  require_known(j, "points", {"seed", "count", "lambda", "lambda_ll", "epsilon", "lambda_ppqq"});
  if (j.contains("seed")) spec.seed = get_seed(at(j, "seed"), "points.seed");
  if (j.contains("count")) spec.count = get_int(at(j, "count"), "points.count");
  if (j.contains("lambda")) spec.lambda = get_range(at(j, "lambda"), "points.lambda");
  if (j.contains("lambda_ll")) spec.lambda_ll = get_range(at(j, "lambda_ll"), "points.lambda_ll");
  if (j.contains("epsilon")) spec.epsilon = get_double(at(j, "epsilon"), "points.epsilon");
  if (j.contains("lambda_ppqq")) {
    spec.lambda_ppqq = get_range(at(j, "lambda_ppqq"), "points.lambda_ppqq");
  }
}

void apply_tolerances(Tolerances& tol, const Json& j) {
  require_object(j, "tolerances");
  const std::pair<const char*, double*> fields[] = {
      {"compatibility", &tol.compatibility},
      {"velocity_order_margin", &tol.velocity_order_margin},
      {"velocity_floor", &tol.velocity_floor},
      {"identity", &tol.identity},
      {"closed_form", &tol.closed_form},
      {"path", &tol.path},
      {"trace_fd", &tol.trace_fd},
      {"deviator", &tol.deviator},
      {"sym_delta", &tol.sym_delta},
      {"kinetic", &tol.kinetic},
      {"kinetic_fd", &tol.kinetic_fd},
      {"subsystem", &tol.subsystem},
      {"subsystem_derivative", &tol.subsystem_derivative},
      {"ladder", &tol.ladder},
  };
  for (const auto& item : j.items()) {
    double* target = nullptr;
    for (const auto& [name, ptr] : fields) {
      if (item.key() == name) target = ptr;
    }
    if (target == nullptr) throw ConfigError("unknown field 'tolerances." + item.key() + "'");
    *target = get_double(item.value(), "tolerances." + item.key());
  }
}

void apply_quadrature(QuadratureSpec& q, const Json& j) {
  require_object(j, "quadrature");
  require_known(j, "quadrature", {"rule", "rel_tol", "node_budget", "cutoff"});
  if (j.contains("rule")) {
    const std::string rule = get_string(at(j, "rule"), "quadrature.rule");
    if (rule == "adaptive") {
      q.rule = QuadratureSpec::Rule::kAdaptive;
    } else if (rule == "fixed-node") {
      q.rule = QuadratureSpec::Rule::kFixedNode;
    } else {
      throw ConfigError("field 'quadrature.rule' must be \"adaptive\" or \"fixed-node\"");
    }
  }
  if (j.contains("rel_tol")) q.rel_tol = get_double(at(j, "rel_tol"), "quadrature.rel_tol");
  if (j.contains("node_budget")) {
    q.node_budget = get_int(at(j, "node_budget"), "quadrature.node_budget");
  }
  if (j.contains("cutoff")) {
    const Json& c = at(j, "cutoff");
    if (c.is_string() && c.get<std::string>() == "auto") {
      q.cutoff = QuadratureSpec::Cutoff::kAuto;
    } else {
      q.cutoff = QuadratureSpec::Cutoff::kFixed;
      q.fixed_cutoff = get_double(c, "quadrature.cutoff");
    }
  }
}

// Parse errors inside nested objects surface as plain Error; re-tag them as
// configuration errors without losing the field path.
template <class F>
auto as_config(F&& f) {
  try {
    return f();
  } catch (const DomainError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

Json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

bool same_file(const std::string& a, const std::string& b) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::exists(a, ec) && fs::exists(b, ec)) return fs::equivalent(a, b, ec);
  return fs::weakly_canonical(a, ec) == fs::weakly_canonical(b, ec);
}

void write_output(const RunConfig& cfg, const CommandOutput& result, std::ostream& out) {
  std::string text;
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << result.csv;
    // Provenance trails the table so the header stays on the first line.
    for (const auto& item : result.meta.items()) {
      os << "# " << item.key() << '=' << (item.value().is_string() ? item.value().get<std::string>()
                                                                   : item.value().dump())
         << '\n';
    }
    text = os.str();
  } else {
    Json doc = Json::object();
    doc["meta"] = result.meta;
    for (const auto& item : result.doc.items()) doc[item.key()] = item.value();
    text = doc.dump(2) + "\n";
  }
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot write output file '" + cfg.out + "'");
  file << text;
}

}  // namespace

void apply_config(RunConfig& cfg, const Json& doc) {
  require_object(doc, "config");
  require_known(doc, "",
                {"family", "N", "S", "seed", "points", "point", "p_max", "q_max", "r", "kinetic",
                 "state", "moments", "velocity", "tolerances", "quadrature", "format", "out"});
  if (doc.contains("family")) apply_family(cfg.family, doc.at("family"));
  if (doc.contains("N")) cfg.N = get_int(doc.at("N"), "N");
  if (doc.contains("S")) cfg.S = get_int(doc.at("S"), "S");
  if (doc.contains("points")) apply_points(cfg.points, doc.at("points"));
  if (doc.contains("seed")) cfg.points.seed = get_seed(doc.at("seed"), "seed");
  if (doc.contains("point")) {
    cfg.point = as_config([&] { return point_from_json(doc.at("point"), "point"); });
  }
  if (doc.contains("p_max")) cfg.p_max = get_int(doc.at("p_max"), "p_max");
  if (doc.contains("q_max")) cfg.q_max = get_int(doc.at("q_max"), "q_max");
  if (doc.contains("r")) cfg.r = get_int(doc.at("r"), "r");
  if (doc.contains("kinetic")) {
    const Json& k = doc.at("kinetic");
    require_object(k, "kinetic");
    require_known(k, "kinetic", {"points", "pq_max"});
    if (k.contains("points")) cfg.kinetic_points = get_int(k.at("points"), "kinetic.points");
    if (k.contains("pq_max")) cfg.kinetic_pq_max = get_int(k.at("pq_max"), "kinetic.pq_max");
  }
  if (doc.contains("state")) cfg.state = doc.at("state");
  if (doc.contains("moments")) cfg.moments = doc.at("moments");
  if (doc.contains("velocity")) {
    cfg.velocity = as_config([&] { return vec3_from_json(doc.at("velocity"), "velocity"); });
  }
  if (doc.contains("tolerances")) apply_tolerances(cfg.tol, doc.at("tolerances"));
  if (doc.contains("quadrature")) apply_quadrature(cfg.quadrature, doc.at("quadrature"));
  if (doc.contains("format")) cfg.format = get_string(doc.at("format"), "format");
  if (doc.contains("out")) cfg.out = get_string(doc.at("out"), "out");
}

void RunConfig::validate() const {
  static const char* const kFamilies[] = {"exponential", "poly-exponential", "kinetic",
                                          "faulty-exponential"};
  bool known = false;
  for (const char* name : kFamilies) known = known || family.name == name;
  if (!known) {
    throw ConfigError("field 'family' must be one of exponential, poly-exponential, kinetic, "
                      "faulty-exponential (got \"" + family.name + "\")");
  }
  if (!(family.params.scale > 0.0)) throw ConfigError("field 'family.scale' must be positive");
  if (family.params.amplitude == 0.0) {
    throw ConfigError("field 'family.amplitude' must be non-zero");
  }
  if (family.params.s_max < 1) throw ConfigError("field 'family.s_max' must be at least 1");
  if (N < 0) throw ConfigError("field 'N' (--n-trunc) must be non-negative");
  if (S < 0) throw ConfigError("field 'S' (--s-trunc) must be non-negative");
  if (p_max < 0) throw ConfigError("field 'p_max' must be non-negative");
  if (q_max < 0) throw ConfigError("field 'q_max' must be non-negative");
  if (r < 0) throw ConfigError("field 'r' must be non-negative");
  if (kinetic_points < 1) throw ConfigError("field 'kinetic.points' must be at least 1");
  if (kinetic_pq_max < 0) throw ConfigError("field 'kinetic.pq_max' must be non-negative");
  if (format != "json" && format != "csv") {
    throw ConfigError("field 'format' (--format) must be json or csv (got \"" + format + "\")");
  }
  as_config([&] {
    points.validate();
    return 0;
  });
  try {
    quadrature.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("field 'quadrature': ") + e.what());
  }
  const std::pair<const char*, double> tols[] = {
      {"compatibility", tol.compatibility}, {"velocity_order_margin", tol.velocity_order_margin},
      {"velocity_floor", tol.velocity_floor}, {"identity", tol.identity},
      {"closed_form", tol.closed_form},     {"path", tol.path},
      {"trace_fd", tol.trace_fd},           {"deviator", tol.deviator},
      {"sym_delta", tol.sym_delta},         {"kinetic", tol.kinetic},
      {"kinetic_fd", tol.kinetic_fd},       {"subsystem", tol.subsystem},
      {"subsystem_derivative", tol.subsystem_derivative}, {"ladder", tol.ladder},
  };
  for (const auto& [name, value] : tols) {
    if (!(value > 0.0)) {
      throw ConfigError(std::string("field 'tolerances.") + name + "' must be positive");
    }
  }
  if (!out.empty() && !config_path.empty() && same_file(out, config_path)) {
    throw ConfigError("field 'out' (--out) must not overwrite the config file");
  }
}

GeneratingFamily build_family(const FamilySpec& spec, const QuadratureSpec& quadrature) {
  if (spec.name == "exponential") return make_family(FamilyKind::kExponential, spec.params);
  if (spec.name == "poly-exponential") {
    return make_family(FamilyKind::kPolyExponential, spec.params);
  }
  if (spec.name == "kinetic") {
    return make_kinetic_family(*family_kernel(spec), spec.params.s_max, quadrature);
  }
  if (spec.name == "faulty-exponential") {
    // k~_1 shifted by one: fails the ladder and every condition built on it.
    return make_perturbed_family(make_family(FamilyKind::kExponential, spec.params), 1, 1.0);
  }
  throw ConfigError("unknown family \"" + spec.name + "\"");
}

std::optional<KineticKernel> family_kernel(const FamilySpec& spec) {
  if (spec.name == "exponential" || spec.name == "kinetic") {
    return exponential_kernel(spec.params.amplitude, spec.params.scale);
  }
  if (spec.name == "poly-exponential") {
    return poly_exponential_kernel(spec.params.amplitude, spec.params.scale);
  }
  return std::nullopt;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closure coefficients, potentials and verification for the 14-moment system"};
  app.name("et14");
  std::string command;
  std::optional<std::string> config_path;
  std::optional<std::string> family;
  std::optional<int> n_trunc;
  std::optional<int> s_trunc;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  app.add_option("command", command, "coeffs | eval | boost | verify | kinetic | subsystem")
      ->required()
      ->check(CLI::IsMember({"coeffs", "eval", "boost", "verify", "kinetic", "subsystem"}));
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--family", family,
                 "exponential | poly-exponential | kinetic | faulty-exponential");
  app.add_option("--n-trunc", n_trunc, "potential series truncation N");
  app.add_option("--s-trunc", s_trunc, "k00 series truncation S");
  app.add_option("--seed", seed, "test-point seed");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--format", format, "json | csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    RunConfig cfg;
    cfg.command = command;
    if (config_path) {
      cfg.config_path = *config_path;
      apply_config(cfg, read_config(*config_path));
    }
    if (family) cfg.family.name = *family;
    if (n_trunc) cfg.N = *n_trunc;
    if (s_trunc) cfg.S = *s_trunc;
    if (seed) cfg.points.seed = *seed;
    if (out_path) cfg.out = *out_path;
    if (format) cfg.format = *format;
    cfg.validate();

    const CommandOutput result = dispatch(cfg);
    write_output(cfg, result, out);
    if (!result.message.empty()) err << result.message << '\n';
    return result.status;
  } catch (const DomainError& e) {
    err << "et14: domain error: " << e.what() << '\n';
    return kDomainError;
  } catch (const DecayError& e) {
    err << "et14: domain error: " << e.what() << '\n';
    return kDomainError;
  } catch (const Error& e) {
    err << "et14: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Json::exception& e) {
    err << "et14: config error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace et14::cli
