#include "et14/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "et14/errors.hpp"

namespace et14 {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

const Json& member(const Json& j, const std::string& parent, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error("missing field '" + parent + "." + key + "'");
  }
  return j.at(key);
}

double get_number(const Json& j, const std::string& field) {
  if (!j.is_number()) throw Error("field '" + field + "' must be a number");
  return j.get<double>();
}

double optional_number(const Json& j, const std::string& parent, const char* key,
                       double fallback) {
  if (!j.contains(key)) return fallback;
  return get_number(j.at(key), parent + "." + key);
}

}  // namespace

Json to_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

Json to_json(const SymMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(Json::array({m(i, 0), m(i, 1), m(i, 2)}));
  return rows;
}

Json to_json(const Mat3& m) {
  Json rows = Json::array();
  for (const auto& row : m) rows.push_back(to_json(row));
  return rows;
}

Json to_json(const EquilibriumPoint& p) {
  return Json{{"lambda", p.lambda}, {"lambda_ll", p.lambda_ll}, {"lambda_ppqq", p.lambda_ppqq}};
}

Json to_json(const MultiplierState& s) {
  return Json{{"frame", to_string(s.frame)},
              {"lambda", s.lambda},
              {"lambda_i", to_json(s.lambda_i)},
              {"lambda_ij", to_json(s.lambda_ij)},
              {"lambda_ill", to_json(s.lambda_ill)},
              {"lambda_iill", s.lambda_iill}};
}

Json to_json(const MomentSet& m) {
  Json kij = Json::array();
  for (const auto& s : m.m_kij) kij.push_back(to_json(s));
  return Json{{"frame", to_string(m.frame)},  {"m", m.m},
              {"m_i", to_json(m.m_i)},        {"m_ij", to_json(m.m_ij)},
              {"m_ill", to_json(m.m_ill)},    {"m_iill", m.m_iill},
              {"m_k", to_json(m.m_k)},        {"m_ki", to_json(m.m_ki)},
              {"m_kij", kij},                 {"m_kill", to_json(m.m_kill)},
              {"m_kiill", to_json(m.m_kiill)}};
}

Json to_json(const PotentialPair& p) {
  return Json{{"N", p.N}, {"S", p.S}, {"h", p.h}, {"phi", to_json(p.phi)}};
}

Json to_json(const CheckRecord& r) {
  Json point = Json::object();
  for (const auto& [k, v] : r.point) point[k] = number(v);
  return Json{{"id", r.id},
              {"anchor", r.anchor},
              {"point_index", r.point_index},
              {"point", point},
              {"residual", number(r.residual)},
              {"tolerance", number(r.tolerance)},
              {"pass", r.status == CheckStatus::kSkipped ? Json(nullptr) : Json(r.passed())},
              {"status", to_string(r.status)},
              {"note", r.note}};
}

Json to_json(const VerificationReport& r) {
  const ReportSummary s = r.summary();
  Json meta = Json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  Json records = Json::array();
  for (const auto& rec : r.records) records.push_back(to_json(rec));
  Json failing = Json::array();
  for (const auto& id : r.failing_ids()) failing.push_back(id);
  return Json{{"metadata", meta},
              {"summary",
               {{"total", s.total},
                {"passed", s.passed},
                {"failed", s.failed},
                {"skipped", s.skipped},
                {"expected_deviations", s.expected_deviations},
                {"all_passed", r.all_passed()},
                {"failing_ids", failing}}},
              {"records", records}};
}

Vec3 vec3_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) throw Error("field '" + field + "' must be a 3-vector");
  Vec3 v{};
  for (int i = 0; i < 3; ++i) v[i] = get_number(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

SymMatrix sym_matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) throw Error("field '" + field + "' must be a 3x3 matrix");
  double full[3][3];
  for (int i = 0; i < 3; ++i) {
    const Vec3 row = vec3_from_json(j[i], field + "[" + std::to_string(i) + "]");
    for (int k = 0; k < 3; ++k) full[i][k] = row[k];
  }
  SymMatrix m;
  for (int i = 0; i < 3; ++i) {
    for (int k = i; k < 3; ++k) {
      if (std::abs(full[i][k] - full[k][i]) > 1e-12 * std::max(1.0, std::abs(full[i][k]))) {
        throw Error("field '" + field + "' must be symmetric");
      }
      m(i, k) = full[i][k];
    }
  }
  return m;
}

EquilibriumPoint point_from_json(const Json& j, const std::string& field) {
  if (!j.is_object()) throw Error("field '" + field + "' must be an object");
  EquilibriumPoint p;
  p.lambda = optional_number(j, field, "lambda", p.lambda);
  p.lambda_ll = optional_number(j, field, "lambda_ll", p.lambda_ll);
  p.lambda_ppqq = optional_number(j, field, "lambda_ppqq", p.lambda_ppqq);
  return p;
}

MultiplierState state_from_json(const Json& j, const std::string& field) {
  if (!j.is_object()) throw Error("field '" + field + "' must be an object");
  MultiplierState s;
  s.frame = j.contains("frame") ? frame_from_string(j.at("frame").get<std::string>())
                                : Frame::kHatted;
  s.lambda = get_number(member(j, field, "lambda"), field + ".lambda");
  s.lambda_ij = sym_matrix_from_json(member(j, field, "lambda_ij"), field + ".lambda_ij");
  if (j.contains("lambda_i")) s.lambda_i = vec3_from_json(j.at("lambda_i"), field + ".lambda_i");
  if (j.contains("lambda_ill")) {
    s.lambda_ill = vec3_from_json(j.at("lambda_ill"), field + ".lambda_ill");
  }
  s.lambda_iill = optional_number(j, field, "lambda_iill", 0.0);
  return s;
}

MomentSet moments_from_json(const Json& j, const std::string& field) {
  if (!j.is_object()) throw Error("field '" + field + "' must be an object");
  MomentSet m;
  m.frame = j.contains("frame") ? frame_from_string(j.at("frame").get<std::string>())
                                : Frame::kHatted;
  m.m = get_number(member(j, field, "m"), field + ".m");
  auto vec = [&](const char* key, Vec3& out) {
    if (j.contains(key)) out = vec3_from_json(j.at(key), field + "." + key);
  };
  auto mat = [&](const char* key, Mat3& out) {
    if (!j.contains(key)) return;
    const Json& a = j.at(key);
    if (!a.is_array() || a.size() != 3) {
      throw Error("field '" + field + "." + key + "' must be 3x3");
    }
    for (int k = 0; k < 3; ++k) {
      out[k] = vec3_from_json(a[k], field + "." + key + "[" + std::to_string(k) + "]");
    }
  };
  vec("m_i", m.m_i);
  if (j.contains("m_ij")) m.m_ij = sym_matrix_from_json(j.at("m_ij"), field + ".m_ij");
  vec("m_ill", m.m_ill);
  m.m_iill = optional_number(j, field, "m_iill", 0.0);
  vec("m_k", m.m_k);
  mat("m_ki", m.m_ki);
  if (j.contains("m_kij")) {
    const Json& a = j.at("m_kij");
    if (!a.is_array() || a.size() != 3) {
      throw Error("field '" + field + ".m_kij' must hold three 3x3 matrices");
    }
    for (int k = 0; k < 3; ++k) {
      m.m_kij[k] = sym_matrix_from_json(a[k], field + ".m_kij[" + std::to_string(k) + "]");
    }
  }
  mat("m_kill", m.m_kill);
  vec("m_kiill", m.m_kiill);
  return m;
}

std::string coefficient_csv(const std::vector<CoefficientRow>& rows) {
  bool with_r = false;
  for (const auto& row : rows) with_r = with_r || row.r > 0;
  std::ostringstream os;
  os << (with_r ? "p,q,r,S,lambda,lambda_ll,lambda_ppqq,value\n"
                : "p,q,S,lambda,lambda_ll,lambda_ppqq,value\n");
  for (const auto& row : rows) {
    os << row.p << ',' << row.q << ',';
    if (with_r) os << row.r << ',';
    os << row.S << ',' << format_number(row.point.lambda) << ','
       << format_number(row.point.lambda_ll) << ',' << format_number(row.point.lambda_ppqq)
       << ',' << format_number(row.value) << '\n';
  }
  return os.str();
}

Json coefficient_json(const std::vector<CoefficientRow>& rows) {
  Json out = Json::array();
  for (const auto& row : rows) {
    out.push_back(Json{{"p", row.p},
                       {"q", row.q},
                       {"r", row.r},
                       {"S", row.S},
                       {"lambda", row.point.lambda},
                       {"lambda_ll", row.point.lambda_ll},
                       {"lambda_ppqq", row.point.lambda_ppqq},
                       {"value", row.value}});
  }
  return out;
}

std::string report_table(const VerificationReport& r) {
  std::ostringstream os;
  char line[256];
  for (const auto& rec : r.records) {
    std::snprintf(line, sizeof line, "%-28s %5d  residual %-12.4g tol %-10.3g %s", rec.id.c_str(),
                  rec.point_index, rec.residual, rec.tolerance, to_string(rec.status).c_str());
    os << line;
    if (!rec.note.empty()) os << "  " << rec.note;
    os << '\n';
  }
  const ReportSummary s = r.summary();
  os << "total " << s.total << ", passed " << s.passed << ", failed " << s.failed
     << ", skipped " << s.skipped << ", expected deviations " << s.expected_deviations << '\n';
  return os.str();
}

std::string report_csv(const VerificationReport& r) {
  std::ostringstream os;
  os << "id,point_index,residual,tolerance,status\n";
  for (const auto& rec : r.records) {
    os << rec.id << ',' << rec.point_index << ',' << format_number(rec.residual) << ','
       << format_number(rec.tolerance) << ',' << to_string(rec.status) << '\n';
  }
  return os.str();
}

}  // namespace et14
