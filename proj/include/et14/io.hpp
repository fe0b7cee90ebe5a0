#pragma once

// JSON and CSV forms of states, moments, potentials, coefficient tables and
// verification reports. Objects keep insertion order so identical inputs
// serialize to identical bytes.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "et14/potentials.hpp"
#include "et14/verify.hpp"

namespace et14 {

using Json = nlohmann::ordered_json;

/// "%.17g"
std::string format_number(double x);

Json to_json(const Vec3& v);
Json to_json(const SymMatrix& m);
Json to_json(const Mat3& m);
Json to_json(const EquilibriumPoint& p);
Json to_json(const MultiplierState& s);
Json to_json(const MomentSet& m);
Json to_json(const PotentialPair& p);
Json to_json(const CheckRecord& r);
Json to_json(const VerificationReport& r);

// Parsers throw Error with the dotted path of the offending field.
Vec3 vec3_from_json(const Json& j, const std::string& field);
SymMatrix sym_matrix_from_json(const Json& j, const std::string& field);
EquilibriumPoint point_from_json(const Json& j, const std::string& field = "point");
MultiplierState state_from_json(const Json& j, const std::string& field = "state");
MomentSet moments_from_json(const Json& j, const std::string& field = "moments");

struct CoefficientRow {
  int p = 0;
  int q = 0;
  int r = 0;
  int S = 0;
  EquilibriumPoint point;
  double value = 0.0;
};

/// Header "p,q,S,lambda,lambda_ll,lambda_ppqq,value"; an "r" column is added
/// after q when any row has r > 0.
std::string coefficient_csv(const std::vector<CoefficientRow>& rows);
Json coefficient_json(const std::vector<CoefficientRow>& rows);

/// One line per record: id, point, residual, tolerance, status.
std::string report_table(const VerificationReport& r);
std::string report_csv(const VerificationReport& r);

}  // namespace et14
