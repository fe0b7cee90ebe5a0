#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "et14/errors.hpp"
#include "et14/io.hpp"
#include "et14/kinetic.hpp"
#include "et14/verify.hpp"

namespace et14::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailure = 1,
  kConfigError = 2,
  kDomainError = 3,
};

struct FamilySpec {
  /// exponential | poly-exponential | kinetic | faulty-exponential
  std::string name = "exponential";
  FamilyParams params;
};

/// Layered as defaults < config file < command-line flags.
struct RunConfig {
  std::string command;
  FamilySpec family;
  int N = 6;
  int S = 4;
  TestPointSpec points;
  EquilibriumPoint point{0.0, 1.0, 0.0};
  int p_max = 4;
  int q_max = 4;
  int r = 0;
  int kinetic_points = 5;
  int kinetic_pq_max = 6;
  std::optional<Json> state;
  std::optional<Json> moments;
  Vec3 velocity{};
  Tolerances tol;
  QuadratureSpec quadrature;
  std::string format = "json";
  std::string out;
  std::string config_path;

  /// Throws Error naming the offending field.
  void validate() const;
};

/// Thrown for malformed invocations and configs; maps to exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

/// Applies the recognised keys of a config document on top of `cfg`.
void apply_config(RunConfig& cfg, const Json& doc);

GeneratingFamily build_family(const FamilySpec& spec, const QuadratureSpec& quadrature);
std::optional<KineticKernel> family_kernel(const FamilySpec& spec);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace et14::cli
