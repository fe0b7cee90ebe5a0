#pragma once

#include <string>

#include "cli.hpp"

namespace et14::cli {

struct CommandOutput {
  /// Provenance: command, family, truncations, seed.
  Json meta = Json::object();
  /// Result fields of the JSON document, after "meta".
  Json doc = Json::object();
  /// Flat table used for --format csv.
  std::string csv;
  int status = kOk;
  /// Printed on stderr after the output is written.
  std::string message;
};

Json run_meta(const RunConfig& cfg);

CommandOutput cmd_coeffs(const RunConfig& cfg);
CommandOutput cmd_eval(const RunConfig& cfg);
CommandOutput cmd_boost(const RunConfig& cfg);
CommandOutput cmd_verify(const RunConfig& cfg);
CommandOutput cmd_kinetic(const RunConfig& cfg);
CommandOutput cmd_subsystem(const RunConfig& cfg);

CommandOutput dispatch(const RunConfig& cfg);

}  // namespace et14::cli
