#pragma once

// Numerical verification harness for the closure conditions. Each check
// produces one record per (condition, point); records are sorted by condition
// id then point index so reports are reproducible from the seed alone.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "et14/coeffs.hpp"
#include "et14/family.hpp"
#include "et14/kinetic.hpp"
#include "et14/potentials.hpp"

namespace et14 {

/// Deterministic uniform sampler: mt19937_64 with an explicit 53-bit mapping,
/// so sequences do not depend on the standard library's distributions.
class PointRng {
 public:
  explicit PointRng(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct TestPointSpec {
  std::uint64_t seed = 0;
  int count = 10;
  Range lambda{-1.0, 1.0};
  Range lambda_ll{0.5, 4.0};
  /// Bound on every nonequilibrium component of a hatted state.
  double epsilon = 0.1;
  Range lambda_ppqq{0.0, 0.05};

  /// Throws Error naming the offending field.
  void validate() const;
};

// Independent sampler streams used by run_all, so that changing one point
// count leaves the other point sets unchanged.
inline constexpr std::uint64_t kHattedStream = 1;
inline constexpr std::uint64_t kLabStream = 2;
inline constexpr std::uint64_t kScalarStream = 3;
inline constexpr std::uint64_t kKineticStream = 4;

/// Scalar equilibrium points; `with_ppqq` false pins lambda_ppqq to zero.
std::vector<EquilibriumPoint> sample_equilibrium_points(const TestPointSpec& spec, int count,
                                                        bool with_ppqq, std::uint64_t stream);

/// Hatted states with nonequilibrium parts uniform in [-epsilon, epsilon].
std::vector<MultiplierState> sample_hatted_states(const TestPointSpec& spec, int count,
                                                  std::uint64_t stream);

/// Lab states of equilibrium shape (lambda_i = lambda_ill = 0, isotropic
/// lambda_ij, lambda_iill = 0) together with a unit boost direction each.
std::vector<std::pair<MultiplierState, Vec3>> sample_lab_states(const TestPointSpec& spec,
                                                                int count,
                                                                std::uint64_t stream);

enum class CheckStatus { kPass, kFail, kSkipped, kExpectedDeviation };

std::string to_string(CheckStatus status);

using PointRecord = std::vector<std::pair<std::string, double>>;

struct CheckRecord {
  std::string id;
  std::string anchor;
  int point_index = 0;
  PointRecord point;
  /// NaN for skipped records.
  double residual = 0.0;
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::kPass;
  std::string note;

  bool passed() const { return status != CheckStatus::kFail; }
};

struct ReportSummary {
  int total = 0;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  int expected_deviations = 0;
};

struct VerificationReport {
  std::vector<CheckRecord> records;
  std::vector<std::pair<std::string, std::string>> metadata;

  /// Appends a record whose status follows residual <= tolerance.
  void add(std::string id, std::string anchor, int point_index, PointRecord point,
           double residual, double tolerance, std::string note = {});
  void add_skipped(std::string id, std::string anchor, std::string note);
  void merge(VerificationReport other);
  /// Stable sort by (id, point_index).
  void sort();

  ReportSummary summary() const;
  bool all_passed() const;
  std::vector<std::string> failing_ids() const;
};

PointRecord point_record(const EquilibriumPoint& p);
PointRecord point_record(const MultiplierState& s);

struct Tolerances {
  double compatibility = 1e-5;
  double velocity_order_margin = 0.5;
  double velocity_floor = 1e-9;
  double identity = 1e-9;
  double closed_form = 1e-9;
  double path = 1e-10;
  double trace_fd = 1e-7;
  double deviator = 1e-15;
  double sym_delta = 1e-15;
  double kinetic = 1e-7;
  double kinetic_fd = 1e-6;
  double subsystem = 1e-9;
  double subsystem_derivative = 1e-6;
  double ladder = 1e-6;
};

struct VerifyConfig {
  TestPointSpec points;
  int N = 6;
  int S = 4;
  int scalar_points = 20;
  int kinetic_points = 5;
  int lab_points = 4;
  int pq_max = 6;
  int closed_form_max = 5;
  int r_max = 2;
  int sym_delta_rank_max = 6;
  int subsystem_q_max = 6;
  std::vector<int> velocity_orders{2, 4};
  std::vector<double> v_scales{0.2, 0.1, 0.05};
  int ladder_s_max = 4;
  int ladder_grid = 9;
  Tolerances tol;
  QuadratureSpec quadrature;
  /// Kernel whose kinetic solution the family is; kinetic checks are skipped
  /// without one.
  std::optional<KineticKernel> kernel;
};

VerificationReport check_compatibility(const GeneratingFamily& f,
                                       const std::vector<MultiplierState>& states, int N, int S,
                                       double tolerance = 1e-5,
                                       const CoefficientScaling& scaling = {});

VerificationReport check_velocity_independence(
    const GeneratingFamily& f, const std::vector<std::pair<MultiplierState, Vec3>>& lab_states,
    const std::vector<double>& v_scales, int N, const Tolerances& tol = {});

VerificationReport check_scalar_identity_chain(const GeneratingFamily& f, int pq_max, int r_max,
                                               const std::vector<EquilibriumPoint>& points,
                                               int S, double tolerance = 1e-9);

VerificationReport check_constraints(const GeneratingFamily& f,
                                     const std::vector<EquilibriumPoint>& points, int S,
                                     double tolerance = 1e-9);

VerificationReport check_closed_forms(const GeneratingFamily& f, int pq_max,
                                      const std::vector<EquilibriumPoint>& points, int S,
                                      double tolerance = 1e-9);

VerificationReport check_path_independence(const GeneratingFamily& f, int pq_max,
                                           const std::vector<EquilibriumPoint>& points, int S,
                                           std::uint64_t seed, double tolerance = 1e-10);

VerificationReport check_trace_recurrences(const GeneratingFamily& f, int N,
                                           const std::vector<EquilibriumPoint>& points, int S,
                                           double tolerance = 1e-7);

VerificationReport check_structure(const GeneratingFamily& f, int pq_max, int r_max,
                                   int sym_delta_rank_max, std::uint64_t seed,
                                   const Tolerances& tol = {});

VerificationReport check_ladder(const GeneratingFamily& f, int s_max, int grid,
                                double tolerance = 1e-6, const std::string& id_prefix = "ladder");

VerificationReport check_kinetic_equivalence(const GeneratingFamily& f,
                                             const KineticKernel& kernel,
                                             const std::vector<EquilibriumPoint>& points,
                                             int pq_max, const QuadratureSpec& spec,
                                             const Tolerances& tol = {});

VerificationReport check_subsystem(const GeneratingFamily& f, int q_max,
                                   const std::vector<EquilibriumPoint>& points,
                                   const Tolerances& tol = {});

/// Runs every check above at the configured truncation and sizes.
VerificationReport run_all(const GeneratingFamily& f, const VerifyConfig& config);

}  // namespace et14
