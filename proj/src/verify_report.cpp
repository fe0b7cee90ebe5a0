#include <algorithm>
#include <cmath>
#include <limits>

#include "et14/errors.hpp"
#include "et14/verify.hpp"

namespace et14 {

void TestPointSpec::validate() const {
  auto ordered = [](const Range& r, const char* name) {
    if (!(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo <= r.hi)) {
      throw Error(std::string("point range '") + name + "' must satisfy lo <= hi");
    }
  };
  ordered(lambda, "lambda");
  ordered(lambda_ll, "lambda_ll");
  ordered(lambda_ppqq, "lambda_ppqq");
  if (!(lambda_ll.lo > 0.0)) throw DomainError("point range 'lambda_ll' must be positive");
  if (!(epsilon >= 0.0 && epsilon <= 0.1)) {
    throw Error("point field 'epsilon' must lie in [0, 0.1]");
  }
  if (lambda_ppqq.lo < 0.0 || lambda_ppqq.hi > 0.05) {
    throw Error("point range 'lambda_ppqq' must lie within [0, 0.05]");
  }
  if (count <= 0) throw Error("point field 'count' must be positive");
}

namespace {

// Independent streams per sampler so adding points to one check does not
// shift the points of another.
PointRng stream_rng(const TestPointSpec& spec, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                    static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::uint64_t s = 0;
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  s = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return PointRng(s);
}

}  // namespace

std::vector<EquilibriumPoint> sample_equilibrium_points(const TestPointSpec& spec, int count,
                                                        bool with_ppqq, std::uint64_t stream) {
  spec.validate();
  PointRng rng = stream_rng(spec, stream);
  std::vector<EquilibriumPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    EquilibriumPoint p;
    p.lambda = rng.uniform(spec.lambda.lo, spec.lambda.hi);
    p.lambda_ll = rng.uniform(spec.lambda_ll.lo, spec.lambda_ll.hi);
    const double y = rng.uniform(spec.lambda_ppqq.lo, spec.lambda_ppqq.hi);
    p.lambda_ppqq = with_ppqq ? y : 0.0;
    out.push_back(p);
  }
  return out;
}

std::vector<MultiplierState> sample_hatted_states(const TestPointSpec& spec, int count,
                                                  std::uint64_t stream) {
  spec.validate();
  PointRng rng = stream_rng(spec, stream);
  const double e = spec.epsilon;
  std::vector<MultiplierState> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double lambda = rng.uniform(spec.lambda.lo, spec.lambda.hi);
    const double ll = rng.uniform(spec.lambda_ll.lo, spec.lambda_ll.hi);
    MultiplierState s = equilibrium_state(lambda, ll);
    for (double& x : s.lambda_i) x = rng.uniform(-e, e);
    for (double& x : s.lambda_ill) x = rng.uniform(-e, e);
    SymMatrix dev;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) dev(a, b) = rng.uniform(-e, e);
    // Removing the trace can push a diagonal entry past epsilon; redraw the
    // diagonal until the traceless part stays inside the bound.
    do {
      for (int a = 0; a < 3; ++a) dev(a, a) = rng.uniform(-e, e);
      dev = deviator(dev);
    } while (dev.max_abs() > e);
    s.lambda_ij += dev;
    s.lambda_iill = rng.uniform(spec.lambda_ppqq.lo, spec.lambda_ppqq.hi);
    out.push_back(s);
  }
  return out;
}

std::vector<std::pair<MultiplierState, Vec3>> sample_lab_states(const TestPointSpec& spec,
                                                                int count,
                                                                std::uint64_t stream) {
  spec.validate();
  PointRng rng = stream_rng(spec, stream);
  std::vector<std::pair<MultiplierState, Vec3>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double lambda = rng.uniform(spec.lambda.lo, spec.lambda.hi);
    const double ll = rng.uniform(spec.lambda_ll.lo, spec.lambda_ll.hi);
    MultiplierState s = equilibrium_state(lambda, ll);
    s.frame = Frame::kLab;
    Vec3 dir{};
    double n = 0.0;
    do {
      for (double& x : dir) x = rng.uniform(-1.0, 1.0);
      n = std::sqrt(dot(dir, dir));
    } while (n < 0.1 || n > 1.0);
    for (double& x : dir) x /= n;
    out.emplace_back(s, dir);
  }
  return out;
}

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::kPass:
      return "pass";
    case CheckStatus::kFail:
      return "fail";
    case CheckStatus::kSkipped:
      return "skipped";
    case CheckStatus::kExpectedDeviation:
      return "expected-deviation";
  }
  return "unknown";
}

void VerificationReport::add(std::string id, std::string anchor, int point_index,
                             PointRecord point, double residual, double tolerance,
                             std::string note) {
  CheckRecord r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.point_index = point_index;
  r.point = std::move(point);
  r.residual = residual;
  r.tolerance = tolerance;
  r.status = residual <= tolerance ? CheckStatus::kPass : CheckStatus::kFail;
  r.note = std::move(note);
  records.push_back(std::move(r));
}

void VerificationReport::add_skipped(std::string id, std::string anchor, std::string note) {
  CheckRecord r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.residual = std::numeric_limits<double>::quiet_NaN();
  r.status = CheckStatus::kSkipped;
  r.note = std::move(note);
  records.push_back(std::move(r));
}

void VerificationReport::merge(VerificationReport other) {
  records.insert(records.end(), std::make_move_iterator(other.records.begin()),
                 std::make_move_iterator(other.records.end()));
  metadata.insert(metadata.end(), other.metadata.begin(), other.metadata.end());
}

void VerificationReport::sort() {
  std::stable_sort(records.begin(), records.end(), [](const CheckRecord& a, const CheckRecord& b) {
    if (a.id != b.id) return a.id < b.id;
    return a.point_index < b.point_index;
  });
}

ReportSummary VerificationReport::summary() const {
  ReportSummary s;
  for (const auto& r : records) {
    ++s.total;
    switch (r.status) {
      case CheckStatus::kPass:
        ++s.passed;
        break;
      case CheckStatus::kFail:
        ++s.failed;
        break;
      case CheckStatus::kSkipped:
        ++s.skipped;
        break;
      case CheckStatus::kExpectedDeviation:
        ++s.expected_deviations;
        break;
    }
  }
  return s;
}

bool VerificationReport::all_passed() const {
  return std::all_of(records.begin(), records.end(),
                     [](const CheckRecord& r) { return r.passed(); });
}

std::vector<std::string> VerificationReport::failing_ids() const {
  std::vector<std::string> ids;
  for (const auto& r : records) {
    if (r.passed()) continue;
    if (std::find(ids.begin(), ids.end(), r.id) == ids.end()) ids.push_back(r.id);
  }
  return ids;
}

PointRecord point_record(const EquilibriumPoint& p) {
  return {{"lambda", p.lambda}, {"lambda_ll", p.lambda_ll}, {"lambda_ppqq", p.lambda_ppqq}};
}

PointRecord point_record(const MultiplierState& s) {
  PointRecord r{{"lambda", s.lambda}};
  static const char* axes[] = {"x", "y", "z"};
  for (int i = 0; i < 3; ++i) r.emplace_back(std::string("lambda_i.") + axes[i], s.lambda_i[i]);
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      r.emplace_back(std::string("lambda_ij.") + axes[i] + axes[j], s.lambda_ij(i, j));
    }
  }
  for (int i = 0; i < 3; ++i) {
    r.emplace_back(std::string("lambda_ill.") + axes[i], s.lambda_ill[i]);
  }
  r.emplace_back("lambda_iill", s.lambda_iill);
  return r;
}

}  // namespace et14
