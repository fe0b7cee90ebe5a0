#include "et14/symtensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "et14/errors.hpp"

namespace et14 {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm_inf(const Vec3& a) {
  return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
}

int SymMatrix::slot(int i, int j) {
  if (i == j) return i;
  const int lo = std::min(i, j);
  const int hi = std::max(i, j);
  return lo == 0 ? (hi == 1 ? 3 : 4) : 5;
}

SymMatrix SymMatrix::identity() { return diag(1.0, 1.0, 1.0); }

SymMatrix SymMatrix::diag(double a, double b, double c) {
  return SymMatrix({a, b, c, 0.0, 0.0, 0.0});
}

double SymMatrix::frobenius_sq() const {
  return c_[0] * c_[0] + c_[1] * c_[1] + c_[2] * c_[2] +
         2.0 * (c_[3] * c_[3] + c_[4] * c_[4] + c_[5] * c_[5]);
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double x : c_) m = std::max(m, std::abs(x));
  return m;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  for (int k = 0; k < 6; ++k) c_[k] += o.c_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

SymMatrix deviator(const SymMatrix& m) {
  SymMatrix d = m;
  const double third = m.trace() / 3.0;
  for (int i = 0; i < 3; ++i) d(i, i) -= third;
  return d;
}

// ---------------------------------------------------------------------------

SymTensor::SymTensor(int rank) : rank_(rank) {
  if (rank < 0) throw ArityError("negative tensor rank");
  values_.assign(static_cast<std::size_t>((rank + 1) * (rank + 2) / 2), 0.0);
}

std::size_t SymTensor::offset(const IndexCounts& n) const {
  const int t = n[1] + n[2];
  return static_cast<std::size_t>(t * (t + 1) / 2 + n[2]);
}

IndexCounts SymTensor::counts(std::size_t k) const {
  int t = 0;
  while (static_cast<std::size_t>((t + 1) * (t + 2) / 2) <= k) ++t;
  const int c = static_cast<int>(k) - t * (t + 1) / 2;
  return {rank_ - t, t - c, c};
}

double SymTensor::at(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != rank_) {
    throw ArityError("index count " + std::to_string(indices.size()) + " != rank " +
                     std::to_string(rank_));
  }
  IndexCounts n{0, 0, 0};
  for (int i : indices) {
    if (i < 0 || i > 2) throw ArityError("index out of range {0,1,2}");
    ++n[i];
  }
  return at_counts(n);
}

SymTensor SymTensor::contract_vector(const Vec3& v) const {
  if (rank_ < 1) throw ArityError("cannot contract a rank-0 tensor");
  SymTensor out(rank_ - 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const IndexCounts m = out.counts(k);
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
      IndexCounts n = m;
      ++n[i];
      acc += values_[offset(n)] * v[i];
    }
    out.values_[k] = acc;
  }
  return out;
}

SymTensor SymTensor::contract_matrix(const SymMatrix& a) const {
  if (rank_ < 2) throw ArityError("matrix slot needs two free indices");
  SymTensor out(rank_ - 2);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const IndexCounts m = out.counts(k);
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        IndexCounts n = m;
        ++n[i];
        ++n[j];
        acc += values_[offset(n)] * a(i, j);
      }
    }
    out.values_[k] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kHardMaxRank = 24;

long long double_factorial_odd(int n) {  // (n)!! for odd n, 1 for n <= 0
  long long r = 1;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

// Number of perfect pairings of the multiset in which every pair joins two
// equal indices. Enumerates the partner of the first remaining index.
long long count_delta_pairings(IndexCounts n, std::map<IndexCounts, long long>& memo) {
  if (n[0] + n[1] + n[2] == 0) return 1;
  if (auto it = memo.find(n); it != memo.end()) return it->second;
  int first = 0;
  while (n[first] == 0) ++first;
  long long total = 0;
  // every other copy of `first` is an admissible partner
  for (int partner = 1; partner < n[first]; ++partner) {
    IndexCounts rest = n;
    rest[first] -= 2;
    total += count_delta_pairings(rest, memo);
  }
  memo.emplace(n, total);
  return total;
}

struct DeltaCache {
  std::once_flag once;
  SymTensor tensor;
};

}  // namespace

Rational sym_delta_entry(const IndexCounts& n) {
  const int rank = n[0] + n[1] + n[2];
  if (rank % 2 != 0) throw ParityError("sym_delta requires an even rank");
  std::map<IndexCounts, long long> memo;
  const long long good = count_delta_pairings(n, memo);
  return Rational(good, double_factorial_odd(rank - 1));
}

const SymTensor& sym_delta(int rank, int max_rank) {
  if (rank < 0 || rank % 2 != 0) {
    throw ParityError("sym_delta requires an even non-negative rank, got " +
                      std::to_string(rank));
  }
  if (rank > max_rank || rank > kHardMaxRank) {
    throw DomainError("sym_delta rank " + std::to_string(rank) + " exceeds the maximum " +
                      std::to_string(std::min(max_rank, kHardMaxRank)));
  }
  static std::array<DeltaCache, kHardMaxRank / 2 + 1> cache;
  DeltaCache& slot = cache[static_cast<std::size_t>(rank / 2)];
  std::call_once(slot.once, [&] {
    SymTensor t(rank);
    std::map<IndexCounts, long long> memo;
    const long long all = double_factorial_odd(rank - 1);
    for (std::size_t k = 0; k < t.size(); ++k) {
      const IndexCounts n = t.counts(k);
      const Rational r(count_delta_pairings(n, memo), all);
      t.at_counts(n) = boost::rational_cast<double>(r);
    }
    slot.tensor = std::move(t);
  });
  return slot.tensor;
}

namespace {

int slot_width(const ContractionSlot& s) { return std::holds_alternative<Vec3>(s) ? 1 : 2; }

SymTensor contract_slots(const SymTensor& t, std::span<const ContractionSlot> slots,
                         int keep) {
  int width = 0;
  for (const auto& s : slots) width += slot_width(s);
  if (width + keep != t.rank()) {
    throw ArityError("contraction consumes " + std::to_string(width + keep) +
                     " indices of a rank-" + std::to_string(t.rank()) + " tensor");
  }
  SymTensor acc = t;
  for (const auto& s : slots) {
    if (const auto* v = std::get_if<Vec3>(&s)) {
      acc = acc.contract_vector(*v);
    } else {
      acc = acc.contract_matrix(std::get<SymMatrix>(s));
    }
  }
  return acc;
}

}  // namespace

double contract(const SymTensor& t, std::span<const ContractionSlot> slots) {
  return contract_slots(t, slots, 0).values()[0];
}

Vec3 contract_free(const SymTensor& t, std::span<const ContractionSlot> slots) {
  const SymTensor r = contract_slots(t, slots, 1);
  return {r.at_counts({1, 0, 0}), r.at_counts({0, 1, 0}), r.at_counts({0, 0, 1})};
}

}  // namespace et14
