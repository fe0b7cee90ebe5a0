#pragma once

// Fully symmetric tensors over three-dimensional space.
//
// A rank-n symmetric tensor has C(n+2, 2) independent components, one per
// index multiset; a multiset is identified by its occupation counts
// (n1, n2, n3) with n1 + n2 + n3 = n. The only tensors the closure needs are
// the symmetrized Kronecker-delta products and their contractions against
// the multiplier vectors and the deviatoric matrix.

#include <array>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

namespace et14 {

using Vec3 = std::array<double, 3>;
using Rational = boost::rational<long long>;

inline constexpr int kSpaceDim = 3;
inline constexpr int kDefaultMaxSymDeltaRank = 12;

double dot(const Vec3& a, const Vec3& b);
double norm_inf(const Vec3& a);

/// Symmetric 3x3 matrix with six stored components.
class SymMatrix {
 public:
  SymMatrix() = default;
  /// Components in the order xx, yy, zz, xy, xz, yz.
  explicit SymMatrix(const std::array<double, 6>& c) : c_(c) {}

  static SymMatrix identity();
  static SymMatrix diag(double a, double b, double c);
  static SymMatrix zero() { return SymMatrix{}; }

  double operator()(int i, int j) const { return c_[slot(i, j)]; }
  double& operator()(int i, int j) { return c_[slot(i, j)]; }

  const std::array<double, 6>& components() const { return c_; }

  double trace() const { return c_[0] + c_[1] + c_[2]; }
  /// Full double contraction A:A.
  double frobenius_sq() const;
  double max_abs() const;

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator*=(double s);
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    return a + (-1.0) * b;
  }
  bool operator==(const SymMatrix&) const = default;

  static int slot(int i, int j);

 private:
  std::array<double, 6> c_{};
};

/// m - (1/3) tr(m) I.
SymMatrix deviator(const SymMatrix& m);

/// Index multiset as occupation counts of the three directions.
using IndexCounts = std::array<int, 3>;

class SymTensor {
 public:
  SymTensor() : SymTensor(0) {}
  explicit SymTensor(int rank);

  int rank() const { return rank_; }
  std::size_t size() const { return values_.size(); }

  /// Component for an index sequence over {0,1,2}, in any order.
  double at(std::span<const int> indices) const;
  double at_counts(const IndexCounts& n) const { return values_[offset(n)]; }
  double& at_counts(const IndexCounts& n) { return values_[offset(n)]; }

  const std::vector<double>& values() const { return values_; }

  /// Storage position of the multiset with the given counts (sum == rank).
  std::size_t offset(const IndexCounts& n) const;
  /// Occupation counts of storage position k.
  IndexCounts counts(std::size_t k) const;

  /// Contracts one index with v; the result stays symmetric.
  SymTensor contract_vector(const Vec3& v) const;
  /// Contracts two indices with a symmetric matrix.
  SymTensor contract_matrix(const SymMatrix& a) const;

 private:
  int rank_;
  std::vector<double> values_;
};

/// Argument consumed by contract(): a vector takes one index, a matrix two.
using ContractionSlot = std::variant<Vec3, SymMatrix>;

/// Exact value of the symmetrized delta product of the given rank at one
/// index multiset.
Rational sym_delta_entry(const IndexCounts& n);

/// delta^{(i1 i2} ... delta^{i_{n-1} i_n)}, averaged over all index
/// permutations. Entries are exact rationals computed once per rank by
/// pairing enumeration and cached; throws ParityError on odd rank.
const SymTensor& sym_delta(int rank, int max_rank = kDefaultMaxSymDeltaRank);

/// Full contraction; the slot index counts must add up to t.rank().
double contract(const SymTensor& t, std::span<const ContractionSlot> slots);

/// Contraction leaving the first index of t free.
Vec3 contract_free(const SymTensor& t, std::span<const ContractionSlot> slots);

}  // namespace et14
