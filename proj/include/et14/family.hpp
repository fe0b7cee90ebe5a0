#pragma once

// Generating families: the scalar functions ktilde_s(lambda), s = 0..s_max,
// from which the whole closure is rebuilt. Members are linked by the ladder
//
//   d ktilde_{s+1} / d lambda = (9/4)(3+4s)(5+4s) ktilde_s,
//
// and ktilde_0 is free. A family is accepted only if it passes that ladder
// at every grid point (see FamilyGate).

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "et14/symtensor.hpp"

namespace et14 {

enum class FamilyKind { kExponential, kPolyExponential, kKinetic, kCustom };

std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& name);

/// Parameters of the built-in kinds. The exponential kind is the kinetic
/// solution for F(x) = amplitude * exp(-scale * x); the polynomial kind uses
/// F(x) = amplitude * x * exp(-scale * x).
struct FamilyParams {
  double amplitude = 1.0;
  double scale = 1.0;
  int s_max = 12;
  int n_max = 16;
};

struct FamilyGate {
  std::vector<double> lambda_grid{-1.0, -0.5, 0.0, 0.5, 1.0};
  double tolerance = 1e-6;
};

/// d^n ktilde_s / d lambda^n evaluated at lambda.
using MemberOracle = std::function<double(int s, int n, double lambda)>;

class GeneratingFamily {
 public:
  /// Runs the ladder gate; throws FamilyError naming the first failing s.
  static GeneratingFamily checked(std::string name, FamilyKind kind, MemberOracle oracle,
                                  int s_max, int n_max, const FamilyGate& gate = {});
  /// Skips the gate. Used to build deliberately broken fixtures.
  static GeneratingFamily unchecked(std::string name, FamilyKind kind, MemberOracle oracle,
                                    int s_max, int n_max);

  /// Throws TruncationError outside 0 <= s <= s_max, 0 <= n <= n_max.
  double member(int s, int n, double lambda) const;
  double ktilde(int s, double lambda) const { return member(s, 0, lambda); }

  int s_max() const { return s_max_; }
  int n_max() const { return n_max_; }
  FamilyKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  GeneratingFamily(std::string name, FamilyKind kind, MemberOracle oracle, int s_max,
                   int n_max);

  std::string name_;
  FamilyKind kind_;
  std::shared_ptr<const MemberOracle> oracle_;
  int s_max_;
  int n_max_;
};

/// Built-in families in closed form (Gamma-function members).
GeneratingFamily make_family(FamilyKind kind, const FamilyParams& params = {});

/// Wraps `base` adding `delta` to ktilde_s (all derivatives unchanged except
/// the value). Bypasses the gate.
GeneratingFamily make_perturbed_family(const GeneratingFamily& base, int s, double delta);

/// (9/4)(3+4s)(5+4s), exact.
Rational ladder_factor(int s);

/// Relative residual of the ladder at (s, lambda); the derivative of member
/// s+1 is taken by a fourth-order central difference of its values.
double ladder_residual(const GeneratingFamily& f, int s, double lambda);

}  // namespace et14
