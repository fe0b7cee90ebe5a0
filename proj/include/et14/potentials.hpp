#pragma once

// Truncated entropy potentials h' and phi'^k in the hatted (rest) frame,
// Galilean boosts of multipliers and moments, and moment recovery by
// differentiation of the potentials.
//
// Series truncation: the term (p, q, r) of h' carries the coefficient
// h_{p,q,r}(lambda, L, y); its y^j part is kept iff p + q + 2r + 2j <= N and
// j <= S - ceil(q/2). The weights (lambda_i: 1, lambda_ill: 1, deviator: 2,
// lambda_ppqq: 2) make every compatibility relation between h' and phi'
// homogeneous, so truncated potentials satisfy them exactly when h' at
// order N+1 is paired with phi' at order N.

#include <array>
#include <map>
#include <string>

#include "et14/coeffs.hpp"
#include "et14/family.hpp"
#include "et14/symtensor.hpp"

namespace et14 {

enum class Frame { kLab, kHatted };

std::string to_string(Frame frame);
Frame frame_from_string(const std::string& s);

using Mat3 = std::array<Vec3, 3>;

struct MultiplierState {
  Frame frame = Frame::kHatted;
  double lambda = 0.0;
  Vec3 lambda_i{};
  SymMatrix lambda_ij{};
  Vec3 lambda_ill{};
  double lambda_iill = 0.0;  // lambda_ppqq

  double lambda_ll() const { return lambda_ij.trace(); }
  bool operator==(const MultiplierState&) const = default;
};

/// Hatted equilibrium: lambda_ij = (L/3) I, every other non-scalar part zero.
MultiplierState equilibrium_state(double lambda, double lambda_ll);

/// Densities m..m_iill and fluxes m_k..m_kiill of one frame. Fluxes carry
/// the flux direction k first; m_kij is stored symmetric in (i, j) only.
struct MomentSet {
  Frame frame = Frame::kHatted;
  double m = 0.0;
  Vec3 m_i{};
  SymMatrix m_ij{};
  Vec3 m_ill{};
  double m_iill = 0.0;

  Vec3 m_k{};
  Mat3 m_ki{};
  std::array<SymMatrix, 3> m_kij{};
  Mat3 m_kill{};
  Vec3 m_kiill{};
};

struct PotentialPair {
  double h = 0.0;
  Vec3 phi{};
  int N = 0;
  int S = 0;
};

struct BoostVelocity {
  Vec3 v{};
};

/// Arguments of the series with the deviator slot held as an independent
/// matrix (it is only traceless when built from a state).
struct SeriesArgs {
  double lambda = 0.0;
  Vec3 lambda_i{};
  double lambda_ll = 1.0;
  SymMatrix dev{};
  Vec3 lambda_ill{};
  double lambda_ppqq = 0.0;
};

SeriesArgs series_args(const MultiplierState& hatted);

/// Analytic derivative orders applied to the coefficients.
struct ScalarDerivative {
  int d_lambda = 0;
  int d_ll = 0;
  int d_ppqq = 0;
};

/// Multiplicative factors on individual scalar coefficients, keyed by
/// (p, q, r). Empty in normal use; verification injects faults through it.
struct CoefficientScaling {
  std::map<std::array<int, 3>, double> h;
  std::map<std::array<int, 3>, double> phi;

  bool empty() const { return h.empty() && phi.empty(); }
};

double h_series(const GeneratingFamily& f, const SeriesArgs& a, int N, int S,
                ScalarDerivative d = {}, const CoefficientScaling& scaling = {});
Vec3 phi_series(const GeneratingFamily& f, const SeriesArgs& a, int N, int S,
                ScalarDerivative d = {}, const CoefficientScaling& scaling = {});

double eval_h_hat(const GeneratingFamily& f, const MultiplierState& state, int N, int S);
Vec3 eval_phi_hat(const GeneratingFamily& f, const MultiplierState& state, int N, int S);

/// Galilean transformation of the multipliers to the frame moving with v.
MultiplierState hat_multipliers(const MultiplierState& lab, const BoostVelocity& v);

/// h' = hat h', phi' = hat phi' + hat h' v.
PotentialPair lab_potentials(const GeneratingFamily& f, const MultiplierState& lab,
                             const BoostVelocity& v, int N, int S);

/// Densities and fluxes seen from a frame where the rest frame moves with v.
MomentSet lab_moments_from_rest(const MomentSet& rest, const BoostVelocity& v);

/// Gradients of the hatted potentials with respect to the ten multipliers.
MomentSet moments_from_potentials(const GeneratingFamily& f, const MultiplierState& state,
                                  int N, int S);

// Finite-difference gradients of the series (fourth-order central). Matrix
// derivatives perturb the deviator slot; off-diagonal entries perturb the
// symmetric pair and halve the result.
Vec3 grad_h_lambda_i(const GeneratingFamily& f, const SeriesArgs& a, int N, int S,
                     const CoefficientScaling& scaling = {});
Vec3 grad_h_lambda_ill(const GeneratingFamily& f, const SeriesArgs& a, int N, int S,
                       const CoefficientScaling& scaling = {});
SymMatrix grad_h_dev(const GeneratingFamily& f, const SeriesArgs& a, int N, int S,
                     const CoefficientScaling& scaling = {});
/// result[k][i] = d phi^k / d lambda_i
Mat3 grad_phi_lambda_i(const GeneratingFamily& f, const SeriesArgs& a, int N, int S,
                       const CoefficientScaling& scaling = {});
Mat3 grad_phi_lambda_ill(const GeneratingFamily& f, const SeriesArgs& a, int N, int S,
                         const CoefficientScaling& scaling = {});
std::array<SymMatrix, 3> grad_phi_dev(const GeneratingFamily& f, const SeriesArgs& a, int N,
                                      int S, const CoefficientScaling& scaling = {});

}  // namespace et14
