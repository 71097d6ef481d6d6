#pragma once

#include <random>
#include <vector>

#include "dts/dirac.hpp"
#include "dts/numkernel.hpp"
#include "dts/toeplitz.hpp"

namespace dts {

/// {A, S0, Pi0 = [theta1 theta2]} with A S0 - S0 A* = i Pi0 j Pi0*.
class AdmissibleTriple {
 public:
  Index n() const { return a_.rows(); }
  Index p() const { return theta1_.cols(); }
  const CMatrix& a() const { return a_; }
  const CMatrix& s0() const { return s0_; }
  const CMatrix& theta1() const { return theta1_; }
  const CMatrix& theta2() const { return theta2_; }
  CMatrix pi0() const;
  /// ||A S0 - S0 A* - i Pi0 j Pi0*||_F / (||A|| ||S0||).
  double identity_residual() const { return residual_; }

 private:
  friend AdmissibleTriple validate_triple(CMatrix a, CMatrix s0, CMatrix theta1, CMatrix theta2,
                                          const Tolerances& tol);
  CMatrix a_, s0_, theta1_, theta2_;
  double residual_ = 0.0;
};

/// Errors: ShapeMismatch, S0NotPD, SingularA, IdentityResidualTooLarge(residual).
AdmissibleTriple validate_triple(CMatrix a, CMatrix s0, CMatrix theta1, CMatrix theta2,
                                 const Tolerances& tol = {});

struct GbdtIterates {
  Index p = 0;
  std::vector<CMatrix> pi;  // Pi_0..Pi_N
  std::vector<CMatrix> s;   // S_0..S_N
  std::vector<CMatrix> c;   // C_0..C_N
  Potential potential;      // the validated C_k
};

/// Pi_{k+1} = Pi_k + i A^{-1} Pi_k j,
/// S_{k+1} = S_k + A^{-1} S_k A^{-*} + A^{-1} Pi_k Pi_k* A^{-*},
/// C_k = I + Pi_k* S_k^{-1} Pi_k - Pi_{k+1}* S_{k+1}^{-1} Pi_{k+1},  k = 0..N.
/// The recursion runs in 50-digit arithmetic: S_k becomes ill-conditioned
/// geometrically in k and the difference for C_k cancels badly in double.
GbdtIterates gbdt_iterate(const AdmissibleTriple& t, Index n, const Tolerances& tol = {});

/// Closed-form data derived from a triple:
///   At = A + i theta2 (theta2 - theta1)* S0^{-1},
///   phi(lambda) = -i (I + 2i theta1* S0^{-1} (At - lambda)^{-1} theta2).
class RationalWeyl {
 public:
  explicit RationalWeyl(const AdmissibleTriple& t);

  Index n() const { return at_.rows(); }
  Index p() const { return theta1_.cols(); }
  const CMatrix& a_tilde() const { return at_; }

  /// Weyl function; LambdaInSpectrum when At - lambda is singular.
  CMatrix phi(Complex lambda) const;
  /// Same function from the unsimplified transfer-function form.
  CMatrix phi_unsimplified(Complex lambda) const;
  /// omega(zeta) = -phi(2/zeta), written so that zeta = 0 is allowed.
  CMatrix omega(Complex zeta) const;

  /// ||At S0 - S0 At* - i (theta1 - theta2)(theta1 - theta2)*||_F / (||At|| ||S0||).
  double identity_residual() const;
  CVector spectrum() const;

 private:
  CMatrix a_, at_, s0_, theta1_, theta2_;
  CMatrix s0_inv_theta1_adj_;  // theta1* S0^{-1}
};

CMatrix gbdt_weyl(const AdmissibleTriple& t, Complex lambda);

/// nu, s_0, s_{-1}, ..., s_{-K} in closed form through the Cayley transform
/// U = (At - i)(At + i)^{-1}.
MomentData gbdt_moments(const AdmissibleTriple& t, Index k);

/// F = 2i theta1* S0^{-1} (At + i)^{-1}, U, G = (U - I) theta2 with s_{-k} = F U^{k-1} G.
/// CayleySingular when i is an eigenvalue of At.
SemiseparableGenerators semiseparable_generators(const AdmissibleTriple& t);

/// theta1 = theta2 = 0, A = S0 = I: generates C_k = I.
AdmissibleTriple trivial_triple(Index n, Index p);

/// n = p = 1: A = i, S0 = 1, theta1 = sqrt 3, theta2 = 1.
AdmissibleTriple example_triple();

/// Random admissible triple with S0 = M M* + I/2, A = H S0^{-1} + (i/2) Pi0 j Pi0* S0^{-1}
/// (H Hermitian), resampled until |eig A| >= 0.5, Im eig At > 0.05 and |eig At - i| > 0.1.
AdmissibleTriple random_triple(std::mt19937_64& rng, Index n, Index p);

}  // namespace dts
