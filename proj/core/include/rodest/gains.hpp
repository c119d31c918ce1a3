#pragma once

#include <utility>

#include "rodest/liegroup.hpp"

namespace rodest {

/// Riemann diagonalization of the linearized rod equations:
///   S = K^1/2 M^-1 K^1/2 = U^T Sigma^2 U.
/// Sigma holds the characteristic wave speeds, ascending; eigenvector signs
/// are normalized (largest-magnitude component positive) so downstream
/// reflection matrices are deterministic.
struct GainAnalysis {
  Mat6 S;
  Mat6 U;
  Vec6 sigma;  // diagonal of Sigma, > 0
  Mat6 K_half;
  Mat6 K_half_inverse;

  Mat6 Sigma() const { return sigma.asDiagonal(); }
};

// Symmetric square root of an SPD matrix. Throws std::invalid_argument when
// the input is not SPD.
Mat6 sqrt_spd(const Mat6& A);

GainAnalysis riemann_setup(const Mat6& M, const Mat6& K);

// phi_+- = U K^1/2 eta -+ Sigma U K^-1/2 Lambda
std::pair<Vec6, Vec6> riemann_transform(const Wrench& lambda, const Twist& eta,
                                        const GainAnalysis& analysis);
// Inverse of the above; returns (Lambda, eta).
std::pair<Wrench, Twist> riemann_inverse(const Vec6& phi_plus,
                                         const Vec6& phi_minus,
                                         const GainAnalysis& analysis);

// Boundary reflection matrices:
//   rho_0 = (I + Sigma G_0)^-1 (I - Sigma G_0),  G_0 = U K^-1/2 Gamma_0^-1 K^-1/2 U^T
//   rho_1 = (I + Sigma G_1)^-1 (I - Sigma G_1),  G_1 = U K^-1/2 Gamma_1 K^-1/2 U^T
// Gamma_0 = 0 is handled as the rigid-reflection limit rho_0 = -I.
// Throws std::invalid_argument for a singular nonzero Gamma_0 and a
// std::runtime_error when (I + Sigma G) is singular.
std::pair<Mat6, Mat6> reflection_matrices(const Mat6& gamma0,
                                          const Mat6& gamma1,
                                          const GainAnalysis& analysis);

// Convergence-rate estimate
//   mu_max = sigma_min(Sigma) / (2L) * ln(1 / sigma_max(rho0 rho1)).
// Returns +infinity when sigma_max vanishes (absorbing), 0 when it is >= 1.
double mu_max(const Mat6& rho0, const Mat6& rho1, const Vec6& sigma, double L);

// Perfectly absorbing gains:
//   Gamma_0* = K^-1/2 (K^1/2 M^-1 K^1/2)^1/2 K^-1/2,  Gamma_1* = (Gamma_0*)^-1.
std::pair<Mat6, Mat6> optimal_gains(const Mat6& M, const Mat6& K);

enum class AbsorbingBoundaries { One, Both };

// Finite-time extinction bound: 2L/sigma_min for one absorbing boundary,
// L/sigma_min for both.
double finite_time_bound(const Vec6& sigma, double L,
                         AbsorbingBoundaries absorbing);

}  // namespace rodest
