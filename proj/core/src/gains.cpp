#include "rodest/gains.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rodest {

Mat6 sqrt_spd(const Mat6& A) {
  Eigen::SelfAdjointEigenSolver<Mat6> es(A);
  if (es.eigenvalues().minCoeff() <= 0)
    throw std::invalid_argument("sqrt_spd: matrix is not SPD");
  return es.operatorSqrt();
}

GainAnalysis riemann_setup(const Mat6& M, const Mat6& K) {
  GainAnalysis a;
  a.K_half = sqrt_spd(K);
  sqrt_spd(M);  // SPD check
  a.K_half_inverse = a.K_half.ldlt().solve(Mat6::Identity());
  a.S = a.K_half * M.ldlt().solve(Mat6::Identity()) * a.K_half;
  a.S = 0.5 * (a.S + a.S.transpose());

  Eigen::SelfAdjointEigenSolver<Mat6> es(a.S);  // eigenvalues ascending
  if (es.eigenvalues().minCoeff() <= 0)
    throw std::invalid_argument("riemann_setup: S is not SPD");
  a.sigma = es.eigenvalues().cwiseSqrt();
  // S = Q D Q^T with Q columns the eigenvectors, so U = Q^T
  a.U = es.eigenvectors().transpose();
  for (int i = 0; i < 6; ++i) {
    int j;
    a.U.row(i).cwiseAbs().maxCoeff(&j);
    if (a.U(i, j) < 0) a.U.row(i) = -a.U.row(i);
  }
  return a;
}

std::pair<Vec6, Vec6> riemann_transform(const Wrench& lambda, const Twist& eta,
                                        const GainAnalysis& a) {
  Vec6 e = a.U * (a.K_half * eta);
  Vec6 l = a.sigma.asDiagonal() * (a.U * (a.K_half_inverse * lambda));
  return {e - l, e + l};
}

std::pair<Wrench, Twist> riemann_inverse(const Vec6& phi_plus,
                                         const Vec6& phi_minus,
                                         const GainAnalysis& a) {
  Vec6 diff = phi_minus - phi_plus;
  Wrench lambda = 0.5 * a.K_half * a.U.transpose() *
                  (a.sigma.cwiseInverse().asDiagonal() * diff);
  Twist eta = 0.5 * a.K_half_inverse * a.U.transpose() * (phi_minus + phi_plus);
  return {lambda, eta};
}

namespace {

Mat6 reflection_from_G(const Mat6& G, const GainAnalysis& a) {
  Mat6 SG = a.sigma.asDiagonal() * G;
  Eigen::FullPivLU<Mat6> lu(Mat6::Identity() + SG);
  if (!lu.isInvertible())
    throw std::runtime_error("reflection matrix: I + Sigma G is singular");
  return lu.solve(Mat6::Identity() - SG);
}

}  // namespace

std::pair<Mat6, Mat6> reflection_matrices(const Mat6& gamma0,
                                          const Mat6& gamma1,
                                          const GainAnalysis& a) {
  Mat6 rho0;
  if (gamma0.isZero(0.0)) {
    rho0 = -Mat6::Identity();  // rigid-reflection limit
  } else {
    Eigen::FullPivLU<Mat6> lu(gamma0);
    if (!lu.isInvertible())
      throw std::invalid_argument(
          "reflection_matrices: singular nonzero Gamma_0");
    Mat6 G0 = a.U * a.K_half_inverse * lu.solve(Mat6::Identity()) *
              a.K_half_inverse * a.U.transpose();
    rho0 = reflection_from_G(G0, a);
  }
  Mat6 G1 =
      a.U * a.K_half_inverse * gamma1 * a.K_half_inverse * a.U.transpose();
  Mat6 rho1 = reflection_from_G(G1, a);
  return {rho0, rho1};
}

double mu_max(const Mat6& rho0, const Mat6& rho1, const Vec6& sigma,
              double L) {
  if (L <= 0) throw std::invalid_argument("mu_max: L must be positive");
  Eigen::JacobiSVD<Mat6> svd(rho0 * rho1);
  double smax = svd.singularValues().maxCoeff();
  if (smax == 0.0) return std::numeric_limits<double>::infinity();
  if (smax >= 1.0) return 0.0;
  return sigma.minCoeff() / (2.0 * L) * std::log(1.0 / smax);
}

std::pair<Mat6, Mat6> optimal_gains(const Mat6& M, const Mat6& K) {
  Mat6 K_half = sqrt_spd(K);
  Mat6 K_half_inv = K_half.ldlt().solve(Mat6::Identity());
  Mat6 S = K_half * M.ldlt().solve(Mat6::Identity()) * K_half;
  S = 0.5 * (S + S.transpose());
  Mat6 gamma0 = K_half_inv * sqrt_spd(S) * K_half_inv;
  Mat6 Sinv = K_half_inv * M * K_half_inv;
  Sinv = 0.5 * (Sinv + Sinv.transpose());
  Mat6 gamma1 = K_half * sqrt_spd(Sinv) * K_half;
  return {gamma0, gamma1};
}

double finite_time_bound(const Vec6& sigma, double L,
                         AbsorbingBoundaries absorbing) {
  double smin = sigma.minCoeff();
  return absorbing == AbsorbingBoundaries::One ? 2.0 * L / smin : L / smin;
}

}  // namespace rodest
