#include "rodest/rodmodel.hpp"

#include <cmath>
#include <stdexcept>

namespace rodest {

RodParameters RodParameters::uniform(double length, int node_count,
                                     const Mat6& M, const Mat6& K) {
  RodParameters rod;
  rod.length = length;
  rod.node_count = node_count;
  rod.inertia.assign(node_count, M);
  rod.stiffness.assign(node_count, K);
  Twist xi_o = Twist::Zero();
  xi_o(5) = 1.0;
  rod.reference_strain.assign(node_count, xi_o);
  rod.gravity_wrench.assign(node_count, Wrench::Zero());
  return rod;
}

void RodParameters::set_gravity(const Vec3& g_vec) {
  for (int k = 0; k < node_count; ++k) {
    // rho*A from the mean diagonal of the linear inertia block
    double rhoA = inertia[k].bottomRightCorner<3, 3>().diagonal().mean();
    gravity_wrench[k] = stack(Vec3::Zero(), rhoA * g_vec);
  }
}

void RodParameters::add_straight_tendon(const Vec3& offset,
                                        int termination_node) {
  TendonRouting t;
  t.offset.assign(node_count, offset);
  t.offset_derivative.assign(node_count, Vec3::Zero());
  t.termination_node =
      termination_node < 0 ? node_count - 1 : termination_node;
  tendons.push_back(std::move(t));
}

void RodParameters::finalize_tendons() {
  double h = ds();
  for (auto& t : tendons) {
    if (t.termination_node < 0) t.termination_node = node_count - 1;
    if (!t.offset_derivative.empty()) continue;
    t.offset_derivative.resize(node_count);
    for (int k = 0; k < node_count; ++k) {
      int lo = std::max(0, k - 1);
      int hi = std::min(node_count - 1, k + 1);
      t.offset_derivative[k] = (t.offset[hi] - t.offset[lo]) / ((hi - lo) * h);
    }
  }
}

void RodParameters::validate() const {
  if (node_count < 2) throw std::invalid_argument("node_count must be >= 2");
  if (length <= 0) throw std::invalid_argument("length must be positive");
  auto check_size = [&](size_t n, const char* name) {
    if (n != static_cast<size_t>(node_count))
      throw std::invalid_argument(std::string(name) + " has wrong length");
  };
  check_size(inertia.size(), "inertia");
  check_size(stiffness.size(), "stiffness");
  check_size(reference_strain.size(), "reference_strain");
  check_size(gravity_wrench.size(), "gravity_wrench");
  for (int k = 0; k < node_count; ++k) {
    Eigen::SelfAdjointEigenSolver<Mat6> em(inertia[k]);
    Eigen::SelfAdjointEigenSolver<Mat6> ek(stiffness[k]);
    if (em.eigenvalues().minCoeff() <= 0)
      throw std::invalid_argument("inertia matrix is not SPD");
    if (ek.eigenvalues().minCoeff() <= 0)
      throw std::invalid_argument("stiffness matrix is not SPD");
    if (linear(reference_strain[k]).norm() <= 0)
      throw std::invalid_argument("reference strain has no tangent");
  }
  for (const auto& t : tendons) {
    check_size(t.offset.size(), "tendon offset");
    check_size(t.offset_derivative.size(), "tendon offset_derivative");
    if (t.termination_node < 0 || t.termination_node >= node_count)
      throw std::invalid_argument("tendon termination node out of range");
  }
}

std::pair<Mat6, Mat6> build_section_matrices(double radius, double density,
                                             double youngs, double shear) {
  if (radius <= 0 || density <= 0 || youngs <= 0 || shear <= 0)
    throw std::invalid_argument("section properties must be positive");
  double A = M_PI * radius * radius;
  double I = M_PI * std::pow(radius, 4) / 4.0;

  Mat6 M = Mat6::Zero();
  M.topLeftCorner<3, 3>() = Vec3(1, 1, 2).asDiagonal() * (density * I);
  M.bottomRightCorner<3, 3>() = Mat3::Identity() * (density * A);

  Mat6 K = Mat6::Zero();
  K.topLeftCorner<3, 3>() = Vec3(youngs, youngs, 2 * shear).asDiagonal() * I;
  K.bottomRightCorner<3, 3>() = Vec3(shear, shear, youngs).asDiagonal() * A;
  return {M, K};
}

Wrench elastic_wrench(const RodParameters& rod, const Twist& xi, int node) {
  return rod.stiffness[node] * (xi - rod.reference_strain[node]);
}

Wrench actuation_wrench(const RodParameters& rod,
                        const std::vector<double>& tensions, int node) {
  Wrench w = Wrench::Zero();
  for (size_t i = 0; i < rod.tendons.size(); ++i) {
    double tau = i < tensions.size() ? tensions[i] : 0.0;
    if (tau < 0) throw std::invalid_argument("tendon tension must be >= 0");
    const auto& tdn = rod.tendons[i];
    if (node > tdn.termination_node || tau == 0.0) continue;
    const Vec3 d = tdn.offset[node];
    const Vec3 u_o = angular(rod.reference_strain[node]);
    const Vec3 q_o = linear(rod.reference_strain[node]);
    Vec3 T = q_o + u_o.cross(d) + tdn.offset_derivative[node];
    double Tn = T.norm();
    if (Tn < 1e-12) continue;
    w += (tau / Tn) * stack(d.cross(T), T);
  }
  return w;
}

Wrench external_wrench(const RodParameters& rod, const Pose& g, int node) {
  return Ad_inverse(g) * rod.gravity_wrench[node];
}

double total_energy(const RodParameters& rod, const RodState& state) {
  double h = rod.ds();
  double e = 0.0;
  for (int k = 0; k < rod.node_count; ++k) {
    Twist dxi = state.strain[k] - rod.reference_strain[k];
    double integrand = dxi.dot(rod.stiffness[k] * dxi) +
                       state.velocity[k].dot(rod.inertia[k] * state.velocity[k]);
    double wgt = (k == 0 || k == rod.node_count - 1) ? 0.5 : 1.0;
    e += wgt * integrand;
  }
  return 0.5 * e * h;
}

std::vector<Vec3> kirchhoff_linear_velocity(
    const RodParameters& rod, const std::vector<Mat3>& rotation,
    const std::vector<Vec3>& angular_velocity,
    const Vec3& base_linear_velocity) {
  const int n = rod.node_count;
  double h = rod.ds();
  std::vector<Vec3> v(n);
  // running trapezoid of R w^ q_o
  Vec3 acc = rotation[0] * base_linear_velocity;
  Vec3 prev = rotation[0] * angular_velocity[0].cross(linear(rod.reference_strain[0]));
  v[0] = base_linear_velocity;
  for (int k = 1; k < n; ++k) {
    Vec3 cur = rotation[k] * angular_velocity[k].cross(linear(rod.reference_strain[k]));
    acc += 0.5 * h * (prev + cur);
    prev = cur;
    v[k] = rotation[k].transpose() * acc;
  }
  return v;
}

std::vector<double> planar_angle_from_positions(
    const std::vector<Eigen::Vector2d>& position_derivative) {
  std::vector<double> theta(position_derivative.size());
  double prev = 0.0;
  for (size_t k = 0; k < position_derivative.size(); ++k) {
    const auto& ps = position_derivative[k];
    if (ps.norm() <= 1e-9)
      throw std::domain_error("planar_angle_from_positions: degenerate tangent");
    // p_s = Rot(theta) * (0,1) = (-sin, cos)
    double th = std::atan2(-ps.x(), ps.y());
    if (k > 0) {
      // unwrap against the previous node
      while (th - prev > M_PI) th -= 2 * M_PI;
      while (th - prev < -M_PI) th += 2 * M_PI;
    }
    theta[k] = th;
    prev = th;
  }
  return theta;
}

}  // namespace rodest
