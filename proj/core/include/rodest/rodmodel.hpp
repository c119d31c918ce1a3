#pragma once

#include <vector>

#include "rodest/liegroup.hpp"

namespace rodest {

/// Routing of a single tendon through the cross-sections.
/// offset[k] is the tendon's intersection point with the cross-section at
/// node k, in the body frame. Tendons contribute zero wrench past their
/// termination node (where they are attached).
struct TendonRouting {
  std::vector<Vec3> offset;             // d(s), per node
  std::vector<Vec3> offset_derivative;  // d'(s), per node
  int termination_node = -1;            // -1 means the last node
};

/// Geometry, inertia, stiffness, reference strain and loading of the rod,
/// sampled on a uniform node grid over [0, L].
struct RodParameters {
  double length = 1.0;  // m
  int node_count = 2;
  std::vector<Mat6> inertia;           // M(s), SPD per node
  std::vector<Mat6> stiffness;         // K(s), SPD per node
  std::vector<Twist> reference_strain; // xi_o(s), default e6
  std::vector<Wrench> gravity_wrench;  // F_G(s), global frame, per unit length
  std::vector<TendonRouting> tendons;

  double ds() const { return length / (node_count - 1); }

  // Uniform rod with constant M, K, straight reference, no gravity.
  static RodParameters uniform(double length, int node_count, const Mat6& M,
                               const Mat6& K);

  // Sets gravity_wrench to [0; rhoA * g_vec] at every node, where rhoA is
  // taken from the linear inertia block.
  void set_gravity(const Vec3& g_vec);

  // Adds a tendon with constant body-frame offset, terminating at
  // termination_node (-1 = tip). d' is zero.
  void add_straight_tendon(const Vec3& offset, int termination_node = -1);

  // Fills missing offset derivatives by central finite differences.
  void finalize_tendons();

  // Throws std::invalid_argument on violated invariants (non-SPD M or K,
  // degenerate reference tangent, inconsistent array lengths).
  void validate() const;
};

/// Per-node state fields at one time instant.
struct RodState {
  double t = 0.0;
  std::vector<Pose> pose;
  std::vector<Twist> strain;
  std::vector<Twist> velocity;
  std::vector<Wrench> wrench;  // total internal wrench

  int nodes() const { return static_cast<int>(pose.size()); }
};

// Section matrices of a solid circular rod: M = diag(M_a, M_l),
// K = diag(K_a, K_l) with M_a = diag(1,1,2) rho pi r^4/4, M_l = rho pi r^2 I,
// K_a = diag(E,E,2G) pi r^4/4, K_l = diag(G,G,E) pi r^2.
// Throws std::invalid_argument for non-positive inputs.
std::pair<Mat6, Mat6> build_section_matrices(double radius, double density,
                                             double youngs, double shear);

// Hooke's law: K(node) * (xi - xi_o(node)).
Wrench elastic_wrench(const RodParameters& rod, const Twist& xi, int node);

// Distributed tendon wrench at a node. Tensions must be non-negative.
Wrench actuation_wrench(const RodParameters& rod,
                        const std::vector<double>& tensions, int node);

// Gravity wrench in the body frame: Ad_g^{-1} F_G(node).
Wrench external_wrench(const RodParameters& rod, const Pose& g, int node);

// Elastic + kinetic energy, trapezoidal quadrature on the node grid.
double total_energy(const RodParameters& rod, const RodState& state);

// Kirchhoff-case reconstruction of the linear velocity field from the
// rotation and angular-velocity fields:
//   v(s) = R^T [ R(0) v(0) + int_0^s R w^ q_o ds ]
std::vector<Vec3> kirchhoff_linear_velocity(const RodParameters& rod,
                                            const std::vector<Mat3>& rotation,
                                            const std::vector<Vec3>& angular_velocity,
                                            const Vec3& base_linear_velocity);

// Planar angle field from the position-derivative field, with reference
// linear strain (0, 1). Continuous (unwrapped) along s. Throws
// std::domain_error when a tangent is shorter than 1e-9.
std::vector<double> planar_angle_from_positions(
    const std::vector<Eigen::Vector2d>& position_derivative);

}  // namespace rodest
