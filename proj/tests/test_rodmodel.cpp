#include <doctest.h>

#include <cmath>

#include "rodest/rodmodel.hpp"
#include "rodest/shooting.hpp"

using namespace rodest;

namespace {
// spring-steel rod section used across the suite (effective density includes
// the attached disks)
constexpr double kRadius = 0.8e-3;
constexpr double kDensity = 4.48e4;
constexpr double kYoungs = 200e9;
constexpr double kShear = 76.92e9;
}  // namespace

TEST_CASE("section matrices match the closed-form expressions") {
  auto [M, K] = build_section_matrices(kRadius, kDensity, kYoungs, kShear);
  const double I2 = M_PI * std::pow(kRadius, 4) / 4.0;  // second area moment
  const double A = M_PI * kRadius * kRadius;

  CHECK(M(0, 0) == doctest::Approx(kDensity * I2).epsilon(1e-12));
  CHECK(M(1, 1) == doctest::Approx(kDensity * I2).epsilon(1e-12));
  CHECK(M(2, 2) == doctest::Approx(2.0 * kDensity * I2).epsilon(1e-12));
  for (int i = 3; i < 6; ++i)
    CHECK(M(i, i) == doctest::Approx(kDensity * A).epsilon(1e-12));

  CHECK(K(0, 0) == doctest::Approx(kYoungs * I2).epsilon(1e-12));
  CHECK(K(1, 1) == doctest::Approx(kYoungs * I2).epsilon(1e-12));
  CHECK(K(2, 2) == doctest::Approx(2.0 * kShear * I2).epsilon(1e-12));
  CHECK(K(3, 3) == doctest::Approx(kShear * A).epsilon(1e-12));
  CHECK(K(4, 4) == doctest::Approx(kShear * A).epsilon(1e-12));
  CHECK(K(5, 5) == doctest::Approx(kYoungs * A).epsilon(1e-12));

  // off-diagonals vanish
  CHECK((M - Mat6(M.diagonal().asDiagonal())).norm() == 0.0);
  CHECK((K - Mat6(K.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("section matrices agree with published reference values") {
  // the torsion and shear entries of the reference table are rounded a bit
  // loosely (~2.5% off their own formulas), hence the wide tolerance
  auto [M, K] = build_section_matrices(kRadius, kDensity, kYoungs, kShear);
  CHECK(M(0, 0) == doctest::Approx(1.44e-8).epsilon(0.01));
  CHECK(M(2, 2) == doctest::Approx(2.88e-8).epsilon(0.01));
  CHECK(M(3, 3) == doctest::Approx(9.00e-2).epsilon(0.01));
  CHECK(K(0, 0) == doctest::Approx(6.43e-2).epsilon(0.01));
  CHECK(K(2, 2) == doctest::Approx(4.84e-2).epsilon(0.03));
  CHECK(K(3, 3) == doctest::Approx(1.51e5).epsilon(0.03));
  CHECK(K(5, 5) == doctest::Approx(4.02e5).epsilon(0.01));
}

TEST_CASE("section matrices reject non-positive inputs") {
  CHECK_THROWS_AS(build_section_matrices(0.0, kDensity, kYoungs, kShear),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_section_matrices(kRadius, -1.0, kYoungs, kShear),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_section_matrices(kRadius, kDensity, 0.0, kShear),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_section_matrices(kRadius, kDensity, kYoungs, -2.0),
                  std::invalid_argument);
}

TEST_CASE("elastic wrench is Hooke's law about the reference strain") {
  RodParameters rod =
      RodParameters::uniform(1.0, 5, Mat6::Identity(), 2.0 * Mat6::Identity());
  Twist xi = rod.reference_strain[0];
  CHECK(elastic_wrench(rod, xi, 0).norm() == 0.0);
  xi(1) += 0.3;
  Wrench w = elastic_wrench(rod, xi, 2);
  CHECK(w(1) == doctest::Approx(0.6));
  w(1) = 0.0;
  CHECK(w.norm() == 0.0);
}

TEST_CASE("straight tendon wrench") {
  RodParameters rod =
      RodParameters::uniform(1.0, 5, Mat6::Identity(), Mat6::Identity());
  const double offset = 0.02, tau = 5.0;
  rod.add_straight_tendon(Vec3(offset, 0, 0));
  rod.finalize_tendons();

  // straight rod, constant offset: T = q_o = e3, so the force is tau e3 and
  // the moment is d x T = (offset,0,0) x (0,0,tau) = (0, -offset tau, 0)
  Wrench w = actuation_wrench(rod, {tau}, 1);
  CHECK(w(0) == doctest::Approx(0.0));
  CHECK(w(1) == doctest::Approx(-offset * tau));
  CHECK(w(2) == doctest::Approx(0.0));
  CHECK(w(3) == doctest::Approx(0.0));
  CHECK(w(4) == doctest::Approx(0.0));
  CHECK(w(5) == doctest::Approx(tau));
}

TEST_CASE("tendon wrench vanishes past the termination node") {
  RodParameters rod =
      RodParameters::uniform(1.0, 9, Mat6::Identity(), Mat6::Identity());
  rod.add_straight_tendon(Vec3(0.01, 0, 0), 4);  // mid-rod attachment
  rod.finalize_tendons();
  CHECK(actuation_wrench(rod, {3.0}, 3).norm() > 0.0);
  CHECK(actuation_wrench(rod, {3.0}, 5).norm() == 0.0);
  CHECK(actuation_wrench(rod, {3.0}, 8).norm() == 0.0);
}

TEST_CASE("negative tendon tension is rejected") {
  RodParameters rod =
      RodParameters::uniform(1.0, 5, Mat6::Identity(), Mat6::Identity());
  rod.add_straight_tendon(Vec3(0.01, 0, 0));
  rod.finalize_tendons();
  CHECK_THROWS_AS(actuation_wrench(rod, {-1.0}, 1), std::invalid_argument);
}

TEST_CASE("gravity wrench transforms into the body frame") {
  RodParameters rod =
      RodParameters::uniform(1.0, 3, Mat6::Identity(), Mat6::Identity());
  rod.set_gravity(Vec3(0, 0, -9.81));
  // identity pose: body frame equals world frame
  Wrench w = external_wrench(rod, Pose{}, 0);
  CHECK(w(5) == doctest::Approx(-9.81));
  // rotate the body 90 degrees about x: world -z becomes body -y
  Pose g(exp_so3(Vec3(M_PI / 2, 0, 0)), Vec3::Zero());
  Wrench wr = external_wrench(rod, g, 0);
  CHECK(wr(4) == doctest::Approx(-9.81));
  CHECK(std::abs(wr(5)) < 1e-12);
}

TEST_CASE("total energy is positive definite about the reference state") {
  RodParameters rod =
      RodParameters::uniform(0.5, 11, Mat6::Identity(), 3.0 * Mat6::Identity());
  RodState rest = straight_state(rod, Pose{});
  CHECK(total_energy(rod, rest) == doctest::Approx(0.0).epsilon(1e-12));

  RodState bent = rest;
  for (auto& xi : bent.strain) xi(0) += 0.1;
  CHECK(total_energy(rod, bent) > 0.0);

  RodState moving = rest;
  for (auto& eta : moving.velocity) eta(3) = 0.2;
  // 1/2 * 1 * 0.2^2 * L = 0.01
  CHECK(total_energy(rod, moving) == doctest::Approx(0.01));
}

TEST_CASE("kirchhoff linear velocity of a rigid rotation field") {
  RodParameters rod =
      RodParameters::uniform(1.0, 21, Mat6::Identity(), Mat6::Identity());
  // rod spinning rigidly about the base x axis with rate 2 rad/s:
  // v(s) = R^T (w x p(s)) for p(s) = s e3 in the world frame
  std::vector<Mat3> R(21, Mat3::Identity());
  std::vector<Vec3> w(21, Vec3(2.0, 0, 0));
  std::vector<Vec3> v = kirchhoff_linear_velocity(rod, R, w, Vec3::Zero());
  for (int k = 0; k < 21; ++k) {
    double s = k * rod.ds();
    Vec3 expected = Vec3(2.0, 0, 0).cross(Vec3(0, 0, s));
    CHECK((v[k] - expected).norm() < 1e-12);
  }
}

TEST_CASE("kirchhoff velocity with zero angular motion is uniform") {
  RodParameters rod =
      RodParameters::uniform(1.0, 11, Mat6::Identity(), Mat6::Identity());
  std::vector<Mat3> R(11, Mat3::Identity());
  std::vector<Vec3> w(11, Vec3::Zero());
  Vec3 v0(0.1, -0.2, 0.3);
  for (const Vec3& v : kirchhoff_linear_velocity(rod, R, w, v0))
    CHECK((v - v0).norm() < 1e-14);
}

TEST_CASE("planar angle recovery") {
  // reference tangent (0,1): theta = atan2(-x', y')
  std::vector<Eigen::Vector2d> tangents = {
      {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
  std::vector<double> theta = planar_angle_from_positions(tangents);
  CHECK(theta[0] == doctest::Approx(0.0));
  CHECK(theta[1] == doctest::Approx(M_PI / 2));
  // unwrapping keeps the field continuous past pi
  CHECK(theta[2] == doctest::Approx(M_PI));
  CHECK(theta[3] == doctest::Approx(3 * M_PI / 2));
  CHECK(theta[4] == doctest::Approx(2 * M_PI));
}

TEST_CASE("planar angle roundtrip is exact") {
  std::vector<double> truth;
  std::vector<Eigen::Vector2d> tangents;
  for (int k = 0; k <= 100; ++k) {
    double th = -1.0 + 8.0 * k / 100.0;  // sweeps several revolutions
    truth.push_back(th);
    tangents.emplace_back(-std::sin(th), std::cos(th));
  }
  std::vector<double> rec = planar_angle_from_positions(tangents);
  // recovered field may differ by a global 2 pi multiple fixed at s=0
  double shift = rec[0] - truth[0];
  for (size_t k = 0; k < truth.size(); ++k)
    CHECK(std::abs(rec[k] - shift - truth[k]) < 1e-12);
}

TEST_CASE("planar angle rejects degenerate tangents") {
  std::vector<Eigen::Vector2d> tangents = {{0.0, 1.0}, {1e-12, 0.0}};
  CHECK_THROWS_AS(planar_angle_from_positions(tangents), std::domain_error);
}

TEST_CASE("rod validation catches broken parameters") {
  RodParameters rod =
      RodParameters::uniform(1.0, 5, Mat6::Identity(), Mat6::Identity());
  CHECK_NOTHROW(rod.validate());

  RodParameters bad = rod;
  bad.stiffness[2] = -Mat6::Identity();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = rod;
  bad.inertia.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = rod;
  bad.reference_strain[1].tail<3>().setZero();  // degenerate tangent
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
