#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "rodest/measurement.hpp"

using namespace rodest;

namespace {

MeasurementStream two_sample_stream() {
  MeasurementStream s;
  s.timestamps = {0.0, 1.0};
  s.base_wrench = {Wrench::Zero(), Wrench::Ones()};
  s.tip_pose = {Pose{},
                Pose{exp_so3(Vec3(0, 0, M_PI / 2)), Vec3(0, 0, 2)}};
  s.tip_twist = {Twist::Zero(), 2.0 * Twist::Ones()};
  return s;
}

struct TempFile {
  std::string path;
  explicit TempFile(const char* name) : path(std::string("/tmp/") + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("interpolation midpoint of a pure translation") {
  MeasurementStream s;
  s.timestamps = {0.0, 1.0};
  s.tip_pose = {Pose{}, Pose{Mat3::Identity(), Vec3(0, 0, 2)}};
  auto m = s.interpolate(0.5);
  REQUIRE(m.tip_pose.has_value());
  CHECK((m.tip_pose->p - Vec3(0, 0, 1)).norm() < 1e-12);
  CHECK((m.tip_pose->R - Mat3::Identity()).norm() < 1e-12);
}

TEST_CASE("interpolation midpoint of a 90 degree z rotation is 45 degrees") {
  MeasurementStream s;
  s.timestamps = {0.0, 1.0};
  s.tip_pose = {Pose{}, Pose{exp_so3(Vec3(0, 0, M_PI / 2)), Vec3::Zero()}};
  auto m = s.interpolate(0.5);
  CHECK((m.tip_pose->R - exp_so3(Vec3(0, 0, M_PI / 4))).norm() < 1e-12);
}

TEST_CASE("interpolation is linear per channel") {
  MeasurementStream s = two_sample_stream();
  auto m = s.interpolate(0.25);
  CHECK((*m.base_wrench - 0.25 * Wrench::Ones()).norm() < 1e-12);
  CHECK((*m.tip_twist - 0.5 * Twist::Ones()).norm() < 1e-12);
  // exact endpoints
  CHECK((*s.interpolate(1.0).base_wrench - Wrench::Ones()).norm() < 1e-12);
}

TEST_CASE("interpolation outside the span throws") {
  MeasurementStream s = two_sample_stream();
  CHECK_THROWS_AS(s.interpolate(-0.1), std::out_of_range);
  CHECK_THROWS_AS(s.interpolate(1.1), std::out_of_range);
}

TEST_CASE("validation rejects broken streams") {
  MeasurementStream s = two_sample_stream();
  CHECK_NOTHROW(s.validate());
  s.timestamps = {0.0, 0.0};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = two_sample_stream();
  s.base_wrench.pop_back();
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("CSV roundtrip with all channels") {
  MeasurementStream s = two_sample_stream();
  TempFile f("rodest_stream_full.csv");
  save_measurements_csv(s, f.path);
  MeasurementStream r = load_measurements_csv(f.path);
  REQUIRE(r.timestamps.size() == 2);
  for (size_t i = 0; i < 2; ++i) {
    CHECK((r.base_wrench[i] - s.base_wrench[i]).norm() < 1e-12);
    CHECK((r.tip_twist[i] - s.tip_twist[i]).norm() < 1e-12);
    CHECK((r.tip_pose[i].R - s.tip_pose[i].R).norm() < 1e-12);
    CHECK((r.tip_pose[i].p - s.tip_pose[i].p).norm() < 1e-12);
  }
}

TEST_CASE("CSV roundtrip with absent channels keeps them absent") {
  MeasurementStream s;
  s.timestamps = {0.0, 0.5, 1.0};
  s.base_wrench.assign(3, Wrench::Ones());
  TempFile f("rodest_stream_partial.csv");
  save_measurements_csv(s, f.path);

  // absent channels appear as empty cells
  std::ifstream in(f.path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(row.find(",,") != std::string::npos);

  MeasurementStream r = load_measurements_csv(f.path);
  CHECK(r.has_base_wrench());
  CHECK_FALSE(r.has_tip_pose());
  CHECK_FALSE(r.has_tip_twist());
  CHECK(r.timestamps.size() == 3);
}

TEST_CASE("CSV load rejects non-unit quaternions") {
  TempFile f("rodest_stream_badq.csv");
  std::ofstream out(f.path);
  out << "t,m_x,m_y,m_z,n_x,n_y,n_z,qw,qx,qy,qz,px,py,pz,"
         "w_x,w_y,w_z,v_x,v_y,v_z\n";
  out << "0,,,,,,,0.9,0,0,0,0,0,0,,,,,,\n";
  out.close();
  CHECK_THROWS_AS(load_measurements_csv(f.path), std::invalid_argument);
}

TEST_CASE("CSV load renormalizes slightly off-unit quaternions") {
  TempFile f("rodest_stream_nearq.csv");
  std::ofstream out(f.path);
  out << "t,m_x,m_y,m_z,n_x,n_y,n_z,qw,qx,qy,qz,px,py,pz,"
         "w_x,w_y,w_z,v_x,v_y,v_z\n";
  out << "0,,,,,," << "," << 1.0 + 5e-7 << ",0,0,0,1,2,3,,,,,,\n";
  out.close();
  MeasurementStream r = load_measurements_csv(f.path);
  CHECK(r.tip_pose[0].orthonormality_error() < 1e-12);
  CHECK((r.tip_pose[0].p - Vec3(1, 2, 3)).norm() < 1e-12);
}
