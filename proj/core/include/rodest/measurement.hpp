#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rodest/liegroup.hpp"

namespace rodest {

/// Time series of boundary measurements. Channels are optional; present
/// channels have one sample per timestamp.
struct MeasurementStream {
  std::vector<double> timestamps;
  std::vector<Wrench> base_wrench;  // Lambda_bar_0(t)
  std::vector<Pose> tip_pose;       // g_bar_1(t)
  std::vector<Twist> tip_twist;     // eta_bar_1(t)

  bool has_base_wrench() const { return !base_wrench.empty(); }
  bool has_tip_pose() const { return !tip_pose.empty(); }
  bool has_tip_twist() const { return !tip_twist.empty(); }

  struct Sample {
    std::optional<Wrench> base_wrench;
    std::optional<Pose> tip_pose;
    std::optional<Twist> tip_twist;
  };

  // Linear interpolation per channel; poses interpolated along the SE(3)
  // geodesic. Throws std::out_of_range outside the covered interval.
  Sample interpolate(double t) const;

  // Throws std::invalid_argument on non-increasing timestamps or
  // length-mismatched channels.
  void validate() const;
};

// CSV round trip. Columns:
//   t, m_x, m_y, m_z, n_x, n_y, n_z, qw, qx, qy, qz, px, py, pz,
//   w_x, w_y, w_z, v_x, v_y, v_z
// Absent channels are written as empty cells. Quaternions must be unit norm
// within 1e-6 and are renormalized on load.
MeasurementStream load_measurements_csv(const std::string& path);
void save_measurements_csv(const MeasurementStream& stream,
                           const std::string& path);

}  // namespace rodest
