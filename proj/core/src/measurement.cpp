#include "rodest/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Geometry>

namespace rodest {

void MeasurementStream::validate() const {
  for (size_t i = 1; i < timestamps.size(); ++i)
    if (timestamps[i] <= timestamps[i - 1])
      throw std::invalid_argument("timestamps must be strictly increasing");
  auto check = [&](size_t n, const char* name) {
    if (n != 0 && n != timestamps.size())
      throw std::invalid_argument(std::string(name) +
                                  " channel length mismatch");
  };
  check(base_wrench.size(), "base_wrench");
  check(tip_pose.size(), "tip_pose");
  check(tip_twist.size(), "tip_twist");
}

MeasurementStream::Sample MeasurementStream::interpolate(double t) const {
  if (timestamps.empty() || t < timestamps.front() - 1e-12 ||
      t > timestamps.back() + 1e-12)
    throw std::out_of_range("measurement time outside stream range");
  t = std::clamp(t, timestamps.front(), timestamps.back());

  auto it = std::lower_bound(timestamps.begin(), timestamps.end(), t);
  size_t hi = std::min<size_t>(it - timestamps.begin(), timestamps.size() - 1);
  size_t lo = hi == 0 ? 0 : hi - 1;
  double alpha = 0.0;
  if (hi != lo)
    alpha = (t - timestamps[lo]) / (timestamps[hi] - timestamps[lo]);
  alpha = std::clamp(alpha, 0.0, 1.0);

  Sample s;
  if (has_base_wrench())
    s.base_wrench = (1 - alpha) * base_wrench[lo] + alpha * base_wrench[hi];
  if (has_tip_twist())
    s.tip_twist = (1 - alpha) * tip_twist[lo] + alpha * tip_twist[hi];
  if (has_tip_pose()) {
    const Pose& a = tip_pose[lo];
    const Pose& b = tip_pose[hi];
    Twist rel = log_se3(a.inverse() * b);
    s.tip_pose = a * exp_se3(alpha * rel);
  }
  return s;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim spaces
    size_t b = cell.find_first_not_of(" \t\r");
    size_t e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  // trailing empty cell
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

MeasurementStream load_measurements_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty measurement file " + path);

  MeasurementStream stream;
  bool any_wrench = false, any_pose = false, any_twist = false;
  std::vector<std::array<std::string, 20>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    cells.resize(20);
    std::array<std::string, 20> row;
    std::copy_n(cells.begin(), 20, row.begin());
    rows.push_back(row);
    if (!row[1].empty()) any_wrench = true;
    if (!row[7].empty()) any_pose = true;
    if (!row[14].empty()) any_twist = true;
  }

  for (const auto& row : rows) {
    stream.timestamps.push_back(std::stod(row[0]));
    auto num = [&](int i) { return std::stod(row[i]); };
    if (any_wrench) {
      Wrench w;
      w << num(1), num(2), num(3), num(4), num(5), num(6);
      stream.base_wrench.push_back(w);
    }
    if (any_pose) {
      Eigen::Quaterniond q(num(7), num(8), num(9), num(10));
      if (std::abs(q.norm() - 1.0) > 1e-6)
        throw std::invalid_argument("quaternion norm deviates beyond 1e-6");
      q.normalize();
      stream.tip_pose.push_back(
          Pose{q.toRotationMatrix(), Vec3(num(11), num(12), num(13))});
    }
    if (any_twist) {
      Twist tw;
      tw << num(14), num(15), num(16), num(17), num(18), num(19);
      stream.tip_twist.push_back(tw);
    }
  }
  stream.validate();
  return stream;
}

void save_measurements_csv(const MeasurementStream& stream,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "t,m_x,m_y,m_z,n_x,n_y,n_z,qw,qx,qy,qz,px,py,pz,"
         "w_x,w_y,w_z,v_x,v_y,v_z\n";
  out.precision(17);
  for (size_t i = 0; i < stream.timestamps.size(); ++i) {
    out << stream.timestamps[i];
    if (stream.has_base_wrench()) {
      const Wrench& w = stream.base_wrench[i];
      for (int j = 0; j < 6; ++j) out << ',' << w(j);
    } else {
      out << ",,,,,,";
    }
    if (stream.has_tip_pose()) {
      const Pose& g = stream.tip_pose[i];
      Eigen::Quaterniond q(g.R);
      out << ',' << q.w() << ',' << q.x() << ',' << q.y() << ',' << q.z()
          << ',' << g.p.x() << ',' << g.p.y() << ',' << g.p.z();
    } else {
      out << ",,,,,,,";
    }
    if (stream.has_tip_twist()) {
      const Twist& tw = stream.tip_twist[i];
      for (int j = 0; j < 6; ++j) out << ',' << tw(j);
    } else {
      out << ",,,,,,";
    }
    out << '\n';
  }
}

}  // namespace rodest
