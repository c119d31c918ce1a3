#include "rodest/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <random>

#include <json.hpp>

namespace rodest {

using nlohmann::json;

std::string to_string(ObserverVariant v) {
  switch (v) {
    case ObserverVariant::Prediction: return "prediction";
    case ObserverVariant::Base: return "base";
    case ObserverVariant::TipD: return "tipD";
    case ObserverVariant::TipPD: return "tipPD";
    case ObserverVariant::Combined: return "combined";
  }
  return "?";
}

ObserverVariant variant_from_string(const std::string& s) {
  if (s == "prediction") return ObserverVariant::Prediction;
  if (s == "base") return ObserverVariant::Base;
  if (s == "tipD" || s == "tip-d") return ObserverVariant::TipD;
  if (s == "tipPD" || s == "tip-pd") return ObserverVariant::TipPD;
  if (s == "combined") return ObserverVariant::Combined;
  throw ConfigError("unknown observer variant: " + s);
}

double LinearTable::operator()(double t) const {
  if (times.empty()) return 0.0;
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  size_t hi = it - times.begin();
  size_t lo = hi - 1;
  double a = (t - times[lo]) / (times[hi] - times[lo]);
  return (1 - a) * values[lo] + a * values[hi];
}

Wrench WrenchTable::operator()(double t) const {
  if (times.empty()) return Wrench::Zero();
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  size_t hi = it - times.begin();
  size_t lo = hi - 1;
  double a = (t - times[lo]) / (times[hi] - times[lo]);
  return (1 - a) * values[lo] + a * values[hi];
}

void Scenario::validate() const {
  if (duration <= 0) throw ConfigError("duration must be positive");
  rod.validate();
  if (!tensions.empty() && tensions.size() != rod.tendons.size())
    throw ConfigError("one tension table per tendon required");
  for (const auto& table : tensions)
    for (double v : table.values)
      if (v < 0) throw ConfigError("tendon tensions must be non-negative");
  if (!tension_known.empty() && tension_known.size() != rod.tendons.size())
    throw ConfigError("tension_known length mismatch");
}

namespace {

std::vector<double> truth_tensions(const Scenario& sc, double t) {
  std::vector<double> tau(sc.tensions.size());
  for (size_t i = 0; i < sc.tensions.size(); ++i) tau[i] = sc.tensions[i](t);
  return tau;
}

std::vector<double> observer_tensions(const Scenario& sc, double t) {
  std::vector<double> tau(sc.tensions.size(), 0.0);
  for (size_t i = 0; i < sc.tensions.size(); ++i) {
    bool known = sc.tension_known.empty() || sc.tension_known[i];
    if (known) tau[i] = sc.tensions[i](t);
  }
  return tau;
}

Wrench truth_tip_wrench(const Scenario& sc, double t) {
  switch (sc.kind) {
    case ScenarioKind::FreeOscillationRelease:
    case ScenarioKind::StaticEquilibrium:
      return Wrench::Zero();
    case ScenarioKind::TendonDriven:
    case ScenarioKind::UnknownInputReplay:
      return sc.withheld_tip_wrench(t);
  }
  return Wrench::Zero();
}

}  // namespace

GroundTruth synthesize_ground_truth(const Scenario& scenario,
                                    std::uint64_t seed) {
  Scenario sc = scenario;
  sc.rod.finalize_tendons();
  sc.validate();

  BoundaryInputs boundary;
  boundary.base_pose = [sc](double) { return sc.base_pose; };
  boundary.base_twist = [](double) { return Twist::Zero(); };
  boundary.tip_wrench = [sc](double t) { return truth_tip_wrench(sc, t); };
  boundary.tendon_tensions = [sc](double t) { return truth_tensions(sc, t); };

  // Pre-release equilibrium (the holding wrench applies for t < 0 only).
  Wrench hold = sc.kind == ScenarioKind::FreeOscillationRelease
                    ? sc.hold_tip_wrench
                    : truth_tip_wrench(sc, 0.0);
  RodState initial = solve_static(sc.rod, sc.solver, sc.base_pose, hold,
                                  truth_tensions(sc, 0.0));

  ShootingStepper stepper(sc.rod, sc.solver, boundary);
  stepper.reset(initial);

  GroundTruth truth;
  truth.trajectory.push_back(initial);
  const int steps = static_cast<int>(std::round(sc.duration / sc.solver.dt));
  for (int i = 0; i < steps; ++i) {
    try {
      truth.trajectory.push_back(stepper.step());
    } catch (const NonconvergenceError& e) {
      throw NonconvergenceError(
          "ground truth synthesis failed at t=" +
              std::to_string(stepper.time() + sc.solver.dt) + ": " + e.what(),
          e.residual);
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto noise3 = [&](double std_dev) {
    if (std_dev <= 0) return Vec3(Vec3::Zero());
    return Vec3(Vec3(gauss(rng), gauss(rng), gauss(rng)) * std_dev);
  };
  auto noise6 = [&](double std_dev) {
    Vec6 v = Vec6::Zero();
    if (std_dev > 0)
      for (int i = 0; i < 6; ++i) v(i) = std_dev * gauss(rng);
    return v;
  };

  for (const RodState& state : truth.trajectory) {
    truth.stream.timestamps.push_back(state.t);
    truth.stream.base_wrench.push_back(state.wrench.front() +
                                       noise6(sc.noise.base_wrench_std));
    Pose tip = state.pose.back();
    tip.R = tip.R * exp_so3(noise3(sc.noise.tip_rotation_std));
    tip.p += noise3(sc.noise.tip_position_std);
    truth.stream.tip_pose.push_back(tip);
    truth.stream.tip_twist.push_back(state.velocity.back() +
                                     noise6(sc.noise.tip_twist_std));
  }
  truth.stream.validate();
  return truth;
}

RodParameters observer_rod(const Scenario& scenario) {
  RodParameters rod = scenario.rod;
  rod.finalize_tendons();
  if (scenario.model_mismatch_k_scale != 1.0)
    for (auto& K : rod.stiffness) K *= scenario.model_mismatch_k_scale;
  return rod;
}

ObserverGains build_gains(const Scenario& scenario, ObserverVariant variant,
                          double gamma) {
  RodParameters rod = observer_rod(scenario);
  auto [gamma0, gamma1] = optimal_gains(rod.inertia[0], rod.stiffness[0]);
  ObserverGains g;
  switch (variant) {
    case ObserverVariant::Prediction:
      break;
    case ObserverVariant::Base:
      g.base = gamma * gamma0;
      break;
    case ObserverVariant::TipD:
      g.tip_derivative = gamma * gamma1;
      break;
    case ObserverVariant::TipPD:
      g.tip_derivative = gamma * gamma1;
      g.tip_proportional = scenario.p_to_d_ratio * gamma * gamma1;
      break;
    case ObserverVariant::Combined:
      g.base = gamma * gamma0;
      g.tip_derivative = gamma * gamma1;
      if (scenario.combined_uses_proportional)
        g.tip_proportional = scenario.p_to_d_ratio * gamma * gamma1;
      break;
  }
  return g;
}

RodState initial_observer_state(const Scenario& scenario,
                                const GroundTruth& truth) {
  RodParameters rod = observer_rod(scenario);
  switch (scenario.initial_state.kind) {
    case InitialStateRule::Truth:
      return truth.trajectory.front();
    case InitialStateRule::Straight:
      return straight_state(rod, scenario.base_pose);
    case InitialStateRule::Perturbed: {
      std::mt19937_64 rng(scenario.initial_state.seed);
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      double ax = unit(rng), ay = unit(rng);
      RodState state = straight_state(rod, scenario.base_pose);
      const double L = rod.length, h = rod.ds();
      for (int k = 0; k < rod.node_count; ++k) {
        double s = k * h;
        double bend = scenario.initial_state.magnitude * std::sin(M_PI * s / L);
        state.strain[k](0) += ax * bend;
        state.strain[k](1) += ay * bend;
        state.wrench[k] = elastic_wrench(rod, state.strain[k], k);
      }
      Pose g = scenario.base_pose;
      state.pose[0] = g;
      for (int k = 0; k < rod.node_count - 1; ++k) {
        Twist mid = 0.5 * (state.strain[k] + state.strain[k + 1]);
        g = g * exp_se3(mid, h);
        state.pose[k + 1] = g;
      }
      return state;
    }
  }
  throw ConfigError("bad initial state rule");
}

RunReport run_scenario(const Scenario& scenario, ObserverVariant variant,
                       double gamma, const GroundTruth& truth,
                       const RunOptions& options,
                       ObserverRunResult* result_out) {
  RodParameters rod = observer_rod(scenario);
  ObserverGains gains = build_gains(scenario, variant, gamma);

  if (gains.base_active() && !truth.stream.has_base_wrench())
    throw ConfigError("base observer requires a base-wrench channel");
  if (!gains.tip_derivative.isZero(0.0) && !truth.stream.has_tip_twist())
    throw ConfigError("tip observer requires a tip-twist channel");
  if (!gains.tip_proportional.isZero(0.0) && !truth.stream.has_tip_pose())
    throw ConfigError("tip PD observer requires a tip-pose channel");

  BoundaryInputs boundary;
  Scenario sc = scenario;
  boundary.base_pose = [sc](double) { return sc.base_pose; };
  boundary.base_twist = [](double) { return Twist::Zero(); };
  // Withheld inputs are unknown to the observer: nominal tip wrench is zero.
  boundary.tip_wrench = [](double) { return Wrench::Zero(); };
  boundary.tendon_tensions = [sc](double t) { return observer_tensions(sc, t); };

  RodState initial = initial_observer_state(scenario, truth);
  double initial_tip_error =
      (initial.pose.back().p - truth.trajectory.front().pose.back().p).norm();
  double threshold =
      scenario.settle.kind == SettleRule::RelativeInitialError
          ? scenario.settle.value * initial_tip_error
          : scenario.settle.value * rod.length;

  auto start = std::chrono::steady_clock::now();
  ObserverRunResult run =
      run_observer(rod, scenario.solver, gains, boundary, truth.stream,
                   initial, scenario.duration, &truth.trajectory, threshold);
  auto stop = std::chrono::steady_clock::now();
  double wall = std::chrono::duration<double>(stop - start).count();

  RunReport report;
  report.variant = to_string(variant);
  report.gamma = gamma;
  report.settle_time = run.settle_time;
  report.real_time_factor = scenario.duration / std::max(wall, 1e-12);

  // Steady-state averages over the post-settle window (last half if the
  // run never settles).
  size_t begin = run.errors.size() / 2;
  if (run.settle_time) {
    for (size_t i = 0; i < run.estimates.size(); ++i)
      if (run.estimates[i].t >= *run.settle_time) {
        begin = i;
        break;
      }
  }
  size_t count = 0;
  for (size_t i = begin; i < run.errors.size(); ++i, ++count) {
    report.avg_position_pct += run.errors[i].mean_position / rod.length * 100.0;
    report.avg_rotation_rad += run.errors[i].mean_rotation;
    report.avg_linear_ms += run.errors[i].mean_linear;
    report.avg_angular_rads += run.errors[i].mean_angular;
  }
  if (count > 0) {
    report.avg_position_pct /= count;
    report.avg_rotation_rad /= count;
    report.avg_linear_ms /= count;
    report.avg_angular_rads /= count;
  }

  report.energy.reserve(run.estimates.size());
  for (const auto& state : run.estimates)
    report.energy.push_back(total_energy(rod, state));

  if (!options.states_path.empty()) {
    write_states_csv(options.states_path, run.estimates);
    report.states_path = options.states_path;
  }
  if (result_out) *result_out = std::move(run);
  return report;
}

std::vector<SweepRow> run_sweep(const Scenario& scenario,
                                const SweepConfig& sweep,
                                const GroundTruth& truth) {
  std::vector<std::pair<ObserverVariant, double>> combos;
  for (auto v : sweep.variants)
    for (double g : sweep.gamma) combos.emplace_back(v, g);

  std::vector<std::future<SweepRow>> futures;
  futures.reserve(combos.size());
  for (auto [variant, gamma] : combos) {
    futures.push_back(std::async(std::launch::async, [&, variant, gamma] {
      SweepRow row;
      row.variant = to_string(variant);
      row.gamma = gamma;
      try {
        RunReport rep = run_scenario(scenario, variant, gamma, truth);
        row.settle_time = rep.settle_time;
        row.avg_position_pct = rep.avg_position_pct;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      return row;
    }));
  }
  std::vector<SweepRow> rows;
  rows.reserve(futures.size());
  for (auto& f : futures) rows.push_back(f.get());
  return rows;
}

std::vector<MuSweepRow> mu_sweep(const Mat6& M, const Mat6& K, double L,
                                 const std::vector<double>& gamma_grid,
                                 MuSweepSide side) {
  GainAnalysis a = riemann_setup(M, K);
  std::vector<MuSweepRow> rows;
  rows.reserve(gamma_grid.size());
  int prev_above = -1;
  for (double gamma : gamma_grid) {
    Mat6 g0 = Mat6::Zero(), g1 = Mat6::Zero();
    if (side == MuSweepSide::Base)
      g0 = gamma * Mat6::Identity();
    else
      g1 = gamma * Mat6::Identity();
    auto [rho0, rho1] = reflection_matrices(g0, g1, a);

    // The perfectly absorbing singularity sits where an eigenvalue of
    // Sigma G crosses 1. Counting eigenvalues above 1 (via the congruent
    // symmetric form Sigma^1/2 G Sigma^1/2) brackets every crossing even
    // when several eigenvalues cross together, which a determinant sign
    // test would miss.
    Mat6 G = side == MuSweepSide::Base
                 ? Mat6(a.U * a.K_half_inverse *
                        (g0.fullPivLu().solve(Mat6::Identity())) *
                        a.K_half_inverse * a.U.transpose())
                 : Mat6(a.U * a.K_half_inverse * g1 * a.K_half_inverse *
                        a.U.transpose());
    Vec6 sqrt_sigma = a.sigma.cwiseSqrt();
    Mat6 sym = sqrt_sigma.asDiagonal() * G * sqrt_sigma.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Mat6> es(Mat6(0.5 * (sym + sym.transpose())));
    int above = (es.eigenvalues().array() > 1.0).count();

    MuSweepRow row;
    row.gamma = gamma;
    row.mu = mu_max(rho0, rho1, a.sigma, L);
    row.singular_bracket = prev_above >= 0 && above != prev_above;
    prev_above = above;
    rows.push_back(row);
  }
  return rows;
}

// --- configuration ---

namespace {

Vec6 vec6_from(const json& j) {
  if (!j.is_array() || j.size() != 6) throw ConfigError("expected 6 numbers");
  Vec6 v;
  for (int i = 0; i < 6; ++i) v(i) = j[i].get<double>();
  return v;
}

Vec3 vec3_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("expected 3 numbers");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

RodParameters rod_from_json(const json& j) {
  double length = j.at("length_m").get<double>();
  int nodes = j.at("node_count").get<int>();
  Mat6 M, K;
  if (j.contains("section")) {
    const json& s = j.at("section");
    std::tie(M, K) = build_section_matrices(
        s.at("radius_m").get<double>(), s.at("density_kgm3").get<double>(),
        s.at("youngs_pa").get<double>(), s.at("shear_pa").get<double>());
  } else {
    M = vec6_from(j.at("inertia_diag")).asDiagonal();
    K = vec6_from(j.at("stiffness_diag")).asDiagonal();
  }
  RodParameters rod = RodParameters::uniform(length, nodes, M, K);
  if (j.contains("gravity_mps2")) rod.set_gravity(vec3_from(j.at("gravity_mps2")));
  if (j.contains("tendons")) {
    for (const json& t : j.at("tendons")) {
      rod.add_straight_tendon(vec3_from(t.at("offset_m")),
                              t.value("termination_node", -1));
    }
  }
  return rod;
}

ScenarioKind kind_from_string(const std::string& s) {
  if (s == "free_oscillation_release") return ScenarioKind::FreeOscillationRelease;
  if (s == "tendon_driven") return ScenarioKind::TendonDriven;
  if (s == "unknown_input_replay") return ScenarioKind::UnknownInputReplay;
  if (s == "static_equilibrium") return ScenarioKind::StaticEquilibrium;
  throw ConfigError("unknown scenario kind: " + s);
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  int version = j.value("schema_version", 1);
  if (version != 1)
    throw ConfigError("unsupported schema_version " + std::to_string(version));
  return j;
}

}  // namespace

Scenario scenario_from_json_file(const std::string& path) {
  json root = load_json(path);
  if (!root.contains("scenario")) throw ConfigError("missing 'scenario' block");
  const json& j = root.at("scenario");
  try {
    Scenario sc;
    sc.kind = kind_from_string(j.at("kind").get<std::string>());
    sc.duration = j.at("duration_s").get<double>();
    sc.rod = rod_from_json(j.at("rod"));
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      sc.solver.dt = s.value("dt_s", sc.solver.dt);
      sc.solver.residual_tolerance =
          s.value("residual_tolerance_n", sc.solver.residual_tolerance);
      sc.solver.max_newton_iterations =
          s.value("max_newton_iterations", sc.solver.max_newton_iterations);
      sc.solver.finite_difference_step =
          s.value("finite_difference_step", sc.solver.finite_difference_step);
      sc.solver.spatial_substeps_per_interval =
          s.value("spatial_substeps_per_interval",
                  sc.solver.spatial_substeps_per_interval);
    }
    if (j.contains("hold_tip_wrench"))
      sc.hold_tip_wrench = vec6_from(j.at("hold_tip_wrench"));
    if (j.contains("tensions")) {
      for (const json& t : j.at("tensions")) {
        LinearTable table;
        table.times = t.at("t_s").get<std::vector<double>>();
        table.values = t.at("tau_n").get<std::vector<double>>();
        sc.tensions.push_back(std::move(table));
        sc.tension_known.push_back(t.value("known_to_observer", true));
      }
    }
    if (j.contains("withheld_tip_wrench")) {
      const json& w = j.at("withheld_tip_wrench");
      sc.withheld_tip_wrench.times = w.at("t_s").get<std::vector<double>>();
      for (const json& row : w.at("wrench"))
        sc.withheld_tip_wrench.values.push_back(vec6_from(row));
    }
    if (j.contains("initial_state")) {
      const json& s = j.at("initial_state");
      std::string rule = s.value("rule", "straight");
      if (rule == "truth") sc.initial_state.kind = InitialStateRule::Truth;
      else if (rule == "straight") sc.initial_state.kind = InitialStateRule::Straight;
      else if (rule == "perturbed") sc.initial_state.kind = InitialStateRule::Perturbed;
      else throw ConfigError("unknown initial state rule: " + rule);
      sc.initial_state.seed = s.value("seed", 0);
      sc.initial_state.magnitude = s.value("magnitude", 0.1);
    }
    if (j.contains("noise")) {
      const json& n = j.at("noise");
      sc.noise.base_wrench_std = n.value("base_wrench_std_n", 0.0);
      sc.noise.tip_position_std = n.value("tip_position_std_m", 0.0);
      sc.noise.tip_rotation_std = n.value("tip_rotation_std_rad", 0.0);
      sc.noise.tip_twist_std = n.value("tip_twist_std", 0.0);
    }
    sc.model_mismatch_k_scale = j.value("model_mismatch_k_scale", 1.0);
    if (j.contains("settle")) {
      const json& s = j.at("settle");
      std::string rule = s.value("rule", "relative_initial");
      if (rule == "relative_initial")
        sc.settle.kind = SettleRule::RelativeInitialError;
      else if (rule == "fraction_of_length")
        sc.settle.kind = SettleRule::FractionOfLength;
      else throw ConfigError("unknown settle rule: " + rule);
      sc.settle.value = s.value("value", 0.02);
    }
    sc.p_to_d_ratio = j.value("p_to_d_ratio", 20.0);
    sc.combined_uses_proportional = j.value("combined_uses_proportional", false);
    sc.validate();
    return sc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
}

SweepConfig sweep_from_json_file(const std::string& path) {
  json root = load_json(path);
  SweepConfig sw;
  if (!root.contains("sweep")) throw ConfigError("missing 'sweep' block");
  const json& j = root.at("sweep");
  try {
    sw.gamma = j.at("gamma").get<std::vector<double>>();
    for (const auto& v : j.at("variants"))
      sw.variants.push_back(variant_from_string(v.get<std::string>()));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sweep config error: ") + e.what());
  }
  for (double g : sw.gamma)
    if (g <= 0) throw ConfigError("gamma values must be positive");
  if (!std::is_sorted(sw.gamma.begin(), sw.gamma.end()))
    throw ConfigError("gamma values must be sorted ascending");
  return sw;
}

// --- emission ---

void write_states_csv(const std::string& path,
                      const std::vector<RodState>& states) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "t,node,m_x,m_y,m_z,n_x,n_y,n_z,qw,qx,qy,qz,px,py,pz,"
         "w_x,w_y,w_z,v_x,v_y,v_z,u_x,u_y,u_z,q_x,q_y,q_z\n";
  out.precision(12);
  for (const RodState& state : states) {
    for (int k = 0; k < state.nodes(); ++k) {
      out << state.t << ',' << k;
      for (int i = 0; i < 6; ++i) out << ',' << state.wrench[k](i);
      Eigen::Quaterniond q(state.pose[k].R);
      out << ',' << q.w() << ',' << q.x() << ',' << q.y() << ',' << q.z();
      for (int i = 0; i < 3; ++i) out << ',' << state.pose[k].p(i);
      for (int i = 0; i < 6; ++i) out << ',' << state.velocity[k](i);
      for (int i = 0; i < 6; ++i) out << ',' << state.strain[k](i);
      out << '\n';
    }
  }
}

void write_report_json(const std::string& path, const RunReport& report) {
  json j;
  j["variant"] = report.variant;
  j["gamma"] = report.gamma;
  if (report.settle_time)
    j["settle_time_s"] = *report.settle_time;
  else
    j["settle_time_s"] = nullptr;
  j["avg_position_pct"] = report.avg_position_pct;
  j["avg_rotation_rad"] = report.avg_rotation_rad;
  j["avg_linear_ms"] = report.avg_linear_ms;
  j["avg_angular_rads"] = report.avg_angular_rads;
  j["real_time_factor"] = report.real_time_factor;
  j["energy"] = report.energy;
  j["states_path"] = report.states_path;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << '\n';
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "variant,gamma,settle_time_s,avg_position_pct,error\n";
  out.precision(12);
  for (const auto& r : rows) {
    out << r.variant << ',' << r.gamma << ',';
    if (r.settle_time) out << *r.settle_time;
    out << ',' << r.avg_position_pct << ',' << r.error << '\n';
  }
}

void write_mu_csv(const std::string& path,
                  const std::vector<MuSweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "gamma_scale,mu_max,singular_bracket\n";
  out.precision(12);
  for (const auto& r : rows)
    out << r.gamma << ',' << r.mu << ',' << (r.singular_bracket ? 1 : 0)
        << '\n';
}

// --- canned setups ---

Scenario balanced_release_scenario(int node_count, double dt,
                                   double duration) {
  Scenario sc;
  sc.kind = ScenarioKind::FreeOscillationRelease;
  sc.duration = duration;
  sc.rod = RodParameters::uniform(0.6, node_count, 10.0 * Mat6::Identity(),
                                  1e4 * Mat6::Identity());
  sc.rod.set_gravity(Vec3(0, 0, 9.81));  // hanging along +z
  sc.solver.dt = dt;
  // kN-scale loads: the residual floor of the forward-difference Jacobian
  // sits near 1e-5, so the tolerance is set at ~5e-8 relative instead of
  // the small-load default
  sc.solver.residual_tolerance = 1e-4;
  sc.hold_tip_wrench = stack(Vec3::Zero(), Vec3(2000.0, 0, 0));
  sc.initial_state.kind = InitialStateRule::Straight;
  sc.settle.kind = SettleRule::RelativeInitialError;
  sc.settle.value = 0.02;
  return sc;
}

Scenario steel_rod_scenario(int node_count, double dt, double duration) {
  Scenario sc;
  sc.kind = ScenarioKind::FreeOscillationRelease;
  sc.duration = duration;
  auto [M, K] = build_section_matrices(0.8e-3, 4.48e4, 200e9, 76.92e9);
  // Slender physical rods carry an evanescent bending mode of wavenumber
  // k = sqrt(c0) (rhoA/EI)^(1/4) through the spatial sweep; k L must stay
  // below ~12 for the shooting to be well conditioned, which bounds L
  // given dt.
  sc.rod = RodParameters::uniform(0.5, node_count, M, K);
  sc.rod.set_gravity(Vec3(0, 0, 9.81));
  sc.solver.dt = dt;
  sc.hold_tip_wrench = stack(Vec3::Zero(), Vec3(0.02, 0, 0));
  sc.initial_state.kind = InitialStateRule::Straight;
  sc.settle.kind = SettleRule::FractionOfLength;
  sc.settle.value = 0.05;
  return sc;
}

}  // namespace rodest
