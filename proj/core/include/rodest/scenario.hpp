#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rodest/gains.hpp"
#include "rodest/observer.hpp"

namespace rodest {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScenarioKind {
  FreeOscillationRelease,
  TendonDriven,
  UnknownInputReplay,
  StaticEquilibrium,
};

enum class ObserverVariant { Prediction, Base, TipD, TipPD, Combined };

std::string to_string(ObserverVariant v);
ObserverVariant variant_from_string(const std::string& s);

/// Piecewise-linear scalar signal; constant extrapolation outside the table.
struct LinearTable {
  std::vector<double> times;
  std::vector<double> values;
  double operator()(double t) const;
};

struct WrenchTable {
  std::vector<double> times;
  std::vector<Wrench> values;
  Wrench operator()(double t) const;
};

struct InitialStateRule {
  enum Kind { Truth, Straight, Perturbed } kind = Straight;
  std::uint64_t seed = 0;
  double magnitude = 0.1;  // bending-strain amplitude, 1/m
};

struct NoiseSpec {
  double base_wrench_std = 0.0;   // N / N*m per component
  double tip_position_std = 0.0;  // m
  double tip_rotation_std = 0.0;  // rad
  double tip_twist_std = 0.0;     // rad/s and m/s per component

  bool any() const {
    return base_wrench_std > 0 || tip_position_std > 0 ||
           tip_rotation_std > 0 || tip_twist_std > 0;
  }
};

struct SettleRule {
  enum Kind { RelativeInitialError, FractionOfLength } kind =
      RelativeInitialError;
  double value = 0.02;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::FreeOscillationRelease;
  RodParameters rod;
  SolverSettings solver;
  double duration = 1.0;  // s
  Pose base_pose;

  Wrench hold_tip_wrench = Wrench::Zero();  // applied for t < 0, released
  std::vector<LinearTable> tensions;        // one per tendon
  std::vector<bool> tension_known;          // withheld tendons drive only truth
  WrenchTable withheld_tip_wrench;          // unknown input, truth only

  InitialStateRule initial_state;
  NoiseSpec noise;
  double model_mismatch_k_scale = 1.0;  // observer stiffness = scale * truth
  SettleRule settle;
  double p_to_d_ratio = 20.0;
  bool combined_uses_proportional = false;

  void validate() const;
};

struct GroundTruth {
  std::vector<RodState> trajectory;  // includes t = 0
  MeasurementStream stream;
};

/// Forward-simulates the scenario's true system and extracts the boundary
/// measurement stream (with configured noise, seeded).
GroundTruth synthesize_ground_truth(const Scenario& scenario,
                                    std::uint64_t seed = 0);

/// Gains for a variant: optimal base/tip gains of the (observer-side) rod
/// scaled by gamma; the PD variants add Gamma_P = ratio * Gamma_D.
ObserverGains build_gains(const Scenario& scenario, ObserverVariant variant,
                          double gamma);

struct RunReport {
  std::string variant;
  double gamma = 0.0;
  std::optional<double> settle_time;      // s
  double avg_position_pct = 0.0;          // % of L
  double avg_rotation_rad = 0.0;
  double avg_linear_ms = 0.0;
  double avg_angular_rads = 0.0;
  std::vector<double> energy;             // per emitted step
  double real_time_factor = 0.0;          // simulated T / observer wall time
  std::string states_path;
};

struct RunOptions {
  std::string states_path;  // empty: no dump
};

RunReport run_scenario(const Scenario& scenario, ObserverVariant variant,
                       double gamma, const GroundTruth& truth,
                       const RunOptions& options = {},
                       ObserverRunResult* result_out = nullptr);

struct SweepConfig {
  std::vector<double> gamma;  // positive, sorted
  std::vector<ObserverVariant> variants;
  int threads = 0;  // 0: hardware concurrency
};

struct SweepRow {
  std::string variant;
  double gamma = 0.0;
  std::optional<double> settle_time;
  double avg_position_pct = 0.0;
  std::string error;  // nonempty when the run failed
};

/// Runs all (variant, gamma) combinations concurrently against one shared
/// ground truth.
std::vector<SweepRow> run_sweep(const Scenario& scenario,
                                const SweepConfig& sweep,
                                const GroundTruth& truth);

enum class MuSweepSide { Base, Tip };

struct MuSweepRow {
  double gamma = 0.0;
  double mu = 0.0;
  bool singular_bracket = false;  // an eigenvalue of Sigma G crossed 1 here
};

/// mu_max over a gain grid, sweeping gamma * I on one boundary with the
/// other boundary gain zero.
std::vector<MuSweepRow> mu_sweep(const Mat6& M, const Mat6& K, double L,
                                 const std::vector<double>& gamma_grid,
                                 MuSweepSide side);

// --- configuration & emission ---

Scenario scenario_from_json_file(const std::string& path);
SweepConfig sweep_from_json_file(const std::string& path);

void write_states_csv(const std::string& path,
                      const std::vector<RodState>& states);
void write_report_json(const std::string& path, const RunReport& report);
void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows);
void write_mu_csv(const std::string& path,
                  const std::vector<MuSweepRow>& rows);

// --- canned setups shared by tests and the CLI ---

// Idealized rod with M = 10 I, K = 1e4 I, L = 0.6 m, hanging under gravity,
// released from a lateral holding force at the tip; observer starts straight.
// The slow characteristic wave speed (31.6 m/s) limits how small dt can be:
// single shooting amplifies base perturbations by exp(1.5 L / (dt sigma)).
Scenario balanced_release_scenario(int node_count = 30, double dt = 5e-3,
                                   double duration = 0.6);

// Spring-steel rod section (bending-dominated stiffness ratios), L = 0.5 m.
Scenario steel_rod_scenario(int node_count = 30, double dt = 5e-3,
                            double duration = 0.5);

// Builds the observer-side rod (stiffness scaled by the mismatch factor).
RodParameters observer_rod(const Scenario& scenario);

// Initial observer state per the scenario's rule.
RodState initial_observer_state(const Scenario& scenario,
                                const GroundTruth& truth);

}  // namespace rodest
