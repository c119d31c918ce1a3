#pragma once

#include <optional>

#include "rodest/measurement.hpp"
#include "rodest/shooting.hpp"

namespace rodest {

/// Correction gains selecting the observer variant. A zero matrix disables
/// the corresponding correction; all zero degenerates to pure prediction.
struct ObserverGains {
  Mat6 base = Mat6::Zero();              // Gamma_0
  Mat6 tip_proportional = Mat6::Zero();  // Gamma_P
  Mat6 tip_derivative = Mat6::Zero();    // Gamma_D

  bool base_active() const { return !base.isZero(0.0); }
  bool tip_active() const {
    return !tip_proportional.isZero(0.0) || !tip_derivative.isZero(0.0);
  }

  // Throws std::invalid_argument if a matrix is not symmetric PSD
  // (eigenvalues >= -1e-12).
  void validate() const;
};

// Gamma_0 * (estimated - measured), added to the nominal base twist.
Twist base_correction(const Wrench& estimated_base_wrench,
                      const Wrench& measured_base_wrench, const Mat6& gamma0);

// -Gamma_P log(g_bar^-1 g_tip)^vee - Gamma_D (eta_tip - eta_bar).
// Propagates the SE(3) log domain error when the relative rotation is
// too close to pi.
Wrench tip_correction(const Pose& estimated_tip_pose,
                      const Twist& estimated_tip_twist,
                      const Pose& measured_tip_pose,
                      const Twist& measured_tip_twist, const Mat6& gammaP,
                      const Mat6& gammaD);

/// BoundaryStrategy that applies the measurement-driven corrections.
class ObserverStrategy : public BoundaryStrategy {
 public:
  ObserverStrategy(ObserverGains gains, const MeasurementStream& stream);

  Twist base_twist_correction(const Wrench& base_wrench,
                              double t) const override;
  Wrench effective_tip_wrench(const Wrench& nominal, const Pose& tip_pose,
                              const Twist& tip_twist, double t) const override;

 private:
  ObserverGains gains_;
  const MeasurementStream* stream_;
};

/// Body-frame backward difference consistent with g_t = g eta^:
///   eta(s) = log(g(s, t-dt)^-1 g(s, t))^vee / dt.
std::vector<Twist> reconstruct_velocity(const std::vector<Pose>& previous,
                                        const std::vector<Pose>& current,
                                        double dt);

/// First time after which the error stays below the threshold for the rest
/// of the series; nullopt if it never does.
std::optional<double> settle_time(const std::vector<double>& times,
                                  const std::vector<double>& errors,
                                  double threshold);

struct ErrorMetrics {
  double tip_position = 0.0;   // m
  double mean_position = 0.0;  // m, over nodes
  double mean_rotation = 0.0;  // rad
  double mean_linear = 0.0;    // m/s
  double mean_angular = 0.0;   // rad/s
};

ErrorMetrics compare_states(const RodState& estimate, const RodState& truth);

struct ObserverRunResult {
  std::vector<RodState> estimates;  // index 0 is the initial state
  std::vector<ErrorMetrics> errors; // empty when no ground truth given
  std::optional<double> settle_time;
  double initial_tip_error = 0.0;
};

/// Algorithm: time-march the shooting solver with observer boundary
/// corrections; emitted poses are anchored at the physical base, and the
/// emitted velocity field is recomputed from consecutive pose fields
/// whenever the base correction is active (the solver keeps its own
/// internal velocity history).
///
/// settle_threshold, when given with ground truth, is applied to the tip
/// position error series. ground_truth[i] must align with estimate
/// timestamps (same dt, starting at initial_state.t).
ObserverRunResult run_observer(const RodParameters& rod,
                               const SolverSettings& settings,
                               const ObserverGains& gains,
                               const BoundaryInputs& boundary,
                               const MeasurementStream& stream,
                               const RodState& initial_state, double duration,
                               const std::vector<RodState>* ground_truth = nullptr,
                               std::optional<double> settle_threshold = {});

}  // namespace rodest
