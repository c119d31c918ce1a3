#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "rodest/rodmodel.hpp"

namespace rodest {

struct SolverSettings {
  double dt = 1e-3;                   // s
  double residual_tolerance = 1e-6;   // mixed wrench norm, N
  int max_newton_iterations = 50;
  double finite_difference_step = 1e-6;
  int spatial_substeps_per_interval = 1;
};

/// Time-callable boundary signals of the physical robot.
struct BoundaryInputs {
  std::function<Pose(double)> base_pose;
  std::function<Twist(double)> base_twist;
  std::function<Wrench(double)> tip_wrench;
  std::function<std::vector<double>(double)> tendon_tensions;

  static BoundaryInputs fixed_base_free_tip();
};

/// Hook for observer boundary corrections. The default strategy is pure
/// simulation (no corrections).
class BoundaryStrategy {
 public:
  virtual ~BoundaryStrategy() = default;
  // Added to the nominal base twist; receives the current base-wrench guess.
  virtual Twist base_twist_correction(const Wrench& /*base_wrench*/,
                                      double /*t*/) const {
    return Twist::Zero();
  }
  // Effective tip wrench given the sweep's current tip pose and twist.
  virtual Wrench effective_tip_wrench(const Wrench& nominal,
                                      const Pose& /*tip_pose*/,
                                      const Twist& /*tip_twist*/,
                                      double /*t*/) const {
    return nominal;
  }
};

/// Implicit time-derivative rule: xi_t = c0 * xi + xi_hist(s), same for eta.
/// c0 == 0 with empty histories is the static case.
struct DerivativeRule {
  double c0 = 0.0;
  std::vector<Twist> xi_hist;
  std::vector<Twist> eta_hist;
};

/// Snapshots needed by the BDF rules. BDF1 on the first step, BDF2 after.
struct TimeHistory {
  double dt = 0.0;
  double t = 0.0;
  std::vector<Twist> xi_prev, eta_prev;
  std::vector<Twist> xi_prev2, eta_prev2;

  void reset(const RodState& initial, double dt);
  void push(const RodState& state);
  DerivativeRule rule() const;
};

struct SolveDiagnostics {
  int newton_iterations = 0;
  double residual = 0.0;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonconvergenceError : public SolverError {
 public:
  NonconvergenceError(const std::string& msg, double residual)
      : SolverError(msg), residual(residual) {}
  double residual;
};

/// Node-sampled coefficient fields that are fixed during one timestep's
/// Newton iterations (stiffness inverses and tendon wrenches).
struct SpatialModel {
  const RodParameters* rod = nullptr;
  std::vector<Mat6> stiffness_inverse;
  std::vector<Wrench> actuation;

  SpatialModel(const RodParameters& rod, const std::vector<double>& tensions);
};

/// One RK4 sweep from the base to the tip. Pose updates are multiplicative
/// (exp map of the RK4-averaged strain), so rotations stay orthonormal.
/// Throws SolverError on non-finite values.
RodState integrate_spatial(const SpatialModel& model, const DerivativeRule& rule,
                           const Pose& base_pose, const Twist& base_twist,
                           const Wrench& base_wrench, int substeps = 1);

/// Newton shooting on the base wrench. base_wrench is used as the warm start
/// and holds the converged value on return. Throws NonconvergenceError when
/// the iteration budget is exhausted.
RodState shoot(const SpatialModel& model, const SolverSettings& settings,
               const DerivativeRule& rule, const Pose& base_pose,
               const Twist& base_twist, const Wrench& tip_wrench,
               const BoundaryStrategy* strategy, double t, Wrench& base_wrench,
               SolveDiagnostics* diagnostics = nullptr);

/// Static equilibrium (all time derivatives and velocities zero).
RodState solve_static(const RodParameters& rod, const SolverSettings& settings,
                      const Pose& base_pose, const Wrench& tip_wrench,
                      const std::vector<double>& tensions = {});

/// Time marching driver: owns the history and the warm-started base wrench.
class ShootingStepper {
 public:
  ShootingStepper(RodParameters rod, SolverSettings settings,
                  BoundaryInputs boundary,
                  const BoundaryStrategy* strategy = nullptr);

  void reset(const RodState& initial);
  RodState step();

  double time() const { return history_.t; }
  const RodParameters& rod() const { return rod_; }
  const Wrench& base_wrench() const { return base_wrench_; }
  const SolveDiagnostics& last_diagnostics() const { return diagnostics_; }

 private:
  RodParameters rod_;
  SolverSettings settings_;
  BoundaryInputs boundary_;
  const BoundaryStrategy* strategy_;
  TimeHistory history_;
  Wrench base_wrench_ = Wrench::Zero();
  SolveDiagnostics diagnostics_;
};

/// A straight at-rest state consistent with the rod's reference strain,
/// integrated from the given base pose.
RodState straight_state(const RodParameters& rod, const Pose& base_pose);

}  // namespace rodest
