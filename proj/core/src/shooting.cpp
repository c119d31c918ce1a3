#include "rodest/shooting.hpp"

#include <cmath>
#include <limits>

namespace rodest {

BoundaryInputs BoundaryInputs::fixed_base_free_tip() {
  BoundaryInputs b;
  b.base_pose = [](double) { return Pose{}; };
  b.base_twist = [](double) { return Twist::Zero(); };
  b.tip_wrench = [](double) { return Wrench::Zero(); };
  b.tendon_tensions = [](double) { return std::vector<double>{}; };
  return b;
}

void TimeHistory::reset(const RodState& initial, double dt_) {
  dt = dt_;
  t = initial.t;
  xi_prev = initial.strain;
  eta_prev = initial.velocity;
  xi_prev2.clear();
  eta_prev2.clear();
}

void TimeHistory::push(const RodState& state) {
  xi_prev2 = std::move(xi_prev);
  eta_prev2 = std::move(eta_prev);
  xi_prev = state.strain;
  eta_prev = state.velocity;
  t = state.t;
}

DerivativeRule TimeHistory::rule() const {
  DerivativeRule r;
  const size_t n = xi_prev.size();
  r.xi_hist.resize(n);
  r.eta_hist.resize(n);
  if (xi_prev2.empty()) {
    // BDF1 startup
    r.c0 = 1.0 / dt;
    for (size_t k = 0; k < n; ++k) {
      r.xi_hist[k] = -xi_prev[k] / dt;
      r.eta_hist[k] = -eta_prev[k] / dt;
    }
  } else {
    r.c0 = 1.5 / dt;
    for (size_t k = 0; k < n; ++k) {
      r.xi_hist[k] = (-2.0 * xi_prev[k] + 0.5 * xi_prev2[k]) / dt;
      r.eta_hist[k] = (-2.0 * eta_prev[k] + 0.5 * eta_prev2[k]) / dt;
    }
  }
  return r;
}

SpatialModel::SpatialModel(const RodParameters& rod_,
                           const std::vector<double>& tensions)
    : rod(&rod_) {
  stiffness_inverse.resize(rod->node_count);
  actuation.resize(rod->node_count);
  for (int k = 0; k < rod->node_count; ++k) {
    stiffness_inverse[k] = rod->stiffness[k].ldlt().solve(Mat6::Identity());
    actuation[k] = actuation_wrench(*rod, tensions, k);
  }
}

namespace {

template <typename T>
T lerp_node(const std::vector<T>& arr, int k, double a) {
  if (a == 0.0) return arr[k];
  return (1.0 - a) * arr[k] + a * arr[k + 1];
}

// Catmull-Rom sampling for the history fields. Linear interpolation of the
// histories against the RK4-integrated current fields leaves an O(ds^2)
// mismatch that acts as spurious (anti-)damping; cubic pushes it to O(ds^4).
template <typename T>
T cubic_node(const std::vector<T>& arr, int k, double a) {
  if (a == 0.0) return arr[k];
  const int n = static_cast<int>(arr.size());
  T m0 = k > 0 ? T(0.5 * (arr[k + 1] - arr[k - 1])) : T(arr[1] - arr[0]);
  T m1 = k + 2 < n ? T(0.5 * (arr[k + 2] - arr[k]))
                   : T(arr[k + 1] - arr[k]);
  const double a2 = a * a, a3 = a2 * a;
  return (2 * a3 - 3 * a2 + 1) * arr[k] + (a3 - 2 * a2 + a) * m0 +
         (-2 * a3 + 3 * a2) * arr[k + 1] + (a3 - a2) * m1;
}

struct StageDeriv {
  Twist eta_s;
  Wrench lam_s;
  Twist xi;
};

// Spatial right-hand side at fraction a inside interval [k, k+1]:
//   xi    = K^-1 (Lambda - Lambda_act) + xi_o
//   eta_s = xi_t - ad_xi eta
//   Lam_s = M eta_t - ad_eta^T M eta + ad_xi^T Lambda - Ad_g^-1 F_G
StageDeriv spatial_rhs(const SpatialModel& model, const DerivativeRule& rule,
                       const Pose& g, const Twist& eta, const Wrench& lam,
                       int k, double a) {
  const RodParameters& rod = *model.rod;
  Mat6 Kinv = lerp_node(model.stiffness_inverse, k, a);
  Wrench lam_act = lerp_node(model.actuation, k, a);
  Twist xi_o = lerp_node(rod.reference_strain, k, a);
  Mat6 M = lerp_node(rod.inertia, k, a);
  Wrench FG = lerp_node(rod.gravity_wrench, k, a);

  StageDeriv d;
  d.xi = Kinv * (lam - lam_act) + xi_o;

  Twist xi_t = rule.c0 * d.xi;
  Twist eta_t = rule.c0 * eta;
  if (!rule.xi_hist.empty()) {
    xi_t += cubic_node(rule.xi_hist, k, a);
    eta_t += cubic_node(rule.eta_hist, k, a);
  }

  Mat6 ad_xi = ad(d.xi);
  d.eta_s = xi_t - ad_xi * eta;
  Wrench F = Ad_inverse(g) * FG;
  d.lam_s = M * eta_t - ad(eta).transpose() * (M * eta) +
            ad_xi.transpose() * lam - F;
  return d;
}

}  // namespace

RodState integrate_spatial(const SpatialModel& model, const DerivativeRule& rule,
                           const Pose& base_pose, const Twist& base_twist,
                           const Wrench& base_wrench, int substeps) {
  const RodParameters& rod = *model.rod;
  const int n = rod.node_count;
  const double ds = rod.ds();
  const int m = std::max(1, substeps);
  const double h = ds / m;

  RodState state;
  state.pose.resize(n);
  state.strain.resize(n);
  state.velocity.resize(n);
  state.wrench.resize(n);

  Pose g = base_pose;
  Twist eta = base_twist;
  Wrench lam = base_wrench;

  auto record = [&](int k) {
    state.pose[k] = g;
    state.strain[k] =
        model.stiffness_inverse[k] * (lam - model.actuation[k]) +
        rod.reference_strain[k];
    state.velocity[k] = eta;
    state.wrench[k] = lam;
  };
  record(0);

  for (int k = 0; k < n - 1; ++k) {
    for (int sub = 0; sub < m; ++sub) {
      double a0 = static_cast<double>(sub) / m;
      double ah = a0 + 0.5 / m;
      double a1 = a0 + 1.0 / m;

      StageDeriv d1 = spatial_rhs(model, rule, g, eta, lam, k, a0);
      Pose gh = g * exp_se3(d1.xi, 0.5 * h);
      StageDeriv d2 = spatial_rhs(model, rule, gh, eta + 0.5 * h * d1.eta_s,
                                  lam + 0.5 * h * d1.lam_s, k, ah);
      Pose gh2 = g * exp_se3(d2.xi, 0.5 * h);
      StageDeriv d3 = spatial_rhs(model, rule, gh2, eta + 0.5 * h * d2.eta_s,
                                  lam + 0.5 * h * d2.lam_s, k, ah);
      Pose gf = g * exp_se3(d3.xi, h);
      StageDeriv d4 = spatial_rhs(model, rule, gf, eta + h * d3.eta_s,
                                  lam + h * d3.lam_s, k, a1);

      eta += h / 6.0 * (d1.eta_s + 2 * d2.eta_s + 2 * d3.eta_s + d4.eta_s);
      lam += h / 6.0 * (d1.lam_s + 2 * d2.lam_s + 2 * d3.lam_s + d4.lam_s);
      Twist xi_avg = (d1.xi + 2 * d2.xi + 2 * d3.xi + d4.xi) / 6.0;
      g = g * exp_se3(xi_avg, h);

      if (!eta.allFinite() || !lam.allFinite())
        throw SolverError("spatial integration diverged");
    }
    g.reorthonormalize();
    record(k + 1);
  }
  return state;
}

RodState shoot(const SpatialModel& model, const SolverSettings& settings,
               const DerivativeRule& rule, const Pose& base_pose,
               const Twist& base_twist, const Wrench& tip_wrench,
               const BoundaryStrategy* strategy, double t, Wrench& base_wrench,
               SolveDiagnostics* diagnostics) {
  const double L = model.rod->length;
  Vec6 weights;
  weights << 1.0 / L, 1.0 / L, 1.0 / L, 1.0, 1.0, 1.0;

  auto eval = [&](const Wrench& lam0, RodState& out) -> Vec6 {
    Twist eta0 = base_twist;
    if (strategy) eta0 += strategy->base_twist_correction(lam0, t);
    out = integrate_spatial(model, rule, base_pose, eta0, lam0,
                            settings.spatial_substeps_per_interval);
    Wrench f1 = tip_wrench;
    if (strategy)
      f1 = strategy->effective_tip_wrench(tip_wrench, out.pose.back(),
                                          out.velocity.back(), t);
    return weights.cwiseProduct(out.wrench.back() - f1);
  };

  Wrench lam0 = base_wrench;
  RodState state;
  Vec6 r;
  try {
    r = eval(lam0, state);
  } catch (const SolverError&) {
    throw NonconvergenceError("shooting sweep diverged at the warm start",
                              std::numeric_limits<double>::infinity());
  }
  int iter = 0;
  for (; iter < settings.max_newton_iterations; ++iter) {
    if (r.norm() <= settings.residual_tolerance) break;

    Mat6 J;
    RodState scratch;
    for (int i = 0; i < 6; ++i) {
      double hstep = settings.finite_difference_step *
                     std::max(1.0, std::abs(lam0(i)));
      Wrench pert = lam0;
      pert(i) += hstep;
      Vec6 rp;
      try {
        rp = eval(pert, scratch);
      } catch (const SolverError&) {
        throw NonconvergenceError(
            "shooting sweep diverged during Jacobian evaluation", r.norm());
      }
      J.col(i) = (rp - r) / hstep;
    }

    Vec6 dlam = J.fullPivLu().solve(-r);
    // Damped update; a candidate that blows up the spatial sweep counts as
    // infinitely bad and forces further damping.
    double alpha = 1.0;
    bool accepted = false;
    for (int halve = 0; halve <= 5; ++halve, alpha *= 0.5) {
      Wrench cand = lam0 + alpha * dlam;
      RodState cstate;
      Vec6 cr;
      try {
        cr = eval(cand, cstate);
      } catch (const SolverError&) {
        continue;
      }
      if (halve < 5 && cr.norm() > r.norm()) continue;
      lam0 = cand;
      r = cr;
      state = std::move(cstate);
      accepted = true;
      break;
    }
    if (!accepted)
      throw NonconvergenceError("shooting line search failed", r.norm());
  }

  if (diagnostics) {
    diagnostics->newton_iterations = iter;
    diagnostics->residual = r.norm();
  }
  if (r.norm() > settings.residual_tolerance)
    throw NonconvergenceError("shooting did not converge", r.norm());

  base_wrench = lam0;
  return state;
}

RodState solve_static(const RodParameters& rod, const SolverSettings& settings,
                      const Pose& base_pose, const Wrench& tip_wrench,
                      const std::vector<double>& tensions) {
  SpatialModel model(rod, tensions);
  DerivativeRule static_rule;  // c0 = 0, no histories
  Wrench lam0 = Wrench::Zero();
  RodState state = shoot(model, settings, static_rule, base_pose,
                         Twist::Zero(), tip_wrench, nullptr, 0.0, lam0);
  state.t = 0.0;
  return state;
}

ShootingStepper::ShootingStepper(RodParameters rod, SolverSettings settings,
                                 BoundaryInputs boundary,
                                 const BoundaryStrategy* strategy)
    : rod_(std::move(rod)),
      settings_(settings),
      boundary_(std::move(boundary)),
      strategy_(strategy) {
  rod_.finalize_tendons();
  rod_.validate();
}

void ShootingStepper::reset(const RodState& initial) {
  history_.reset(initial, settings_.dt);
  base_wrench_ = initial.wrench.empty() ? Wrench::Zero() : initial.wrench[0];
}

RodState ShootingStepper::step() {
  const double t_new = history_.t + settings_.dt;
  std::vector<double> tensions =
      boundary_.tendon_tensions ? boundary_.tendon_tensions(t_new)
                                : std::vector<double>{};
  SpatialModel model(rod_, tensions);
  DerivativeRule rule = history_.rule();
  RodState state =
      shoot(model, settings_, rule, boundary_.base_pose(t_new),
            boundary_.base_twist(t_new), boundary_.tip_wrench(t_new),
            strategy_, t_new, base_wrench_, &diagnostics_);
  state.t = t_new;
  history_.push(state);
  return state;
}

RodState straight_state(const RodParameters& rod, const Pose& base_pose) {
  RodState state;
  const int n = rod.node_count;
  state.pose.resize(n);
  state.strain = rod.reference_strain;
  state.velocity.assign(n, Twist::Zero());
  state.wrench.assign(n, Wrench::Zero());
  Pose g = base_pose;
  state.pose[0] = g;
  const double ds = rod.ds();
  for (int k = 0; k < n - 1; ++k) {
    Twist mid = 0.5 * (rod.reference_strain[k] + rod.reference_strain[k + 1]);
    g = g * exp_se3(mid, ds);
    state.pose[k + 1] = g;
  }
  return state;
}

}  // namespace rodest
