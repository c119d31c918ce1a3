// rodest command line: scenario simulation, observer runs, gain sweeps and
// energy audits around the rodest core library.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rodest/scenario.hpp"

namespace fs = std::filesystem;
using namespace rodest;

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNonconvergence = 3;

struct CommonArgs {
  std::string config;
  std::string out = ".";
  std::string variant = "base";
  double gamma = 1.0;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config) {
  auto* c = cmd->add_option("--config", args.config, "scenario JSON file");
  if (needs_config) c->required();
  cmd->add_option("--out", args.out, "output directory");
  cmd->add_option("--seed", args.seed, "measurement-noise RNG seed");
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir);
  return p;
}

Scenario load_scenario(const CommonArgs& args) {
  if (args.config.empty()) return balanced_release_scenario();
  return scenario_from_json_file(args.config);
}

int cmd_simulate(const CommonArgs& args) {
  Scenario sc = load_scenario(args);
  fs::path out = prepare_out(args.out);
  GroundTruth truth = synthesize_ground_truth(sc, args.seed);
  write_states_csv((out / "states.csv").string(), truth.trajectory);
  save_measurements_csv(truth.stream, (out / "measurements.csv").string());
  std::cout << "wrote " << truth.trajectory.size() << " states to "
            << (out / "states.csv").string() << "\n";
  return 0;
}

int cmd_observe(const CommonArgs& args) {
  Scenario sc = load_scenario(args);
  ObserverVariant variant = variant_from_string(args.variant);
  fs::path out = prepare_out(args.out);
  GroundTruth truth = synthesize_ground_truth(sc, args.seed);
  RunOptions opts;
  opts.states_path = (out / "states.csv").string();
  RunReport report = run_scenario(sc, variant, args.gamma, truth, opts);
  write_report_json((out / "report.json").string(), report);
  std::cout << "variant " << report.variant << " gamma " << report.gamma
            << ": settle "
            << (report.settle_time ? std::to_string(*report.settle_time) + " s"
                                   : std::string("none"))
            << ", avg position error " << report.avg_position_pct
            << "% of L, real-time factor " << report.real_time_factor << "\n";
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  if (args.config.empty()) throw ConfigError("sweep requires --config");
  Scenario sc = scenario_from_json_file(args.config);
  SweepConfig sw = sweep_from_json_file(args.config);
  fs::path out = prepare_out(args.out);
  GroundTruth truth = synthesize_ground_truth(sc, args.seed);
  std::vector<SweepRow> rows = run_sweep(sc, sw, truth);
  write_sweep_csv((out / "sweep.csv").string(), rows);
  for (const auto& r : rows) {
    std::cout << r.variant << " gamma=" << r.gamma << " settle=";
    if (r.settle_time)
      std::cout << *r.settle_time << " s";
    else
      std::cout << "none";
    if (!r.error.empty()) std::cout << " error: " << r.error;
    std::cout << "\n";
  }
  return 0;
}

int cmd_gains(const CommonArgs& args) {
  Scenario sc = load_scenario(args);
  fs::path out = prepare_out(args.out);
  const Mat6& M = sc.rod.inertia[0];
  const Mat6& K = sc.rod.stiffness[0];
  GainAnalysis a = riemann_setup(M, K);
  auto [gamma0, gamma1] = optimal_gains(M, K);

  std::vector<double> grid;
  for (double g = 0.05; g <= 4.0 + 1e-12; g += 0.05) grid.push_back(g);
  // sweep the tip gain as gamma * Gamma_1* with the base gain zero
  std::vector<double> scaled;
  std::vector<MuSweepRow> rows;
  rows.reserve(grid.size());
  for (double g : grid) {
    Mat6 g1 = g * gamma1;
    auto [rho0, rho1] = reflection_matrices(Mat6::Zero(), g1, a);
    MuSweepRow row;
    row.gamma = g;
    row.mu = mu_max(rho0, rho1, a.sigma, sc.rod.length);
    rows.push_back(row);
  }
  write_mu_csv((out / "mu.csv").string(), rows);

  nlohmann::json j;
  for (int i = 0; i < 6; ++i) {
    j["sigma"].push_back(a.sigma(i));
    for (int k = 0; k < 6; ++k) {
      j["gamma0_star"][i].push_back(gamma0(i, k));
      j["gamma1_star"][i].push_back(gamma1(i, k));
    }
  }
  j["finite_time_bound_one_absorbing_s"] =
      finite_time_bound(a.sigma, sc.rod.length, AbsorbingBoundaries::One);
  j["finite_time_bound_both_absorbing_s"] =
      finite_time_bound(a.sigma, sc.rod.length, AbsorbingBoundaries::Both);
  std::ofstream jf(out / "gains.json");
  jf << j.dump(2) << '\n';
  std::cout << "wave speeds (m/s):";
  for (int i = 0; i < 6; ++i) std::cout << ' ' << a.sigma(i);
  std::cout << "\nwrote " << (out / "mu.csv").string() << " and "
            << (out / "gains.json").string() << "\n";
  return 0;
}

int cmd_energy(const CommonArgs& args) {
  Scenario sc = load_scenario(args);
  fs::path out = prepare_out(args.out);
  GroundTruth truth = synthesize_ground_truth(sc, args.seed);
  std::ofstream csv(out / "energy.csv");
  if (!csv) throw std::runtime_error("cannot open energy.csv");
  csv << "t,energy_j\n";
  csv.precision(12);
  double e0 = 0.0, emax = 0.0, emin = 0.0;
  for (size_t i = 0; i < truth.trajectory.size(); ++i) {
    double e = total_energy(sc.rod, truth.trajectory[i]);
    if (i == 0) e0 = emax = emin = e;
    emax = std::max(emax, e);
    emin = std::min(emin, e);
    csv << truth.trajectory[i].t << ',' << e << '\n';
  }
  double drift = e0 > 0 ? (emax - emin) / e0 : emax - emin;
  std::cout << "initial energy " << e0 << " J, relative drift " << drift
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cosserat rod simulation and boundary-observer estimation"};
  app.require_subcommand(1);

  CommonArgs args;
  auto* simulate =
      app.add_subcommand("simulate", "forward-simulate the ground truth");
  add_common(simulate, args, false);
  auto* observe = app.add_subcommand("observe", "run one boundary observer");
  add_common(observe, args, false);
  observe->add_option("--variant", args.variant,
                      "prediction|base|tipD|tipPD|combined");
  observe->add_option("--gamma", args.gamma, "gain scale");
  auto* sweep = app.add_subcommand("sweep", "gain sweep over variants");
  add_common(sweep, args, true);
  auto* gains =
      app.add_subcommand("gains", "optimal gains and mu_max sweep tables");
  add_common(gains, args, false);
  auto* energy = app.add_subcommand("energy", "energy conservation audit");
  add_common(energy, args, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(args);
    if (observe->parsed()) return cmd_observe(args);
    if (sweep->parsed()) return cmd_sweep(args);
    if (gains->parsed()) return cmd_gains(args);
    if (energy->parsed()) return cmd_energy(args);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const NonconvergenceError& e) {
    std::cerr << "solver failed to converge: " << e.what() << "\n";
    return kExitNonconvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
