// Command-line driver: randomized time-evolution estimators, trade-off
// sweeps, trajectory comparisons, fault-tolerant cost tables and shot-log
// audits, all from JSON run configs.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tepai/errors.hpp"
#include "tepai/ftcost.hpp"
#include "tepai/run.hpp"
#include "tepai/serialize.hpp"

namespace {

struct CommonOverrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> output;
  std::optional<std::uint64_t> shots;
};

void add_common(CLI::App* cmd, CommonOverrides& common) {
  cmd->add_option("-c,--config", common.config_path, "JSON run config")->required();
  cmd->add_option("--seed", common.seed, "override master_seed");
  cmd->add_option("--workers", common.workers, "override worker count");
  cmd->add_option("--out", common.output, "override output path");
  cmd->add_option("--shots", common.shots, "override N_s");
}

tepai::FullConfig load_with_overrides(const CommonOverrides& common) {
  tepai::FullConfig cfg = tepai::load_config_file(common.config_path);
  if (common.seed) cfg.run.master_seed = *common.seed;
  if (common.workers) cfg.run.workers = *common.workers;
  if (common.output) cfg.run.output = *common.output;
  if (common.shots) cfg.run.n_shots = *common.shots;
  return cfg;
}

std::ostream& open_or_stdout(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw tepai::ValidationError("cannot open output file '" + path + "'");
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TE-PAI: exact time evolution from sampled fixed-angle circuits"};
  app.require_subcommand(1);

  CommonOverrides run_common, sweep_common, traj_common, qdrift_common, exact_common;
  std::string sweep_out, traj_out, audit_dir, ftcost_json;

  auto* cmd_run = app.add_subcommand("run", "sample circuits and estimate one observable");
  add_common(cmd_run, run_common);

  auto* cmd_sweep = app.add_subcommand("sweep", "trade-off curves over T, delta or N (CSV)");
  add_common(cmd_sweep, sweep_common);
  cmd_sweep->add_option("--csv", sweep_out, "CSV output path (default stdout)");

  auto* cmd_traj = app.add_subcommand("trajectory", "expectation values over a time grid (CSV)");
  add_common(cmd_traj, traj_common);
  cmd_traj->add_option("--csv", traj_out, "CSV output path (default stdout)");

  auto* cmd_qdrift = app.add_subcommand("qdrift", "qDRIFT baseline estimator");
  add_common(cmd_qdrift, qdrift_common);

  auto* cmd_exact = app.add_subcommand("exact", "exact evolution expectation (small systems)");
  add_common(cmd_exact, exact_common);

  tepai::Table1Inputs ft;
  std::string ft_delta = "pi/256";
  int ft_l0 = 0;
  auto* cmd_ft = app.add_subcommand("ftcost", "fault-tolerant T-gate cost comparison");
  cmd_ft->add_option("--c1avg-t", ft.c_norm_avg_T, "averaged l1 norm times T");
  cmd_ft->add_option("--delta", ft_delta, "rotation angle (hierarchy form pi*2^(1-l))");
  cmd_ft->add_option("--l0", ft_l0, "hierarchy level (alternative to --delta)");
  cmd_ft->add_option("--n-trotter", ft.trotter_steps, "Trotter steps of the baseline row");
  cmd_ft->add_option("--terms", ft.n_terms, "Hamiltonian term count L");
  cmd_ft->add_option("--eps-pai", ft.eps_pai, "synthesis precision for the TE-PAI rows");
  cmd_ft->add_option("--eps-trotter", ft.eps_trotter, "synthesis precision for the Trotter row");
  cmd_ft->add_option("--json", ftcost_json, "also write the table as JSON to this path");

  auto* cmd_audit = app.add_subcommand("audit", "recompute a summary from its shot log");
  cmd_audit->add_option("--run", audit_dir, "run output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const auto t0 = std::chrono::steady_clock::now();
    if (cmd_run->parsed()) {
      const tepai::FullConfig cfg = load_with_overrides(run_common);
      const tepai::EstimatorResult result = tepai::cmd_run(cfg.run);
      std::cout << tepai::result_to_json(result).dump(2) << '\n';
    } else if (cmd_sweep->parsed()) {
      const tepai::FullConfig cfg = load_with_overrides(sweep_common);
      if (!cfg.sweep) throw tepai::ValidationError("config: missing 'sweep' section");
      std::ofstream file;
      tepai::cmd_sweep(cfg.run, *cfg.sweep, open_or_stdout(sweep_out, file));
    } else if (cmd_traj->parsed()) {
      const tepai::FullConfig cfg = load_with_overrides(traj_common);
      if (!cfg.trajectory) throw tepai::ValidationError("config: missing 'trajectory' section");
      std::ofstream file;
      tepai::cmd_trajectory(cfg.run, *cfg.trajectory, open_or_stdout(traj_out, file));
    } else if (cmd_qdrift->parsed()) {
      const tepai::FullConfig cfg = load_with_overrides(qdrift_common);
      const tepai::Hamiltonian h = tepai::build_model(cfg.run.model);
      const tepai::EstimatorResult result = tepai::run_qdrift_estimator(
          h, cfg.run.T, cfg.run.N, tepai::PauliString::parse(cfg.run.observable, h.n_qubits()),
          tepai::make_initial_state(cfg.run.initial_state, h.n_qubits()), cfg.run.n_shots,
          cfg.run.mode, cfg.run.noise, cfg.run.master_seed, {cfg.run.workers, false});
      std::cout << tepai::result_to_json(result).dump(2) << '\n';
    } else if (cmd_exact->parsed()) {
      const tepai::FullConfig cfg = load_with_overrides(exact_common);
      const tepai::Hamiltonian h = tepai::build_model(cfg.run.model);
      const double value = tepai::exact_expectation(
          h, cfg.run.T, tepai::make_initial_state(cfg.run.initial_state, h.n_qubits()),
          tepai::PauliString::parse(cfg.run.observable, h.n_qubits()));
      std::cout << nlohmann::json{{"T", cfg.run.T},
                                  {"observable", cfg.run.observable},
                                  {"value", value}}
                       .dump(2)
                << '\n';
    } else if (cmd_ft->parsed()) {
      if (ft_l0 > 0) {
        ft.delta = tepai::delta_for_level(ft_l0);
      } else {
        ft.delta = tepai::parse_angle(nlohmann::json(ft_delta), "delta");
      }
      const auto rows = tepai::table1(ft);
      tepai::print_resource_table(rows, std::cout);
      if (!ftcost_json.empty()) {
        std::ofstream out(ftcost_json);
        out << tepai::resource_table_json(rows).dump(2) << '\n';
      }
    } else if (cmd_audit->parsed()) {
      tepai::cmd_audit(audit_dir);
      std::cout << "audit: summary matches the shot log\n";
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
    std::cerr << "done in " << elapsed.count() << " s\n";
    return 0;
  } catch (const tepai::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const tepai::ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const tepai::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
