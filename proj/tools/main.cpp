// pipeflow command line: run scenarios, validate scenario files, and
// cross-check the closed-form flux kernels against quadrature.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pipeflow/output.hpp"
#include "pipeflow/quadrature.hpp"
#include "pipeflow/run.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitBadScenario = 2;
constexpr int kExitAborted = 3;

std::string read_scenario_text(const std::string& source) {
  constexpr std::string_view kBuiltinPrefix = "builtin:";
  if (source.rfind(kBuiltinPrefix, 0) == 0) {
    return pipeflow::builtin_scenario_text(source.substr(kBuiltinPrefix.size()));
  }
  std::ifstream f(source, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read scenario file " + source);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

void print_issues(const std::vector<pipeflow::Issue>& issues) {
  for (const auto& issue : issues) {
    std::cerr << "error: " << pipeflow::format_issue(issue) << "\n";
  }
}

struct ScenarioArgs {
  std::string scenario;
  std::string out_dir;
  double cfl = 0.0;
  long cells = 0;
  std::string friction;
  std::string metric;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& args, bool with_run_flags) {
  cmd->add_option("--scenario", args.scenario, "scenario file path or builtin:<name>")
      ->required();
  if (with_run_flags) {
    cmd->add_option("--out", args.out_dir, "output directory (overrides the scenario)");
    cmd->add_option("--cfl", args.cfl, "CFL number override");
    cmd->add_option("--cells", args.cells, "cell count override");
    cmd->add_option("--friction", args.friction, "friction mode override: upwinded|centered|off");
    cmd->add_option("--metric", args.metric, "extra run metric (symmetry)");
  }
}

int load_scenario(const ScenarioArgs& args, pipeflow::Scenario& out) {
  auto parsed = pipeflow::parse_scenario(read_scenario_text(args.scenario));
  if (!parsed.ok()) {
    print_issues(parsed.issues);
    return kExitBadScenario;
  }
  out = std::move(*parsed.scenario);

  pipeflow::ScenarioOverrides overrides;
  if (!args.out_dir.empty()) overrides.out_dir = args.out_dir;
  if (args.cfl > 0.0) overrides.cfl = args.cfl;
  if (args.cells > 0) overrides.n_cells = static_cast<std::size_t>(args.cells);
  if (!args.friction.empty()) {
    auto mode = pipeflow::parse_friction_mode(args.friction);
    if (!mode) {
      std::cerr << "error: --friction expects upwinded | centered | off\n";
      return kExitBadScenario;
    }
    overrides.friction = mode;
  }
  if (!args.metric.empty()) {
    if (args.metric != "symmetry") {
      std::cerr << "error: --metric supports only `symmetry`\n";
      return kExitBadScenario;
    }
    overrides.record_symmetry = true;
  }
  auto issues = pipeflow::apply_overrides(out, overrides);
  if (!issues.empty()) {
    print_issues(issues);
    return kExitBadScenario;
  }
  return kExitOk;
}

int cmd_run(const ScenarioArgs& args) {
  pipeflow::Scenario sc;
  if (int rc = load_scenario(args, sc); rc != kExitOk) return rc;

  try {
    const pipeflow::RunResult result = pipeflow::run(sc);
    pipeflow::write_outputs(sc.out_dir, sc, result);
    std::cout << "run " << sc.name << ": " << result.steps << " steps to t = "
              << result.final_state.time << " s, kernel " << result.kernel_name << ", outputs in "
              << sc.out_dir << "\n";
    return kExitOk;
  } catch (const pipeflow::RunAbort& err) {
    const auto dump = std::filesystem::path(sc.out_dir) / "abort_state.csv";
    pipeflow::write_state_dump(dump, err.state_at_abort, sc.constants);
    std::cerr << "aborted at t = " << err.time() << " s (step " << err.step()
              << "): " << err.what() << "; state dumped to " << dump.string() << "\n";
    return kExitAborted;
  }
}

int cmd_validate(const ScenarioArgs& args) {
  auto parsed = pipeflow::parse_scenario(read_scenario_text(args.scenario));
  if (!parsed.ok()) {
    print_issues(parsed.issues);
    return kExitBadScenario;
  }
  const auto& sc = *parsed.scenario;
  std::cout << "ok: " << sc.name << " (" << sc.n_cells << " cells, t_end " << sc.t_end
            << " s, friction " << pipeflow::friction_mode_name(sc.friction) << ")\n";
  return kExitOk;
}

int cmd_check_flux(std::uint64_t seed, std::size_t count) {
  using pipeflow::kinetic::interface_flux;
  const auto result = pipeflow::quadrature::check_flux_kernel(
      seed, count,
      [](const pipeflow::kinetic::InterfaceData& d, double g) { return interface_flux(d, g); });
  std::printf("check-flux: kernel=%s instances=%zu max_rel_error=%.3e\n",
              pipeflow::kinetic::active_flux_batch_name(), result.count, result.max_rel_error);
  return result.max_rel_error < 1e-9 ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume kinetic solver for mixed free-surface/pressurized pipe flow"};
  app.require_subcommand(1);

  ScenarioArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "run a scenario and write CSV outputs");
  add_scenario_options(run_cmd, run_args, true);

  ScenarioArgs validate_args;
  auto* validate_cmd = app.add_subcommand("validate", "parse and validate a scenario");
  add_scenario_options(validate_cmd, validate_args, false);

  std::uint64_t seed = 42;
  std::size_t count = 1000;
  auto* check_cmd =
      app.add_subcommand("check-flux", "compare closed-form fluxes against quadrature");
  check_cmd->add_option("--seed", seed, "random seed");
  check_cmd->add_option("--count", count, "number of random instances");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(run_args);
    if (validate_cmd->parsed()) return cmd_validate(validate_args);
    if (check_cmd->parsed()) return cmd_check_flux(seed, count);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
