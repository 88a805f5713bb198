// Command-line front end: case study, toy training, evaluation sweeps and the
// self-check suite.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <malloc.h>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mixne/config.hpp"
#include "mixne/harness.hpp"
#include "mixne/verify.hpp"

namespace fs = std::filesystem;
using namespace mixne;

namespace {

struct CommonOptions {
  std::string config;
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::vector<double> rho_grid;
  std::string algo;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> episodes;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_algo) {
  cmd->add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seeds, "seed (repeatable)");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--rho-grid", o.rho_grid, "evaluation rho values, comma separated")->delimiter(',');
  cmd->add_option("--episodes", o.episodes, "evaluation episodes per (seed, rho)");
  if (with_algo) {
    cmd->add_option("--algo", o.algo, "training algorithm")->check(CLI::IsMember({"mixedneld", "gad"}));
    cmd->add_option("--steps", o.steps, "training budget override");
  }
}

ExperimentConfig resolve(const CommonOptions& o, ExperimentKind kind) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (!o.config.empty() && cfg.kind != kind && kind != ExperimentKind::EvalSweep) {
    std::cerr << fmt::format("note: config kind {} overridden by subcommand ({})\n", to_string(cfg.kind),
                             to_string(kind));
  }
  cfg.kind = kind;
  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (!o.rho_grid.empty()) cfg.eval.rho_grid = o.rho_grid;
  if (o.episodes) cfg.eval.episodes = *o.episodes;
  if (!o.algo.empty()) cfg.algorithm = algorithm_from_string(o.algo);
  if (o.steps) {
    cfg.vpg.total_steps = *o.steps;
    cfg.ddpg.total_steps = *o.steps;
  }
  cfg.ddpg.mixing = cfg.mixing;
  cfg.validate();
  return cfg;
}

void print_summary(const std::vector<RhoSummary>& summary) {
  std::cout << "rho     mean        std        seeds\n";
  for (const auto& s : summary) std::cout << fmt::format("{:<7.3g} {:<11.4f} {:<10.4f} {}\n", s.rho, s.mean, s.std, s.seeds);
}

int cmd_spp(const CommonOptions& o) {
  const auto cfg = resolve(o, ExperimentKind::SppCaseStudy);
  const auto runs = run_case_study(cfg, cfg.output_dir);
  const auto summary = case_study_summary(runs);
  for (const auto& g : summary["groups"]) {
    std::cout << fmt::format("{:<10} {:<7} {:<5} median |theta omega| = {:.4f} ({} runs)\n",
                             g["method"].get<std::string>(), g["objective"].get<std::string>(),
                             g["init"].get<std::string>(), g["median_abs_theta_omega"].get<double>(),
                             g["runs"].get<std::size_t>());
  }
  std::cout << "wrote " << cfg.output_dir << '\n';
  return 0;
}

int cmd_toy(const CommonOptions& o, ExperimentKind kind) {
  const auto cfg = resolve(o, kind);
  const auto result = run_toy_experiment(cfg, cfg.output_dir);
  std::cout << fmt::format("{} {} trained on {} seed(s) at rho = {}\n", to_string(kind), to_string(cfg.algorithm),
                           cfg.seeds.size(), cfg.eval.train_rho);
  print_summary(result.summary);
  std::cout << "wrote " << cfg.output_dir << '\n';
  return 0;
}

int cmd_eval(const CommonOptions& o, const std::string& checkpoints) {
  auto cfg = resolve(o, ExperimentKind::EvalSweep);
  const fs::path root = checkpoints.empty() ? fs::path(cfg.eval.checkpoint_dir) : fs::path(checkpoints);
  if (root.empty()) throw std::invalid_argument("eval needs --checkpoints or eval.checkpoint_dir");
  const auto report = run_eval_sweep(cfg, root, cfg.output_dir);
  print_summary(aggregate({report}));
  std::cout << "wrote " << cfg.output_dir << '\n';
  return 0;
}

int cmd_sweep(const CommonOptions& o) {
  if (o.config.empty()) throw std::invalid_argument("sweep needs --config");
  const auto base = load_config(o.config);
  switch (base.kind) {
    case ExperimentKind::SppCaseStudy:
      return cmd_spp(o);
    case ExperimentKind::EvalSweep:
      return cmd_eval(o, {});
    case ExperimentKind::VpgToy:
    case ExperimentKind::DdpgToy:
      break;
  }
  if (!o.algo.empty()) return cmd_toy(o, base.kind);
  // Both algorithms side by side under <out>/<algo>.
  for (const char* algo : {"mixedneld", "gad"}) {
    CommonOptions sub = o;
    sub.algo = algo;
    const fs::path root = o.out.empty() ? fs::path(base.output_dir) : fs::path(o.out);
    sub.out = (root / algo).string();
    cmd_toy(sub, base.kind);
  }
  return 0;
}

int cmd_verify() {
  bool all = true;
  for (const auto& c : run_verification()) {
    std::cout << fmt::format("[{}] {}: {}\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
    all = all && c.passed;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  // The trainers free and reallocate batch-sized temporaries every update;
  // without a high trim threshold glibc hands the heap top back to the
  // kernel each time and page faults dominate the run time.
  mallopt(M_TRIM_THRESHOLD, 256 << 20);
  CLI::App app{"mixed-equilibrium Langevin solvers and robust RL trainers"};
  app.require_subcommand(1);

  CommonOptions spp_o, vpg_o, ddpg_o, eval_o, sweep_o;
  std::string checkpoints;
  auto* spp = app.add_subcommand("spp", "two-player polynomial case study");
  add_common(spp, spp_o, false);
  auto* vpg = app.add_subcommand("vpg", "train two-player VPG on the toy MDP and evaluate over rho");
  add_common(vpg, vpg_o, true);
  auto* ddpg = app.add_subcommand("ddpg", "train two-player DDPG on the toy MDP and evaluate over rho");
  add_common(ddpg, ddpg_o, true);
  auto* eval = app.add_subcommand("eval", "evaluate saved checkpoints over rho");
  add_common(eval, eval_o, false);
  eval->add_option("--checkpoints", checkpoints, "directory of seed_* checkpoints");
  auto* sweep = app.add_subcommand("sweep", "run whatever the config describes");
  add_common(sweep, sweep_o, true);
  auto* verify = app.add_subcommand("verify", "run the identity and invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (spp->parsed()) return cmd_spp(spp_o);
    if (vpg->parsed()) return cmd_toy(vpg_o, ExperimentKind::VpgToy);
    if (ddpg->parsed()) return cmd_toy(ddpg_o, ExperimentKind::DdpgToy);
    if (eval->parsed()) return cmd_eval(eval_o, checkpoints);
    if (sweep->parsed()) return cmd_sweep(sweep_o);
    if (verify->parsed()) return cmd_verify();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
