#pragma once

// Experiment runners behind the CLI. Every runner writes plain CSV/JSON into
// an output directory; rerunning with the same config and seeds reproduces
// the files byte for byte.
//
// Output layout
//   case study:  traces/<method>_<objective>_<init>[_seed<k>].csv, summary.json
//   toy runs:    run_records/seed_<k>.csv, checkpoints/seed_<k>/{agent.mlp,
//                adversary.mlp, manifest.json}, eval_report.csv, summary.json
//
// summary.json (toy runs and eval sweeps):
//   {"algorithm": ..., "trainer": "vpg"|"ddpg", "seeds": [...],
//    "rho": [{"rho": r, "mean": m, "std": s, "seeds": n}, ...]}
// summary.json (case study): {"runs": [{"method", "objective", "init", "seed",
//    "theta", "omega", "f", "theta_omega"}, ...], "groups": [{"method",
//    "objective", "init", "median_abs_theta_omega", "runs"}, ...]}

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixne/config.hpp"
#include "mixne/evaluation.hpp"
#include "mixne/policy.hpp"
#include "mixne/run_record.hpp"
#include "mixne/solvers.hpp"

namespace mixne {

struct EvalRow {
  double rho = 0.0;
  std::uint64_t seed = 0;
  double mean_return = 0.0;
  double std_return = 0.0;
  std::size_t episodes = 0;

  friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

struct EvalReport {
  std::vector<EvalRow> rows;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Columns: rho,seed,mean_return,std_return,episodes.
void write_eval_report_csv(const EvalReport& report, std::ostream& out);

struct RhoSummary {
  double rho = 0.0;
  double mean = 0.0;     ///< mean of per-seed means
  double std = 0.0;      ///< sample std across seeds; 0 with one seed
  std::size_t seeds = 0;

  friend bool operator==(const RhoSummary&, const RhoSummary&) = default;
};

/// Pools the rows of all reports and summarizes per rho, in ascending rho.
/// Rows are sorted by (rho, seed, mean) before reduction, so the result does
/// not depend on input order. Throws std::invalid_argument when the reports
/// do not share one rho grid or the input is empty.
std::vector<RhoSummary> aggregate(const std::vector<EvalReport>& reports);
nlohmann::json summary_to_json(const std::vector<RhoSummary>& summary);

/// Evaluates the agent on every grid point. Evaluation streams depend on
/// (seed, rho) only.
EvalReport evaluate_on_grid(const TwoPlayerPolicy& policy, const ToyMdpConfig& env_cfg,
                            const std::vector<double>& rho_grid, std::size_t episodes, std::uint64_t seed);

struct CaseStudyRun {
  std::string method;
  std::string objective;
  std::string init;
  std::optional<std::uint64_t> seed;
  SolverTrace trace;
};

/// All {gad, eg, mixedneld} x {trap_a, trap_b, ridge} x {far, near} runs; the
/// Langevin runs once per configured seed.
std::vector<CaseStudyRun> case_study_runs(const ExperimentConfig& cfg);
nlohmann::json case_study_summary(const std::vector<CaseStudyRun>& runs);
/// Runs the case study and writes traces and summary.json under out.
std::vector<CaseStudyRun> run_case_study(const ExperimentConfig& cfg, const std::filesystem::path& out);

struct TrainedSeed {
  std::uint64_t seed = 0;
  TwoPlayerPolicy policy;
  RunRecord record;
};

/// Trains the configured trainer (vpg_toy or ddpg_toy kind) on
/// cfg.env with rho = cfg.eval.train_rho. Seeds run in parallel; results come
/// back in cfg.seeds order.
std::vector<TrainedSeed> train_seeds(const ExperimentConfig& cfg);

struct ToyExperimentResult {
  std::vector<TrainedSeed> trained;
  EvalReport report;
  std::vector<RhoSummary> summary;
};

/// Train, checkpoint, evaluate over cfg.eval.rho_grid, write everything under out.
ToyExperimentResult run_toy_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out);

struct PolicyCheckpoint {
  TwoPlayerPolicy policy;
  std::uint64_t seed = 0;
  ToyMdpConfig env;
};

void save_policy_checkpoint(const std::filesystem::path& dir, const TwoPlayerPolicy& policy, std::uint64_t seed,
                            const ToyMdpConfig& env, std::string_view trainer, Algorithm algo);
PolicyCheckpoint load_policy_checkpoint(const std::filesystem::path& dir);

/// Evaluates every checkpoints/seed_* directory under checkpoint_root over
/// cfg.eval.rho_grid and writes eval_report.csv and summary.json under out.
EvalReport run_eval_sweep(const ExperimentConfig& cfg, const std::filesystem::path& checkpoint_root,
                          const std::filesystem::path& out);

}  // namespace mixne
