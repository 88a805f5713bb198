#pragma once

// Experiment configuration loaded from a JSON file. Every section is optional
// and falls back to the defaults below; unknown keys are rejected.
//
//   {
//     "kind": "spp_case_study" | "vpg_toy" | "ddpg_toy" | "eval_sweep",
//     "algorithm": "mixedneld" | "gad",
//     "seeds": [0, 1, 2, 3, 4],
//     "output_dir": "runs/example",
//     "mixing": {"delta": 0.1},
//     "env": {"rho": 0.2, "horizon": 500, "discount": 0.99, "fixed_start": null},
//     "case_study": {...}, "vpg": {...}, "ddpg": {...}, "eval": {...}
//   }
//
// Key names inside the sections match the struct field names.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mixne/ddpg.hpp"
#include "mixne/saddle.hpp"
#include "mixne/toy_mdp.hpp"
#include "mixne/vpg.hpp"

namespace mixne {

enum class ExperimentKind { SppCaseStudy, VpgToy, DdpgToy, EvalSweep };
enum class Algorithm { MixedNeLd, Gad };

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(std::string_view name);
std::string_view to_string(Algorithm algo);
Algorithm algorithm_from_string(std::string_view name);

struct CaseStudyConfig {
  double step_size = 0.1;
  double thermal_noise = 0.01;
  std::size_t warmup_steps = 50;
  double damping = 0.5;
  std::size_t ld_outer_iters = 200;
  std::size_t discrete_iters = 5000;
  SaddlePoint2D far_init{1.5, 1.5};
  SaddlePoint2D near_init{0.1, 0.1};

  void validate() const;
};

struct EvalConfig {
  std::vector<double> rho_grid{0.0, 0.1, 0.2, 0.3, 0.4};
  std::size_t episodes = 20;
  double train_rho = 0.2;
  /// eval_sweep only: directory holding per-seed checkpoints.
  std::string checkpoint_dir;

  void validate() const;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::SppCaseStudy;
  Algorithm algorithm = Algorithm::MixedNeLd;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::string output_dir = "runs";
  MixingConfig mixing{};
  ToyMdpConfig env{};
  CaseStudyConfig case_study{};
  VpgConfig vpg{};
  DdpgConfig ddpg{};
  EvalConfig eval{};

  /// Checks every section plus: seeds nonempty and distinct.
  void validate() const;
};

/// Throws std::invalid_argument on unknown keys, wrong types or invalid values.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json env_to_json(const ToyMdpConfig& env);
ToyMdpConfig env_from_json(const nlohmann::json& j);

}  // namespace mixne
