#include "mixne/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <stdexcept>

namespace mixne {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::string_view section, std::initializer_list<std::string_view> keys) {
  if (!obj.is_object()) throw std::invalid_argument(std::string(section) + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw std::invalid_argument("unknown key '" + key + "' in " + std::string(section));
    }
  }
}

template <class T>
void read(const json& obj, const char* key, T& field) {
  if (auto it = obj.find(key); it != obj.end()) field = it->get<T>();
}

void read_activation(const json& obj, const char* key, Activation& field) {
  if (auto it = obj.find(key); it != obj.end()) field = activation_from_string(it->get<std::string>());
}

SaddlePoint2D point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("points are [theta, omega] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json point_to_json(const SaddlePoint2D& p) { return json::array({p.theta, p.omega}); }

CaseStudyConfig case_study_from_json(const json& j) {
  reject_unknown(j, "case_study",
                 {"step_size", "thermal_noise", "warmup_steps", "damping", "ld_outer_iters", "discrete_iters",
                  "far_init", "near_init"});
  CaseStudyConfig c;
  read(j, "step_size", c.step_size);
  read(j, "thermal_noise", c.thermal_noise);
  read(j, "warmup_steps", c.warmup_steps);
  read(j, "damping", c.damping);
  read(j, "ld_outer_iters", c.ld_outer_iters);
  read(j, "discrete_iters", c.discrete_iters);
  if (j.contains("far_init")) c.far_init = point_from_json(j["far_init"]);
  if (j.contains("near_init")) c.near_init = point_from_json(j["near_init"]);
  return c;
}

VpgConfig vpg_from_json(const json& j) {
  reject_unknown(j, "vpg",
                 {"discount", "trajectories_per_step", "rms_decay", "rms_floor", "learning_rate", "damping",
                  "inner_steps", "thermal_noise_init", "thermal_decay", "total_steps", "policy_std", "hidden",
                  "hidden_activation"});
  VpgConfig c;
  read(j, "discount", c.discount);
  read(j, "trajectories_per_step", c.trajectories_per_step);
  read(j, "rms_decay", c.rms_decay);
  read(j, "rms_floor", c.rms_floor);
  read(j, "learning_rate", c.learning_rate);
  read(j, "damping", c.damping);
  read(j, "inner_steps", c.inner_steps);
  read(j, "thermal_noise_init", c.thermal_noise_init);
  read(j, "thermal_decay", c.thermal_decay);
  read(j, "total_steps", c.total_steps);
  read(j, "policy_std", c.policy_std);
  read(j, "hidden", c.hidden);
  read_activation(j, "hidden_activation", c.hidden_activation);
  return c;
}

DdpgConfig ddpg_from_json(const json& j) {
  reject_unknown(j, "ddpg",
                 {"actor_hidden", "critic_hidden", "hidden_activation", "critic_lr", "soft_update", "batch_size",
                  "discount", "damping", "action_noise", "thermal_noise_init", "thermal_decay", "warmup_cap",
                  "warmup_growth", "rms_decay", "rms_floor", "actor_lr", "buffer_capacity", "total_steps",
                  "heldout_size"});
  DdpgConfig c;
  read(j, "actor_hidden", c.actor_hidden);
  read(j, "critic_hidden", c.critic_hidden);
  read_activation(j, "hidden_activation", c.hidden_activation);
  read(j, "critic_lr", c.critic_lr);
  read(j, "soft_update", c.soft_update);
  read(j, "batch_size", c.batch_size);
  read(j, "discount", c.discount);
  read(j, "damping", c.damping);
  read(j, "action_noise", c.action_noise);
  read(j, "thermal_noise_init", c.thermal_noise_init);
  read(j, "thermal_decay", c.thermal_decay);
  read(j, "warmup_cap", c.warmup_cap);
  read(j, "warmup_growth", c.warmup_growth);
  read(j, "rms_decay", c.rms_decay);
  read(j, "rms_floor", c.rms_floor);
  read(j, "actor_lr", c.actor_lr);
  read(j, "buffer_capacity", c.buffer_capacity);
  read(j, "total_steps", c.total_steps);
  read(j, "heldout_size", c.heldout_size);
  return c;
}

EvalConfig eval_from_json(const json& j) {
  reject_unknown(j, "eval", {"rho_grid", "episodes", "train_rho", "checkpoint_dir"});
  EvalConfig c;
  read(j, "rho_grid", c.rho_grid);
  read(j, "episodes", c.episodes);
  read(j, "train_rho", c.train_rho);
  read(j, "checkpoint_dir", c.checkpoint_dir);
  return c;
}

json hidden_json(const std::vector<int>& h) { return json(h); }

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::SppCaseStudy: return "spp_case_study";
    case ExperimentKind::VpgToy: return "vpg_toy";
    case ExperimentKind::DdpgToy: return "ddpg_toy";
    case ExperimentKind::EvalSweep: return "eval_sweep";
  }
  throw std::invalid_argument("unknown experiment kind");
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
  for (auto k : {ExperimentKind::SppCaseStudy, ExperimentKind::VpgToy, ExperimentKind::DdpgToy,
                 ExperimentKind::EvalSweep}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown experiment kind: " + std::string(name));
}

std::string_view to_string(Algorithm algo) {
  return algo == Algorithm::MixedNeLd ? "mixedneld" : "gad";
}

Algorithm algorithm_from_string(std::string_view name) {
  if (name == "mixedneld") return Algorithm::MixedNeLd;
  if (name == "gad") return Algorithm::Gad;
  throw std::invalid_argument("unknown algorithm: " + std::string(name));
}

void CaseStudyConfig::validate() const {
  if (!(step_size > 0.0)) throw std::invalid_argument("case_study.step_size must be positive");
  if (!(thermal_noise >= 0.0)) throw std::invalid_argument("case_study.thermal_noise must be non-negative");
  if (warmup_steps == 0) throw std::invalid_argument("case_study.warmup_steps must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("case_study.damping must lie in (0, 1]");
  BoxDomain box;
  if (!box.contains(far_init) || !box.contains(near_init)) {
    throw std::invalid_argument("case_study initial points must lie in the box");
  }
}

void EvalConfig::validate() const {
  if (rho_grid.empty()) throw std::invalid_argument("eval.rho_grid must be nonempty");
  for (double r : rho_grid) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("eval.rho_grid entries must lie in [0, 1]");
  }
  if (episodes == 0) throw std::invalid_argument("eval.episodes must be positive");
  if (!(train_rho >= 0.0 && train_rho <= 1.0)) throw std::invalid_argument("eval.train_rho must lie in [0, 1]");
}

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw std::invalid_argument("seeds must be nonempty");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw std::invalid_argument("seeds must be distinct");
  }
  mixing.validate();
  env.validate();
  case_study.validate();
  vpg.validate();
  ddpg.validate();
  eval.validate();
}

json env_to_json(const ToyMdpConfig& env) {
  json j{{"rho", env.rho},           {"state_lo", env.state_lo},   {"state_hi", env.state_hi},
         {"action_lo", env.action_lo}, {"action_hi", env.action_hi}, {"horizon", env.horizon},
         {"discount", env.discount}};
  j["fixed_start"] = env.fixed_start ? json(*env.fixed_start) : json(nullptr);
  return j;
}

ToyMdpConfig env_from_json(const json& j) {
  reject_unknown(j, "env", {"rho", "state_lo", "state_hi", "action_lo", "action_hi", "horizon", "discount",
                            "fixed_start"});
  ToyMdpConfig c;
  read(j, "rho", c.rho);
  read(j, "state_lo", c.state_lo);
  read(j, "state_hi", c.state_hi);
  read(j, "action_lo", c.action_lo);
  read(j, "action_hi", c.action_hi);
  read(j, "horizon", c.horizon);
  read(j, "discount", c.discount);
  if (auto it = j.find("fixed_start"); it != j.end() && !it->is_null()) c.fixed_start = it->get<double>();
  return c;
}

ExperimentConfig config_from_json(const json& j) {
  try {
    reject_unknown(j, "config", {"kind", "algorithm", "seeds", "output_dir", "mixing", "env", "case_study", "vpg",
                                 "ddpg", "eval"});
    ExperimentConfig c;
    if (j.contains("kind")) c.kind = experiment_kind_from_string(j["kind"].get<std::string>());
    if (j.contains("algorithm")) c.algorithm = algorithm_from_string(j["algorithm"].get<std::string>());
    read(j, "seeds", c.seeds);
    read(j, "output_dir", c.output_dir);
    if (j.contains("mixing")) {
      reject_unknown(j["mixing"], "mixing", {"delta"});
      read(j["mixing"], "delta", c.mixing.delta);
    }
    if (j.contains("env")) c.env = env_from_json(j["env"]);
    if (j.contains("case_study")) c.case_study = case_study_from_json(j["case_study"]);
    if (j.contains("vpg")) c.vpg = vpg_from_json(j["vpg"]);
    if (j.contains("ddpg")) c.ddpg = ddpg_from_json(j["ddpg"]);
    if (j.contains("eval")) c.eval = eval_from_json(j["eval"]);
    c.ddpg.mixing = c.mixing;
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

json config_to_json(const ExperimentConfig& c) {
  const auto& cs = c.case_study;
  const auto& v = c.vpg;
  const auto& d = c.ddpg;
  return json{
      {"kind", to_string(c.kind)},
      {"algorithm", to_string(c.algorithm)},
      {"seeds", c.seeds},
      {"output_dir", c.output_dir},
      {"mixing", {{"delta", c.mixing.delta}}},
      {"env", env_to_json(c.env)},
      {"case_study",
       {{"step_size", cs.step_size},
        {"thermal_noise", cs.thermal_noise},
        {"warmup_steps", cs.warmup_steps},
        {"damping", cs.damping},
        {"ld_outer_iters", cs.ld_outer_iters},
        {"discrete_iters", cs.discrete_iters},
        {"far_init", point_to_json(cs.far_init)},
        {"near_init", point_to_json(cs.near_init)}}},
      {"vpg",
       {{"discount", v.discount},
        {"trajectories_per_step", v.trajectories_per_step},
        {"rms_decay", v.rms_decay},
        {"rms_floor", v.rms_floor},
        {"learning_rate", v.learning_rate},
        {"damping", v.damping},
        {"inner_steps", v.inner_steps},
        {"thermal_noise_init", v.thermal_noise_init},
        {"thermal_decay", v.thermal_decay},
        {"total_steps", v.total_steps},
        {"policy_std", v.policy_std},
        {"hidden", hidden_json(v.hidden)},
        {"hidden_activation", to_string(v.hidden_activation)}}},
      {"ddpg",
       {{"actor_hidden", hidden_json(d.actor_hidden)},
        {"critic_hidden", hidden_json(d.critic_hidden)},
        {"hidden_activation", to_string(d.hidden_activation)},
        {"critic_lr", d.critic_lr},
        {"soft_update", d.soft_update},
        {"batch_size", d.batch_size},
        {"discount", d.discount},
        {"damping", d.damping},
        {"action_noise", d.action_noise},
        {"thermal_noise_init", d.thermal_noise_init},
        {"thermal_decay", d.thermal_decay},
        {"warmup_cap", d.warmup_cap},
        {"warmup_growth", d.warmup_growth},
        {"rms_decay", d.rms_decay},
        {"rms_floor", d.rms_floor},
        {"actor_lr", d.actor_lr},
        {"buffer_capacity", d.buffer_capacity},
        {"total_steps", d.total_steps},
        {"heldout_size", d.heldout_size}}},
      {"eval",
       {{"rho_grid", c.eval.rho_grid},
        {"episodes", c.eval.episodes},
        {"train_rho", c.eval.train_rho},
        {"checkpoint_dir", c.eval.checkpoint_dir}}},
  };
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace mixne
