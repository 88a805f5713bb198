#include "mixne/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "mixne/checkpoint.hpp"
#include "mixne/ddpg.hpp"
#include "mixne/rng.hpp"
#include "mixne/vpg.hpp"

namespace mixne {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kEvalStream = 0x65'76'61'6c;  // "eval"

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string trace_name(const CaseStudyRun& r) {
  std::string name = r.method + "_" + r.objective + "_" + r.init;
  if (r.seed) name += fmt::format("_seed{}", *r.seed);
  return name + ".csv";
}

std::string_view trainer_name(ExperimentKind kind) {
  if (kind == ExperimentKind::VpgToy) return "vpg";
  if (kind == ExperimentKind::DdpgToy) return "ddpg";
  throw std::invalid_argument("train_seeds needs a vpg_toy or ddpg_toy config");
}

TrainedSeed train_one(const ExperimentConfig& cfg, const ToyMdpConfig& env, std::uint64_t seed) {
  if (cfg.kind == ExperimentKind::VpgToy) {
    const TwoPlayerPolicy init = initial_vpg_policy(cfg.vpg, cfg.mixing, seed);
    auto r = cfg.algorithm == Algorithm::MixedNeLd ? vpg_mixed_ne_ld_train(env, init, cfg.vpg, seed)
                                                   : vpg_gad_train(env, init, cfg.vpg, seed);
    return {seed, std::move(r.policy), std::move(r.record)};
  }
  DdpgConfig dcfg = cfg.ddpg;
  dcfg.mixing = cfg.mixing;
  auto r = cfg.algorithm == Algorithm::MixedNeLd ? ddpg_mixed_ne_ld_train(env, dcfg, seed)
                                                 : ddpg_gad_train(env, dcfg, seed);
  return {seed, std::move(r.policy), std::move(r.record)};
}

void write_summary(const fs::path& out, std::string_view algorithm, std::string_view trainer,
                   const std::vector<std::uint64_t>& seeds, const std::vector<RhoSummary>& summary) {
  json j{{"algorithm", algorithm},
         {"trainer", trainer},
         {"seeds", seeds},
         {"rho", summary_to_json(summary)}};
  write_json(out / "summary.json", j);
}

}  // namespace

void write_eval_report_csv(const EvalReport& report, std::ostream& out) {
  out << "rho,seed,mean_return,std_return,episodes\n";
  for (const auto& r : report.rows) {
    out << fmt::format("{:.17g},{},{:.17g},{:.17g},{}\n", r.rho, r.seed, r.mean_return, r.std_return,
                       r.episodes);
  }
}

std::vector<RhoSummary> aggregate(const std::vector<EvalReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("aggregate needs at least one report");
  const auto grid_of = [](const EvalReport& r) {
    std::vector<double> g;
    for (const auto& row : r.rows) g.push_back(row.rho);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
  };
  const auto grid = grid_of(reports.front());
  std::vector<EvalRow> rows;
  for (const auto& r : reports) {
    if (grid_of(r) != grid) throw std::invalid_argument("reports do not share one rho grid");
    rows.insert(rows.end(), r.rows.begin(), r.rows.end());
  }
  std::sort(rows.begin(), rows.end(), [](const EvalRow& a, const EvalRow& b) {
    if (a.rho != b.rho) return a.rho < b.rho;
    if (a.seed != b.seed) return a.seed < b.seed;
    return a.mean_return < b.mean_return;
  });

  std::vector<RhoSummary> out;
  for (std::size_t i = 0; i < rows.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < rows.size() && rows[j].rho == rows[i].rho) sum += rows[j++].mean_return;
    const std::size_t n = j - i;
    RhoSummary s{rows[i].rho, sum / static_cast<double>(n), 0.0, n};
    if (n > 1) {
      double ss = 0.0;
      for (std::size_t k = i; k < j; ++k) ss += (rows[k].mean_return - s.mean) * (rows[k].mean_return - s.mean);
      s.std = std::sqrt(ss / static_cast<double>(n - 1));
    }
    out.push_back(s);
    i = j;
  }
  return out;
}

json summary_to_json(const std::vector<RhoSummary>& summary) {
  json arr = json::array();
  for (const auto& s : summary) arr.push_back({{"rho", s.rho}, {"mean", s.mean}, {"std", s.std}, {"seeds", s.seeds}});
  return arr;
}

EvalReport evaluate_on_grid(const TwoPlayerPolicy& policy, const ToyMdpConfig& env_cfg,
                            const std::vector<double>& rho_grid, std::size_t episodes, std::uint64_t seed) {
  EvalReport report;
  for (double rho : rho_grid) {
    ToyMdpConfig env = env_cfg;
    env.rho = rho;
    const std::uint64_t eval_seed = derive_seed(derive_seed(seed, kEvalStream), std::bit_cast<std::uint64_t>(rho));
    const auto stats = evaluate_policy(policy, env, episodes, eval_seed);
    report.rows.push_back({rho, seed, stats.mean, stats.std, stats.episodes});
  }
  return report;
}

std::vector<CaseStudyRun> case_study_runs(const ExperimentConfig& cfg) {
  const auto& cs = cfg.case_study;
  cs.validate();
  const auto sched = LdSchedule::constant(cs.step_size, cs.thermal_noise, cs.warmup_steps, cs.damping);
  std::vector<CaseStudyRun> runs;
  for (auto kind : {ObjectiveKind::TrapA, ObjectiveKind::TrapB, ObjectiveKind::Ridge}) {
    const SaddleObjective obj{kind, BoxDomain{}};
    const std::string objective(to_string(kind));
    for (const auto& [init_name, init] : {std::pair{"far", cs.far_init}, std::pair{"near", cs.near_init}}) {
      runs.push_back({"gad", objective, init_name, std::nullopt, gad_run(obj, init, cs.step_size, cs.discrete_iters)});
      runs.push_back({"eg", objective, init_name, std::nullopt, eg_run(obj, init, cs.step_size, cs.discrete_iters)});
      for (auto seed : cfg.seeds) {
        runs.push_back({"mixedneld", objective, init_name, seed,
                        mixed_ne_ld_run(obj, init, sched, cs.ld_outer_iters, seed)});
      }
    }
  }
  return runs;
}

json case_study_summary(const std::vector<CaseStudyRun>& runs) {
  json run_arr = json::array();
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> groups;
  std::vector<std::tuple<std::string, std::string, std::string>> order;
  for (const auto& r : runs) {
    const auto& p = r.trace.last();
    const double tw = p.theta * p.omega;
    run_arr.push_back({{"method", r.method},
                       {"objective", r.objective},
                       {"init", r.init},
                       {"seed", r.seed ? json(*r.seed) : json(nullptr)},
                       {"theta", p.theta},
                       {"omega", p.omega},
                       {"f", r.trace.values.back()},
                       {"theta_omega", tw}});
    auto key = std::make_tuple(r.method, r.objective, r.init);
    if (!groups.contains(key)) order.push_back(key);
    groups[key].push_back(std::abs(tw));
  }
  json group_arr = json::array();
  for (const auto& key : order) {
    const auto& v = groups[key];
    group_arr.push_back({{"method", std::get<0>(key)},
                         {"objective", std::get<1>(key)},
                         {"init", std::get<2>(key)},
                         {"median_abs_theta_omega", median(v)},
                         {"runs", v.size()}});
  }
  return {{"runs", run_arr}, {"groups", group_arr}};
}

std::vector<CaseStudyRun> run_case_study(const ExperimentConfig& cfg, const fs::path& out) {
  auto runs = case_study_runs(cfg);
  for (const auto& r : runs) {
    auto f = open_out(out / "traces" / trace_name(r));
    write_trace_csv(r.trace, f);
  }
  write_json(out / "summary.json", case_study_summary(runs));
  return runs;
}

std::vector<TrainedSeed> train_seeds(const ExperimentConfig& cfg) {
  trainer_name(cfg.kind);
  cfg.validate();
  ToyMdpConfig env = cfg.env;
  env.rho = cfg.eval.train_rho;
  std::vector<TrainedSeed> out(cfg.seeds.size());
  std::exception_ptr failure;
  const auto n = static_cast<long long>(cfg.seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = train_one(cfg, env, cfg.seeds[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical(mixne_train_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

void save_policy_checkpoint(const fs::path& dir, const TwoPlayerPolicy& policy, std::uint64_t seed,
                            const ToyMdpConfig& env, std::string_view trainer, Algorithm algo) {
  fs::create_directories(dir);
  save_mlp_file(policy.agent, (dir / "agent.mlp").string());
  save_mlp_file(policy.adversary, (dir / "adversary.mlp").string());
  write_json(dir / "manifest.json", {{"trainer", trainer},
                                     {"algorithm", to_string(algo)},
                                     {"seed", seed},
                                     {"delta", policy.mixing.delta},
                                     {"policy_std", policy.policy_std},
                                     {"env", env_to_json(env)},
                                     {"agent", "agent.mlp"},
                                     {"adversary", "adversary.mlp"}});
}

PolicyCheckpoint load_policy_checkpoint(const fs::path& dir) {
  try {
    const json m = read_json(dir / "manifest.json");
    PolicyCheckpoint c;
    c.seed = m.at("seed").get<std::uint64_t>();
    c.env = env_from_json(m.at("env"));
    c.policy.agent = load_mlp_file((dir / m.at("agent").get<std::string>()).string());
    c.policy.adversary = load_mlp_file((dir / m.at("adversary").get<std::string>()).string());
    c.policy.mixing.delta = m.at("delta").get<double>();
    c.policy.mixing.validate();
    c.policy.policy_std = m.at("policy_std").get<double>();
    return c;
  } catch (const json::exception& e) {
    throw std::runtime_error("bad checkpoint manifest in " + dir.string() + ": " + e.what());
  }
}

ToyExperimentResult run_toy_experiment(const ExperimentConfig& cfg, const fs::path& out) {
  const auto trainer = trainer_name(cfg.kind);
  ToyExperimentResult result;
  result.trained = train_seeds(cfg);
  ToyMdpConfig train_env = cfg.env;
  train_env.rho = cfg.eval.train_rho;

  write_json(out / "config.json", config_to_json(cfg));
  std::vector<EvalReport> per_seed;
  for (const auto& t : result.trained) {
    auto rec = open_out(out / "run_records" / fmt::format("seed_{}.csv", t.seed));
    write_run_record_csv(t.record, rec);
    save_policy_checkpoint(out / "checkpoints" / fmt::format("seed_{}", t.seed), t.policy, t.seed, train_env,
                           trainer, cfg.algorithm);
    per_seed.push_back(evaluate_on_grid(t.policy, cfg.env, cfg.eval.rho_grid, cfg.eval.episodes, t.seed));
    result.report.rows.insert(result.report.rows.end(), per_seed.back().rows.begin(), per_seed.back().rows.end());
  }
  auto csv = open_out(out / "eval_report.csv");
  write_eval_report_csv(result.report, csv);
  result.summary = aggregate(per_seed);
  write_summary(out, to_string(cfg.algorithm), trainer, cfg.seeds, result.summary);
  return result;
}

EvalReport run_eval_sweep(const ExperimentConfig& cfg, const fs::path& checkpoint_root, const fs::path& out) {
  cfg.eval.validate();
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(checkpoint_root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) dirs.push_back(entry.path());
  }
  if (dirs.empty()) throw std::runtime_error("no checkpoints under " + checkpoint_root.string());

  std::vector<PolicyCheckpoint> checkpoints;
  for (const auto& d : dirs) checkpoints.push_back(load_policy_checkpoint(d));
  std::sort(checkpoints.begin(), checkpoints.end(),
            [](const PolicyCheckpoint& a, const PolicyCheckpoint& b) { return a.seed < b.seed; });

  EvalReport report;
  std::vector<EvalReport> per_seed;
  std::vector<std::uint64_t> seeds;
  std::string trainer = "unknown";
  std::string algorithm = "unknown";
  for (const auto& c : checkpoints) {
    per_seed.push_back(evaluate_on_grid(c.policy, c.env, cfg.eval.rho_grid, cfg.eval.episodes, c.seed));
    report.rows.insert(report.rows.end(), per_seed.back().rows.begin(), per_seed.back().rows.end());
    seeds.push_back(c.seed);
  }
  const json manifest = read_json(dirs.front() / "manifest.json");
  trainer = manifest.value("trainer", trainer);
  algorithm = manifest.value("algorithm", algorithm);
  auto csv = open_out(out / "eval_report.csv");
  write_eval_report_csv(report, csv);
  write_summary(out, algorithm, trainer, seeds, aggregate(per_seed));
  return report;
}

}  // namespace mixne
