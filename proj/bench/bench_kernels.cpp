// OpenMP kernels against their serial references. Both sides of each pair
// return bit-identical results; see the unit tests.

#include <malloc.h>

#include <benchmark/benchmark.h>

#include "mixne/evaluation.hpp"
#include "mixne/mc_kernels.hpp"
#include "mixne/mlp.hpp"
#include "mixne/policy.hpp"
#include "mixne/rng.hpp"

using namespace mixne;

namespace {

void BM_TwoStepProduct_Parallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_two_step_product(1.0, 0.5, 0.1, n, 1).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TwoStepProduct_Serial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_two_step_product_serial(1.0, 0.5, 0.1, n, 1).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

TwoPlayerPolicy bench_policy() {
  Rng rng(3);
  return make_two_player_policy(1, 1, {16, 16}, Activation::Relu, MixingConfig{0.1}, 0.3, rng);
}

void BM_EvaluatePolicy_Parallel(benchmark::State& state) {
  const auto policy = bench_policy();
  const auto episodes = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_policy(policy, ToyMdpConfig{}, episodes, 5).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EvaluatePolicy_Serial(benchmark::State& state) {
  const auto policy = bench_policy();
  const auto episodes = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_policy_serial(policy, ToyMdpConfig{}, episodes, 5).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct BackwardInputs {
  MlpParams net;
  Eigen::MatrixXd x;
  Eigen::MatrixXd upstream;
};

BackwardInputs backward_inputs(Eigen::Index batch) {
  Rng rng(9);
  BackwardInputs in{MlpParams::random({2, 64, 64, 1}, Activation::Tanh, Activation::Identity, rng),
                    Eigen::MatrixXd(2, batch), Eigen::MatrixXd(1, batch)};
  for (auto& v : in.x.reshaped()) v = rng.uniform(-1, 1);
  for (auto& v : in.upstream.reshaped()) v = rng.uniform(-1, 1);
  return in;
}

void BM_MlpBackward_Batched(benchmark::State& state) {
  const auto in = backward_inputs(state.range(0));
  for (auto _ : state) {
    ForwardCache cache;
    mlp_forward_batch(in.net, in.x, &cache);
    benchmark::DoNotOptimize(mlp_backward_batch(in.net, cache, in.upstream).params.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MlpBackward_PerSample(benchmark::State& state) {
  const auto in = backward_inputs(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mlp_backward_batch_serial(in.net, in.x, in.upstream).data());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_TwoStepProduct_Parallel)->Arg(1 << 20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TwoStepProduct_Serial)->Arg(1 << 20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EvaluatePolicy_Parallel)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EvaluatePolicy_Serial)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MlpBackward_Batched)->Arg(128)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MlpBackward_PerSample)->Arg(128)->Unit(benchmark::kMicrosecond);

int main(int argc, char** argv) {
  mallopt(M_TRIM_THRESHOLD, 256 << 20);
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
