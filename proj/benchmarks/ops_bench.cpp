#include <benchmark/benchmark.h>

#include "avocast/ops.hpp"
#include "avocast/rng.hpp"

using namespace avocast;

namespace {

TensorPtr random_tensor(Rng& rng, std::vector<std::int64_t> shape) {
  std::int64_t n = 1;
  for (std::int64_t e : shape) n *= e;
  std::vector<double> data(static_cast<std::size_t>(n));
  for (double& v : data) v = rng.uniform(-1.0, 1.0);
  return Tensor::create(std::move(shape), std::move(data));
}

}  // namespace

static void BM_Matmul(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  Rng rng(1);
  TensorPtr a = random_tensor(rng, {n, n});
  TensorPtr b = random_tensor(rng, {n, n});
  for (auto _ : state) {
    Tape tape;
    benchmark::DoNotOptimize(matmul(tape, a, b));
  }
}
BENCHMARK(BM_Matmul)->Arg(16)->Arg(64);

static void BM_CausalDilatedConv(benchmark::State& state) {
  const std::int64_t t_len = state.range(0);
  Rng rng(2);
  TensorPtr x = random_tensor(rng, {16, t_len});
  TensorPtr kernel = random_tensor(rng, {16, 16, 3});
  for (auto _ : state) {
    Tape tape;
    benchmark::DoNotOptimize(causal_dilated_conv1d(tape, x, kernel, 4));
  }
}
BENCHMARK(BM_CausalDilatedConv)->Arg(12)->Arg(64);

static void BM_Softmax(benchmark::State& state) {
  Rng rng(3);
  TensorPtr x = random_tensor(rng, {state.range(0)});
  for (auto _ : state) {
    Tape tape;
    benchmark::DoNotOptimize(softmax(tape, x));
  }
}
BENCHMARK(BM_Softmax)->Arg(12)->Arg(256);

BENCHMARK_MAIN();
