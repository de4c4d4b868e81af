#include <benchmark/benchmark.h>

#include "marlx/numkit/mlp.hpp"
#include "marlx/numkit/optimizer.hpp"
#include "marlx/numkit/rng.hpp"
#include "marlx/numkit/sherman.hpp"

using namespace marlx::numkit;

static void BM_mlp_forward_single(benchmark::State& state) {
  SeededRng rng(1);
  Mlp net = Mlp::random({40, 64, 64, 32}, rng);
  std::vector<double> x(40);
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  for (auto _ : state) {
    auto y = net.forward(x);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_mlp_forward_single);

static void BM_mlp_forward_batch(benchmark::State& state) {
  SeededRng rng(2);
  Mlp net = Mlp::random({40, 64, 64, 32}, rng);
  Matrix x(state.range(0), 40);
  for (double& v : x.data) v = rng.uniform(-1.0, 1.0);
  for (auto _ : state) {
    Matrix y = net.forward_batch(x);
    benchmark::DoNotOptimize(y.data.data());
  }
}
BENCHMARK(BM_mlp_forward_batch)->Arg(32)->Arg(256)->Arg(2048);

static void BM_mlp_train_step(benchmark::State& state) {
  SeededRng rng(3);
  Mlp net = Mlp::random({40, 64, 64, 32}, rng);
  OptimizerState opt = OptimizerState::for_net(net, OptKind::adam);
  Matrix x(state.range(0), 40);
  for (double& v : x.data) v = rng.uniform(-1.0, 1.0);
  for (auto _ : state) {
    BatchCache cache;
    Matrix y = net.forward_batch(x, &cache);
    ParamTensors grads = ParamTensors::zeros_like(net);
    net.backward_batch(cache, y, &grads);
    optimizer_step(opt, net, grads, 1e-6);
    benchmark::DoNotOptimize(net.weight(0).data.data());
  }
}
BENCHMARK(BM_mlp_train_step)->Arg(32)->Arg(256);

static void BM_sherman_morrison(benchmark::State& state) {
  const std::size_t dim = state.range(0);
  SeededRng rng(4);
  Matrix c_inv = Matrix::identity(dim, 10.0);
  std::vector<double> v(dim), scratch;
  for (double& x : v) x = rng.uniform(-0.1, 0.1);
  for (auto _ : state) {
    sherman_morrison_update_inplace(c_inv, v.data(), dim, scratch);
    benchmark::DoNotOptimize(c_inv.data.data());
  }
}
BENCHMARK(BM_sherman_morrison)->Arg(16)->Arg(32)->Arg(64);

static void BM_matmul_nt(benchmark::State& state) {
  const std::size_t n = state.range(0);
  SeededRng rng(5);
  Matrix a(n, 64), b(64, 64);
  for (double& v : a.data) v = rng.uniform(-1.0, 1.0);
  for (double& v : b.data) v = rng.uniform(-1.0, 1.0);
  for (auto _ : state) {
    Matrix c = matmul_nt(a, b);
    benchmark::DoNotOptimize(c.data.data());
  }
}
BENCHMARK(BM_matmul_nt)->Arg(32)->Arg(512);

BENCHMARK_MAIN();
