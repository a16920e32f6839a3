#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "swapent/kernels.hpp"
#include "swapent/measurement.hpp"
#include "swapent/models.hpp"

using namespace swapent;

namespace {

DenseTensor random_tensor(const Shape& shape, std::uint64_t seed) {
  DenseTensor t(shape);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = dist(gen);
  return t;
}

// The (a', w, s1, s2, b) -> (a', s2, b, w, s1) reorder that a two-site update would need.
void BM_Permute(benchmark::State& state, bool parallel) {
  const std::size_t chi = static_cast<std::size_t>(state.range(0));
  const Shape shape{chi, 8, 2, 2, chi};
  const DenseTensor in = random_tensor(shape, 1);
  const std::vector<std::size_t> perm{0, 3, 4, 1, 2};
  std::vector<double> out(in.size());
  for (auto _ : state) {
    if (parallel)
      kernels::permute_parallel(in.data(), shape, perm, out);
    else
      kernels::permute_serial(in.data(), shape, perm, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * in.size() * sizeof(double) * 2));
}

void BM_Contract(benchmark::State& state, bool reference) {
  const std::size_t chi = static_cast<std::size_t>(state.range(0));
  const DenseTensor env = random_tensor({chi, 4, chi}, 2);
  const DenseTensor theta = random_tensor({chi, 2, 2, chi}, 3);
  const std::vector<AxisPair> pairs{{2, 0}};
  for (auto _ : state) {
    DenseTensor out = reference ? kernels::contract_reference(env, theta, pairs) : contract(env, theta, pairs);
    benchmark::DoNotOptimize(out.data().data());
  }
}

void BM_AveragedEntropy(benchmark::State& state) {
  static const MatrixProductState doubled = [] {
    ModelSpec spec;
    spec.length = 12;
    DmrgParams p;
    p.policy = TruncationPolicy{64, 1e-10};
    return double_chain(chain_ground_state(spec, p).state);
  }();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const AveragedEntropy a = averaged_entropy(doubled, 6, 64, 1, threads);
    benchmark::DoNotOptimize(a.mean);
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Permute, serial, false)->Arg(32)->Arg(128);
BENCHMARK_CAPTURE(BM_Permute, parallel, true)->Arg(32)->Arg(128);
BENCHMARK_CAPTURE(BM_Contract, blas, false)->Arg(16)->Arg(48);
BENCHMARK_CAPTURE(BM_Contract, reference, true)->Arg(16)->Arg(48);
BENCHMARK(BM_AveragedEntropy)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
