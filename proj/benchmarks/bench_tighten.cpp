#include <benchmark/benchmark.h>

#include "frametight/ensembles.hpp"
#include "frametight/filterbank.hpp"
#include "frametight/tyler.hpp"

using namespace frametight;

namespace {

EnsembleSpec spec_of(EnsembleKind kind, Index d, Index r, Index n) {
  EnsembleSpec s;
  s.kind = kind;
  s.d = d;
  s.r = r;
  s.n = n;
  s.window = WindowDist::gaussian;
  s.seed = 7;
  return s;
}

void BM_TightenGaussian(benchmark::State& state) {
  const Index d = state.range(0);
  const auto f = sample<Complex>(spec_of(EnsembleKind::gaussian_iid, d, 2, 4 * d));
  for (auto _ : state) benchmark::DoNotOptimize(tighten(f).iterations);
}

void BM_TightenCirculant(benchmark::State& state) {
  const auto f = sample<double>(spec_of(EnsembleKind::circulant_block_random, state.range(0), 8, 16));
  for (auto _ : state) benchmark::DoNotOptimize(tighten(f).iterations);
}

void BM_PipelinePost(benchmark::State& state) {
  const Index d = state.range(0);
  const auto f = sample<double>(spec_of(EnsembleKind::circulant_block_random, d, 8, 16));
  const auto t = tighten(f);
  const Pipeline<double> p(Scheme::preconditioned_post, f, &t);
  const Vector<double> x = Vector<double>::Ones(d);
  for (auto _ : state) benchmark::DoNotOptimize(p.run(x, identity_processor<double>()));
}

}  // namespace

BENCHMARK(BM_TightenGaussian)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TightenCirculant)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PipelinePost)->Arg(64)->Unit(benchmark::kMicrosecond);
