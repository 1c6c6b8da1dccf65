#include <benchmark/benchmark.h>

#include "frametight/operators.hpp"
#include "frametight/random.hpp"

using namespace frametight;

namespace {

void BM_CirculantFast(benchmark::State& state) {
  const Index d = state.range(0), k = state.range(1);
  Rng rng(1);
  const auto op = StructuredOperator<double>::circulant(rng.gaussian_matrix<double>(d, 1), k);
  const Vector<double> c = rng.gaussian_matrix<double>(k, 1);
  for (auto _ : state) benchmark::DoNotOptimize(op.apply(c));
}

void BM_CirculantDense(benchmark::State& state) {
  const Index d = state.range(0), k = state.range(1);
  Rng rng(1);
  const Matrix<double> m = StructuredOperator<double>::circulant(rng.gaussian_matrix<double>(d, 1), k).to_dense();
  const Vector<double> c = rng.gaussian_matrix<double>(k, 1);
  for (auto _ : state) {
    Vector<double> y = m * c;
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_GaborApply(benchmark::State& state) {
  const Index m = state.range(0);
  Rng rng(2);
  const auto op = StructuredOperator<Complex>::gabor(rng.gaussian_matrix<Complex>(m, 1));
  const Vector<Complex> c = rng.gaussian_matrix<Complex>(m, 1);
  for (auto _ : state) benchmark::DoNotOptimize(op.apply(c));
}

}  // namespace

BENCHMARK(BM_CirculantFast)->Args({256, 32})->Args({4096, 512});
BENCHMARK(BM_CirculantDense)->Args({256, 32})->Args({4096, 512});
BENCHMARK(BM_GaborApply)->Arg(8)->Arg(16);
