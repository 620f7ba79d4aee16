#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "odeco/enumeration.hpp"
#include "odeco/incidence.hpp"
#include "odeco/newton.hpp"
#include "odeco/power_method.hpp"
#include "odeco/random.hpp"
#include "odeco/tensor.hpp"

using namespace odeco;

namespace {

DenseTensor random_dense(const TensorShape& shape, std::uint64_t seed) {
  Rng rng(seed);
  DenseTensor tensor(shape);
  std::vector<int> idx(static_cast<std::size_t>(shape.order()), 0);
  while (true) {
    tensor.at(idx) = rng.gaussian();
    int j = shape.order() - 1;
    while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == shape.dim(j)) idx[static_cast<std::size_t>(j--)] = 0;
    if (j < 0) break;
  }
  return tensor;
}

void BM_CountClosedForms(benchmark::State& state) {
  const TensorShape shape({4, 4, 4});
  for (auto _ : state) {
    benchmark::DoNotOptimize(type1_counts(shape.min_dim(), shape.order()));
    benchmark::DoNotOptimize(type2_counts(shape));
  }
}
BENCHMARK(BM_CountClosedForms);

void BM_ChowExpansion(benchmark::State& state) {
  const TensorShape shape({2, 2, 3, 3});
  for (auto _ : state) benchmark::DoNotOptimize(type2_counts(shape).chow_count);
}
BENCHMARK(BM_ChowExpansion);

void BM_EnumerateType1(benchmark::State& state) {
  const TensorShape shape({2, 2, 2, 2, 2});
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_type1(shape).size());
}
BENCHMARK(BM_EnumerateType1);

void BM_IncidenceComplex(benchmark::State& state) {
  const TensorShape shape({3, 3, 4});
  for (auto _ : state) benchmark::DoNotOptimize(build_incidence_complex(shape).vertices.size());
}
BENCHMARK(BM_IncidenceComplex);

void BM_Contraction(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DenseTensor tensor = random_dense(TensorShape({n, n, n}), 7);
  Rng rng(11);
  std::vector<Eigen::VectorXcd> vectors;
  for (int j = 0; j < 3; ++j) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.complex_gaussian();
    vectors.push_back(v);
  }
  for (auto _ : state) {
    for (int mode = 0; mode < 3; ++mode) benchmark::DoNotOptimize(contract_missing(tensor, vectors, mode));
  }
}
BENCHMARK(BM_Contraction)->Arg(4)->Arg(8)->Arg(16);

void BM_NewtonRefine(benchmark::State& state) {
  const OdecoTensor odeco = random_odeco(TensorShape({3, 3, 3}), 5);
  const DenseTensor tensor = materialize(odeco);
  const SingularTuple exact = realize_type1(enumerate_type1(odeco.shape).front(), odeco);
  Rng rng(13);
  SingularTuple seed = exact;
  for (auto& point : seed.points) {
    Eigen::VectorXcd coords = point.coords();
    for (int i = 0; i < coords.size(); ++i) coords(i) += 1e-3 * rng.complex_gaussian();
    point = ProjectivePoint(coords);
  }
  for (auto _ : state) benchmark::DoNotOptimize(newton_refine(tensor, seed).residual);
}
BENCHMARK(BM_NewtonRefine);

void BM_PowerMethod(benchmark::State& state) {
  const DenseTensor tensor = materialize(random_odeco(TensorShape({3, 3, 3}), 9));
  for (auto _ : state) benchmark::DoNotOptimize(power_method_decompose(tensor).relative_residual);
}
BENCHMARK(BM_PowerMethod);

}  // namespace

BENCHMARK_MAIN();
