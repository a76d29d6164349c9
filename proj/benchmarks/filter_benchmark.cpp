#include <benchmark/benchmark.h>

#include "cjfeast/chebyshev_filter.hpp"
#include "cjfeast/projector.hpp"
#include "cjfeast/random.hpp"
#include "cjfeast/solvers.hpp"
#include "planted.hpp"

namespace {

using namespace cjfeast;

SparseMatrix random_sparse(std::size_t m, std::size_t n, std::size_t per_row) {
  Rng rng = substream(1, 0);
  std::uniform_int_distribution<std::size_t> col(0, n - 1);
  std::normal_distribution<double> g;
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < per_row; ++k) t.push_back({i, col(rng), g(rng)});
  }
  return SparseMatrix::from_triplets(m, n, t);
}

// args: degree, block width, variant (0 augmented, 1 cross-product), threads
void BM_FilterBlock(benchmark::State& state) {
  const auto a = random_sparse(20000, 15000, 8);
  const int d = static_cast<int>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  const Variant v = state.range(2) == 0 ? Variant::Augmented : Variant::CrossProduct;
  const auto threads = static_cast<unsigned>(state.range(3));
  const auto f = ChebJacksonFilter::build({2.0, 3.0}, {20.0, 0.0}, d, v);
  MvCounter counter;
  const FilteredOperator op(a, f, counter);
  Rng rng = substream(2, 0);
  const DenseMatrix x = gaussian_matrix(op.dimension(), p, rng);
  for (auto _ : state) benchmark::DoNotOptimize(apply_filter_block(op, x, threads));
  state.counters["MVs/iter"] = static_cast<double>(counter.count()) / static_cast<double>(state.iterations());
}
BENCHMARK(BM_FilterBlock)
    ->Args({50, 8, 0, 1})
    ->Args({50, 8, 1, 1})
    ->Args({50, 8, 0, 4})
    ->Args({200, 8, 0, 1})
    ->Unit(benchmark::kMillisecond);

void BM_SolveModerate(benchmark::State& state) {
  std::vector<double> s;
  for (int i = 0; i < 12; ++i) s.push_back(0.40 + 0.015 * i);
  s.push_back(1.0);
  for (int i = 0; s.size() < 150; ++i) s.push_back(i % 2 == 0 ? 0.65 + 0.3 * i / 138.0 : 0.35 * (1.0 - i / 138.0) + 1e-3);
  const auto a = testing::planted_matrix(200, 150, s, 42);
  SolverConfig c;
  c.interval = {0.38, 0.6};
  c.p = 16;
  c.seed = 1;
  c.target_count = 12;
  c.variant = state.range(0) == 0 ? VariantChoice::Augmented : VariantChoice::CrossProduct;
  for (auto _ : state) benchmark::DoNotOptimize(solve(a, c));
}
BENCHMARK(BM_SolveModerate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
