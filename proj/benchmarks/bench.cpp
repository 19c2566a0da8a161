#include <benchmark/benchmark.h>

#include <random>

#include "twistor/acsfield.hpp"
#include "twistor/chartop.hpp"
#include "twistor/matcore.hpp"
#include "twistor/retract.hpp"
#include "twistor/twistorsec.hpp"

namespace {

using namespace twistor;

void bm_decompose(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const Eigen::Index order = state.range(0);
  const auto a = matcore::random_complex_structure(order, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(retract::decompose(a));
  }
}
BENCHMARK(bm_decompose)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void bm_polar_retract(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const Eigen::Index order = state.range(0);
  const auto a = matcore::random_orthogonal_structure(order, rng);
  const auto x = matcore::random_tangent(a, rng, true);
  const Eigen::MatrixXd moved = a.matrix() + 0.1 * x.matrix();
  for (auto _ : state) {
    benchmark::DoNotOptimize(retract::retract_to_orthogonal(moved));
  }
}
BENCHMARK(bm_polar_retract)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void bm_nijenhuis_formula(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const int n = static_cast<int>(state.range(0));
  const Eigen::Index m = 2 * n;
  const Eigen::MatrixXd b0 = matcore::random_orthogonal_structure(m, rng).matrix();
  std::vector<Eigen::MatrixXd> gens;
  for (Eigen::Index k = 0; k < m; ++k) {
    gens.push_back(matcore::random_skew_matrix(m, rng));
  }
  const auto field = acsfield::make_rotated_field(b0, gens, 0.3);
  const spheregeo::ChartPoint p(n, Eigen::VectorXd::Constant(m, 0.2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(acsfield::nijenhuis_formula(field, p, 1, 2));
  }
}
BENCHMARK(bm_nijenhuis_formula)->Arg(1)->Arg(2)->Arg(3)->Arg(5);

void bm_pushforward(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const int n = static_cast<int>(state.range(0));
  const Eigen::Index m = 2 * n;
  const auto field =
      acsfield::make_constant_field(matcore::make_standard_j0(m).matrix());
  const spheregeo::ChartPoint p(n, Eigen::VectorXd::Constant(m, 0.2));
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(m, -1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(twistorsec::pushforward(field, p, x));
  }
}
BENCHMARK(bm_pushforward)->Arg(1)->Arg(2)->Arg(3)->Arg(5);

void bm_ascent_step(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const Eigen::Index order = state.range(0);
  const auto a = matcore::random_orthogonal_structure(order, rng);
  for (auto _ : state) {
    const auto g = chartop::morse_gradient(a);
    benchmark::DoNotOptimize(
        retract::retract_to_orthogonal(a.matrix() + 1e-2 * g.matrix()));
  }
}
BENCHMARK(bm_ascent_step)->Arg(4)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
