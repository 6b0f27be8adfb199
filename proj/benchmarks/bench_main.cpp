#include <benchmark/benchmark.h>

#include "mix/effective.hpp"
#include "mix/hamiltonian.hpp"
#include "mix/induced.hpp"
#include "mix/observables.hpp"
#include "mix/schmidt.hpp"

using namespace mix;

namespace {

MixtureModel benchmark_model(int orbitals) {
  MixtureModel m;
  m.orbitals = orbitals;
  return m;
}

struct Fixture {
  MixtureHamiltonian h{benchmark_model(14)};
  MixtureEigenstate state = eigenstate(h, 0);
  SchmidtDecomposition d = decompose(state);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

}  // namespace

static void BM_Matvec(benchmark::State& st) {
  const MixtureHamiltonian h(benchmark_model(static_cast<int>(st.range(0))));
  const Vec x = deterministic_vector(h.dimension(), 1);
  Vec y(h.dimension());
  for (auto _ : st) {
    h.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  st.counters["dimension"] = static_cast<double>(h.dimension());
}
BENCHMARK(BM_Matvec)->Arg(8)->Arg(14)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_GroundState(benchmark::State& st) {
  const MixtureHamiltonian h(benchmark_model(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(eigenstate(h, 0).energy);
}
BENCHMARK(BM_GroundState)->Arg(8)->Arg(14)->Unit(benchmark::kMillisecond)->Iterations(3);

static void BM_Schmidt(benchmark::State& st) {
  const Fixture& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(decompose(f.state).lambdas.data());
}
BENCHMARK(BM_Schmidt)->Unit(benchmark::kMillisecond);

static void BM_Amplitudes(benchmark::State& st) {
  const Fixture& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(transition_amplitudes(f.d, f.h).data());
}
BENCHMARK(BM_Amplitudes)->Unit(benchmark::kMillisecond);

static void BM_Induced(benchmark::State& st) {
  const Fixture& f = fixture();
  for (auto _ : st) {
    const InducedAnalysis a(f.d, f.h);
    benchmark::DoNotOptimize(a.hind(Species::Fermion).data());
  }
}
BENCHMARK(BM_Induced)->Unit(benchmark::kMillisecond);

static void BM_Effective(benchmark::State& st) {
  const Fixture& f = fixture();
  const InducedAnalysis a(f.d, f.h);
  for (auto _ : st) {
    const EffectiveModel m = build_effective(a, f.d, f.h, Species::Fermion);
    benchmark::DoNotOptimize(solve_effective(m).energy);
  }
}
BENCHMARK(BM_Effective)->Unit(benchmark::kMillisecond);

static void BM_Smf(benchmark::State& st) {
  const Fixture& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(smf_solve(f.h).energy);
}
BENCHMARK(BM_Smf)->Unit(benchmark::kMillisecond);

static void BM_PairCorrelation(benchmark::State& st) {
  const Fixture& f = fixture();
  for (auto _ : st) {
    const auto c = correlations(f.h.sector(Species::Boson), f.state.coefficients, f.h.basis(), Provenance::Full);
    benchmark::DoNotOptimize(c.g2.data());
  }
}
BENCHMARK(BM_PairCorrelation)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
