#include "qfluct/fluctuation.hpp"
#include "qfluct/lindblad.hpp"
#include "qfluct/models.hpp"
#include "qfluct/random.hpp"

#include <benchmark/benchmark.h>

using namespace qfluct;

static void BM_HermEig(benchmark::State& state) {
  Rng rng(1);
  const CMatrix g = ginibre(state.range(0), state.range(0), rng);
  const CMatrix h = (g + g.adjoint()) / 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(herm_eig(h));
}
BENCHMARK(BM_HermEig)->Arg(4)->Arg(16)->Arg(82);

static void BM_TpmQuasiProb(benchmark::State& state) {
  Rng rng(2);
  const Index d = state.range(0);
  const RecoveryFamily fam(random_channel(d, d, 3, rng), random_full_rank_state(d, rng));
  const DensityOperator rho = random_full_rank_state(d, rng);
  const TransitionBasis basis = TransitionBasis::forward(rho, fam);
  for (auto _ : state) benchmark::DoNotOptimize(tpm_quasiprob(fam.forward(), basis));
}
BENCHMARK(BM_TpmQuasiProb)->Arg(2)->Arg(3)->Arg(4);

static void BM_EpDistribution(benchmark::State& state) {
  Rng rng(3);
  const RecoveryFamily fam(random_channel(3, 3, 3, rng), random_full_rank_state(3, rng));
  const DensityOperator rho = random_full_rank_state(3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ep_distribution(fam, rho));
}
BENCHMARK(BM_EpDistribution);

static void BM_JcChannel(benchmark::State& state) {
  JcConfig c;
  c.n_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(jc_channel(c));
}
BENCHMARK(BM_JcChannel)->Arg(28)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_LindbladPropagate(benchmark::State& state) {
  JcConfig c;
  c.n_max = static_cast<int>(state.range(0));
  c.gamma_noise = 0.1;
  const LindbladGenerator gen = noise_lindbladian(c);
  const CMatrix x0 = tensor(atom_gibbs(c).matrix(), field_bath(c).matrix());
  for (auto _ : state) benchmark::DoNotOptimize(propagate(gen, x0, 1.0, 1e-3));
}
BENCHMARK(BM_LindbladPropagate)->Arg(28)->Arg(40)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
