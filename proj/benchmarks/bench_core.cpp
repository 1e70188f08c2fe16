// Microbenchmarks for the hot paths: rate evaluation, the augmented square
// root, one conic feasibility probe of each kind, and an oracle slice.
#include <benchmark/benchmark.h>

#include "igs/baselines.hpp"
#include "igs/conic_solvers.hpp"
#include "igs/harness.hpp"
#include "igs/pareto_joint.hpp"
#include "igs/pareto_separate.hpp"
#include "igs/rate_engine.hpp"
#include "igs/widely_linear.hpp"

namespace {

igs::SisoIcInstance bench_channel() { return igs::reference_case_strong().channel; }

void BM_SisoRate(benchmark::State& state) {
  const igs::SisoIcInstance ic = bench_channel();
  const std::array<igs::SisoStrategy, 2> s{
      igs::SisoStrategy{10.0, igs::cplx(4.0, 3.0)},
      igs::SisoStrategy{8.0, igs::cplx(0.0, -2.0)}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(igs::siso_rate(ic, s, 0).total);
    benchmark::DoNotOptimize(igs::siso_rate(ic, s, 1).total);
  }
}
BENCHMARK(BM_SisoRate);

void BM_AugmentedSqrt(benchmark::State& state) {
  igs::SignalStrategy s;
  s.c = Eigen::MatrixXcd::Constant(1, 1, igs::cplx(10.0, 0.0));
  s.ct = Eigen::MatrixXcd::Constant(1, 1, igs::cplx(4.0, 3.0));
  for (auto _ : state) benchmark::DoNotOptimize(igs::augmented_sqrt(s));
}
BENCHMARK(BM_AugmentedSqrt);

void BM_SdpProbe(benchmark::State& state) {
  const igs::SisoIcInstance ic = bench_channel();
  const igs::RateProfile profile(0.6130, 0.3870);
  const igs::SdrData sdr = igs::build_sdr(ic, profile);
  for (auto _ : state) benchmark::DoNotOptimize(igs::sdp_feasible(sdr, 1.2, 1e-7));
}
BENCHMARK(BM_SdpProbe);

void BM_SocpProbe(benchmark::State& state) {
  const igs::SisoIcInstance ic = bench_channel();
  const igs::RateProfile profile(0.6130, 0.3870);
  const igs::ProperSolution prop = igs::proper_pareto_point(ic, profile);
  const igs::PseudoCoeffs pc =
      igs::pseudo_coeffs(ic, prop.c, prop.r_star, prop.r_star + 0.05, profile);
  igs::Socp2Data sd;
  sd.a1 = pc.a1;
  sd.b1 = pc.b1;
  sd.a2 = pc.a2;
  sd.b2 = pc.b2;
  sd.h11s = ic.h[0][0] * ic.h[0][0];
  sd.h12s = ic.h[0][1] * ic.h[0][1];
  sd.h21s = ic.h[1][0] * ic.h[1][0];
  sd.h22s = ic.h[1][1] * ic.h[1][1];
  sd.x_max = prop.c[0];
  sd.t_max = prop.c[1];
  for (auto _ : state) benchmark::DoNotOptimize(igs::socp2_feasible(sd, 0.4));
}
BENCHMARK(BM_SocpProbe);

void BM_OracleSlice(benchmark::State& state) {
  const igs::SisoIcInstance ic = bench_channel();
  const igs::RateProfile profile(0.5, 0.5);
  igs::GridSpec grid;
  grid.n_power = 7;
  grid.n_mag = 5;
  grid.n_theta = 12;
  grid.refine = 1;
  for (auto _ : state) benchmark::DoNotOptimize(igs::grid_oracle(ic, profile, grid).value);
}
BENCHMARK(BM_OracleSlice);

}  // namespace

BENCHMARK_MAIN();
