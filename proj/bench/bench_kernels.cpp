// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "minispice/analysis.hpp"
#include "minispice/lattice.hpp"
#include "minispice/linalg.hpp"

namespace {

using namespace minispice;

RealMatrix random_matrix(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = u(rng);
    a(i, i) += static_cast<double>(n);
  }
  return a;
}

void BM_LuSerial(benchmark::State& state) {
  const auto a = random_matrix(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lu_factor_serial(a));
}

void BM_LuParallel(benchmark::State& state) {
  const auto a = random_matrix(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lu_factor(a));
}

// RC mesh: lattice of resistors, a capacitor from every node to ground and an
// AC drive at one corner.
Netlist rc_mesh(int side) {
  Netlist deck = gen_lattice({side, side, 1e3, false});
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      Capacitor c;
      c.name = "C" + std::to_string(i) + "_" + std::to_string(j);
      c.n1 = lattice_node({i, j});
      c.n2 = "0";
      c.farads = 1e-9;
      deck.elements.push_back({c, {}});
    }
  }
  VSource v;
  v.name = "VIN";
  v.npos = lattice_node({0, 0});
  v.nneg = "0";
  v.waveform = DcWave{0.0};
  v.ac_mag = 1.0;
  deck.elements.push_back({v, {}});
  return deck;
}

const AcDirective kSweep{AcScale::Dec, 10, 1e2, 1e8};

void BM_AcSerial(benchmark::State& state) {
  const Netlist deck = rc_mesh(static_cast<int>(state.range(0)));
  const OpResult op = solve_op(deck);
  for (auto _ : state) benchmark::DoNotOptimize(ac_analysis_serial(deck, kSweep, op));
}

void BM_AcParallel(benchmark::State& state) {
  const Netlist deck = rc_mesh(static_cast<int>(state.range(0)));
  const OpResult op = solve_op(deck);
  for (auto _ : state) benchmark::DoNotOptimize(ac_analysis(deck, kSweep, op));
}

void BM_DcSweepWarm(benchmark::State& state) {
  Netlist deck = rc_mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dc_sweep(deck, "VIN", 0.0, 1.0, 0.01, {}, SweepStart::Warm));
  }
}

void BM_DcSweepCold(benchmark::State& state) {
  Netlist deck = rc_mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dc_sweep(deck, "VIN", 0.0, 1.0, 0.01, {}, SweepStart::Cold));
  }
}

}  // namespace

BENCHMARK(BM_LuSerial)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_LuParallel)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_AcSerial)->Arg(6)->Arg(10);
BENCHMARK(BM_AcParallel)->Arg(6)->Arg(10);
BENCHMARK(BM_DcSweepWarm)->Arg(6);
BENCHMARK(BM_DcSweepCold)->Arg(6);

BENCHMARK_MAIN();
