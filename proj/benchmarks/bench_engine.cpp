#include <benchmark/benchmark.h>

#include "idmft/fci2.hpp"
#include "idmft/hf.hpp"
#include "idmft/idmft.hpp"
#include "idmft/integrals.hpp"
#include "idmft/system.hpp"

using namespace idmft;

namespace {

constexpr double angstrom = 1.8897259886;

struct Workload {
  Molecule mol;
  AOBasis basis;
  IntegralSet ints;
  ScfResult hf;

  Workload()
      : mol(Molecule::diatomic("He", "H", 0.80 * angstrom, 1)),
        basis(build_ao_basis(mol, parse_basis(builtin_ccpvdz()))),
        ints(IntegralSet::compute(basis, mol)),
        hf(rhf_scf(mol, ints)) {}
};

const Workload& workload() {
  static Workload w;
  return w;
}

} // namespace

static void BoysBatch(benchmark::State& state) {
  for (auto _ : state) {
    double acc = 0.0;
    for (int m = 0; m <= 4; ++m)
      for (double x = 0.1; x < 60.0; x += 0.1) acc += boys(m, x);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BoysBatch);

static void ComputeIntegrals(benchmark::State& state) {
  const Workload& w = workload();
  for (auto _ : state) {
    IntegralSet ints = IntegralSet::compute(w.basis, w.mol);
    benchmark::DoNotOptimize(ints.eri(0, 0, 0, 0));
  }
}
BENCHMARK(ComputeIntegrals);

static void BuildJK(benchmark::State& state) {
  const Workload& w = workload();
  Mat gamma = density_matrix(w.hf.orbitals.coeffs, w.hf.orbitals.occupations);
  for (auto _ : state) {
    auto [J, K] = build_JK(gamma, w.ints.eri);
    benchmark::DoNotOptimize(J(0, 0));
    benchmark::DoNotOptimize(K(0, 0));
  }
}
BENCHMARK(BuildJK);

static void HartreeFock(benchmark::State& state) {
  const Workload& w = workload();
  for (auto _ : state) {
    ScfResult r = rhf_scf(w.mol, w.ints);
    benchmark::DoNotOptimize(r.energy);
  }
}
BENCHMARK(HartreeFock);

static void MoTransform(benchmark::State& state) {
  const Workload& w = workload();
  for (auto _ : state) {
    MOIntegrals mo =
        ao_to_mo(w.ints, w.hf.orbitals.coeffs, w.mol.nuclear_repulsion());
    benchmark::DoNotOptimize(mo.eri(0, 0, 0, 0));
  }
}
BENCHMARK(MoTransform);

static void FullCI(benchmark::State& state) {
  const Workload& w = workload();
  MOIntegrals mo =
      ao_to_mo(w.ints, w.hf.orbitals.coeffs, w.mol.nuclear_repulsion());
  for (auto _ : state) {
    CIResult ci = fci_singlet(mo);
    benchmark::DoNotOptimize(ci.energy);
  }
}
BENCHMARK(FullCI);

static void EntropicScfFixedKappa(benchmark::State& state) {
  const Workload& w = workload();
  EntropicParams params;
  params.variant = EntropicVariant::fixed_kappa;
  params.kappa = 0.015;
  params.b = 0.03244;
  for (auto _ : state) {
    IDMFTResult r = idmft_scf(w.mol, w.ints, params);
    benchmark::DoNotOptimize(r.energy);
  }
}
BENCHMARK(EntropicScfFixedKappa);

static void EntropicScfExchangeWeighted(benchmark::State& state) {
  Molecule h2 = Molecule::diatomic("H", "H", 4.0);
  AOBasis basis = build_ao_basis(h2, parse_basis(builtin_ccpvdz()));
  IntegralSet ints = IntegralSet::compute(basis, h2);
  EntropicParams params;
  params.variant = EntropicVariant::exchange_weighted;
  params.a = 1.0 / (4.0 * std::log(2.0));
  for (auto _ : state) {
    IDMFTResult r = idmft_scf(h2, ints, params);
    benchmark::DoNotOptimize(r.energy);
  }
}
BENCHMARK(EntropicScfExchangeWeighted);

BENCHMARK_MAIN();
