// Copyright 2026 The urpsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Microbenchmarks for the hot paths: right-hand-side evaluation, integrator
// steps, operator construction and the steady-state pipeline.

#include <benchmark/benchmark.h>

#include "urpsim/dynamics.hpp"
#include "urpsim/models.hpp"
#include "urpsim/observables.hpp"

namespace {

using namespace urpsim;

Operator mixed_state(const Model& m) {
    Operator rho = Operator::Identity(m.basis.dim(), m.basis.dim());
    return rho / rho.trace();
}

void BM_LindbladRhsTwoAtom(benchmark::State& state) {
    Model m = build_two_atom_full(UrpTwoAtomParams{});
    Operator rho = mixed_state(m);
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lindblad_rhs(m.terms, m.channels, rho, t));
        t += 1e-3;
    }
}
BENCHMARK(BM_LindbladRhsTwoAtom);

void BM_LindbladRhsGate(benchmark::State& state) {
    GateParams p;
    p.gamma = 0.001;
    Model m = build_gate_full(p);
    Operator rho = mixed_state(m);
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lindblad_rhs(m.terms, m.channels, rho, t));
        t += 1e-3;
    }
}
BENCHMARK(BM_LindbladRhsGate);

void BM_LindbladRhsQec(benchmark::State& state) {
    QecParams p;
    p.gamma_flip = 1.0 / 500.0;
    Model m = build_qec_full(p, true);
    Operator rho = mixed_state(m);
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lindblad_rhs(m.terms, m.channels, rho, t));
        t += 1e-3;
    }
}
BENCHMARK(BM_LindbladRhsQec);

void BM_HamiltonianAtQec(benchmark::State& state) {
    Model m = build_qec_full(QecParams{}, false);
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hamiltonian_at(m.terms, t));
        t += 1e-3;
    }
}
BENCHMARK(BM_HamiltonianAtQec);

// One short adaptive master-equation segment of the Bell model; the
// per-iteration cost is dominated by the RK45 stages.
void BM_EvolveMasterBellSegment(benchmark::State& state) {
    Model m = build_bell_full(BellParams{});
    State phip = bell_states()[0];
    Operator rho0 = phip * phip.adjoint();
    IntegratorConfig cfg;
    cfg.sample_count = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evolve_master(m.terms, m.channels, rho0, 0.0, 0.5, cfg));
    }
}
BENCHMARK(BM_EvolveMasterBellSegment)->Unit(benchmark::kMillisecond);

void BM_EvolveUnitaryGateSegment(benchmark::State& state) {
    Model m = build_gate_full(GateParams{});
    auto [psi0, psis] = gate_states();
    IntegratorConfig cfg;
    cfg.sample_count = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evolve_unitary(m.terms, psi0, 0.0, 0.5, cfg));
    }
}
BENCHMARK(BM_EvolveUnitaryGateSegment)->Unit(benchmark::kMillisecond);

void BM_BuildQecFull(benchmark::State& state) {
    QecParams p;
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_qec_full(p, true));
    }
}
BENCHMARK(BM_BuildQecFull)->Unit(benchmark::kMicrosecond);

void BM_LiouvillianMatrixBell(benchmark::State& state) {
    Model m = build_bell_effective(BellParams{});
    for (auto _ : state) {
        benchmark::DoNotOptimize(liouvillian_matrix(m.terms, m.channels));
    }
}
BENCHMARK(BM_LiouvillianMatrixBell)->Unit(benchmark::kMicrosecond);

void BM_SteadyStatesThreeD(benchmark::State& state) {
    Model m = build_threeD_effective(ThreeDParams{});
    Operator superop = liouvillian_on_support(m.terms, m.channels);
    for (auto _ : state) {
        benchmark::DoNotOptimize(steady_states(superop));
    }
}
BENCHMARK(BM_SteadyStatesThreeD)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
