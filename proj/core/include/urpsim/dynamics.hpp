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

#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "urpsim/hilbert.hpp"

namespace urpsim {

/// One contribution to a time-dependent Hamiltonian.
///
/// A static term contributes its (Hermitian) operator verbatim. A rotating
/// term with pair (A, omega) contributes A e^{-i omega t} + A^dag e^{+i omega t}.
struct HamiltonianTerm {
    Operator op;
    double omega = 0.0;
    bool rotating = false;

    /// Static Hermitian contribution; throws if H is not Hermitian within 1e-12.
    static HamiltonianTerm static_term(Operator h);
    static HamiltonianTerm rotating_term(Operator a, double omega);
};

/// Jump operator with its rate pre-folded, L = sqrt(rate) * jump.
struct LindbladChannel {
    Operator op;
};

enum class Method { FixedRk4, AdaptiveRk45 };

struct IntegratorConfig {
    Method method = Method::AdaptiveRk45;
    double max_step = 0.1;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    bool hermitize_every_step = true;
    /// Record every record_stride-th accepted step when sample_count == 0.
    std::size_t record_stride = 1;
    /// When > 0, record on the uniform grid of sample_count+1 points instead;
    /// the integrator lands on each grid point exactly, so trajectories with
    /// equal sample_count share their time grid.
    std::size_t sample_count = 0;
    /// Track the minimum eigenvalue of rho at recorded points.
    bool check_positivity = true;
};

/// Time grid plus named observable values recorded along an evolution.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::pair<std::string, std::vector<double>>> observables;

    /// Final state, one of the two depending on the evolution kind.
    Operator final_rho;
    State final_psi;

    // Diagnostics accumulated at recorded points.
    double max_trace_dev = 0.0;
    double max_herm_dev = 0.0;
    double min_eigenvalue = 1.0;
    double max_norm_dev = 0.0;
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;

    const std::vector<double>& observable(const std::string& name) const;
};

using RhoObservable = std::function<double(double, const Operator&)>;
using PsiObservable = std::function<double(double, const State&)>;

struct NamedRhoObservable {
    std::string name;
    RhoObservable fn;
};

struct NamedPsiObservable {
    std::string name;
    PsiObservable fn;
};

/// H(t) assembled from the term list.
Operator hamiltonian_at(const std::vector<HamiltonianTerm>& terms, double t);

/// -i[H(t), rho] + sum_k (L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho}).
Operator lindblad_rhs(const std::vector<HamiltonianTerm>& terms,
                      const std::vector<LindbladChannel>& channels,
                      const Operator& rho, double t);

/// Integrates the Lindblad master equation from rho0 over [t0, t_final].
///
/// When rotating terms are present the step size is capped at
/// 2 pi / (10 max|omega|) so the oscillating drives stay resolved. Aborts
/// with a diagnostic if the trace drifts beyond 1e-5.
Trajectory evolve_master(const std::vector<HamiltonianTerm>& terms,
                         const std::vector<LindbladChannel>& channels,
                         const Operator& rho0, double t0, double t_final,
                         const IntegratorConfig& cfg,
                         const std::vector<NamedRhoObservable>& observables = {});

/// Integrates the Schroedinger equation for a pure state.
Trajectory evolve_unitary(const std::vector<HamiltonianTerm>& terms, const State& psi0,
                          double t0, double t_final, const IntegratorConfig& cfg,
                          const std::vector<NamedPsiObservable>& observables = {});

/// Transforms terms and channels into the frame U(t) = e^{i G t} for a
/// diagonal Hermitian generator G.
///
/// Rotating frequencies shift by the generator's level differences and the
/// static term -G appears. Channels whose jump operators connect levels of a
/// fixed generator gap only pick up a global phase, which leaves the
/// dissipator invariant, so they are returned unchanged; anything else throws.
std::pair<std::vector<HamiltonianTerm>, std::vector<LindbladChannel>> rotating_frame(
    const std::vector<HamiltonianTerm>& terms, const Operator& generator,
    const std::vector<LindbladChannel>& channels);

}  // namespace urpsim
