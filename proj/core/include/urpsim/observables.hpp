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

#include <string>
#include <vector>

#include "urpsim/dynamics.hpp"
#include "urpsim/hilbert.hpp"

namespace urpsim {

/// P = <psi| rho |psi>, clamped to [0, 1].
double population(const Operator& rho, const State& psi);

/// F = sqrt(<psi| rho |psi>).
double fidelity_sqrt(const Operator& rho, const State& psi);

/// F = |<psi_s | psi_t>|.
double overlap_amplitude(const State& psi_t, const State& psi_s);

/// Dense superoperator M with vec(drho/dt) = M vec(rho) for a
/// time-independent generator.
///
/// Vectorization is column-stacking: vec(A X B) = (B^T (x) A) vec(X).
/// Rotating terms are rejected.
Operator liouvillian_matrix(const std::vector<HamiltonianTerm>& terms,
                            const std::vector<LindbladChannel>& channels);

struct SteadyStateReport {
    std::size_t null_dimension = 0;
    std::vector<Operator> basis;    ///< trace-normalized where trace != 0
    std::vector<double> residuals;  ///< ||M vec(rho)|| per basis element
    /// Set when the singular-value gap between retained and discarded
    /// directions is below 10x the tolerance.
    bool ill_conditioned = false;
};

/// Null space of the superoperator, reshaped to density matrices.
SteadyStateReport steady_states(const Operator& superop, double tol = 1e-9);

/// Basis indices with nonzero support (row or column, above 1e-14) in any
/// term or channel. An effective model embedded in a larger product space
/// leaves spectator directions untouched; steady-state uniqueness statements
/// apply on this support subspace.
std::vector<Eigen::Index> support_indices(const std::vector<HamiltonianTerm>& terms,
                                          const std::vector<LindbladChannel>& channels);

/// The block of `op` on the given basis indices.
Operator restrict_operator(const Operator& op, const std::vector<Eigen::Index>& idx);
/// The amplitudes of `psi` on the given basis indices (not renormalized).
State restrict_state(const State& psi, const std::vector<Eigen::Index>& idx);

/// liouvillian_matrix of the model restricted to its support subspace.
/// When idx_out is non-null it receives the retained basis indices.
Operator liouvillian_on_support(const std::vector<HamiltonianTerm>& terms,
                                const std::vector<LindbladChannel>& channels,
                                std::vector<Eigen::Index>* idx_out = nullptr);

/// Max over t of |a - b| for the named observable; grids must coincide.
double trajectory_deviation(const Trajectory& a, const Trajectory& b,
                            const std::string& observable_name);

/// Column-stacking helpers shared with the superoperator convention.
State vec(const Operator& m);
Operator unvec(const State& v);

}  // namespace urpsim
