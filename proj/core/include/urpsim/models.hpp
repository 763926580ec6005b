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

#include <utility>
#include <vector>

#include "urpsim/dynamics.hpp"
#include "urpsim/hilbert.hpp"

namespace urpsim {

/// A built system: basis, Hamiltonian term list and jump channels.
struct Model {
    ProductBasis basis;
    std::vector<HamiltonianTerm> terms;
    std::vector<LindbladChannel> channels;
};

// All frequencies are expressed in units of the declared scale (omega1 = 1
// for the pumping, gate and entanglement schemes; g = 1 for the error
// correction scheme), time in its inverse.

struct UrpTwoAtomParams {
    double omega1 = 1.0;
    double omega2 = 0.05;
    double delta = 50.0;
    double u_rr = 50.0;

    /// U_rr = Delta >> Omega_1 >> Omega_2 (factors of 10).
    bool urp_regime() const;
};

struct GateParams {
    double omega1 = 1.0;
    double omega2 = 0.05;
    double delta = 58.0;
    double u_rr = 58.0;
    double gamma = 0.0;  ///< total Rydberg decay rate, gamma/2 per ground state
};

struct BellParams {
    double omega1 = 1.0;
    double omega2 = 0.02;
    double omega_mw = 0.01;
    double delta = 100.0;
    double u_rr = 100.0;
    double gamma = 0.05;
};

struct ThreeDParams {
    double omega1 = 1.0;
    double omega2 = 0.02;
    double omega_mw1 = 0.01;
    double omega_mw2 = 0.01;
    double delta = 100.0;
    double delta_small = 0.02;  ///< the filtering shift; see calibrate_threeD_delta
    double u = 100.0;
    double gamma = 0.05;
};

struct QecParams {
    double omega1 = 3.0;
    double omega2 = 0.05;
    double delta = 800.0;
    double u_rr = 800.0;
    double g = 1.0;
    double kappa = 200.0;
    double kappa_e = 0.02;
    double gamma_flip = 0.0;  ///< bit-flip noise rate
    double gamma = 0.0;       ///< optional Rydberg decay, gamma/2 per ground state
};

ProductBasis two_atom_basis();    // 2 x {0,1,r}
ProductBasis three_atom_basis();  // 3 x {0,1,r}
ProductBasis threeD_basis();      // 2 x {0,1,2,r}
ProductBasis qec_basis();         // 3 x {0,1,p,r}

/// Two-atom pumping model: rotating Omega_1 drives, resonant Omega_2 drives
/// and the U_rr |rr><rr| shift. No dissipation.
Model build_two_atom_full(const UrpTwoAtomParams& p);
/// Reduced two-atom Hamiltonian: Omega_2 (|r0><10| + |0r><01|) + h.c.
Model build_two_atom_effective(const UrpTwoAtomParams& p);

/// Three-atom gate model with pairwise U_rr shifts; six decay channels when
/// gamma > 0.
Model build_gate_full(const GateParams& p);
Model build_gate_effective(const GateParams& p);
/// Product input state and the entangled output state of the phase gate.
std::pair<State, State> gate_states();

Model build_bell_full(const BellParams& p);
Model build_bell_effective(const BellParams& p);
/// phi+, phi-, psi+, psi- on the two-atom basis.
std::vector<State> bell_states();

Model build_threeD_full(const ThreeDParams& p);
Model build_threeD_effective(const ThreeDParams& p);
/// The target |T1> and the second dark state |T2>.
std::pair<State, State> threeD_states();

/// Scans the filtering shift over [0.1 w1, 10 w1] with the effective model
/// and returns the value maximizing the |T1> fidelity at t_eval.
double calibrate_threeD_delta(const ThreeDParams& p, double t_eval = 8000.0);

Model build_qec_full(const QecParams& p, bool include_noise);
Model build_qec_effective(const QecParams& p);
/// The single-error input (|100> + i|011>)/sqrt(2) and the codeword target
/// (|000> + i|111>)/sqrt(2).
std::pair<State, State> qec_states();

/// kappa_e = 4 g^2 / kappa from adiabatic elimination of the cavity mode.
double effective_kappa(double g, double kappa);

}  // namespace urpsim
