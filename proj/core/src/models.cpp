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

#include "urpsim/models.hpp"

#include <cmath>
#include <stdexcept>

#include "urpsim/observables.hpp"

namespace urpsim {

namespace {

const std::vector<std::string> kThreeLevels = {"0", "1", "r"};
const std::vector<std::string> kFourLevels3D = {"0", "1", "2", "r"};
const std::vector<std::string> kFourLevelsQec = {"0", "1", "p", "r"};

Operator outer(const State& a, const State& b) { return a * b.adjoint(); }

/// sum_i |upper><lower| at every site.
Operator raise_all(const ProductBasis& basis, const std::string& upper,
                   const std::string& lower) {
    Operator out = Operator::Zero(static_cast<Eigen::Index>(basis.dim()),
                                  static_cast<Eigen::Index>(basis.dim()));
    for (std::size_t i = 0; i < basis.num_sites(); ++i) {
        out += site_operator(basis, i, upper, lower);
    }
    return out;
}

Operator pairwise_projectors(const ProductBasis& basis, const std::string& level) {
    Operator out = Operator::Zero(static_cast<Eigen::Index>(basis.dim()),
                                  static_cast<Eigen::Index>(basis.dim()));
    for (std::size_t i = 0; i < basis.num_sites(); ++i) {
        for (std::size_t j = i + 1; j < basis.num_sites(); ++j) {
            out += pair_projector(basis, i, level, j, level);
        }
    }
    return out;
}

/// Static compensation of the second-order light shift produced by the
/// dispersive drive: +Omega_1^2/Delta on each driven ground level and
/// -Omega_1^2/Delta on its excited partner. The physical scheme cancels
/// these shifts with ancillary levels, so the simulated Hamiltonian removes
/// them explicitly; without this the reduced models drift off resonance.
Operator stark_compensation(
    const ProductBasis& basis, double omega1, double delta,
    const std::vector<std::pair<std::string, std::string>>& transitions) {
    Operator out = Operator::Zero(static_cast<Eigen::Index>(basis.dim()),
                                  static_cast<Eigen::Index>(basis.dim()));
    const double s = omega1 * omega1 / delta;
    for (std::size_t i = 0; i < basis.num_sites(); ++i) {
        for (const auto& [ground, excited] : transitions) {
            out += s * (site_operator(basis, i, excited, excited) -
                        site_operator(basis, i, ground, ground));
        }
    }
    return out;
}

void add_decay_channels(Model& model, double total_rate,
                        const std::vector<std::string>& ground,
                        const std::vector<std::string>& excited) {
    if (total_rate <= 0.0) return;
    const double rate = total_rate / static_cast<double>(ground.size());
    for (std::size_t i = 0; i < model.basis.num_sites(); ++i) {
        for (const auto& e : excited) {
            for (const auto& g : ground) {
                model.channels.push_back(
                    {std::sqrt(rate) * site_operator(model.basis, i, g, e)});
            }
        }
    }
}

}  // namespace

bool UrpTwoAtomParams::urp_regime() const {
    return u_rr == delta && delta >= 10.0 * omega1 && omega1 >= 10.0 * omega2;
}

ProductBasis two_atom_basis() { return ProductBasis({{kThreeLevels}, {kThreeLevels}}); }

ProductBasis three_atom_basis() {
    return ProductBasis({{kThreeLevels}, {kThreeLevels}, {kThreeLevels}});
}

ProductBasis threeD_basis() { return ProductBasis({{kFourLevels3D}, {kFourLevels3D}}); }

ProductBasis qec_basis() {
    return ProductBasis({{kFourLevelsQec}, {kFourLevelsQec}, {kFourLevelsQec}});
}

Model build_two_atom_full(const UrpTwoAtomParams& p) {
    Model m{two_atom_basis(), {}, {}};
    const Operator raise = raise_all(m.basis, "r", "1");
    m.terms.push_back(HamiltonianTerm::rotating_term(p.omega1 * raise, p.delta));
    m.terms.push_back(HamiltonianTerm::static_term(p.omega2 * (raise + raise.adjoint())));
    m.terms.push_back(
        HamiltonianTerm::static_term(p.u_rr * pair_projector(m.basis, 0, "r", 1, "r")));
    m.terms.push_back(HamiltonianTerm::static_term(
        stark_compensation(m.basis, p.omega1, p.delta, {{"1", "r"}})));
    return m;
}

Model build_two_atom_effective(const UrpTwoAtomParams& p) {
    Model m{two_atom_basis(), {}, {}};
    const Operator a = outer(ket(m.basis, {"r", "0"}), ket(m.basis, {"1", "0"})) +
                       outer(ket(m.basis, {"0", "r"}), ket(m.basis, {"0", "1"}));
    m.terms.push_back(HamiltonianTerm::static_term(p.omega2 * (a + a.adjoint())));
    return m;
}

Model build_gate_full(const GateParams& p) {
    Model m{three_atom_basis(), {}, {}};
    const Operator raise = raise_all(m.basis, "r", "1");
    m.terms.push_back(HamiltonianTerm::rotating_term(p.omega1 * raise, p.delta));
    m.terms.push_back(HamiltonianTerm::static_term(p.omega2 * (raise + raise.adjoint())));
    m.terms.push_back(HamiltonianTerm::static_term(p.u_rr * pairwise_projectors(m.basis, "r")));
    m.terms.push_back(HamiltonianTerm::static_term(
        stark_compensation(m.basis, p.omega1, p.delta, {{"1", "r"}})));
    add_decay_channels(m, p.gamma, {"0", "1"}, {"r"});
    return m;
}

Model build_gate_effective(const GateParams& p) {
    Model m{three_atom_basis(), {}, {}};
    const Operator a = outer(ket(m.basis, {"r", "0", "0"}), ket(m.basis, {"1", "0", "0"})) +
                       outer(ket(m.basis, {"0", "r", "0"}), ket(m.basis, {"0", "1", "0"})) +
                       outer(ket(m.basis, {"0", "0", "r"}), ket(m.basis, {"0", "0", "1"}));
    m.terms.push_back(HamiltonianTerm::static_term(p.omega2 * (a + a.adjoint())));
    return m;
}

std::pair<State, State> gate_states() {
    const ProductBasis basis = three_atom_basis();
    State psi0 = State::Zero(static_cast<Eigen::Index>(basis.dim()));
    State psis = State::Zero(static_cast<Eigen::Index>(basis.dim()));
    const double amp = 1.0 / (2.0 * std::sqrt(2.0));
    for (const std::string& a : {"0", "1"}) {
        for (const std::string& b : {"0", "1"}) {
            for (const std::string& c : {"0", "1"}) {
                const auto idx = static_cast<Eigen::Index>(basis.index({a, b, c}));
                psi0(idx) = amp;
                const int ones = (a == "1") + (b == "1") + (c == "1");
                psis(idx) = ones == 1 ? -amp : amp;
            }
        }
    }
    return {psi0, psis};
}

Model build_bell_full(const BellParams& p) {
    Model m = build_two_atom_full({p.omega1, p.omega2, p.delta, p.u_rr});
    Operator mw = Operator::Zero(9, 9);
    for (std::size_t i = 0; i < 2; ++i) {
        const double sign = i == 0 ? 1.0 : -1.0;
        const Operator up = site_operator(m.basis, i, "1", "0");
        mw += sign * p.omega_mw * (up + up.adjoint());
    }
    m.terms.push_back(HamiltonianTerm::static_term(mw));
    add_decay_channels(m, p.gamma, {"0", "1"}, {"r"});
    return m;
}

Model build_bell_effective(const BellParams& p) {
    Model m{two_atom_basis(), {}, {}};
    auto k = [&](const char* a, const char* b) { return ket(m.basis, {a, b}); };
    const Operator a = p.omega2 * (outer(k("1", "0"), k("r", "0")) +
                                   outer(k("0", "1"), k("0", "r"))) +
                       p.omega_mw * outer(State(k("1", "1") - k("0", "0")),
                                          State(k("0", "1") - k("1", "0")));
    m.terms.push_back(HamiltonianTerm::static_term(a + a.adjoint()));
    const double amp = std::sqrt(p.gamma / 2.0);
    m.channels.push_back({amp * outer(k("0", "1"), k("0", "r"))});
    m.channels.push_back({amp * outer(k("0", "0"), k("0", "r"))});
    m.channels.push_back({amp * outer(k("1", "0"), k("r", "0"))});
    m.channels.push_back({amp * outer(k("0", "0"), k("r", "0"))});
    return m;
}

std::vector<State> bell_states() {
    const ProductBasis basis = two_atom_basis();
    auto k = [&](const char* a, const char* b) { return ket(basis, {a, b}); };
    const double s = 1.0 / std::sqrt(2.0);
    return {State(s * (k("0", "0") + k("1", "1"))), State(s * (k("0", "0") - k("1", "1"))),
            State(s * (k("0", "1") + k("1", "0"))), State(s * (k("0", "1") - k("1", "0")))};
}

Model build_threeD_full(const ThreeDParams& p) {
    Model m{threeD_basis(), {}, {}};
    const Operator raise = raise_all(m.basis, "r", "1");
    m.terms.push_back(HamiltonianTerm::rotating_term(p.omega1 * raise, p.delta));
    m.terms.push_back(HamiltonianTerm::static_term(p.omega2 * (raise + raise.adjoint())));
    m.terms.push_back(
        HamiltonianTerm::static_term(p.u * pair_projector(m.basis, 0, "r", 1, "r")));

    Operator mw = Operator::Zero(16, 16);
    for (std::size_t i = 0; i < 2; ++i) {
        const double sign = i == 0 ? 1.0 : -1.0;
        const Operator up01 = site_operator(m.basis, i, "1", "0");
        const Operator up21 = site_operator(m.basis, i, "1", "2");
        mw += sign * p.omega_mw1 * (up01 + up01.adjoint());
        mw += sign * p.omega_mw2 * (up21 + up21.adjoint());
    }
    mw += p.delta_small * (site_operator(m.basis, 0, "0", "0") +
                           site_operator(m.basis, 0, "1", "1") +
                           site_operator(m.basis, 1, "2", "2"));
    m.terms.push_back(HamiltonianTerm::static_term(mw));
    m.terms.push_back(HamiltonianTerm::static_term(
        stark_compensation(m.basis, p.omega1, p.delta, {{"1", "r"}})));
    add_decay_channels(m, p.gamma, {"0", "1", "2"}, {"r"});
    return m;
}

Model build_threeD_effective(const ThreeDParams& p) {
    Model m{threeD_basis(), {}, {}};
    auto k = [&](const char* a, const char* b) { return ket(m.basis, {a, b}); };

    Operator a = p.omega2 * (outer(k("1", "0"), k("r", "0")) + outer(k("0", "1"), k("0", "r")) +
                             outer(k("1", "2"), k("r", "2")) + outer(k("2", "1"), k("2", "r")));
    a += p.omega_mw1 * outer(State(k("1", "1") - k("0", "0")), State(k("0", "1") - k("1", "0")));
    a += p.omega_mw1 * (outer(k("0", "2"), k("1", "2")) - outer(k("2", "0"), k("2", "1")));
    a += p.omega_mw2 * outer(State(k("1", "1") - k("2", "2")), State(k("2", "1") - k("1", "2")));
    a += p.omega_mw2 * (outer(k("1", "0"), k("2", "0")) - outer(k("0", "1"), k("0", "2")));
    Operator h = a + a.adjoint();
    h += p.delta_small *
         (outer(k("0", "0"), k("0", "0")) + outer(k("1", "1"), k("1", "1")) +
          outer(k("2", "2"), k("2", "2")) + outer(k("1", "0"), k("1", "0")) +
          outer(k("0", "1"), k("0", "1")) + 2.0 * outer(k("1", "2"), k("1", "2")) +
          2.0 * outer(k("0", "2"), k("0", "2")));
    m.terms.push_back(HamiltonianTerm::static_term(h));

    // Branch-ratio gamma/3 decays for every excited state the reduced
    // Hamiltonian can populate. The |0r> and |r0> sets alone leave |r2> and
    // |2r> undamped, which slows the stabilization well below the full
    // model; the |r2>/|2r> decays complete the recycling.
    const double amp = std::sqrt(p.gamma / 3.0);
    for (const char* g : {"0", "1", "2"}) {
        m.channels.push_back({amp * outer(k("0", g), k("0", "r"))});
        m.channels.push_back({amp * outer(k(g, "0"), k("r", "0"))});
        m.channels.push_back({amp * outer(k(g, "2"), k("r", "2"))});
        m.channels.push_back({amp * outer(k("2", g), k("2", "r"))});
    }
    return m;
}

std::pair<State, State> threeD_states() {
    const ProductBasis basis = threeD_basis();
    auto k = [&](const char* a, const char* b) { return ket(basis, {a, b}); };
    State t1 = (k("0", "0") + k("1", "1") + k("2", "2")) / std::sqrt(3.0);
    State t2 = (3.0 * k("2", "0") + 3.0 * k("0", "2") + 2.0 * k("1", "1") - k("0", "0") -
                k("2", "2")) /
               (2.0 * std::sqrt(6.0));
    return {t1, t2};
}

double calibrate_threeD_delta(const ThreeDParams& p, double t_eval) {
    const ProductBasis basis = threeD_basis();
    const auto [t1, t2] = threeD_states();
    // Fig. 8 initial mixture.
    Operator rho0 = Operator::Zero(16, 16);
    auto add = [&](double w, const char* a, const char* b) {
        const State k = ket(basis, {a, b});
        rho0 += w * (k * k.adjoint());
    };
    add(0.15, "1", "0");
    add(0.35, "2", "1");
    add(0.30, "0", "1");
    add(0.20, "1", "2");

    IntegratorConfig cfg;
    cfg.max_step = t_eval;
    cfg.sample_count = 200;
    cfg.check_positivity = false;

    double best_delta = p.delta_small;
    double best_f = -1.0;
    const double lo = 0.1 * p.omega_mw1, hi = 10.0 * p.omega_mw1;
    constexpr int kPoints = 13;
    for (int i = 0; i < kPoints; ++i) {
        ThreeDParams q = p;
        q.delta_small = lo * std::pow(hi / lo, static_cast<double>(i) / (kPoints - 1));
        const Model m = build_threeD_effective(q);
        Trajectory traj = evolve_master(m.terms, m.channels, rho0, 0.0, t_eval, cfg);
        const double f = fidelity_sqrt(traj.final_rho, t1);
        if (f > best_f) {
            best_f = f;
            best_delta = q.delta_small;
        }
    }
    return best_delta;
}

Model build_qec_full(const QecParams& p, bool include_noise) {
    Model m{qec_basis(), {}, {}};
    const Operator raise = raise_all(m.basis, "p", "0") + raise_all(m.basis, "r", "1");
    m.terms.push_back(HamiltonianTerm::rotating_term(p.omega1 * raise, p.delta));
    m.terms.push_back(HamiltonianTerm::static_term(p.omega2 * (raise + raise.adjoint())));
    // U_rr = U_pp, U_rp = U_pr = 0.
    m.terms.push_back(HamiltonianTerm::static_term(
        p.u_rr * (pairwise_projectors(m.basis, "r") + pairwise_projectors(m.basis, "p"))));
    m.terms.push_back(HamiltonianTerm::static_term(
        stark_compensation(m.basis, p.omega1, p.delta, {{"0", "p"}, {"1", "r"}})));

    for (std::size_t i = 0; i < 3; ++i) {
        m.channels.push_back({std::sqrt(p.kappa_e) * (site_operator(m.basis, i, "0", "r") +
                                                      site_operator(m.basis, i, "1", "p"))});
    }
    if (include_noise && p.gamma_flip > 0.0) {
        for (std::size_t i = 0; i < 3; ++i) {
            m.channels.push_back(
                {std::sqrt(p.gamma_flip) * (site_operator(m.basis, i, "0", "1") +
                                            site_operator(m.basis, i, "1", "0"))});
        }
    }
    add_decay_channels(m, p.gamma, {"0", "1"}, {"r", "p"});
    return m;
}

Model build_qec_effective(const QecParams& p) {
    Model m{qec_basis(), {}, {}};
    auto k = [&](const char* a, const char* b, const char* c) {
        return ket(m.basis, {a, b, c});
    };
    // Single-error states coupled to single-excitation states at Omega_2; the
    // engineered decay then restores the codewords.
    const Operator a = outer(k("1", "0", "0"), k("r", "0", "0")) +
                       outer(k("0", "1", "0"), k("0", "r", "0")) +
                       outer(k("0", "0", "1"), k("0", "0", "r")) +
                       outer(k("1", "1", "0"), k("1", "1", "p")) +
                       outer(k("1", "0", "1"), k("1", "p", "1")) +
                       outer(k("0", "1", "1"), k("p", "1", "1"));
    m.terms.push_back(HamiltonianTerm::static_term(p.omega2 * (a + a.adjoint())));
    for (std::size_t i = 0; i < 3; ++i) {
        m.channels.push_back({std::sqrt(p.kappa_e) * (site_operator(m.basis, i, "0", "r") +
                                                      site_operator(m.basis, i, "1", "p"))});
    }
    return m;
}

std::pair<State, State> qec_states() {
    const ProductBasis basis = qec_basis();
    const Complex i_unit(0.0, 1.0);
    const double s = 1.0 / std::sqrt(2.0);
    State error = s * (ket(basis, {"1", "0", "0"}) + i_unit * ket(basis, {"0", "1", "1"}));
    State code = s * (ket(basis, {"0", "0", "0"}) + i_unit * ket(basis, {"1", "1", "1"}));
    return {error, code};
}

double effective_kappa(double g, double kappa) {
    if (kappa <= 0.0) {
        throw std::invalid_argument("effective_kappa requires kappa > 0");
    }
    return 4.0 * g * g / kappa;
}

}  // namespace urpsim
