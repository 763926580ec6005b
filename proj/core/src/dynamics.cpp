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

#include "urpsim/dynamics.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/SparseCore>

namespace urpsim {

namespace {

using SpMat = Eigen::SparseMatrix<Complex>;

SpMat to_sparse(const Operator& m, double drop_tol = 1e-15) {
    std::vector<Eigen::Triplet<Complex>> trips;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (std::abs(m(i, j)) > drop_tol) {
                trips.emplace_back(i, j, m(i, j));
            }
        }
    }
    SpMat out(m.rows(), m.cols());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

void check_common_dimension(const std::vector<HamiltonianTerm>& terms,
                            const std::vector<LindbladChannel>& channels, Eigen::Index dim) {
    for (const auto& t : terms) {
        if (t.op.rows() != dim || t.op.cols() != dim) {
            throw std::invalid_argument("Hamiltonian term dimension mismatch");
        }
    }
    for (const auto& c : channels) {
        if (c.op.rows() != dim || c.op.cols() != dim) {
            throw std::invalid_argument("Lindblad channel dimension mismatch");
        }
    }
}

double max_rotating_frequency(const std::vector<HamiltonianTerm>& terms) {
    double w = 0.0;
    for (const auto& t : terms) {
        if (t.rotating) w = std::max(w, std::abs(t.omega));
    }
    return w;
}

/// Coordinate-list sparse operator tuned for the small, very sparse matrices
/// of these models.
struct SparseOp {
    struct Entry {
        Eigen::Index row, col;
        Complex v;
    };
    std::vector<Entry> entries;

    static SparseOp from(const Operator& m, double drop_tol = 1e-15) {
        SparseOp op;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                if (std::abs(m(i, j)) > drop_tol) op.entries.push_back({i, j, m(i, j)});
            }
        }
        return op;
    }

    /// out += coef * (X * M); contiguous column axpys.
    void right_apply(const Operator& x, Complex coef, Operator& out) const {
        const Eigen::Index dim = x.rows();
        for (const auto& e : entries) {
            out.col(e.col) += (coef * e.v) * x.col(e.row);
        }
        (void)dim;
    }

    /// y += coef * (M * x).
    void apply_vec(const State& x, Complex coef, State& y) const {
        for (const auto& e : entries) {
            y(e.row) += coef * e.v * x(e.col);
        }
    }
};

/// Precompiled representation of the master-equation generator.
///
/// Valid for Hermitian rho (H rho is obtained as (rho H)^dag); every RK stage
/// stays exactly Hermitian because the evaluation below maps Hermitian input
/// to Hermitian output.
struct CompiledMaster {
    struct Rot {
        SparseOp a, adag;
        double omega;
    };

    Eigen::Index dim;
    SparseOp h_static;
    std::vector<Rot> rots;
    std::vector<SparseOp> chans;          // jump operators
    bool diag_ldagl = true;
    Eigen::VectorXd half_ldagl_diag;      // 0.5 * diag(sum L^dag L) when diagonal
    SparseOp half_ldagl;                  // general fallback

    mutable Operator rho_h, scratch;

    CompiledMaster(const std::vector<HamiltonianTerm>& terms,
                   const std::vector<LindbladChannel>& channels, Eigen::Index dim_)
        : dim(dim_) {
        Operator stat = Operator::Zero(dim, dim);
        for (const auto& t : terms) {
            if (t.rotating) {
                rots.push_back({SparseOp::from(t.op), SparseOp::from(t.op.adjoint()), t.omega});
            } else {
                stat += t.op;
            }
        }
        h_static = SparseOp::from(stat);
        Operator ldagl = Operator::Zero(dim, dim);
        for (const auto& c : channels) {
            chans.push_back(SparseOp::from(c.op));
            ldagl += c.op.adjoint() * c.op;
        }
        Operator offdiag = ldagl;
        offdiag.diagonal().setZero();
        diag_ldagl = offdiag.cwiseAbs().maxCoeff() <= 1e-15;
        half_ldagl_diag = 0.5 * ldagl.diagonal().real();
        half_ldagl = SparseOp::from(0.5 * ldagl);
        rho_h.resize(dim, dim);
        scratch.resize(dim, dim);
    }

    void operator()(const Operator& rho, double t, Operator& out) const {
        // rho_h = rho * H(t); then H rho = rho_h^dag.
        rho_h.setZero();
        h_static.right_apply(rho, Complex(1.0, 0.0), rho_h);
        for (const auto& r : rots) {
            const Complex ph = std::exp(Complex(0.0, -r.omega * t));
            r.a.right_apply(rho, ph, rho_h);
            r.adag.right_apply(rho, std::conj(ph), rho_h);
        }
        // Fused commutator and (diagonal) anticommutator pass.
        if (diag_ldagl) {
            for (Eigen::Index j = 0; j < dim; ++j) {
                for (Eigen::Index i = 0; i < dim; ++i) {
                    const Complex c = std::conj(rho_h(j, i)) - rho_h(i, j);
                    out(i, j) = Complex(0.0, -1.0) * c -
                                (half_ldagl_diag(i) + half_ldagl_diag(j)) * rho(i, j);
                }
            }
        } else {
            scratch.setZero();
            half_ldagl.right_apply(rho, Complex(1.0, 0.0), scratch);
            for (Eigen::Index j = 0; j < dim; ++j) {
                for (Eigen::Index i = 0; i < dim; ++i) {
                    const Complex c = std::conj(rho_h(j, i)) - rho_h(i, j);
                    out(i, j) = Complex(0.0, -1.0) * c - scratch(i, j) -
                                std::conj(scratch(j, i));
                }
            }
        }
        // Jump terms L rho L^dag by direct entry-pair scatter.
        for (const auto& l : chans) {
            for (const auto& e1 : l.entries) {
                for (const auto& e2 : l.entries) {
                    out(e1.row, e2.row) += e1.v * std::conj(e2.v) * rho(e1.col, e2.col);
                }
            }
        }
    }
};

struct CompiledUnitary {
    struct Rot {
        SparseOp a, adag;
        double omega;
    };
    SparseOp h_static;
    std::vector<Rot> rots;

    CompiledUnitary(const std::vector<HamiltonianTerm>& terms, Eigen::Index dim) {
        Operator stat = Operator::Zero(dim, dim);
        for (const auto& t : terms) {
            if (t.rotating) {
                rots.push_back({SparseOp::from(t.op), SparseOp::from(t.op.adjoint()), t.omega});
            } else {
                stat += t.op;
            }
        }
        h_static = SparseOp::from(stat);
    }

    void operator()(const State& psi, double t, State& out) const {
        out.setZero();
        h_static.apply_vec(psi, Complex(0.0, -1.0), out);
        const Complex minus_i(0.0, -1.0);
        for (const auto& r : rots) {
            const Complex ph = std::exp(Complex(0.0, -r.omega * t));
            r.a.apply_vec(psi, minus_i * ph, out);
            r.adag.apply_vec(psi, minus_i * std::conj(ph), out);
        }
    }
};

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kE1 = kB1 - 5179.0 / 57600.0, kE3 = kB3 - 7571.0 / 16695.0,
                 kE4 = kB4 - 393.0 / 640.0, kE5 = kB5 + 92097.0 / 339200.0,
                 kE6 = kB6 - 187.0 / 2100.0, kE7 = -1.0 / 40.0;
constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;

template <typename Y>
double rms_norm(const Y& y) {
    return y.norm() / std::sqrt(static_cast<double>(y.size()));
}

/// Shared driver for both state representations. `post` runs after each
/// accepted step (hermitization, trace guard), `record` at recorded points.
template <typename Y, typename Rhs, typename Post, typename Record>
void integrate(Y& y, double t0, double t_final, const IntegratorConfig& cfg, double step_cap,
               const Rhs& rhs, const Post& post, const Record& record, Trajectory& traj) {
    if (step_cap <= 0.0) throw std::invalid_argument("max_step must be positive");
    if (t_final < t0) throw std::invalid_argument("t_final must be >= t0");

    const double tiny = 1e-12 * std::max({1.0, std::abs(t0), std::abs(t_final)});
    record(t0, y);
    if (t_final - t0 <= tiny) return;

    std::vector<double> samples;
    if (cfg.sample_count > 0) {
        samples.reserve(cfg.sample_count);
        for (std::size_t i = 1; i <= cfg.sample_count; ++i) {
            samples.push_back(t0 + (t_final - t0) * static_cast<double>(i) /
                                       static_cast<double>(cfg.sample_count));
        }
        samples.back() = t_final;
    }
    std::size_t next_sample = 0;

    Y k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y, ytmp = y, ynew = y, yerr = y;
    double t = t0;
    double h = std::min(step_cap, (t_final - t0) / 100.0);
    const bool adaptive = cfg.method == Method::AdaptiveRk45;

    std::size_t accepted = 0;
    bool recorded_last = true;
    while (t < t_final - tiny) {
        double target = samples.empty() ? t_final : samples[next_sample];
        double h_try = std::min(h, step_cap);
        bool hits_target = false;
        if (t + h_try >= target - tiny) {
            h_try = target - t;
            hits_target = true;
        }

        bool accept = true;
        if (!adaptive) {
            rhs(y, t, k1);
            ytmp = y + (0.5 * h_try) * k1;
            rhs(ytmp, t + 0.5 * h_try, k2);
            ytmp = y + (0.5 * h_try) * k2;
            rhs(ytmp, t + 0.5 * h_try, k3);
            ytmp = y + h_try * k3;
            rhs(ytmp, t + h_try, k4);
            ynew = y + (h_try / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        } else {
            rhs(y, t, k1);
            ytmp = y + h_try * (kA21 * k1);
            rhs(ytmp, t + kC2 * h_try, k2);
            ytmp = y + h_try * (kA31 * k1 + kA32 * k2);
            rhs(ytmp, t + kC3 * h_try, k3);
            ytmp = y + h_try * (kA41 * k1 + kA42 * k2 + kA43 * k3);
            rhs(ytmp, t + kC4 * h_try, k4);
            ytmp = y + h_try * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4);
            rhs(ytmp, t + kC5 * h_try, k5);
            ytmp = y + h_try * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5);
            rhs(ytmp, t + h_try, k6);
            ynew = y + h_try * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
            rhs(ynew, t + h_try, k7);
            yerr = h_try * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);

            const double scale =
                cfg.abs_tol + cfg.rel_tol * std::max(rms_norm(y), rms_norm(ynew));
            const double err = rms_norm(yerr) / scale;
            if (err <= 1.0) {
                const double fac = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
                h = std::min(step_cap, h_try * fac);
            } else {
                accept = false;
                h = h_try * std::max(0.2, 0.9 * std::pow(err, -0.2));
                ++traj.steps_rejected;
                if (h < 1e-14 * std::max(1.0, std::abs(t))) {
                    std::ostringstream msg;
                    msg << "adaptive step size underflow at t = " << t
                        << " (cannot meet tolerance rel_tol = " << cfg.rel_tol << ")";
                    throw std::runtime_error(msg.str());
                }
            }
        }
        if (!accept) continue;

        t = hits_target ? target : t + h_try;
        y = ynew;
        post(y, t);
        ++accepted;
        ++traj.steps_accepted;

        recorded_last = false;
        if (!samples.empty()) {
            if (hits_target) {
                record(t, y);
                recorded_last = true;
                ++next_sample;
                if (next_sample == samples.size()) break;
            }
        } else if (accepted % std::max<std::size_t>(1, cfg.record_stride) == 0) {
            record(t, y);
            recorded_last = true;
        }
    }
    if (!recorded_last) record(t, y);
}

}  // namespace

HamiltonianTerm HamiltonianTerm::static_term(Operator h) {
    if (!is_hermitian(h, 1e-12)) {
        throw std::invalid_argument("static Hamiltonian term must be Hermitian");
    }
    return {std::move(h), 0.0, false};
}

HamiltonianTerm HamiltonianTerm::rotating_term(Operator a, double omega) {
    if (!std::isfinite(omega)) {
        throw std::invalid_argument("rotating frequency must be finite");
    }
    return {std::move(a), omega, true};
}

const std::vector<double>& Trajectory::observable(const std::string& name) const {
    for (const auto& [obs_name, values] : observables) {
        if (obs_name == name) return values;
    }
    throw std::invalid_argument("no observable named '" + name + "' in trajectory");
}

Operator hamiltonian_at(const std::vector<HamiltonianTerm>& terms, double t) {
    if (terms.empty()) {
        throw std::invalid_argument("hamiltonian_at needs at least one term");
    }
    const Eigen::Index dim = terms.front().op.rows();
    check_common_dimension(terms, {}, dim);
    Operator h = Operator::Zero(dim, dim);
    for (const auto& term : terms) {
        if (term.rotating) {
            const Complex ph = std::exp(Complex(0.0, -term.omega * t));
            h += ph * term.op + std::conj(ph) * term.op.adjoint();
        } else {
            h += term.op;
        }
    }
    return h;
}

Operator lindblad_rhs(const std::vector<HamiltonianTerm>& terms,
                      const std::vector<LindbladChannel>& channels, const Operator& rho,
                      double t) {
    const Eigen::Index dim = rho.rows();
    if (rho.cols() != dim) throw std::invalid_argument("rho must be square");
    check_common_dimension(terms, channels, dim);
    Operator out = Operator::Zero(dim, dim);
    if (!terms.empty()) {
        const Operator h = hamiltonian_at(terms, t);
        out = Complex(0.0, -1.0) * (h * rho - rho * h);
    }
    for (const auto& c : channels) {
        const Operator ldagl = c.op.adjoint() * c.op;
        out += c.op * rho * c.op.adjoint() - 0.5 * (ldagl * rho + rho * ldagl);
    }
    return out;
}

Trajectory evolve_master(const std::vector<HamiltonianTerm>& terms,
                         const std::vector<LindbladChannel>& channels, const Operator& rho0,
                         double t0, double t_final, const IntegratorConfig& cfg,
                         const std::vector<NamedRhoObservable>& observables) {
    const Eigen::Index dim = rho0.rows();
    if (rho0.cols() != dim) throw std::invalid_argument("rho0 must be square");
    check_common_dimension(terms, channels, dim);

    double cap = cfg.max_step;
    const double maxw = max_rotating_frequency(terms);
    if (maxw > 0.0) cap = std::min(cap, 2.0 * std::numbers::pi / (10.0 * maxw));

    CompiledMaster rhs(terms, channels, dim);

    Trajectory traj;
    for (const auto& obs : observables) traj.observables.emplace_back(obs.name, std::vector<double>{});

    auto post = [&](Operator& rho, double t) {
        if (cfg.hermitize_every_step) rho = 0.5 * (rho + rho.adjoint()).eval();
        const Complex tr = rho.trace();
        const double drift = std::abs(tr.real() - 1.0) + std::abs(tr.imag());
        if (drift > 1e-5) {
            std::ostringstream msg;
            msg << "trace drift " << drift << " beyond 1e-5 at t = " << t
                << "; reduce max_step or tighten tolerances";
            throw std::runtime_error(msg.str());
        }
    };
    auto record = [&](double t, const Operator& rho) {
        traj.times.push_back(t);
        for (std::size_t i = 0; i < observables.size(); ++i) {
            traj.observables[i].second.push_back(observables[i].fn(t, rho));
        }
        const Complex tr = rho.trace();
        traj.max_trace_dev =
            std::max(traj.max_trace_dev, std::abs(tr.real() - 1.0) + std::abs(tr.imag()));
        traj.max_herm_dev =
            std::max(traj.max_herm_dev, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
        if (cfg.check_positivity) {
            Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (rho + rho.adjoint()),
                                                       Eigen::EigenvaluesOnly);
            traj.min_eigenvalue = std::min(traj.min_eigenvalue, es.eigenvalues().minCoeff());
        }
    };

    Operator rho = rho0;
    integrate(rho, t0, t_final, cfg, cap, rhs, post, record, traj);
    traj.final_rho = std::move(rho);
    return traj;
}

Trajectory evolve_unitary(const std::vector<HamiltonianTerm>& terms, const State& psi0, double t0,
                          double t_final, const IntegratorConfig& cfg,
                          const std::vector<NamedPsiObservable>& observables) {
    const Eigen::Index dim = psi0.size();
    check_common_dimension(terms, {}, dim);

    double cap = cfg.max_step;
    const double maxw = max_rotating_frequency(terms);
    if (maxw > 0.0) cap = std::min(cap, 2.0 * std::numbers::pi / (10.0 * maxw));

    CompiledUnitary rhs(terms, dim);

    Trajectory traj;
    for (const auto& obs : observables) traj.observables.emplace_back(obs.name, std::vector<double>{});

    auto post = [](State&, double) {};
    auto record = [&](double t, const State& psi) {
        traj.times.push_back(t);
        for (std::size_t i = 0; i < observables.size(); ++i) {
            traj.observables[i].second.push_back(observables[i].fn(t, psi));
        }
        traj.max_norm_dev = std::max(traj.max_norm_dev, std::abs(psi.norm() - 1.0));
    };

    State psi = psi0;
    integrate(psi, t0, t_final, cfg, cap, rhs, post, record, traj);
    traj.final_psi = std::move(psi);
    return traj;
}

std::pair<std::vector<HamiltonianTerm>, std::vector<LindbladChannel>> rotating_frame(
    const std::vector<HamiltonianTerm>& terms, const Operator& generator,
    const std::vector<LindbladChannel>& channels) {
    const Eigen::Index dim = generator.rows();
    if (generator.cols() != dim) throw std::invalid_argument("generator must be square");
    check_common_dimension(terms, channels, dim);
    Operator offdiag = generator;
    offdiag.diagonal().setZero();
    if (offdiag.cwiseAbs().maxCoeff() > 1e-12 ||
        generator.diagonal().imag().cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("rotating_frame requires a diagonal Hermitian generator");
    }
    const Eigen::VectorXd g = generator.diagonal().real();

    // One-sided decomposition: collect sum_nu B_nu e^{i nu t}; the transform
    // shifts each matrix element's frequency by the generator gap g_a - g_b.
    constexpr double kFreqTol = 1e-9;
    auto key_of = [](double w) { return std::llround(w / kFreqTol); };
    std::map<long long, std::pair<Operator, double>> buckets;
    auto bucket = [&](double nu) -> Operator& {
        auto [it, inserted] =
            buckets.try_emplace(key_of(nu), Operator::Zero(dim, dim), nu);
        return it->second.first;
    };

    for (const auto& term : terms) {
        std::vector<std::pair<Operator, double>> pieces;
        if (term.rotating) {
            pieces.emplace_back(term.op, -term.omega);
            pieces.emplace_back(term.op.adjoint(), term.omega);
        } else {
            pieces.emplace_back(term.op, 0.0);
        }
        for (const auto& [b, nu] : pieces) {
            for (Eigen::Index a = 0; a < dim; ++a) {
                for (Eigen::Index c = 0; c < dim; ++c) {
                    if (std::abs(b(a, c)) > 1e-15) {
                        bucket(nu + g(a) - g(c))(a, c) += b(a, c);
                    }
                }
            }
        }
    }

    std::vector<HamiltonianTerm> out_terms;
    Operator stat = -generator;
    if (auto it = buckets.find(0); it != buckets.end()) stat += it->second.first;
    out_terms.push_back(HamiltonianTerm::static_term(stat));

    for (const auto& [key, entry] : buckets) {
        if (key <= 0) continue;
        const auto& [b_pos, nu] = entry;
        auto partner = buckets.find(-key);
        if (partner == buckets.end() ||
            (partner->second.first - b_pos.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
            throw std::invalid_argument(
                "transformed Hamiltonian is not Hermitian; inconsistent term list");
        }
        out_terms.push_back(HamiltonianTerm::rotating_term(partner->second.first, nu));
    }

    std::vector<LindbladChannel> out_channels;
    for (const auto& chan : channels) {
        bool have_gap = false;
        double gap = 0.0;
        for (Eigen::Index a = 0; a < dim; ++a) {
            for (Eigen::Index c = 0; c < dim; ++c) {
                if (std::abs(chan.op(a, c)) > 1e-15) {
                    const double d = g(a) - g(c);
                    if (!have_gap) {
                        gap = d;
                        have_gap = true;
                    } else if (std::abs(d - gap) > kFreqTol) {
                        throw std::invalid_argument(
                            "jump operator mixes generator gaps; dissipator is not frame "
                            "invariant");
                    }
                }
            }
        }
        out_channels.push_back(chan);
    }
    return {std::move(out_terms), std::move(out_channels)};
}

}  // namespace urpsim
