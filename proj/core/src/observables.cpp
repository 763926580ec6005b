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

#include "urpsim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

namespace urpsim {

double population(const Operator& rho, const State& psi) {
    if (rho.rows() != psi.size() || rho.cols() != psi.size()) {
        throw std::invalid_argument("population: dimension mismatch");
    }
    const double p = (psi.adjoint() * rho * psi).value().real();
    if (p < -1e-9 || p > 1.0 + 1e-9) {
        // Tolerate integrator-scale negativity only.
        if (p < -1e-6 || p > 1.0 + 1e-6) {
            throw std::invalid_argument("population outside [0,1] beyond tolerance");
        }
    }
    return std::clamp(p, 0.0, 1.0);
}

double fidelity_sqrt(const Operator& rho, const State& psi) {
    return std::sqrt(population(rho, psi));
}

double overlap_amplitude(const State& psi_t, const State& psi_s) {
    if (psi_t.size() != psi_s.size()) {
        throw std::invalid_argument("overlap_amplitude: dimension mismatch");
    }
    return std::abs(psi_s.dot(psi_t));
}

State vec(const Operator& m) {
    return Eigen::Map<const State>(m.data(), m.size());
}

Operator unvec(const State& v) {
    const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (dim * dim != v.size()) {
        throw std::invalid_argument("unvec: length is not a perfect square");
    }
    return Eigen::Map<const Operator>(v.data(), dim, dim);
}

Operator liouvillian_matrix(const std::vector<HamiltonianTerm>& terms,
                            const std::vector<LindbladChannel>& channels) {
    Eigen::Index dim = 0;
    for (const auto& t : terms) {
        if (t.rotating) {
            throw std::invalid_argument(
                "liouvillian_matrix requires a time-independent generator (static terms only)");
        }
        dim = t.op.rows();
    }
    for (const auto& c : channels) dim = c.op.rows();
    if (dim == 0) throw std::invalid_argument("liouvillian_matrix: no terms or channels");

    const Operator id = Operator::Identity(dim, dim);
    const std::size_t cap = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
    Operator m = Operator::Zero(dim * dim, dim * dim);
    if (!terms.empty()) {
        const Operator h = hamiltonian_at(terms, 0.0);
        m -= Complex(0.0, 1.0) * (kron(id, h, cap) - kron(h.transpose(), id, cap));
    }
    for (const auto& c : channels) {
        const Operator ldagl = c.op.adjoint() * c.op;
        m += kron(c.op.conjugate(), c.op, cap);
        m -= 0.5 * kron(id, ldagl, cap);
        m -= 0.5 * kron(ldagl.transpose(), id, cap);
    }
    return m;
}

SteadyStateReport steady_states(const Operator& superop, double tol) {
    if (superop.rows() != superop.cols()) {
        throw std::invalid_argument("steady_states: superoperator must be square");
    }
    Eigen::BDCSVD<Operator> svd(superop, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();

    SteadyStateReport report;
    const Eigen::Index n = sv.size();
    Eigen::Index null_count = 0;
    for (Eigen::Index i = n - 1; i >= 0 && sv(i) < tol; --i) ++null_count;
    report.null_dimension = static_cast<std::size_t>(null_count);

    // Separation between the retained null directions and the rest.
    if (null_count > 0 && null_count < n) {
        const double largest_discarded = sv(n - null_count - 1);
        if (largest_discarded < 10.0 * tol) report.ill_conditioned = true;
    }

    for (Eigen::Index i = n - null_count; i < n; ++i) {
        const State v = svd.matrixV().col(i);
        Operator rho = unvec(v);
        report.residuals.push_back((superop * v).norm());
        const Complex tr = rho.trace();
        if (std::abs(tr) > 1e-8) {
            rho /= tr;
        }
        report.basis.push_back(std::move(rho));
    }
    return report;
}

std::vector<Eigen::Index> support_indices(const std::vector<HamiltonianTerm>& terms,
                                          const std::vector<LindbladChannel>& channels) {
    Eigen::Index dim = 0;
    for (const auto& t : terms) dim = t.op.rows();
    for (const auto& c : channels) dim = c.op.rows();
    std::vector<bool> active(static_cast<std::size_t>(dim), false);
    auto mark = [&](const Operator& op) {
        for (Eigen::Index i = 0; i < op.rows(); ++i) {
            if (op.row(i).cwiseAbs().maxCoeff() > 1e-14 ||
                op.col(i).cwiseAbs().maxCoeff() > 1e-14) {
                active[static_cast<std::size_t>(i)] = true;
            }
        }
    };
    for (const auto& t : terms) mark(t.op);
    for (const auto& c : channels) mark(c.op);
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < dim; ++i)
        if (active[static_cast<std::size_t>(i)]) idx.push_back(i);
    return idx;
}

Operator restrict_operator(const Operator& op, const std::vector<Eigen::Index>& idx) {
    const Eigen::Index n = static_cast<Eigen::Index>(idx.size());
    Operator out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = op(idx[i], idx[j]);
    return out;
}

State restrict_state(const State& psi, const std::vector<Eigen::Index>& idx) {
    State out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = psi(idx[i]);
    return out;
}

Operator liouvillian_on_support(const std::vector<HamiltonianTerm>& terms,
                                const std::vector<LindbladChannel>& channels,
                                std::vector<Eigen::Index>* idx_out) {
    const auto idx = support_indices(terms, channels);
    std::vector<HamiltonianTerm> terms_r;
    for (const auto& t : terms) {
        if (t.rotating) {
            throw std::invalid_argument(
                "liouvillian_on_support requires a time-independent generator");
        }
        terms_r.push_back(HamiltonianTerm::static_term(restrict_operator(t.op, idx)));
    }
    std::vector<LindbladChannel> channels_r;
    for (const auto& c : channels) channels_r.push_back({restrict_operator(c.op, idx)});
    if (idx_out != nullptr) *idx_out = idx;
    return liouvillian_matrix(terms_r, channels_r);
}

double trajectory_deviation(const Trajectory& a, const Trajectory& b,
                            const std::string& observable_name) {
    if (a.times.size() != b.times.size()) {
        throw std::invalid_argument("trajectory_deviation: time grids differ in length");
    }
    const double tscale = a.times.empty() ? 1.0 : std::max(1.0, std::abs(a.times.back()));
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        if (std::abs(a.times[i] - b.times[i]) > 1e-9 * tscale) {
            throw std::invalid_argument("trajectory_deviation: time grids do not coincide");
        }
    }
    const auto& va = a.observable(observable_name);
    const auto& vb = b.observable(observable_name);
    double dev = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        dev = std::max(dev, std::abs(va[i] - vb[i]));
    }
    return dev;
}

}  // namespace urpsim
