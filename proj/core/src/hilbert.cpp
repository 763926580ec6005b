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

#include "urpsim/hilbert.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace urpsim {

std::size_t LevelScheme::index_of(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
        throw std::invalid_argument("unknown level label '" + label + "'");
    }
    return static_cast<std::size_t>(it - labels.begin());
}

ProductBasis::ProductBasis(std::vector<LevelScheme> sites) : sites_(std::move(sites)) {
    if (sites_.empty()) {
        throw std::invalid_argument("ProductBasis needs at least one site");
    }
    dim_ = 1;
    for (const auto& s : sites_) {
        if (s.labels.empty()) {
            throw std::invalid_argument("LevelScheme must have at least one label");
        }
        std::set<std::string> unique(s.labels.begin(), s.labels.end());
        if (unique.size() != s.labels.size()) {
            throw std::invalid_argument("LevelScheme labels must be unique within a site");
        }
        dim_ *= s.size();
    }
}

const LevelScheme& ProductBasis::site(std::size_t i) const {
    if (i >= sites_.size()) {
        throw std::invalid_argument("site index out of range");
    }
    return sites_[i];
}

std::size_t ProductBasis::index(const std::vector<std::string>& labels) const {
    if (labels.size() != sites_.size()) {
        throw std::invalid_argument("expected one label per site");
    }
    std::size_t idx = 0;
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        idx = idx * sites_[i].size() + sites_[i].index_of(labels[i]);
    }
    return idx;
}

std::vector<std::string> ProductBasis::labels_of(std::size_t index) const {
    if (index >= dim_) {
        throw std::invalid_argument("basis index out of range");
    }
    std::vector<std::string> labels(sites_.size());
    for (std::size_t i = sites_.size(); i-- > 0;) {
        const std::size_t n = sites_[i].size();
        labels[i] = sites_[i].labels[index % n];
        index /= n;
    }
    return labels;
}

State ket(const ProductBasis& basis, const std::vector<std::string>& labels) {
    State psi = State::Zero(static_cast<Eigen::Index>(basis.dim()));
    psi(static_cast<Eigen::Index>(basis.index(labels))) = 1.0;
    return psi;
}

Operator site_operator(const ProductBasis& basis, std::size_t site,
                       const std::string& bra_level, const std::string& ket_level) {
    const auto& scheme = basis.site(site);
    const std::size_t n = scheme.size();
    Operator local = Operator::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    local(static_cast<Eigen::Index>(scheme.index_of(bra_level)),
          static_cast<Eigen::Index>(scheme.index_of(ket_level))) = 1.0;

    Operator full = Operator::Identity(1, 1);
    for (std::size_t i = 0; i < basis.num_sites(); ++i) {
        const auto ni = static_cast<Eigen::Index>(basis.site(i).size());
        full = kron(full, i == site ? local : Operator::Identity(ni, ni));
    }
    return full;
}

Operator pair_projector(const ProductBasis& basis, std::size_t site_i,
                        const std::string& level_a, std::size_t site_j,
                        const std::string& level_b) {
    if (site_i == site_j) {
        throw std::invalid_argument("pair_projector requires two distinct sites");
    }
    return site_operator(basis, site_i, level_a, level_a) *
           site_operator(basis, site_j, level_b, level_b);
}

Operator kron(const Operator& a, const Operator& b, std::size_t max_dim) {
    const std::size_t dim = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
    if (dim > max_dim) {
        std::ostringstream msg;
        msg << "kron result dimension " << dim << " exceeds cap " << max_dim;
        throw std::length_error(msg.str());
    }
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

bool is_hermitian(const Operator& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void check_density_matrix(const Operator& rho) {
    if (rho.rows() != rho.cols()) {
        throw std::invalid_argument("density matrix must be square");
    }
    const double herm_dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > 1e-10) {
        std::ostringstream msg;
        msg << "density matrix not Hermitian, deviation " << herm_dev;
        throw std::invalid_argument(msg.str());
    }
    const double trace_dev = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
    if (trace_dev > 1e-10) {
        std::ostringstream msg;
        msg << "density matrix trace deviates from 1 by " << trace_dev;
        throw std::invalid_argument(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (rho + rho.adjoint()),
                                               Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8) {
        std::ostringstream msg;
        msg << "density matrix has negative eigenvalue " << es.eigenvalues().minCoeff();
        throw std::invalid_argument(msg.str());
    }
}

void check_pure_state(const State& psi) {
    if (std::abs(psi.norm() - 1.0) > 1e-12) {
        throw std::invalid_argument("pure state is not normalized");
    }
}

}  // namespace urpsim
