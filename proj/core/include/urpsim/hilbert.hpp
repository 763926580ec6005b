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

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace urpsim {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using State = Eigen::VectorXcd;

/// Ordered level names of a single site, e.g. {"0", "1", "r"}.
struct LevelScheme {
    std::vector<std::string> labels;

    std::size_t size() const { return labels.size(); }
    /// Position of `label` within this scheme; throws on unknown labels.
    std::size_t index_of(const std::string& label) const;
};

/// Tensor-product space of heterogeneous multi-level sites.
///
/// Indexing is lexicographic with the leftmost site most significant, so for
/// two three-level sites |00> -> 0, |01> -> 1, ..., |rr> -> 8.
class ProductBasis {
  public:
    explicit ProductBasis(std::vector<LevelScheme> sites);

    std::size_t dim() const { return dim_; }
    std::size_t num_sites() const { return sites_.size(); }
    const LevelScheme& site(std::size_t i) const;

    /// Index of the basis state with the given per-site labels.
    std::size_t index(const std::vector<std::string>& labels) const;
    /// Inverse of index(); round-trips for every valid index.
    std::vector<std::string> labels_of(std::size_t index) const;

  private:
    std::vector<LevelScheme> sites_;
    std::size_t dim_;
};

/// Unit basis vector |labels>.
State ket(const ProductBasis& basis, const std::vector<std::string>& labels);

/// |bra><ket| acting on one site, identity on all the others.
Operator site_operator(const ProductBasis& basis, std::size_t site,
                       const std::string& bra_level, const std::string& ket_level);

/// Projector onto "site i in level_a and site j in level_b", i != j.
Operator pair_projector(const ProductBasis& basis, std::size_t site_i,
                        const std::string& level_a, std::size_t site_j,
                        const std::string& level_b);

/// Kronecker product consistent with the basis ordering above.
/// Throws if the result dimension would exceed max_dim.
Operator kron(const Operator& a, const Operator& b, std::size_t max_dim = 4096);

inline Operator dagger(const Operator& a) { return a.adjoint(); }

bool is_hermitian(const Operator& a, double tol = 1e-12);

/// Validates Hermiticity (1e-10), unit trace (1e-10) and spectrum >= -1e-8.
/// Throws std::invalid_argument with a diagnostic on violation.
void check_density_matrix(const Operator& rho);

/// Validates that psi has unit norm within 1e-12.
void check_pure_state(const State& psi);

}  // namespace urpsim
