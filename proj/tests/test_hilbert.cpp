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

#include <random>
#include <stdexcept>

#include "doctest.h"

namespace {

using namespace urpsim;

ProductBasis two_three_level() {
    LevelScheme s{{"0", "1", "r"}};
    return ProductBasis({s, s});
}

ProductBasis three_three_level() {
    LevelScheme s{{"0", "1", "r"}};
    return ProductBasis({s, s, s});
}

Operator random_operator(std::size_t dim, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    Operator m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) m(i, j) = Complex(nd(gen), nd(gen));
    return m;
}

TEST_CASE("basis indexing is lexicographic, leftmost site most significant") {
    auto b2 = two_three_level();
    CHECK(b2.dim() == 9);
    CHECK(b2.index({"0", "0"}) == 0);
    CHECK(b2.index({"r", "r"}) == 8);
    auto b3 = three_three_level();
    CHECK(b3.index({"1", "1", "1"}) == 13);
}

TEST_CASE("basis index round-trips and rejects bad labels") {
    auto b = three_three_level();
    for (std::size_t i = 0; i < b.dim(); ++i) CHECK(b.index(b.labels_of(i)) == i);
    CHECK_THROWS_AS(b.index({"0", "0", "x"}), std::invalid_argument);
    CHECK_THROWS_AS(b.index({"0", "0"}), std::invalid_argument);
}

TEST_CASE("heterogeneous sites multiply out") {
    ProductBasis b({LevelScheme{{"0", "1"}}, LevelScheme{{"0", "1", "2", "r"}}});
    CHECK(b.dim() == 8);
    CHECK(b.index({"1", "r"}) == 7);
    for (std::size_t i = 0; i < b.dim(); ++i) CHECK(b.index(b.labels_of(i)) == i);
}

TEST_CASE("ket is the unit basis vector") {
    auto b = two_three_level();
    State k11 = ket(b, {"1", "1"});
    CHECK(std::abs(k11(4) - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(k11.norm() - 1.0) < 1e-15);
    State k10 = ket(b, {"1", "0"});
    CHECK(std::abs(k10.dot(k11)) < 1e-15);
}

TEST_CASE("site_operator embeds |bra><ket| with identity elsewhere") {
    auto b = two_three_level();
    Operator op = site_operator(b, 0, "r", "1");
    // <r0| Op |10> = 1 and nothing else feeds the |r0> row.
    auto r0 = b.index({"r", "0"});
    auto i10 = b.index({"1", "0"});
    CHECK(std::abs(op(r0, i10) - Complex(1, 0)) < 1e-15);
    for (std::size_t j = 0; j < b.dim(); ++j)
        if (j != i10) CHECK(std::abs(op(r0, j)) < 1e-15);

    Operator p0 = site_operator(b, 0, "0", "0");
    CHECK((p0 * p0 - p0).norm() < 1e-14);
    CHECK((dagger(site_operator(b, 0, "r", "1")) - site_operator(b, 0, "1", "r")).norm() <
          1e-14);
}

TEST_CASE("same-site products compose, distinct sites commute") {
    auto b = two_three_level();
    // |r><1| . |1><0| = |r><0| at one site.
    CHECK((site_operator(b, 0, "r", "1") * site_operator(b, 0, "1", "0") -
           site_operator(b, 0, "r", "0"))
              .norm() < 1e-14);
    // |r><1| . |0><1| = 0 (delta mismatch).
    CHECK((site_operator(b, 0, "r", "1") * site_operator(b, 0, "0", "1")).norm() < 1e-14);
    Operator a = site_operator(b, 0, "r", "1");
    Operator c = site_operator(b, 1, "0", "r");
    CHECK((a * c - c * a).norm() < 1e-14);
}

TEST_CASE("pair_projector") {
    auto b2 = two_three_level();
    Operator prr = pair_projector(b2, 0, "r", 1, "r");
    auto rr = b2.index({"r", "r"});
    CHECK(std::abs(prr(rr, rr) - Complex(1, 0)) < 1e-15);
    CHECK(prr.cwiseAbs().sum() == doctest::Approx(1.0));
    CHECK((prr * prr - prr).norm() < 1e-14);
    CHECK(is_hermitian(prr));
    CHECK_THROWS_AS(pair_projector(b2, 0, "r", 0, "r"), std::invalid_argument);

    auto b3 = three_three_level();
    Operator sum = Operator::Zero(b3.dim(), b3.dim());
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) sum += pair_projector(b3, i, "r", j, "r");
    State rrr = ket(b3, {"r", "r", "r"});
    CHECK((sum * rrr - 3.0 * rrr).norm() < 1e-14);
}

TEST_CASE("kron conventions") {
    Operator i2 = Operator::Identity(2, 2);
    Operator i3 = Operator::Identity(3, 3);
    CHECK((kron(i2, i3) - Operator::Identity(6, 6)).norm() < 1e-15);

    Operator a = random_operator(2, 1), b = random_operator(3, 2);
    Operator c = random_operator(2, 3), d = random_operator(3, 4);
    CHECK((kron(a, b) * kron(c, d) - kron(a * c, b * d)).norm() < 1e-12);
    CHECK(std::abs(kron(a, b).trace() - a.trace() * b.trace()) < 1e-12);
    CHECK_THROWS_AS(kron(random_operator(100, 5), random_operator(100, 6)),
                    std::length_error);
}

TEST_CASE("kron ordering matches basis ordering") {
    auto b = two_three_level();
    Operator p1 = Operator::Zero(3, 3);
    p1(2, 1) = 1;  // |r><1| on a single site
    CHECK((kron(p1, Operator::Identity(3, 3)) - site_operator(b, 0, "r", "1")).norm() <
          1e-15);
    CHECK((kron(Operator::Identity(3, 3), p1) - site_operator(b, 1, "r", "1")).norm() <
          1e-15);
}

TEST_CASE("density-matrix and pure-state validation") {
    Operator rho = Operator::Zero(2, 2);
    rho(0, 0) = 0.5;
    rho(1, 1) = 0.5;
    CHECK_NOTHROW(check_density_matrix(rho));
    rho(1, 1) = 0.6;  // trace 1.1
    CHECK_THROWS_AS(check_density_matrix(rho), std::invalid_argument);
    rho(1, 1) = 0.5;
    rho(0, 1) = Complex(0, 0.4);  // not Hermitian
    CHECK_THROWS_AS(check_density_matrix(rho), std::invalid_argument);
    rho(0, 1) = 0.7;  // Hermitian but indefinite
    rho(1, 0) = 0.7;
    CHECK_THROWS_AS(check_density_matrix(rho), std::invalid_argument);

    State psi = State::Zero(2);
    psi(0) = 1;
    CHECK_NOTHROW(check_pure_state(psi));
    psi(0) = 0.9;
    CHECK_THROWS_AS(check_pure_state(psi), std::invalid_argument);
}

}  // namespace
