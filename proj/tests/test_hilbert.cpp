// Copyright 2026 The lindsim Authors
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

#include <doctest.h>

#include "lindsim/hilbert.hpp"
#include "oracles.hpp"

using namespace lindsim;

TEST_CASE("space dimensions and tensor") {
    const HilbertSpace a({2, 3});
    CHECK(a.total_dim() == 6);
    const HilbertSpace b = a.tensor(HilbertSpace({4}));
    CHECK(b.num_factors() == 3);
    CHECK(b.total_dim() == 24);
    CHECK_THROWS_AS(HilbertSpace({1}), ValidationError);
    CHECK_THROWS_AS(HilbertSpace(std::vector<std::size_t>{}), ValidationError);
}

TEST_CASE("operator construction validates shape and finiteness") {
    const HilbertSpace q({2});
    CHECK_THROWS_AS(Operator(q, ComplexMatrix::Zero(3, 3)), DimensionError);
    ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Operator(q, bad), ValidationError);
    CHECK_THROWS_AS(Operator::identity(q) + Operator::identity(HilbertSpace({3})), DimensionError);
}

TEST_CASE("pauli algebra") {
    const ComplexMatrix x = pauli(PauliKind::X).matrix();
    const ComplexMatrix y = pauli(PauliKind::Y).matrix();
    const ComplexMatrix z = pauli(PauliKind::Z).matrix();
    CHECK((x * y - Complex(0, 1) * z).norm() == 0.0);
    CHECK((x * x).isIdentity(0.0));
    const ComplexMatrix sm = pauli(PauliKind::Minus).matrix();
    const ComplexMatrix sp = pauli(PauliKind::Plus).matrix();
    CHECK((sm - oracle::sigma_minus()).norm() == 0.0);
    CHECK((sp - sm.adjoint()).norm() == 0.0);
    // σ⁻ lowers |1⟩ to |0⟩; x = σ⁺ + σ⁻.
    CHECK((sp + sm - x).norm() == 0.0);
}

TEST_CASE("collective spin is a sum of embedded single-site operators") {
    const Operator sm = collective_spin(3, CollectiveKind::Minus);
    CHECK(sm.dim() == 8);
    ComplexMatrix ref = ComplexMatrix::Zero(8, 8);
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    const ComplexMatrix m = oracle::sigma_minus();
    ref += oracle::kron(oracle::kron(m, id), id);
    ref += oracle::kron(oracle::kron(id, m), id);
    ref += oracle::kron(oracle::kron(id, id), m);
    CHECK((sm.matrix() - ref).norm() == 0.0);
    // [S⁺, S⁻] = −S^z with σ^z = diag(1, −1) and σ⁻ = |0⟩⟨1|.
    const Operator sp = collective_spin(3, CollectiveKind::Plus);
    const Operator sz = collective_spin(3, CollectiveKind::Z);
    CHECK((oracle::commutator(sp.matrix(), sm.matrix()) + sz.matrix()).norm() < 1e-14);
}

TEST_CASE("boson ladder") {
    const Operator a = boson(5, BosonKind::Annihilate);
    const Operator ad = boson(5, BosonKind::Create);
    const Operator n = boson(5, BosonKind::Number);
    CHECK((ad.matrix() - a.matrix().adjoint()).norm() == 0.0);
    CHECK(((ad * a).matrix() - n.matrix()).norm() < 1e-14);
    for (int k = 0; k < 5; ++k) CHECK(n.matrix()(k, k).real() == doctest::Approx(k));
    // [a, a†] = 1 except in the truncated top level.
    const ComplexMatrix c = oracle::commutator(a.matrix(), ad.matrix());
    for (int k = 0; k < 4; ++k) CHECK(c(k, k).real() == doctest::Approx(1.0));
    CHECK(c(4, 4).real() == doctest::Approx(-4.0));
    CHECK_THROWS_AS(boson(1, BosonKind::Number), ValidationError);
}

TEST_CASE("embed places the operator on its factor") {
    const HilbertSpace s({2, 3, 2});
    std::mt19937_64 rng(21);
    const Operator op(HilbertSpace({3}), oracle::random_matrix(rng, 3));
    const ComplexMatrix ref =
        oracle::kron(oracle::kron(ComplexMatrix::Identity(2, 2), op.matrix()), ComplexMatrix::Identity(2, 2));
    CHECK((embed(op, 1, s).matrix() - ref).norm() == 0.0);
    CHECK_THROWS_AS(embed(op, 0, s), DimensionError);
    CHECK_THROWS_AS(embed(op, 3, s), DimensionError);
}

TEST_CASE("tensor product of operators") {
    const Operator t = tensor(pauli(PauliKind::X), boson(3, BosonKind::Annihilate));
    CHECK(t.space() == HilbertSpace({2, 3}));
    CHECK((t.matrix() - oracle::kron(oracle::sigma_x(), boson(3, BosonKind::Annihilate).matrix())).norm() == 0.0);
}

TEST_CASE("hermiticity and basis projectors") {
    CHECK(pauli(PauliKind::Y).is_hermitian(0.0));
    CHECK_FALSE(pauli(PauliKind::Minus).is_hermitian(1e-3));
    const Operator p = basis_projector(4, 2);
    CHECK(p.matrix()(2, 2) == Complex(1.0));
    CHECK(p.matrix().norm() == 1.0);
    CHECK_THROWS_AS(basis_projector(4, 4), DimensionError);
}
