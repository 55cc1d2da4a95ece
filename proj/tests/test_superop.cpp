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

#include <sstream>

#include "lindsim/superop.hpp"
#include "oracles.hpp"

using namespace lindsim;

TEST_CASE("vectorize is column stacking and round-trips") {
    const HilbertSpace s({3});
    ComplexMatrix m(3, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m(i, j) = Complex(i, 10 * j);
    }
    const ComplexVector v = vectorize(Operator(s, m));
    CHECK(v(1 + 3 * 2) == m(1, 2));
    CHECK((devectorize(v, s).matrix() - m).norm() == 0.0);
}

TEST_CASE("hamiltonian superoperator matches −i[H, X] column by column") {
    std::mt19937_64 rng(31);
    const HilbertSpace s({3});
    const ComplexMatrix h = oracle::random_hermitian(rng, 3);
    const ComplexMatrix ref =
        oracle::matrix_of([&](const oracle::Mat& x) -> oracle::Mat { return Complex(0, -1) * oracle::commutator(h, x); }, 3);
    CHECK((hamiltonian_superop(Operator(s, h)).matrix() - ref).norm() < 1e-14);
}

TEST_CASE("hamiltonian superoperator rejects non-Hermitian input unless asked") {
    std::mt19937_64 rng(32);
    const Operator a(HilbertSpace({2}), oracle::random_matrix(rng, 2));
    CHECK_THROWS_AS(hamiltonian_superop(a), ValidationError);
    CHECK_NOTHROW(hamiltonian_superop(a, {}, HermiticityCheck::Skip));
}

TEST_CASE("dissipator matches the direct formula") {
    std::mt19937_64 rng(33);
    const HilbertSpace s({2, 2});
    const ComplexMatrix l = oracle::random_matrix(rng, 4);
    const ComplexMatrix ref = oracle::matrix_of([&](const oracle::Mat& x) -> oracle::Mat { return oracle::dissipate(l, 0.7, x); }, 4);
    CHECK((dissipator(Operator(s, l), 0.7).matrix() - ref).norm() < 1e-13);
    CHECK_THROWS_AS(dissipator(Operator(s, l), -0.1), ValidationError);
}

TEST_CASE("liouvillian of a spec and its trace preservation") {
    std::mt19937_64 rng(34);
    const HilbertSpace s({3});
    const ComplexMatrix h = oracle::random_hermitian(rng, 3);
    const ComplexMatrix l1 = oracle::random_matrix(rng, 3);
    const ComplexMatrix l2 = oracle::random_matrix(rng, 3);
    const LindbladSpec spec{s, Operator(s, h), {{Operator(s, l1), 0.3}, {Operator(s, l2), 1.1}}};
    const SuperOperator l = liouvillian(spec);
    const ComplexMatrix ref = oracle::lindblad_matrix(h, {{l1, 0.3}, {l2, 1.1}});
    CHECK((l.matrix() - ref).norm() < 1e-13);
    const ComplexMatrix rho = oracle::random_hermitian(rng, 3);
    CHECK(std::abs(trace_of_image(l, Operator(s, rho))) < 1e-13);
}

TEST_CASE("spec validation") {
    const HilbertSpace s({2});
    LindbladSpec bad_rate{s, Operator::zero(s), {{pauli(PauliKind::Minus), -1.0}}};
    CHECK_THROWS_AS(bad_rate.validate({}), ValidationError);
    LindbladSpec bad_h{s, pauli(PauliKind::Minus), {}};
    CHECK_THROWS_AS(bad_h.validate({}), ValidationError);
    LindbladSpec wrong_space{s, Operator::zero(s), {{Operator::identity(HilbertSpace({3})), 1.0}}};
    CHECK_THROWS(wrong_space.validate({}));
}

TEST_CASE("apply and composition follow the matrix convention") {
    std::mt19937_64 rng(35);
    const HilbertSpace s({2});
    const SuperOperator a = dissipator(Operator(s, oracle::random_matrix(rng, 2)), 1.0);
    const SuperOperator b = hamiltonian_superop(Operator(s, oracle::random_hermitian(rng, 2)));
    const Operator x(s, oracle::random_matrix(rng, 2));
    CHECK(((a * b).apply(x).matrix() - a.apply(b.apply(x)).matrix()).norm() < 1e-13);
    CHECK((a.apply(x).matrix() - oracle::apply_matrix(a.matrix(), x.matrix())).norm() < 1e-14);
}

TEST_CASE("amplitude damping propagator is CPTP with Choi rank 2") {
    const HilbertSpace s({2});
    const SuperOperator l = dissipator(pauli(PauliKind::Minus), 1.0);
    for (double t : {0.1, 1.0, 10.0}) {
        const CptpReport r = check_cptp_propagator(l, t);
        CHECK(r.trace_defect < 1e-14);
        CHECK(r.choi_min_eigenvalue > -1e-14);
        CHECK(r.choi_rank == 2);
    }
    // Unitary evolution has a rank-one Choi matrix.
    CHECK(check_cptp_propagator(hamiltonian_superop(pauli(PauliKind::X)), 0.3).choi_rank == 1);
}

TEST_CASE("a non-positive map is detected") {
    // Transpose map: trace preserving but not completely positive.
    const ComplexMatrix t = oracle::matrix_of([](const oracle::Mat& x) -> oracle::Mat { return oracle::Mat(x.transpose()); }, 2);
    const ComplexMatrix choi = choi_matrix(t, 2);
    CHECK(eig_hermitian_values(choi)(0) == doctest::Approx(-1.0));
}

TEST_CASE("superop_tensor acts factorwise") {
    std::mt19937_64 rng(36);
    const ComplexMatrix a = oracle::matrix_of(
        [&](const oracle::Mat& x) -> oracle::Mat { return oracle::dissipate(oracle::sigma_minus(), 1.3, x); }, 2);
    const ComplexMatrix hb = oracle::random_hermitian(rng, 3);
    const ComplexMatrix b =
        oracle::matrix_of([&](const oracle::Mat& y) -> oracle::Mat { return Complex(0, -1) * oracle::commutator(hb, y); }, 3);
    const ComplexMatrix ab = superop_tensor(a, 2, b, 3);
    const ComplexMatrix x = oracle::random_matrix(rng, 2);
    const ComplexMatrix y = oracle::random_matrix(rng, 3);
    const ComplexMatrix lhs = oracle::apply_matrix(ab, oracle::kron(x, y));
    const ComplexMatrix rhs = oracle::kron(oracle::apply_matrix(a, x), oracle::apply_matrix(b, y));
    CHECK((lhs - rhs).norm() < 1e-12);
}

TEST_CASE("partial trace over the trailing factor") {
    std::mt19937_64 rng(37);
    const ComplexMatrix x = oracle::random_matrix(rng, 6);
    CHECK((partial_trace_right(x, 2, 3) - oracle::partial_trace_b(x, 2, 3)).norm() < 1e-14);
}

TEST_CASE("superoperator CSV header and layout") {
    std::ostringstream out;
    write_superop_csv(dissipator(pauli(PauliKind::Minus), 1.0), out);
    const std::string text = out.str();
    CHECK(text.rfind("# superoperator dim=4", 0) == 0);
    CHECK(text.find("column-stacking") != std::string::npos);
    std::size_t lines = 0;
    for (char c : text) lines += c == '\n';
    CHECK(lines == 5);
}
