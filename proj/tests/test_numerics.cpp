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

#include "lindsim/numerics.hpp"
#include "oracles.hpp"

using namespace lindsim;

TEST_CASE("kron matches index-arithmetic reference") {
    std::mt19937_64 rng(11);
    const ComplexMatrix a = oracle::random_matrix(rng, 3);
    const ComplexMatrix b = oracle::random_matrix(rng, 2);
    CHECK((kron(a, b) - oracle::kron(a, b)).norm() == 0.0);
}

TEST_CASE("kron of identities is the identity") {
    const ComplexMatrix k = kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3));
    CHECK(k.isIdentity(0.0));
}

TEST_CASE("expm agrees with a Taylor reference") {
    std::mt19937_64 rng(12);
    const ComplexMatrix a = 0.7 * oracle::random_matrix(rng, 5);
    const ComplexMatrix ref = oracle::expm_taylor(a);
    CHECK((expm(a) - ref).norm() <= 1e-12 * ref.norm());
}

TEST_CASE("expm of the zero matrix and of a diagonal") {
    CHECK(expm(ComplexMatrix::Zero(3, 3)).isIdentity(0.0));
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = -1.0;
    d(1, 1) = Complex(0.0, M_PI);
    const ComplexMatrix e = expm(d);
    CHECK(std::abs(e(0, 0) - std::exp(-1.0)) < 1e-15);
    CHECK(std::abs(e(1, 1) + 1.0) < 1e-14);
}

TEST_CASE("expm rejects non-finite input") {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(expm(a), NumericError);
}

TEST_CASE("spectral norm equals the largest singular value") {
    std::mt19937_64 rng(13);
    for (int rows : {1, 4, 7}) {
        const ComplexMatrix a = oracle::random_matrix(rng, 7).topRows(rows);
        CHECK(spectral_norm(a) == doctest::Approx(oracle::norm2(a)).epsilon(1e-12));
    }
    CHECK(spectral_norm(ComplexMatrix::Zero(3, 3)) == 0.0);
}

TEST_CASE("eig_general reproduces A V = V Λ") {
    std::mt19937_64 rng(14);
    const ComplexMatrix a = oracle::random_matrix(rng, 6);
    const EigenDecomposition ed = eig_general(a);
    const ComplexMatrix lhs = a * ed.right_eigenvectors;
    const ComplexMatrix rhs = ed.right_eigenvectors * ed.eigenvalues.asDiagonal();
    CHECK((lhs - rhs).norm() < 1e-11 * a.norm());
}

TEST_CASE("eig_hermitian_values are ascending and real") {
    ComplexMatrix h(2, 2);
    h << 1.0, Complex(0, 1), Complex(0, -1), 1.0;
    const Eigen::VectorXd w = eig_hermitian_values(h);
    CHECK(w(0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(w(1) == doctest::Approx(2.0));
}

TEST_CASE("solve and singular detection") {
    std::mt19937_64 rng(15);
    const ComplexMatrix a = oracle::random_matrix(rng, 4);
    const ComplexMatrix b = oracle::random_matrix(rng, 4);
    CHECK((a * solve(a, b) - b).norm() < 1e-11);
    ComplexMatrix s = ComplexMatrix::Zero(3, 3);
    s(0, 0) = 1.0;
    CHECK_THROWS_AS(solve(s, b.topLeftCorner(3, 3)), SingularMatrixError);
}

TEST_CASE("tolerance set validates names and values") {
    Tolerances t;
    t.set("oracle_abs", 1e-6);
    CHECK(t.get("oracle_abs") == 1e-6);
    CHECK_THROWS_AS(t.set("nonsense", 1.0), ValidationError);
    t.zero_eig_rel = -1.0;
    CHECK_THROWS_AS(t.validate(), ValidationError);
    CHECK(Tolerances::names().size() == 4);
}

TEST_CASE("error hierarchy") {
    CHECK_THROWS_AS(throw SingularMatrixError("x"), NumericError);
    CHECK_THROWS_AS(throw DimensionError("x"), ValidationError);
    CHECK_THROWS_AS(throw ConvergenceError("x"), Error);
}

TEST_CASE("hermiticity defect") {
    std::mt19937_64 rng(16);
    CHECK(hermiticity_defect(oracle::random_hermitian(rng, 4)) == 0.0);
    CHECK(hermiticity_defect(oracle::random_matrix(rng, 4)) > 0.1);
}
