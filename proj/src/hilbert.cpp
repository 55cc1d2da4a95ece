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

#include "lindsim/hilbert.hpp"

#include <cmath>
#include <string>

namespace lindsim {

HilbertSpace::HilbertSpace(std::vector<std::size_t> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) {
        throw ValidationError("HilbertSpace: at least one factor is required");
    }
    total_dim_ = 1;
    for (std::size_t f : factors_) {
        if (f < 2) {
            throw ValidationError("HilbertSpace: factor dimensions must be >= 2, got " +
                                  std::to_string(f));
        }
        total_dim_ *= f;
    }
}

HilbertSpace HilbertSpace::tensor(const HilbertSpace& other) const {
    std::vector<std::size_t> f = factors_;
    f.insert(f.end(), other.factors_.begin(), other.factors_.end());
    return HilbertSpace(std::move(f));
}

Operator::Operator(HilbertSpace space, ComplexMatrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
    const auto d = static_cast<Eigen::Index>(space_.total_dim());
    if (matrix_.rows() != d || matrix_.cols() != d) {
        throw DimensionError("Operator: matrix is " + std::to_string(matrix_.rows()) + "x" +
                             std::to_string(matrix_.cols()) + " but the space has dimension " +
                             std::to_string(d));
    }
    if (!matrix_.allFinite()) {
        throw ValidationError("Operator: matrix has non-finite entries");
    }
}

bool Operator::is_hermitian(double tol) const {
    return hermiticity_defect(matrix_) <= tol;
}

Operator Operator::identity(const HilbertSpace& space) {
    const auto d = static_cast<Eigen::Index>(space.total_dim());
    return {space, ComplexMatrix::Identity(d, d)};
}

Operator Operator::zero(const HilbertSpace& space) {
    const auto d = static_cast<Eigen::Index>(space.total_dim());
    return {space, ComplexMatrix::Zero(d, d)};
}

Operator& Operator::operator+=(const Operator& o) {
    if (!(space_ == o.space_)) throw DimensionError("Operator +: spaces differ");
    matrix_ += o.matrix_;
    return *this;
}

Operator& Operator::operator-=(const Operator& o) {
    if (!(space_ == o.space_)) throw DimensionError("Operator -: spaces differ");
    matrix_ -= o.matrix_;
    return *this;
}

Operator& Operator::operator*=(Complex c) {
    matrix_ *= c;
    return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
    if (!(a.space() == b.space())) throw DimensionError("Operator *: spaces differ");
    return {a.space(), a.matrix() * b.matrix()};
}

Operator tensor(const Operator& a, const Operator& b) {
    return {a.space().tensor(b.space()), kron(a.matrix(), b.matrix())};
}

Operator pauli(PauliKind which) {
    const HilbertSpace qubit({2});
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    switch (which) {
        case PauliKind::X:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case PauliKind::Y:
            m(0, 1) = -kI;
            m(1, 0) = kI;
            break;
        case PauliKind::Z:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
        case PauliKind::Plus:
            m(1, 0) = 1.0;
            break;
        case PauliKind::Minus:
            m(0, 1) = 1.0;
            break;
    }
    return {qubit, m};
}

Operator collective_spin(std::size_t n_qubits, CollectiveKind which) {
    if (n_qubits < 1) throw ValidationError("collective_spin: n_qubits must be >= 1");
    const HilbertSpace reg(std::vector<std::size_t>(n_qubits, 2));
    PauliKind kind{};
    switch (which) {
        case CollectiveKind::X: kind = PauliKind::X; break;
        case CollectiveKind::Y: kind = PauliKind::Y; break;
        case CollectiveKind::Z: kind = PauliKind::Z; break;
        case CollectiveKind::Plus: kind = PauliKind::Plus; break;
        case CollectiveKind::Minus: kind = PauliKind::Minus; break;
    }
    const Operator single = pauli(kind);
    Operator total = Operator::zero(reg);
    for (std::size_t k = 0; k < n_qubits; ++k) {
        total += embed(single, k, reg);
    }
    return total;
}

Operator boson(std::size_t cutoff, BosonKind which) {
    if (cutoff < 2) throw ValidationError("boson: cutoff must be >= 2");
    const HilbertSpace mode({cutoff});
    const auto d = static_cast<Eigen::Index>(cutoff);
    ComplexMatrix a = ComplexMatrix::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    switch (which) {
        case BosonKind::Annihilate:
            return {mode, a};
        case BosonKind::Create:
            return {mode, a.adjoint()};
        case BosonKind::Number: {
            ComplexMatrix n = ComplexMatrix::Zero(d, d);
            for (Eigen::Index k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
            return {mode, n};
        }
    }
    return {mode, a};
}

Operator embed(const Operator& op, std::size_t site, const HilbertSpace& space) {
    const auto& f = space.factors();
    if (site >= f.size()) {
        throw DimensionError("embed: site " + std::to_string(site) + " out of range for " +
                             std::to_string(f.size()) + " factors");
    }
    if (op.dim() != f[site]) {
        throw DimensionError("embed: operator dimension " + std::to_string(op.dim()) +
                             " does not match factor " + std::to_string(site) + " of dimension " +
                             std::to_string(f[site]));
    }
    std::size_t left = 1;
    for (std::size_t k = 0; k < site; ++k) left *= f[k];
    const std::size_t right = space.total_dim() / (left * f[site]);
    const auto l = static_cast<Eigen::Index>(left);
    const auto r = static_cast<Eigen::Index>(right);
    ComplexMatrix m =
        kron(kron(ComplexMatrix::Identity(l, l), op.matrix()), ComplexMatrix::Identity(r, r));
    return {space, std::move(m)};
}

Operator basis_projector(std::size_t dim, std::size_t k) {
    if (k >= dim) throw DimensionError("basis_projector: level out of range");
    const auto d = static_cast<Eigen::Index>(dim);
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    return {HilbertSpace({dim}), m};
}

}  // namespace lindsim
