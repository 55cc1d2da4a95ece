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

#pragma once

#include <cstddef>
#include <vector>

#include "lindsim/numerics.hpp"

namespace lindsim {

/// Ordered tensor product of subsystems. Factor 0 is the leftmost Kronecker factor.
class HilbertSpace {
  public:
    HilbertSpace() = default;
    explicit HilbertSpace(std::vector<std::size_t> factors);

    const std::vector<std::size_t>& factors() const { return factors_; }
    std::size_t total_dim() const { return total_dim_; }
    std::size_t num_factors() const { return factors_.size(); }

    /// Concatenation: this ⊗ other.
    HilbertSpace tensor(const HilbertSpace& other) const;

    bool operator==(const HilbertSpace&) const = default;

  private:
    std::vector<std::size_t> factors_;
    std::size_t total_dim_ = 0;
};

/// A square matrix bound to the space it acts on.
class Operator {
  public:
    Operator() = default;
    Operator(HilbertSpace space, ComplexMatrix matrix);

    const HilbertSpace& space() const { return space_; }
    const ComplexMatrix& matrix() const { return matrix_; }
    std::size_t dim() const { return space_.total_dim(); }

    Operator adjoint() const { return {space_, matrix_.adjoint()}; }
    bool is_hermitian(double tol) const;

    static Operator identity(const HilbertSpace& space);
    static Operator zero(const HilbertSpace& space);

    Operator& operator+=(const Operator& o);
    Operator& operator-=(const Operator& o);
    Operator& operator*=(Complex c);

    friend Operator operator+(Operator a, const Operator& b) { return a += b; }
    friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
    friend Operator operator*(Complex c, Operator a) { return a *= c; }
    friend Operator operator*(Operator a, Complex c) { return a *= c; }
    friend Operator operator*(const Operator& a, const Operator& b);

  private:
    HilbertSpace space_;
    ComplexMatrix matrix_;
};

/// Tensor product a ⊗ b on the concatenated space.
Operator tensor(const Operator& a, const Operator& b);

enum class PauliKind { X, Y, Z, Plus, Minus };
enum class CollectiveKind { X, Y, Z, Plus, Minus };
enum class BosonKind { Annihilate, Create, Number };

/// Basis {|0⟩, |1⟩} with σ⁻ = |0⟩⟨1|, so |0⟩ is the amplitude-damping steady state.
/// x, y, z are the standard Pauli matrices in this basis.
Operator pauli(PauliKind which);

/// Σ_k σ^α acting on qubit k of an n-qubit register.
Operator collective_spin(std::size_t n_qubits, CollectiveKind which);

/// Truncated ladder operators on span{|0⟩, …, |cutoff−1⟩}.
Operator boson(std::size_t cutoff, BosonKind which);

/// 1 ⊗ … ⊗ op ⊗ … ⊗ 1 with op at position `site` of `space`.
Operator embed(const Operator& op, std::size_t site, const HilbertSpace& space);

/// Projector |k⟩⟨k| on a single factor of dimension `dim`.
Operator basis_projector(std::size_t dim, std::size_t k);

}  // namespace lindsim
